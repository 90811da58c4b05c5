//! n-unfoldings, n-approximants, approximant-based evaluation, and the
//! semi-decision searches for satisfiability and validity.

use std::collections::BTreeSet;
use std::io::Write;
use std::process::Command;
use std::sync::atomic::{AtomicU64, Ordering};

use thiserror::Error;

use crate::game::{verdict_bounded, GameError, Outcome};
use crate::structures::{
    enumerate_assignments, enumerate_structures, tarski_eval, Assignment, EvalError, Structure,
};
use crate::syntax::{regularize, resolve_reference, Formula, OccPath, Vocabulary};
use crate::transform::{to_weak_nnf, TransformError};
use crate::translate::{export_tptp, TranslateError};

#[derive(Debug, Error)]
pub enum ApproxError {
    #[error("node budget exceeded while unfolding: {nodes} nodes against a budget of {budget}")]
    Budget { nodes: usize, budget: usize },
    #[error(transparent)]
    Eval(#[from] EvalError),
    #[error(transparent)]
    Game(#[from] GameError),
    #[error(transparent)]
    Transform(#[from] TransformError),
    #[error(transparent)]
    Translate(#[from] TranslateError),
    #[error("external prover failed: {0}")]
    Prover(String),
}

/// Size and truth report for one approximant level.
#[derive(Debug, Clone)]
pub struct ApproximantReport {
    pub n: u32,
    pub unfolding_size: usize,
    pub approximant: Formula,
    pub truth: Option<bool>,
}

/// The n-unfolding: the deterministic regularisation of `f`, with every
/// non-free claim replaced by a copy of its reference formula, n times
/// over. Free claims are untouched.
pub fn unfold(f: &Formula, n: u32, budget: usize) -> Result<Formula, ApproxError> {
    let mut cur = regularize(f);
    for _ in 0..n {
        let repls: Vec<(OccPath, Formula)> = cur
            .claim_occurrences()
            .into_iter()
            .filter_map(|(p, _)| {
                resolve_reference(&cur, &p)
                    .expect("valid path")
                    .map(|rp| (p, cur.subformula(&rp).expect("valid path").clone()))
            })
            .collect();
        if repls.is_empty() {
            break;
        }
        cur = cur
            .replace_many(&repls)
            .expect("claim paths are disjoint leaves");
        let nodes = cur.node_count();
        if nodes > budget {
            return Err(ApproxError::Budget { nodes, budget });
        }
    }
    Ok(cur)
}

/// The n-approximant: label operators erased from the n-unfolding, each
/// positive claim occurrence replaced by `bot` and each negative one by
/// `~bot`. The output is pure first-order.
pub fn approximant(f: &Formula, n: u32, budget: usize) -> Result<Formula, ApproxError> {
    let unfolded = unfold(f, n, budget)?;
    fn erase(f: &Formula, negations: usize) -> Formula {
        match f {
            Formula::Claim(_) => {
                if negations.is_multiple_of(2) {
                    Formula::Falsum
                } else {
                    Formula::not(Formula::Falsum)
                }
            }
            Formula::Labeled(_, c) => erase(c, negations),
            Formula::Not(c) => Formula::not(erase(c, negations + 1)),
            Formula::And(a, b) => Formula::and(erase(a, negations), erase(b, negations)),
            Formula::Or(a, b) => Formula::or(erase(a, negations), erase(b, negations)),
            Formula::Exists(x, c) => Formula::Exists(x.clone(), Box::new(erase(c, negations))),
            Formula::Forall(x, c) => Formula::Forall(x.clone(), Box::new(erase(c, negations))),
            atom => atom.clone(),
        }
    }
    let out = erase(&unfolded, 0);
    debug_assert!(out.is_fo());
    Ok(out)
}

/// Tarski truth of the n-approximant; by the approximant/game
/// correspondence this equals Eloise winning the n-bounded game.
pub fn eval_via_approximant(
    m: &Structure,
    s: &Assignment,
    f: &Formula,
    n: u32,
    budget: usize,
) -> Result<bool, ApproxError> {
    let phi = approximant(f, n, budget)?;
    Ok(tarski_eval(m, s, &phi)?)
}

#[derive(Debug, Clone)]
pub enum SatSearchResult {
    /// A bounded-semantics model: the approximant at level `n` holds.
    Witness {
        structure: Structure,
        assign: Assignment,
        n: u32,
    },
    /// Search space exhausted. This is *not* unsatisfiability.
    Exhausted,
}

fn search_vocab(f: &Formula) -> Vocabulary {
    let mut vocab = Vocabulary::new();
    for (name, arity) in f.predicates() {
        if let Some(a) = arity {
            vocab
                .declare(&name, a)
                .expect("parsed predicate names are valid");
        }
    }
    vocab
}

/// Scans `n ≤ max_n` and all structures with at most `max_domain`
/// elements for a bounded-semantics model of `f`; deterministic order
/// (smallest `n`, then enumeration order).
pub fn sat_search(
    f: &Formula,
    max_n: u32,
    max_domain: usize,
    budget: usize,
) -> Result<SatSearchResult, ApproxError> {
    let vocab = search_vocab(f);
    let free = f.free_variables();
    for n in 0..=max_n {
        let phi = approximant(f, n, budget)?;
        for m in enumerate_structures(&vocab, max_domain) {
            for s in enumerate_assignments(&m, &free) {
                if tarski_eval(&m, &s, &phi)? {
                    return Ok(SatSearchResult::Witness {
                        structure: m,
                        assign: s,
                        n,
                    });
                }
            }
        }
    }
    Ok(SatSearchResult::Exhausted)
}

/// How a validity was established.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ProofMethod {
    /// The configured external prover certified the approximant.
    ExternalProver,
    /// The negated approximant fell in the finite-model fragment (no
    /// existential under a universal after NNF) and exhaustive search up
    /// to its witness bound found no countermodel.
    FiniteFragment,
}

#[derive(Debug, Clone)]
pub enum ValidityResult {
    /// The approximant at level `n` is valid, hence `f` is valid under
    /// both semantics.
    Proved {
        n: u32,
        method: ProofMethod,
    },
    /// A finite structure where Eloise does not win the bounded game.
    Refuted {
        structure: Structure,
        assign: Assignment,
    },
    Unknown,
}

/// External first-order prover hook: a command template receiving a TPTP
/// file path (`{file}` placeholder, or appended as the last argument).
/// Output is interpreted through its `SZS status` line.
#[derive(Debug, Clone)]
pub struct ProverCmd {
    pub template: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ProverOutcome {
    Theorem,
    CounterSatisfiable,
    Unknown,
}

static TPTP_FILE_SEQ: AtomicU64 = AtomicU64::new(0);

impl ProverCmd {
    pub fn new(template: impl Into<String>) -> ProverCmd {
        ProverCmd {
            template: template.into(),
        }
    }

    /// Runs the prover on one `fof` unit. Missing `SZS status` output or a
    /// spawn failure is a prover error, never a silent `Unknown`.
    pub fn run(&self, fof: &str) -> Result<ProverOutcome, ApproxError> {
        let seq = TPTP_FILE_SEQ.fetch_add(1, Ordering::Relaxed);
        let path = std::env::temp_dir().join(format!("loopfo-{}-{}.p", std::process::id(), seq));
        let write_err = |e: std::io::Error| ApproxError::Prover(format!("writing {path:?}: {e}"));
        {
            let mut file = std::fs::File::create(&path).map_err(write_err)?;
            file.write_all(fof.as_bytes()).map_err(write_err)?;
        }
        let mut words: Vec<String> = self
            .template
            .split_whitespace()
            .map(|w| w.to_string())
            .collect();
        if words.is_empty() {
            return Err(ApproxError::Prover("empty prover command".into()));
        }
        let path_str = path.to_string_lossy().into_owned();
        let mut replaced = false;
        for w in &mut words {
            if w.contains("{file}") {
                *w = w.replace("{file}", &path_str);
                replaced = true;
            }
        }
        if !replaced {
            words.push(path_str.clone());
        }
        let output = Command::new(&words[0])
            .args(&words[1..])
            .output()
            .map_err(|e| ApproxError::Prover(format!("spawning `{}`: {e}", words[0])))?;
        let _ = std::fs::remove_file(&path);
        let stdout = String::from_utf8_lossy(&output.stdout);
        for line in stdout.lines() {
            if let Some(idx) = line.find("SZS status") {
                let status = line[idx + "SZS status".len()..]
                    .split_whitespace()
                    .next()
                    .unwrap_or("");
                return Ok(match status {
                    "Theorem" | "Unsatisfiable" => ProverOutcome::Theorem,
                    "CounterSatisfiable" | "Satisfiable" => ProverOutcome::CounterSatisfiable,
                    _ => ProverOutcome::Unknown,
                });
            }
        }
        Err(ApproxError::Prover(format!(
            "no SZS status line in prover output (exit: {})",
            output.status
        )))
    }
}

fn universal_closure(f: &Formula) -> Formula {
    let mut out = f.clone();
    for v in f.free_variables().into_iter().rev() {
        out = Formula::Forall(v, Box::new(out));
    }
    out
}

/// Decides validity of a closed first-order sentence when its negation
/// falls in the existential-universal fragment with a small witness
/// bound; `None` when outside the fragment or over the bound.
fn finite_fragment_validity(
    sentence: &Formula,
    max_witness: usize,
    budget: usize,
) -> Result<Option<bool>, ApproxError> {
    let negated = to_weak_nnf(&Formula::not(sentence.clone()), budget)?;
    // fragment check: no existential inside a universal
    fn scan(f: &Formula, under_forall: bool, exists: &mut usize) -> bool {
        match f {
            Formula::Exists(_, c) => {
                if under_forall {
                    return false;
                }
                *exists += 1;
                scan(c, under_forall, exists)
            }
            Formula::Forall(_, c) => scan(c, true, exists),
            _ => f.children().iter().all(|c| scan(c, under_forall, exists)),
        }
    }
    let mut exists = 0usize;
    if !scan(&negated, false, &mut exists) {
        return Ok(None);
    }
    let bound = exists.max(1);
    if bound > max_witness {
        return Ok(None);
    }
    let vocab = search_vocab(&negated);
    for m in enumerate_structures(&vocab, bound) {
        if tarski_eval(&m, &Assignment::empty(), &negated)? {
            return Ok(Some(false));
        }
    }
    Ok(Some(true))
}

/// Validity search: internal small-model refutation first, then an
/// approximant scan certified either by the external prover or, without
/// one, by the internal finite-model fragment check with witness bound 3.
///
/// Exhaustion never claims invalidity.
pub fn validity_search(
    f: &Formula,
    max_n: u32,
    max_domain: usize,
    prover: Option<&ProverCmd>,
    budget: usize,
) -> Result<ValidityResult, ApproxError> {
    let vocab = search_vocab(f);
    let free = f.free_variables();
    for m in enumerate_structures(&vocab, max_domain) {
        for s in enumerate_assignments(&m, &free) {
            if verdict_bounded(&m, &s, f)?.outcome != Outcome::EloiseWins {
                return Ok(ValidityResult::Refuted {
                    structure: m,
                    assign: s,
                });
            }
        }
    }
    for n in 0..=max_n {
        let phi = universal_closure(&approximant(f, n, budget)?);
        match prover {
            Some(cmd) => {
                let fof = export_tptp("approximant", "conjecture", &phi)?;
                match cmd.run(&fof)? {
                    ProverOutcome::Theorem => {
                        return Ok(ValidityResult::Proved {
                            n,
                            method: ProofMethod::ExternalProver,
                        })
                    }
                    ProverOutcome::CounterSatisfiable | ProverOutcome::Unknown => continue,
                }
            }
            None => {
                if finite_fragment_validity(&phi, 3, budget)? == Some(true) {
                    return Ok(ValidityResult::Proved {
                        n,
                        method: ProofMethod::FiniteFragment,
                    });
                }
            }
        }
    }
    Ok(ValidityResult::Unknown)
}

/// Per-level report used by the CLI `approx` command.
pub fn report(
    m: Option<(&Structure, &Assignment)>,
    f: &Formula,
    n: u32,
    budget: usize,
) -> Result<ApproximantReport, ApproxError> {
    let unfolding = unfold(f, n, budget)?;
    let phi = approximant(f, n, budget)?;
    let truth = match m {
        Some((m, s)) => Some(tarski_eval(m, s, &phi)?),
        None => None,
    };
    Ok(ApproximantReport {
        n,
        unfolding_size: unfolding.node_count(),
        approximant: phi,
        truth,
    })
}

/// Vocabulary inferred from a formula's own atoms.
pub fn inferred_vocab(f: &Formula) -> Vocabulary {
    search_vocab(f)
}

/// Free variables helper shared by the CLI.
pub fn free_vars(f: &Formula) -> BTreeSet<String> {
    f.free_variables()
}
