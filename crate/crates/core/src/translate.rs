//! First-order safety translation and TPTP export.
//!
//! The safety theory introduces one fresh predicate per subformula
//! occurrence and sign, axiomatized so that a satisfiable expansion of a
//! structure witnesses exactly that Eloise lacks a winning strategy in
//! the unbounded game.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::game::Sign;
use crate::structures::{tarski_eval, Assignment, EvalError, ModelError, Structure};
use crate::syntax::{resolve_reference, Formula, OccPath, Vocabulary};

#[derive(Debug, Error)]
pub enum TranslateError {
    #[error("formula is not pure first-order")]
    NotFo,
    #[error("TPTP names collide after case folding: `{0}` and `{1}`")]
    NameCollision(String, String),
    #[error("expansion search cap exceeded: {bits} fresh predicate bits against a cap of {cap}")]
    BitCapExceeded { bits: usize, cap: usize },
    #[error("expansion search cap exceeded: domain size {size} against a cap of {cap}")]
    DomainCapExceeded { size: usize, cap: usize },
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Eval(#[from] EvalError),
}

/// First-order axiom set over fresh safety predicates, one per
/// subformula occurrence and sign.
#[derive(Debug, Clone)]
pub struct SafetyTheory {
    /// Original vocabulary extended with the fresh predicates.
    pub vocab: Vocabulary,
    /// The fresh predicates only.
    pub fresh: Vocabulary,
    /// Closed axioms, one per occurrence/sign pair except free claims.
    pub axioms: Vec<Formula>,
    /// Existential sentence for the root occurrence with positive sign.
    pub root_sentence: Formula,
    /// Names of the fresh predicates by occurrence and sign.
    pub predicates: BTreeMap<(OccPath, Sign), String>,
    /// The shared variable vector (every variable of the source formula).
    pub vars: Vec<String>,
}

impl SafetyTheory {
    /// The universal second-order reading: the source formula is
    /// equivalent to universally quantifying the fresh predicates over
    /// the negated theory.
    pub fn uso_comment(&self) -> String {
        let preds: Vec<&str> = self.fresh.iter().map(|(n, _)| n).collect();
        format!(
            "forall relations {}: ~(axioms & {})",
            preds.join(", "),
            self.root_sentence
        )
    }
}

fn pred_name(path: &OccPath, sign: Sign) -> String {
    let tag = if sign == Sign::Plus { "P" } else { "M" };
    if path.is_root() {
        format!("N{tag}")
    } else {
        let steps: Vec<String> = path.steps().iter().map(|s| s.to_string()).collect();
        format!("N{tag}_{}", steps.join("_"))
    }
}

fn implies(lhs: Formula, rhs: Formula) -> Formula {
    Formula::or(Formula::not(lhs), rhs)
}

fn forall_closure(vars: &[String], f: Formula) -> Formula {
    let mut out = f;
    for v in vars.iter().rev() {
        out = Formula::Forall(v.clone(), Box::new(out));
    }
    out
}

fn exists_closure(vars: &[String], f: Formula) -> Formula {
    let mut out = f;
    for v in vars.iter().rev() {
        out = Formula::Exists(v.clone(), Box::new(out));
    }
    out
}

/// Emits the safety theory of `f`: per-connective axioms over fresh
/// predicates encoding positions from which Eloise cannot force a win,
/// plus the initial sentence for the root.
pub fn safety_theory(f: &Formula) -> SafetyTheory {
    let vars: Vec<String> = f.all_variables().into_iter().collect();
    let occs = f.occurrences();
    let mut fresh = Vocabulary::new();
    let mut predicates = BTreeMap::new();
    for (path, _) in &occs {
        for sign in [Sign::Plus, Sign::Minus] {
            let name = pred_name(path, sign);
            fresh
                .declare(&name, vars.len())
                .expect("fresh names are valid and unique");
            predicates.insert((path.clone(), sign), name);
        }
    }
    let n_atom = |path: &OccPath, sign: Sign| -> Formula {
        Formula::Atom(predicates[&(path.clone(), sign)].clone(), vars.clone())
    };

    let mut axioms = Vec::new();
    for (path, node) in &occs {
        for sign in [Sign::Plus, Sign::Minus] {
            let head = n_atom(path, sign);
            let body = match node {
                // Abelard survives an atom only if it does not decide
                // against him on the spot.
                Formula::Falsum | Formula::Atom(..) | Formula::Equal(..) => {
                    let atom = (*node).clone();
                    match sign {
                        Sign::Plus => Formula::not(atom),
                        Sign::Minus => atom,
                    }
                }
                Formula::Claim(_) => match resolve_reference(f, path).expect("valid path") {
                    Some(rp) => n_atom(&rp, sign),
                    None => continue, // free claims are draws: unconstrained
                },
                Formula::Not(_) => n_atom(&path.child(0), sign.flip()),
                Formula::And(..) | Formula::Or(..) => {
                    let left = n_atom(&path.child(0), sign);
                    let right = n_atom(&path.child(1), sign);
                    let abelard_moves = matches!(node, Formula::And(..)) == (sign == Sign::Plus);
                    if abelard_moves {
                        Formula::or(left, right)
                    } else {
                        Formula::and(left, right)
                    }
                }
                Formula::Exists(x, _) | Formula::Forall(x, _) => {
                    let child = n_atom(&path.child(0), sign);
                    let abelard_moves = matches!(node, Formula::Forall(..)) == (sign == Sign::Plus);
                    if abelard_moves {
                        Formula::Exists(x.clone(), Box::new(child))
                    } else {
                        Formula::Forall(x.clone(), Box::new(child))
                    }
                }
                Formula::Labeled(..) => n_atom(&path.child(0), sign),
            };
            axioms.push(forall_closure(&vars, implies(head, body)));
        }
    }
    let root_sentence = exists_closure(&vars, n_atom(&OccPath::root(), Sign::Plus));
    let mut vocab = Vocabulary::new();
    for (name, arity) in f.predicates() {
        vocab
            .declare(&name, arity.expect("consistent arities"))
            .expect("valid name");
    }
    vocab.merge(&fresh).expect("fresh names are disjoint");
    SafetyTheory {
        vocab,
        fresh,
        axioms,
        root_sentence,
        predicates,
        vars,
    }
}

const DOMAIN_CAP: usize = 2;
const BIT_CAP: usize = 12;

/// Exhaustive expansion search at desk scale: true iff some expansion of
/// `m` by the fresh predicates satisfies every axiom and the root
/// sentence — equivalently, iff Eloise has no winning strategy in the
/// unbounded game on `m`.
pub fn verify_safety_small(f: &Formula, m: &Structure) -> Result<bool, TranslateError> {
    if m.domain_size() > DOMAIN_CAP {
        return Err(TranslateError::DomainCapExceeded {
            size: m.domain_size(),
            cap: DOMAIN_CAP,
        });
    }
    let theory = safety_theory(f);
    let k = theory.vars.len();
    let tuples_per_pred = m.domain_size().pow(k as u32);
    let bits = theory.fresh.len() * tuples_per_pred;
    if bits > BIT_CAP {
        return Err(TranslateError::BitCapExceeded { bits, cap: BIT_CAP });
    }

    // all tuples of the shared arity, in a fixed order
    let mut tuples: Vec<Vec<usize>> = vec![Vec::new()];
    for _ in 0..k {
        let mut next = Vec::new();
        for t in &tuples {
            for e in 0..m.domain_size() {
                let mut t2 = t.clone();
                t2.push(e);
                next.push(t2);
            }
        }
        tuples = next;
    }
    let slots: Vec<(String, Vec<usize>)> = theory
        .fresh
        .iter()
        .flat_map(|(name, _)| tuples.iter().map(move |t| (name.to_string(), t.clone())))
        .collect();

    let base = m.expand_vocab(&theory.fresh)?;
    let empty = Assignment::empty();
    'expansions: for mask in 0u64..(1u64 << bits) {
        let mut expanded = base.clone();
        for (i, (name, tuple)) in slots.iter().enumerate() {
            if mask & (1 << i) != 0 {
                expanded.insert_tuple(name, tuple.clone())?;
            }
        }
        if !tarski_eval(&expanded, &empty, &theory.root_sentence)? {
            continue;
        }
        for axiom in &theory.axioms {
            if !tarski_eval(&expanded, &empty, axiom)? {
                continue 'expansions;
            }
        }
        return Ok(true);
    }
    Ok(false)
}

/// Renders one `fof(name, role, …).` unit for a pure first-order formula,
/// universally closed over its free variables. Predicates are lowercased,
/// variables uppercased, `bot` becomes `$false`.
pub fn export_tptp(name: &str, role: &str, f: &Formula) -> Result<String, TranslateError> {
    if !f.is_fo() {
        return Err(TranslateError::NotFo);
    }
    // case-folding must stay injective on the used predicate names
    let mut folded: BTreeMap<String, String> = BTreeMap::new();
    for (p, _) in f.predicates() {
        let low = p.to_lowercase();
        if let Some(prev) = folded.get(&low) {
            if *prev != p {
                return Err(TranslateError::NameCollision(prev.clone(), p.clone()));
            }
        }
        folded.insert(low, p.clone());
    }
    let closed = {
        let mut out = f.clone();
        for v in f.free_variables().into_iter().rev() {
            out = Formula::Forall(v, Box::new(out));
        }
        out
    };
    let mut body = String::new();
    render_fof(&closed, &mut body);
    Ok(format!("fof({name}, {role}, {body})."))
}

fn render_fof(f: &Formula, out: &mut String) {
    match f {
        Formula::Falsum => out.push_str("$false"),
        Formula::Atom(p, args) => {
            out.push_str(&p.to_lowercase());
            if !args.is_empty() {
                out.push('(');
                for (i, a) in args.iter().enumerate() {
                    if i > 0 {
                        out.push(',');
                    }
                    out.push_str(&a.to_uppercase());
                }
                out.push(')');
            }
        }
        Formula::Equal(x, y) => {
            out.push_str(&x.to_uppercase());
            out.push_str(" = ");
            out.push_str(&y.to_uppercase());
        }
        Formula::Claim(_) | Formula::Labeled(..) => unreachable!("checked by export_tptp"),
        Formula::Not(c) => {
            out.push('~');
            if matches!(**c, Formula::Falsum | Formula::Atom(..)) {
                render_fof(c, out);
            } else {
                out.push('(');
                render_fof(c, out);
                out.push(')');
            }
        }
        Formula::And(..) | Formula::Or(..) => {
            let (a, b, op) = match f {
                Formula::And(a, b) => (a, b, " & "),
                Formula::Or(a, b) => (a, b, " | "),
                _ => unreachable!(),
            };
            out.push('(');
            render_fof(a, out);
            out.push_str(op);
            render_fof(b, out);
            out.push(')');
        }
        Formula::Exists(..) | Formula::Forall(..) => {
            // merge runs of the same quantifier: ![X,Y]: …
            let universal = matches!(f, Formula::Forall(..));
            let mut vars = Vec::new();
            let mut cur = f;
            while let (true, Formula::Forall(x, c)) | (false, Formula::Exists(x, c)) =
                (universal, cur)
            {
                vars.push(x.to_uppercase());
                cur = c;
            }
            out.push(if universal { '!' } else { '?' });
            out.push('[');
            out.push_str(&vars.join(","));
            out.push_str("]: ");
            // quantifier chains and binaries bring their own parentheses
            let self_delimited = matches!(
                cur,
                Formula::Exists(..) | Formula::Forall(..) | Formula::And(..) | Formula::Or(..)
            );
            if !self_delimited {
                out.push('(');
            }
            render_fof(cur, out);
            if !self_delimited {
                out.push(')');
            }
        }
    }
}
