//! Constructive derivation builders: the normal-form entailments in both
//! directions, and the approximant-to-formula entailment. Every output is
//! meant to pass `check_derivation`; the test suites enforce it.

use thiserror::Error;

use super::{Derivation, RuleApplication, RuleId, RuleParams, Step};
use crate::approximants::{approximant, ApproxError};
use crate::syntax::{is_regular, resolve_reference, Formula, OccPath};
use crate::transform::{
    apply_nnf_step, regularize_steps, subst_shift, to_strong_nnf, Direction, DualityRule, NnfStep,
    TransformError,
};

#[derive(Debug, Error)]
pub enum BuildError {
    #[error("formula is not in strong negation normal form")]
    NotStrongNnf,
    #[error(transparent)]
    Transform(#[from] TransformError),
    #[error(transparent)]
    Approx(#[from] ApproxError),
    #[error("internal construction invariant failed: {0}")]
    Internal(String),
}

fn duality_rule_id(rule: DualityRule) -> RuleId {
    match rule {
        DualityRule::NotAnd => RuleId::DualNotAnd,
        DualityRule::NotOr => RuleId::DualNotOr,
        DualityRule::NotNot => RuleId::DualNotNot,
        DualityRule::NotForall => RuleId::DualNotForall,
        DualityRule::NotExists => RuleId::DualNotExists,
        DualityRule::NotLabel => RuleId::DualNotLabel,
    }
}

struct Emitter {
    steps: Vec<Step>,
    next_id: usize,
    prev: usize,
}

impl Emitter {
    fn new(premise: Formula) -> Emitter {
        Emitter {
            steps: vec![Step::Premise {
                id: 1,
                formula: premise,
            }],
            next_id: 2,
            prev: 1,
        }
    }

    fn infer(
        &mut self,
        rule: RuleId,
        path: Option<OccPath>,
        params: RuleParams,
        conclusion: Formula,
    ) {
        let id = self.next_id;
        self.steps.push(Step::Infer {
            id,
            app: RuleApplication {
                rule,
                inputs: vec![self.prev],
                path,
                params,
            },
            conclusion,
        });
        self.next_id += 1;
        self.prev = id;
    }

    fn finish(self) -> Derivation {
        Derivation { steps: self.steps }
    }
}

/// Forward realization of one normal-form rewrite step.
fn emit_forward(em: &mut Emitter, step: &NnfStep, after: &Formula) {
    match step {
        NnfStep::Duality { rule, path } => em.infer(
            duality_rule_id(*rule),
            Some(path.clone()),
            RuleParams::default(),
            after.clone(),
        ),
        NnfStep::DualIntro {
            path,
            fresh,
            claims,
        } => em.infer(
            RuleId::LDualIntro,
            Some(path.clone()),
            RuleParams {
                fresh: Some(*fresh),
                claims: claims.clone(),
                ..Default::default()
            },
            after.clone(),
        ),
        NnfStep::Rename { path, to, .. } => em.infer(
            RuleId::LCRename,
            Some(path.clone()),
            RuleParams {
                fresh: Some(*to),
                ..Default::default()
            },
            after.clone(),
        ),
        NnfStep::CopyElim { path, claims } => em.infer(
            RuleId::SubstCopyElim,
            Some(path.clone()),
            RuleParams {
                claims: claims.clone(),
                ..Default::default()
            },
            after.clone(),
        ),
        NnfStep::FreeDeneg { path, id } => {
            // two inferences: free-elim to a double negation, then the
            // double-negation duality
            let claim = path.child(0);
            let mid = em
                .steps
                .last()
                .map(|s| s.formula().clone())
                .expect("premise exists")
                .replace_at(&claim, Formula::not(Formula::Claim(*id)))
                .expect("claim path");
            em.infer(
                RuleId::CLFreeElim,
                Some(claim),
                RuleParams {
                    substs: vec![Formula::not(Formula::Claim(*id))],
                    ..Default::default()
                },
                mid,
            );
            em.infer(
                RuleId::DualNotNot,
                Some(path.clone()),
                RuleParams::default(),
                after.clone(),
            );
        }
    }
}

/// Reverse realization of one normal-form rewrite step, from its output
/// back to its input.
fn emit_reverse(em: &mut Emitter, step: &NnfStep, before: &Formula) {
    match step {
        NnfStep::Duality { rule, path } => em.infer(
            duality_rule_id(*rule),
            Some(path.clone()),
            RuleParams {
                dir: Direction::Reverse,
                ..Default::default()
            },
            before.clone(),
        ),
        NnfStep::DualIntro {
            path,
            fresh,
            claims,
        } => em.infer(
            RuleId::LDualIntroRev,
            Some(path.clone()),
            RuleParams {
                fresh: Some(*fresh),
                claims: claims.clone(),
                ..Default::default()
            },
            before.clone(),
        ),
        NnfStep::Rename { path, from, .. } => em.infer(
            RuleId::LCRename,
            Some(path.clone()),
            RuleParams {
                fresh: Some(*from),
                ..Default::default()
            },
            before.clone(),
        ),
        NnfStep::CopyElim { path, claims } => em.infer(
            RuleId::SubstCopyElimRev,
            Some(path.clone()),
            RuleParams {
                claims: claims.clone(),
                ..Default::default()
            },
            before.clone(),
        ),
        NnfStep::FreeDeneg { path, id } => {
            // one free-elim re-negates the claim that the forward pair
            // de-negated: the claim now sits at the negation's old path
            em.infer(
                RuleId::CLFreeElim,
                Some(path.clone()),
                RuleParams {
                    substs: vec![Formula::not(Formula::Claim(*id))],
                    ..Default::default()
                },
                before.clone(),
            );
        }
    }
}

/// Derivations from `f` to its strong normal form and back, realizing
/// the rewrite trace through the deduction rules.
pub fn build_nnf_derivation(
    f: &Formula,
    budget: usize,
) -> Result<(Derivation, Derivation), BuildError> {
    let (nnf, trace) = to_strong_nnf(f, budget)?;
    // replay for the intermediate formulas
    let mut intermediates = vec![f.clone()];
    for step in &trace {
        let next = apply_nnf_step(intermediates.last().expect("nonempty"), step)?;
        intermediates.push(next);
    }
    if intermediates.last() != Some(&nnf) {
        return Err(BuildError::Internal(
            "trace replay does not reach the normal form".into(),
        ));
    }

    let mut fwd = Emitter::new(f.clone());
    for (step, after) in trace.iter().zip(intermediates.iter().skip(1)) {
        emit_forward(&mut fwd, step, after);
    }

    let mut rev = Emitter::new(nnf.clone());
    for (step, before) in trace.iter().zip(intermediates.iter()).rev() {
        emit_reverse(&mut rev, step, before);
    }
    Ok((fwd.finish(), rev.finish()))
}

enum ChainOp {
    Rename { path: OccPath, from: u32 },
    Shift { label: OccPath, claim: OccPath },
}

/// Derivation of `f` (in strong negation normal form) from its
/// n-approximant: rebuild the unfolding's label skeleton over the
/// approximant with dummy labels, restore the claims by falsum
/// elimination, and reverse a shift/rename chain from `f` to the
/// unfolding.
pub fn build_approximant_derivation(
    f: &Formula,
    n: u32,
    budget: usize,
) -> Result<Derivation, BuildError> {
    if !f.is_strong_nnf() {
        return Err(BuildError::NotStrongNnf);
    }
    // forward chain from f to a renamed n-unfolding
    let mut chain: Vec<(ChainOp, Formula, Formula)> = Vec::new(); // (op, before, after)
    let mut cur = f.clone();
    for _ in 0..n {
        let round: Vec<OccPath> = cur
            .claim_occurrences()
            .into_iter()
            .filter(|(p, _)| resolve_reference(&cur, p).expect("valid").is_some())
            .map(|(p, _)| p)
            .collect();
        if round.is_empty() {
            break;
        }
        for claim in round {
            if !is_regular(&cur) {
                for step in regularize_steps(&cur) {
                    let NnfStep::Rename { path, from, .. } = &step else {
                        unreachable!()
                    };
                    let after = apply_nnf_step(&cur, &step)?;
                    chain.push((
                        ChainOp::Rename {
                            path: path.clone(),
                            from: *from,
                        },
                        cur.clone(),
                        after.clone(),
                    ));
                    cur = after;
                }
            }
            let label = resolve_reference(&cur, &claim)
                .expect("valid")
                .ok_or_else(|| BuildError::Internal("claim became free".into()))?;
            let after = subst_shift(&cur, &label, std::slice::from_ref(&claim))?;
            let nodes = after.node_count();
            if nodes > budget {
                return Err(BuildError::Transform(TransformError::Budget {
                    nodes,
                    budget,
                }));
            }
            chain.push((ChainOp::Shift { label, claim }, cur.clone(), after.clone()));
            cur = after;
        }
    }
    let unfolding = cur;

    let phi = approximant(f, n, budget)?;

    // Pair the approximant against the chain's unfolding: labels of the
    // unfolding become dummy introductions, and wherever the approximant
    // holds a falsum against richer structure (a leftover claim, or a
    // deeper unfolding produced by interfering same-round shifts), one
    // falsum elimination inserts that subtree.
    let mut skeleton_labels: Vec<(OccPath, u32)> = Vec::new();
    let mut mismatches: Vec<(OccPath, Formula)> = Vec::new();
    pair(
        &phi,
        &unfolding,
        OccPath::root(),
        &mut skeleton_labels,
        &mut mismatches,
    )?;

    let mut em = Emitter::new(phi);
    let mut skeleton = em.steps[0].formula().clone();
    for (path, id) in skeleton_labels {
        skeleton = crate::transform::l_dummy_intro(&skeleton, &path, id)?;
        em.infer(
            RuleId::LDummyIntroElim,
            Some(path),
            RuleParams {
                fresh: Some(id),
                ..Default::default()
            },
            skeleton.clone(),
        );
    }
    if !mismatches.is_empty() {
        let paths: Vec<OccPath> = mismatches.iter().map(|(p, _)| p.clone()).collect();
        let substs: Vec<Formula> = mismatches.into_iter().map(|(_, g)| g).collect();
        em.infer(
            RuleId::BotElim,
            None,
            RuleParams {
                claims: paths,
                substs,
                ..Default::default()
            },
            unfolding.clone(),
        );
    } else if skeleton != unfolding {
        return Err(BuildError::Internal(
            "skeleton without claims differs".into(),
        ));
    }
    // reverse the chain back to f
    for (op, before, _after) in chain.iter().rev() {
        match op {
            ChainOp::Shift { label, claim } => em.infer(
                RuleId::SubstShiftRev,
                Some(label.clone()),
                RuleParams {
                    claims: vec![claim.clone()],
                    ..Default::default()
                },
                before.clone(),
            ),
            ChainOp::Rename { path, from } => em.infer(
                RuleId::LCRename,
                Some(path.clone()),
                RuleParams {
                    fresh: Some(*from),
                    ..Default::default()
                },
                before.clone(),
            ),
        }
    }
    let d = em.finish();
    if d.conclusion() != Some(f) {
        return Err(BuildError::Internal(
            "chain reversal does not end at the formula".into(),
        ));
    }
    Ok(d)
}

/// Simultaneous descent of the approximant `a` and the unfolding `b`:
/// records `b`'s label occurrences outside the replaced spots (skeleton)
/// and the positions where `a` holds a falsum against richer structure
/// (mismatches), in `b` coordinates. Fails if the trees differ anywhere
/// else.
fn pair(
    a: &Formula,
    b: &Formula,
    at: OccPath,
    skeleton: &mut Vec<(OccPath, u32)>,
    mismatches: &mut Vec<(OccPath, Formula)>,
) -> Result<(), BuildError> {
    if let Formula::Labeled(k, body) = b {
        skeleton.push((at.clone(), *k));
        return pair(a, body, at.child(0), skeleton, mismatches);
    }
    let heads_match = match (a, b) {
        (Formula::Falsum, Formula::Falsum) => true,
        (Formula::Atom(p1, a1), Formula::Atom(p2, a2)) => p1 == p2 && a1 == a2,
        (Formula::Equal(x1, y1), Formula::Equal(x2, y2)) => x1 == x2 && y1 == y2,
        (Formula::Not(_), Formula::Not(_))
        | (Formula::And(..), Formula::And(..))
        | (Formula::Or(..), Formula::Or(..)) => true,
        (Formula::Exists(x1, _), Formula::Exists(x2, _))
        | (Formula::Forall(x1, _), Formula::Forall(x2, _)) => x1 == x2,
        _ => false,
    };
    if heads_match {
        for (i, (ca, cb)) in a.children().into_iter().zip(b.children()).enumerate() {
            pair(ca, cb, at.child(i as u8), skeleton, mismatches)?;
        }
        Ok(())
    } else if matches!(a, Formula::Falsum) {
        mismatches.push((at, b.clone()));
        Ok(())
    } else {
        Err(BuildError::Internal(format!(
            "approximant and unfolding disagree at `{at}`: `{a}` vs `{b}`"
        )))
    }
}
