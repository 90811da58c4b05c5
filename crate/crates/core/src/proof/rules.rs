//! Forward computation of each rule, with its local side conditions.

use super::{CheckError, RuleId, RuleParams};
use crate::syntax::{is_regular, resolve_reference, Formula, OccPath};
use crate::transform::{
    self, apply_duality, binders_above, l_dual_intro, l_dummy_elim, l_dummy_intro, subst_copy_elim,
    subst_shift, DualityRule,
};

/// Input of a rule application: a derived formula or a discharged
/// subproof.
#[derive(Debug, Clone, Copy)]
pub enum RuleInput<'a> {
    Formula(&'a Formula),
    Subproof {
        assumption: &'a Formula,
        conclusion: &'a Formula,
    },
}

fn formula<'a>(ins: &[RuleInput<'a>], i: usize) -> Result<&'a Formula, CheckError> {
    match ins.get(i) {
        Some(RuleInput::Formula(f)) => Ok(f),
        Some(RuleInput::Subproof { .. }) => Err(CheckError::WrongInputKind),
        None => Err(CheckError::WrongInputCount {
            expected: i + 1,
            got: ins.len(),
        }),
    }
}

fn subproof<'a>(ins: &[RuleInput<'a>], i: usize) -> Result<(&'a Formula, &'a Formula), CheckError> {
    match ins.get(i) {
        Some(RuleInput::Subproof {
            assumption,
            conclusion,
        }) => Ok((assumption, conclusion)),
        Some(RuleInput::Formula(_)) => Err(CheckError::WrongInputKind),
        None => Err(CheckError::WrongInputCount {
            expected: i + 1,
            got: ins.len(),
        }),
    }
}

fn arity(ins: &[RuleInput], expected: usize) -> Result<(), CheckError> {
    if ins.len() != expected {
        Err(CheckError::WrongInputCount {
            expected,
            got: ins.len(),
        })
    } else {
        Ok(())
    }
}

fn shape(rule: &'static str, detail: impl Into<String>) -> CheckError {
    CheckError::WrongShape {
        rule,
        detail: detail.into(),
    }
}

// deep rules read the rewritten occurrence; an absent path means the root
fn need_path(path: Option<&OccPath>) -> OccPath {
    path.cloned().unwrap_or_default()
}

fn need_var(params: &RuleParams) -> Result<&str, CheckError> {
    params.var.as_deref().ok_or(CheckError::MissingParam("var"))
}

fn need_fresh(params: &RuleParams) -> Result<u32, CheckError> {
    params.fresh.ok_or(CheckError::MissingParam("fresh"))
}

fn need_subst(params: &RuleParams) -> Result<&Formula, CheckError> {
    params
        .substs
        .first()
        .ok_or(CheckError::MissingParam("subst"))
}

fn need_target(target: Option<&Formula>) -> Result<&Formula, CheckError> {
    target.ok_or(CheckError::WrongShape {
        rule: "reverse rule",
        detail: "requires the stated conclusion".into(),
    })
}

fn label_used(f: &Formula, id: u32) -> bool {
    f.occurrences()
        .into_iter()
        .any(|(_, node)| matches!(node, Formula::Labeled(k, _) | Formula::Claim(k) if *k == id))
}

fn subst_var(f: &Formula, from: &str, to: &str) -> Result<Formula, CheckError> {
    f.subst_var(from, to).map_err(|_| CheckError::Capture {
        var: to.to_string(),
    })
}

/// Computes the uniquely determined conclusion of one rule application on
/// the given inputs, enforcing the rule's local side conditions. Reverse
/// directions of bidirectional rules take the stated conclusion as
/// `target` and verify that its forward rewrite reproduces the premise.
pub fn apply_rule(
    rule: RuleId,
    path: Option<&OccPath>,
    params: &RuleParams,
    inputs: &[RuleInput],
    target: Option<&Formula>,
) -> Result<Formula, CheckError> {
    use RuleId::*;
    match rule {
        AndIntro => {
            arity(inputs, 2)?;
            Ok(Formula::and(
                formula(inputs, 0)?.clone(),
                formula(inputs, 1)?.clone(),
            ))
        }
        AndElim1 | AndElim2 => {
            arity(inputs, 1)?;
            match formula(inputs, 0)? {
                Formula::And(a, b) => Ok(if rule == AndElim1 {
                    (**a).clone()
                } else {
                    (**b).clone()
                }),
                _ => Err(shape("AndElim", "premise is not a conjunction")),
            }
        }
        OrIntro1 => {
            arity(inputs, 1)?;
            Ok(Formula::or(
                formula(inputs, 0)?.clone(),
                need_subst(params)?.clone(),
            ))
        }
        OrIntro2 => {
            arity(inputs, 1)?;
            Ok(Formula::or(
                need_subst(params)?.clone(),
                formula(inputs, 0)?.clone(),
            ))
        }
        OrElim => {
            arity(inputs, 3)?;
            let Formula::Or(a, b) = formula(inputs, 0)? else {
                return Err(shape("OrElim", "first premise is not a disjunction"));
            };
            let (a1, c1) = subproof(inputs, 1)?;
            let (a2, c2) = subproof(inputs, 2)?;
            if a1 != &**a || a2 != &**b {
                return Err(shape(
                    "OrElim",
                    "subproof assumptions do not match the disjuncts",
                ));
            }
            if c1 != c2 {
                return Err(shape("OrElim", "subproofs conclude different formulas"));
            }
            Ok(c1.clone())
        }
        BotIntro => {
            arity(inputs, 1)?;
            match formula(inputs, 0)? {
                Formula::And(a, b) => match &**b {
                    Formula::Not(nb) if **nb == **a => Ok(Formula::Falsum),
                    _ => Err(shape("BotIntro", "premise is not of shape φ & ~φ")),
                },
                _ => Err(shape("BotIntro", "premise is not of shape φ & ~φ")),
            }
        }
        BotElim => {
            arity(inputs, 1)?;
            let f = formula(inputs, 0)?;
            if !f.is_strong_nnf() {
                return Err(CheckError::BotNotStrongNnf);
            }
            if params.claims.is_empty() {
                return Err(shape("BotElim", "no falsum occurrences selected"));
            }
            if params.claims.len() != params.substs.len() {
                return Err(CheckError::BotParamMismatch {
                    claims: params.claims.len(),
                    substs: params.substs.len(),
                });
            }
            let mut repls = Vec::new();
            for (p, subst) in params.claims.iter().zip(&params.substs) {
                let node = f
                    .subformula(p)
                    .map_err(|e| CheckError::PathError(e.to_string()))?;
                if !matches!(node, Formula::Falsum) {
                    return Err(CheckError::NotARedex(format!(
                        "occurrence at `{p}` is not a falsum"
                    )));
                }
                // strong normal form keeps negations atomic, so one
                // negated ancestor is the only possibility — check them
                // all regardless
                let mut q = p.clone();
                while let Some(parent) = q.parent() {
                    if matches!(
                        f.subformula(&parent)
                            .map_err(|e| CheckError::PathError(e.to_string()))?,
                        Formula::Not(_)
                    ) {
                        return Err(CheckError::BotUnderNegation(p.clone()));
                    }
                    q = parent;
                }
                // no capture restriction here: a positive falsum is never
                // reached by a winning strategy, so any replacement —
                // however its variables end up bound — only adds plays
                repls.push((p.clone(), subst.clone()));
            }
            f.replace_many(&repls)
                .map_err(|e| CheckError::PathError(e.to_string()))
        }
        SubstShift | SubstCopyElim => {
            arity(inputs, 1)?;
            let f = formula(inputs, 0)?;
            if !is_regular(f) {
                return Err(CheckError::TopNotRegular);
            }
            let p = need_path(path);
            let out = if rule == SubstShift {
                subst_shift(f, &p, &params.claims)
            } else {
                subst_copy_elim(f, &p, &params.claims)
            };
            out.map_err(CheckError::from)
        }
        SubstShiftRev | SubstCopyElimRev => {
            arity(inputs, 1)?;
            let bottom = formula(inputs, 0)?;
            let top = need_target(target)?;
            if !is_regular(top) {
                return Err(CheckError::TopNotRegular);
            }
            let p = need_path(path);
            let forward = if rule == SubstShiftRev {
                subst_shift(top, &p, &params.claims)
            } else {
                subst_copy_elim(top, &p, &params.claims)
            }
            .map_err(CheckError::from)?;
            if forward != *bottom {
                return Err(shape(
                    "SubstRev",
                    "forward application of the conclusion does not yield the premise",
                ));
            }
            Ok(top.clone())
        }
        LDualIntro => {
            arity(inputs, 1)?;
            let f = formula(inputs, 0)?;
            let fresh = need_fresh(params)?;
            if label_used(f, fresh) {
                return Err(CheckError::LabelNotFresh(fresh));
            }
            l_dual_intro(f, &need_path(path), fresh, &params.claims).map_err(CheckError::from)
        }
        LDualIntroRev => {
            arity(inputs, 1)?;
            let bottom = formula(inputs, 0)?;
            let top = need_target(target)?;
            let fresh = need_fresh(params)?;
            if label_used(top, fresh) {
                return Err(CheckError::LabelNotFresh(fresh));
            }
            let forward = l_dual_intro(top, &need_path(path), fresh, &params.claims)
                .map_err(CheckError::from)?;
            if forward != *bottom {
                return Err(shape(
                    "LDualIntroRev",
                    "forward application of the conclusion does not yield the premise",
                ));
            }
            Ok(top.clone())
        }
        LDummyIntroElim => {
            arity(inputs, 1)?;
            let f = formula(inputs, 0)?;
            let id = need_fresh(params)?;
            l_dummy_intro(f, &need_path(path), id).map_err(|e| match e {
                transform::TransformError::NotARedex { .. } => CheckError::NotDummy,
                other => other.into(),
            })
        }
        LDummyIntroElimRev => {
            arity(inputs, 1)?;
            let f = formula(inputs, 0)?;
            l_dummy_elim(f, &need_path(path)).map_err(|e| match e {
                transform::TransformError::NotARedex { detail, .. } if detail.contains("dummy") => {
                    CheckError::NotDummy
                }
                other => other.into(),
            })
        }
        LCRename => {
            arity(inputs, 1)?;
            let f = formula(inputs, 0)?;
            let to = need_fresh(params)?;
            crate::syntax::rename_label(f, &need_path(path), to).map_err(|e| match e {
                crate::syntax::RenameError::FreeTargetClaim(k) => {
                    CheckError::RenameUnsafeFreeTarget(k)
                }
                crate::syntax::RenameError::CaptureByExistingLabel(k) => {
                    CheckError::RenameUnsafeCapture(k)
                }
                crate::syntax::RenameError::Path(p) => CheckError::PathError(p.to_string()),
            })
        }
        CLFreeElim => {
            arity(inputs, 1)?;
            let f = formula(inputs, 0)?;
            let p = need_path(path);
            let node = f
                .subformula(&p)
                .map_err(|e| CheckError::PathError(e.to_string()))?;
            if !matches!(node, Formula::Claim(_)) {
                return Err(CheckError::NotARedex(format!(
                    "occurrence at `{p}` is not a claim"
                )));
            }
            if resolve_reference(f, &p)
                .map_err(|e| CheckError::PathError(e.to_string()))?
                .is_some()
            {
                return Err(CheckError::ClaimNotFree);
            }
            let subst = need_subst(params)?;
            let bound = binders_above(f, &p).map_err(|e| CheckError::PathError(e.to_string()))?;
            for v in subst.free_variables() {
                if bound.contains(&v) {
                    return Err(CheckError::Capture { var: v });
                }
            }
            f.replace_at(&p, subst.clone())
                .map_err(|e| CheckError::PathError(e.to_string()))
        }
        DualNotAnd | DualNotOr | DualNotNot | DualNotForall | DualNotExists | DualNotLabel => {
            arity(inputs, 1)?;
            let f = formula(inputs, 0)?;
            let duality = match rule {
                DualNotAnd => DualityRule::NotAnd,
                DualNotOr => DualityRule::NotOr,
                DualNotNot => DualityRule::NotNot,
                DualNotForall => DualityRule::NotForall,
                DualNotExists => DualityRule::NotExists,
                DualNotLabel => DualityRule::NotLabel,
                _ => unreachable!(),
            };
            apply_duality(f, &need_path(path), duality, params.dir).map_err(CheckError::from)
        }
        ForallIntro => {
            arity(inputs, 1)?;
            let x = need_var(params)?;
            Ok(Formula::Forall(
                x.to_string(),
                Box::new(formula(inputs, 0)?.clone()),
            ))
        }
        ForallElim => {
            arity(inputs, 1)?;
            let y = need_var(params)?;
            match formula(inputs, 0)? {
                Formula::Forall(x, body) => subst_var(body, x, y),
                _ => Err(shape("ForallElim", "premise is not a universal")),
            }
        }
        ExistsIntro => {
            arity(inputs, 1)?;
            let y = need_var(params)?;
            let witness = formula(inputs, 0)?;
            let tgt = need_target(target)?;
            let Formula::Exists(x, body) = tgt else {
                return Err(shape("ExistsIntro", "conclusion is not an existential"));
            };
            if subst_var(body, x, y)? != *witness {
                return Err(shape(
                    "ExistsIntro",
                    "premise is not the conclusion's body at the witness variable",
                ));
            }
            Ok(tgt.clone())
        }
        ExistsElim => {
            arity(inputs, 2)?;
            let y = need_var(params)?;
            let Formula::Exists(x, body) = formula(inputs, 0)? else {
                return Err(shape("ExistsElim", "first premise is not an existential"));
            };
            let (assumption, conclusion) = subproof(inputs, 1)?;
            if subst_var(body, x, y)? != *assumption {
                return Err(shape(
                    "ExistsElim",
                    "subproof does not assume the body at the eigenvariable",
                ));
            }
            let ex = formula(inputs, 0)?;
            if ex.free_variables().contains(y) {
                return Err(CheckError::EigenvariableFree {
                    var: y.to_string(),
                    place: "the existential premise".into(),
                });
            }
            if conclusion.free_variables().contains(y) {
                return Err(CheckError::EigenvariableFree {
                    var: y.to_string(),
                    place: "the conclusion".into(),
                });
            }
            Ok(conclusion.clone())
        }
        NegIntroFO | NegElimFO => {
            arity(inputs, 2)?;
            let (a1, c1) = subproof(inputs, 0)?;
            let (a2, c2) = subproof(inputs, 1)?;
            if a1 != a2 {
                return Err(shape("NegFO", "subproofs assume different formulas"));
            }
            if *c2 != Formula::not(c1.clone()) {
                return Err(shape("NegFO", "subproofs do not conclude φ and ~φ"));
            }
            let principal = match rule {
                NegIntroFO => a1.clone(),
                _ => match a1 {
                    Formula::Not(inner) => (**inner).clone(),
                    _ => return Err(shape("NegElimFO", "assumption is not a negation")),
                },
            };
            if !principal.is_fo() {
                return Err(CheckError::PremiseNotFo);
            }
            Ok(match rule {
                NegIntroFO => Formula::not(principal),
                _ => principal,
            })
        }
        EqIntro => {
            arity(inputs, 0)?;
            let x = need_var(params)?;
            Ok(Formula::eq(x, x))
        }
        EqElim1 | EqElim2 => {
            arity(inputs, 2)?;
            let f = formula(inputs, 0)?;
            let Formula::Equal(a, b) = formula(inputs, 1)? else {
                return Err(shape("EqElim", "second premise is not an equality"));
            };
            // from x = y conclude φ[y/x]; the mirrored rule reads y = x
            let (from, to) = match rule {
                EqElim1 => (a, b),
                _ => (b, a),
            };
            subst_var(f, from, to)
        }
    }
}
