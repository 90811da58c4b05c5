//! Duality rewrites and the constructive weak/strong negation normal
//! form procedures, together with the deep-inference rewrite primitives
//! shared with the proof checker.
//!
//! All rewrites are occurrence-local: they take the path of a redex and
//! return a new formula. Global side conditions (regularity of the whole
//! formula for the substitution rules) are enforced by the proof checker;
//! the procedures here establish them by construction.

use thiserror::Error;

use crate::syntax::{
    claims_in_strict_scope, is_regular, rename_label, resolve_reference, Formula, LabelId, OccPath,
    PathError, RenameError,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DualityRule {
    NotAnd,
    NotOr,
    NotNot,
    NotForall,
    NotExists,
    NotLabel,
}

impl DualityRule {
    pub fn name(self) -> &'static str {
        match self {
            DualityRule::NotAnd => "NotAnd",
            DualityRule::NotOr => "NotOr",
            DualityRule::NotNot => "NotNot",
            DualityRule::NotForall => "NotForall",
            DualityRule::NotExists => "NotExists",
            DualityRule::NotLabel => "NotLabel",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Direction {
    #[default]
    Forward,
    Reverse,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TransformError {
    #[error("occurrence at `{path}` is not a redex for {rule}: {detail}")]
    NotARedex {
        path: OccPath,
        rule: &'static str,
        detail: String,
    },
    #[error("input is not in weak negation normal form")]
    NotWeakNnf,
    #[error("node budget exceeded: {nodes} nodes against a budget of {budget}")]
    Budget { nodes: usize, budget: usize },
    #[error("substituting `{subst}` at `{path}` would capture the variable `{var}`")]
    Capture {
        path: OccPath,
        subst: String,
        var: String,
    },
    #[error(transparent)]
    Path(#[from] PathError),
    #[error(transparent)]
    Rename(#[from] RenameError),
}

fn redex_err(path: &OccPath, rule: &'static str, detail: impl Into<String>) -> TransformError {
    TransformError::NotARedex {
        path: path.clone(),
        rule,
        detail: detail.into(),
    }
}

/// Variables bound by quantifiers strictly above `path`.
pub fn binders_above(f: &Formula, path: &OccPath) -> Result<Vec<String>, PathError> {
    let mut out = Vec::new();
    let mut p = path.clone();
    while let Some(parent) = p.parent() {
        if let Formula::Exists(x, _) | Formula::Forall(x, _) = f.subformula(&parent)? {
            out.push(x.clone());
        }
        p = parent;
    }
    Ok(out)
}

pub(crate) fn check_capture(
    f: &Formula,
    path: &OccPath,
    subst: &Formula,
) -> Result<(), TransformError> {
    let bound = binders_above(f, path)?;
    for v in subst.free_variables() {
        if bound.contains(&v) {
            return Err(TransformError::Capture {
                path: path.clone(),
                subst: subst.to_string(),
                var: v,
            });
        }
    }
    Ok(())
}

/// Flips every claim in the strict scope of the label occurrence at
/// `label` into its negation. Used by the label duality rule.
fn flip_strict_scope_claims(f: &Formula, label: &OccPath) -> Result<Formula, PathError> {
    let claims = claims_in_strict_scope(f, label)?;
    let Formula::Labeled(id, _) = f.subformula(label)? else {
        unreachable!()
    };
    let id = *id;
    let mut out = f.clone();
    for c in claims {
        out = out.replace_at(&c, Formula::not(Formula::Claim(id)))?;
    }
    Ok(out)
}

/// Single duality-rule step at `path`, in either direction.
pub fn apply_duality(
    f: &Formula,
    path: &OccPath,
    rule: DualityRule,
    dir: Direction,
) -> Result<Formula, TransformError> {
    let node = f.subformula(path)?.clone();
    let rewritten = match dir {
        Direction::Forward => duality_forward(f, path, rule, &node)?,
        Direction::Reverse => {
            let candidate = duality_backward(path, rule, &node)?;
            // the reverse direction is legal exactly when the forward
            // rewrite of the candidate reproduces the current redex
            let replay = f.replace_at(path, candidate.clone())?;
            let forward = duality_forward(&replay, path, rule, &candidate)?;
            if forward != node {
                return Err(redex_err(
                    path,
                    rule.name(),
                    "reverse step does not invert the rule",
                ));
            }
            candidate
        }
    };
    Ok(f.replace_at(path, rewritten)?)
}

fn duality_forward(
    f: &Formula,
    path: &OccPath,
    rule: DualityRule,
    node: &Formula,
) -> Result<Formula, TransformError> {
    let name = rule.name();
    let fail = |d: &str| redex_err(path, name, d);
    let Formula::Not(inner) = node else {
        return Err(fail("expected a negation"));
    };
    Ok(match (rule, &**inner) {
        (DualityRule::NotAnd, Formula::And(a, b)) => {
            Formula::or(Formula::not((**a).clone()), Formula::not((**b).clone()))
        }
        (DualityRule::NotOr, Formula::Or(a, b)) => {
            Formula::and(Formula::not((**a).clone()), Formula::not((**b).clone()))
        }
        (DualityRule::NotNot, Formula::Not(c)) => (**c).clone(),
        (DualityRule::NotForall, Formula::Forall(x, c)) => {
            Formula::exists(x, Formula::not((**c).clone()))
        }
        (DualityRule::NotExists, Formula::Exists(x, c)) => {
            Formula::forall(x, Formula::not((**c).clone()))
        }
        (DualityRule::NotLabel, Formula::Labeled(k, _)) => {
            // ~Lk: ψ  ⇒  Lk: ~ψ′ with every strict-scope @Lk flipped
            let inner_path = path.child(0);
            let flipped = flip_strict_scope_claims(f, &inner_path)?;
            let Formula::Labeled(_, body) = flipped.subformula(&inner_path)? else {
                unreachable!()
            };
            Formula::labeled(*k, Formula::not((**body).clone()))
        }
        _ => return Err(fail("negated subformula has the wrong shape")),
    })
}

/// Candidate source formula for a reverse duality step; validated by
/// replaying the forward rule.
fn duality_backward(
    path: &OccPath,
    rule: DualityRule,
    node: &Formula,
) -> Result<Formula, TransformError> {
    let name = rule.name();
    let fail = |d: &str| redex_err(path, name, d);
    Ok(match (rule, node) {
        (DualityRule::NotAnd, Formula::Or(a, b)) => match (&**a, &**b) {
            (Formula::Not(x), Formula::Not(y)) => {
                Formula::not(Formula::and((**x).clone(), (**y).clone()))
            }
            _ => return Err(fail("expected a disjunction of negations")),
        },
        (DualityRule::NotOr, Formula::And(a, b)) => match (&**a, &**b) {
            (Formula::Not(x), Formula::Not(y)) => {
                Formula::not(Formula::or((**x).clone(), (**y).clone()))
            }
            _ => return Err(fail("expected a conjunction of negations")),
        },
        (DualityRule::NotNot, any) => Formula::not(Formula::not(any.clone())),
        (DualityRule::NotForall, Formula::Exists(x, c)) => match &**c {
            Formula::Not(body) => Formula::not(Formula::forall(x, (**body).clone())),
            _ => return Err(fail("expected an existential over a negation")),
        },
        (DualityRule::NotExists, Formula::Forall(x, c)) => match &**c {
            Formula::Not(body) => Formula::not(Formula::exists(x, (**body).clone())),
            _ => return Err(fail("expected a universal over a negation")),
        },
        (DualityRule::NotLabel, Formula::Labeled(k, c)) => match &**c {
            Formula::Not(body) => {
                // un-flip: strict-scope literals ~@Lk back to @Lk
                let single = Formula::labeled(*k, (**body).clone());
                let scoped = claims_in_strict_scope(&single, &OccPath::root())
                    .map_err(TransformError::Path)?;
                let mut inner = single;
                for claim in scoped {
                    if let Some(parent) = claim.parent() {
                        if matches!(inner.subformula(&parent), Ok(Formula::Not(_)))
                            && !parent.is_root()
                        {
                            let Formula::Claim(id) = *inner.subformula(&claim)? else {
                                unreachable!()
                            };
                            inner = inner.replace_at(&parent, Formula::Claim(id))?;
                        }
                    }
                }
                Formula::not(inner)
            }
            _ => return Err(fail("expected a label over a negation")),
        },
        _ => {
            return Err(fail(
                "conclusion has the wrong shape for the reverse direction",
            ))
        }
    })
}

/// Replaces the selected strict-scope claims of the label at `label` by
/// copies of the labeled occurrence itself (label included).
pub fn subst_shift(
    f: &Formula,
    label: &OccPath,
    claims: &[OccPath],
) -> Result<Formula, TransformError> {
    let copy = f.subformula(label)?.clone();
    if !matches!(copy, Formula::Labeled(..)) {
        return Err(redex_err(
            label,
            "SubstShift",
            "path does not address a label",
        ));
    }
    substitute_claims(f, label, claims, &copy, "SubstShift")
}

/// Replaces the selected strict-scope claims of the label at `label` by
/// copies of its body (label stripped).
pub fn subst_copy_elim(
    f: &Formula,
    label: &OccPath,
    claims: &[OccPath],
) -> Result<Formula, TransformError> {
    let node = f.subformula(label)?;
    let Formula::Labeled(_, body) = node else {
        return Err(redex_err(
            label,
            "SubstCopyElim",
            "path does not address a label",
        ));
    };
    let body = (**body).clone();
    substitute_claims(f, label, claims, &body, "SubstCopyElim")
}

fn substitute_claims(
    f: &Formula,
    label: &OccPath,
    claims: &[OccPath],
    replacement: &Formula,
    rule: &'static str,
) -> Result<Formula, TransformError> {
    let scope = claims_in_strict_scope(f, label)?;
    let mut out = f.clone();
    for c in claims {
        if !scope.contains(c) {
            return Err(redex_err(
                c,
                rule,
                "selected claim is not in the strict scope",
            ));
        }
        out = out.replace_at(c, replacement.clone())?;
    }
    Ok(out)
}

/// Renames the selected negated strict-scope claims of the label at
/// `label` to a fresh label and wraps the occurrence with it:
/// `Lψ ⇒ L′L ψ{~@L′/~@L}`. Freshness of `fresh` in the whole formula is
/// the caller's (or the proof checker's) obligation.
pub fn l_dual_intro(
    f: &Formula,
    label: &OccPath,
    fresh: LabelId,
    claims: &[OccPath],
) -> Result<Formula, TransformError> {
    let node = f.subformula(label)?;
    if !matches!(node, Formula::Labeled(..)) {
        return Err(redex_err(
            label,
            "LDualIntro",
            "path does not address a label",
        ));
    }
    let scope = claims_in_strict_scope(f, label)?;
    let mut out = f.clone();
    for c in claims {
        if !scope.contains(c) {
            return Err(redex_err(
                c,
                "LDualIntro",
                "selected claim is not in the strict scope",
            ));
        }
        let negated = c
            .parent()
            .is_some_and(|p| matches!(out.subformula(&p), Ok(Formula::Not(_))));
        if !negated {
            return Err(redex_err(
                c,
                "LDualIntro",
                "selected claim is not a negated literal",
            ));
        }
        out = out.replace_at(c, Formula::Claim(fresh))?;
    }
    let relabeled = Formula::labeled(fresh, out.subformula(label)?.clone());
    Ok(out.replace_at(label, relabeled)?)
}

/// Wraps the occurrence at `path` with a dummy label.
pub fn l_dummy_intro(f: &Formula, path: &OccPath, id: LabelId) -> Result<Formula, TransformError> {
    let wrapped = Formula::labeled(id, f.subformula(path)?.clone());
    let out = f.replace_at(path, wrapped)?;
    if !claims_in_strict_scope(&out, path)?.is_empty() {
        return Err(redex_err(
            path,
            "LDummyIntroElim",
            "introduced label would not be dummy",
        ));
    }
    Ok(out)
}

/// Removes the dummy label at `path`.
pub fn l_dummy_elim(f: &Formula, path: &OccPath) -> Result<Formula, TransformError> {
    let node = f.subformula(path)?;
    let Formula::Labeled(_, body) = node else {
        return Err(redex_err(
            path,
            "LDummyIntroElim",
            "path does not address a label",
        ));
    };
    if !claims_in_strict_scope(f, path)?.is_empty() {
        return Err(redex_err(path, "LDummyIntroElim", "label is not dummy"));
    }
    Ok(f.replace_at(path, (**body).clone())?)
}

/// Replaces a free claim occurrence by an arbitrary formula
/// (capture-avoiding).
pub fn cl_free_elim(
    f: &Formula,
    claim: &OccPath,
    subst: &Formula,
) -> Result<Formula, TransformError> {
    let node = f.subformula(claim)?;
    if !matches!(node, Formula::Claim(_)) {
        return Err(redex_err(
            claim,
            "CLFreeElim",
            "path does not address a claim",
        ));
    }
    if resolve_reference(f, claim)?.is_some() {
        return Err(redex_err(
            claim,
            "CLFreeElim",
            "claim occurrence is not free",
        ));
    }
    check_capture(f, claim, subst)?;
    Ok(f.replace_at(claim, subst.clone())?)
}

/// One step of the strong-NNF procedure, also the unit replayed by the
/// derivation builders.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum NnfStep {
    Duality {
        rule: DualityRule,
        path: OccPath,
    },
    DualIntro {
        path: OccPath,
        fresh: LabelId,
        claims: Vec<OccPath>,
    },
    /// Regularisation rename inserted before a copy-elimination.
    Rename {
        path: OccPath,
        from: LabelId,
        to: LabelId,
    },
    CopyElim {
        path: OccPath,
        claims: Vec<OccPath>,
    },
    /// `~@Lk ⇒ @Lk` on a free claim: free-elim to `~~@Lk`, then double
    /// negation. `path` addresses the negation.
    FreeDeneg {
        path: OccPath,
        id: LabelId,
    },
}

/// Replays a single step (shared with the derivation builders).
pub fn apply_nnf_step(f: &Formula, step: &NnfStep) -> Result<Formula, TransformError> {
    match step {
        NnfStep::Duality { rule, path } => apply_duality(f, path, *rule, Direction::Forward),
        NnfStep::DualIntro {
            path,
            fresh,
            claims,
        } => l_dual_intro(f, path, *fresh, claims),
        NnfStep::Rename { path, to, .. } => Ok(rename_label(f, path, *to)?),
        NnfStep::CopyElim { path, claims } => subst_copy_elim(f, path, claims),
        NnfStep::FreeDeneg { path, id } => {
            let claim = path.child(0);
            let step1 = cl_free_elim(f, &claim, &Formula::not(Formula::Claim(*id)))?;
            apply_duality(&step1, path, DualityRule::NotNot, Direction::Forward)
        }
    }
}

fn check_budget(f: &Formula, budget: usize) -> Result<(), TransformError> {
    let nodes = f.node_count();
    if nodes > budget {
        Err(TransformError::Budget { nodes, budget })
    } else {
        Ok(())
    }
}

/// Leftmost-outermost negation redex, if any.
fn find_negation_redex(f: &Formula) -> Option<(OccPath, DualityRule)> {
    for (path, node) in f.occurrences() {
        if let Formula::Not(c) = node {
            let rule = match &**c {
                Formula::And(..) => DualityRule::NotAnd,
                Formula::Or(..) => DualityRule::NotOr,
                Formula::Not(_) => DualityRule::NotNot,
                Formula::Forall(..) => DualityRule::NotForall,
                Formula::Exists(..) => DualityRule::NotExists,
                Formula::Labeled(..) => DualityRule::NotLabel,
                _ => continue,
            };
            return Some((path, rule));
        }
    }
    None
}

fn push_negations(
    f: &mut Formula,
    steps: &mut Vec<NnfStep>,
    budget: usize,
) -> Result<(), TransformError> {
    while let Some((path, rule)) = find_negation_redex(f) {
        *f = apply_duality(f, &path, rule, Direction::Forward)?;
        steps.push(NnfStep::Duality { rule, path });
        check_budget(f, budget)?;
    }
    Ok(())
}

/// Weak negation normal form: negations pushed to atomic subformulas
/// (first-order atoms or claims) through duality steps only.
pub fn to_weak_nnf(f: &Formula, budget: usize) -> Result<Formula, TransformError> {
    let mut out = f.clone();
    let mut steps = Vec::new();
    push_negations(&mut out, &mut steps, budget)?;
    debug_assert!(out.is_weak_nnf());
    Ok(out)
}

/// Innermost-level switching loop formulas of a weak-NNF input: label
/// occurrences with a negated claim of their own label in strict scope
/// and no deeper label with the same property inside the body.
pub fn find_ilsl(f: &Formula) -> Result<Vec<OccPath>, TransformError> {
    if !f.is_weak_nnf() {
        return Err(TransformError::NotWeakNnf);
    }
    let labels = f.label_occurrences();
    let has_negated_scope_claim = |p: &OccPath| -> bool {
        claims_in_strict_scope(f, p)
            .expect("label path")
            .iter()
            .any(|c| {
                c.parent()
                    .is_some_and(|q| matches!(f.subformula(&q), Ok(Formula::Not(_))))
            })
    };
    let mut out = Vec::new();
    for (p, _) in &labels {
        if !has_negated_scope_claim(p) {
            continue;
        }
        let blocked = labels
            .iter()
            .any(|(q, _)| q != p && q.starts_with(p) && has_negated_scope_claim(q));
        if !blocked {
            out.push(p.clone());
        }
    }
    Ok(out)
}

/// The regularisation renames of [`crate::syntax::regularize`], one label
/// occurrence at a time.
pub fn regularize_steps(f: &Formula) -> Vec<NnfStep> {
    let target = crate::syntax::regularize(f);
    if target == *f {
        return Vec::new();
    }
    // Positions are stable under renaming, so the per-occurrence renames
    // can be read off by comparing label ids with the target, in the same
    // post-order the scheme uses.
    let mut out = Vec::new();
    let mut cur = f.clone();
    let mut labels = cur.label_occurrences();
    labels.sort_by_key(|(a, _)| post_order_key(a));
    for (path, from) in labels {
        let Formula::Labeled(to, _) = target.subformula(&path).expect("same shape") else {
            unreachable!()
        };
        if *to != from {
            cur = rename_label(&cur, &path, *to).expect("regularisation renames are safe");
            out.push(NnfStep::Rename {
                path,
                from,
                to: *to,
            });
        }
    }
    debug_assert_eq!(cur, target);
    out
}

fn post_order_key(p: &OccPath) -> (Vec<u8>, std::cmp::Reverse<usize>) {
    // children sort before their parent, disjoint subtrees left-to-right
    (p.steps().to_vec(), std::cmp::Reverse(p.depth()))
}

/// Strong negation normal form with the full rewrite trace: repeatedly
/// dualize every innermost switching loop with a fresh label, copy the
/// dualized body over its claims, push negations back down, and finally
/// de-negate free claims.
pub fn to_strong_nnf(
    f: &Formula,
    budget: usize,
) -> Result<(Formula, Vec<NnfStep>), TransformError> {
    let mut cur = f.clone();
    let mut steps = Vec::new();
    check_budget(&cur, budget)?;
    push_negations(&mut cur, &mut steps, budget)?;

    let depth_bound = f.label_nesting_depth();
    let mut rounds = 0usize;
    loop {
        let ilsls = find_ilsl(&cur)?;
        if ilsls.is_empty() {
            break;
        }
        rounds += 1;
        assert!(
            rounds <= depth_bound,
            "switching-loop elimination exceeded the label nesting depth"
        );
        let mut fresh = cur.max_label_id().map_or(0, |m| m + 1);
        for path in ilsls {
            if !is_regular(&cur) {
                for step in regularize_steps(&cur) {
                    cur = apply_nnf_step(&cur, &step)?;
                    steps.push(step);
                }
                fresh = cur.max_label_id().map_or(0, |m| m + 1);
            }
            let negated: Vec<OccPath> = claims_in_strict_scope(&cur, &path)?
                .into_iter()
                .filter(|c| {
                    c.parent()
                        .is_some_and(|q| matches!(cur.subformula(&q), Ok(Formula::Not(_))))
                })
                .collect();
            let intro = NnfStep::DualIntro {
                path: path.clone(),
                fresh,
                claims: negated,
            };
            cur = apply_nnf_step(&cur, &intro)?;
            steps.push(intro);
            fresh += 1;
            // after the wrap, the renamed literals are exactly the strict
            // scope of the new outer label
            let all = claims_in_strict_scope(&cur, &path)?;
            let elim = NnfStep::CopyElim {
                path: path.clone(),
                claims: all,
            };
            cur = apply_nnf_step(&cur, &elim)?;
            steps.push(elim);
            check_budget(&cur, budget)?;
        }
        push_negations(&mut cur, &mut steps, budget)?;
    }

    // free negated claims: ~@Lk ⇒ @Lk
    loop {
        let next = cur
            .occurrences()
            .into_iter()
            .find_map(|(p, node)| match node {
                Formula::Not(c) => match &**c {
                    Formula::Claim(k)
                        if resolve_reference(&cur, &p.child(0))
                            .expect("valid")
                            .is_none() =>
                    {
                        Some(NnfStep::FreeDeneg { path: p, id: *k })
                    }
                    _ => None,
                },
                _ => None,
            });
        let Some(step) = next else { break };
        cur = apply_nnf_step(&cur, &step)?;
        steps.push(step);
    }

    debug_assert!(cur.is_strong_nnf());
    Ok((cur, steps))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::parse_formula_inferred;

    fn p(text: &str) -> Formula {
        parse_formula_inferred(text).expect("parse").0
    }

    const BUDGET: usize = 100_000;

    #[test]
    fn de_morgan_both_directions() {
        let f = p("~(P(x) & Q(x))");
        let g = apply_duality(
            &f,
            &OccPath::root(),
            DualityRule::NotAnd,
            Direction::Forward,
        )
        .unwrap();
        assert_eq!(g, p("~P(x) | ~Q(x)"));
        let back = apply_duality(
            &g,
            &OccPath::root(),
            DualityRule::NotAnd,
            Direction::Reverse,
        )
        .unwrap();
        assert_eq!(back, f);
    }

    #[test]
    fn label_duality_flips_strict_scope_claims() {
        let f = p("~L1: (P(x) | @L1)");
        let g = apply_duality(
            &f,
            &OccPath::root(),
            DualityRule::NotLabel,
            Direction::Forward,
        )
        .unwrap();
        assert_eq!(g, p("L1: ~(P(x) | ~@L1)"));
        let back = apply_duality(
            &g,
            &OccPath::root(),
            DualityRule::NotLabel,
            Direction::Reverse,
        )
        .unwrap();
        assert_eq!(back, f);
    }

    #[test]
    fn double_negation() {
        let f = p("~~@L1");
        let g = apply_duality(
            &f,
            &OccPath::root(),
            DualityRule::NotNot,
            Direction::Forward,
        )
        .unwrap();
        assert_eq!(g, p("@L1"));
    }

    #[test]
    fn weak_nnf_examples() {
        assert_eq!(
            to_weak_nnf(&p("~(P(x) | exists x. Q(x))"), BUDGET).unwrap(),
            p("~P(x) & forall x. ~Q(x)")
        );
        let already = p("~P(x) & L1: ~@L1");
        assert_eq!(to_weak_nnf(&already, BUDGET).unwrap(), already);
        // the label duality flips the strict-scope claim, and the double
        // negation then cancels
        assert_eq!(to_weak_nnf(&p("~L1: @L1"), BUDGET).unwrap(), p("L1: @L1"));
    }

    #[test]
    fn ilsl_detection() {
        assert_eq!(find_ilsl(&p("L1: ~@L1")).unwrap(), vec![OccPath::root()]);
        assert_eq!(find_ilsl(&p("L1: @L1")).unwrap(), Vec::<OccPath>::new());
        assert_eq!(
            find_ilsl(&p("L1: (~@L1 & L2: ~@L2)")).unwrap(),
            vec![OccPath::from_steps(&[0, 1])]
        );
        assert!(matches!(
            find_ilsl(&p("~(P & Q)")),
            Err(TransformError::NotWeakNnf)
        ));
    }

    #[test]
    fn strong_nnf_of_the_negated_loop() {
        let (g, steps) = to_strong_nnf(&p("L1: ~@L1"), BUDGET).unwrap();
        assert_eq!(g, p("L2: L1: L1: @L2"));
        assert!(!steps.is_empty());
        // replay the trace
        let mut cur = p("L1: ~@L1");
        for s in &steps {
            cur = apply_nnf_step(&cur, s).unwrap();
        }
        assert_eq!(cur, g);
    }

    #[test]
    fn strong_nnf_is_identity_on_strong_nnf() {
        let f = p("~P(x) & L1: @L1");
        let (g, steps) = to_strong_nnf(&f, BUDGET).unwrap();
        assert_eq!(g, f);
        assert!(steps.is_empty());
    }

    #[test]
    fn free_negated_claim_becomes_positive() {
        let (g, steps) = to_strong_nnf(&p("~@L1"), BUDGET).unwrap();
        assert_eq!(g, p("@L1"));
        assert_eq!(steps.len(), 1);
        assert!(matches!(steps[0], NnfStep::FreeDeneg { .. }));
    }

    #[test]
    fn subst_primitives() {
        let f = p("L1: (P(x) & @L1)");
        let shifted = subst_shift(&f, &OccPath::root(), &[OccPath::from_steps(&[0, 1])]).unwrap();
        assert_eq!(shifted, p("L1: (P(x) & L1: (P(x) & @L1))"));
        let copied =
            subst_copy_elim(&f, &OccPath::root(), &[OccPath::from_steps(&[0, 1])]).unwrap();
        assert_eq!(copied, p("L1: (P(x) & (P(x) & @L1))"));
    }

    #[test]
    fn dual_intro_renames_negated_literals() {
        let f = p("L1: ~@L1");
        let g = l_dual_intro(&f, &OccPath::root(), 2, &[OccPath::from_steps(&[0, 0])]).unwrap();
        assert_eq!(g, p("L2: L1: ~@L2"));
        let h = p("L1: @L1");
        assert!(l_dual_intro(&h, &OccPath::root(), 2, &[OccPath::from_steps(&[0])]).is_err());
    }

    #[test]
    fn dummy_label_round_trip() {
        let f = p("P(x) | bot");
        let g = l_dummy_intro(&f, &OccPath::root(), 1).unwrap();
        assert_eq!(g, p("L1: (P(x) | bot)"));
        assert_eq!(l_dummy_elim(&g, &OccPath::root()).unwrap(), f);
        let h = p("L1: @L1");
        assert!(l_dummy_elim(&h, &OccPath::root()).is_err());
    }

    #[test]
    fn free_elim_checks_freeness_and_capture() {
        let f = p("@L3 & P(x)");
        let g = cl_free_elim(&f, &OccPath::from_steps(&[0]), &p("Q(y)")).unwrap();
        assert_eq!(g, p("Q(y) & P(x)"));
        let bound = p("L3: @L3");
        assert!(cl_free_elim(&bound, &OccPath::from_steps(&[0]), &p("Q(y)")).is_err());
        let under = p("exists y. (@L3 & P(y))");
        assert!(matches!(
            cl_free_elim(&under, &OccPath::from_steps(&[0, 0]), &p("Q(y)")),
            Err(TransformError::Capture { .. })
        ));
    }

    #[test]
    fn budget_is_enforced() {
        assert!(matches!(
            to_strong_nnf(&p("~L1: (~@L1 & ~@L1)"), 10),
            Err(TransformError::Budget { .. })
        ));
    }
}
