//! Derivation data model and checker for the natural-deduction system,
//! plus constructive derivation builders for the normal-form and
//! approximant entailments.
//!
//! The checker recomputes every conclusion with [`apply_rule`] and
//! verifies all side conditions: regularity of the top formula for the
//! substitution rules, freshness for dual introduction, the two renaming
//! safety conditions, strong normal form and positivity for falsum
//! elimination, capture avoidance for every substituted formula, and the
//! eigenvariable conditions over the undischarged premises a step
//! actually depends on.

mod build;
mod file;
mod rules;

pub use build::{build_approximant_derivation, build_nnf_derivation, BuildError};
pub use file::{parse_derivation, write_derivation, FileError};
pub use rules::{apply_rule, RuleInput};

use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

use crate::syntax::{Formula, LabelId, OccPath};
use crate::transform::Direction;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RuleId {
    AndIntro,
    AndElim1,
    AndElim2,
    OrIntro1,
    OrIntro2,
    OrElim,
    BotIntro,
    BotElim,
    SubstShift,
    SubstShiftRev,
    SubstCopyElim,
    SubstCopyElimRev,
    LDualIntro,
    LDualIntroRev,
    LDummyIntroElim,
    LDummyIntroElimRev,
    LCRename,
    CLFreeElim,
    DualNotAnd,
    DualNotOr,
    DualNotNot,
    DualNotForall,
    DualNotExists,
    DualNotLabel,
    ForallIntro,
    ForallElim,
    ExistsIntro,
    ExistsElim,
    NegIntroFO,
    NegElimFO,
    EqIntro,
    EqElim1,
    EqElim2,
}

impl RuleId {
    pub fn name(self) -> &'static str {
        use RuleId::*;
        match self {
            AndIntro => "AndIntro",
            AndElim1 => "AndElim1",
            AndElim2 => "AndElim2",
            OrIntro1 => "OrIntro1",
            OrIntro2 => "OrIntro2",
            OrElim => "OrElim",
            BotIntro => "BotIntro",
            BotElim => "BotElim",
            SubstShift => "SubstShift",
            SubstShiftRev => "SubstShiftRev",
            SubstCopyElim => "SubstCopyElim",
            SubstCopyElimRev => "SubstCopyElimRev",
            LDualIntro => "LDualIntro",
            LDualIntroRev => "LDualIntroRev",
            LDummyIntroElim => "LDummyIntroElim",
            LDummyIntroElimRev => "LDummyIntroElimRev",
            LCRename => "LCRename",
            CLFreeElim => "CLFreeElim",
            DualNotAnd => "DualNotAnd",
            DualNotOr => "DualNotOr",
            DualNotNot => "DualNotNot",
            DualNotForall => "DualNotForall",
            DualNotExists => "DualNotExists",
            DualNotLabel => "DualNotLabel",
            ForallIntro => "ForallIntro",
            ForallElim => "ForallElim",
            ExistsIntro => "ExistsIntro",
            ExistsElim => "ExistsElim",
            NegIntroFO => "NegIntroFO",
            NegElimFO => "NegElimFO",
            EqIntro => "EqIntro",
            EqElim1 => "EqElim1",
            EqElim2 => "EqElim2",
        }
    }

    pub fn from_name(name: &str) -> Option<RuleId> {
        use RuleId::*;
        Some(match name {
            "AndIntro" => AndIntro,
            "AndElim1" => AndElim1,
            "AndElim2" => AndElim2,
            "OrIntro1" => OrIntro1,
            "OrIntro2" => OrIntro2,
            "OrElim" => OrElim,
            "BotIntro" => BotIntro,
            "BotElim" => BotElim,
            "SubstShift" => SubstShift,
            "SubstShiftRev" => SubstShiftRev,
            "SubstCopyElim" => SubstCopyElim,
            "SubstCopyElimRev" => SubstCopyElimRev,
            "LDualIntro" => LDualIntro,
            "LDualIntroRev" => LDualIntroRev,
            "LDummyIntroElim" => LDummyIntroElim,
            "LDummyIntroElimRev" => LDummyIntroElimRev,
            "LCRename" => LCRename,
            "CLFreeElim" => CLFreeElim,
            "DualNotAnd" => DualNotAnd,
            "DualNotOr" => DualNotOr,
            "DualNotNot" => DualNotNot,
            "DualNotForall" => DualNotForall,
            "DualNotExists" => DualNotExists,
            "DualNotLabel" => DualNotLabel,
            "ForallIntro" => ForallIntro,
            "ForallElim" => ForallElim,
            "ExistsIntro" => ExistsIntro,
            "ExistsElim" => ExistsElim,
            "NegIntroFO" => NegIntroFO,
            "NegElimFO" => NegElimFO,
            "EqIntro" => EqIntro,
            "EqElim1" => EqElim1,
            "EqElim2" => EqElim2,
            _ => return None,
        })
    }
}

/// Parameters of one rule application, present exactly as each rule
/// demands.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct RuleParams {
    /// Selected claim (or falsum) occurrence paths.
    pub claims: Vec<OccPath>,
    /// Fresh or target label id.
    pub fresh: Option<LabelId>,
    /// Substitution formulas, matched positionally with `claims` for
    /// falsum elimination; a single entry elsewhere.
    pub substs: Vec<Formula>,
    /// Eigenvariable, witness or equality variable.
    pub var: Option<String>,
    /// Direction for the bidirectional duality rules.
    pub dir: Direction,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RuleApplication {
    pub rule: RuleId,
    pub inputs: Vec<usize>,
    /// Occurrence rewritten by a deep-inference rule.
    pub path: Option<OccPath>,
    pub params: RuleParams,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Step {
    Premise {
        id: usize,
        formula: Formula,
    },
    Assume {
        id: usize,
        formula: Formula,
    },
    Infer {
        id: usize,
        app: RuleApplication,
        conclusion: Formula,
    },
    Discharge {
        id: usize,
        assume: usize,
        inputs: Vec<usize>,
        conclusion: Formula,
    },
}

impl Step {
    pub fn id(&self) -> usize {
        match self {
            Step::Premise { id, .. }
            | Step::Assume { id, .. }
            | Step::Infer { id, .. }
            | Step::Discharge { id, .. } => *id,
        }
    }

    pub fn formula(&self) -> &Formula {
        match self {
            Step::Premise { formula, .. } | Step::Assume { formula, .. } => formula,
            Step::Infer { conclusion, .. } | Step::Discharge { conclusion, .. } => conclusion,
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Derivation {
    pub steps: Vec<Step>,
}

impl Derivation {
    pub fn conclusion(&self) -> Option<&Formula> {
        self.steps.last().map(|s| s.formula())
    }
}

/// Structured reason for rejecting a step.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CheckError {
    #[error("rule expects {expected} inputs, got {got}")]
    WrongInputCount { expected: usize, got: usize },
    #[error("rule received a subproof where a formula was expected, or vice versa")]
    WrongInputKind,
    #[error("{rule}: {detail}")]
    WrongShape { rule: &'static str, detail: String },
    #[error("stated conclusion differs from the rule's result `{computed}`")]
    WrongConclusion { computed: String },
    #[error("{0}")]
    NotARedex(String),
    #[error("top formula not regular")]
    TopNotRegular,
    #[error("formula is not in strong negation normal form")]
    BotNotStrongNnf,
    #[error("replaced falsum at `{0}` is under a negation")]
    BotUnderNegation(OccPath),
    #[error("{claims} falsum occurrences selected but {substs} substitution formulas given")]
    BotParamMismatch { claims: usize, substs: usize },
    #[error("label L{0} is not fresh")]
    LabelNotFresh(LabelId),
    #[error("unsafe renaming to L{0}: free target claim in the body (condition 1)")]
    RenameUnsafeFreeTarget(LabelId),
    #[error(
        "unsafe renaming to L{0}: renamed claim captured by an existing occurrence (condition 2)"
    )]
    RenameUnsafeCapture(LabelId),
    #[error("label is not dummy")]
    NotDummy,
    #[error("claim occurrence is not free")]
    ClaimNotFree,
    #[error("substitution would capture the variable `{var}`")]
    Capture { var: String },
    #[error("eigenvariable `{var}` occurs free in {place}")]
    EigenvariableFree { var: String, place: String },
    #[error("principal formula is not first-order")]
    PremiseNotFo,
    #[error("missing parameter `{0}`")]
    MissingParam(&'static str),
    #[error("{0}")]
    PathError(String),
    #[error("referenced step {0} does not exist")]
    UnknownStep(usize),
    #[error("referenced step {0} is not visible from this scope")]
    NotVisible(usize),
    #[error("step ids must be strictly increasing")]
    IdOrder,
    #[error("premises may only appear outside subproofs")]
    PremiseInSubproof,
    #[error("discharge does not close the innermost open assumption")]
    DischargeMismatch,
    #[error("derivation ends with {0} unclosed subproofs")]
    UnclosedSubproof(usize),
    #[error("derivation has no steps")]
    Empty,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("step {step}: {error}")]
pub struct ProofError {
    pub step: usize,
    pub error: CheckError,
}

impl From<crate::transform::TransformError> for CheckError {
    fn from(e: crate::transform::TransformError) -> CheckError {
        use crate::transform::TransformError as T;
        match e {
            T::NotARedex { .. } => CheckError::NotARedex(e.to_string()),
            T::Capture { var, .. } => CheckError::Capture { var },
            T::Path(p) => CheckError::PathError(p.to_string()),
            T::Rename(crate::syntax::RenameError::FreeTargetClaim(k)) => {
                CheckError::RenameUnsafeFreeTarget(k)
            }
            T::Rename(crate::syntax::RenameError::CaptureByExistingLabel(k)) => {
                CheckError::RenameUnsafeCapture(k)
            }
            T::Rename(crate::syntax::RenameError::Path(p)) => CheckError::PathError(p.to_string()),
            other => CheckError::NotARedex(other.to_string()),
        }
    }
}

struct Entry {
    formula: Formula,
    /// Premise/assumption ids this step's derivation depends on.
    deps: BTreeSet<usize>,
    /// Present for discharge steps: the subproof as an object.
    sub: Option<(Formula, Formula)>,
}

/// Checks a derivation: scoping discipline, conclusion recomputation, and
/// every rule side condition. `Ok(())` means every step checks.
pub fn check_derivation(d: &Derivation) -> Result<(), ProofError> {
    if d.steps.is_empty() {
        return Err(ProofError {
            step: 0,
            error: CheckError::Empty,
        });
    }
    let mut entries: BTreeMap<usize, Entry> = BTreeMap::new();
    // scope stack: (assume id that opened it, ids visible in it)
    let mut scopes: Vec<(Option<usize>, BTreeSet<usize>)> = vec![(None, BTreeSet::new())];
    let mut last_id = 0usize;

    for step in &d.steps {
        let id = step.id();
        let fail = |error: CheckError| ProofError { step: id, error };
        if id <= last_id && last_id != 0 {
            return Err(fail(CheckError::IdOrder));
        }
        last_id = id;

        let visible = |sid: usize, scopes: &[(Option<usize>, BTreeSet<usize>)]| {
            scopes.iter().any(|(_, ids)| ids.contains(&sid))
        };

        match step {
            Step::Premise { formula, .. } => {
                if scopes.len() > 1 {
                    return Err(fail(CheckError::PremiseInSubproof));
                }
                entries.insert(
                    id,
                    Entry {
                        formula: formula.clone(),
                        deps: [id].into(),
                        sub: None,
                    },
                );
                scopes.last_mut().expect("base scope").1.insert(id);
            }
            Step::Assume { formula, .. } => {
                entries.insert(
                    id,
                    Entry {
                        formula: formula.clone(),
                        deps: [id].into(),
                        sub: None,
                    },
                );
                let mut ids = BTreeSet::new();
                ids.insert(id);
                scopes.push((Some(id), ids));
            }
            Step::Discharge {
                assume,
                inputs,
                conclusion,
                ..
            } => {
                let (opened_by, in_scope) = scopes.last().expect("base scope");
                if *opened_by != Some(*assume) {
                    return Err(fail(CheckError::DischargeMismatch));
                }
                if inputs.len() != 1 {
                    return Err(fail(CheckError::WrongInputCount {
                        expected: 1,
                        got: inputs.len(),
                    }));
                }
                let j = inputs[0];
                if !entries.contains_key(&j) {
                    return Err(fail(CheckError::UnknownStep(j)));
                }
                if !in_scope.contains(&j) {
                    return Err(fail(CheckError::NotVisible(j)));
                }
                let inner = &entries[&j];
                if inner.sub.is_some() {
                    return Err(fail(CheckError::WrongInputKind));
                }
                if inner.formula != *conclusion {
                    return Err(fail(CheckError::WrongConclusion {
                        computed: inner.formula.to_string(),
                    }));
                }
                let mut deps = inner.deps.clone();
                deps.remove(assume);
                let assumption = entries[assume].formula.clone();
                entries.insert(
                    id,
                    Entry {
                        formula: conclusion.clone(),
                        deps,
                        sub: Some((assumption, conclusion.clone())),
                    },
                );
                scopes.pop();
                scopes.last_mut().expect("base scope").1.insert(id);
            }
            Step::Infer {
                app, conclusion, ..
            } => {
                let mut ins: Vec<RuleInput> = Vec::new();
                let mut deps: BTreeSet<usize> = BTreeSet::new();
                for &sid in &app.inputs {
                    let Some(entry) = entries.get(&sid) else {
                        return Err(fail(CheckError::UnknownStep(sid)));
                    };
                    if !visible(sid, &scopes) {
                        return Err(fail(CheckError::NotVisible(sid)));
                    }
                    deps.extend(entry.deps.iter().copied());
                    match &entry.sub {
                        Some((assumption, concl)) => ins.push(RuleInput::Subproof {
                            assumption,
                            conclusion: concl,
                        }),
                        None => ins.push(RuleInput::Formula(&entry.formula)),
                    }
                }
                let computed = apply_rule(
                    app.rule,
                    app.path.as_ref(),
                    &app.params,
                    &ins,
                    Some(conclusion),
                )
                .map_err(&fail)?;
                if computed != *conclusion {
                    return Err(fail(CheckError::WrongConclusion {
                        computed: computed.to_string(),
                    }));
                }
                // eigenvariable conditions over the undischarged premises
                match app.rule {
                    RuleId::ForallIntro => {
                        let var = app.params.var.clone().expect("checked by apply_rule");
                        for dep in &deps {
                            if entries[dep].formula.free_variables().contains(&var) {
                                return Err(fail(CheckError::EigenvariableFree {
                                    var,
                                    place: format!("undischarged premise {dep}"),
                                }));
                            }
                        }
                    }
                    RuleId::ExistsElim => {
                        let var = app.params.var.clone().expect("checked by apply_rule");
                        // the subproof's remaining dependencies exclude its
                        // own assumption already
                        let sub_deps: BTreeSet<usize> = app
                            .inputs
                            .iter()
                            .filter(|sid| entries[sid].sub.is_some())
                            .flat_map(|sid| entries[sid].deps.iter().copied())
                            .collect();
                        for dep in &sub_deps {
                            if entries[dep].formula.free_variables().contains(&var) {
                                return Err(fail(CheckError::EigenvariableFree {
                                    var,
                                    place: format!("undischarged premise {dep}"),
                                }));
                            }
                        }
                    }
                    _ => {}
                }
                entries.insert(
                    id,
                    Entry {
                        formula: conclusion.clone(),
                        deps,
                        sub: None,
                    },
                );
                scopes.last_mut().expect("base scope").1.insert(id);
            }
        }
    }
    if scopes.len() > 1 {
        return Err(ProofError {
            step: last_id,
            error: CheckError::UnclosedSubproof(scopes.len() - 1),
        });
    }
    Ok(())
}
