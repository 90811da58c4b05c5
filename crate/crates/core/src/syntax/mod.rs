//! Formula representation, parsing and printing, occurrence addressing,
//! reference resolution, regularity and safe label renaming.
//!
//! Subformulas are always identified *by occurrence*: two syntactically
//! equal subtrees at different positions are distinct occurrences,
//! addressed by an [`OccPath`] of child indices from the root.

mod parse;

pub use parse::{parse_formula, parse_formula_inferred};

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use thiserror::Error;

/// Identifier of a label symbol; `L3` has id 3 and claim atom `@L3`.
pub type LabelId = u32;

/// Sign of an occurrence: even or odd number of negations above it.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Polarity {
    Positive,
    Negative,
}

/// Declared relation symbols with their arities. Equality is built in and
/// never declared.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Vocabulary {
    preds: BTreeMap<String, usize>,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum VocabError {
    #[error("predicate name is empty")]
    EmptyName,
    #[error("predicate name `{0}` matches the reserved label pattern L<digits>")]
    LabelLikeName(String),
    #[error("predicate name `{0}` must start with an uppercase letter and contain only alphanumerics or `_`")]
    BadName(String),
    #[error("predicate `{0}` declared twice")]
    Duplicate(String),
}

/// True for tokens of shape `L` followed by one or more digits.
pub fn is_label_token(name: &str) -> bool {
    let mut chars = name.chars();
    chars.next() == Some('L') && {
        let rest: Vec<char> = chars.collect();
        !rest.is_empty() && rest.iter().all(|c| c.is_ascii_digit())
    }
}

fn valid_pred_name(name: &str) -> bool {
    let mut chars = name.chars();
    match chars.next() {
        Some(c) if c.is_ascii_uppercase() => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

impl Vocabulary {
    pub fn new() -> Self {
        Self::default()
    }

    /// Convenience constructor; panics on invalid names (use `declare` for
    /// fallible construction).
    pub fn from_pairs(pairs: &[(&str, usize)]) -> Self {
        let mut v = Self::new();
        for (name, arity) in pairs {
            v.declare(name, *arity).expect("invalid vocabulary");
        }
        v
    }

    pub fn declare(&mut self, name: &str, arity: usize) -> Result<(), VocabError> {
        if name.is_empty() {
            return Err(VocabError::EmptyName);
        }
        if is_label_token(name) {
            return Err(VocabError::LabelLikeName(name.to_string()));
        }
        if !valid_pred_name(name) {
            return Err(VocabError::BadName(name.to_string()));
        }
        if self.preds.contains_key(name) {
            return Err(VocabError::Duplicate(name.to_string()));
        }
        self.preds.insert(name.to_string(), arity);
        Ok(())
    }

    pub fn arity(&self, name: &str) -> Option<usize> {
        self.preds.get(name).copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, usize)> {
        self.preds.iter().map(|(n, a)| (n.as_str(), *a))
    }

    pub fn len(&self) -> usize {
        self.preds.len()
    }

    pub fn is_empty(&self) -> bool {
        self.preds.is_empty()
    }

    /// Extends this vocabulary with another; duplicate names must agree on
    /// arity.
    pub fn merge(&mut self, other: &Vocabulary) -> Result<(), VocabError> {
        for (name, arity) in other.iter() {
            match self.preds.get(name) {
                Some(a) if *a == arity => {}
                Some(_) => return Err(VocabError::Duplicate(name.to_string())),
                None => {
                    self.preds.insert(name.to_string(), arity);
                }
            }
        }
        Ok(())
    }
}

/// Occurrence address: the sequence of child indices from the root.
///
/// Unary nodes have the single child index 0; conjunction and disjunction
/// have children 0 (left) and 1 (right).
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct OccPath(Vec<u8>);

impl OccPath {
    pub fn root() -> Self {
        OccPath(Vec::new())
    }

    pub fn from_steps(steps: &[u8]) -> Self {
        OccPath(steps.to_vec())
    }

    pub fn steps(&self) -> &[u8] {
        &self.0
    }

    pub fn is_root(&self) -> bool {
        self.0.is_empty()
    }

    pub fn child(&self, i: u8) -> Self {
        let mut v = self.0.clone();
        v.push(i);
        OccPath(v)
    }

    pub fn parent(&self) -> Option<Self> {
        if self.0.is_empty() {
            None
        } else {
            Some(OccPath(self.0[..self.0.len() - 1].to_vec()))
        }
    }

    pub fn starts_with(&self, prefix: &OccPath) -> bool {
        self.0.len() >= prefix.0.len() && self.0[..prefix.0.len()] == prefix.0[..]
    }

    /// The remainder of `self` relative to an ancestor `prefix`.
    pub fn strip_prefix(&self, prefix: &OccPath) -> Option<OccPath> {
        if self.starts_with(prefix) {
            Some(OccPath(self.0[prefix.0.len()..].to_vec()))
        } else {
            None
        }
    }

    pub fn join(&self, rel: &OccPath) -> OccPath {
        let mut v = self.0.clone();
        v.extend_from_slice(&rel.0);
        OccPath(v)
    }

    pub fn depth(&self) -> usize {
        self.0.len()
    }

    /// Parses a dotted path such as `0.1.0`; the empty string is the root.
    pub fn parse(text: &str) -> Option<OccPath> {
        let t = text.trim();
        if t.is_empty() {
            return Some(OccPath::root());
        }
        let mut steps = Vec::new();
        for part in t.split('.') {
            steps.push(part.parse::<u8>().ok()?);
        }
        Some(OccPath(steps))
    }
}

impl fmt::Display for OccPath {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for s in &self.0 {
            if !first {
                write!(f, ".")?;
            }
            write!(f, "{s}")?;
            first = false;
        }
        Ok(())
    }
}

/// Syntax tree of the logic: first-order constructs plus label operators
/// and claim atoms.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Formula {
    Falsum,
    /// First-order atom `P(x1,…,xn)`; nullary atoms have no argument list.
    Atom(String, Vec<String>),
    Equal(String, String),
    /// Claim atom `@Lk`, jumping back to the nearest enclosing `Lk`.
    Claim(LabelId),
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Exists(String, Box<Formula>),
    Forall(String, Box<Formula>),
    /// Label operator `Lk: φ`.
    Labeled(LabelId, Box<Formula>),
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PathError {
    #[error("path `{0}` does not address a node of the formula")]
    Invalid(OccPath),
    #[error("path `{path}` addresses a {found}, expected {expected}")]
    WrongNode {
        path: OccPath,
        expected: &'static str,
        found: &'static str,
    },
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RenameError {
    #[error("renaming to L{0} is unsafe: the labeled subformula contains a free occurrence of @L{0} (condition 1)")]
    FreeTargetClaim(LabelId),
    #[error("renaming to L{0} is unsafe: a renamed claim lies in the scope of an existing L{0} occurrence (condition 2)")]
    CaptureByExistingLabel(LabelId),
    #[error(transparent)]
    Path(#[from] PathError),
}

impl Formula {
    // Convenience constructors, mostly for tests and builders.
    pub fn atom(p: &str, args: &[&str]) -> Formula {
        Formula::Atom(p.to_string(), args.iter().map(|s| s.to_string()).collect())
    }
    pub fn eq(x: &str, y: &str) -> Formula {
        Formula::Equal(x.to_string(), y.to_string())
    }
    #[allow(clippy::should_implement_trait)]
    pub fn not(f: Formula) -> Formula {
        Formula::Not(Box::new(f))
    }
    pub fn and(a: Formula, b: Formula) -> Formula {
        Formula::And(Box::new(a), Box::new(b))
    }
    pub fn or(a: Formula, b: Formula) -> Formula {
        Formula::Or(Box::new(a), Box::new(b))
    }
    pub fn exists(x: &str, f: Formula) -> Formula {
        Formula::Exists(x.to_string(), Box::new(f))
    }
    pub fn forall(x: &str, f: Formula) -> Formula {
        Formula::Forall(x.to_string(), Box::new(f))
    }
    pub fn labeled(k: LabelId, f: Formula) -> Formula {
        Formula::Labeled(k, Box::new(f))
    }

    pub fn children(&self) -> Vec<&Formula> {
        match self {
            Formula::Falsum | Formula::Atom(..) | Formula::Equal(..) | Formula::Claim(_) => {
                Vec::new()
            }
            Formula::Not(c)
            | Formula::Exists(_, c)
            | Formula::Forall(_, c)
            | Formula::Labeled(_, c) => vec![c],
            Formula::And(a, b) | Formula::Or(a, b) => vec![a, b],
        }
    }

    pub fn node_count(&self) -> usize {
        1 + self
            .children()
            .iter()
            .map(|c| c.node_count())
            .sum::<usize>()
    }

    pub fn kind_name(&self) -> &'static str {
        match self {
            Formula::Falsum => "falsum",
            Formula::Atom(..) => "atom",
            Formula::Equal(..) => "equality",
            Formula::Claim(_) => "claim",
            Formula::Not(_) => "negation",
            Formula::And(..) => "conjunction",
            Formula::Or(..) => "disjunction",
            Formula::Exists(..) => "existential",
            Formula::Forall(..) => "universal",
            Formula::Labeled(..) => "label",
        }
    }

    /// The subformula occurrence addressed by `path`.
    pub fn subformula(&self, path: &OccPath) -> Result<&Formula, PathError> {
        let mut cur = self;
        for &step in path.steps() {
            let children = cur.children();
            cur = children
                .get(step as usize)
                .copied()
                .ok_or_else(|| PathError::Invalid(path.clone()))?;
        }
        Ok(cur)
    }

    /// Functional replacement of the occurrence at `path`.
    pub fn replace_at(&self, path: &OccPath, new: Formula) -> Result<Formula, PathError> {
        fn go(
            f: &Formula,
            steps: &[u8],
            new: Formula,
            full: &OccPath,
        ) -> Result<Formula, PathError> {
            let Some((&step, rest)) = steps.split_first() else {
                return Ok(new);
            };
            let bad = || PathError::Invalid(full.clone());
            Ok(match f {
                Formula::Not(c) if step == 0 => Formula::not(go(c, rest, new, full)?),
                Formula::Exists(x, c) if step == 0 => {
                    Formula::Exists(x.clone(), Box::new(go(c, rest, new, full)?))
                }
                Formula::Forall(x, c) if step == 0 => {
                    Formula::Forall(x.clone(), Box::new(go(c, rest, new, full)?))
                }
                Formula::Labeled(k, c) if step == 0 => {
                    Formula::Labeled(*k, Box::new(go(c, rest, new, full)?))
                }
                Formula::And(a, b) => match step {
                    0 => Formula::And(Box::new(go(a, rest, new, full)?), b.clone()),
                    1 => Formula::And(a.clone(), Box::new(go(b, rest, new, full)?)),
                    _ => return Err(bad()),
                },
                Formula::Or(a, b) => match step {
                    0 => Formula::Or(Box::new(go(a, rest, new, full)?), b.clone()),
                    1 => Formula::Or(a.clone(), Box::new(go(b, rest, new, full)?)),
                    _ => return Err(bad()),
                },
                _ => return Err(bad()),
            })
        }
        go(self, path.steps(), new, path)
    }

    /// Simultaneously replaces several occurrences. Paths must be pairwise
    /// non-nested.
    pub fn replace_many(&self, repls: &[(OccPath, Formula)]) -> Result<Formula, PathError> {
        let mut out = self.clone();
        for (p, g) in repls {
            for (q, _) in repls {
                if p != q && p.starts_with(q) {
                    return Err(PathError::Invalid(p.clone()));
                }
            }
            out = out.replace_at(p, g.clone())?;
        }
        Ok(out)
    }

    /// All occurrences in pre-order, with their paths.
    pub fn occurrences(&self) -> Vec<(OccPath, &Formula)> {
        let mut out = Vec::new();
        fn walk<'a>(f: &'a Formula, path: OccPath, out: &mut Vec<(OccPath, &'a Formula)>) {
            out.push((path.clone(), f));
            for (i, c) in f.children().into_iter().enumerate() {
                walk(c, path.child(i as u8), out);
            }
        }
        walk(self, OccPath::root(), &mut out);
        out
    }

    /// Free variables: claims contribute nothing, labels are transparent.
    pub fn free_variables(&self) -> BTreeSet<String> {
        match self {
            Formula::Falsum | Formula::Claim(_) => BTreeSet::new(),
            Formula::Atom(_, args) => args.iter().cloned().collect(),
            Formula::Equal(x, y) => [x.clone(), y.clone()].into_iter().collect(),
            Formula::Not(c) | Formula::Labeled(_, c) => c.free_variables(),
            Formula::And(a, b) | Formula::Or(a, b) => {
                let mut s = a.free_variables();
                s.extend(b.free_variables());
                s
            }
            Formula::Exists(x, c) | Formula::Forall(x, c) => {
                let mut s = c.free_variables();
                s.remove(x);
                s
            }
        }
    }

    /// Every variable occurring in the formula, free or bound.
    pub fn all_variables(&self) -> BTreeSet<String> {
        let mut s = BTreeSet::new();
        fn walk(f: &Formula, s: &mut BTreeSet<String>) {
            match f {
                Formula::Atom(_, args) => s.extend(args.iter().cloned()),
                Formula::Equal(x, y) => {
                    s.insert(x.clone());
                    s.insert(y.clone());
                }
                Formula::Exists(x, _) | Formula::Forall(x, _) => {
                    s.insert(x.clone());
                }
                _ => {}
            }
            for c in f.children() {
                walk(c, s);
            }
        }
        walk(self, &mut s);
        s
    }

    /// Predicate names used, with arities; inconsistent use yields `None`
    /// for that predicate.
    pub fn predicates(&self) -> BTreeMap<String, Option<usize>> {
        let mut m: BTreeMap<String, Option<usize>> = BTreeMap::new();
        for (_, f) in self.occurrences() {
            if let Formula::Atom(p, args) = f {
                m.entry(p.clone())
                    .and_modify(|slot| {
                        if *slot != Some(args.len()) {
                            *slot = None;
                        }
                    })
                    .or_insert(Some(args.len()));
            }
        }
        m
    }

    /// True when the formula contains neither claims nor labels.
    pub fn is_fo(&self) -> bool {
        !matches!(self, Formula::Claim(_) | Formula::Labeled(..))
            && self.children().iter().all(|c| c.is_fo())
    }

    pub fn label_occurrences(&self) -> Vec<(OccPath, LabelId)> {
        self.occurrences()
            .into_iter()
            .filter_map(|(p, f)| match f {
                Formula::Labeled(k, _) => Some((p, *k)),
                _ => None,
            })
            .collect()
    }

    pub fn claim_occurrences(&self) -> Vec<(OccPath, LabelId)> {
        self.occurrences()
            .into_iter()
            .filter_map(|(p, f)| match f {
                Formula::Claim(k) => Some((p, *k)),
                _ => None,
            })
            .collect()
    }

    pub fn max_label_id(&self) -> Option<LabelId> {
        self.occurrences()
            .into_iter()
            .filter_map(|(_, f)| match f {
                Formula::Claim(k) | Formula::Labeled(k, _) => Some(*k),
                _ => None,
            })
            .max()
    }

    /// Depth of the deepest chain of nested label operators.
    pub fn label_nesting_depth(&self) -> usize {
        fn go(f: &Formula) -> usize {
            let here = usize::from(matches!(f, Formula::Labeled(..)));
            here + f.children().iter().map(|c| go(c)).max().unwrap_or(0)
        }
        go(self)
    }

    /// Only atomic subformulas (first-order atoms or claims) are negated.
    pub fn is_weak_nnf(&self) -> bool {
        match self {
            Formula::Not(c) => matches!(
                **c,
                Formula::Falsum | Formula::Atom(..) | Formula::Equal(..) | Formula::Claim(_)
            ),
            _ => self.children().iter().all(|c| c.is_weak_nnf()),
        }
    }

    /// Only first-order atoms are negated; negated claims are ruled out.
    pub fn is_strong_nnf(&self) -> bool {
        match self {
            Formula::Not(c) => matches!(
                **c,
                Formula::Falsum | Formula::Atom(..) | Formula::Equal(..)
            ),
            _ => self.children().iter().all(|c| c.is_strong_nnf()),
        }
    }

    /// Substitutes variable `to` for every free occurrence of `from`.
    /// Fails when a substituted occurrence would be captured by a
    /// quantifier binding `to`.
    pub fn subst_var(&self, from: &str, to: &str) -> Result<Formula, String> {
        fn go(f: &Formula, from: &str, to: &str) -> Result<Formula, String> {
            Ok(match f {
                Formula::Falsum | Formula::Claim(_) => f.clone(),
                Formula::Atom(p, args) => Formula::Atom(
                    p.clone(),
                    args.iter()
                        .map(|a| if a == from { to.to_string() } else { a.clone() })
                        .collect(),
                ),
                Formula::Equal(x, y) => Formula::Equal(
                    if x == from { to.to_string() } else { x.clone() },
                    if y == from { to.to_string() } else { y.clone() },
                ),
                Formula::Not(c) => Formula::not(go(c, from, to)?),
                Formula::And(a, b) => Formula::and(go(a, from, to)?, go(b, from, to)?),
                Formula::Or(a, b) => Formula::or(go(a, from, to)?, go(b, from, to)?),
                Formula::Labeled(k, c) => Formula::Labeled(*k, Box::new(go(c, from, to)?)),
                Formula::Exists(x, c) | Formula::Forall(x, c) => {
                    let make = |x: String, c: Formula| match f {
                        Formula::Exists(..) => Formula::Exists(x, Box::new(c)),
                        _ => Formula::Forall(x, Box::new(c)),
                    };
                    if x == from {
                        // binder shadows the substituted variable
                        make(x.clone(), (**c).clone())
                    } else if x == to && c.free_variables().contains(from) {
                        return Err(format!(
                            "substituting {to} for {from} would be captured by a quantifier on {to}"
                        ));
                    } else {
                        make(x.clone(), go(c, from, to)?)
                    }
                }
            })
        }
        go(self, from, to)
    }

    /// Checks atoms against a vocabulary: declared predicates, matching
    /// arities.
    pub fn validate(&self, vocab: &Vocabulary) -> Result<(), String> {
        for (_, f) in self.occurrences() {
            if let Formula::Atom(p, args) = f {
                match vocab.arity(p) {
                    None => return Err(format!("undeclared predicate `{p}`")),
                    Some(a) if a != args.len() => {
                        return Err(format!(
                            "predicate `{p}` has arity {a}, applied to {} arguments",
                            args.len()
                        ))
                    }
                    _ => {}
                }
            }
        }
        Ok(())
    }
}

/// Path of the nearest ancestor label occurrence with the claim's id, or
/// `None` when the claim occurrence is free.
pub fn resolve_reference(f: &Formula, claim: &OccPath) -> Result<Option<OccPath>, PathError> {
    let node = f.subformula(claim)?;
    let Formula::Claim(id) = node else {
        return Err(PathError::WrongNode {
            path: claim.clone(),
            expected: "claim",
            found: node.kind_name(),
        });
    };
    let mut p = claim.clone();
    while let Some(parent) = p.parent() {
        if let Formula::Labeled(k, _) = f.subformula(&parent)? {
            if k == id {
                return Ok(Some(parent));
            }
        }
        p = parent;
    }
    Ok(None)
}

/// True when the claim occurrence has no same-label ancestor.
pub fn is_free_claim(f: &Formula, claim: &OccPath) -> Result<bool, PathError> {
    Ok(resolve_reference(f, claim)?.is_none())
}

/// Claim occurrences in the strict scope of the label occurrence at
/// `label`: reachable without crossing another occurrence of the same
/// label symbol.
pub fn claims_in_strict_scope(f: &Formula, label: &OccPath) -> Result<Vec<OccPath>, PathError> {
    let node = f.subformula(label)?;
    let Formula::Labeled(id, body) = node else {
        return Err(PathError::WrongNode {
            path: label.clone(),
            expected: "label",
            found: node.kind_name(),
        });
    };
    let mut out = Vec::new();
    fn walk(f: &Formula, id: LabelId, path: OccPath, out: &mut Vec<OccPath>) {
        match f {
            Formula::Claim(k) if *k == id => out.push(path),
            Formula::Labeled(k, _) if *k == id => {} // inner occurrence intercepts
            _ => {
                for (i, c) in f.children().into_iter().enumerate() {
                    walk(c, id, path.child(i as u8), out);
                }
            }
        }
    }
    walk(body, *id, label.child(0), &mut out);
    Ok(out)
}

/// A label occurrence is dummy when no claim lies in its strict scope.
pub fn is_dummy_label(f: &Formula, label: &OccPath) -> Result<bool, PathError> {
    Ok(claims_in_strict_scope(f, label)?.is_empty())
}

/// Label ids that have at least one free claim occurrence in `f`.
pub fn free_claim_ids(f: &Formula) -> BTreeSet<LabelId> {
    let mut out = BTreeSet::new();
    for (p, id) in f.claim_occurrences() {
        if resolve_reference(f, &p).expect("valid path").is_none() {
            out.insert(id);
        }
    }
    out
}

/// Positive iff the number of negation nodes strictly above the occurrence
/// is even; quantifiers, connectives and labels do not flip polarity.
pub fn occurrence_polarity(f: &Formula, path: &OccPath) -> Result<Polarity, PathError> {
    f.subformula(path)?;
    let mut negations = 0usize;
    let mut p = path.clone();
    while let Some(parent) = p.parent() {
        if matches!(f.subformula(&parent)?, Formula::Not(_)) {
            negations += 1;
        }
        p = parent;
    }
    Ok(if negations.is_multiple_of(2) {
        Polarity::Positive
    } else {
        Polarity::Negative
    })
}

/// A formula is regular when no label symbol occurs more than once and no
/// label coexists with a free claim of the same name.
pub fn is_regular(f: &Formula) -> bool {
    let labels = f.label_occurrences();
    let mut seen = BTreeSet::new();
    for (_, id) in &labels {
        if !seen.insert(*id) {
            return false;
        }
    }
    let free = free_claim_ids(f);
    labels.iter().all(|(_, id)| !free.contains(id))
}

/// Deterministic regularisation: every offending label occurrence (a
/// duplicated label, or one clashing with a free claim of the same name)
/// is renamed, together with the claims in its strict scope, to a fresh id.
/// Fresh ids start one past the largest id occurring in the input and are
/// assigned left-to-right in post-order. Free claims are untouched, and
/// regular formulas come back unchanged.
pub fn regularize(f: &Formula) -> Formula {
    let labels = f.label_occurrences();
    let mut counts: BTreeMap<LabelId, usize> = BTreeMap::new();
    for (_, id) in &labels {
        *counts.entry(*id).or_insert(0) += 1;
    }
    let free = free_claim_ids(f);
    let tainted: BTreeSet<LabelId> = counts
        .iter()
        .filter(|(id, n)| **n > 1 || free.contains(id))
        .map(|(id, _)| *id)
        .collect();
    if tainted.is_empty() {
        return f.clone();
    }

    let mut next = f.max_label_id().map_or(0, |m| m + 1);
    let mut out = f.clone();
    // Post-order positions are stable under renaming (the tree shape never
    // changes), so collect them once.
    let mut post: Vec<OccPath> = Vec::new();
    fn post_walk(f: &Formula, path: OccPath, out: &mut Vec<OccPath>) {
        for (i, c) in f.children().into_iter().enumerate() {
            post_walk(c, path.child(i as u8), out);
        }
        if matches!(f, Formula::Labeled(..)) {
            out.push(path);
        }
    }
    post_walk(f, OccPath::root(), &mut post);

    for path in post {
        let Formula::Labeled(id, _) = out.subformula(&path).expect("stable path") else {
            unreachable!()
        };
        if tainted.contains(id) {
            out = rename_label_unchecked(&out, &path, next);
            next += 1;
        }
    }
    out
}

/// Renames the label occurrence at `path` and the claims in its strict
/// scope without safety checks. Callers must know the renaming is safe.
fn rename_label_unchecked(f: &Formula, path: &OccPath, new_id: LabelId) -> Formula {
    let claims = claims_in_strict_scope(f, path).expect("label path");
    let mut out = f.clone();
    for c in claims {
        out = out
            .replace_at(&c, Formula::Claim(new_id))
            .expect("claim path");
    }
    let Formula::Labeled(_, body) = out.subformula(path).expect("label path") else {
        unreachable!()
    };
    let relabeled = Formula::Labeled(new_id, body.clone());
    out.replace_at(path, relabeled).expect("label path")
}

/// Safe renaming of the label occurrence at `label` (and all claims in its
/// strict scope) to `new_id`. Fails when the renaming violates either
/// safety condition:
///
/// 1. the labeled subformula contains a free occurrence of the target
///    claim, or
/// 2. a renamed claim would fall in the scope of an existing occurrence of
///    the target label inside the body.
pub fn rename_label(f: &Formula, label: &OccPath, new_id: LabelId) -> Result<Formula, RenameError> {
    let node = f.subformula(label)?;
    let Formula::Labeled(_, body) = node else {
        return Err(PathError::WrongNode {
            path: label.clone(),
            expected: "label",
            found: node.kind_name(),
        }
        .into());
    };
    // Condition 1: no free occurrence of @new_id inside the body.
    for (rel, id) in body.claim_occurrences() {
        if id == new_id && resolve_reference(body, &rel).expect("claim path").is_none() {
            return Err(RenameError::FreeTargetClaim(new_id));
        }
    }
    // Condition 2: no renamed claim in the scope of an existing new_id
    // label inside the body.
    let renamed = claims_in_strict_scope(f, label)?;
    let inner_labels: Vec<OccPath> = f
        .label_occurrences()
        .into_iter()
        .filter(|(p, id)| *id == new_id && p.starts_with(label) && p != label)
        .map(|(p, _)| p)
        .collect();
    for claim in &renamed {
        if inner_labels.iter().any(|lp| claim.starts_with(lp)) {
            return Err(RenameError::CaptureByExistingLabel(new_id));
        }
    }
    Ok(rename_label_unchecked(f, label, new_id))
}

/// Canonical rendering; `parse_formula` of the output reproduces the
/// formula exactly.
pub fn print_formula(f: &Formula) -> String {
    f.to_string()
}

fn atomic(f: &Formula) -> bool {
    matches!(
        f,
        Formula::Falsum | Formula::Atom(..) | Formula::Equal(..) | Formula::Claim(_)
    )
}

impl fmt::Display for Formula {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn bin_left(f: &Formula, out: &mut fmt::Formatter<'_>) -> fmt::Result {
            // Quantifiers extend maximally right, so they are always
            // parenthesized in left operand position.
            if matches!(
                f,
                Formula::And(..) | Formula::Or(..) | Formula::Exists(..) | Formula::Forall(..)
            ) {
                write!(out, "({f})")
            } else {
                write!(out, "{f}")
            }
        }
        fn bin_right(f: &Formula, out: &mut fmt::Formatter<'_>) -> fmt::Result {
            if matches!(f, Formula::And(..) | Formula::Or(..)) {
                write!(out, "({f})")
            } else {
                write!(out, "{f}")
            }
        }
        fn body(f: &Formula, out: &mut fmt::Formatter<'_>) -> fmt::Result {
            if matches!(f, Formula::And(..) | Formula::Or(..)) {
                write!(out, "({f})")
            } else {
                write!(out, "{f}")
            }
        }
        match self {
            Formula::Falsum => write!(out, "bot"),
            Formula::Atom(p, args) => {
                if args.is_empty() {
                    write!(out, "{p}")
                } else {
                    write!(out, "{p}({})", args.join(","))
                }
            }
            Formula::Equal(x, y) => write!(out, "{x} = {y}"),
            Formula::Claim(k) => write!(out, "@L{k}"),
            Formula::Not(c) => {
                if matches!(**c, Formula::Falsum | Formula::Atom(..) | Formula::Claim(_)) {
                    write!(out, "~{c}")
                } else {
                    write!(out, "~({c})")
                }
            }
            Formula::And(a, b) => {
                bin_left(a, out)?;
                write!(out, " & ")?;
                bin_right(b, out)
            }
            Formula::Or(a, b) => {
                bin_left(a, out)?;
                write!(out, " | ")?;
                bin_right(b, out)
            }
            Formula::Exists(x, c) => {
                write!(out, "exists {x}. ")?;
                body(c, out)
            }
            Formula::Forall(x, c) => {
                write!(out, "forall {x}. ")?;
                body(c, out)
            }
            Formula::Labeled(k, c) => {
                write!(out, "L{k}: ")?;
                // Chains of labels and tight prefix units stay bare; only
                // binaries and equalities need the parens.
                let bare = (atomic(c) && !matches!(**c, Formula::Equal(..)))
                    || matches!(**c, Formula::Labeled(..) | Formula::Not(..));
                if bare {
                    write!(out, "{c}")
                } else {
                    write!(out, "({c})")
                }
            }
        }
    }
}
