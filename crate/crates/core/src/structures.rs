//! Finite relational structures, assignments, classical Tarski evaluation
//! of the first-order fragment, and exhaustive small-structure enumeration.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use thiserror::Error;

use crate::syntax::{Formula, Vocabulary};

/// A finite relational structure. Elements are `0..domain_size`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Structure {
    domain_size: usize,
    vocab: Vocabulary,
    relations: BTreeMap<String, BTreeSet<Vec<usize>>>,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ModelError {
    #[error("domain must be nonempty")]
    EmptyDomain,
    #[error("tuple {tuple:?} for `{rel}` has arity {} but `{rel}` is declared with arity {arity}", tuple.len())]
    TupleArity {
        rel: String,
        tuple: Vec<usize>,
        arity: usize,
    },
    #[error("tuple {tuple:?} for `{rel}` mentions an element outside the domain 0..{domain}")]
    OutOfRange {
        rel: String,
        tuple: Vec<usize>,
        domain: usize,
    },
    #[error("relation `{0}` is not declared in the vocabulary")]
    UndeclaredRelation(String),
    #[error("duplicate relation block for `{0}`")]
    DuplicateRelation(String),
    #[error("{line}: {msg}")]
    Format { line: usize, msg: String },
    #[error(transparent)]
    Vocab(#[from] crate::syntax::VocabError),
}

impl Structure {
    pub fn new(domain_size: usize, vocab: Vocabulary) -> Result<Self, ModelError> {
        if domain_size == 0 {
            return Err(ModelError::EmptyDomain);
        }
        let relations = vocab
            .iter()
            .map(|(n, _)| (n.to_string(), BTreeSet::new()))
            .collect();
        Ok(Structure {
            domain_size,
            vocab,
            relations,
        })
    }

    pub fn domain_size(&self) -> usize {
        self.domain_size
    }

    pub fn vocab(&self) -> &Vocabulary {
        &self.vocab
    }

    pub fn insert_tuple(&mut self, rel: &str, tuple: Vec<usize>) -> Result<(), ModelError> {
        let Some(arity) = self.vocab.arity(rel) else {
            return Err(ModelError::UndeclaredRelation(rel.to_string()));
        };
        if tuple.len() != arity {
            return Err(ModelError::TupleArity {
                rel: rel.to_string(),
                tuple,
                arity,
            });
        }
        if tuple.iter().any(|&e| e >= self.domain_size) {
            return Err(ModelError::OutOfRange {
                rel: rel.to_string(),
                tuple,
                domain: self.domain_size,
            });
        }
        self.relations.get_mut(rel).expect("declared").insert(tuple);
        Ok(())
    }

    pub fn holds(&self, rel: &str, tuple: &[usize]) -> bool {
        self.relations
            .get(rel)
            .is_some_and(|set| set.contains(tuple))
    }

    pub fn tuples(&self, rel: &str) -> impl Iterator<Item = &Vec<usize>> {
        self.relations.get(rel).into_iter().flatten()
    }

    /// Digraph constructor over the vocabulary `{E : 2}`.
    pub fn digraph(n: usize, edges: &[(usize, usize)]) -> Structure {
        let vocab = Vocabulary::from_pairs(&[("E", 2)]);
        let mut m = Structure::new(n, vocab).expect("nonempty");
        for &(a, b) in edges {
            m.insert_tuple("E", vec![a, b]).expect("edge in range");
        }
        m
    }

    /// Expands the structure with extra (empty) relations.
    pub fn expand_vocab(&self, extra: &Vocabulary) -> Result<Structure, ModelError> {
        let mut vocab = self.vocab.clone();
        vocab.merge(extra)?;
        let mut out = Structure::new(self.domain_size, vocab)?;
        for (rel, tuples) in &self.relations {
            for t in tuples {
                out.insert_tuple(rel, t.clone())?;
            }
        }
        Ok(out)
    }
}

impl fmt::Display for Structure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "domain {}", self.domain_size)?;
        for (rel, tuples) in &self.relations {
            let arity = self.vocab.arity(rel).unwrap_or(0);
            write!(f, "rel {rel} {arity} {{")?;
            for t in tuples {
                if t.len() == 1 {
                    write!(f, " {}", t[0])?;
                } else {
                    let inner: Vec<String> = t.iter().map(|e| e.to_string()).collect();
                    write!(f, " ({})", inner.join(","))?;
                }
            }
            writeln!(f, " }}")?;
        }
        Ok(())
    }
}

/// Partial map from variables to domain elements.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Assignment(BTreeMap<String, usize>);

impl Assignment {
    pub fn empty() -> Self {
        Assignment::default()
    }

    pub fn from_pairs(pairs: &[(&str, usize)]) -> Self {
        Assignment(pairs.iter().map(|(v, e)| (v.to_string(), *e)).collect())
    }

    pub fn get(&self, var: &str) -> Option<usize> {
        self.0.get(var).copied()
    }

    pub fn set(&self, var: &str, value: usize) -> Assignment {
        let mut m = self.0.clone();
        m.insert(var.to_string(), value);
        Assignment(m)
    }

    pub fn restrict<'a>(&self, vars: impl IntoIterator<Item = &'a str>) -> Assignment {
        let mut m = BTreeMap::new();
        for v in vars {
            if let Some(e) = self.0.get(v) {
                m.insert(v.to_string(), *e);
            }
        }
        Assignment(m)
    }

    pub fn domain(&self) -> impl Iterator<Item = &str> {
        self.0.keys().map(|s| s.as_str())
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, usize)> {
        self.0.iter().map(|(v, e)| (v.as_str(), *e))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Parses `x=0,y=2`; the empty string is the empty assignment.
    pub fn parse(text: &str) -> Result<Assignment, String> {
        let mut m = BTreeMap::new();
        for part in text.split(',') {
            let part = part.trim();
            if part.is_empty() {
                continue;
            }
            let Some((var, val)) = part.split_once('=') else {
                return Err(format!("expected `var=value`, found `{part}`"));
            };
            let val: usize = val
                .trim()
                .parse()
                .map_err(|_| format!("bad element value in `{part}`"))?;
            m.insert(var.trim().to_string(), val);
        }
        Ok(Assignment(m))
    }

    /// True when the assignment covers the free variables of `f` with
    /// values inside the domain of `m`.
    pub fn suitable_for(&self, m: &Structure, f: &Formula) -> bool {
        f.free_variables()
            .iter()
            .all(|v| self.get(v).is_some_and(|e| e < m.domain_size()))
    }
}

impl fmt::Display for Assignment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (v, e) in &self.0 {
            if !first {
                write!(f, ",")?;
            }
            write!(f, "{v}={e}")?;
            first = false;
        }
        Ok(())
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum EvalError {
    #[error("formula is not first-order: contains {0}")]
    NotFo(&'static str),
    #[error("assignment does not cover the free variable `{0}`")]
    Unsuitable(String),
    #[error("assignment value {value} for `{var}` is outside the domain 0..{domain}")]
    OutOfDomain {
        var: String,
        value: usize,
        domain: usize,
    },
    #[error("atom `{0}` is not declared in the structure's vocabulary")]
    UndeclaredAtom(String),
}

/// Classical Tarski truth over a finite structure.
///
/// Evaluation is bottom-up over satisfying-assignment tables indexed by
/// the free variables of each subformula, which keeps deeply nested
/// quantifier blocks (as produced by unfolding) polynomial instead of
/// exponential in the nesting depth.
pub fn tarski_eval(m: &Structure, s: &Assignment, f: &Formula) -> Result<bool, EvalError> {
    match f {
        Formula::Claim(_) => return Err(EvalError::NotFo("a claim atom")),
        Formula::Labeled(..) => return Err(EvalError::NotFo("a label operator")),
        _ => {}
    }
    for v in f.free_variables() {
        match s.get(&v) {
            None => return Err(EvalError::Unsuitable(v)),
            Some(e) if e >= m.domain_size() => {
                return Err(EvalError::OutOfDomain {
                    var: v,
                    value: e,
                    domain: m.domain_size(),
                })
            }
            _ => {}
        }
    }
    let table = eval_table(m, f)?;
    let key: Vec<usize> = table
        .vars
        .iter()
        .map(|v| s.get(v).expect("covered"))
        .collect();
    Ok(table.rows.contains(&key))
}

struct Table {
    vars: Vec<String>,
    rows: BTreeSet<Vec<usize>>,
}

fn all_rows(n: usize, arity: usize) -> BTreeSet<Vec<usize>> {
    let mut out = BTreeSet::new();
    let mut row = vec![0usize; arity];
    loop {
        out.insert(row.clone());
        let mut i = arity;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            row[i] += 1;
            if row[i] < n {
                break;
            }
            row[i] = 0;
        }
    }
}

fn eval_table(m: &Structure, f: &Formula) -> Result<Table, EvalError> {
    let n = m.domain_size();
    Ok(match f {
        Formula::Falsum => Table {
            vars: Vec::new(),
            rows: BTreeSet::new(),
        },
        Formula::Atom(p, args) => {
            if m.vocab().arity(p).is_none() {
                return Err(EvalError::UndeclaredAtom(p.clone()));
            }
            let vars: Vec<String> = {
                let mut v: Vec<String> = args.clone();
                v.sort();
                v.dedup();
                v
            };
            let mut rows = BTreeSet::new();
            for row in all_rows(n, vars.len()) {
                let lookup = |x: &String| row[vars.binary_search(x).expect("sorted")];
                let tuple: Vec<usize> = args.iter().map(lookup).collect();
                if m.holds(p, &tuple) {
                    rows.insert(row);
                }
            }
            Table { vars, rows }
        }
        Formula::Equal(x, y) => {
            if x == y {
                Table {
                    vars: vec![x.clone()],
                    rows: (0..n).map(|e| vec![e]).collect(),
                }
            } else {
                let mut vars = vec![x.clone(), y.clone()];
                vars.sort();
                let rows = (0..n).map(|e| vec![e, e]).collect();
                Table { vars, rows }
            }
        }
        Formula::Claim(_) => return Err(EvalError::NotFo("a claim atom")),
        Formula::Labeled(..) => return Err(EvalError::NotFo("a label operator")),
        Formula::Not(c) => {
            let t = eval_table(m, c)?;
            let all = all_rows(n, t.vars.len());
            Table {
                vars: t.vars,
                rows: all.difference(&t.rows).cloned().collect(),
            }
        }
        Formula::And(a, b) | Formula::Or(a, b) => {
            let ta = eval_table(m, a)?;
            let tb = eval_table(m, b)?;
            let mut vars: Vec<String> = ta.vars.iter().chain(tb.vars.iter()).cloned().collect();
            vars.sort();
            vars.dedup();
            let pick = |t: &Table, row: &[usize]| -> Vec<usize> {
                t.vars
                    .iter()
                    .map(|v| row[vars.binary_search(v).expect("member")])
                    .collect()
            };
            let conj = matches!(f, Formula::And(..));
            let mut rows = BTreeSet::new();
            for row in all_rows(n, vars.len()) {
                let ia = ta.rows.contains(&pick(&ta, &row));
                let ib = tb.rows.contains(&pick(&tb, &row));
                if (conj && ia && ib) || (!conj && (ia || ib)) {
                    rows.insert(row);
                }
            }
            Table { vars, rows }
        }
        Formula::Exists(x, c) | Formula::Forall(x, c) => {
            let t = eval_table(m, c)?;
            let vars: Vec<String> = t.vars.iter().filter(|v| *v != x).cloned().collect();
            let univ = matches!(f, Formula::Forall(..));
            let xpos = t.vars.iter().position(|v| v == x);
            let mut rows = BTreeSet::new();
            for row in all_rows(n, vars.len()) {
                let mut witness = univ;
                for e in 0..n {
                    // rebuild the child row with x set to e
                    let mut child_row = Vec::with_capacity(t.vars.len());
                    for (i, v) in t.vars.iter().enumerate() {
                        if Some(i) == xpos {
                            child_row.push(e);
                        } else {
                            let j = vars.binary_search(v).expect("member");
                            child_row.push(row[j]);
                        }
                    }
                    let holds = t.rows.contains(&child_row);
                    if univ && !holds {
                        witness = false;
                        break;
                    }
                    if !univ && holds {
                        witness = true;
                        break;
                    }
                    if xpos.is_none() {
                        // x not free in the child: one iteration decides
                        witness = holds;
                        break;
                    }
                }
                if witness {
                    rows.insert(row);
                }
            }
            Table { vars, rows }
        }
    })
}

/// Parses the line-oriented model file format:
///
/// ```text
/// domain <n>
/// rel <Name> <arity> { (e1,...,ek) (…) … }   # arity-1 tuples may be bare
/// ```
pub fn parse_structure(text: &str) -> Result<Structure, ModelError> {
    let mut domain: Option<usize> = None;
    let mut blocks: Vec<(usize, String, usize, String)> = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let lineno = idx + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let mut words = line.split_whitespace();
        match words.next() {
            Some("domain") => {
                if domain.is_some() {
                    return Err(ModelError::Format {
                        line: lineno,
                        msg: "duplicate domain line".into(),
                    });
                }
                let n: usize = words.next().and_then(|w| w.parse().ok()).ok_or_else(|| {
                    ModelError::Format {
                        line: lineno,
                        msg: "expected `domain <n>`".into(),
                    }
                })?;
                if n == 0 {
                    return Err(ModelError::EmptyDomain);
                }
                domain = Some(n);
            }
            Some("rel") => {
                let name = words
                    .next()
                    .ok_or_else(|| ModelError::Format {
                        line: lineno,
                        msg: "expected relation name".into(),
                    })?
                    .to_string();
                let arity: usize = words.next().and_then(|w| w.parse().ok()).ok_or_else(|| {
                    ModelError::Format {
                        line: lineno,
                        msg: "expected arity".into(),
                    }
                })?;
                let rest: String = line
                    .splitn(4, char::is_whitespace)
                    .nth(3)
                    .unwrap_or("")
                    .to_string();
                blocks.push((lineno, name, arity, rest));
            }
            Some(other) => {
                return Err(ModelError::Format {
                    line: lineno,
                    msg: format!("unknown directive `{other}`"),
                })
            }
            None => unreachable!(),
        }
    }
    let domain = domain.ok_or(ModelError::Format {
        line: 0,
        msg: "missing `domain` line".into(),
    })?;
    let mut vocab = Vocabulary::new();
    for (_, name, arity, _) in &blocks {
        vocab.declare(name, *arity).map_err(|e| match e {
            crate::syntax::VocabError::Duplicate(n) => ModelError::DuplicateRelation(n),
            other => ModelError::Vocab(other),
        })?;
    }
    let mut m = Structure::new(domain, vocab)?;
    for (lineno, name, arity, body) in blocks {
        let body = body.trim();
        let inner = body
            .strip_prefix('{')
            .and_then(|b| b.strip_suffix('}'))
            .ok_or_else(|| ModelError::Format {
                line: lineno,
                msg: "expected `{ … }` tuple block".into(),
            })?
            .trim();
        for tuple in parse_tuples(inner, lineno)? {
            if tuple.len() != arity {
                return Err(ModelError::TupleArity {
                    rel: name.clone(),
                    tuple,
                    arity,
                });
            }
            m.insert_tuple(&name, tuple)?;
        }
    }
    Ok(m)
}

fn parse_tuples(body: &str, lineno: usize) -> Result<Vec<Vec<usize>>, ModelError> {
    let mut out = Vec::new();
    let mut rest = body.trim();
    while !rest.is_empty() {
        if let Some(stripped) = rest.strip_prefix('(') {
            let end = stripped.find(')').ok_or_else(|| ModelError::Format {
                line: lineno,
                msg: "unclosed tuple".into(),
            })?;
            let inner = &stripped[..end];
            let tuple: Result<Vec<usize>, _> = inner
                .split(',')
                .map(|p| p.trim().parse::<usize>())
                .collect();
            out.push(tuple.map_err(|_| ModelError::Format {
                line: lineno,
                msg: format!("bad tuple `({inner})`"),
            })?);
            rest = stripped[end + 1..].trim_start();
        } else {
            let end = rest
                .find(|c: char| c.is_whitespace() || c == '(')
                .unwrap_or(rest.len());
            let word = &rest[..end];
            let e: usize = word.parse().map_err(|_| ModelError::Format {
                line: lineno,
                msg: format!("bad element `{word}`"),
            })?;
            out.push(vec![e]);
            rest = rest[end..].trim_start();
        }
    }
    Ok(out)
}

/// Yields every structure over `vocab` with `1 ≤ domain_size ≤ max_size`,
/// each exactly once, in a deterministic order: increasing domain size,
/// then a lexicographic sweep over relation contents. No isomorphism
/// reduction is performed.
pub fn enumerate_structures(vocab: &Vocabulary, max_size: usize) -> StructureIter {
    StructureIter {
        vocab: vocab.clone(),
        max_size,
        size: 1,
        tuple_index: Vec::new(),
        counter: None,
        done: max_size == 0,
    }
}

pub struct StructureIter {
    vocab: Vocabulary,
    max_size: usize,
    size: usize,
    /// Flattened list of (relation, tuple) slots for the current size.
    tuple_index: Vec<(String, Vec<usize>)>,
    /// Current subset of slots, as bits; `None` before a size is set up.
    counter: Option<Vec<bool>>,
    done: bool,
}

impl StructureIter {
    fn setup_size(&mut self) {
        self.tuple_index.clear();
        for (rel, arity) in self.vocab.iter() {
            for t in all_rows(self.size, arity) {
                self.tuple_index.push((rel.to_string(), t));
            }
        }
        self.counter = Some(vec![false; self.tuple_index.len()]);
    }

    fn build(&self) -> Structure {
        let mut m = Structure::new(self.size, self.vocab.clone()).expect("nonempty");
        let bits = self.counter.as_ref().expect("set up");
        for (bit, (rel, tuple)) in bits.iter().zip(&self.tuple_index) {
            if *bit {
                m.insert_tuple(rel, tuple.clone()).expect("in range");
            }
        }
        m
    }

    fn advance(&mut self) -> bool {
        let bits = self.counter.as_mut().expect("set up");
        for b in bits.iter_mut() {
            if *b {
                *b = false;
            } else {
                *b = true;
                return true;
            }
        }
        false
    }
}

impl Iterator for StructureIter {
    type Item = Structure;

    fn next(&mut self) -> Option<Structure> {
        if self.done {
            return None;
        }
        if self.counter.is_none() {
            self.setup_size();
            return Some(self.build());
        }
        if self.advance() {
            return Some(self.build());
        }
        if self.size < self.max_size {
            self.size += 1;
            self.setup_size();
            return Some(self.build());
        }
        self.done = true;
        None
    }
}

/// All assignments of `vars` into the domain of `m`, in lexicographic
/// order.
pub fn enumerate_assignments(m: &Structure, vars: &BTreeSet<String>) -> Vec<Assignment> {
    let vars: Vec<&String> = vars.iter().collect();
    let mut out = Vec::new();
    for row in all_rows(m.domain_size(), vars.len()) {
        let mut a = Assignment::empty();
        for (v, e) in vars.iter().zip(row) {
            a = a.set(v, e);
        }
        out.push(a);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::parse_formula_inferred;

    fn c3() -> Structure {
        Structure::digraph(3, &[(0, 1), (1, 2), (2, 0)])
    }

    fn fo(text: &str) -> Formula {
        parse_formula_inferred(text).expect("parse").0
    }

    #[test]
    fn tarski_on_the_three_cycle() {
        let m = c3();
        let s = Assignment::empty();
        assert!(!tarski_eval(&m, &s, &fo("exists x. E(x,x)")).unwrap());
        assert!(tarski_eval(&m, &s, &fo("forall x. exists y. E(x,y)")).unwrap());
        assert!(!tarski_eval(&m, &s, &fo("bot")).unwrap());
    }

    #[test]
    fn tarski_rejects_non_fo() {
        let m = c3();
        let s = Assignment::empty();
        assert!(tarski_eval(&m, &s, &fo("L1: @L1")).is_err());
        assert!(matches!(
            tarski_eval(&m, &s, &fo("P(x)")),
            Err(EvalError::UndeclaredAtom(_)) | Err(EvalError::Unsuitable(_))
        ));
    }

    #[test]
    fn model_file_round_trip() {
        let m = parse_structure("# three-cycle\ndomain 3\nrel E 2 { (0,1)(1,2)(2,0) }").unwrap();
        assert_eq!(m, c3());
        assert!(parse_structure("domain 0").is_err());
        assert!(matches!(
            parse_structure("domain 3\nrel E 2 { (3,0) }"),
            Err(ModelError::OutOfRange { .. })
        ));
        assert!(matches!(
            parse_structure("domain 1\nrel E 2 { }\nrel E 2 { }"),
            Err(ModelError::DuplicateRelation(_))
        ));
        let again = parse_structure(&m.to_string()).unwrap();
        assert_eq!(again, m);
    }

    #[test]
    fn bare_integers_for_unary_tuples() {
        let m = parse_structure("domain 2\nrel P 1 { 0 1 }").unwrap();
        assert!(m.holds("P", &[0]) && m.holds("P", &[1]));
    }

    #[test]
    fn enumeration_counts() {
        let unary = Vocabulary::from_pairs(&[("P", 1)]);
        assert_eq!(enumerate_structures(&unary, 1).count(), 2);
        let binary = Vocabulary::from_pairs(&[("E", 2)]);
        assert_eq!(enumerate_structures(&binary, 1).count(), 2);
        assert_eq!(enumerate_structures(&binary, 2).count(), 18);
    }

    #[test]
    fn enumeration_matches_closed_form() {
        // product over predicates of 2^(n^arity), summed over sizes
        let vocab = Vocabulary::from_pairs(&[("P", 1), ("E", 2)]);
        let expected: usize = (1..=2usize)
            .map(|n| 2usize.pow(n as u32) * 2usize.pow((n * n) as u32))
            .sum();
        assert_eq!(enumerate_structures(&vocab, 2).count(), expected);
    }

    #[test]
    fn deep_quantifier_nesting_stays_fast() {
        // 14 alternating quantifiers over a 3-element structure
        let mut text = String::new();
        for i in 0..7 {
            text.push_str(&format!("exists a{i}. forall b{i}. "));
        }
        text.push_str("E(a0,b0) | ~E(b6,b6)");
        let m = c3();
        assert!(tarski_eval(&m, &Assignment::empty(), &fo(&text)).unwrap());
    }
}
