//! Lexer and recursive-descent parser for the formula grammar.
//!
//! Binding strength, weakest to strongest: `<->`, `->`, `|`, `&`, prefix
//! operators. `exists x.` and `forall x.` extend maximally to the right;
//! `~` and `Lk:` bind the next prefix unit. `top`, `->` and `<->` are
//! sugar for `~bot`, `~a | b` and `(a -> b) & (b -> a)`.

use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

use super::{is_label_token, Formula, LabelId, Vocabulary};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("{line}:{col}: {msg}")]
pub struct SyntaxError {
    pub line: usize,
    pub col: usize,
    pub msg: String,
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Tilde,
    Amp,
    Pipe,
    Arrow,
    Iff,
    LParen,
    RParen,
    Dot,
    Comma,
    Colon,
    Equals,
    At,
    Bot,
    Top,
    Exists,
    Forall,
    Label(LabelId),
    Var(String),
    Pred(String),
    Eof,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Tok::Tilde => "~",
            Tok::Amp => "&",
            Tok::Pipe => "|",
            Tok::Arrow => "->",
            Tok::Iff => "<->",
            Tok::LParen => "(",
            Tok::RParen => ")",
            Tok::Dot => ".",
            Tok::Comma => ",",
            Tok::Colon => ":",
            Tok::Equals => "=",
            Tok::At => "@",
            Tok::Bot => "bot",
            Tok::Top => "top",
            Tok::Exists => "exists",
            Tok::Forall => "forall",
            Tok::Label(k) => return write!(f, "L{k}"),
            Tok::Var(v) => v,
            Tok::Pred(p) => p,
            Tok::Eof => "end of input",
        };
        write!(f, "{s}")
    }
}

struct Lexer<'a> {
    src: &'a str,
    pos: usize,
    line: usize,
    col: usize,
}

type Spanned = (Tok, usize, usize);

impl<'a> Lexer<'a> {
    fn new(src: &'a str) -> Self {
        Lexer {
            src,
            pos: 0,
            line: 1,
            col: 1,
        }
    }

    fn err(&self, msg: impl Into<String>) -> SyntaxError {
        SyntaxError {
            line: self.line,
            col: self.col,
            msg: msg.into(),
        }
    }

    fn bump(&mut self, n: usize) {
        for c in self.src[self.pos..self.pos + n].chars() {
            if c == '\n' {
                self.line += 1;
                self.col = 1;
            } else {
                self.col += 1;
            }
        }
        self.pos += n;
    }

    fn tokens(mut self) -> Result<Vec<Spanned>, SyntaxError> {
        let mut out = Vec::new();
        loop {
            while let Some(c) = self.src[self.pos..].chars().next() {
                if c.is_whitespace() {
                    self.bump(c.len_utf8());
                } else if c == '#' {
                    let rest = &self.src[self.pos..];
                    let n = rest.find('\n').unwrap_or(rest.len());
                    self.bump(n);
                } else {
                    break;
                }
            }
            let (line, col) = (self.line, self.col);
            let rest = &self.src[self.pos..];
            let Some(c) = rest.chars().next() else {
                out.push((Tok::Eof, line, col));
                return Ok(out);
            };
            let tok = match c {
                '~' => {
                    self.bump(1);
                    Tok::Tilde
                }
                '&' => {
                    self.bump(1);
                    Tok::Amp
                }
                '|' => {
                    self.bump(1);
                    Tok::Pipe
                }
                '(' => {
                    self.bump(1);
                    Tok::LParen
                }
                ')' => {
                    self.bump(1);
                    Tok::RParen
                }
                '.' => {
                    self.bump(1);
                    Tok::Dot
                }
                ',' => {
                    self.bump(1);
                    Tok::Comma
                }
                ':' => {
                    self.bump(1);
                    Tok::Colon
                }
                '=' => {
                    self.bump(1);
                    Tok::Equals
                }
                '@' => {
                    self.bump(1);
                    Tok::At
                }
                '-' => {
                    if rest.starts_with("->") {
                        self.bump(2);
                        Tok::Arrow
                    } else {
                        return Err(self.err("expected `->`"));
                    }
                }
                '<' => {
                    if rest.starts_with("<->") {
                        self.bump(3);
                        Tok::Iff
                    } else {
                        return Err(self.err("expected `<->`"));
                    }
                }
                c if c.is_ascii_alphabetic() || c == '_' => {
                    let n = rest
                        .find(|c: char| !(c.is_ascii_alphanumeric() || c == '_'))
                        .unwrap_or(rest.len());
                    let word = &rest[..n];
                    self.bump(n);
                    match word {
                        "bot" => Tok::Bot,
                        "top" => Tok::Top,
                        "exists" => Tok::Exists,
                        "forall" => Tok::Forall,
                        w if is_label_token(w) => {
                            let id: LabelId = w[1..].parse().map_err(|_| SyntaxError {
                                line,
                                col,
                                msg: format!("label id `{w}` out of range"),
                            })?;
                            Tok::Label(id)
                        }
                        w if w.starts_with(|c: char| c.is_ascii_lowercase()) => {
                            Tok::Var(w.to_string())
                        }
                        w => Tok::Pred(w.to_string()),
                    }
                }
                other => return Err(self.err(format!("unexpected character `{other}`"))),
            };
            out.push((tok, line, col));
        }
    }
}

/// Arity discipline: strict against a vocabulary, or inferred from use.
enum Arities<'a> {
    Strict(&'a Vocabulary),
    Infer(BTreeMap<String, usize>),
}

struct Parser<'a> {
    toks: Vec<Spanned>,
    idx: usize,
    arities: Arities<'a>,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> &Tok {
        &self.toks[self.idx].0
    }

    fn here(&self) -> (usize, usize) {
        (self.toks[self.idx].1, self.toks[self.idx].2)
    }

    fn err(&self, msg: impl Into<String>) -> SyntaxError {
        let (line, col) = self.here();
        SyntaxError {
            line,
            col,
            msg: msg.into(),
        }
    }

    fn next(&mut self) -> Tok {
        self.next_spanned().0
    }

    /// Consumes a token, returning it with its own position (for errors
    /// about the consumed token rather than its successor).
    fn next_spanned(&mut self) -> (Tok, usize, usize) {
        let (t, line, col) = self.toks[self.idx].clone();
        if self.idx + 1 < self.toks.len() {
            self.idx += 1;
        }
        (t, line, col)
    }

    fn expect(&mut self, want: Tok) -> Result<(), SyntaxError> {
        if *self.peek() == want {
            self.next();
            Ok(())
        } else {
            Err(self.err(format!("expected `{want}`, found `{}`", self.peek())))
        }
    }

    fn check_atom(&mut self, name: &str, arity: usize) -> Result<(), SyntaxError> {
        let (line, col) = self.here();
        let fail = |msg: String| SyntaxError { line, col, msg };
        match &mut self.arities {
            Arities::Strict(vocab) => match vocab.arity(name) {
                None => Err(fail(format!("undeclared predicate `{name}`"))),
                Some(a) if a != arity => Err(fail(format!(
                    "predicate `{name}` has arity {a}, applied to {arity} arguments"
                ))),
                _ => Ok(()),
            },
            Arities::Infer(map) => match map.get(name) {
                Some(a) if *a != arity => Err(fail(format!(
                    "predicate `{name}` used with arity {a} and {arity}"
                ))),
                Some(_) => Ok(()),
                None => {
                    map.insert(name.to_string(), arity);
                    Ok(())
                }
            },
        }
    }

    fn formula(&mut self, min_bp: u8) -> Result<Formula, SyntaxError> {
        let mut lhs = self.prefix()?;
        loop {
            let (bp, right_bp) = match self.peek() {
                Tok::Iff => (1, 1),   // right-associative
                Tok::Arrow => (2, 2), // right-associative
                Tok::Pipe => (3, 4),  // left-associative
                Tok::Amp => (4, 5),   // left-associative
                _ => break,
            };
            if bp < min_bp {
                break;
            }
            let op = self.next();
            let rhs = self.formula(right_bp)?;
            lhs = match op {
                Tok::Amp => Formula::and(lhs, rhs),
                Tok::Pipe => Formula::or(lhs, rhs),
                Tok::Arrow => Formula::or(Formula::not(lhs), rhs),
                Tok::Iff => Formula::and(
                    Formula::or(Formula::not(lhs.clone()), rhs.clone()),
                    Formula::or(Formula::not(rhs), lhs),
                ),
                _ => unreachable!(),
            };
        }
        Ok(lhs)
    }

    fn prefix(&mut self) -> Result<Formula, SyntaxError> {
        match self.peek().clone() {
            Tok::Tilde => {
                self.next();
                Ok(Formula::not(self.prefix()?))
            }
            Tok::Exists | Tok::Forall => {
                let univ = matches!(self.peek(), Tok::Forall);
                self.next();
                let var = match self.next() {
                    Tok::Var(v) => v,
                    other => {
                        return Err(self.err(format!(
                            "expected a variable after the quantifier, found `{other}`"
                        )))
                    }
                };
                self.expect(Tok::Dot)?;
                // quantifiers extend maximally to the right
                let body = self.formula(0)?;
                Ok(if univ {
                    Formula::forall(&var, body)
                } else {
                    Formula::exists(&var, body)
                })
            }
            Tok::Label(k) => {
                self.next();
                self.expect(Tok::Colon)?;
                Ok(Formula::labeled(k, self.prefix()?))
            }
            _ => self.atom(),
        }
    }

    fn atom(&mut self) -> Result<Formula, SyntaxError> {
        let (tok, line, col) = self.next_spanned();
        let fail = |msg: String| SyntaxError { line, col, msg };
        match tok {
            Tok::Bot => Ok(Formula::Falsum),
            Tok::Top => Ok(Formula::not(Formula::Falsum)),
            Tok::At => match self.next() {
                Tok::Label(k) => {
                    if *self.peek() == Tok::LParen {
                        Err(self.err("claim atoms take no arguments"))
                    } else {
                        Ok(Formula::Claim(k))
                    }
                }
                other => Err(self.err(format!("expected a label after `@`, found `{other}`"))),
            },
            Tok::Var(x) => {
                self.expect(Tok::Equals)?;
                match self.next() {
                    Tok::Var(y) => Ok(Formula::Equal(x, y)),
                    other => Err(self.err(format!(
                        "expected a variable on the right of `=`, found `{other}`"
                    ))),
                }
            }
            Tok::Pred(name) => {
                if *self.peek() == Tok::LParen {
                    self.next();
                    let mut args = Vec::new();
                    loop {
                        match self.next() {
                            Tok::Var(v) => args.push(v),
                            other => {
                                return Err(self
                                    .err(format!("expected a variable argument, found `{other}`")))
                            }
                        }
                        match self.next() {
                            Tok::Comma => continue,
                            Tok::RParen => break,
                            other => {
                                return Err(
                                    self.err(format!("expected `,` or `)`, found `{other}`"))
                                )
                            }
                        }
                    }
                    self.check_atom(&name, args.len())?;
                    Ok(Formula::Atom(name, args))
                } else {
                    self.check_atom(&name, 0)?;
                    Ok(Formula::Atom(name, Vec::new()))
                }
            }
            Tok::LParen => {
                let f = self.formula(0)?;
                self.expect(Tok::RParen)?;
                Ok(f)
            }
            other => Err(fail(format!("expected a formula, found `{other}`"))),
        }
    }

    fn finish(self, f: Formula) -> Result<(Formula, Arities<'a>), SyntaxError> {
        if *self.peek() != Tok::Eof {
            return Err(self.err(format!("trailing input starting at `{}`", self.peek())));
        }
        Ok((f, self.arities))
    }
}

fn run<'a>(text: &str, arities: Arities<'a>) -> Result<(Formula, Arities<'a>), SyntaxError> {
    let toks = Lexer::new(text).tokens()?;
    let mut p = Parser {
        toks,
        idx: 0,
        arities,
    };
    let f = p.formula(0)?;
    p.finish(f)
}

/// Parses against a fixed vocabulary; atoms must be declared with matching
/// arity.
pub fn parse_formula(text: &str, vocab: &Vocabulary) -> Result<Formula, SyntaxError> {
    run(text, Arities::Strict(vocab)).map(|(f, _)| f)
}

/// Parses while inferring the vocabulary from predicate use; inconsistent
/// arities are an error.
pub fn parse_formula_inferred(text: &str) -> Result<(Formula, Vocabulary), SyntaxError> {
    let (f, arities) = run(text, Arities::Infer(BTreeMap::new()))?;
    let Arities::Infer(map) = arities else {
        unreachable!()
    };
    let mut vocab = Vocabulary::new();
    for (name, arity) in map {
        vocab.declare(&name, arity).map_err(|e| SyntaxError {
            line: 1,
            col: 1,
            msg: e.to_string(),
        })?;
    }
    Ok((f, vocab))
}
