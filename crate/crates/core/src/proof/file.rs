//! Line-oriented derivation files, `;`-separated:
//!
//! ```text
//! <id> ; premise ; ; ; ; <formula>
//! <id> ; assume  ; ; ; ; <formula>
//! <id> ; <RuleId> ; <input ids/ranges> ; <occ-path> ; <params k=v,…> ; <conclusion>
//! <id> ; discharge <assume-id> ; <input ids> ; ; ; <conclusion>
//! ```
//!
//! Params: `claims=0.1.0|0.1.1`, `fresh=L9`, `subst=<formula>` (repeatable),
//! `var=<x>`, `dir=rev`. A range `a-b` references the discharge step that
//! closed the assumption `a` with final step `b`.

use thiserror::Error;

use super::{Derivation, RuleApplication, RuleId, RuleParams, Step};
use crate::syntax::{parse_formula_inferred, Formula, OccPath};
use crate::transform::Direction;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("line {line}: {msg}")]
pub struct FileError {
    pub line: usize,
    pub msg: String,
}

fn err(line: usize, msg: impl Into<String>) -> FileError {
    FileError {
        line,
        msg: msg.into(),
    }
}

/// Canonical rendering; `parse_derivation` reproduces the derivation.
pub fn write_derivation(d: &Derivation) -> String {
    let mut out = String::new();
    for step in &d.steps {
        match step {
            Step::Premise { id, formula } => {
                out.push_str(&format!("{id} ; premise ; ; ; ; {formula}\n"));
            }
            Step::Assume { id, formula } => {
                out.push_str(&format!("{id} ; assume ; ; ; ; {formula}\n"));
            }
            Step::Discharge {
                id,
                assume,
                inputs,
                conclusion,
            } => {
                let ins: Vec<String> = inputs.iter().map(|i| i.to_string()).collect();
                out.push_str(&format!(
                    "{id} ; discharge {assume} ; {} ; ; ; {conclusion}\n",
                    ins.join(",")
                ));
            }
            Step::Infer {
                id,
                app,
                conclusion,
            } => {
                let ins: Vec<String> = app.inputs.iter().map(|i| i.to_string()).collect();
                let path = app.path.as_ref().map(|p| p.to_string()).unwrap_or_default();
                let mut params: Vec<String> = Vec::new();
                if !app.params.claims.is_empty() {
                    let cs: Vec<String> = app.params.claims.iter().map(|c| c.to_string()).collect();
                    params.push(format!("claims={}", cs.join("|")));
                }
                if let Some(k) = app.params.fresh {
                    params.push(format!("fresh=L{k}"));
                }
                if let Some(v) = &app.params.var {
                    params.push(format!("var={v}"));
                }
                if app.params.dir == Direction::Reverse {
                    params.push("dir=rev".to_string());
                }
                for s in &app.params.substs {
                    params.push(format!("subst={s}"));
                }
                out.push_str(&format!(
                    "{id} ; {} ; {} ; {} ; {} ; {conclusion}\n",
                    app.rule.name(),
                    ins.join(","),
                    path,
                    params.join(","),
                ));
            }
        }
    }
    out
}

/// Splits a params field on commas at parenthesis depth zero, so formula
/// values keep their argument lists intact.
fn split_params(text: &str) -> Vec<&str> {
    let mut out = Vec::new();
    let mut depth = 0usize;
    let mut start = 0usize;
    for (i, c) in text.char_indices() {
        match c {
            '(' => depth += 1,
            ')' => depth = depth.saturating_sub(1),
            ',' if depth == 0 => {
                out.push(&text[start..i]);
                start = i + 1;
            }
            _ => {}
        }
    }
    out.push(&text[start..]);
    out.into_iter()
        .map(|s| s.trim())
        .filter(|s| !s.is_empty())
        .collect()
}

enum RawInput {
    Id(usize),
    Range(usize, usize),
}

pub fn parse_derivation(text: &str) -> Result<Derivation, FileError> {
    struct RawStep {
        line: usize,
        id: usize,
        kind: String,
        inputs: Vec<RawInput>,
        path: Option<OccPath>,
        params: RuleParams,
        formula: Formula,
    }

    let mut raws: Vec<RawStep> = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = lineno + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let fields: Vec<&str> = content.split(';').map(|f| f.trim()).collect();
        if fields.len() != 6 {
            return Err(err(
                line,
                format!("expected 6 `;`-separated fields, found {}", fields.len()),
            ));
        }
        let id: usize = fields[0].parse().map_err(|_| err(line, "bad step id"))?;
        let kind = fields[1].to_string();
        let mut inputs = Vec::new();
        for part in fields[2]
            .split(',')
            .map(|p| p.trim())
            .filter(|p| !p.is_empty())
        {
            if let Some((a, b)) = part.split_once('-') {
                let a = a.trim().parse().map_err(|_| err(line, "bad range"))?;
                let b = b.trim().parse().map_err(|_| err(line, "bad range"))?;
                inputs.push(RawInput::Range(a, b));
            } else {
                inputs.push(RawInput::Id(
                    part.parse().map_err(|_| err(line, "bad input id"))?,
                ));
            }
        }
        let path = if fields[3].is_empty() {
            None
        } else {
            Some(OccPath::parse(fields[3]).ok_or_else(|| err(line, "bad occurrence path"))?)
        };
        let mut params = RuleParams::default();
        for kv in split_params(fields[4]) {
            let Some((key, value)) = kv.split_once('=') else {
                return Err(err(line, format!("bad parameter `{kv}`")));
            };
            match key.trim() {
                "claims" => {
                    for c in value.split('|') {
                        params
                            .claims
                            .push(OccPath::parse(c).ok_or_else(|| err(line, "bad claim path"))?);
                    }
                }
                "fresh" => {
                    let v = value.trim();
                    let digits = v.strip_prefix('L').unwrap_or(v);
                    params.fresh = Some(digits.parse().map_err(|_| err(line, "bad label id"))?);
                }
                "var" => params.var = Some(value.trim().to_string()),
                "dir" => {
                    params.dir = match value.trim() {
                        "fwd" | "forward" => Direction::Forward,
                        "rev" | "reverse" => Direction::Reverse,
                        other => return Err(err(line, format!("bad direction `{other}`"))),
                    }
                }
                "subst" => {
                    let (f, _) = parse_formula_inferred(value.trim())
                        .map_err(|e| err(line, format!("bad subst formula: {e}")))?;
                    params.substs.push(f);
                }
                other => return Err(err(line, format!("unknown parameter `{other}`"))),
            }
        }
        let (formula, _) = parse_formula_inferred(fields[5])
            .map_err(|e| err(line, format!("bad formula: {e}")))?;
        raws.push(RawStep {
            line,
            id,
            kind,
            inputs,
            path,
            params,
            formula,
        });
    }

    // resolve ranges a-b to the discharge step closing assume a at b
    let resolve = |r: &RawInput, line: usize, raws: &[RawStep]| -> Result<usize, FileError> {
        match r {
            RawInput::Id(i) => Ok(*i),
            RawInput::Range(a, b) => raws
                .iter()
                .find_map(|s| {
                    let is_match = s
                        .kind
                        .strip_prefix("discharge")
                        .is_some_and(|rest| rest.trim().parse::<usize>() == Ok(*a))
                        && s.inputs
                            .iter()
                            .any(|i| matches!(i, RawInput::Id(x) if x == b));
                    is_match.then_some(s.id)
                })
                .ok_or_else(|| err(line, format!("no discharge closes the range {a}-{b}"))),
        }
    };

    let mut steps = Vec::new();
    for raw in &raws {
        let ids: Result<Vec<usize>, FileError> = raw
            .inputs
            .iter()
            .map(|r| resolve(r, raw.line, &raws))
            .collect();
        let ids = ids?;
        let step = if raw.kind == "premise" {
            Step::Premise {
                id: raw.id,
                formula: raw.formula.clone(),
            }
        } else if raw.kind == "assume" {
            Step::Assume {
                id: raw.id,
                formula: raw.formula.clone(),
            }
        } else if let Some(rest) = raw.kind.strip_prefix("discharge") {
            let assume: usize = rest
                .trim()
                .parse()
                .map_err(|_| err(raw.line, "discharge needs its assume id"))?;
            Step::Discharge {
                id: raw.id,
                assume,
                inputs: ids,
                conclusion: raw.formula.clone(),
            }
        } else {
            let rule = RuleId::from_name(&raw.kind)
                .ok_or_else(|| err(raw.line, format!("unknown rule `{}`", raw.kind)))?;
            Step::Infer {
                id: raw.id,
                app: RuleApplication {
                    rule,
                    inputs: ids,
                    path: raw.path.clone(),
                    params: raw.params.clone(),
                },
                conclusion: raw.formula.clone(),
            }
        };
        steps.push(step);
    }
    Ok(Derivation { steps })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::proof::check_derivation;
    use crate::syntax::parse_formula_inferred;

    fn p(text: &str) -> Formula {
        parse_formula_inferred(text).expect("parse").0
    }

    #[test]
    fn round_trip_through_the_file_format() {
        let text = "\
1 ; premise ; ; ; ; L1: (P(x) & @L1)
2 ; SubstShift ; 1 ; ; claims=0.1 ; L1: (P(x) & L1: (P(x) & @L1))
";
        let d = parse_derivation(text).unwrap();
        check_derivation(&d).unwrap();
        let written = write_derivation(&d);
        let again = parse_derivation(&written).unwrap();
        assert_eq!(d, again);
    }

    #[test]
    fn subproofs_and_ranges() {
        let text = "\
1 ; premise ; ; ; ; P | Q
2 ; assume ; ; ; ; P
3 ; OrIntro1 ; 2 ; ; subst=Q ; P | Q
4 ; discharge 2 ; 3 ; ; ; P | Q
5 ; assume ; ; ; ; Q
6 ; OrIntro2 ; 5 ; ; subst=P ; P | Q
7 ; discharge 5 ; 6 ; ; ; P | Q
8 ; OrElim ; 1,2-3,5-6 ; ; ; P | Q
";
        let d = parse_derivation(text).unwrap();
        check_derivation(&d).unwrap();
        // the ranges resolved to the discharge step ids
        let Step::Infer { app, .. } = &d.steps[7] else {
            panic!()
        };
        assert_eq!(app.inputs, vec![1, 4, 7]);
    }

    #[test]
    fn params_with_commas_inside_formulas() {
        let text = "1 ; premise ; ; ; ; @L1\n2 ; CLFreeElim ; 1 ; ; subst=E(x,y) ; E(x,y)\n";
        let d = parse_derivation(text).unwrap();
        check_derivation(&d).unwrap();
        assert_eq!(d.conclusion(), Some(&p("E(x,y)")));
    }

    #[test]
    fn writer_output_is_bit_exact() {
        let f = p("L1: (P(x) | @L1)");
        let d = crate::proof::build_approximant_derivation(&f, 1, 200_000).unwrap();
        assert_eq!(
            write_derivation(&d),
            "1 ; premise ; ; ; ; P(x) | (P(x) | bot)\n\
             2 ; LDummyIntroElim ; 1 ;  ; fresh=L1 ; L1: (P(x) | (P(x) | bot))\n\
             3 ; LDummyIntroElim ; 2 ; 0.1 ; fresh=L1 ; L1: (P(x) | L1: (P(x) | bot))\n\
             4 ; BotElim ; 3 ;  ; claims=0.1.0.1,subst=@L1 ; L1: (P(x) | L1: (P(x) | @L1))\n\
             5 ; SubstShiftRev ; 4 ;  ; claims=0.1 ; L1: (P(x) | @L1)\n"
        );
    }

    #[test]
    fn comments_and_blank_lines() {
        let text = "# a comment\n\n1 ; premise ; ; ; ; P\n";
        let d = parse_derivation(text).unwrap();
        assert_eq!(d.steps.len(), 1);
    }

    #[test]
    fn bad_rule_name_is_reported_with_line() {
        let e = parse_derivation("1 ; Frobnicate ; ; ; ; P\n").unwrap_err();
        assert_eq!(e.line, 1);
        assert!(e.msg.contains("Frobnicate"));
    }
}
