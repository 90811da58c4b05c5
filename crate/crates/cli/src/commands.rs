//! Thin adapters from the subcommands onto the library.

use serde_json::json;

use loopfo_core::approximants::{self, ProofMethod, ProverCmd, SatSearchResult, ValidityResult};
use loopfo_core::game::{
    build_arena, build_arena_clocked, minimal_clock, solve_reachability, verdict_clocked,
    verdict_unbounded,
};
use loopfo_core::proof::{
    build_approximant_derivation, build_nnf_derivation, check_derivation, parse_derivation,
    write_derivation,
};
use loopfo_core::syntax::regularize as regularize_formula;
use loopfo_core::transform::{to_strong_nnf, to_weak_nnf};
use loopfo_core::translate::{export_tptp, safety_theory};
use loopfo_core::Outcome;

use crate::output::{load_model, parse_assign, parse_with};
use crate::{node_budget, CliError, CliResult, Format, FormulaArg, Semantics, EXIT_SIGNAL};

#[allow(clippy::too_many_arguments)]
pub fn check(
    format: Format,
    model: &str,
    formula: &FormulaArg,
    assign: &str,
    semantics: Semantics,
    clock: Option<u32>,
    expect: Option<String>,
    explain: bool,
) -> CliResult {
    let m = load_model(model)?;
    let f = parse_with(formula, Some(m.vocab()))?;
    let s = parse_assign(assign)?;
    let (outcome, min_clock) = match clock {
        Some(n) => (verdict_clocked(&m, &s, &f, n)?.outcome, None),
        None => match semantics {
            Semantics::Unbounded => (verdict_unbounded(&m, &s, &f)?.outcome, None),
            Semantics::Bounded => {
                let v = loopfo_core::game::verdict_bounded(&m, &s, &f)?;
                let mc = if v.outcome == Outcome::Undetermined {
                    None
                } else {
                    minimal_clock(&m, &s, &f)?
                };
                (v.outcome, mc)
            }
        },
    };
    match format {
        Format::Plain => {
            println!("{outcome}");
            if let Some(mc) = min_clock {
                println!("minimal_clock={mc}");
            }
        }
        Format::JsonLines => {
            println!(
                "{}",
                json!({ "verdict": outcome.to_string(), "minimal_clock": min_clock })
            );
        }
    }
    if explain {
        let arena = match clock {
            Some(n) => build_arena_clocked(&m, &s, &f, n)?,
            None => build_arena(&m, &s, &f)?,
        };
        let solve = solve_reachability(&arena);
        println!("# arena ({} positions)", arena.len());
        print!("{}", arena.dump());
        let verdict = loopfo_core::game::verdict_bounded(&m, &s, &f)?;
        if let Some(strategy) = verdict.strategy {
            println!("# {} strategy", strategy.player);
            for (from, to) in &strategy.moves {
                println!(
                    "{} {} {}  ->  {} {} {}",
                    from.occ, from.assign, from.sign, to.occ, to.assign, to.sign
                );
            }
        } else {
            // a draw: print each player's non-losing strategy when it exists
            let init = arena.initial();
            for player in [loopfo_core::game::Player::Eloise, loopfo_core::game::Player::Abelard] {
                if solve.region(player.opponent())[init] {
                    println!("# {player} has no non-losing strategy");
                    continue;
                }
                println!("# {player} non-losing strategy");
                for id in 0..arena.len() {
                    if let Some(mv) = solve.non_losing_move(&arena, player, id) {
                        let loopfo_core::game::Node::Moves { owner, succs } =
                            &arena.position(id).node
                        else {
                            continue;
                        };
                        if *owner == player && succs.len() > 1 {
                            println!("{id} -> {}", succs[mv]);
                        }
                    }
                }
            }
        }
    }
    if let Some(expected) = expect {
        let want: Outcome = expected.parse().map_err(CliError::input)?;
        if want != outcome {
            return Ok(EXIT_SIGNAL);
        }
    }
    Ok(0)
}

pub fn approx(
    format: Format,
    formula: &FormulaArg,
    n: u32,
    model: Option<&str>,
    assign: &str,
) -> CliResult {
    let f = parse_with(formula, None)?;
    let loaded = match model {
        Some(path) => Some(load_model(path)?),
        None => None,
    };
    let s = parse_assign(assign)?;
    let report = approximants::report(loaded.as_ref().map(|m| (m, &s)), &f, n, node_budget())?;
    match format {
        Format::Plain => {
            println!("{}", report.approximant);
            if let Some(t) = report.truth {
                println!("truth={t}");
            }
        }
        Format::JsonLines => println!(
            "{}",
            json!({
                "n": report.n,
                "approximant": report.approximant.to_string(),
                "unfolding_size": report.unfolding_size,
                "truth": report.truth,
            })
        ),
    }
    Ok(0)
}

pub fn unfold(format: Format, formula: &FormulaArg, n: u32) -> CliResult {
    let f = parse_with(formula, None)?;
    let u = approximants::unfold(&f, n, node_budget())?;
    match format {
        Format::Plain => println!("{u}"),
        Format::JsonLines => {
            println!(
                "{}",
                json!({ "n": n, "unfolding": u.to_string(), "nodes": u.node_count() })
            )
        }
    }
    Ok(0)
}

pub fn nnf(format: Format, formula: &FormulaArg, weak: bool, trace: bool) -> CliResult {
    let f = parse_with(formula, None)?;
    let budget = node_budget();
    if weak {
        let out = to_weak_nnf(&f, budget)?;
        match format {
            Format::Plain => println!("{out}"),
            Format::JsonLines => println!("{}", json!({ "weak_nnf": out.to_string() })),
        }
        return Ok(0);
    }
    let (out, _) = to_strong_nnf(&f, budget)?;
    match format {
        Format::Plain => println!("{out}"),
        Format::JsonLines => println!("{}", json!({ "strong_nnf": out.to_string() })),
    }
    if trace {
        let (fwd, _) = build_nnf_derivation(&f, budget).map_err(CliError::input)?;
        print!("{}", write_derivation(&fwd));
    }
    Ok(0)
}

pub fn regularize(format: Format, formula: &FormulaArg) -> CliResult {
    let f = parse_with(formula, None)?;
    let r = regularize_formula(&f);
    match format {
        Format::Plain => println!("{r}"),
        Format::JsonLines => println!("{}", json!({ "regularized": r.to_string() })),
    }
    Ok(0)
}

pub fn prove_check(format: Format, file: &str) -> CliResult {
    let text = std::fs::read_to_string(file)
        .map_err(|e| CliError::input(format!("reading {file}: {e}")))?;
    let d = parse_derivation(&text).map_err(CliError::input)?;
    match check_derivation(&d) {
        Ok(()) => {
            match format {
                Format::Plain => println!("ok ({} steps)", d.steps.len()),
                Format::JsonLines => {
                    println!("{}", json!({ "ok": true, "steps": d.steps.len() }))
                }
            }
            Ok(0)
        }
        Err(e) => {
            match format {
                Format::Plain => println!("error at step {}: {}", e.step, e.error),
                Format::JsonLines => println!(
                    "{}",
                    json!({ "ok": false, "step": e.step, "error": e.error.to_string() })
                ),
            }
            Ok(EXIT_SIGNAL)
        }
    }
}

pub fn prove_build(mode: &str, formula: &FormulaArg, n: u32, out: Option<&str>) -> CliResult {
    let f = parse_with(formula, None)?;
    let budget = node_budget();
    let text = match mode {
        "nnf" => {
            let (fwd, rev) = build_nnf_derivation(&f, budget).map_err(build_err)?;
            format!(
                "# forward\n{}# reverse\n{}",
                write_derivation(&fwd),
                write_derivation(&rev)
            )
        }
        "approximant" => {
            let d = build_approximant_derivation(&f, n, budget).map_err(build_err)?;
            write_derivation(&d)
        }
        other => {
            return Err(CliError::input(format!(
                "unknown prove-build mode `{other}` (expected nnf or approximant)"
            )))
        }
    };
    match out {
        Some(path) => std::fs::write(path, &text)
            .map_err(|e| CliError::input(format!("writing {path}: {e}")))?,
        None => print!("{text}"),
    }
    Ok(0)
}

fn build_err(e: loopfo_core::proof::BuildError) -> CliError {
    use loopfo_core::proof::BuildError;
    use loopfo_core::transform::TransformError;
    match &e {
        BuildError::Transform(TransformError::Budget { .. }) => CliError {
            code: crate::EXIT_BUDGET,
            message: e.to_string(),
        },
        _ => CliError::input(e),
    }
}

pub fn translate(
    format: Format,
    formula: &FormulaArg,
    safety: bool,
    tptp: bool,
    name: &str,
    role: &str,
) -> CliResult {
    let f = parse_with(formula, None)?;
    if tptp {
        let unit = export_tptp(name, role, &f)?;
        match format {
            Format::Plain => println!("{unit}"),
            Format::JsonLines => println!("{}", json!({ "tptp": unit })),
        }
        return Ok(0);
    }
    if !safety {
        return Err(CliError::input("translate needs --safety or --tptp"));
    }
    let theory = safety_theory(&f);
    match format {
        Format::Plain => {
            println!("# universal second-order reading: {}", theory.uso_comment());
            for (i, axiom) in theory.axioms.iter().enumerate() {
                println!("{}", export_tptp(&format!("ax{i}"), "axiom", axiom)?);
            }
            println!("{}", export_tptp("root", "axiom", &theory.root_sentence)?);
        }
        Format::JsonLines => {
            for axiom in &theory.axioms {
                println!("{}", json!({ "axiom": axiom.to_string() }));
            }
            println!("{}", json!({ "root": theory.root_sentence.to_string() }));
        }
    }
    Ok(0)
}

pub fn sat_search(
    format: Format,
    formula: &FormulaArg,
    max_n: u32,
    max_domain: usize,
) -> CliResult {
    let f = parse_with(formula, None)?;
    match approximants::sat_search(&f, max_n, max_domain, node_budget())? {
        SatSearchResult::Witness {
            structure,
            assign,
            n,
        } => {
            match format {
                Format::Plain => {
                    println!("witness at n={n} with assignment `{assign}`:");
                    print!("{structure}");
                }
                Format::JsonLines => println!(
                    "{}",
                    json!({
                        "result": "witness",
                        "n": n,
                        "assign": assign.to_string(),
                        "structure": structure.to_string(),
                    })
                ),
            }
            Ok(0)
        }
        SatSearchResult::Exhausted => {
            match format {
                Format::Plain => println!("exhausted (not a proof of unsatisfiability)"),
                Format::JsonLines => println!("{}", json!({ "result": "exhausted" })),
            }
            Ok(0)
        }
    }
}

pub fn valid_search(
    format: Format,
    formula: &FormulaArg,
    max_n: u32,
    max_domain: usize,
    prover_cmd: Option<String>,
) -> CliResult {
    let f = parse_with(formula, None)?;
    let cmd = prover_cmd
        .or_else(|| std::env::var("LOOPFO_PROVER_CMD").ok())
        .map(ProverCmd::new);
    let result = approximants::validity_search(&f, max_n, max_domain, cmd.as_ref(), node_budget())?;
    match result {
        ValidityResult::Proved { n, method } => {
            let how = match method {
                ProofMethod::ExternalProver => "external prover",
                ProofMethod::FiniteFragment => "finite-model fragment",
            };
            match format {
                Format::Plain => println!("proved at n={n} ({how})"),
                Format::JsonLines => {
                    println!("{}", json!({ "result": "proved", "n": n, "method": how }))
                }
            }
        }
        ValidityResult::Refuted { structure, assign } => match format {
            Format::Plain => {
                println!("refuted with assignment `{assign}` on:");
                print!("{structure}");
            }
            Format::JsonLines => println!(
                "{}",
                json!({
                    "result": "refuted",
                    "assign": assign.to_string(),
                    "structure": structure.to_string(),
                })
            ),
        },
        ValidityResult::Unknown => match format {
            Format::Plain => println!("unknown"),
            Format::JsonLines => println!("{}", json!({ "result": "unknown" })),
        },
    }
    Ok(0)
}
