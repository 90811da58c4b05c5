//! Built-in property suites behind `enumerate-test`: quick spot checks
//! over random formulas and exhaustively enumerated small structures.

use serde_json::json;

use loopfo_core::corpus;
use loopfo_core::game::{verdict_clocked, verdict_unbounded};
use loopfo_core::structures::{enumerate_assignments, enumerate_structures, tarski_eval};
use loopfo_core::syntax::{is_regular, regularize, Formula};
use loopfo_core::transform::to_strong_nnf;
use loopfo_core::Outcome;

use crate::{CliResult, Format, EXIT_SIGNAL};

struct Report {
    name: &'static str,
    checked: usize,
    failures: Vec<String>,
}

fn grid(f: &Formula, max_domain: usize) -> Vec<loopfo_core::Structure> {
    enumerate_structures(&corpus::formula_vocab(f), max_domain).collect()
}

fn duality_suite(seed: u64, count: usize) -> Report {
    let mut r = Report {
        name: "duality",
        checked: 0,
        failures: Vec::new(),
    };
    for f in corpus::random_corpus(count, 10, seed) {
        let neg = Formula::not(f.clone());
        for m in grid(&f, 2) {
            for s in enumerate_assignments(&m, &f.free_variables()) {
                r.checked += 1;
                let v = verdict_unbounded(&m, &s, &f).unwrap().outcome;
                let nv = verdict_unbounded(&m, &s, &neg).unwrap().outcome;
                let expected = match v {
                    Outcome::EloiseWins => Outcome::AbelardWins,
                    Outcome::AbelardWins => Outcome::EloiseWins,
                    Outcome::Undetermined => Outcome::Undetermined,
                };
                if nv != expected {
                    r.failures.push(format!("negation duality broke on {f}"));
                }
            }
        }
    }
    r
}

fn conservativity_suite(seed: u64, count: usize) -> Report {
    let mut r = Report {
        name: "conservativity",
        checked: 0,
        failures: Vec::new(),
    };
    for f in corpus::random_corpus(count * 3, 10, seed) {
        if !f.is_fo() {
            continue;
        }
        for m in grid(&f, 2) {
            for s in enumerate_assignments(&m, &f.free_variables()) {
                r.checked += 1;
                let truth = tarski_eval(&m, &s, &f).unwrap();
                let v = verdict_unbounded(&m, &s, &f).unwrap().outcome;
                let want = if truth {
                    Outcome::EloiseWins
                } else {
                    Outcome::AbelardWins
                };
                if v != want {
                    r.failures.push(format!("conservativity broke on {f}"));
                }
            }
        }
    }
    r
}

fn monotonicity_suite(seed: u64, count: usize) -> Report {
    let mut r = Report {
        name: "monotonicity",
        checked: 0,
        failures: Vec::new(),
    };
    for f in corpus::random_corpus(count, 10, seed) {
        for m in grid(&f, 2) {
            for s in enumerate_assignments(&m, &f.free_variables()) {
                let mut prev_e = false;
                let mut prev_a = false;
                for n in 0..5 {
                    r.checked += 1;
                    let v = verdict_clocked(&m, &s, &f, n).unwrap().outcome;
                    let e = v == Outcome::EloiseWins;
                    let a = v == Outcome::AbelardWins;
                    if (prev_e && !e) || (prev_a && !a) {
                        r.failures
                            .push(format!("clock monotonicity broke on {f} at n={n}"));
                    }
                    prev_e = e;
                    prev_a = a;
                }
            }
        }
    }
    r
}

fn regularize_suite(seed: u64, count: usize) -> Report {
    let mut r = Report {
        name: "regularize",
        checked: 0,
        failures: Vec::new(),
    };
    for f in corpus::random_corpus(count * 2, 12, seed) {
        r.checked += 1;
        let reg = regularize(&f);
        if !is_regular(&reg) {
            r.failures
                .push(format!("regularize output irregular for {f}"));
        }
        if let Ok((nnf, _)) = to_strong_nnf(&f, 100_000) {
            if !nnf.is_strong_nnf() {
                r.failures
                    .push(format!("strong nnf not in normal form for {f}"));
            }
        }
    }
    r
}

pub fn run(format: Format, suite: &str, seed: u64, count: usize) -> CliResult {
    let selected: Vec<Report> = match suite {
        "duality" => vec![duality_suite(seed, count)],
        "conservativity" => vec![conservativity_suite(seed, count)],
        "monotonicity" => vec![monotonicity_suite(seed, count)],
        "regularize" => vec![regularize_suite(seed, count)],
        "all" => vec![
            duality_suite(seed, count),
            conservativity_suite(seed, count),
            monotonicity_suite(seed, count),
            regularize_suite(seed, count),
        ],
        other => {
            return Err(crate::CliError::input(format!(
                "unknown suite `{other}` (duality, conservativity, monotonicity, regularize, all)"
            )))
        }
    };
    let mut failed = false;
    for report in selected {
        let ok = report.failures.is_empty();
        failed |= !ok;
        match format {
            Format::Plain => {
                println!(
                    "{}: {} ({} checks)",
                    report.name,
                    if ok { "PASS" } else { "FAIL" },
                    report.checked
                );
                for f in &report.failures {
                    println!("  {f}");
                }
            }
            Format::JsonLines => println!(
                "{}",
                json!({
                    "suite": report.name,
                    "pass": ok,
                    "checked": report.checked,
                    "failures": report.failures,
                })
            ),
        }
    }
    Ok(if failed { EXIT_SIGNAL } else { 0 })
}
