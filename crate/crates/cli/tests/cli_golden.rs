//! Golden tests: identical inputs through the library and through the
//! binary yield identical results.

use std::io::Write;
use std::process::Command;

use loopfo_core::approximants::approximant;
use loopfo_core::corpus;
use loopfo_core::game::{minimal_clock, verdict_bounded};
use loopfo_core::syntax::print_formula;
use loopfo_core::{Assignment, Structure};

fn loopfo(args: &[&str]) -> (String, String, i32) {
    let out = Command::new(env!("CARGO_BIN_EXE_loopfo"))
        .args(args)
        .output()
        .expect("binary runs");
    (
        String::from_utf8_lossy(&out.stdout).into_owned(),
        String::from_utf8_lossy(&out.stderr).into_owned(),
        out.status.code().unwrap_or(-1),
    )
}

fn write_temp(name: &str, content: &str) -> String {
    let path = std::env::temp_dir().join(format!("loopfo-test-{}-{name}", std::process::id()));
    let mut f = std::fs::File::create(&path).expect("temp file");
    f.write_all(content.as_bytes()).expect("write");
    path.to_string_lossy().into_owned()
}

const CYCLE: &str =
    "exists x. exists y. (x = y & L1: (E(y,x) | exists z. (E(y,z) & exists y. (y = z & @L1))))";

#[test]
fn check_matches_library() {
    let model = write_temp("c3.mod", "domain 3\nrel E 2 { (0,1)(1,2)(2,0) }\n");
    let (stdout, _, code) = loopfo(&[
        "check",
        "--model",
        &model,
        "--formula",
        CYCLE,
        "--semantics",
        "bounded",
    ]);
    assert_eq!(code, 0);

    let m = Structure::digraph(3, &[(0, 1), (1, 2), (2, 0)]);
    let s = Assignment::empty();
    let f = corpus::cycle_sentence();
    let verdict = verdict_bounded(&m, &s, &f).unwrap().outcome;
    let mc = minimal_clock(&m, &s, &f).unwrap().unwrap();
    assert_eq!(stdout, format!("{verdict}\nminimal_clock={mc}\n"));
}

#[test]
fn check_expect_drives_the_exit_code() {
    let model = write_temp("p2.mod", "domain 2\nrel E 2 { (0,1) }\n");
    let (_, _, ok) = loopfo(&[
        "check",
        "--model",
        &model,
        "--formula",
        CYCLE,
        "--expect",
        "AbelardWins",
    ]);
    assert_eq!(ok, 0);
    let (_, _, bad) = loopfo(&[
        "check",
        "--model",
        &model,
        "--formula",
        CYCLE,
        "--expect",
        "EloiseWins",
    ]);
    assert_eq!(bad, 1);
}

#[test]
fn approx_matches_library() {
    let (stdout, _, code) = loopfo(&["approx", "--formula", "L1: @L1", "--n", "5"]);
    assert_eq!(code, 0);
    assert_eq!(stdout, "bot\n");
    let (stdout, _, _) = loopfo(&["approx", "--formula", CYCLE, "--n", "2"]);
    let lib = approximant(&corpus::cycle_sentence(), 2, 200_000).unwrap();
    assert_eq!(stdout.trim_end(), print_formula(&lib));
}

#[test]
fn json_lines_output_is_stable() {
    let model = write_temp("c3b.mod", "domain 3\nrel E 2 { (0,1)(1,2)(2,0) }\n");
    let (stdout, _, code) = loopfo(&[
        "--format",
        "json-lines",
        "check",
        "--model",
        &model,
        "--formula",
        CYCLE,
        "--semantics",
        "bounded",
    ]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(stdout.trim()).expect("valid json");
    assert_eq!(v["verdict"], "EloiseWins");
    assert_eq!(v["minimal_clock"], 2);
}

#[test]
fn prove_check_reports_step_errors_with_exit_one() {
    let good = write_temp(
        "good.drv",
        "1 ; premise ; ; ; ; L1: (P(x) & @L1)\n2 ; SubstShift ; 1 ; ; claims=0.1 ; L1: (P(x) & L1: (P(x) & @L1))\n",
    );
    let (stdout, _, code) = loopfo(&["prove-check", &good]);
    assert_eq!(code, 0, "{stdout}");
    let bad = write_temp(
        "bad.drv",
        "1 ; premise ; ; ; ; L1: @L1 & L1: @L1\n2 ; SubstShift ; 1 ; 0 ; claims=0.0 ; L1: L1: @L1 & L1: @L1\n",
    );
    let (stdout, _, code) = loopfo(&["prove-check", &bad]);
    assert_eq!(code, 1);
    assert!(stdout.contains("step 2"), "{stdout}");
    assert!(stdout.contains("not regular"), "{stdout}");
}

#[test]
fn prove_build_output_round_trips() {
    let (stdout, _, code) = loopfo(&[
        "prove-build",
        "approximant",
        "--formula",
        "L1: (P(x) | @L1)",
        "--n",
        "0",
    ]);
    assert_eq!(code, 0);
    let d = loopfo_core::proof::parse_derivation(&stdout).unwrap();
    loopfo_core::proof::check_derivation(&d).unwrap();
    assert_eq!(
        d.steps[0].formula(),
        &loopfo_core::syntax::parse_formula_inferred("P(x) | bot")
            .unwrap()
            .0
    );
}

#[test]
fn usage_errors_exit_two() {
    let (_, _, code) = loopfo(&["check", "--no-such-flag"]);
    assert_eq!(code, 2);
}

#[test]
fn input_errors_exit_three() {
    let (_, stderr, code) = loopfo(&["approx", "--formula", "P(x", "--n", "0"]);
    assert_eq!(code, 3);
    assert!(stderr.contains("error"), "{stderr}");
    let model = write_temp("bad.mod", "domain 0\n");
    let (_, _, code) = loopfo(&["check", "--model", &model, "--formula", "bot"]);
    assert_eq!(code, 3);
}

#[test]
fn budget_errors_exit_four() {
    let (_, stderr, code) = Command::new(env!("CARGO_BIN_EXE_loopfo"))
        .args(["unfold", "--formula", "L1: (@L1 & @L1)", "--n", "14"])
        .env("LOOPFO_NODE_BUDGET", "200")
        .output()
        .map(|o| {
            (
                String::from_utf8_lossy(&o.stdout).into_owned(),
                String::from_utf8_lossy(&o.stderr).into_owned(),
                o.status.code().unwrap_or(-1),
            )
        })
        .unwrap();
    assert_eq!(code, 4, "{stderr}");
}

#[test]
fn prover_failures_exit_five() {
    let (_, stderr, code) = loopfo(&[
        "valid-search",
        "--formula",
        "P | ~P",
        "--max-n",
        "0",
        "--max-domain",
        "0",
        "--prover-cmd",
        "/nonexistent/prover",
    ]);
    assert_eq!(code, 5, "{stderr}");
}

#[test]
fn fake_prover_drives_the_szs_contract() {
    let prover = write_temp("fake-prover.sh", "#!/bin/sh\necho '% SZS status Theorem'\n");
    let mut perms = std::fs::metadata(&prover).unwrap().permissions();
    use std::os::unix::fs::PermissionsExt;
    perms.set_mode(0o755);
    std::fs::set_permissions(&prover, perms).unwrap();
    let (stdout, _, code) = loopfo(&[
        "valid-search",
        "--formula",
        "P | ~P",
        "--max-n",
        "1",
        "--max-domain",
        "0",
        "--prover-cmd",
        &prover,
    ]);
    assert_eq!(code, 0);
    assert!(stdout.contains("proved at n=0"), "{stdout}");
    assert!(stdout.contains("external prover"), "{stdout}");
}
