//! Approximant-level properties: index monotonicity, bounded truth as a
//! finite disjunction of approximants, and report plumbing.

use loopfo_core::approximants::{approximant, eval_via_approximant, report, unfold};
use loopfo_core::corpus;
use loopfo_core::game::{clock_profile, verdict_bounded};
use loopfo_core::structures::{enumerate_assignments, enumerate_structures, tarski_eval};
use loopfo_core::syntax::regularize;
use loopfo_core::Outcome;

const BUDGET: usize = 200_000;

#[test]
fn index_monotonicity() {
    for entry in corpus::full_corpus(10, 0xC0FFEE) {
        let f = &entry.formula;
        let vocab = corpus::formula_vocab(f);
        let approximants: Vec<_> = (0..=6)
            .map(|n| approximant(f, n, BUDGET).unwrap())
            .collect();
        for m in enumerate_structures(&vocab, 2) {
            for s in enumerate_assignments(&m, &f.free_variables()) {
                for n in 0..=3usize {
                    if tarski_eval(&m, &s, &approximants[n]).unwrap() {
                        for (ahead, phi) in approximants.iter().enumerate().skip(n + 1).take(3) {
                            assert!(
                                tarski_eval(&m, &s, phi).unwrap(),
                                "{}: true at {n} but false at {ahead}",
                                entry.name
                            );
                        }
                    }
                }
            }
        }
    }
}

#[test]
fn bounded_truth_is_a_finite_disjunction() {
    for entry in corpus::full_corpus(10, 0xC0FFEE) {
        let f = &entry.formula;
        let vocab = corpus::formula_vocab(f);
        for m in enumerate_structures(&vocab, 2) {
            for s in enumerate_assignments(&m, &f.free_variables()) {
                let wins = verdict_bounded(&m, &s, f).unwrap().outcome == Outcome::EloiseWins;
                let profile = clock_profile(&m, &s, f).unwrap();
                let positions = profile.arena().len() as u32;
                // some level up to the position count must witness a win
                let witnessed =
                    (0..=positions).any(|n| profile.verdict_at(n) == Outcome::EloiseWins);
                assert_eq!(wins, witnessed, "{}", entry.name);
                if wins {
                    let n = profile.minimal_clock().unwrap() as u32;
                    assert!(
                        eval_via_approximant(&m, &s, f, n, BUDGET).unwrap(),
                        "{}: approximant at the minimal clock must hold",
                        entry.name
                    );
                }
            }
        }
    }
}

#[test]
fn unfolding_stabilizes_without_claims() {
    let f = corpus::pairs_sentence(); // pure first-order
    assert_eq!(unfold(&f, 5, BUDGET).unwrap(), regularize(&f));
}

#[test]
fn report_carries_sizes_and_truth() {
    let m = loopfo_core::Structure::digraph(3, &[(0, 1), (1, 2), (2, 0)]);
    let s = loopfo_core::Assignment::empty();
    let phi = corpus::cycle_sentence();
    let r = report(Some((&m, &s)), &phi, 2, BUDGET).unwrap();
    assert_eq!(r.n, 2);
    assert!(r.unfolding_size > phi.node_count());
    assert!(r.approximant.is_fo());
    assert_eq!(r.truth, Some(true));
}
