//! Well-known sentences used across tests, benchmarks and the built-in
//! property suites, plus a deterministic random-formula generator.

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use crate::syntax::{parse_formula_inferred, Formula, Vocabulary};

fn parsed(text: &str) -> Formula {
    parse_formula_inferred(text)
        .expect("corpus sentence parses")
        .0
}

/// Digraphs containing a cycle: Eloise moves a pebble `y` along edges
/// until it returns to the start `x`.
pub fn cycle_sentence() -> Formula {
    parsed(
        "exists x. exists y. (x = y & L1: (E(y,x) | exists z. (E(y,z) & exists y. (y = z & @L1))))",
    )
}

/// Digraphs of finite diameter (under bounded semantics): between any two
/// vertices there is a path of globally bounded length.
pub fn diameter_sentence() -> Formula {
    parsed(
        "forall x. forall y. (x = y | L1: (E(x,y) | exists z. (E(x,z) & exists x. (x = z & @L1))))",
    )
}

/// Well-founded strict linear orders (under unbounded semantics): Abelard
/// keeps descending, so any infinite play witnesses an infinite chain.
pub fn wellfounded_sentence() -> Formula {
    parsed("forall x. L1: forall y. (~Lt(y,x) | forall x. (~(x = y) | @L1))")
}

/// The pure loop `L1: @L1`: every approximant is falsum, no play ends.
pub fn pure_loop() -> Formula {
    parsed("L1: @L1")
}

/// `Lt` as a strict linear order with `S` its successor relation; pure
/// first-order scaffolding shared by the order-shaped sentences.
fn order_axioms() -> String {
    [
        "forall a. ~Lt(a,a)",
        "forall a. forall b. forall c. (~Lt(a,b) | ~Lt(b,c) | Lt(a,c))",
        "forall a. forall b. (a = b | Lt(a,b) | Lt(b,a))",
        "forall a. forall b. (S(a,b) <-> Lt(a,b) & ~(exists c. (Lt(a,c) & Lt(c,b))))",
    ]
    .map(|s| format!("({s})"))
    .join(" & ")
}

/// Strict linear orders of even size: two pebbles start on the endpoints
/// and walk toward each other along the successor relation.
pub fn even_order_sentence() -> Formula {
    let phi_lt = order_axioms();
    let walk = "exists x. exists y. ((forall u. ~Lt(u,x)) & (forall u. ~Lt(y,u)) & \
                (S(x,y) | L1: exists z. exists w. (S(x,z) & S(w,y) & \
                (S(z,w) | exists x. exists y. (x = z & y = w & @L1)))))";
    parsed(&format!("{phi_lt} & ({walk})"))
}

/// Orders with a finite successor path from the minimum to the maximum.
pub fn finite_span_sentence() -> Formula {
    let phi_lt = order_axioms();
    let span = "exists u. exists v. ((forall z. ~Lt(z,u)) & (forall z. ~Lt(v,z)) & \
                (u = v | exists x. (S(u,x) & L1: (x = v | exists y. (S(x,y) & \
                exists x. (x = y & @L1))))))";
    parsed(&format!("{phi_lt} & ({span})"))
}

/// Equivalence relation whose classes all have exactly two elements.
pub fn pairs_sentence() -> Formula {
    parsed(
        "(forall a. Eq(a,a)) & (forall a. forall b. (~Eq(a,b) | Eq(b,a))) & \
         (forall a. forall b. forall c. (~Eq(a,b) | ~Eq(b,c) | Eq(a,c))) & \
         (forall x. exists y. (~(x = y) & Eq(x,y) & forall z. (~Eq(x,z) | x = z | y = z)))",
    )
}

/// Equivalence relation with one singleton class and all other classes of
/// size two.
pub fn one_singleton_sentence() -> Formula {
    parsed(
        "(forall a. Eq(a,a)) & (forall a. forall b. (~Eq(a,b) | Eq(b,a))) & \
         (forall a. forall b. forall c. (~Eq(a,b) | ~Eq(b,c) | Eq(a,c))) & \
         (exists x. ((forall y. (x = y | ~Eq(x,y))) & \
         forall y. (y = x | exists z. (~(y = z) & Eq(y,z) & forall w. (~Eq(y,w) | y = w | z = w)))))",
    )
}

/// An entry of the shared test corpus: a sentence plus the largest domain
/// the exhaustive grids should use for it (big vocabularies get a smaller
/// grid to keep exhaustive sweeps fast).
#[derive(Debug, Clone)]
pub struct CorpusEntry {
    pub name: String,
    pub formula: Formula,
    pub max_domain: usize,
}

/// The named part of the corpus.
pub fn named_corpus() -> Vec<CorpusEntry> {
    let e = |name: &str, formula: Formula, max_domain: usize| CorpusEntry {
        name: name.to_string(),
        formula,
        max_domain,
    };
    vec![
        e("cycle", cycle_sentence(), 3),
        e("diameter", diameter_sentence(), 3),
        e("wellfounded", wellfounded_sentence(), 3),
        e("pure_loop", pure_loop(), 3),
        e("pure_loop_lem", parsed("L1: @L1 | ~L1: @L1"), 3),
        e("free_claim", parsed("@L1"), 3),
        e("free_claim_mix", parsed("@L1 & L2: (P(x) | @L2)"), 3),
        e("negated_loop", parsed("L1: ~@L1"), 3),
        e("nested_loops", parsed("L1: (P(x) | L2: (@L1 & @L2))"), 3),
        e("double_negation", parsed("~~L1: @L1"), 3),
        e(
            "alternating",
            parsed("L1: forall x. (P(x) | exists y. (E(x,y) & @L1))"),
            3,
        ),
        e("finite_span", finite_span_sentence(), 2),
        e("pairs", pairs_sentence(), 2),
        e("one_singleton", one_singleton_sentence(), 2),
        e("excluded_middle_fo", parsed("P(x) | ~P(x)"), 3),
    ]
}

/// Deterministic random formulas over the vocabulary `{P:1, Q:1, E:2}`,
/// variables `x`, `y`, labels `L1..L3`.
pub fn random_corpus(count: usize, max_nodes: usize, seed: u64) -> Vec<Formula> {
    let mut rng = StdRng::seed_from_u64(seed);
    let mut out = Vec::new();
    while out.len() < count {
        let f = random_formula(&mut rng, max_nodes);
        if f.node_count() <= max_nodes {
            out.push(f);
        }
    }
    out
}

fn random_formula(rng: &mut StdRng, budget: usize) -> Formula {
    let vars = ["x", "y"];
    let var = |rng: &mut StdRng| vars[rng.random_range(0..vars.len())];
    if budget <= 1 {
        return match rng.random_range(0..5) {
            0 => Formula::Falsum,
            1 => Formula::atom("P", &[var(rng)]),
            2 => Formula::atom("Q", &[var(rng)]),
            3 => Formula::eq(var(rng), var(rng)),
            _ => Formula::Claim(rng.random_range(1..=3)),
        };
    }
    match rng.random_range(0..10) {
        0 => Formula::not(random_formula(rng, budget - 1)),
        1 | 2 => {
            let left = random_formula(rng, (budget - 1) / 2);
            let right = random_formula(rng, (budget - 1) / 2);
            Formula::and(left, right)
        }
        3 | 4 => {
            let left = random_formula(rng, (budget - 1) / 2);
            let right = random_formula(rng, (budget - 1) / 2);
            Formula::or(left, right)
        }
        5 => Formula::exists(var(rng), random_formula(rng, budget - 1)),
        6 => Formula::forall(var(rng), random_formula(rng, budget - 1)),
        7 | 8 => Formula::labeled(rng.random_range(1..=3), random_formula(rng, budget - 1)),
        _ => Formula::atom("E", &[var(rng), var(rng)]),
    }
}

/// The full shared corpus: the named sentences plus `random_count` random
/// ones.
pub fn full_corpus(random_count: usize, seed: u64) -> Vec<CorpusEntry> {
    let mut out = named_corpus();
    for (i, f) in random_corpus(random_count, 12, seed)
        .into_iter()
        .enumerate()
    {
        out.push(CorpusEntry {
            name: format!("random_{i}"),
            formula: f,
            max_domain: 3,
        });
    }
    out
}

/// Vocabulary a corpus formula is evaluated against: the predicates it
/// mentions, with the arities it uses.
pub fn formula_vocab(f: &Formula) -> Vocabulary {
    let mut vocab = Vocabulary::new();
    for (name, arity) in f.predicates() {
        vocab
            .declare(&name, arity.expect("consistent arity in corpus"))
            .expect("valid name");
    }
    vocab
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn corpus_parses_and_is_stable() {
        let all = full_corpus(25, 0xC0FFEE);
        assert!(all.len() >= 40);
        let again = full_corpus(25, 0xC0FFEE);
        for (a, b) in all.iter().zip(&again) {
            assert_eq!(a.formula, b.formula);
        }
    }

    #[test]
    fn random_formulas_respect_node_cap() {
        for f in random_corpus(25, 12, 7) {
            assert!(f.node_count() <= 12);
        }
    }
}
