//! Shared fixtures for the benchmarks.

use loopfo_core::Structure;

/// Deterministic pseudo-random digraph on `n` nodes.
pub fn random_digraph(n: usize, seed: u64) -> Structure {
    let mut state = seed | 1;
    let mut next = move || {
        state ^= state << 13;
        state ^= state >> 7;
        state ^= state << 17;
        state
    };
    let mut edges = Vec::new();
    for a in 0..n {
        for b in 0..n {
            if next() % 3 == 0 {
                edges.push((a, b));
            }
        }
    }
    Structure::digraph(n, &edges)
}
