//! Small named structures used by tests, examples and the acceptance suite.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::structure::{Elem, Structure};

/// `k` disjoint directed triangles `3i -> 3i+1 -> 3i+2 -> 3i`.
pub fn tri(k: u32) -> Structure {
    Structure::graph(3 * k as usize, &triangle_edges(k)).expect("valid fixture")
}

/// `tri(k)` plus one directed 4-cycle on `3k .. 3k+3`.
pub fn mix(k: u32) -> Structure {
    let mut edges = triangle_edges(k);
    let b = 3 * k;
    edges.extend([(b, b + 1), (b + 1, b + 2), (b + 2, b + 3), (b + 3, b)]);
    Structure::graph(3 * k as usize + 4, &edges).expect("valid fixture")
}

/// A directed cycle on `n` elements.
pub fn directed_cycle(n: u32) -> Structure {
    let edges: Vec<_> = (0..n).map(|i| (i, (i + 1) % n)).collect();
    Structure::graph(n as usize, &edges).expect("valid fixture")
}

fn triangle_edges(k: u32) -> Vec<(Elem, Elem)> {
    (0..k)
        .flat_map(|i| [(3 * i, 3 * i + 1), (3 * i + 1, 3 * i + 2), (3 * i + 2, 3 * i)])
        .collect()
}

/// A seeded random permutation of `0..n`.
pub fn random_permutation(n: usize, seed: u64) -> Vec<Elem> {
    let mut perm: Vec<Elem> = (0..n as Elem).collect();
    perm.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    perm
}

/// `s` relabeled by a seeded random permutation.
pub fn relabel(s: &Structure, seed: u64) -> Structure {
    s.relabel(&random_permutation(s.size(), seed)).expect("a permutation")
}
