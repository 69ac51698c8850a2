//! The layering property: no short cycle passes through a successor edge.
//!
//! [`short_cycle_through_s`] searches for a witness cycle of length at most
//! `2r + 1`; [`layered_neighborhoods`] checks the definition directly on every
//! radius-`r` neighborhood. The two agree on structures whose relations are at
//! most binary.

use std::collections::VecDeque;

use crate::structure::{neighborhood_in, Distance, Elem, GaifmanGraph, Structure};

/// Shortest path from `from` to `to` in `g` that does not use the edge
/// `{from, to}`, if one of length at most `limit` exists.
fn detour(g: &GaifmanGraph, from: Elem, to: Elem, limit: usize) -> Option<Vec<Elem>> {
    let mut parent: std::collections::HashMap<Elem, (Elem, usize)> = std::collections::HashMap::new();
    parent.insert(from, (from, 0));
    let mut queue = VecDeque::from([from]);
    while let Some(u) = queue.pop_front() {
        let d = parent[&u].1;
        if d == limit {
            continue;
        }
        for &w in g.neighbors(u) {
            if u == from && w == to {
                continue;
            }
            if parent.contains_key(&w) {
                continue;
            }
            parent.insert(w, (u, d + 1));
            if w == to {
                let mut path = vec![to];
                let mut cur = to;
                while cur != from {
                    cur = parent[&cur].0;
                    path.push(cur);
                }
                path.reverse();
                return Some(path);
            }
            queue.push_back(w);
        }
    }
    None
}

/// A cycle of length between 3 and `2r + 1` through an S-edge, as the list of
/// its vertices starting with the S-edge's endpoints, or `None` if the
/// enriched structure satisfies the layering property at radius `r`.
pub fn short_cycle_through_s(s: &Structure, r: usize) -> Option<Vec<Elem>> {
    let g = GaifmanGraph::new(s, true);
    for (u, v) in s.succ_pairs() {
        if u == v {
            continue;
        }
        if let Some(path) = detour(&g, u, v, 2 * r) {
            // path runs u .. v; closing edge v -> u is the S-edge
            let mut cycle = path;
            cycle.rotate_right(1);
            return Some(cycle);
        }
    }
    None
}

/// Definition-based check: every radius-`r` neighborhood over the enriched
/// signature is free of cycles through S-edges.
pub fn layered_neighborhoods(s: &Structure, r: usize) -> bool {
    first_unlayered_center(s, r).is_none()
}

/// The least element whose enriched radius-`r` neighborhood contains a cycle
/// through an S-edge.
pub fn first_unlayered_center(s: &Structure, r: usize) -> Option<Elem> {
    let g = GaifmanGraph::new(s, true);
    (0..s.size() as Elem).find(|&x| {
        let (p, _) = neighborhood_in(s, &g, x, r, true);
        let local = GaifmanGraph::new(&p.structure, true);
        p.structure
            .succ_pairs()
            .into_iter()
            .any(|(u, v)| u != v && detour(&local, u, v, usize::MAX).is_some())
    })
}

/// Adding the S-edge `(x, y)` keeps the layering property at radius `r`
/// whenever the enriched distance between `x` and `y` exceeds `2r`.
pub fn safe_to_add(s: &Structure, x: Elem, y: Elem, r: usize) -> bool {
    GaifmanGraph::new(s, true).distance(x, y).exceeds(2 * r)
}

/// Checks that `cycle` is a genuine cycle of the enriched Gaifman graph of
/// length at least 3 that uses at least one S-edge.
pub fn is_cycle_through_s(s: &Structure, cycle: &[Elem]) -> bool {
    let l = cycle.len();
    if l < 3 {
        return false;
    }
    let mut sorted = cycle.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    if sorted.len() != l {
        return false;
    }
    let g = GaifmanGraph::new(s, true);
    let succ = s.succ();
    let mut uses_s = false;
    for i in 0..l {
        let (a, b) = (cycle[i], cycle[(i + 1) % l]);
        if g.distance(a, b) != Distance::Finite(1) {
            return false;
        }
        if let Some(succ) = succ {
            uses_s |= succ.contains(&[a, b]) || succ.contains(&[b, a]);
        }
    }
    uses_s
}
