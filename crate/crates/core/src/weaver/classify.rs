use serde::Serialize;

use crate::census::{NeighborhoodType, TypeCensus};
use crate::error::{Error, Result};
use crate::params::{a_sequence, GBound, GFunction};

use super::state::short_id;

/// Partition of the occurring types into rare and frequent ones.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Classification {
    /// Rare types in ascending (count, id) order.
    pub rare: Vec<NeighborhoodType>,
    /// Frequent types `τ_0 .. τ_{m-1}` in ascending (count, id) order.
    pub frequent: Vec<NeighborhoodType>,
    /// Total number of rare occurrences in the first structure.
    pub beta: u64,
    /// `g(beta)`.
    pub g_beta: u64,
    pub binding_bound: GBound,
    /// `a_1, a_2, ...` for as many terms as there are types, when it fits
    /// in 64 bits.
    pub a_sequence: Option<Vec<u64>>,
}

/// Splits types by walking the first census in ascending (count, id) order
/// while the count stays below `g` of the accumulated rare count.
pub fn classify_types(c1: &TypeCensus, c2: &TypeCensus, g: &GFunction) -> Result<Classification> {
    if c1.radius != c2.radius || c1.over_succ != c2.over_succ {
        return Err(Error::input("censuses at different radii or namespaces"));
    }
    if let Some(t) = c2.counts.keys().find(|t| !c1.counts.contains_key(*t)) {
        return Err(Error::similarity(format!(
            "type {} occurs only in the second structure",
            short_id(t)
        )));
    }
    let mut order: Vec<(usize, &NeighborhoodType)> = c1.counts.iter().map(|(t, &c)| (c, t)).collect();
    order.sort();
    let mut beta: u64 = 0;
    let mut i = 0;
    while i < order.len() && (order[i].0 as u64) < g.eval(beta) {
        beta += order[i].0 as u64;
        i += 1;
    }
    let g_beta = g.eval(beta);
    let rare: Vec<NeighborhoodType> = order[..i].iter().map(|(_, t)| (*t).clone()).collect();
    let frequent: Vec<NeighborhoodType> = order[i..].iter().map(|(_, t)| (*t).clone()).collect();
    for t in &rare {
        let (a, b) = (c1.count(t), c2.count(t));
        if a != b {
            return Err(Error::similarity(format!(
                "rare type {} occurs {a} times in the first structure and {b} in the second",
                short_id(t)
            )));
        }
    }
    for t in &frequent {
        let b = c2.count(t) as u64;
        if b < g_beta {
            return Err(Error::similarity(format!(
                "frequent type {} occurs only {b} times in the second structure, below g(β) = {g_beta}",
                short_id(t)
            )));
        }
    }
    let a_seq = a_sequence(|b| g.eval_checked(b), order.len().max(1)).ok();
    Ok(Classification {
        rare,
        frequent,
        beta,
        g_beta,
        binding_bound: g.binding(beta),
        a_sequence: a_seq,
    })
}
