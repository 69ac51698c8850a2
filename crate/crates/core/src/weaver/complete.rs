//! Completion of a partial successor into a single cycle.

use std::collections::{BTreeSet, HashMap, HashSet};

use crate::census::NeighborhoodType;
use crate::error::{Error, Result};
use crate::logic::successor::is_circular_successor;
use crate::structure::{n_bound, Elem};

use super::state::{short_id, BuilderState, Direction, Frame};

/// Extends `st` to a circular successor.
///
/// For each frequent type `τ_i`, a greedy phase chains predecessor-less
/// `τ_i` elements after `S*(x_i^min)` while keeping every new edge more than
/// `2r` apart from the closing element `S^{-*}(x_i^max)`, then closes the arc.
/// A splice phase inserts each remaining predecessor-less `τ_i` chain into a
/// cycle edge between two `τ_i` elements outside the core.
///
/// Returns the successor as a map `x -> succ(x)`.
pub fn complete(frame: &Frame, st: &mut BuilderState, frequent: &[NeighborhoodType], d: u64) -> Result<Vec<Elem>> {
    let n = frame.size();
    let r2 = 2 * frame.r;
    let m = frequent.len();
    if st.anchors.len() != m {
        return Err(Error::contract("anchor count differs from the number of frequent types"));
    }
    let index: HashMap<&NeighborhoodType, usize> = frequent.iter().enumerate().map(|(i, t)| (t, i)).collect();
    let type_index = |x: Elem| index.get(&frame.types[x as usize]).copied();

    // predecessor-less elements per frequent type
    let mut headless: Vec<BTreeSet<Elem>> = vec![BTreeSet::new(); m];
    for x in 0..n as Elem {
        if st.pred[x as usize].is_none() {
            if let Some(i) = type_index(x) {
                headless[i].insert(x);
            }
        }
    }
    st.diagnostics.greedy_edges = vec![0; m];
    st.diagnostics.splices = vec![0; m];

    for i in 0..m {
        let (lo, hi) = st.anchors[i];
        let mut s = st.s_star(lo, Direction::Forward)?;
        let t = st.s_star(hi, Direction::Backward)?;
        loop {
            let near_s = st.near(frame, [s], r2);
            let near_t = st.near(frame, [t], r2);
            let mut chosen = None;
            for &x in &headless[i] {
                if near_s.contains(&x) || near_t.contains(&x) {
                    continue;
                }
                let tail = st.s_star(x, Direction::Forward)?;
                if near_t.contains(&tail) {
                    continue;
                }
                if tail == s {
                    st.diagnostics.chain_guard_fired += 1;
                    continue;
                }
                chosen = Some((x, tail));
                break;
            }
            let Some((x, tail)) = chosen else { break };
            st.add_edge(s, x)?;
            headless[i].remove(&x);
            st.diagnostics.greedy_edges[i] += 1;
            s = tail;
        }
        st.add_edge(s, t)?;
        if let Some(j) = type_index(t) {
            headless[j].remove(&t);
        }
    }

    let mut on_cycle: HashSet<Elem> = HashSet::new();
    if let Some(&(start, _)) = st.anchors.first() {
        let mut cur = start;
        loop {
            on_cycle.insert(cur);
            match st.succ[cur as usize] {
                Some(next) if next != start => cur = next,
                Some(_) => break,
                None => return Err(Error::contract("the greedy phase did not close a cycle")),
            }
        }
    }

    let mut of_type: Vec<Vec<Elem>> = vec![Vec::new(); m];
    for x in 0..n as Elem {
        if let Some(i) = type_index(x) {
            of_type[i].push(x);
        }
    }
    for i in 0..m {
        let heads: Vec<Elem> = headless[i].iter().copied().collect();
        for x in heads {
            if st.pred[x as usize].is_some() {
                continue;
            }
            let tail = st.s_star(x, Direction::Forward)?;
            let near_x = st.near(frame, [x], r2);
            let near_tail = st.near(frame, [tail], r2);
            let found = of_type[i].iter().copied().find_map(|y| {
                let z = st.succ[y as usize]?;
                let ok = !st.core.contains(&y)
                    && !st.core.contains(&z)
                    && type_index(z) == Some(i)
                    && on_cycle.contains(&y)
                    && !near_x.contains(&y)
                    && !near_tail.contains(&z);
                ok.then_some((y, z))
            });
            let Some((y, z)) = found else {
                return Err(Error::InfeasibleSplice(format!(
                    "no successor edge between two elements of type {} outside the core is far \
                     enough from the leftover chain starting at {x}; the greedy phase needs at \
                     least 2N(d+2,2r)+1 = {} edges of this type, it added {}",
                    short_id(&frequent[i]),
                    n_bound(d + 2, r2 as u64).saturating_mul(2).saturating_add(1),
                    st.diagnostics.greedy_edges[i]
                )));
            };
            st.remove_edge(y, z)?;
            st.add_edge(y, x)?;
            st.add_edge(tail, z)?;
            let mut cur = x;
            loop {
                on_cycle.insert(cur);
                if cur == tail {
                    break;
                }
                cur = st.succ[cur as usize].expect("chain continues to its tail");
            }
            st.diagnostics.splices[i] += 1;
        }
    }

    let succ: Vec<Elem> = st
        .succ
        .iter()
        .enumerate()
        .map(|(x, s)| s.ok_or_else(|| Error::contract(format!("element {x} has no successor after completion"))))
        .collect::<Result<_>>()?;
    let pairs: Vec<(Elem, Elem)> = succ.iter().enumerate().map(|(x, &y)| (x as Elem, y)).collect();
    if !is_circular_successor(&pairs, n) {
        return Err(Error::contract("completion produced more than one successor cycle"));
    }
    Ok(succ)
}
