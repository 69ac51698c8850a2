//! Successor edges around the singular elements: rare occurrences and the
//! junction anchors between frequent types.

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::structure::Elem;

use super::classify::Classification;
use super::state::{pick_far, BuilderState, Frame};

/// Gives every rare element a successor and predecessor of the first frequent
/// type, then protects the rare region level by level up to radius `r`.
pub fn weave_rare(frame: &Frame, cls: &Classification) -> Result<BuilderState> {
    let r = frame.r;
    let tau0 = cls
        .frequent
        .first()
        .ok_or_else(|| Error::contract("rare weaving needs at least one frequent type"))?;
    let mut st = BuilderState::new(1, frame.size(), r);
    if r == 0 {
        return Ok(st);
    }
    let rare: BTreeSet<_> = cls.rare.iter().collect();
    st.r_sets[0] = (0..frame.size() as Elem)
        .filter(|&x| rare.contains(&frame.types[x as usize]))
        .collect();
    let r0: Vec<Elem> = st.r_sets[0].iter().copied().collect();
    for x in r0 {
        add_neighbors(frame, &mut st.r_sets, x, 1);
        let plus = pick_far(frame, &st, tau0, &st.r_upto(1), "successor of a rare element")?;
        st.r_sets[1].insert(plus);
        st.add_edge(x, plus)?;
        let minus = pick_far(frame, &st, tau0, &st.r_upto(1), "predecessor of a rare element")?;
        st.r_sets[1].insert(minus);
        st.add_edge(minus, x)?;
    }
    for k in 1..r {
        let level: Vec<Elem> = st.r_sets[k].iter().copied().collect();
        for x in level {
            add_neighbors(frame, &mut st.r_sets, x, k + 1);
            protect(frame, &mut st, x, k, |st| st.r_upto(k + 1), Family::R)?;
        }
    }
    Ok(st)
}

/// Picks the anchors `x_i^min`, `x_i^max`, joins consecutive frequent types
/// with junction edges, and protects the anchors up to radius `r`.
pub fn weave_junctions(frame: &Frame, mut st: BuilderState, cls: &Classification) -> Result<BuilderState> {
    let r = frame.r;
    let m = cls.frequent.len();
    if m == 0 {
        return Err(Error::contract("junction weaving needs at least one frequent type"));
    }
    let rare_region = st.r_upto(r);
    let exclusion = |st: &BuilderState, upto: usize| -> BTreeSet<Elem> {
        let mut e = rare_region.clone();
        e.extend(st.p_upto(upto));
        e
    };
    for (i, tau) in cls.frequent.iter().enumerate() {
        let lo = pick_far(frame, &st, tau, &exclusion(&st, 0), &format!("x_{i}^min"))?;
        st.p_sets[0].insert(lo);
        let hi = pick_far(frame, &st, tau, &exclusion(&st, 0), &format!("x_{i}^max"))?;
        st.p_sets[0].insert(hi);
        st.anchors.push((lo, hi));
    }
    for i in 0..m {
        let (_, hi) = st.anchors[i];
        let (lo, _) = st.anchors[(i + 1) % m];
        st.add_edge(hi, lo)?;
    }
    for k in 0..r {
        let level: Vec<Elem> = st.p_sets[k].iter().copied().collect();
        for x in level {
            add_neighbors(frame, &mut st.p_sets, x, k + 1);
            protect(frame, &mut st, x, k, |st| exclusion(st, k + 1), Family::P)?;
        }
    }
    st.core = st.r_upto(r);
    st.core.extend(st.p_upto(r));
    Ok(st)
}

#[derive(Clone, Copy)]
enum Family {
    R,
    P,
}

impl Family {
    fn sets(self, st: &mut BuilderState) -> &mut Vec<BTreeSet<Elem>> {
        match self {
            Family::R => &mut st.r_sets,
            Family::P => &mut st.p_sets,
        }
    }
}

/// Adds the Σ-neighbors of `x` not yet in levels `..= level` to `level`.
fn add_neighbors(frame: &Frame, sets: &mut [BTreeSet<Elem>], x: Elem, level: usize) {
    for &y in frame.sigma.neighbors(x) {
        if !sets[..=level].iter().any(|s| s.contains(&y)) {
            sets[level].insert(y);
        }
    }
}

/// Gives `x` (at level `k`) a same-typed successor and predecessor if it
/// lacks them, each far from the current exclusion set.
fn protect(
    frame: &Frame,
    st: &mut BuilderState,
    x: Elem,
    k: usize,
    exclusion: impl Fn(&BuilderState) -> BTreeSet<Elem>,
    family: Family,
) -> Result<()> {
    let tau = frame.types[x as usize].clone();
    if st.succ[x as usize].is_none() {
        let plus = pick_far(frame, st, &tau, &exclusion(st), &format!("successor at level {k}"))?;
        family.sets(st)[k + 1].insert(plus);
        st.add_edge(x, plus)?;
    }
    if st.pred[x as usize].is_none() {
        let minus = pick_far(frame, st, &tau, &exclusion(st), &format!("predecessor at level {k}"))?;
        family.sets(st)[k + 1].insert(minus);
        st.add_edge(minus, x)?;
    }
    Ok(())
}
