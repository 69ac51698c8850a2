//! Building circular successors on two similar structures.
//!
//! The pipeline classifies neighborhood types into rare and frequent ones,
//! weaves successor edges around rare elements and junction anchors in the
//! first structure, carries that partial successor to the second structure
//! through a type-preserving embedding, and completes both independently.

mod classify;
mod complete;
mod protect;
mod state;
mod transfer;

pub use classify::{classify_types, Classification};
pub use complete::complete;
pub use protect::{weave_junctions, weave_rare};
pub use state::{pick_far, short_id as short_type_id, BuilderState, Diagnostics, Direction, Frame};
pub use transfer::{transfer_partial, DEFAULT_NODE_BUDGET};

use crate::canon::canonical_form;
use crate::census::{threshold_violations, TypeCensus};
use crate::error::{Error, Result};
use crate::params::ParamsBundle;
use crate::structure::{structure_degree, Elem, Structure};

/// Which construction produced the successors.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Branch {
    /// Rare/frequent weaving, transfer and completion.
    General,
    /// No frequent type: the structures are isomorphic and the successor is
    /// transported through an isomorphism.
    Isomorphism,
    /// Radius 0: every circular successor works.
    TrivialRadius,
}

#[derive(Clone, Debug)]
pub struct WeaveResult {
    /// `succ1[x]` is the successor of `x` in the first structure.
    pub succ1: Vec<Elem>,
    pub succ2: Vec<Elem>,
    pub classification: Classification,
    pub state1: BuilderState,
    pub state2: BuilderState,
    pub params: ParamsBundle,
    pub isomorphism_branch: bool,
    pub branch: Branch,
}

/// Runs the full construction on `g1` and `g2` under `params`.
pub fn weave_pair(g1: &Structure, g2: &Structure, params: &ParamsBundle) -> Result<WeaveResult> {
    weave_pair_with_budget(g1, g2, params, DEFAULT_NODE_BUDGET)
}

pub fn weave_pair_with_budget(
    g1: &Structure,
    g2: &Structure,
    params: &ParamsBundle,
    node_budget: usize,
) -> Result<WeaveResult> {
    if g1.signature() != g2.signature() {
        return Err(Error::input("structures are over different signatures"));
    }
    let (g1, g2) = (g1.without_succ(), g2.without_succ());
    for (i, g) in [(1, &g1), (2, &g2)] {
        let deg = structure_degree(g, false) as u64;
        if deg > params.d {
            return Err(Error::input(format!(
                "structure {i} has degree {deg}, above the bound {}",
                params.d
            )));
        }
    }
    let r = usize::try_from(params.r).map_err(|_| Error::input("radius out of range"))?;
    let f1 = Frame::new(&g1, r);
    let f2 = Frame::new(&g2, r);
    let c1 = TypeCensus::from_types(&f1.types, r, false);
    let c2 = TypeCensus::from_types(&f2.types, r, false);
    let t = usize::try_from(params.t).unwrap_or(usize::MAX);
    if let Some((ty, a, b)) = threshold_violations(&c1, &c2, t).into_iter().next() {
        return Err(Error::similarity(format!(
            "censuses are not threshold-equivalent at (r, t) = ({r}, {t}): type {} occurs {a} vs {b} times",
            state::short_id(&ty)
        )));
    }
    let classification = classify_types(&c1, &c2, &params.g)?;

    if r == 0 {
        let succ1 = index_cycle(g1.size());
        let succ2 = index_cycle(g2.size());
        return Ok(WeaveResult {
            state1: filled_state(1, &succ1, 0),
            state2: filled_state(2, &succ2, 0),
            succ1,
            succ2,
            classification,
            params: *params,
            isomorphism_branch: false,
            branch: Branch::TrivialRadius,
        });
    }

    if classification.frequent.is_empty() {
        let pi = isomorphism(&g1, &g2)?;
        let n = g1.size();
        let succ1 = index_cycle(n);
        let mut succ2 = vec![0; n];
        for i in 0..n {
            succ2[pi[i] as usize] = pi[(i + 1) % n];
        }
        return Ok(WeaveResult {
            state1: filled_state(1, &succ1, r),
            state2: filled_state(2, &succ2, r),
            succ1,
            succ2,
            classification,
            params: *params,
            isomorphism_branch: true,
            branch: Branch::Isomorphism,
        });
    }

    let st1 = weave_rare(&f1, &classification)?;
    let mut st1 = weave_junctions(&f1, st1, &classification)?;
    let mut st2 = transfer_partial(&f1, &mut st1, &f2, node_budget)?;
    let succ1 = complete(&f1, &mut st1, &classification.frequent, params.d)?;
    let succ2 = complete(&f2, &mut st2, &classification.frequent, params.d)?;
    Ok(WeaveResult {
        succ1,
        succ2,
        classification,
        state1: st1,
        state2: st2,
        params: *params,
        isomorphism_branch: false,
        branch: Branch::General,
    })
}

fn index_cycle(n: usize) -> Vec<Elem> {
    (0..n).map(|i| ((i + 1) % n) as Elem).collect()
}

fn filled_state(id: u8, succ: &[Elem], r: usize) -> BuilderState {
    let mut st = BuilderState::new(id, succ.len(), r);
    for (x, &y) in succ.iter().enumerate() {
        st.succ[x] = Some(y);
        st.pred[y as usize] = Some(x as Elem);
    }
    st
}

/// An isomorphism `pi` from `a` onto `b` (`pi[x]` is the image of `x`).
pub fn isomorphism(a: &Structure, b: &Structure) -> Result<Vec<Elem>> {
    let fa = canonical_form(a, None, false);
    let fb = canonical_form(b, None, false);
    if fa.code != fb.code {
        return Err(Error::similarity(
            "every type is rare but the structures are not isomorphic",
        ));
    }
    let mut inv_b = vec![0; b.size()];
    for (y, &l) in fb.labeling.iter().enumerate() {
        inv_b[l as usize] = y as Elem;
    }
    Ok(fa.labeling.iter().map(|&l| inv_b[l as usize]).collect())
}
