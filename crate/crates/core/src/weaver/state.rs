use std::collections::{BTreeMap, BTreeSet, HashSet, VecDeque};

use serde::Serialize;

use crate::census::{element_types, NeighborhoodType};
use crate::error::{Error, Result};
use crate::structure::{Elem, GaifmanGraph, Structure};

/// A structure together with the data every weaving step consults: its
/// Σ-Gaifman graph and the Σ-`r`-type of each element.
pub struct Frame<'a> {
    pub structure: &'a Structure,
    pub sigma: GaifmanGraph,
    pub types: Vec<NeighborhoodType>,
    pub r: usize,
}

impl<'a> Frame<'a> {
    pub fn new(structure: &'a Structure, r: usize) -> Self {
        Frame {
            structure,
            sigma: GaifmanGraph::new(structure, false),
            types: element_types(structure, r, false),
            r,
        }
    }

    pub fn size(&self) -> usize {
        self.structure.size()
    }
}

/// Counters describing how a completion went.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Diagnostics {
    /// Greedy edges added per frequent type.
    pub greedy_edges: Vec<usize>,
    /// Splices performed per frequent type.
    pub splices: Vec<usize>,
    /// How often a greedy candidate was rejected only because its chain
    /// already ends at the current tail.
    pub chain_guard_fired: usize,
    /// Search nodes visited while embedding the woven region (structure 1).
    pub transfer_nodes: usize,
}

/// Partial successor plus the bookkeeping sets of the construction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BuilderState {
    pub structure_id: u8,
    pub succ: Vec<Option<Elem>>,
    pub pred: Vec<Option<Elem>>,
    /// `R_0 ..= R_r`: rare elements and their protection levels.
    pub r_sets: Vec<BTreeSet<Elem>>,
    /// `P_0 ..= P_r`: junction anchors and their protection levels.
    pub p_sets: Vec<BTreeSet<Elem>>,
    /// `(x_i^min, x_i^max)` per frequent type.
    pub anchors: Vec<(Elem, Elem)>,
    /// `A = R_{≤r} ∪ P_{≤r}` (mirrored through the transfer on structure 2).
    pub core: BTreeSet<Elem>,
    /// `B`, the radius-`r` ball around `A` (structure 1 only).
    pub ball: BTreeSet<Elem>,
    /// The transfer map on `B` (structure 1 only).
    pub transfer: BTreeMap<Elem, Elem>,
    pub diagnostics: Diagnostics,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Direction {
    Forward,
    Backward,
}

impl BuilderState {
    pub fn new(structure_id: u8, n: usize, r: usize) -> Self {
        BuilderState {
            structure_id,
            succ: vec![None; n],
            pred: vec![None; n],
            r_sets: vec![BTreeSet::new(); r + 1],
            p_sets: vec![BTreeSet::new(); r + 1],
            anchors: Vec::new(),
            core: BTreeSet::new(),
            ball: BTreeSet::new(),
            transfer: BTreeMap::new(),
            diagnostics: Diagnostics::default(),
        }
    }

    pub fn add_edge(&mut self, x: Elem, y: Elem) -> Result<()> {
        let (xi, yi) = (x as usize, y as usize);
        if x == y && self.succ.len() != 1 {
            return Err(Error::contract(format!("successor self-loop at {x}")));
        }
        if let Some(z) = self.succ[xi] {
            return Err(Error::contract(format!("{x} already has successor {z}")));
        }
        if let Some(z) = self.pred[yi] {
            return Err(Error::contract(format!("{y} already has predecessor {z}")));
        }
        self.succ[xi] = Some(y);
        self.pred[yi] = Some(x);
        Ok(())
    }

    pub fn remove_edge(&mut self, x: Elem, y: Elem) -> Result<()> {
        if self.succ[x as usize] != Some(y) {
            return Err(Error::contract(format!("({x}, {y}) is not a successor edge")));
        }
        self.succ[x as usize] = None;
        self.pred[y as usize] = None;
        Ok(())
    }

    pub fn pairs(&self) -> Vec<(Elem, Elem)> {
        self.succ
            .iter()
            .enumerate()
            .filter_map(|(x, s)| s.map(|y| (x as Elem, y)))
            .collect()
    }

    /// `R_{≤k}`.
    pub fn r_upto(&self, k: usize) -> BTreeSet<Elem> {
        self.r_sets[..=k].iter().flatten().copied().collect()
    }

    /// `P_{≤k}`.
    pub fn p_upto(&self, k: usize) -> BTreeSet<Elem> {
        self.p_sets[..=k].iter().flatten().copied().collect()
    }

    /// Enriched neighbors of `x` over the current partial successor.
    fn neighbors<'f>(&self, frame: &'f Frame, x: Elem) -> impl Iterator<Item = Elem> + 'f {
        let extra = [self.succ[x as usize], self.pred[x as usize]];
        frame.sigma.neighbors(x).iter().copied().chain(extra.into_iter().flatten())
    }

    /// Elements within enriched distance `limit` of `sources`.
    pub fn near(&self, frame: &Frame, sources: impl IntoIterator<Item = Elem>, limit: usize) -> HashSet<Elem> {
        let mut seen: HashSet<Elem> = HashSet::new();
        let mut queue = VecDeque::new();
        for s in sources {
            if seen.insert(s) {
                queue.push_back((s, 0));
            }
        }
        while let Some((x, d)) = queue.pop_front() {
            if d == limit {
                continue;
            }
            for y in self.neighbors(frame, x) {
                if seen.insert(y) {
                    queue.push_back((y, d + 1));
                }
            }
        }
        seen
    }

    /// The end of the successor chain through `x` in the given direction.
    pub fn s_star(&self, x: Elem, direction: Direction) -> Result<Elem> {
        let step = |y: Elem| match direction {
            Direction::Forward => self.succ[y as usize],
            Direction::Backward => self.pred[y as usize],
        };
        let mut cur = x;
        for _ in 0..=self.succ.len() {
            match step(cur) {
                None => return Ok(cur),
                Some(next) if next == x => break,
                Some(next) => cur = next,
            }
        }
        Err(Error::contract(format!("{x} lies on a successor cycle")))
    }
}

/// Least element of type `wanted` at enriched distance greater than `2r`
/// from every element of `exclusion`.
pub fn pick_far(
    frame: &Frame,
    state: &BuilderState,
    wanted: &NeighborhoodType,
    exclusion: &BTreeSet<Elem>,
    context: &str,
) -> Result<Elem> {
    let near = state.near(frame, exclusion.iter().copied(), 2 * frame.r);
    (0..frame.size() as Elem)
        .find(|x| frame.types[*x as usize] == *wanted && !near.contains(x))
        .ok_or_else(|| Error::Infeasible {
            wanted: short_id(wanted),
            limit: 2 * frame.r,
            exclusion: exclusion.len(),
            context: context.to_string(),
        })
}

/// A truncated hex id for messages.
pub fn short_id(t: &NeighborhoodType) -> String {
    let h = t.hex();
    if h.len() > 24 {
        format!("{}…", &h[..24])
    } else {
        h
    }
}
