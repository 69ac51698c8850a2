//! Carrying the partial successor of the first structure over to the second
//! through a type-preserving embedding of the woven region.

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet, VecDeque};

use crate::census::NeighborhoodType;
use crate::error::{Error, Result};
use crate::structure::Elem;

use super::state::{short_id, BuilderState, Frame};

/// Default cap on backtracking nodes for the embedding search.
pub const DEFAULT_NODE_BUDGET: usize = 2_000_000;

/// Embeds `B` (the radius-`r` ball around `A_1`) into the second structure
/// and mirrors the successor edges and bookkeeping through the embedding.
///
/// `B` is split into Σ-connected components, each mapped by backtracking in
/// BFS order from its least core element. Core elements must keep their
/// Σ-`r`-type, and each component's image stays at Σ-distance greater than
/// `2r` from the images of earlier components. Components are mapped greedily
/// in order of their least element.
pub fn transfer_partial(
    f1: &Frame,
    st1: &mut BuilderState,
    f2: &Frame,
    node_budget: usize,
) -> Result<BuilderState> {
    let r = f1.r;
    let ball: BTreeSet<Elem> = st1.near(f1, st1.core.iter().copied(), r).into_iter().collect();
    st1.ball = ball.clone();

    let mut by_type: HashMap<&NeighborhoodType, Vec<Elem>> = HashMap::new();
    for (x, t) in f2.types.iter().enumerate() {
        by_type.entry(t).or_default().push(x as Elem);
    }

    let mut search = Embedding {
        f1,
        f2,
        core: &st1.core,
        by_type,
        map: HashMap::new(),
        inverse: HashMap::new(),
        forbidden: HashSet::new(),
        nodes: 0,
        budget: node_budget,
    };

    let mut assigned: BTreeSet<Elem> = BTreeSet::new();
    for &start in &ball {
        if assigned.contains(&start) {
            continue;
        }
        let component = component_of(f1, &ball, start);
        assigned.extend(component.iter().copied());
        let root = *component
            .iter()
            .filter(|x| st1.core.contains(x))
            .min()
            .ok_or_else(|| Error::contract("component of the woven ball without a core element"))?;
        let (order, parent) = bfs_order(f1, &component, root);
        if !search.extend(&order, &parent, 0)? {
            return Err(Error::similarity(format!(
                "no type-preserving embedding for the woven component around element {root} \
                 ({} elements, type {})",
                order.len(),
                short_id(&f1.types[root as usize])
            )));
        }
        let images: Vec<Elem> = order.iter().map(|x| search.map[x]).collect();
        let near = f2.sigma.bfs(images, 2 * r);
        search.forbidden.extend(near.into_iter().map(|(e, _)| e));
    }

    let h: BTreeMap<Elem, Elem> = search.map.iter().map(|(&a, &b)| (a, b)).collect();
    st1.diagnostics.transfer_nodes = search.nodes;

    let image: HashSet<Elem> = h.values().copied().collect();
    for &a in &st1.core {
        let ha = h[&a];
        if let Some((y, _)) = f2.sigma.bfs([ha], r).into_iter().find(|(y, _)| !image.contains(y)) {
            return Err(Error::contract(format!(
                "embedding does not cover the radius-{r} ball of h({a}) = {ha}: {y} is missing"
            )));
        }
    }

    let mut st2 = BuilderState::new(2, f2.size(), r);
    for (x, y) in st1.pairs() {
        st2.add_edge(h[&x], h[&y])?;
    }
    let mirror = |s: &BTreeSet<Elem>| -> BTreeSet<Elem> { s.iter().map(|x| h[x]).collect() };
    st2.r_sets = st1.r_sets.iter().map(mirror).collect();
    st2.p_sets = st1.p_sets.iter().map(mirror).collect();
    st2.anchors = st1.anchors.iter().map(|(a, b)| (h[a], h[b])).collect();
    st2.core = mirror(&st1.core);
    st1.transfer = h;
    Ok(st2)
}

fn component_of(f: &Frame, within: &BTreeSet<Elem>, start: Elem) -> BTreeSet<Elem> {
    let mut comp = BTreeSet::from([start]);
    let mut queue = VecDeque::from([start]);
    while let Some(x) = queue.pop_front() {
        for &y in f.sigma.neighbors(x) {
            if within.contains(&y) && comp.insert(y) {
                queue.push_back(y);
            }
        }
    }
    comp
}

fn bfs_order(f: &Frame, comp: &BTreeSet<Elem>, root: Elem) -> (Vec<Elem>, HashMap<Elem, Elem>) {
    let mut order = vec![root];
    let mut parent = HashMap::new();
    let mut seen = HashSet::from([root]);
    let mut i = 0;
    while i < order.len() {
        let x = order[i];
        for &y in f.sigma.neighbors(x) {
            if comp.contains(&y) && seen.insert(y) {
                parent.insert(y, x);
                order.push(y);
            }
        }
        i += 1;
    }
    (order, parent)
}

struct Embedding<'a> {
    f1: &'a Frame<'a>,
    f2: &'a Frame<'a>,
    core: &'a BTreeSet<Elem>,
    by_type: HashMap<&'a NeighborhoodType, Vec<Elem>>,
    map: HashMap<Elem, Elem>,
    inverse: HashMap<Elem, Elem>,
    forbidden: HashSet<Elem>,
    nodes: usize,
    budget: usize,
}

impl Embedding<'_> {
    fn extend(&mut self, order: &[Elem], parent: &HashMap<Elem, Elem>, idx: usize) -> Result<bool> {
        if idx == order.len() {
            return Ok(true);
        }
        let v = order[idx];
        let candidates: Vec<Elem> = match parent.get(&v) {
            None => self
                .by_type
                .get(&self.f1.types[v as usize])
                .cloned()
                .unwrap_or_default(),
            Some(p) => self.f2.sigma.neighbors(self.map[p]).to_vec(),
        };
        for w in candidates {
            if self.inverse.contains_key(&w) || self.forbidden.contains(&w) {
                continue;
            }
            if self.core.contains(&v) && self.f2.types[w as usize] != self.f1.types[v as usize] {
                continue;
            }
            self.nodes += 1;
            if self.nodes > self.budget {
                return Err(Error::resource(format!(
                    "embedding search exceeded {} nodes",
                    self.budget
                )));
            }
            if !self.consistent(v, w) {
                continue;
            }
            self.map.insert(v, w);
            self.inverse.insert(w, v);
            if self.extend(order, parent, idx + 1)? {
                return Ok(true);
            }
            self.map.remove(&v);
            self.inverse.remove(&w);
        }
        Ok(false)
    }

    /// Tuples among mapped elements plus `v -> w` correspond in both directions.
    fn consistent(&self, v: Elem, w: Elem) -> bool {
        let (s1, s2) = (self.f1.structure, self.f2.structure);
        let fwd = |x: Elem| if x == v { Some(w) } else { self.map.get(&x).copied() };
        let back = |y: Elem| if y == w { Some(v) } else { self.inverse.get(&y).copied() };
        for &(rel, idx) in s1.incidence(v) {
            let t = s1.relation(rel as usize).tuple(idx as usize);
            if let Some(image) = t.iter().map(|&x| fwd(x)).collect::<Option<Vec<Elem>>>() {
                if !s2.relation(rel as usize).contains(&image) {
                    return false;
                }
            }
        }
        for &(rel, idx) in s2.incidence(w) {
            let t = s2.relation(rel as usize).tuple(idx as usize);
            if let Some(pre) = t.iter().map(|&y| back(y)).collect::<Option<Vec<Elem>>>() {
                if !s1.relation(rel as usize).contains(&pre) {
                    return false;
                }
            }
        }
        true
    }
}
