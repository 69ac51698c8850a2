//! Finite relational structures, their Gaifman graphs, balls and pointed
//! neighborhoods.
//!
//! The universe of a [`Structure`] is always `0..size`. User relations are kept
//! apart from the optional successor relation `S`, so every metric question can
//! be asked with or without the successor edges.

use std::collections::{BTreeSet, HashMap, VecDeque};
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

/// An element of a structure's universe.
pub type Elem = u32;

/// Name of the reserved successor relation.
pub const SUCC: &str = "S";

/// Name used for the linear successor in formulas.
pub const LIN_SUCC: &str = "Sbar";

/// An ordered list of relation symbols with their arities.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Signature {
    relations: Vec<(String, usize)>,
}

impl Signature {
    pub fn new<I, N>(relations: I) -> Result<Self>
    where
        I: IntoIterator<Item = (N, usize)>,
        N: Into<String>,
    {
        let relations: Vec<(String, usize)> =
            relations.into_iter().map(|(n, a)| (n.into(), a)).collect();
        let mut seen = BTreeSet::new();
        for (name, arity) in &relations {
            if name == SUCC {
                return Err(Error::input(format!(
                    "relation name {SUCC:?} is reserved for the successor relation"
                )));
            }
            if name.is_empty() {
                return Err(Error::input("empty relation name"));
            }
            if *arity == 0 {
                return Err(Error::input(format!("relation {name:?} has arity 0")));
            }
            if !seen.insert(name.as_str()) {
                return Err(Error::input(format!("duplicate relation name {name:?}")));
            }
        }
        Ok(Signature { relations })
    }

    /// The single-binary-relation signature `{E/2}` used for graphs.
    pub fn graph() -> Arc<Self> {
        Arc::new(Signature {
            relations: vec![("E".to_string(), 2)],
        })
    }

    pub fn relations(&self) -> &[(String, usize)] {
        &self.relations
    }

    pub fn len(&self) -> usize {
        self.relations.len()
    }

    pub fn is_empty(&self) -> bool {
        self.relations.is_empty()
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.relations.iter().position(|(n, _)| n == name)
    }

    pub fn arity(&self, rel: usize) -> usize {
        self.relations[rel].1
    }

    pub fn name(&self, rel: usize) -> &str {
        &self.relations[rel].0
    }
}

/// A set of tuples of fixed arity, stored flat and sorted lexicographically.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Relation {
    arity: usize,
    data: Vec<Elem>,
}

impl Relation {
    fn from_tuples(arity: usize, mut tuples: Vec<Vec<Elem>>) -> Self {
        tuples.sort_unstable();
        tuples.dedup();
        let data = tuples.into_iter().flatten().collect();
        Relation { arity, data }
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn len(&self) -> usize {
        self.data.len() / self.arity
    }

    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    pub fn tuple(&self, idx: usize) -> &[Elem] {
        &self.data[idx * self.arity..(idx + 1) * self.arity]
    }

    pub fn tuples(&self) -> impl Iterator<Item = &[Elem]> + '_ {
        self.data.chunks_exact(self.arity)
    }

    pub fn contains(&self, tuple: &[Elem]) -> bool {
        debug_assert_eq!(tuple.len(), self.arity);
        let (mut lo, mut hi) = (0, self.len());
        while lo < hi {
            let mid = (lo + hi) / 2;
            match self.tuple(mid).cmp(tuple) {
                std::cmp::Ordering::Less => lo = mid + 1,
                std::cmp::Ordering::Greater => hi = mid,
                std::cmp::Ordering::Equal => return true,
            }
        }
        false
    }
}

/// One occurrence of an element inside a tuple: relation index and tuple index.
/// The successor relation, when present, uses relation index `signature.len()`.
pub type Incidence = (u32, u32);

/// A finite structure over a purely relational signature, optionally enriched
/// with a successor relation.
#[derive(Clone)]
pub struct Structure {
    signature: Arc<Signature>,
    size: usize,
    tables: Vec<Relation>,
    succ: Option<Relation>,
    incidence: Vec<Vec<Incidence>>,
}

impl PartialEq for Structure {
    fn eq(&self, other: &Self) -> bool {
        self.signature == other.signature
            && self.size == other.size
            && self.tables == other.tables
            && self.succ == other.succ
    }
}

impl Eq for Structure {}

impl fmt::Debug for Structure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut d = f.debug_struct("Structure");
        d.field("size", &self.size);
        for (rel, (name, _)) in self.signature.relations().iter().enumerate() {
            let tuples: Vec<&[Elem]> = self.tables[rel].tuples().collect();
            d.field(name, &tuples);
        }
        if let Some(succ) = &self.succ {
            let pairs: Vec<&[Elem]> = succ.tuples().collect();
            d.field(SUCC, &pairs);
        }
        d.finish()
    }
}

impl Structure {
    /// Builds a structure from per-relation tuple lists, in signature order.
    pub fn new(signature: Arc<Signature>, size: usize, tables: Vec<Vec<Vec<Elem>>>) -> Result<Self> {
        if tables.len() != signature.len() {
            return Err(Error::input(format!(
                "expected {} relation tables, got {}",
                signature.len(),
                tables.len()
            )));
        }
        let mut rels = Vec::with_capacity(tables.len());
        for (rel, tuples) in tables.into_iter().enumerate() {
            let arity = signature.arity(rel);
            for t in &tuples {
                if t.len() != arity {
                    return Err(Error::input(format!(
                        "relation {:?}: tuple {:?} has length {}, expected arity {}",
                        signature.name(rel),
                        t,
                        t.len(),
                        arity
                    )));
                }
                if let Some(&e) = t.iter().find(|&&e| e as usize >= size) {
                    return Err(Error::input(format!(
                        "relation {:?}: entry {} out of range for universe of size {}",
                        signature.name(rel),
                        e,
                        size
                    )));
                }
            }
            rels.push(Relation::from_tuples(arity, tuples));
        }
        Ok(Self::assemble(signature, size, rels, None))
    }

    /// Builds a structure over the graph signature `{E/2}`.
    pub fn graph(size: usize, edges: &[(Elem, Elem)]) -> Result<Self> {
        let tuples = edges.iter().map(|&(a, b)| vec![a, b]).collect();
        Self::new(Signature::graph(), size, vec![tuples])
    }

    fn assemble(signature: Arc<Signature>, size: usize, tables: Vec<Relation>, succ: Option<Relation>) -> Self {
        let mut incidence = vec![Vec::new(); size];
        for (rel, table) in tables.iter().chain(succ.iter()).enumerate() {
            for (idx, t) in table.tuples().enumerate() {
                let mut prev: Option<Elem> = None;
                let mut sorted: Vec<Elem> = t.to_vec();
                sorted.sort_unstable();
                for e in sorted {
                    if prev != Some(e) {
                        incidence[e as usize].push((rel as u32, idx as u32));
                    }
                    prev = Some(e);
                }
            }
        }
        Structure {
            signature,
            size,
            tables,
            succ,
            incidence,
        }
    }

    /// Returns a copy with the successor relation replaced by `pairs`.
    pub fn with_succ(&self, pairs: &[(Elem, Elem)]) -> Result<Self> {
        if let Some(&(a, b)) = pairs
            .iter()
            .find(|&&(a, b)| a as usize >= self.size || b as usize >= self.size)
        {
            return Err(Error::input(format!(
                "successor pair ({a}, {b}) out of range for universe of size {}",
                self.size
            )));
        }
        let succ = Relation::from_tuples(2, pairs.iter().map(|&(a, b)| vec![a, b]).collect());
        Ok(Self::assemble(self.signature.clone(), self.size, self.tables.clone(), Some(succ)))
    }

    /// Returns a copy with the successor relation given as a function `i -> succ[i]`.
    pub fn with_successor_map(&self, succ: &[Elem]) -> Result<Self> {
        let pairs: Vec<(Elem, Elem)> = succ.iter().enumerate().map(|(i, &j)| (i as Elem, j)).collect();
        self.with_succ(&pairs)
    }

    pub fn without_succ(&self) -> Self {
        if self.succ.is_none() {
            return self.clone();
        }
        Self::assemble(self.signature.clone(), self.size, self.tables.clone(), None)
    }

    pub fn signature(&self) -> &Arc<Signature> {
        &self.signature
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn relation(&self, rel: usize) -> &Relation {
        &self.tables[rel]
    }

    pub fn relations(&self) -> &[Relation] {
        &self.tables
    }

    /// The successor relation as a set of pairs, if present.
    pub fn succ(&self) -> Option<&Relation> {
        self.succ.as_ref()
    }

    pub fn succ_pairs(&self) -> Vec<(Elem, Elem)> {
        self.succ
            .iter()
            .flat_map(|s| s.tuples().map(|t| (t[0], t[1])))
            .collect()
    }

    /// User relations followed by the successor relation when `include_succ`
    /// is set and one is present.
    pub fn all_relations(&self, include_succ: bool) -> impl Iterator<Item = &Relation> + '_ {
        let succ = if include_succ { self.succ.as_ref() } else { None };
        self.tables.iter().chain(succ)
    }

    /// Relation by incidence index (the successor uses `signature.len()`).
    pub fn relation_by_index(&self, rel: usize) -> &Relation {
        if rel < self.tables.len() {
            &self.tables[rel]
        } else {
            self.succ.as_ref().expect("successor incidence without successor")
        }
    }

    /// Every (relation, tuple) incidence of `x`, each tuple listed once.
    pub fn incidence(&self, x: Elem) -> &[Incidence] {
        &self.incidence[x as usize]
    }

    fn check_elem(&self, x: Elem) -> Result<()> {
        if (x as usize) < self.size {
            Ok(())
        } else {
            Err(Error::input(format!(
                "element {x} out of range for universe of size {}",
                self.size
            )))
        }
    }

    /// Applies the relabeling `old -> perm[old]`.
    pub fn relabel(&self, perm: &[Elem]) -> Result<Self> {
        if perm.len() != self.size {
            return Err(Error::input("relabeling has the wrong length"));
        }
        let mut seen = vec![false; self.size];
        for &p in perm {
            if p as usize >= self.size || std::mem::replace(&mut seen[p as usize], true) {
                return Err(Error::input("relabeling is not a permutation"));
            }
        }
        let map_table = |rel: &Relation| -> Vec<Vec<Elem>> {
            rel.tuples()
                .map(|t| t.iter().map(|&e| perm[e as usize]).collect())
                .collect()
        };
        let tables = self
            .tables
            .iter()
            .map(|r| Relation::from_tuples(r.arity, map_table(r)))
            .collect();
        let succ = self
            .succ
            .as_ref()
            .map(|r| Relation::from_tuples(2, map_table(r)));
        Ok(Self::assemble(self.signature.clone(), self.size, tables, succ))
    }

    /// Substructure induced on `elems`, renumbered so that `elems[i]` becomes `i`.
    /// The successor relation, when present, is restricted as well.
    pub fn induced(&self, elems: &[Elem]) -> Self {
        let pos: HashMap<Elem, Elem> = elems
            .iter()
            .enumerate()
            .map(|(i, &e)| (e, i as Elem))
            .collect();
        let nrel = self.tables.len();
        let mut tables: Vec<Vec<Vec<Elem>>> = vec![Vec::new(); nrel];
        let mut succ: Vec<Vec<Elem>> = Vec::new();
        let mut visited: BTreeSet<Incidence> = BTreeSet::new();
        for &e in elems {
            for &(rel, idx) in self.incidence(e) {
                if !visited.insert((rel, idx)) {
                    continue;
                }
                let t = self.relation_by_index(rel as usize).tuple(idx as usize);
                let mapped: Option<Vec<Elem>> = t.iter().map(|x| pos.get(x).copied()).collect();
                if let Some(mapped) = mapped {
                    if (rel as usize) < nrel {
                        tables[rel as usize].push(mapped);
                    } else {
                        succ.push(mapped);
                    }
                }
            }
        }
        let rels = tables
            .into_iter()
            .enumerate()
            .map(|(rel, ts)| Relation::from_tuples(self.signature.arity(rel), ts))
            .collect();
        let succ = self.succ.as_ref().map(|_| Relation::from_tuples(2, succ));
        Self::assemble(self.signature.clone(), elems.len(), rels, succ)
    }

    /// Disjoint union; elements of `other` are shifted by `self.size()`.
    /// Successor relations are united; a missing one counts as empty.
    pub fn disjoint_union(&self, other: &Structure) -> Result<Self> {
        if self.signature != other.signature {
            return Err(Error::input("disjoint union of structures over different signatures"));
        }
        let shift = self.size as Elem;
        let union = |a: &Relation, b: &Relation| -> Relation {
            let mut ts: Vec<Vec<Elem>> = a.tuples().map(|t| t.to_vec()).collect();
            ts.extend(b.tuples().map(|t| t.iter().map(|&e| e + shift).collect()));
            Relation::from_tuples(a.arity, ts)
        };
        let tables = self
            .tables
            .iter()
            .zip(&other.tables)
            .map(|(a, b)| union(a, b))
            .collect();
        let empty = Relation::from_tuples(2, Vec::new());
        let succ = match (&self.succ, &other.succ) {
            (None, None) => None,
            (a, b) => Some(union(a.as_ref().unwrap_or(&empty), b.as_ref().unwrap_or(&empty))),
        };
        Ok(Self::assemble(self.signature.clone(), self.size + other.size, tables, succ))
    }

    /// Returns a copy of `self` with extra successor pairs added (creating the
    /// successor relation if absent). Pairs are given in the numbering of `self`.
    pub fn add_succ_pairs(&self, pairs: &[(Elem, Elem)]) -> Result<Self> {
        let mut all = self.succ_pairs();
        all.extend_from_slice(pairs);
        self.with_succ(&all)
    }
}

/// A structure with a distinguished center element.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PointedStructure {
    pub structure: Structure,
    pub center: Elem,
}

impl PointedStructure {
    pub fn new(structure: Structure, center: Elem) -> Result<Self> {
        structure.check_elem(center)?;
        Ok(PointedStructure { structure, center })
    }
}

/// Length of a shortest path in a Gaifman graph.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Distance {
    Finite(usize),
    Infinite,
}

impl Distance {
    /// True when the distance is strictly greater than `bound`.
    pub fn exceeds(self, bound: usize) -> bool {
        match self {
            Distance::Finite(d) => d > bound,
            Distance::Infinite => true,
        }
    }
}

impl fmt::Display for Distance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Distance::Finite(d) => write!(f, "{d}"),
            Distance::Infinite => f.write_str("inf"),
        }
    }
}

/// Undirected adjacency lists of the Gaifman graph.
#[derive(Clone, Debug)]
pub struct GaifmanGraph {
    adj: Vec<Vec<Elem>>,
}

impl GaifmanGraph {
    pub fn new(s: &Structure, include_succ: bool) -> Self {
        let mut adj: Vec<Vec<Elem>> = vec![Vec::new(); s.size];
        for rel in s.all_relations(include_succ) {
            for t in rel.tuples() {
                for (i, &a) in t.iter().enumerate() {
                    for &b in &t[i + 1..] {
                        if a != b {
                            adj[a as usize].push(b);
                            adj[b as usize].push(a);
                        }
                    }
                }
            }
        }
        for list in &mut adj {
            list.sort_unstable();
            list.dedup();
        }
        GaifmanGraph { adj }
    }

    pub fn len(&self) -> usize {
        self.adj.len()
    }

    pub fn is_empty(&self) -> bool {
        self.adj.is_empty()
    }

    pub fn neighbors(&self, x: Elem) -> &[Elem] {
        &self.adj[x as usize]
    }

    pub fn degree(&self) -> usize {
        self.adj.iter().map(Vec::len).max().unwrap_or(0)
    }

    /// Multi-source BFS truncated at depth `limit` (inclusive). Returns the
    /// visited elements in BFS order together with their depths.
    pub fn bfs(&self, sources: impl IntoIterator<Item = Elem>, limit: usize) -> Vec<(Elem, usize)> {
        let mut depth: HashMap<Elem, usize> = HashMap::new();
        let mut order = Vec::new();
        let mut queue = VecDeque::new();
        for s in sources {
            if depth.insert(s, 0).is_none() {
                queue.push_back(s);
                order.push((s, 0));
            }
        }
        while let Some(x) = queue.pop_front() {
            let d = depth[&x];
            if d == limit {
                continue;
            }
            for &y in self.neighbors(x) {
                if let std::collections::hash_map::Entry::Vacant(v) = depth.entry(y) {
                    v.insert(d + 1);
                    order.push((y, d + 1));
                    queue.push_back(y);
                }
            }
        }
        order
    }

    pub fn distance(&self, x: Elem, y: Elem) -> Distance {
        if x == y {
            return Distance::Finite(0);
        }
        let mut depth = vec![usize::MAX; self.adj.len()];
        let mut queue = VecDeque::from([x]);
        depth[x as usize] = 0;
        while let Some(u) = queue.pop_front() {
            for &v in self.neighbors(u) {
                if depth[v as usize] == usize::MAX {
                    depth[v as usize] = depth[u as usize] + 1;
                    if v == y {
                        return Distance::Finite(depth[v as usize]);
                    }
                    queue.push_back(v);
                }
            }
        }
        Distance::Infinite
    }

    /// Elements at distance at most `r` from `x`, ordered by (distance, index).
    pub fn ball_ordered(&self, x: Elem, r: usize) -> Vec<Elem> {
        let mut visited = self.bfs([x], r);
        visited.sort_unstable_by_key(|&(e, d)| (d, e));
        visited.into_iter().map(|(e, _)| e).collect()
    }
}

pub fn gaifman_neighbors(s: &Structure, x: Elem, include_succ: bool) -> Result<BTreeSet<Elem>> {
    s.check_elem(x)?;
    let mut out = BTreeSet::new();
    for &(rel, idx) in s.incidence(x) {
        if !include_succ && rel as usize >= s.signature.len() {
            continue;
        }
        for &y in s.relation_by_index(rel as usize).tuple(idx as usize) {
            if y != x {
                out.insert(y);
            }
        }
    }
    Ok(out)
}

pub fn gaifman_distance(s: &Structure, x: Elem, y: Elem, include_succ: bool) -> Result<Distance> {
    s.check_elem(x)?;
    s.check_elem(y)?;
    Ok(GaifmanGraph::new(s, include_succ).distance(x, y))
}

pub fn ball(s: &Structure, x: Elem, r: usize, include_succ: bool) -> Result<BTreeSet<Elem>> {
    s.check_elem(x)?;
    Ok(GaifmanGraph::new(s, include_succ)
        .bfs([x], r)
        .into_iter()
        .map(|(e, _)| e)
        .collect())
}

/// The pointed substructure induced on the radius-`r` ball around `x`.
///
/// Elements are renumbered by (distance from `x`, original index), so the
/// center is always `0`. Without `include_succ` the result carries no
/// successor relation.
pub fn neighborhood(s: &Structure, x: Elem, r: usize, include_succ: bool) -> Result<PointedStructure> {
    s.check_elem(x)?;
    let g = GaifmanGraph::new(s, include_succ);
    Ok(neighborhood_in(s, &g, x, r, include_succ).0)
}

/// Like [`neighborhood`] but reuses a prebuilt Gaifman graph and also returns
/// the map from new indices to original elements.
pub fn neighborhood_in(
    s: &Structure,
    g: &GaifmanGraph,
    x: Elem,
    r: usize,
    include_succ: bool,
) -> (PointedStructure, Vec<Elem>) {
    let elems = g.ball_ordered(x, r);
    let mut sub = s.induced(&elems);
    if !include_succ {
        sub = sub.without_succ();
    }
    (PointedStructure { structure: sub, center: 0 }, elems)
}

pub fn structure_degree(s: &Structure, include_succ: bool) -> usize {
    GaifmanGraph::new(s, include_succ).degree()
}

/// Upper bound on the size of a radius-`r` ball in a graph of degree at most `d`:
/// `1 + d * sum_{i<r} (d-1)^i`, which is the closed form
/// `d((d-1)^r - 1)/(d-2) + 1` for `d != 2` and `2r + 1` for `d = 2`.
/// Saturates at `u64::MAX`.
pub fn n_bound(d: u64, r: u64) -> u64 {
    let mut total: u64 = 1;
    let mut layer: u64 = d;
    for _ in 0..r {
        if layer == 0 {
            break;
        }
        total = total.saturating_add(layer);
        layer = layer.saturating_mul(d.saturating_sub(1));
    }
    total
}
