//! Canonical labeling by individualization and refinement.
//!
//! Colors are refined by the multiset of incident tuples (each tuple read as
//! an ordered record of its entries' colors), cells are individualized one
//! element at a time, and the lexicographically least encoding over all
//! discrete leaves is the canonical code. Automorphisms discovered between
//! leaves prune sibling subtrees.

use crate::structure::{Elem, Relation, Signature, Structure};
use crate::error::{Error, Result};

use std::sync::Arc;

const SELF: u32 = u32::MAX;
const NO_CENTER: u32 = u32::MAX;

/// The canonical code of a structure together with a labeling realizing it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CanonicalForm {
    /// `n, center, #relations, (arity, #tuples, tuples...)*` under `labeling`.
    pub code: Vec<u32>,
    /// `labeling[old] = new`.
    pub labeling: Vec<Elem>,
}

struct Input<'a> {
    n: usize,
    rels: Vec<&'a Relation>,
    /// Per element, incident (relation, tuple) pairs.
    incidence: Vec<Vec<(u32, u32)>>,
    center: Option<Elem>,
    with_empty_succ: bool,
}

/// Computes the canonical form of `s` pointed at `center`. With `include_succ`
/// the successor relation (empty if absent) is part of the encoding.
pub fn canonical_form(s: &Structure, center: Option<Elem>, include_succ: bool) -> CanonicalForm {
    let mut rels: Vec<&Relation> = s.relations().iter().collect();
    let with_empty_succ = include_succ && s.succ().is_none();
    if include_succ {
        if let Some(succ) = s.succ() {
            rels.push(succ);
        }
    }
    let nrel = s.relations().len();
    let incidence = (0..s.size() as Elem)
        .map(|x| {
            s.incidence(x)
                .iter()
                .copied()
                .filter(|&(rel, _)| include_succ || (rel as usize) < nrel)
                .collect()
        })
        .collect();
    let input = Input {
        n: s.size(),
        rels,
        incidence,
        center,
        with_empty_succ,
    };
    Search::new(&input).run()
}

impl Input<'_> {
    fn encode(&self, labeling: &[Elem]) -> Vec<u32> {
        let nrel = self.rels.len() + usize::from(self.with_empty_succ);
        let mut code = vec![
            self.n as u32,
            self.center.map_or(NO_CENTER, |c| labeling[c as usize]),
            nrel as u32,
        ];
        let mut mapped: Vec<u32> = Vec::new();
        for rel in &self.rels {
            let arity = rel.arity();
            mapped.clear();
            for t in rel.tuples() {
                mapped.extend(t.iter().map(|&e| labeling[e as usize]));
            }
            let mut chunks: Vec<&[u32]> = mapped.chunks_exact(arity).collect();
            chunks.sort_unstable();
            code.push(arity as u32);
            code.push(chunks.len() as u32);
            for c in chunks {
                code.extend_from_slice(c);
            }
        }
        if self.with_empty_succ {
            code.extend_from_slice(&[2, 0]);
        }
        code
    }
}

struct Search<'a> {
    input: &'a Input<'a>,
    first: Option<(Vec<u32>, Vec<Elem>, Vec<Elem>)>,
    best: Option<(Vec<u32>, Vec<Elem>, Vec<Elem>)>,
    /// Automorphisms as permutations `x -> gamma[x]`.
    generators: Vec<Vec<Elem>>,
}

impl<'a> Search<'a> {
    fn new(input: &'a Input<'a>) -> Self {
        Search {
            input,
            first: None,
            best: None,
            generators: Vec::new(),
        }
    }

    fn run(mut self) -> CanonicalForm {
        let n = self.input.n;
        let mut colors = vec![0u32; n];
        if let Some(c) = self.input.center {
            for (x, col) in colors.iter_mut().enumerate() {
                *col = u32::from(x as Elem != c);
            }
            normalize(&mut colors);
        }
        self.refine(&mut colors);
        let mut path = Vec::new();
        self.descend(colors, &mut path);
        let (code, labeling, _) = self.best.expect("search visits at least one leaf");
        CanonicalForm { code, labeling }
    }

    /// Equitable refinement; colors stay dense and order-preserving.
    fn refine(&self, colors: &mut [u32]) {
        let n = colors.len();
        if n == 0 {
            return;
        }
        let mut classes = count_classes(colors);
        loop {
            if classes == n {
                return;
            }
            let mut keys: Vec<(u32, Vec<Vec<u32>>, Elem)> = (0..n as Elem)
                .map(|x| (colors[x as usize], self.signature(colors, x), x))
                .collect();
            keys.sort_unstable();
            let mut next = vec![0u32; n];
            let mut rank = 0u32;
            for i in 0..n {
                if i > 0 && (keys[i].0 != keys[i - 1].0 || keys[i].1 != keys[i - 1].1) {
                    rank += 1;
                }
                next[keys[i].2 as usize] = rank;
            }
            let new_classes = rank as usize + 1;
            colors.copy_from_slice(&next);
            if new_classes == classes {
                return;
            }
            classes = new_classes;
        }
    }

    fn signature(&self, colors: &[u32], x: Elem) -> Vec<Vec<u32>> {
        let mut sig: Vec<Vec<u32>> = self.input.incidence[x as usize]
            .iter()
            .map(|&(rel, idx)| {
                let t = self.input.relation(rel).tuple(idx as usize);
                let mut rec = Vec::with_capacity(t.len() + 1);
                rec.push(rel);
                rec.extend(t.iter().map(|&e| if e == x { SELF } else { colors[e as usize] }));
                rec
            })
            .collect();
        sig.sort_unstable();
        sig
    }

    /// Returns `Some(level)` when the caller should unwind to `level`.
    fn descend(&mut self, colors: Vec<u32>, path: &mut Vec<Elem>) -> Option<usize> {
        let n = colors.len();
        let Some(cell) = target_cell(&colors) else {
            return self.leaf(&colors, path);
        };
        let level = path.len();
        let members: Vec<Elem> = (0..n as Elem).filter(|&x| colors[x as usize] == cell).collect();
        let mut explored: Vec<Elem> = Vec::new();
        for &v in &members {
            if !explored.is_empty() && self.in_explored_orbit(v, &explored, path) {
                continue;
            }
            explored.push(v);
            let mut child = individualize(&colors, v);
            self.refine(&mut child);
            path.push(v);
            let abort = self.descend(child, path);
            path.pop();
            if let Some(target) = abort {
                if target < level {
                    return Some(target);
                }
            }
        }
        None
    }

    fn in_explored_orbit(&self, v: Elem, explored: &[Elem], path: &[Elem]) -> bool {
        let n = self.input.n;
        let fixing: Vec<&Vec<Elem>> = self
            .generators
            .iter()
            .filter(|g| path.iter().all(|&p| g[p as usize] == p))
            .collect();
        if fixing.is_empty() {
            return false;
        }
        let mut parent: Vec<Elem> = (0..n as Elem).collect();
        fn find(parent: &mut [Elem], mut x: Elem) -> Elem {
            while parent[x as usize] != x {
                parent[x as usize] = parent[parent[x as usize] as usize];
                x = parent[x as usize];
            }
            x
        }
        for g in fixing {
            for x in 0..n as Elem {
                let (a, b) = (find(&mut parent, x), find(&mut parent, g[x as usize]));
                if a != b {
                    parent[a as usize] = b;
                }
            }
        }
        let root = find(&mut parent, v);
        explored.iter().any(|&e| find(&mut parent, e) == root)
    }

    fn leaf(&mut self, colors: &[u32], path: &[Elem]) -> Option<usize> {
        let labeling: Vec<Elem> = colors.to_vec();
        let code = self.input.encode(&labeling);
        let Some((first_code, first_lab, first_path)) = &self.first else {
            self.first = Some((code.clone(), labeling.clone(), path.to_vec()));
            self.best = Some((code, labeling, path.to_vec()));
            return None;
        };
        if code == *first_code {
            let gamma = automorphism(first_lab, &labeling);
            let level = divergence(first_path, path);
            self.generators.push(gamma);
            return Some(level);
        }
        let (best_code, best_lab, best_path) = self.best.as_ref().expect("best set with first");
        match code.cmp(best_code) {
            std::cmp::Ordering::Less => {
                self.best = Some((code, labeling, path.to_vec()));
                None
            }
            std::cmp::Ordering::Equal => {
                let gamma = automorphism(best_lab, &labeling);
                let level = divergence(best_path, path);
                self.generators.push(gamma);
                Some(level)
            }
            std::cmp::Ordering::Greater => None,
        }
    }
}

impl Input<'_> {
    fn relation(&self, rel: u32) -> &Relation {
        self.rels[rel as usize]
    }
}

/// Given labelings `a` and `b` with equal codes, `gamma = a^-1 . b` maps the
/// element labeled `i` under `b` to the element labeled `i` under `a`.
fn automorphism(a: &[Elem], b: &[Elem]) -> Vec<Elem> {
    let mut inv_a = vec![0; a.len()];
    for (x, &l) in a.iter().enumerate() {
        inv_a[l as usize] = x as Elem;
    }
    b.iter().map(|&l| inv_a[l as usize]).collect()
}

fn divergence(p: &[Elem], q: &[Elem]) -> usize {
    p.iter().zip(q).take_while(|(a, b)| a == b).count()
}

fn count_classes(colors: &[u32]) -> usize {
    colors.iter().copied().max().map_or(0, |m| m as usize + 1)
}

fn normalize(colors: &mut [u32]) {
    let mut vals: Vec<u32> = colors.to_vec();
    vals.sort_unstable();
    vals.dedup();
    for c in colors.iter_mut() {
        *c = vals.binary_search(c).expect("value present") as u32;
    }
}

/// First color class with more than one member.
fn target_cell(colors: &[u32]) -> Option<u32> {
    let mut sizes = vec![0usize; count_classes(colors)];
    for &c in colors {
        sizes[c as usize] += 1;
    }
    sizes.iter().position(|&s| s > 1).map(|c| c as u32)
}

fn individualize(colors: &[u32], v: Elem) -> Vec<u32> {
    let cell = colors[v as usize];
    colors
        .iter()
        .enumerate()
        .map(|(x, &c)| {
            if c < cell || x as Elem == v {
                c
            } else {
                c + 1
            }
        })
        .collect()
}

/// Variable-length little-endian encoding of a code, used as the opaque token.
pub fn code_to_bytes(code: &[u32]) -> Vec<u8> {
    let mut out = Vec::with_capacity(code.len());
    for &v in code {
        let mut v = v;
        loop {
            let byte = (v & 0x7f) as u8;
            v >>= 7;
            if v == 0 {
                out.push(byte);
                break;
            }
            out.push(byte | 0x80);
        }
    }
    out
}

pub fn bytes_to_code(bytes: &[u8]) -> Result<Vec<u32>> {
    let mut code = Vec::new();
    let mut acc: u64 = 0;
    let mut shift = 0;
    for &b in bytes {
        acc |= u64::from(b & 0x7f) << shift;
        if b & 0x80 == 0 {
            let v = u32::try_from(acc).map_err(|_| Error::input("token value out of range"))?;
            code.push(v);
            acc = 0;
            shift = 0;
        } else {
            shift += 7;
            if shift > 28 {
                return Err(Error::input("malformed token"));
            }
        }
    }
    if shift != 0 {
        return Err(Error::input("truncated token"));
    }
    Ok(code)
}

/// Rebuilds the structure a canonical code describes. When the code carries
/// one relation more than `signature`, the last one is the successor relation.
pub fn decode(code: &[u32], signature: &Arc<Signature>) -> Result<(Structure, Option<Elem>)> {
    let bad = || Error::input("malformed canonical code");
    let mut it = code.iter().copied();
    let n = it.next().ok_or_else(bad)? as usize;
    let center = it.next().ok_or_else(bad)?;
    let nrel = it.next().ok_or_else(bad)? as usize;
    let has_succ = match nrel.checked_sub(signature.len()) {
        Some(0) => false,
        Some(1) => true,
        _ => return Err(Error::input("canonical code does not match the signature")),
    };
    let mut tables = Vec::with_capacity(nrel);
    for rel in 0..nrel {
        let arity = it.next().ok_or_else(bad)? as usize;
        let expected = if rel < signature.len() { signature.arity(rel) } else { 2 };
        if arity != expected {
            return Err(Error::input("canonical code arity does not match the signature"));
        }
        let count = it.next().ok_or_else(bad)? as usize;
        let mut tuples = Vec::with_capacity(count);
        for _ in 0..count {
            let t: Vec<Elem> = (0..arity).map(|_| it.next().ok_or_else(bad)).collect::<Result<_>>()?;
            tuples.push(t);
        }
        tables.push(tuples);
    }
    if it.next().is_some() {
        return Err(bad());
    }
    let succ = if has_succ { tables.pop() } else { None };
    let mut s = Structure::new(signature.clone(), n, tables)?;
    if let Some(pairs) = succ {
        let pairs: Vec<(Elem, Elem)> = pairs.iter().map(|p| (p[0], p[1])).collect();
        s = s.with_succ(&pairs)?;
    }
    let center = (center != NO_CENTER).then_some(center);
    if let Some(c) = center {
        if c as usize >= n {
            return Err(bad());
        }
    }
    Ok((s, center))
}
