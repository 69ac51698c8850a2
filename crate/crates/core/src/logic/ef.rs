//! Ehrenfeucht–Fraïssé games by memoized game-tree search.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::structure::{Elem, Structure};

#[derive(Clone, Copy, Debug)]
pub struct EfOptions {
    /// Restrict Duplicator's answers to elements with the same capped degree
    /// profile as Spoiler's pick. Sound: a mismatch in some capped in- or
    /// out-degree lets Spoiler win within the remaining rounds.
    pub prune: bool,
    /// Cap on memoized positions before giving up with a resource error.
    pub max_states: usize,
}

impl Default for EfOptions {
    fn default() -> Self {
        EfOptions {
            prune: true,
            max_states: 5_000_000,
        }
    }
}

/// True iff Duplicator wins the `k`-round EF game on `a` and `b`, i.e. the
/// two structures agree on all first-order sentences of quantifier rank ≤ `k`.
///
/// Successor relations take part in the game when present; they must be
/// present on both sides or neither.
pub fn ef_equivalent(a: &Structure, b: &Structure, k: usize) -> Result<bool> {
    ef_equivalent_with(a, b, k, EfOptions::default())
}

pub fn ef_equivalent_with(a: &Structure, b: &Structure, k: usize, opts: EfOptions) -> Result<bool> {
    if a.signature() != b.signature() {
        return Err(Error::input("EF game on structures over different signatures"));
    }
    if a.succ().is_some() != b.succ().is_some() {
        return Err(Error::input("EF game: successor present on only one side"));
    }
    let mut game = Game {
        sides: [a, b],
        profiles: [profiles(a), profiles(b)],
        memo: HashMap::new(),
        opts,
    };
    game.wins(&mut Vec::new(), k)
}

struct Game<'a> {
    sides: [&'a Structure; 2],
    /// Per element, per binary relation: (out-degree, in-degree) to other elements.
    profiles: [Vec<Vec<(usize, usize)>>; 2],
    memo: HashMap<(Vec<(Elem, Elem)>, usize), bool>,
    opts: EfOptions,
}

fn binary_relations(s: &Structure) -> Vec<usize> {
    s.all_relations(true)
        .enumerate()
        .filter(|(_, r)| r.arity() == 2)
        .map(|(i, _)| i)
        .collect()
}

fn profiles(s: &Structure) -> Vec<Vec<(usize, usize)>> {
    let rels = binary_relations(s);
    let mut p = vec![vec![(0, 0); rels.len()]; s.size()];
    for (k, &ri) in rels.iter().enumerate() {
        for t in s.relation_by_index(ri).tuples() {
            if t[0] != t[1] {
                p[t[0] as usize][k].0 += 1;
                p[t[1] as usize][k].1 += 1;
            }
        }
    }
    p
}

impl Game<'_> {
    fn wins(&mut self, pairs: &mut Vec<(Elem, Elem)>, k: usize) -> Result<bool> {
        if k == 0 {
            return Ok(true);
        }
        let mut key = pairs.clone();
        key.sort_unstable();
        key.dedup();
        let key = (key, k);
        if let Some(&v) = self.memo.get(&key) {
            return Ok(v);
        }
        if self.memo.len() >= self.opts.max_states {
            return Err(Error::resource(format!(
                "EF search exceeded {} positions",
                self.opts.max_states
            )));
        }
        let mut result = true;
        'spoiler: for side in 0..2 {
            let (this, other) = (self.sides[side], self.sides[1 - side]);
            for x in 0..this.size() as Elem {
                if pairs.iter().any(|p| pick(*p, side) == x) {
                    continue;
                }
                let mut answered = false;
                for y in 0..other.size() as Elem {
                    if pairs.iter().any(|p| pick(*p, 1 - side) == y) {
                        continue;
                    }
                    if self.opts.prune && !self.profiles_match(side, x, y, k - 1) {
                        continue;
                    }
                    let pair = if side == 0 { (x, y) } else { (y, x) };
                    if !self.extends(pairs, pair) {
                        continue;
                    }
                    pairs.push(pair);
                    let w = self.wins(pairs, k - 1);
                    pairs.pop();
                    if w? {
                        answered = true;
                        break;
                    }
                }
                if !answered {
                    result = false;
                    break 'spoiler;
                }
            }
        }
        self.memo.insert(key, result);
        Ok(result)
    }

    fn profiles_match(&self, side: usize, x: Elem, y: Elem, rest: usize) -> bool {
        let px = &self.profiles[side][x as usize];
        let py = &self.profiles[1 - side][y as usize];
        px.iter()
            .zip(py)
            .all(|(a, b)| a.0.min(rest) == b.0.min(rest) && a.1.min(rest) == b.1.min(rest))
    }

    /// Whether adding `pair` to the partial isomorphism `pairs` keeps it one.
    fn extends(&self, pairs: &[(Elem, Elem)], pair: (Elem, Elem)) -> bool {
        let [a, b] = self.sides;
        let fwd = |x: Elem| {
            if x == pair.0 {
                Some(pair.1)
            } else {
                pairs.iter().find(|p| p.0 == x).map(|p| p.1)
            }
        };
        let back = |y: Elem| {
            if y == pair.1 {
                Some(pair.0)
            } else {
                pairs.iter().find(|p| p.1 == y).map(|p| p.0)
            }
        };
        for &(rel, idx) in a.incidence(pair.0) {
            let t = a.relation_by_index(rel as usize).tuple(idx as usize);
            if let Some(img) = t.iter().map(|&x| fwd(x)).collect::<Option<Vec<Elem>>>() {
                if !b.relation_by_index(rel as usize).contains(&img) {
                    return false;
                }
            }
        }
        for &(rel, idx) in b.incidence(pair.1) {
            let t = b.relation_by_index(rel as usize).tuple(idx as usize);
            if let Some(pre) = t.iter().map(|&y| back(y)).collect::<Option<Vec<Elem>>>() {
                if !a.relation_by_index(rel as usize).contains(&pre) {
                    return false;
                }
            }
        }
        true
    }
}

fn pick(p: (Elem, Elem), side: usize) -> Elem {
    if side == 0 {
        p.0
    } else {
        p.1
    }
}
