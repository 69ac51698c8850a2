//! Shared helpers for the integration tests: random structures, random
//! sentences, an independent truth-table evaluator and the finite list of
//! sentences that decides equivalence up to quantifier rank 2.

#![allow(dead_code)]

use std::collections::{BTreeMap, HashSet};

use rand::seq::SliceRandom;
use rand::Rng;
use succinv::logic::Formula;
use succinv::structure::{Elem, Structure};

/// A structure over `{E/2}` whose edge set is the bit pattern `bits`
/// (bit `i*n + j` set iff `E(i, j)`).
pub fn graph_from_bits(n: usize, bits: u64) -> Structure {
    let edges: Vec<(Elem, Elem)> = (0..n * n)
        .filter(|b| bits >> b & 1 == 1)
        .map(|b| ((b / n) as Elem, (b % n) as Elem))
        .collect();
    Structure::graph(n, &edges).unwrap()
}

/// Every structure over `{E/2}` on exactly `n` elements (labeled, so
/// isomorphic copies repeat).
pub fn all_graphs(n: usize) -> impl Iterator<Item = Structure> {
    assert!(n * n < 64);
    (0..1u64 << (n * n)).map(move |bits| graph_from_bits(n, bits))
}

/// A random `{E/2}` structure with edge probability `p`.
pub fn random_graph(rng: &mut impl Rng, n: usize, p: f64) -> Structure {
    let mut edges = Vec::new();
    for a in 0..n as Elem {
        for b in 0..n as Elem {
            if rng.gen_bool(p) {
                edges.push((a, b));
            }
        }
    }
    Structure::graph(n, &edges).unwrap()
}

/// A random `{E/2}` structure in which every element has Gaifman degree at
/// most `d` (edges are proposed at random and kept while degrees allow).
pub fn random_bounded_graph(rng: &mut impl Rng, n: usize, d: usize, tries: usize) -> Structure {
    let mut adj: Vec<HashSet<Elem>> = vec![HashSet::new(); n];
    let mut edges = Vec::new();
    for _ in 0..tries {
        let a = rng.gen_range(0..n) as Elem;
        let b = rng.gen_range(0..n) as Elem;
        if a == b {
            if rng.gen_bool(0.1) {
                edges.push((a, a));
            }
            continue;
        }
        let fresh = !adj[a as usize].contains(&b);
        if fresh && (adj[a as usize].len() >= d || adj[b as usize].len() >= d) {
            continue;
        }
        adj[a as usize].insert(b);
        adj[b as usize].insert(a);
        edges.push((a, b));
    }
    Structure::graph(n, &edges).unwrap()
}

/// `random_graph` plus `k` random successor pairs (arbitrary, not
/// necessarily functional).
pub fn random_with_s(rng: &mut impl Rng, n: usize, p: f64, k: usize) -> Structure {
    let g = random_graph(rng, n, p);
    let pairs: Vec<(Elem, Elem)> = (0..k)
        .map(|_| (rng.gen_range(0..n) as Elem, rng.gen_range(0..n) as Elem))
        .collect();
    g.with_succ(&pairs).unwrap()
}

/// A random sentence of quantifier rank at most `rank` whose atoms use the
/// relations in `rels` (name, arity) and equality.
pub fn random_sentence(rng: &mut impl Rng, rank: usize, rels: &[(&str, usize)]) -> Formula {
    let vars = ["x", "y", "z", "u"];
    gen(rng, rank, &mut Vec::new(), rels, &vars, 0)
}

fn gen(
    rng: &mut impl Rng,
    rank: usize,
    scope: &mut Vec<&'static str>,
    rels: &[(&str, usize)],
    vars: &[&'static str],
    depth: usize,
) -> Formula {
    let can_atom = !scope.is_empty();
    let must_quantify = scope.is_empty() && rank > 0 && depth < 2;
    let choice = if must_quantify {
        rng.gen_range(0..2)
    } else {
        rng.gen_range(0..if depth > 4 { 2 } else { 6 })
    };
    match choice {
        0 | 1 if rank > 0 => {
            // reuse a name sometimes to exercise shadowing
            let v = if !scope.is_empty() && rng.gen_bool(0.15) {
                *scope.choose(rng).unwrap()
            } else {
                vars[scope.len() % vars.len()]
            };
            scope.push(v);
            let body = gen(rng, rank - 1, scope, rels, vars, depth + 1);
            scope.pop();
            if choice == 0 {
                Formula::exists(v, body)
            } else {
                Formula::forall(v, body)
            }
        }
        2 | 3 if depth < 5 => {
            let k = rng.gen_range(0..=3);
            let parts = (0..k).map(|_| gen(rng, rank, scope, rels, vars, depth + 1)).collect();
            if choice == 2 {
                Formula::And(parts)
            } else {
                Formula::Or(parts)
            }
        }
        4 if depth < 5 => Formula::not(gen(rng, rank, scope, rels, vars, depth + 1)),
        _ if can_atom => {
            if rng.gen_bool(0.2) {
                Formula::eq(*scope.choose(rng).unwrap(), *scope.choose(rng).unwrap())
            } else {
                let &(name, arity) = rels.choose(rng).unwrap();
                let args: Vec<String> = (0..arity).map(|_| scope.choose(rng).unwrap().to_string()).collect();
                Formula::Atom(name.to_string(), args)
            }
        }
        _ => {
            if rng.gen_bool(0.5) {
                Formula::And(vec![])
            } else {
                Formula::Or(vec![])
            }
        }
    }
}

/// A second evaluator, written independently of the library's: each
/// subformula is turned into the full truth table over its free variables,
/// quantifiers are eliminated by folding the table along one variable.
pub fn table_eval(s: &Structure, phi: &Formula, succ_names: &[&str]) -> bool {
    let n = s.size();
    let mut rels: BTreeMap<String, HashSet<Vec<Elem>>> = BTreeMap::new();
    for (i, (name, _)) in s.signature().relations().iter().enumerate() {
        rels.insert(name.clone(), s.relation(i).tuples().map(<[Elem]>::to_vec).collect());
    }
    let succ: HashSet<Vec<Elem>> = s.succ_pairs().into_iter().map(|(a, b)| vec![a, b]).collect();
    for name in succ_names {
        rels.insert(name.to_string(), succ.clone());
    }
    let t = table(phi, n, &rels);
    assert!(t.vars.is_empty(), "not a sentence");
    t.rows[0]
}

struct Table {
    /// Free variables in increasing name order; the assignment index is the
    /// mixed-radix number with the first variable most significant.
    vars: Vec<String>,
    rows: Vec<bool>,
}

fn decode(idx: usize, k: usize, n: usize) -> Vec<Elem> {
    let mut out = vec![0; k];
    let mut rest = idx;
    for slot in out.iter_mut().rev() {
        *slot = (rest % n.max(1)) as Elem;
        rest /= n.max(1);
    }
    out
}

fn rows_for(k: usize, n: usize) -> usize {
    n.pow(k as u32)
}

fn lift(t: &Table, vars: &[String], n: usize) -> Vec<bool> {
    let pos: Vec<usize> = t.vars.iter().map(|v| vars.iter().position(|w| w == v).unwrap()).collect();
    (0..rows_for(vars.len(), n))
        .map(|i| {
            let a = decode(i, vars.len(), n);
            let mut j = 0;
            for &p in &pos {
                j = j * n + a[p] as usize;
            }
            t.rows[j]
        })
        .collect()
}

fn table(phi: &Formula, n: usize, rels: &BTreeMap<String, HashSet<Vec<Elem>>>) -> Table {
    match phi {
        Formula::Eq(a, b) => {
            let mut vars = vec![a.clone(), b.clone()];
            vars.sort();
            vars.dedup();
            let rows = (0..rows_for(vars.len(), n))
                .map(|i| {
                    let asg = decode(i, vars.len(), n);
                    let val = |v: &String| asg[vars.iter().position(|w| w == v).unwrap()];
                    val(a) == val(b)
                })
                .collect();
            Table { vars, rows }
        }
        Formula::Atom(name, args) => {
            let mut vars = args.clone();
            vars.sort();
            vars.dedup();
            let set = &rels[name];
            let rows = (0..rows_for(vars.len(), n))
                .map(|i| {
                    let asg = decode(i, vars.len(), n);
                    let tuple: Vec<Elem> =
                        args.iter().map(|v| asg[vars.iter().position(|w| w == v).unwrap()]).collect();
                    set.contains(&tuple)
                })
                .collect();
            Table { vars, rows }
        }
        Formula::Not(b) => {
            let t = table(b, n, rels);
            Table {
                vars: t.vars,
                rows: t.rows.into_iter().map(|x| !x).collect(),
            }
        }
        Formula::And(parts) | Formula::Or(parts) => {
            let conj = matches!(phi, Formula::And(_));
            let tables: Vec<Table> = parts.iter().map(|p| table(p, n, rels)).collect();
            let mut vars: Vec<String> = tables.iter().flat_map(|t| t.vars.clone()).collect();
            vars.sort();
            vars.dedup();
            let mut rows = vec![conj; rows_for(vars.len(), n)];
            for t in &tables {
                for (r, v) in rows.iter_mut().zip(lift(t, &vars, n)) {
                    *r = if conj { *r && v } else { *r || v };
                }
            }
            Table { vars, rows }
        }
        Formula::Exists(x, b) | Formula::Forall(x, b) => {
            let ex = matches!(phi, Formula::Exists(..));
            let t = table(b, n, rels);
            let Some(p) = t.vars.iter().position(|v| v == x) else {
                // vacuous quantifier: over the empty universe ∃ is false and ∀ true
                if n == 0 {
                    let rows = vec![!ex; rows_for(t.vars.len(), n)];
                    return Table { vars: t.vars, rows };
                }
                return t;
            };
            let mut vars = t.vars.clone();
            vars.remove(p);
            let rows = (0..rows_for(vars.len(), n))
                .map(|i| {
                    let asg = decode(i, vars.len(), n);
                    let mut vals = (0..n as Elem).map(|e| {
                        let mut full = asg.clone();
                        full.insert(p, e);
                        let mut j = 0;
                        for &v in &full {
                            j = j * n + v as usize;
                        }
                        t.rows[j]
                    });
                    if ex {
                        vals.any(|v| v)
                    } else {
                        vals.all(|v| v)
                    }
                })
                .collect();
            Table { vars, rows }
        }
    }
}

/// Sentences over `{E/2}` whose truth values decide equivalence up to
/// quantifier rank `k` (for `k <= 2`): one sentence per realizable rank-`k`
/// Hintikka type. For rank 2 these are `∃x θ(x)` where `θ` fixes whether
/// `E(x,x)` holds and, for each of the eight atomic configurations of a
/// second element `y ≠ x`, whether such a `y` exists.
pub fn hintikka_sentences(k: usize) -> Vec<Formula> {
    let loop_x = |pos: bool| {
        let a = Formula::atom("E", &["x", "x"]);
        if pos {
            a
        } else {
            Formula::not(a)
        }
    };
    match k {
        0 => Vec::new(),
        1 => vec![Formula::exists("x", loop_x(true)), Formula::exists("x", loop_x(false))],
        2 => {
            let configs: Vec<Formula> = (0..8u8)
                .map(|c| {
                    let lit = |bit: u8, args: [&str; 2]| {
                        let a = Formula::atom("E", &args);
                        if c >> bit & 1 == 1 {
                            a
                        } else {
                            Formula::not(a)
                        }
                    };
                    Formula::exists(
                        "y",
                        Formula::And(vec![
                            Formula::not(Formula::eq("x", "y")),
                            lit(0, ["y", "y"]),
                            lit(1, ["x", "y"]),
                            lit(2, ["y", "x"]),
                        ]),
                    )
                })
                .collect();
            let mut out = Vec::with_capacity(512);
            for self_loop in [true, false] {
                for mask in 0..256u16 {
                    let mut parts = vec![loop_x(self_loop)];
                    for (i, c) in configs.iter().enumerate() {
                        parts.push(if mask >> i & 1 == 1 { c.clone() } else { Formula::not(c.clone()) });
                    }
                    out.push(Formula::exists("x", Formula::And(parts)));
                }
            }
            out
        }
        _ => panic!("only ranks 0..=2 are enumerated"),
    }
}

/// Brute-force isomorphism test over all bijections (centers, when given,
/// must correspond). Only for small structures.
pub fn brute_isomorphic(a: &Structure, ca: Option<Elem>, b: &Structure, cb: Option<Elem>) -> bool {
    let n = a.size();
    if n != b.size() || a.signature() != b.signature() || a.succ().is_some() != b.succ().is_some() {
        return false;
    }
    assert!(n <= 8, "brute force is limited to 8 elements");
    let tuples = |s: &Structure| -> Vec<HashSet<Vec<Elem>>> {
        let mut out: Vec<HashSet<Vec<Elem>>> = s
            .relations()
            .iter()
            .map(|r| r.tuples().map(<[Elem]>::to_vec).collect())
            .collect();
        out.push(s.succ_pairs().into_iter().map(|(x, y)| vec![x, y]).collect());
        out
    };
    let (ta, tb) = (tuples(a), tuples(b));
    if ta.iter().zip(&tb).any(|(x, y)| x.len() != y.len()) {
        return false;
    }
    let mut perm: Vec<Elem> = (0..n as Elem).collect();
    let mut found = false;
    permutations(&mut perm, 0, &mut |p| {
        if found {
            return;
        }
        if let (Some(x), Some(y)) = (ca, cb) {
            if p[x as usize] != y {
                return;
            }
        }
        found = ta.iter().zip(&tb).all(|(ra, rb)| {
            ra.iter().all(|t| rb.contains(&t.iter().map(|&e| p[e as usize]).collect::<Vec<_>>()))
        });
    });
    found
}

fn permutations(p: &mut Vec<Elem>, k: usize, visit: &mut impl FnMut(&[Elem])) {
    if k == p.len() {
        visit(p);
        return;
    }
    for i in k..p.len() {
        p.swap(k, i);
        permutations(p, k + 1, visit);
        p.swap(k, i);
    }
}

/// All-pairs Gaifman distances by Floyd–Warshall (`None` for unreachable).
pub fn floyd_distances(s: &Structure, include_succ: bool) -> Vec<Vec<Option<usize>>> {
    let n = s.size();
    let mut d = vec![vec![None; n]; n];
    for (x, row) in d.iter_mut().enumerate() {
        row[x] = Some(0);
    }
    for rel in s.all_relations(include_succ) {
        for t in rel.tuples() {
            for &a in t {
                for &b in t {
                    if a != b {
                        d[a as usize][b as usize] = Some(1);
                    }
                }
            }
        }
    }
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                if let (Some(a), Some(b)) = (d[i][k], d[k][j]) {
                    if d[i][j].is_none_or(|c| a + b < c) {
                        d[i][j] = Some(a + b);
                    }
                }
            }
        }
    }
    d
}
