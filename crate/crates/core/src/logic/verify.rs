//! Independent re-checking of a finished weave.
//!
//! Every check recomputes its property from the input structures and the
//! produced successors; the construction's internal state is only consulted
//! for the bookkeeping sets a property is stated relative to (the core `A`,
//! the rare occurrences, the anchors and the transfer map).

use std::collections::{BTreeSet, HashMap};

use serde::Serialize;

use crate::canon::canonical_form;
use crate::census::{element_types, threshold_violations, NeighborhoodType, TypeCensus};
use crate::error::{Error, Result};
use crate::fractal::{fractal_type_id, FractalMode};
use crate::layering::short_cycle_through_s;
use crate::structure::{Elem, Structure};
use crate::weaver::{Branch, WeaveResult};

use super::ef::ef_equivalent;
use super::successor::is_circular_successor;

/// Everything the verifier needs to know about a weave besides the inputs.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeaveCertificate {
    pub succ1: Vec<Elem>,
    pub succ2: Vec<Elem>,
    /// Rare occurrences (`R_0`) on each side.
    pub rare1: BTreeSet<Elem>,
    pub rare2: BTreeSet<Elem>,
    /// `(x_i^min, x_i^max)` per frequent type on each side.
    pub anchors1: Vec<(Elem, Elem)>,
    pub anchors2: Vec<(Elem, Elem)>,
    /// The core `A_1` and its image `h(A_1)`.
    pub core1: BTreeSet<Elem>,
    pub core2: BTreeSet<Elem>,
    /// The transfer map restricted to `A_1`.
    pub transfer: Vec<(Elem, Elem)>,
    /// `None` when the successors come without construction data.
    pub branch: Option<Branch>,
}

impl WeaveCertificate {
    pub fn from_result(res: &WeaveResult) -> Self {
        let (s1, s2) = (&res.state1, &res.state2);
        WeaveCertificate {
            succ1: res.succ1.clone(),
            succ2: res.succ2.clone(),
            rare1: s1.r_sets.first().cloned().unwrap_or_default(),
            rare2: s2.r_sets.first().cloned().unwrap_or_default(),
            anchors1: s1.anchors.clone(),
            anchors2: s2.anchors.clone(),
            core1: s1.core.clone(),
            core2: s2.core.clone(),
            transfer: s1
                .transfer
                .iter()
                .filter(|(x, _)| s1.core.contains(x))
                .map(|(&x, &y)| (x, y))
                .collect(),
            branch: Some(res.branch),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Pass,
    Fail,
    Skipped,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Check {
    pub name: String,
    pub status: Status,
    /// Counterexample for failures, a short summary otherwise.
    pub detail: String,
    /// Set for checks whose outcome the construction does not guarantee at
    /// the chosen parameters.
    pub empirical: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VerificationReport {
    pub passed: bool,
    pub radius: usize,
    pub threshold: usize,
    pub ef_depth: Option<usize>,
    pub branch: Option<Branch>,
    pub checks: Vec<Check>,
    pub census1: TypeCensus,
    pub census2: TypeCensus,
}

impl VerificationReport {
    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| c.status == Status::Fail)
    }
}

/// Verifies a weave produced by [`crate::weave_pair`].
pub fn verify_weave(
    res: &WeaveResult,
    g1: &Structure,
    g2: &Structure,
    r: usize,
    t: usize,
    ef_depth: Option<usize>,
) -> Result<VerificationReport> {
    verify_certificate(g1, g2, &WeaveCertificate::from_result(res), r, t, ef_depth)
}

/// Verifies successors `cert.succ1`, `cert.succ2` on `g1`, `g2`.
pub fn verify_certificate(
    g1: &Structure,
    g2: &Structure,
    cert: &WeaveCertificate,
    r: usize,
    t: usize,
    ef_depth: Option<usize>,
) -> Result<VerificationReport> {
    if g1.signature() != g2.signature() {
        return Err(Error::input("structures are over different signatures"));
    }
    for (i, g, succ) in [(1, g1, &cert.succ1), (2, g2, &cert.succ2)] {
        if succ.len() != g.size() {
            return Err(Error::input(format!(
                "successor {i} covers {} elements, structure {i} has {}",
                succ.len(),
                g.size()
            )));
        }
    }
    let sides = [
        Side::new(g1, &cert.succ1, r, &cert.rare1, &cert.anchors1, &cert.core1)?,
        Side::new(g2, &cert.succ2, r, &cert.rare2, &cert.anchors2, &cert.core2)?,
    ];
    let mut checks = Vec::new();
    let general = cert.branch == Some(Branch::General);
    let skip_reason = match cert.branch {
        Some(Branch::General) => "",
        Some(Branch::Isomorphism) => "not applicable: successors are transported through an isomorphism",
        Some(Branch::TrivialRadius) => "not applicable at radius 0",
        None => "no construction data for these successors",
    };

    for (i, side) in sides.iter().enumerate() {
        checks.push(side.circularity(i + 1));
    }
    for (i, side) in sides.iter().enumerate() {
        if cert.branch == Some(Branch::Isomorphism) {
            checks.push(skipped(format!("layered_{}", i + 1), skip_reason));
        } else {
            checks.push(side.layered(i + 1));
        }
    }
    for (i, side) in sides.iter().enumerate() {
        let name = format!("edge_type_homogeneity_{}", i + 1);
        checks.push(if general { side.homogeneity(name) } else { skipped(name, skip_reason) });
    }
    let mut fractal_cache = HashMap::new();
    for (i, side) in sides.iter().enumerate() {
        let name = format!("fractal_regularity_{}", i + 1);
        checks.push(if general {
            side.fractal_regularity(name, &mut fractal_cache)?
        } else {
            skipped(name, skip_reason)
        });
    }
    checks.push(if general {
        transfer_check(&sides, cert)
    } else {
        skipped("transfer_type_preservation".into(), skip_reason)
    });
    checks.push(threshold_check(&sides, t));
    for (i, side) in sides.iter().enumerate() {
        let name = format!("segment_structure_{}", i + 1);
        checks.push(if general { side.segments(name) } else { skipped(name, skip_reason) });
    }
    for (i, side) in sides.iter().enumerate() {
        let name = format!("rare_flanking_{}", i + 1);
        checks.push(if general { side.rare_flanking(name) } else { skipped(name, skip_reason) });
    }
    if cert.branch == Some(Branch::Isomorphism) {
        checks.push(isomorphism_check(&sides));
    }
    if let Some(k) = ef_depth {
        let (detail, status) = match ef_equivalent(&sides[0].enriched, &sides[1].enriched, k) {
            Ok(true) => (format!("Duplicator wins the {k}-round game"), Status::Pass),
            Ok(false) => (format!("Spoiler wins the {k}-round game"), Status::Fail),
            Err(e) => (format!("not decided: {e}"), Status::Skipped),
        };
        checks.push(Check {
            name: "ef_equivalence".into(),
            status,
            detail,
            empirical: true,
        });
    }

    let [s1, s2] = sides;
    Ok(VerificationReport {
        passed: checks.iter().all(|c| c.status != Status::Fail),
        radius: r,
        threshold: t,
        ef_depth,
        branch: cert.branch,
        checks,
        census1: TypeCensus::from_types(&s1.enriched_types, r, true),
        census2: TypeCensus::from_types(&s2.enriched_types, r, true),
    })
}

struct Side<'a> {
    plain: &'a Structure,
    enriched: Structure,
    succ: &'a [Elem],
    r: usize,
    sigma_types: Vec<NeighborhoodType>,
    enriched_types: Vec<NeighborhoodType>,
    rare: &'a BTreeSet<Elem>,
    anchors: &'a [(Elem, Elem)],
    core: &'a BTreeSet<Elem>,
}

fn pass(name: String, detail: impl Into<String>) -> Check {
    Check {
        name,
        status: Status::Pass,
        detail: detail.into(),
        empirical: false,
    }
}

fn fail(name: String, detail: impl Into<String>) -> Check {
    Check {
        name,
        status: Status::Fail,
        detail: detail.into(),
        empirical: false,
    }
}

fn skipped(name: String, reason: &str) -> Check {
    Check {
        name,
        status: Status::Skipped,
        detail: reason.to_string(),
        empirical: false,
    }
}

fn short(t: &NeighborhoodType) -> String {
    crate::weaver::short_type_id(t)
}

impl<'a> Side<'a> {
    fn new(
        g: &'a Structure,
        succ: &'a [Elem],
        r: usize,
        rare: &'a BTreeSet<Elem>,
        anchors: &'a [(Elem, Elem)],
        core: &'a BTreeSet<Elem>,
    ) -> Result<Self> {
        let plain = g;
        let enriched = g.without_succ().with_successor_map(succ)?;
        let n = g.size() as Elem;
        if let Some(x) = rare
            .iter()
            .chain(core)
            .chain(anchors.iter().flat_map(|(a, b)| [a, b]))
            .find(|&&x| x >= n)
        {
            return Err(Error::input(format!("certificate names element {x}, outside the universe")));
        }
        Ok(Side {
            plain,
            sigma_types: element_types(plain, r, false),
            enriched_types: element_types(&enriched, r, true),
            enriched,
            succ,
            r,
            rare,
            anchors,
            core,
        })
    }

    fn circularity(&self, i: usize) -> Check {
        let name = format!("circular_successor_{i}");
        let pairs: Vec<(Elem, Elem)> = self.succ.iter().enumerate().map(|(x, &y)| (x as Elem, y)).collect();
        if is_circular_successor(&pairs, self.succ.len()) {
            return pass(name, format!("single cycle through all {} elements", self.succ.len()));
        }
        let mut hit = vec![0usize; self.succ.len()];
        for &y in self.succ {
            hit[y as usize] += 1;
        }
        if let Some(y) = hit.iter().position(|&c| c != 1) {
            return fail(name, format!("element {y} has {} predecessors", hit[y]));
        }
        let mut cycle_len = 1;
        let mut cur = self.succ[0];
        while cur != 0 {
            cur = self.succ[cur as usize];
            cycle_len += 1;
        }
        fail(
            name,
            format!("the cycle through element 0 has {cycle_len} of {} elements", self.succ.len()),
        )
    }

    fn layered(&self, i: usize) -> Check {
        let name = format!("layered_{i}");
        match short_cycle_through_s(&self.enriched, self.r) {
            None => pass(name, format!("no cycle of length at most {} through a successor edge", 2 * self.r + 1)),
            Some(c) => fail(name, format!("cycle {c:?} passes through successor edge ({}, {})", c[0], c[1])),
        }
    }

    /// Every successor edge outside the rare occurrences and the junction
    /// edges joins two elements of the same Σ-type.
    fn homogeneity(&self, name: String) -> Check {
        let m = self.anchors.len();
        let junctions: BTreeSet<(Elem, Elem)> =
            (0..m).map(|i| (self.anchors[i].1, self.anchors[(i + 1) % m].0)).collect();
        let mut exempt = 0;
        for (x, &y) in self.succ.iter().enumerate() {
            let x = x as Elem;
            if self.rare.contains(&x) || self.rare.contains(&y) || junctions.contains(&(x, y)) {
                exempt += 1;
                continue;
            }
            let (tx, ty) = (&self.sigma_types[x as usize], &self.sigma_types[y as usize]);
            if tx != ty {
                return fail(
                    name,
                    format!("edge ({x}, {y}) joins types {} and {}", short(tx), short(ty)),
                );
            }
        }
        pass(name, format!("{} edges checked, {exempt} exempt", self.succ.len() - exempt))
    }

    /// Outside the core, each element's enriched type is the fractal of its
    /// Σ-type.
    fn fractal_regularity(
        &self,
        name: String,
        cache: &mut HashMap<NeighborhoodType, NeighborhoodType>,
    ) -> Result<Check> {
        let mut checked = 0;
        for x in 0..self.plain.size() as Elem {
            if self.core.contains(&x) {
                continue;
            }
            let tau = &self.sigma_types[x as usize];
            if !cache.contains_key(tau) {
                let f = fractal_type_id(tau, self.plain.signature(), self.r, FractalMode::Both)?;
                cache.insert(tau.clone(), f);
            }
            let expected = &cache[tau];
            let actual = &self.enriched_types[x as usize];
            if actual != expected {
                return Ok(fail(
                    name,
                    format!(
                        "element {x}: enriched type {} differs from the fractal {} of its type {}",
                        short(actual),
                        short(expected),
                        short(tau)
                    ),
                ));
            }
            checked += 1;
        }
        Ok(pass(name, format!("{checked} elements outside the core checked")))
    }

    /// Elements of each frequent type form exactly the arc between its
    /// anchors; the first arc additionally holds every rare occurrence.
    fn segments(&self, name: String) -> Check {
        let n = self.succ.len();
        let frequent: Vec<&NeighborhoodType> =
            self.anchors.iter().map(|&(lo, _)| &self.sigma_types[lo as usize]).collect();
        for (i, &(lo, hi)) in self.anchors.iter().enumerate() {
            if self.sigma_types[hi as usize] != *frequent[i] {
                return fail(name, format!("anchors {lo} and {hi} of arc {i} have different types"));
            }
        }
        let rare_by_type: BTreeSet<Elem> = (0..n as Elem)
            .filter(|&x| !frequent.contains(&&self.sigma_types[x as usize]))
            .collect();
        if rare_by_type != *self.rare {
            return fail(
                name,
                format!(
                    "{} elements have no frequent type but {} are recorded as rare",
                    rare_by_type.len(),
                    self.rare.len()
                ),
            );
        }
        for (i, &(lo, hi)) in self.anchors.iter().enumerate() {
            let mut arc = BTreeSet::from([lo]);
            let mut cur = lo;
            while cur != hi {
                cur = self.succ[cur as usize];
                if !arc.insert(cur) || arc.len() > n {
                    return fail(name, format!("arc {i} from {lo} never reaches {hi}"));
                }
            }
            let mut expected: BTreeSet<Elem> =
                (0..n as Elem).filter(|&x| self.sigma_types[x as usize] == *frequent[i]).collect();
            if i == 0 {
                expected.extend(self.rare.iter().copied());
            }
            if arc != expected {
                let x = arc.symmetric_difference(&expected).next().expect("sets differ");
                let side = if arc.contains(x) { "lies on" } else { "is missing from" };
                return fail(name, format!("element {x} {side} arc {i} ({lo} .. {hi})"));
            }
        }
        pass(name, format!("{} arcs match their types", self.anchors.len()))
    }

    /// Every rare occurrence sits between two elements of the first frequent type.
    fn rare_flanking(&self, name: String) -> Check {
        let Some(&(lo, _)) = self.anchors.first() else {
            return fail(name, "no frequent type recorded");
        };
        let tau0 = &self.sigma_types[lo as usize];
        let mut pred = vec![0; self.succ.len()];
        for (x, &y) in self.succ.iter().enumerate() {
            pred[y as usize] = x as Elem;
        }
        for &x in self.rare {
            for (what, y) in [("successor", self.succ[x as usize]), ("predecessor", pred[x as usize])] {
                if self.sigma_types[y as usize] != *tau0 {
                    return fail(name, format!("rare element {x} has {what} {y} of another type"));
                }
            }
        }
        pass(name, format!("{} rare elements flanked by the first frequent type", self.rare.len()))
    }
}

fn transfer_check(sides: &[Side; 2], cert: &WeaveCertificate) -> Check {
    let name = "transfer_type_preservation".to_string();
    let image: BTreeSet<Elem> = cert.transfer.iter().map(|&(_, y)| y).collect();
    let domain: BTreeSet<Elem> = cert.transfer.iter().map(|&(x, _)| x).collect();
    if domain != *sides[0].core || image != *sides[1].core {
        return fail(name, "the transfer map is not a bijection between the two cores");
    }
    for &(x, y) in &cert.transfer {
        if y as usize >= sides[1].succ.len() {
            return fail(name, format!("transfer image {y} outside the universe"));
        }
        let (a, b) = (&sides[0].enriched_types[x as usize], &sides[1].enriched_types[y as usize]);
        if a != b {
            return fail(
                name,
                format!("element {x} has enriched type {}, its image {y} has {}", short(a), short(b)),
            );
        }
    }
    pass(name, format!("{} core elements keep their enriched type", cert.transfer.len()))
}

fn threshold_check(sides: &[Side; 2], t: usize) -> Check {
    let name = "threshold_equivalence".to_string();
    let c1 = TypeCensus::from_types(&sides[0].enriched_types, sides[0].r, true);
    let c2 = TypeCensus::from_types(&sides[1].enriched_types, sides[1].r, true);
    match threshold_violations(&c1, &c2, t).first() {
        None => pass(name, format!("{} enriched types agree up to threshold {t}", c1.counts.len())),
        Some((ty, a, b)) => fail(name, format!("enriched type {} occurs {a} vs {b} times", short(ty))),
    }
}

fn isomorphism_check(sides: &[Side; 2]) -> Check {
    let name = "enriched_isomorphism".to_string();
    let a = canonical_form(&sides[0].enriched, None, true);
    let b = canonical_form(&sides[1].enriched, None, true);
    if a.code == b.code {
        pass(name, "the enriched structures are isomorphic")
    } else {
        fail(name, "the enriched structures have different canonical forms")
    }
}
