//! Fractal neighborhoods: the enriched shape an element takes when every
//! element around it receives successors and predecessors of its own type.
//!
//! `fractal_build(τ, k, mode)` takes a radius-`k` neighborhood `τ` over Σ and
//! attaches to every non-center element at distance `d < k` an upper copy
//! (via `S(x, x⁺)`) and a lower copy (via `S(x⁻, x)`) of its own
//! `(k-d-1)`-neighborhood, built recursively. The center receives an upper
//! copy, a lower copy, or both depending on the mode.

use std::sync::Arc;

use crate::census::{canonical_type, NeighborhoodType};
use crate::error::{Error, Result};
use crate::structure::{neighborhood_in, Elem, GaifmanGraph, PointedStructure, Signature, Structure};

/// Environment variable overriding the element budget of fractal builds.
pub const BUDGET_ENV: &str = "SUCCINV_FRACTAL_BUDGET";

pub const DEFAULT_BUDGET: usize = 100_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum FractalMode {
    /// Successor and predecessor at the center.
    Both,
    /// Successor only.
    Upper,
    /// Predecessor only.
    Lower,
}

/// The element budget from the environment, or the default.
pub fn element_budget() -> usize {
    std::env::var(BUDGET_ENV)
        .ok()
        .and_then(|v| v.trim().parse().ok())
        .unwrap_or(DEFAULT_BUDGET)
}

struct Builder {
    signature: Arc<Signature>,
    tables: Vec<Vec<Vec<Elem>>>,
    succ: Vec<(Elem, Elem)>,
    size: usize,
    budget: usize,
}

impl Builder {
    /// Adds a copy of the Σ-structure `n` pointed at `a` with its radius-`k`
    /// fractal attachments; returns the copy of `a`.
    fn attach(&mut self, n: &Structure, a: Elem, k: usize, mode: FractalMode) -> Result<Elem> {
        let offset = self.size as Elem;
        self.size += n.size();
        if self.size > self.budget {
            return Err(Error::resource(format!(
                "fractal build exceeds the element budget of {} (set {BUDGET_ENV} to raise it)",
                self.budget
            )));
        }
        for (rel, table) in n.relations().iter().enumerate() {
            self.tables[rel].extend(table.tuples().map(|t| t.iter().map(|&e| e + offset).collect()));
        }
        if k == 0 {
            return Ok(offset + a);
        }
        let g = GaifmanGraph::new(n, false);
        let mut layers: Vec<(Elem, usize)> = g.bfs([a], k - 1);
        layers.sort_unstable();
        for (x, d) in layers {
            if x == a {
                continue;
            }
            let j = k - d - 1;
            let (chi, _) = neighborhood_in(n, &g, x, j, false);
            let plus = self.attach(&chi.structure, chi.center, j, FractalMode::Upper)?;
            self.succ.push((offset + x, plus));
            let minus = self.attach(&chi.structure, chi.center, j, FractalMode::Lower)?;
            self.succ.push((minus, offset + x));
        }
        let (chi, _) = neighborhood_in(n, &g, a, k - 1, false);
        if mode != FractalMode::Lower {
            let plus = self.attach(&chi.structure, chi.center, k - 1, FractalMode::Upper)?;
            self.succ.push((offset + a, plus));
        }
        if mode != FractalMode::Upper {
            let minus = self.attach(&chi.structure, chi.center, k - 1, FractalMode::Lower)?;
            self.succ.push((minus, offset + a));
        }
        Ok(offset + a)
    }
}

/// Builds the radius-`k` fractal of `tau` with the default element budget.
pub fn fractal_build(tau: &PointedStructure, k: usize, mode: FractalMode) -> Result<PointedStructure> {
    fractal_build_with_budget(tau, k, mode, element_budget())
}

pub fn fractal_build_with_budget(
    tau: &PointedStructure,
    k: usize,
    mode: FractalMode,
    budget: usize,
) -> Result<PointedStructure> {
    let n = tau.structure.without_succ();
    let g = GaifmanGraph::new(&n, false);
    if g.bfs([tau.center], usize::MAX).len() != n.size() {
        return Err(Error::input(
            "fractal input is not a neighborhood: some element is unreachable from the center",
        ));
    }
    let mut b = Builder {
        signature: n.signature().clone(),
        tables: vec![Vec::new(); n.signature().len()],
        succ: Vec::new(),
        size: 0,
        budget,
    };
    let center = b.attach(&n, tau.center, k, mode)?;
    let s = Structure::new(b.signature, b.size, b.tables)?.with_succ(&b.succ)?;
    PointedStructure::new(s, center)
}

/// The enriched type of the radius-`k` fractal of `tau` (restricted to
/// radius `k` first when `tau` has a larger radius).
pub fn fractal_type_id(
    tau: &NeighborhoodType,
    signature: &Arc<Signature>,
    k: usize,
    mode: FractalMode,
) -> Result<NeighborhoodType> {
    if tau.over_succ() {
        return Err(Error::input("fractal types are built from types over the plain signature"));
    }
    if tau.radius() < k {
        return Err(Error::input(format!(
            "type of radius {} cannot seed a radius-{k} fractal",
            tau.radius()
        )));
    }
    let rep = tau.representative(signature)?;
    let g = GaifmanGraph::new(&rep.structure, false);
    let (restricted, _) = neighborhood_in(&rep.structure, &g, rep.center, k, false);
    let built = fractal_build(&restricted, k, mode)?;
    Ok(canonical_type(&built, k, true))
}
