//! Numeric parameters: radius and threshold for a target quantifier rank,
//! the rare/frequent separation function `g`, and the `a_i` sequence.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::structure::n_bound;

/// Radius and threshold for quantifier rank `alpha` on degree-`d` structures:
/// `r = max(1, (3^α - 1)/2)` and `t = α·N(d, r) + 1` (saturating).
pub fn hanf_params(alpha: u32, d: u64) -> (u64, u64) {
    let r = 3u64
        .checked_pow(alpha)
        .map_or(u64::MAX / 2, |p| (p - 1) / 2)
        .max(1);
    let t = u64::from(alpha).saturating_mul(n_bound(d, r)).saturating_add(1);
    (r, t)
}

/// Which lower bound on `g(β)` is the largest.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum GBound {
    /// `β·N(d+2, 3r) + 1`: room to pick far partners around rare elements.
    RareProtection,
    /// `(β + 2n)·N(d+2, r) + 4·N(d+2, 2r) + 1`: enough greedy edges to splice.
    Completion,
    /// `(β + 2n)·N(d+2, r) + t`: every frequent type stays above the threshold.
    Threshold,
    /// A user-forced constant.
    Forced,
}

/// The three bounds at `beta`, in [`GBound`] order, or `None` on overflow.
fn bounds(beta: u64, d: u64, r: u64, t: u64, n_occ: u64) -> Option<[u64; 3]> {
    let d2 = d.checked_add(2)?;
    let big = |radius: u64| -> Option<u64> {
        let v = n_bound(d2, radius);
        (v != u64::MAX).then_some(v)
    };
    let core = beta.checked_add(n_occ.checked_mul(2)?)?.checked_mul(big(r)?)?;
    Some([
        beta.checked_mul(big(r.checked_mul(3)?)?)?.checked_add(1)?,
        core.checked_add(big(r.checked_mul(2)?)?.checked_mul(4)?)?.checked_add(1)?,
        core.checked_add(t)?,
    ])
}

/// `g(β) = max` of the three feasibility bounds (saturating at `u64::MAX`).
pub fn g_of(beta: u64, d: u64, r: u64, t: u64, n_occ: u64) -> u64 {
    bounds(beta, d, r, t, n_occ).map_or(u64::MAX, |b| b.into_iter().max().unwrap_or(1))
}

/// The separation function used by the weaver.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum GFunction {
    Bounds { d: u64, r: u64, t: u64, n_occ: u64 },
    Constant(u64),
}

impl GFunction {
    pub fn eval(&self, beta: u64) -> u64 {
        self.eval_checked(beta).unwrap_or(u64::MAX)
    }

    pub fn eval_checked(&self, beta: u64) -> Option<u64> {
        match *self {
            GFunction::Bounds { d, r, t, n_occ } => {
                bounds(beta, d, r, t, n_occ).map(|b| b.into_iter().max().unwrap_or(1))
            }
            GFunction::Constant(c) => Some(c),
        }
    }

    /// The largest bound at `beta` (first in order on ties).
    pub fn binding(&self, beta: u64) -> GBound {
        match *self {
            GFunction::Constant(_) => GBound::Forced,
            GFunction::Bounds { d, r, t, n_occ } => match bounds(beta, d, r, t, n_occ) {
                None => GBound::RareProtection,
                Some(b) => {
                    let max = b.into_iter().max().unwrap_or(0);
                    [GBound::RareProtection, GBound::Completion, GBound::Threshold][b
                        .iter()
                        .position(|&v| v == max)
                        .unwrap_or(0)]
                }
            },
        }
    }
}

/// `a_1 = g(0)`, `a_{i+1} = g(i·a_i)`.
pub fn a_sequence(g: impl Fn(u64) -> Option<u64>, n: usize) -> Result<Vec<u64>> {
    if n == 0 {
        return Err(Error::input("a_sequence needs a positive length"));
    }
    let overflow = || Error::resource("a_sequence overflows 64-bit integers");
    let mut seq = vec![g(0).ok_or_else(overflow)?];
    for i in 1..n as u64 {
        let prev = *seq.last().expect("nonempty");
        let arg = i.checked_mul(prev).ok_or_else(overflow)?;
        seq.push(g(arg).ok_or_else(overflow)?);
    }
    Ok(seq)
}

/// User-forced parameter values.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Overrides {
    pub r: Option<u64>,
    pub t: Option<u64>,
    pub g: Option<u64>,
}

/// Every numeric parameter of a weave.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct ParamsBundle {
    pub alpha: Option<u32>,
    pub d: u64,
    pub r: u64,
    pub t: u64,
    pub n_occ: u64,
    pub g: GFunction,
    pub overrides: Overrides,
}

impl ParamsBundle {
    /// Parameters derived from a quantifier rank, with optional overrides.
    pub fn for_rank(alpha: u32, d: u64, n_occ: u64, overrides: Overrides) -> Self {
        let (r0, t0) = hanf_params(alpha, d);
        Self::build(Some(alpha), d, overrides.r.unwrap_or(r0), overrides.t.unwrap_or(t0), n_occ, overrides)
    }

    /// Parameters with an explicit radius and threshold.
    pub fn explicit(d: u64, r: u64, t: u64, n_occ: u64, g_const: Option<u64>) -> Self {
        let overrides = Overrides {
            r: Some(r),
            t: Some(t),
            g: g_const,
        };
        Self::build(None, d, r, t, n_occ, overrides)
    }

    fn build(alpha: Option<u32>, d: u64, r: u64, t: u64, n_occ: u64, overrides: Overrides) -> Self {
        let g = match overrides.g {
            Some(c) => GFunction::Constant(c),
            None => GFunction::Bounds { d, r, t, n_occ },
        };
        ParamsBundle {
            alpha,
            d,
            r,
            t,
            n_occ,
            g,
            overrides,
        }
    }

    pub fn g(&self, beta: u64) -> u64 {
        self.g.eval(beta)
    }
}
