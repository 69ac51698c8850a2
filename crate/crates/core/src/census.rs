//! Neighborhood types, occurrence censuses and threshold equivalence.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use serde::{Serialize, Serializer};

use crate::canon::{bytes_to_code, canonical_form, code_to_bytes, decode};
use crate::error::{Error, Result};
use crate::structure::{neighborhood_in, Elem, GaifmanGraph, PointedStructure, Signature, Structure};

/// The isomorphism class of a pointed neighborhood.
///
/// Ordering compares the canonical token first, so sorting a list of types
/// of the same radius and namespace orders them by token.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct NeighborhoodType {
    id: Vec<u8>,
    radius: usize,
    over_succ: bool,
}

impl NeighborhoodType {
    pub fn from_token(id: Vec<u8>, radius: usize, over_succ: bool) -> Self {
        NeighborhoodType { id, radius, over_succ }
    }

    pub fn id(&self) -> &[u8] {
        &self.id
    }

    pub fn radius(&self) -> usize {
        self.radius
    }

    pub fn over_succ(&self) -> bool {
        self.over_succ
    }

    pub fn hex(&self) -> String {
        hex::encode(&self.id)
    }

    /// The same class re-tagged with a different radius or namespace flag.
    /// Only meaningful when the representative is unchanged by the move
    /// (e.g. a radius-0 fractal is the Σ-type with an empty successor).
    pub fn retagged(&self, radius: usize, over_succ: bool) -> Self {
        NeighborhoodType {
            id: self.id.clone(),
            radius,
            over_succ,
        }
    }

    /// A pointed structure in this class, numbered canonically.
    pub fn representative(&self, signature: &Arc<Signature>) -> Result<PointedStructure> {
        let code = bytes_to_code(&self.id)?;
        let (s, center) = decode(&code, signature)?;
        if s.succ().is_some() != self.over_succ {
            return Err(Error::input("type token does not match its namespace"));
        }
        let center = center.ok_or_else(|| Error::input("type token has no center"))?;
        PointedStructure::new(s, center)
    }
}

impl fmt::Debug for NeighborhoodType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let h = self.hex();
        let short = if h.len() > 16 { &h[..16] } else { &h };
        write!(f, "T{}{}[{}]", self.radius, if self.over_succ { "S" } else { "" }, short)
    }
}

impl fmt::Display for NeighborhoodType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.hex())
    }
}

impl Serialize for NeighborhoodType {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.hex())
    }
}

/// Canonical type of a pointed structure. `over_succ` selects whether the
/// successor relation (empty if absent) is part of the type.
pub fn canonical_type(p: &PointedStructure, radius: usize, over_succ: bool) -> NeighborhoodType {
    let form = canonical_form(&p.structure, Some(p.center), over_succ);
    NeighborhoodType {
        id: code_to_bytes(&form.code),
        radius,
        over_succ,
    }
}

/// Radius-`r` type of every element, indexed by element.
pub fn element_types(s: &Structure, r: usize, include_succ: bool) -> Vec<NeighborhoodType> {
    let g = GaifmanGraph::new(s, include_succ);
    (0..s.size() as Elem)
        .map(|x| {
            let (p, _) = neighborhood_in(s, &g, x, r, include_succ);
            canonical_type(&p, r, include_succ)
        })
        .collect()
}

/// Occurrence counts of radius-`r` types.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TypeCensus {
    pub radius: usize,
    pub over_succ: bool,
    pub counts: BTreeMap<NeighborhoodType, usize>,
    pub total: usize,
}

impl TypeCensus {
    pub fn from_types(types: &[NeighborhoodType], radius: usize, over_succ: bool) -> Self {
        let mut counts = BTreeMap::new();
        for t in types {
            *counts.entry(t.clone()).or_insert(0) += 1;
        }
        TypeCensus {
            radius,
            over_succ,
            counts,
            total: types.len(),
        }
    }

    pub fn count(&self, t: &NeighborhoodType) -> usize {
        self.counts.get(t).copied().unwrap_or(0)
    }
}

pub fn type_census(s: &Structure, r: usize, include_succ: bool) -> TypeCensus {
    TypeCensus::from_types(&element_types(s, r, include_succ), r, include_succ)
}

/// Counts agree per type, or both exceed `t`.
pub fn threshold_equivalent(c1: &TypeCensus, c2: &TypeCensus, t: usize) -> Result<bool> {
    if c1.radius != c2.radius || c1.over_succ != c2.over_succ {
        return Err(Error::input(format!(
            "censuses at different radii or namespaces ({} vs {})",
            c1.radius, c2.radius
        )));
    }
    Ok(threshold_violations(c1, c2, t).is_empty())
}

/// Types whose counts neither agree nor both exceed `t`, with both counts.
pub fn threshold_violations(c1: &TypeCensus, c2: &TypeCensus, t: usize) -> Vec<(NeighborhoodType, usize, usize)> {
    c1.counts
        .keys()
        .chain(c2.counts.keys().filter(|k| !c1.counts.contains_key(*k)))
        .filter_map(|k| {
            let (a, b) = (c1.count(k), c2.count(k));
            (a != b && (a <= t || b <= t)).then(|| (k.clone(), a, b))
        })
        .collect()
}
