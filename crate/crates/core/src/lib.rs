//! Successor weaving on bounded-degree relational structures.
//!
//! Given two finite structures that agree on their neighborhood-type censuses,
//! the weaver builds a circular successor relation on each so that the
//! enriched structures still agree. Every step is checked against independent
//! brute-force oracles in [`logic`].

pub mod canon;
pub mod census;
pub mod error;
pub mod fixtures;
pub mod fractal;
pub mod io;
pub mod layering;
pub mod logic;
pub mod params;
pub mod structure;
pub mod weaver;

pub use census::{canonical_type, element_types, threshold_equivalent, type_census, NeighborhoodType, TypeCensus};
pub use error::{Error, Result};
pub use fractal::{fractal_build, fractal_type_id, FractalMode};
pub use layering::{layered_neighborhoods, safe_to_add, short_cycle_through_s};
pub use params::{a_sequence, g_of, hanf_params, GFunction, ParamsBundle};
pub use structure::{
    ball, gaifman_distance, gaifman_neighbors, n_bound, neighborhood, structure_degree, Distance,
    Elem, GaifmanGraph, PointedStructure, Signature, Structure,
};
pub use weaver::{weave_pair, WeaveResult};
