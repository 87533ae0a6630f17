//! Lattice point configurations, polytope faces, volumes, and coherent
//! mixed subdivisions: the combinatorial substrate for fills and resultant
//! matrices.

pub mod hull;
pub mod subdivision;
pub mod support;

pub use hull::normal_face_reps;
pub use subdivision::{
    mixed_subdivision, mixed_volume, mixed_volume_inclusion_exclusion, MixedCell,
    MixedSubdivision,
};
pub use support::{Support, SupportTuple};
