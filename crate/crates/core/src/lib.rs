//! Smooth tropical plane quartics.
//!
//! The crate covers the whole pipeline from weight vectors on the 15 lattice
//! points of 4Δ₂ to real-bitangent counts:
//!
//! * [`lattice`]: point numbering and the S₃ action table,
//! * [`subdivision`]: regular subdivisions, secondary cones, GKZ vectors,
//! * [`curve`]: tropical quartics, tropical lines and stable intersection,
//! * [`oracle`]: geometric enumeration of bitangent classes,
//! * [`motif`]: deformation motifs and the motif catalog,
//! * [`pluecker`]: real-lifting sign conditions and achievable counts,
//! * [`chamber`]: shape-constant chambers inside a secondary cone,
//! * [`census`]: all regular unimodular triangulations up to symmetry,
//! * [`db`]: the JSON document collection built from the census.

pub mod census;
pub mod chamber;
pub mod cone;
pub mod curve;
pub mod db;
pub mod error;
pub mod lattice;
pub mod lp;
pub mod motif;
pub mod oracle;
pub mod pluecker;
pub mod rational;
pub mod subdivision;

pub use error::{Error, Result};
pub use rational::Q;
