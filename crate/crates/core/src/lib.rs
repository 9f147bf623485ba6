//! Topology of compactified isospectral manifolds of generalized Toda lattices.
//!
//! The crate enumerates the colored-Dynkin-diagram cell decomposition of the
//! compactified manifold for a real split semisimple Lie algebra, computes its
//! integral homology through Smith normal form, builds the Morse complex on the
//! Weyl group with its incidence numbers, evaluates the closed-form counts for
//! type `A_l`, and integrates the Lax flow numerically.
//!
//! Simple roots are numbered from 1 in Bourbaki order everywhere in the public
//! API (`alpha_1, ..., alpha_l`).

pub mod cells;
pub mod cli;
pub mod error;
pub mod homology;
pub mod lie;
pub mod morse;
pub mod signs;
pub mod toda;

pub use error::{Error, Result};

/// Version tag written into every JSON report.
pub const SCHEMA_VERSION: u32 = 1;
