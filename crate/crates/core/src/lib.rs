//! Exact finite-scale order combinatorics: preorders with their cellular
//! invariants, derived constructions (products, finite-support products,
//! subset posets over antichain families), spectrum-membership searches,
//! the finite-topology bridge, and exhaustive/seeded instance generation.
//!
//! Everything is a pure value: types are immutable after construction and
//! operations are deterministic, so instances can be shared freely across
//! threads.

mod bits;
pub mod constructions;
pub mod error;
pub mod fposet;
pub mod generators;
pub mod json;
pub mod preorder;
pub mod spectrum;
pub mod suites;
pub mod topology;
mod invariants;

pub use error::{Error, Result};
pub use invariants::{Witnessed, ORACLE_MAX_SIZE};
pub use preorder::{ElementSet, MonotoneMap, Preorder};

/// Default cap on constructed carriers (products, subset posets, spaces).
pub const ELEMENT_CAP: usize = 4096;
