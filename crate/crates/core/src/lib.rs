//! Exact and numerical tools for cone-singular Einstein metrics on hyperbolic
//! manifolds: the ring `Z[√2]`, Clifford spin groups, the model metric family,
//! approximate and corrected metrics, and the volume-growth bookkeeping.

// `!(x > 0.0)` is used on purpose so that NaN fails validation
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod approx_metric;
pub mod bounds_audit;
pub mod clifford;
pub mod einstein_solver;
pub mod model_geometry;
pub mod number_ring;
pub mod numerics;
pub mod profile;
