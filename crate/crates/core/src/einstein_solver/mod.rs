//! Numerical Einstein solving in the radial ansatz and diagnostics of the
//! linearized operator.

mod bianchi;
mod newton;
mod operator;

use thiserror::Error;

pub use crate::numerics::{GridScheme, RadialGrid};
pub use bianchi::{bianchi_weitzenbock_check, OneFormProfile};
pub use newton::{family_fit, newton_solve, FamilyFit, NewtonConfig, NewtonReport};
pub use operator::{
    assemble_l, assemble_rough_laplacian, assemble_scalar, coercivity_estimate, BoundaryCondition,
    CoercivityReport, OperatorKind, OperatorMatrix, SymmetricTensorProfile, COMPONENTS,
};

use crate::model_geometry::ModelError;
use crate::numerics::NumericsError;
use crate::profile::ProfileError;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SolverError {
    #[error("potential reached zero near u = {u}: the cone tip entered the domain")]
    ConeTip { u: f64 },
    #[error("Newton stagnated after {iterations} iterations (residual {residual:e})")]
    Stagnation { iterations: usize, residual: f64 },
    #[error("second Einstein component check failed: sup |G| = {value:e} > {tol:e}")]
    SecondComponent { value: f64, tol: f64 },
    #[error("only the linearization at the background itself is supported")]
    UnsupportedGauge,
    #[error("profile needs at least {min} nodes, got {got}")]
    TooFewNodes { min: usize, got: usize },
    #[error("length mismatch: {expected} vs {got}")]
    LengthMismatch { expected: usize, got: usize },
    #[error(transparent)]
    Profile(#[from] ProfileError),
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Numerics(#[from] NumericsError),
}

impl SolverError {
    /// Whether the failure is numerical (as opposed to invalid input).
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            SolverError::ConeTip { .. }
                | SolverError::Stagnation { .. }
                | SolverError::SecondComponent { .. }
                | SolverError::Numerics(NumericsError::EigenNoConvergence)
        )
    }
}
