use einstein_core::approx_metric::ApproxError;
use einstein_core::bounds_audit::BoundsError;
use einstein_core::clifford::CliffordError;
use einstein_core::einstein_solver::SolverError;
use einstein_core::model_geometry::ModelError;
use einstein_core::numerics::NumericsError;
use einstein_core::profile::ProfileError;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CliError {
    #[error("{0}")]
    Validation(String),
    #[error("{0}")]
    Numerical(String),
    #[error("{0}")]
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Validation(_) => 2,
            CliError::Numerical(_) => 3,
            CliError::Io(_) => 4,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            CliError::Validation(_) => "validation",
            CliError::Numerical(_) => "numerical",
            CliError::Io(_) => "io",
        }
    }

    /// Single-line JSON error record for stderr.
    pub fn record(&self) -> String {
        serde_json::json!({
            "error": {
                "kind": self.kind(),
                "exit_code": self.exit_code(),
                "message": self.to_string(),
            }
        })
        .to_string()
    }
}

impl From<NumericsError> for CliError {
    fn from(e: NumericsError) -> Self {
        match e {
            NumericsError::EigenNoConvergence => CliError::Numerical(e.to_string()),
            _ => CliError::Validation(e.to_string()),
        }
    }
}

impl From<ModelError> for CliError {
    fn from(e: ModelError) -> Self {
        match e {
            ModelError::Numerics(inner) => inner.into(),
            ModelError::ConeCheck { .. } | ModelError::NonFinite => {
                CliError::Numerical(e.to_string())
            }
            _ => CliError::Validation(e.to_string()),
        }
    }
}

impl From<ProfileError> for CliError {
    fn from(e: ProfileError) -> Self {
        match e {
            ProfileError::Numerics(inner) => inner.into(),
            ProfileError::Model(inner) => inner.into(),
            ProfileError::NonPositive { .. } => CliError::Validation(e.to_string()),
        }
    }
}

impl From<SolverError> for CliError {
    fn from(e: SolverError) -> Self {
        if e.is_numerical() {
            return CliError::Numerical(e.to_string());
        }
        match e {
            SolverError::Profile(inner) => inner.into(),
            SolverError::Model(inner) => inner.into(),
            SolverError::Numerics(inner) => inner.into(),
            _ => CliError::Validation(e.to_string()),
        }
    }
}

impl From<ApproxError> for CliError {
    fn from(e: ApproxError) -> Self {
        match e {
            ApproxError::Model(inner) => inner.into(),
            ApproxError::Profile(inner) => inner.into(),
            ApproxError::Numerics(inner) => inner.into(),
            _ => CliError::Validation(e.to_string()),
        }
    }
}

impl From<BoundsError> for CliError {
    fn from(e: BoundsError) -> Self {
        CliError::Validation(e.to_string())
    }
}

impl From<CliffordError> for CliError {
    fn from(e: CliffordError) -> Self {
        CliError::Validation(e.to_string())
    }
}
