//! Radial potential profiles `V(u)` sampled on a grid.

use thiserror::Error;

use crate::approx_metric::{cutoff, cutoff_d1, cutoff_d2, interpolated_v};
use crate::model_geometry::{hyperbolic_v, potential_v, ModelError, ModelParams};
use crate::numerics::{FdOrder, NumericsError, RadialGrid};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ProfileError {
    #[error("potential is not positive at u = {u} (V = {v})")]
    NonPositive { u: f64, v: f64 },
    #[error(transparent)]
    Numerics(#[from] NumericsError),
    #[error(transparent)]
    Model(#[from] ModelError),
}

/// Where the sampled values came from.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Provenance {
    ExactModel { a: f64 },
    Hyperbolic,
    Interpolated { a: f64, u_glue: f64 },
    Numeric,
}

#[derive(Clone, Debug, PartialEq)]
pub struct RadialProfile {
    pub n: usize,
    pub grid: RadialGrid,
    pub v: Vec<f64>,
    pub provenance: Provenance,
}

impl RadialProfile {
    /// Wraps sampled values, requiring `V > 0` at every node.
    pub fn new(
        n: usize,
        grid: RadialGrid,
        v: Vec<f64>,
        provenance: Provenance,
    ) -> Result<Self, ProfileError> {
        if v.len() != grid.len() {
            return Err(NumericsError::LengthMismatch {
                grid: grid.len(),
                data: v.len(),
            }
            .into());
        }
        if let Some((u, val)) = grid.nodes().iter().zip(&v).find(|(_, x)| !(**x > 0.0)) {
            return Err(ProfileError::NonPositive { u: *u, v: *val });
        }
        Ok(Self {
            n,
            grid,
            v,
            provenance,
        })
    }

    pub fn exact_model(params: &ModelParams, grid: RadialGrid) -> Result<Self, ProfileError> {
        let v = grid
            .nodes()
            .iter()
            .map(|&u| potential_v(u, params))
            .collect::<Result<_, _>>()?;
        Self::new(params.n, grid, v, Provenance::ExactModel { a: params.a })
    }

    pub fn hyperbolic(n: usize, grid: RadialGrid) -> Result<Self, ProfileError> {
        let v = grid.nodes().iter().map(|&u| hyperbolic_v(u)).collect();
        Self::new(n, grid, v, Provenance::Hyperbolic)
    }

    /// Model potential glued to the hyperbolic one over `[U/2, U]`.
    pub fn interpolated(
        n: usize,
        a: f64,
        u_glue: f64,
        grid: RadialGrid,
    ) -> Result<Self, ProfileError> {
        let v = grid
            .nodes()
            .iter()
            .map(|&u| interpolated_v(u, a, n, u_glue))
            .collect();
        Self::new(n, grid, v, Provenance::Interpolated { a, u_glue })
    }

    pub fn nodes(&self) -> &[f64] {
        self.grid.nodes()
    }

    /// `(V′, V″)` at the nodes: closed form when the provenance determines
    /// `V`, fourth-order differences otherwise.
    pub fn derivatives(&self) -> Result<(Vec<f64>, Vec<f64>), ProfileError> {
        let k = 3 - self.n as i32;
        let kf = k as f64;
        let closed = |a: f64, glue: Option<f64>| -> (Vec<f64>, Vec<f64>) {
            self.nodes()
                .iter()
                .map(|&u| {
                    let (c0, c1, c2) = match glue {
                        Some(g) => (
                            cutoff(u / g),
                            cutoff_d1(u / g) / g,
                            cutoff_d2(u / g) / (g * g),
                        ),
                        None => (1.0, 0.0, 0.0),
                    };
                    let p = u.powi(k);
                    let dv = 2.0 * u + a * (kf * p / u * c0 + p * c1);
                    let ddv = 2.0
                        + a * (kf * (kf - 1.0) * p / (u * u) * c0 + 2.0 * kf * p / u * c1 + p * c2);
                    (dv, ddv)
                })
                .unzip()
        };
        Ok(match self.provenance {
            Provenance::Hyperbolic => closed(0.0, None),
            Provenance::ExactModel { a } => closed(a, None),
            Provenance::Interpolated { a, u_glue } => closed(a, Some(u_glue)),
            Provenance::Numeric => self.grid.derivatives(&self.v, FdOrder::Fourth)?,
        })
    }
}

/// Einstein residual coefficients `F = R_ii + (n−1)`, `G = R_μμ + (n−1)`.
#[derive(Clone, Debug, PartialEq)]
pub struct ResidualPair {
    pub u: Vec<f64>,
    pub f: Vec<f64>,
    pub g: Vec<f64>,
}

impl ResidualPair {
    /// `max(|F|, |G|)` over nodes whose index lies in `range`.
    pub fn sup_over(&self, range: std::ops::Range<usize>) -> f64 {
        range
            .map(|k| self.f[k].abs().max(self.g[k].abs()))
            .fold(0.0, f64::max)
    }

    pub fn sup(&self) -> f64 {
        self.sup_over(0..self.u.len())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model_geometry::a_max;
    use crate::numerics::GridScheme;

    #[test]
    fn closed_form_derivatives_agree_with_differences() {
        let grid = RadialGrid::new(1.2, 12.0, 3001, GridScheme::LogUniform).unwrap();
        let p = ModelParams::new(5, 0.5 * a_max(5)).unwrap();
        for prof in [
            RadialProfile::exact_model(&p, grid.clone()).unwrap(),
            RadialProfile::interpolated(5, p.a, 8.0, grid.clone()).unwrap(),
            RadialProfile::hyperbolic(5, grid.clone()).unwrap(),
        ] {
            let (dv, ddv) = prof.derivatives().unwrap();
            let (fv, fdv) = grid.derivatives(&prof.v, FdOrder::Fourth).unwrap();
            for k in 0..grid.len() {
                assert!(
                    (dv[k] - fv[k]).abs() < 1e-7 * (1.0 + dv[k].abs()),
                    "{:?} k={k}",
                    prof.provenance
                );
                assert!(
                    (ddv[k] - fdv[k]).abs() < 1e-5 * (1.0 + ddv[k].abs()),
                    "{:?} k={k}",
                    prof.provenance
                );
            }
        }
    }

    #[test]
    fn nonpositive_values_are_rejected() {
        let grid = RadialGrid::new(0.5, 2.0, 10, GridScheme::Uniform).unwrap();
        assert!(matches!(
            RadialProfile::hyperbolic(4, grid),
            Err(ProfileError::NonPositive { .. })
        ));
    }
}
