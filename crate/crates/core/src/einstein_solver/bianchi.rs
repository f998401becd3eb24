//! Discrete check of `2 B ∘ div* = ∇*∇ − Ric` on radial 1-forms
//! `α = α_ρ e^ρ + α_θ e^θ`.
//!
//! With `B(t) = div t + ½ d tr t` and `div t = −∇^a t_{ab}`, the symmetric
//! tensor `t = div* α = sym ∇α` has components
//! `t_S = α_ρ W/u`, `t_ρ = W α_ρ′`, `t_θ = α_ρ W′`, `t_ρθ = ½(W α_θ′ − W′ α_θ)`.
//! Both sides are evaluated with second-order differences, so the defect
//! is a pure discretization error.

use super::SolverError;
use crate::model_geometry::CurvatureFrame;
use crate::numerics::FdOrder;
use crate::profile::RadialProfile;

/// Coefficients of a radial 1-form in the coframe `(du/W, W dθ)`.
#[derive(Clone, Debug, PartialEq)]
pub struct OneFormProfile {
    pub rho: Vec<f64>,
    pub theta: Vec<f64>,
}

impl OneFormProfile {
    pub fn from_fn(nodes: &[f64], rho: impl Fn(f64) -> f64, theta: impl Fn(f64) -> f64) -> Self {
        Self {
            rho: nodes.iter().map(|&u| rho(u)).collect(),
            theta: nodes.iter().map(|&u| theta(u)).collect(),
        }
    }
}

/// Sup over interior nodes of `|2B(div* α) − (∇*∇α − Ric(α))|`.
pub fn bianchi_weitzenbock_check(
    profile: &RadialProfile,
    alpha: &OneFormProfile,
) -> Result<f64, SolverError> {
    let grid = &profile.grid;
    let len = grid.len();
    if len < 8 {
        return Err(SolverError::TooFewNodes { min: 8, got: len });
    }
    for got in [alpha.rho.len(), alpha.theta.len()] {
        if got != len {
            return Err(SolverError::LengthMismatch { expected: len, got });
        }
    }
    let n = profile.n;
    let nf = n as f64;
    let u = profile.nodes();
    let v = &profile.v;
    let (dv, ddv) = profile.derivatives()?;
    let w: Vec<f64> = v.iter().map(|x| x.sqrt()).collect();
    let dw: Vec<f64> = (0..len).map(|k| dv[k] / (2.0 * w[k])).collect();
    let order = FdOrder::Second;
    let (ar1, ar2) = grid.derivatives(&alpha.rho, order)?;
    let (at1, at2) = grid.derivatives(&alpha.theta, order)?;

    let t_s: Vec<f64> = (0..len).map(|k| alpha.rho[k] * w[k] / u[k]).collect();
    let t_r: Vec<f64> = (0..len).map(|k| w[k] * ar1[k]).collect();
    let t_t: Vec<f64> = (0..len).map(|k| alpha.rho[k] * dw[k]).collect();
    let t_x: Vec<f64> = (0..len)
        .map(|k| 0.5 * (w[k] * at1[k] - dw[k] * alpha.theta[k]))
        .collect();
    let (ds, _) = grid.derivatives(&t_s, order)?;
    let (dr, _) = grid.derivatives(&t_r, order)?;
    let (dt, _) = grid.derivatives(&t_t, order)?;
    let (dx, _) = grid.derivatives(&t_x, order)?;

    let mut defect = 0.0f64;
    for k in 3..len - 3 {
        let (uk, wk, dwk) = (u[k], w[k], dw[k]);
        let ric = CurvatureFrame::from_potential(uk, v[k], dv[k], ddv[k]).ricci_normal(n);
        let b_rho =
            -wk * dr[k] - dwk * (t_r[k] - t_t[k]) - (nf - 2.0) * (wk / uk) * (t_r[k] - t_s[k])
                + 0.5 * wk * ((nf - 2.0) * ds[k] + dr[k] + dt[k]);
        let b_theta = -wk * dx[k] - 2.0 * dwk * t_x[k] - (nf - 2.0) * (wk / uk) * t_x[k];
        let drift = dv[k] + (nf - 2.0) * v[k] / uk;
        let dw2 = dwk * dwk;
        let rhs_rho = -v[k] * ar2[k] - drift * ar1[k]
            + ((nf - 2.0) * v[k] / (uk * uk) + dw2 - ric) * alpha.rho[k];
        let rhs_theta = -v[k] * at2[k] - drift * at1[k] + (dw2 - ric) * alpha.theta[k];
        defect = defect
            .max((2.0 * b_rho - rhs_rho).abs())
            .max((2.0 * b_theta - rhs_theta).abs());
    }
    Ok(defect)
}
