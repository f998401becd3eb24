//! Damped Newton iteration for the reduced Einstein equation
//! `V′ + (n−3)V/u = (n−1)u − (n−3)/u` with a left Dirichlet datum.
//!
//! The unknown is `W = √V`. Each cell carries the integrated form
//! `Δ(u^{n−3}W²) = Δ(u^{n−1} − u^{n−3})`, which the model family satisfies
//! exactly, so the discrete solution lies on the family at the nodes.

use super::SolverError;
use crate::model_geometry::ricci_residual;
use crate::numerics::FdOrder;
use crate::profile::{Provenance, RadialProfile};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct NewtonConfig {
    pub max_iterations: usize,
    pub tolerance: f64,
    /// Bound on `sup |G|` after convergence; `None` skips the check.
    pub g_tolerance: Option<f64>,
    pub max_halvings: usize,
}

impl Default for NewtonConfig {
    fn default() -> Self {
        Self {
            max_iterations: 30,
            tolerance: 1e-10,
            g_tolerance: Some(1e-8),
            max_halvings: 40,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct NewtonReport {
    pub profile: RadialProfile,
    /// `sup |residual|` before each step and after the last one.
    pub history: Vec<f64>,
    pub iterations: usize,
    /// `sup |G|` of the solution, from fourth-order differences.
    pub g_residual: f64,
}

fn residual(u: &[f64], w: &[f64], n: usize, left: f64) -> Vec<f64> {
    let k = n as i32 - 3;
    let mut r = Vec::with_capacity(u.len());
    r.push(w[0] * w[0] - left);
    for i in 0..u.len() - 1 {
        let (a, b) = (u[i], u[i + 1]);
        let y = b.powi(k) * w[i + 1] * w[i + 1] - a.powi(k) * w[i] * w[i];
        let p = (b.powi(n as i32 - 1) - b.powi(k)) - (a.powi(n as i32 - 1) - a.powi(k));
        let mid = 0.5 * (a + b);
        r.push((y - p) / ((b - a) * mid.powi(k)));
    }
    r
}

fn sup(v: &[f64]) -> f64 {
    v.iter().fold(0.0, |m, x| m.max(x.abs()))
}

/// Newton step `δ` solving the lower-bidiagonal system `J δ = −r`.
fn newton_step(u: &[f64], w: &[f64], n: usize, r: &[f64]) -> Vec<f64> {
    let k = n as i32 - 3;
    let mut d = vec![0.0; w.len()];
    d[0] = -r[0] / (2.0 * w[0]);
    for i in 0..u.len() - 1 {
        let (a, b) = (u[i], u[i + 1]);
        let den = (b - a) * (0.5 * (a + b)).powi(k);
        let diag = 2.0 * b.powi(k) * w[i + 1] / den;
        let sub = -2.0 * a.powi(k) * w[i] / den;
        d[i + 1] = (-r[i + 1] - sub * d[i]) / diag;
    }
    d
}

pub fn newton_solve(
    initial: &RadialProfile,
    left_value: f64,
    cfg: &NewtonConfig,
) -> Result<NewtonReport, SolverError> {
    let n = initial.n;
    let u = initial.nodes();
    if u.len() < 6 {
        return Err(SolverError::TooFewNodes {
            min: 6,
            got: u.len(),
        });
    }
    if !(left_value > 0.0) {
        return Err(SolverError::ConeTip { u: u[0] });
    }
    let mut w: Vec<f64> = initial.v.iter().map(|v| v.sqrt()).collect();
    let mut r = residual(u, &w, n, left_value);
    let mut history = vec![sup(&r)];
    let mut iterations = 0;
    while *history.last().expect("non-empty") >= cfg.tolerance {
        if iterations == cfg.max_iterations {
            return Err(SolverError::Stagnation {
                iterations,
                residual: *history.last().expect("non-empty"),
            });
        }
        let step = newton_step(u, &w, n, &r);
        let current = *history.last().expect("non-empty");
        let mut lambda = 1.0;
        let mut accepted = None;
        let mut tip = None;
        for _ in 0..=cfg.max_halvings {
            let trial: Vec<f64> = w.iter().zip(&step).map(|(x, d)| x + lambda * d).collect();
            lambda *= 0.5;
            if let Some(k) = trial.iter().position(|x| !(*x > 0.0)) {
                tip = Some(u[k]);
                continue;
            }
            let tr = residual(u, &trial, n, left_value);
            let norm = sup(&tr);
            if norm < current || norm < cfg.tolerance {
                accepted = Some((trial, tr, norm));
                break;
            }
        }
        let (nw, nr, norm) = match (accepted, tip) {
            (Some(x), _) => x,
            (None, Some(u)) => return Err(SolverError::ConeTip { u }),
            (None, None) => {
                return Err(SolverError::Stagnation {
                    iterations,
                    residual: current,
                })
            }
        };
        w = nw;
        r = nr;
        history.push(norm);
        iterations += 1;
    }
    let v: Vec<f64> = w.iter().map(|x| x * x).collect();
    let profile = RadialProfile::new(n, initial.grid.clone(), v, Provenance::Numeric)?;
    let g_residual = sup(&ricci_residual(&profile, FdOrder::Fourth)?.g);
    if let Some(tol) = cfg.g_tolerance {
        if g_residual > tol {
            return Err(SolverError::SecondComponent {
                value: g_residual,
                tol,
            });
        }
    }
    Ok(NewtonReport {
        profile,
        history,
        iterations,
        g_residual,
    })
}

/// Least-squares fit of `V = u² − 1 + a u^{3−n}`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FamilyFit {
    pub a: f64,
    /// `sup |V − V_a|` over the nodes.
    pub residual: f64,
}

pub fn family_fit(profile: &RadialProfile) -> FamilyFit {
    let e = 3 - profile.n as i32;
    let (mut num, mut den) = (0.0, 0.0);
    for (u, v) in profile.nodes().iter().zip(&profile.v) {
        let basis = u.powi(e);
        num += (v - u * u + 1.0) * basis;
        den += basis * basis;
    }
    let a = num / den;
    let residual = profile
        .nodes()
        .iter()
        .zip(&profile.v)
        .map(|(u, v)| (v - (u * u - 1.0 + a * u.powi(e))).abs())
        .fold(0.0, f64::max);
    FamilyFit { a, residual }
}
