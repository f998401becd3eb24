//! Radial grids, finite-difference stencils and quadrature.
//!
//! Grids are uniform in a computational coordinate `ξ`, either `ξ = u` or
//! `ξ = ln u`. Derivatives in `u` are formed from `ξ`-stencils by the chain
//! rule, so both schemes share the same stencil tables.

pub mod banded;

use thiserror::Error;

pub use banded::{BandedMatrix, BandedSym};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum NumericsError {
    #[error("grid needs at least {min} nodes, got {got}")]
    TooFewNodes { min: usize, got: usize },
    #[error("invalid grid interval [{0}, {1}]")]
    InvalidInterval(f64, f64),
    #[error("length mismatch: grid has {grid} nodes, data has {data}")]
    LengthMismatch { grid: usize, data: usize },
    #[error("quadrature needs a positive even number of intervals, got {0}")]
    BadIntervalCount(usize),
    #[error("eigenvalue bisection did not converge")]
    EigenNoConvergence,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum GridScheme {
    #[default]
    LogUniform,
    Uniform,
}

impl std::str::FromStr for GridScheme {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "log" | "log-uniform" => Ok(Self::LogUniform),
            "uniform" => Ok(Self::Uniform),
            other => Err(format!(
                "unknown grid scheme `{other}` (expected log-uniform or uniform)"
            )),
        }
    }
}

/// Accuracy of the finite-difference stencils.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum FdOrder {
    #[default]
    Second,
    Fourth,
}

impl FdOrder {
    pub fn as_int(self) -> u32 {
        match self {
            FdOrder::Second => 2,
            FdOrder::Fourth => 4,
        }
    }

    fn min_nodes(self) -> usize {
        match self {
            FdOrder::Second => 4,
            FdOrder::Fourth => 6,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct RadialGrid {
    scheme: GridScheme,
    xi0: f64,
    h: f64,
    u: Vec<f64>,
}

impl RadialGrid {
    pub fn new(
        u_min: f64,
        u_max: f64,
        nodes: usize,
        scheme: GridScheme,
    ) -> Result<Self, NumericsError> {
        if nodes < 3 {
            return Err(NumericsError::TooFewNodes { min: 3, got: nodes });
        }
        let valid = u_min.is_finite() && u_max.is_finite() && u_min < u_max;
        if !valid || (scheme == GridScheme::LogUniform && u_min <= 0.0) {
            return Err(NumericsError::InvalidInterval(u_min, u_max));
        }
        let (a, b) = match scheme {
            GridScheme::LogUniform => (u_min.ln(), u_max.ln()),
            GridScheme::Uniform => (u_min, u_max),
        };
        let h = (b - a) / (nodes - 1) as f64;
        let mut u: Vec<f64> = (0..nodes)
            .map(|k| match scheme {
                GridScheme::LogUniform => (a + h * k as f64).exp(),
                GridScheme::Uniform => a + h * k as f64,
            })
            .collect();
        // pin the endpoints so that callers can rely on exact interval ends
        u[0] = u_min;
        u[nodes - 1] = u_max;
        Ok(Self {
            scheme,
            xi0: a,
            h,
            u,
        })
    }

    pub fn nodes(&self) -> &[f64] {
        &self.u
    }

    pub fn len(&self) -> usize {
        self.u.len()
    }

    pub fn is_empty(&self) -> bool {
        self.u.is_empty()
    }

    pub fn scheme(&self) -> GridScheme {
        self.scheme
    }

    /// Spacing in the computational coordinate.
    pub fn h(&self) -> f64 {
        self.h
    }

    pub fn u_min(&self) -> f64 {
        self.u[0]
    }

    pub fn u_max(&self) -> f64 {
        self.u[self.u.len() - 1]
    }

    /// `u` at computational coordinate `ξ`.
    pub fn u_at(&self, xi: f64) -> f64 {
        match self.scheme {
            GridScheme::LogUniform => xi.exp(),
            GridScheme::Uniform => xi,
        }
    }

    /// `ξ` of node `k`.
    pub fn xi(&self, k: usize) -> f64 {
        self.xi0 + self.h * k as f64
    }

    /// `du/dξ` at `u`.
    pub fn jacobian(&self, u: f64) -> f64 {
        match self.scheme {
            GridScheme::LogUniform => u,
            GridScheme::Uniform => 1.0,
        }
    }

    /// `u` at the midpoint (in `ξ`) between nodes `k` and `k + 1`.
    pub fn midpoint(&self, k: usize) -> f64 {
        self.u_at(self.xi0 + self.h * (k as f64 + 0.5))
    }

    /// Grid with the same interval and twice as many cells; node `k` of
    /// `self` is node `2k` of the result.
    pub fn refined(&self) -> Self {
        Self::new(self.u_min(), self.u_max(), 2 * self.len() - 1, self.scheme)
            .expect("valid refinement")
    }

    fn check(&self, f: &[f64], order: FdOrder) -> Result<(), NumericsError> {
        if f.len() != self.len() {
            return Err(NumericsError::LengthMismatch {
                grid: self.len(),
                data: f.len(),
            });
        }
        if self.len() < order.min_nodes() {
            return Err(NumericsError::TooFewNodes {
                min: order.min_nodes(),
                got: self.len(),
            });
        }
        Ok(())
    }

    /// `df/du` at every node.
    pub fn d_du(&self, f: &[f64], order: FdOrder) -> Result<Vec<f64>, NumericsError> {
        self.check(f, order)?;
        let fx = d1(f, self.h, order);
        Ok(match self.scheme {
            GridScheme::LogUniform => fx.iter().zip(&self.u).map(|(d, u)| d / u).collect(),
            GridScheme::Uniform => fx,
        })
    }

    /// `(df/du, d²f/du²)` at every node.
    pub fn derivatives(
        &self,
        f: &[f64],
        order: FdOrder,
    ) -> Result<(Vec<f64>, Vec<f64>), NumericsError> {
        self.check(f, order)?;
        let fx = d1(f, self.h, order);
        let fxx = d2(f, self.h, order);
        Ok(match self.scheme {
            GridScheme::LogUniform => {
                let du = fx.iter().zip(&self.u).map(|(d, u)| d / u).collect();
                let duu = fxx
                    .iter()
                    .zip(&fx)
                    .zip(&self.u)
                    .map(|((dd, d), u)| (dd - d) / (u * u))
                    .collect();
                (du, duu)
            }
            GridScheme::Uniform => (fx, fxx),
        })
    }
}

fn apply_stencil(f: &[f64], start: usize, coeffs: &[f64]) -> f64 {
    coeffs
        .iter()
        .enumerate()
        .map(|(i, c)| c * f[start + i])
        .sum()
}

fn apply_reversed(f: &[f64], end: usize, coeffs: &[f64]) -> f64 {
    coeffs.iter().enumerate().map(|(i, c)| c * f[end - i]).sum()
}

/// First derivative on a uniform grid of spacing `h`.
pub fn d1(f: &[f64], h: f64, order: FdOrder) -> Vec<f64> {
    let n = f.len();
    let mut out = vec![0.0; n];
    match order {
        FdOrder::Second => {
            const EDGE: [f64; 3] = [-3.0, 4.0, -1.0];
            out[0] = apply_stencil(f, 0, &EDGE) / (2.0 * h);
            out[n - 1] = -apply_reversed(f, n - 1, &EDGE) / (2.0 * h);
            for k in 1..n - 1 {
                out[k] = (f[k + 1] - f[k - 1]) / (2.0 * h);
            }
        }
        FdOrder::Fourth => {
            const E0: [f64; 5] = [-25.0, 48.0, -36.0, 16.0, -3.0];
            const E1: [f64; 5] = [-3.0, -10.0, 18.0, -6.0, 1.0];
            let s = 12.0 * h;
            out[0] = apply_stencil(f, 0, &E0) / s;
            out[1] = apply_stencil(f, 0, &E1) / s;
            out[n - 1] = -apply_reversed(f, n - 1, &E0) / s;
            out[n - 2] = -apply_reversed(f, n - 1, &E1) / s;
            for k in 2..n - 2 {
                out[k] = (-f[k + 2] + 8.0 * f[k + 1] - 8.0 * f[k - 1] + f[k - 2]) / s;
            }
        }
    }
    out
}

/// Second derivative on a uniform grid of spacing `h`.
pub fn d2(f: &[f64], h: f64, order: FdOrder) -> Vec<f64> {
    let n = f.len();
    let mut out = vec![0.0; n];
    let h2 = h * h;
    match order {
        FdOrder::Second => {
            const EDGE: [f64; 4] = [2.0, -5.0, 4.0, -1.0];
            out[0] = apply_stencil(f, 0, &EDGE) / h2;
            out[n - 1] = apply_reversed(f, n - 1, &EDGE) / h2;
            for k in 1..n - 1 {
                out[k] = (f[k + 1] - 2.0 * f[k] + f[k - 1]) / h2;
            }
        }
        FdOrder::Fourth => {
            const E0: [f64; 6] = [45.0, -154.0, 214.0, -156.0, 61.0, -10.0];
            const E1: [f64; 6] = [10.0, -15.0, -4.0, 14.0, -6.0, 1.0];
            let s = 12.0 * h2;
            out[0] = apply_stencil(f, 0, &E0) / s;
            out[1] = apply_stencil(f, 0, &E1) / s;
            out[n - 1] = apply_reversed(f, n - 1, &E0) / s;
            out[n - 2] = apply_reversed(f, n - 1, &E1) / s;
            for k in 2..n - 2 {
                out[k] =
                    (-f[k + 2] + 16.0 * f[k + 1] - 30.0 * f[k] + 16.0 * f[k - 1] - f[k - 2]) / s;
            }
        }
    }
    out
}

/// Composite Simpson rule with `intervals` (even) subintervals.
pub fn simpson(
    f: impl Fn(f64) -> f64,
    a: f64,
    b: f64,
    intervals: usize,
) -> Result<f64, NumericsError> {
    if intervals == 0 || intervals % 2 == 1 {
        return Err(NumericsError::BadIntervalCount(intervals));
    }
    let h = (b - a) / intervals as f64;
    let mut acc = f(a) + f(b);
    for k in 1..intervals {
        let w = if k % 2 == 1 { 4.0 } else { 2.0 };
        acc += w * f(a + h * k as f64);
    }
    Ok(acc * h / 3.0)
}

/// Observed convergence order from errors at spacings `h` and `h/2`.
pub fn observed_order(coarse: f64, fine: f64) -> f64 {
    (coarse / fine).log2()
}

/// Bisection for a sign change of `f` on `[lo, hi]`, stopping once the bracket
/// is below `xtol` or `|f| ≤ ftol`.
pub fn bisect(
    f: impl Fn(f64) -> f64,
    mut lo: f64,
    mut hi: f64,
    xtol: f64,
    ftol: f64,
) -> Option<f64> {
    let mut flo = f(lo);
    let fhi = f(hi);
    if flo == 0.0 {
        return Some(lo);
    }
    if fhi == 0.0 {
        return Some(hi);
    }
    if flo.signum() == fhi.signum() {
        return None;
    }
    for _ in 0..400 {
        let mid = 0.5 * (lo + hi);
        let fm = f(mid);
        if fm.abs() <= ftol || (hi - lo) <= xtol || mid == lo || mid == hi {
            return Some(mid);
        }
        if fm.signum() == flo.signum() {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    Some(0.5 * (lo + hi))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn poly(x: f64, deg: i32) -> f64 {
        (0..=deg).map(|k| (k as f64 + 1.0) * x.powi(k)).sum()
    }

    fn dpoly(x: f64, deg: i32) -> f64 {
        (1..=deg)
            .map(|k| (k as f64 + 1.0) * k as f64 * x.powi(k - 1))
            .sum()
    }

    fn ddpoly(x: f64, deg: i32) -> f64 {
        (2..=deg)
            .map(|k| (k as f64 + 1.0) * (k * (k - 1)) as f64 * x.powi(k - 2))
            .sum()
    }

    #[test]
    fn stencils_are_exact_on_polynomials() {
        for (order, deg) in [(FdOrder::Second, 2), (FdOrder::Fourth, 4)] {
            let h = 0.1;
            let x: Vec<f64> = (0..12).map(|k| 0.3 + h * k as f64).collect();
            let f: Vec<f64> = x.iter().map(|&t| poly(t, deg)).collect();
            let df = d1(&f, h, order);
            let ddf = d2(&f, h, order);
            for k in 0..x.len() {
                assert!(
                    (df[k] - dpoly(x[k], deg)).abs() < 1e-9,
                    "{order:?} d1 k={k}"
                );
                assert!(
                    (ddf[k] - ddpoly(x[k], deg)).abs() < 1e-7,
                    "{order:?} d2 k={k}"
                );
            }
        }
    }

    #[test]
    fn log_grid_chain_rule_converges() {
        let mut errs = Vec::new();
        for nodes in [101, 201] {
            let g = RadialGrid::new(1.0, 5.0, nodes, GridScheme::LogUniform).unwrap();
            let f: Vec<f64> = g.nodes().iter().map(|u| u.sin()).collect();
            let (d, dd) = g.derivatives(&f, FdOrder::Fourth).unwrap();
            let e = g
                .nodes()
                .iter()
                .enumerate()
                .map(|(k, u)| (d[k] - u.cos()).abs().max((dd[k] + u.sin()).abs()))
                .fold(0.0, f64::max);
            errs.push(e);
        }
        assert!(observed_order(errs[0], errs[1]) > 3.5, "{errs:?}");
    }

    #[test]
    fn grid_endpoints_and_refinement() {
        let g = RadialGrid::new(0.7, 30.0, 11, GridScheme::LogUniform).unwrap();
        assert_eq!(g.u_min(), 0.7);
        assert_eq!(g.u_max(), 30.0);
        let r = g.refined();
        assert_eq!(r.len(), 21);
        assert!((r.nodes()[4] - g.nodes()[2]).abs() < 1e-12);
        assert!(RadialGrid::new(0.0, 1.0, 10, GridScheme::LogUniform).is_err());
        assert!(RadialGrid::new(1.0, 2.0, 2, GridScheme::Uniform).is_err());
    }

    #[test]
    fn simpson_integrates_cubics_exactly() {
        let v = simpson(|x| x * x * x - 2.0 * x, 0.0, 2.0, 2).unwrap();
        assert!((v - 0.0).abs() < 1e-14);
        assert!(simpson(|x| x, 0.0, 1.0, 3).is_err());
    }

    #[test]
    fn bisection_finds_sqrt2() {
        let r = bisect(|x| x * x - 2.0, 0.0, 2.0, 1e-15, 0.0).unwrap();
        assert!((r - std::f64::consts::SQRT_2).abs() < 1e-14);
        assert!(bisect(|x| x * x + 1.0, 0.0, 2.0, 1e-12, 0.0).is_none());
    }
}
