//! Approximately Einstein metrics obtained by gluing the model potential to
//! the hyperbolic one, together with their Einstein error, the weight
//! function `w` and weighted sup norms.
//!
//! The cutoff is the septic smoothstep, which is `C³`: its first three
//! derivatives vanish at both junctions. The `G` error coefficient contains
//! `χ″`, and a finite-difference check of it sees `χ‴`, so `C³` is what keeps
//! that check second-order accurate in the max norm.

use thiserror::Error;

use crate::model_geometry::{ModelError, ModelParams};
use crate::numerics::{d1, FdOrder, GridScheme, NumericsError, RadialGrid};
use crate::profile::{ProfileError, RadialProfile};

pub use crate::profile::{Provenance, ResidualPair};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ApproxError {
    #[error("gluing exponent α must lie in (0, 1/4), got {0}")]
    AlphaOutOfRange(f64),
    #[error("weight exponent α must be non-negative, got {0}")]
    NegativeAlpha(f64),
    #[error("U_max must exceed 4, got {0}")]
    UMaxTooSmall(f64),
    #[error("gluing parameter U must be positive, got {0}")]
    NonPositiveGlue(f64),
    #[error("value/grid length mismatch: {values} vs {nodes}")]
    LengthMismatch { values: usize, nodes: usize },
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Profile(#[from] ProfileError),
    #[error(transparent)]
    Numerics(#[from] NumericsError),
}

/// Derivative bounds of the cutoff `χ`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CutoffSpec {
    pub sup_d1: f64,
    pub sup_d2: f64,
}

pub const CUTOFF: CutoffSpec = CutoffSpec {
    // 280 · max x³(1−x)³ = 280/64
    sup_d1: 35.0 / 8.0,
    // 1680 · max |x²(1−x)²(1−2x)|, attained at x = (5 ± √5)/10
    sup_d2: 336.0 * 2.236_067_977_499_79 / 25.0,
};

fn smooth_var(t: f64) -> f64 {
    (2.0 * t - 1.0).clamp(0.0, 1.0)
}

/// `χ(t)`: 1 on `(−∞, 1/2]`, 0 on `[1, ∞)`.
pub fn cutoff(t: f64) -> f64 {
    let step = |x: f64| x * x * x * x * (35.0 - 84.0 * x + 70.0 * x * x - 20.0 * x * x * x);
    let x = smooth_var(t);
    // step(x) + step(1 − x) = 1; evaluate the small side to avoid cancellation
    if x <= 0.5 {
        1.0 - step(x)
    } else {
        step(1.0 - x)
    }
}

pub fn cutoff_d1(t: f64) -> f64 {
    let x = smooth_var(t);
    let y = x * (1.0 - x);
    -280.0 * y * y * y
}

pub fn cutoff_d2(t: f64) -> f64 {
    let x = smooth_var(t);
    let y = x * (1.0 - x);
    -1680.0 * y * y * (1.0 - 2.0 * x)
}

pub fn cutoff_d3(t: f64) -> f64 {
    let x = smooth_var(t);
    let y = x * (1.0 - x);
    let z = 1.0 - 2.0 * x;
    -6720.0 * y * (z * z - y)
}

/// `V(u) = u² − 1 + a u^{3−n} χ(u/U)`.
pub fn interpolated_v(u: f64, a: f64, n: usize, u_glue: f64) -> f64 {
    u * u - 1.0 + a * u.powi(3 - n as i32) * cutoff(u / u_glue)
}

/// Closed-form Einstein error `(F, G)` of the interpolated potential.
pub fn einstein_error(u: f64, a: f64, n: usize, u_glue: f64) -> (f64, f64) {
    let t = u / u_glue;
    let (c1, c2) = (cutoff_d1(t), cutoff_d2(t));
    let p = u.powi(2 - n as i32);
    let f = -a * p * c1 / u_glue;
    let g = 0.5 * (n as f64 - 4.0) * a * p * c1 / u_glue - 0.5 * a * p * u * c2 / (u_glue * u_glue);
    (f, g)
}

/// Closed-form `(F, G)` sampled on a grid.
pub fn einstein_error_on(grid: &RadialGrid, a: f64, n: usize, u_glue: f64) -> ResidualPair {
    let u = grid.nodes().to_vec();
    let (f, g) = u.iter().map(|&x| einstein_error(x, a, n, u_glue)).unzip();
    ResidualPair { u, f, g }
}

/// Default number of samples for sup norms over the gluing region.
pub const ERROR_SAMPLES: usize = 4001;

/// Weighting for [`error_sup_norm`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ErrorWeight {
    pub alpha: f64,
    pub u_max: f64,
}

/// `sup max(|F|, |G|)`, optionally times `w^α`, over `samples` points of the
/// support `[U/2, U]`.
pub fn error_sup_norm(
    a: f64,
    n: usize,
    u_glue: f64,
    weight_spec: Option<ErrorWeight>,
    samples: usize,
) -> Result<f64, ApproxError> {
    if !(u_glue > 0.0) {
        return Err(ApproxError::NonPositiveGlue(u_glue));
    }
    if let Some(w) = weight_spec {
        if w.alpha < 0.0 {
            return Err(ApproxError::NegativeAlpha(w.alpha));
        }
        check_u_max(w.u_max)?;
    }
    let grid = RadialGrid::new(0.5 * u_glue, u_glue, samples.max(3), GridScheme::Uniform)?;
    Ok(grid
        .nodes()
        .iter()
        .map(|&u| {
            let (f, g) = einstein_error(u, a, n, u_glue);
            let scale = weight_spec.map_or(1.0, |w| weight(u, w.u_max).powf(w.alpha));
            f.abs().max(g.abs()) * scale
        })
        .fold(0.0, f64::max))
}

/// `sup |u∂_u F|` and `sup |u∂_u G|` over the gluing region, by a
/// fourth-order difference in `ln u`.
pub fn scaled_error_derivative_sup(
    a: f64,
    n: usize,
    u_glue: f64,
    samples: usize,
) -> Result<(f64, f64), ApproxError> {
    let grid = RadialGrid::new(0.5 * u_glue, u_glue, samples.max(6), GridScheme::LogUniform)?;
    let e = einstein_error_on(&grid, a, n, u_glue);
    let df = d1(&e.f, grid.h(), FdOrder::Fourth);
    let dg = d1(&e.g, grid.h(), FdOrder::Fourth);
    let sup = |v: &[f64]| v.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    Ok((sup(&df), sup(&dg)))
}

/// Hermite polynomial on `τ ∈ [0, 1]` (highest degree first) matching
/// `½·2^τ` to fourth order at `τ = 0` and the constant 1 to fourth order at
/// `τ = 1`; monotone on `[0, 1]`.
const WEIGHT_POLY: [f64; 10] = [
    20.924_656_201_791_833,
    -92.950_203_184_888_92,
    156.528_191_692_687_68,
    -118.597_451_343_098_76,
    34.095_558_670_862_42,
    0.004_809_064_553_814_238_6,
    0.027_752_054_332_410_79,
    0.120_113_253_479_550_36,
    0.346_573_590_279_972_65,
    0.5,
];

/// `k`-th derivative of the weight polynomial at `τ`.
fn weight_poly_deriv(tau: f64, k: usize) -> f64 {
    let deg = WEIGHT_POLY.len() - 1;
    let mut acc = 0.0;
    for (i, c) in WEIGHT_POLY.iter().enumerate() {
        let p = deg - i;
        if p < k {
            continue;
        }
        let falling: f64 = (0..k).map(|j| (p - j) as f64).product();
        acc = acc * tau + c * falling;
    }
    acc
}

fn check_u_max(u_max: f64) -> Result<(), ApproxError> {
    if u_max > 4.0 && u_max.is_finite() {
        Ok(())
    } else {
        Err(ApproxError::UMaxTooSmall(u_max))
    }
}

/// `w(u)`: `u` below `U_max/2`, `U_max` above `U_max`, smoothed in `ln u`
/// in between.
pub fn weight(u: f64, u_max: f64) -> f64 {
    if u <= 0.5 * u_max {
        u
    } else if u >= u_max {
        u_max
    } else {
        let tau = (2.0 * u / u_max).ln() / std::f64::consts::LN_2;
        u_max * weight_poly_deriv(tau, 0)
    }
}

/// `u^m ∂_u^m w` for `m ≤ 4`.
pub fn weight_scaled_derivative(u: f64, u_max: f64, m: usize) -> f64 {
    assert!(m <= 4, "derivative order up to 4");
    if m == 0 {
        return weight(u, u_max);
    }
    if u <= 0.5 * u_max {
        return if m == 1 { u } else { 0.0 };
    }
    if u >= u_max {
        return 0.0;
    }
    // u^m ∂_u^m = D(D − 1)⋯(D − m + 1) with D = u∂_u = ∂_τ / ln 2
    const FALLING: [[f64; 5]; 5] = [
        [1.0, 0.0, 0.0, 0.0, 0.0],
        [0.0, 1.0, 0.0, 0.0, 0.0],
        [0.0, -1.0, 1.0, 0.0, 0.0],
        [0.0, 2.0, -3.0, 1.0, 0.0],
        [0.0, -6.0, 11.0, -6.0, 1.0],
    ];
    let tau = (2.0 * u / u_max).ln() / std::f64::consts::LN_2;
    let mut acc = 0.0;
    for (k, c) in FALLING[m].iter().enumerate().skip(1) {
        if *c != 0.0 {
            acc += c * weight_poly_deriv(tau, k) / std::f64::consts::LN_2.powi(k as i32);
        }
    }
    u_max * acc
}

/// `sup |u^m ∂_u^m w| / U_max` over the smoothing region, for `m = 1..=4`.
pub fn weight_derivative_report(u_max: f64, samples: usize) -> Result<[f64; 4], ApproxError> {
    check_u_max(u_max)?;
    let grid = RadialGrid::new(0.5 * u_max, u_max, samples.max(3), GridScheme::LogUniform)?;
    let mut out = [0.0f64; 4];
    for &u in grid.nodes() {
        for (m, slot) in out.iter_mut().enumerate() {
            *slot = (*slot).max((weight_scaled_derivative(u, u_max, m + 1) / u_max).abs());
        }
    }
    Ok(out)
}

/// `sup w(u)^α |s(u)|`.
pub fn weighted_sup_norm(u: &[f64], s: &[f64], alpha: f64, u_max: f64) -> Result<f64, ApproxError> {
    if alpha < 0.0 {
        return Err(ApproxError::NegativeAlpha(alpha));
    }
    if u.len() != s.len() {
        return Err(ApproxError::LengthMismatch {
            values: s.len(),
            nodes: u.len(),
        });
    }
    check_u_max(u_max)?;
    Ok(u.iter()
        .zip(s)
        .map(|(&x, v)| weight(x, u_max).powf(alpha) * v.abs())
        .fold(0.0, f64::max))
}

/// Gluing parameter `U = U_max^e` for a weight exponent `α`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GluingChoice {
    pub u_glue: f64,
    pub exponent: f64,
    /// `5/4 + α − 3e/2`; negative, so `U^{−3/2} U_max^{5/4+α} → 0`.
    pub decay_exponent: f64,
    /// Lower end `5/6 + 2α/3` of the admissible window for `e`.
    pub lower: f64,
    /// `U ≤ U_max/2` once `U_max` reaches this value.
    pub threshold: f64,
}

impl GluingChoice {
    pub fn within_half(&self, u_max: f64) -> bool {
        u_max >= self.threshold
    }
}

/// Picks `e` as the midpoint of `(5/6 + 2α/3, 1)`, lowered to 0.99 when that
/// keeps the decay exponent negative.
pub fn choose_gluing_parameter(u_max: f64, alpha: f64) -> Result<GluingChoice, ApproxError> {
    if !(alpha > 0.0 && alpha < 0.25) {
        return Err(ApproxError::AlphaOutOfRange(alpha));
    }
    if !(u_max > 1.0 && u_max.is_finite()) {
        return Err(ApproxError::UMaxTooSmall(u_max));
    }
    let decay = |e: f64| 1.25 + alpha - 1.5 * e;
    let lower = 5.0 / 6.0 + 2.0 * alpha / 3.0;
    let mid = 0.5 * (lower + 1.0);
    let exponent = if mid > 0.99 && decay(0.99) < 0.0 {
        0.99
    } else {
        mid
    };
    Ok(GluingChoice {
        u_glue: u_max.powf(exponent),
        exponent,
        decay_exponent: decay(exponent),
        lower,
        threshold: 2f64.powf(1.0 / (1.0 - exponent)),
    })
}

/// Curvature frames of a profile, from fourth-order differences of `V`.
pub fn profile_curvature(
    profile: &RadialProfile,
) -> Result<Vec<crate::model_geometry::CurvatureFrame>, ApproxError> {
    let (dv, ddv) = profile.grid.derivatives(&profile.v, FdOrder::Fourth)?;
    Ok(profile
        .nodes()
        .iter()
        .enumerate()
        .map(|(k, &u)| {
            crate::model_geometry::CurvatureFrame::from_potential(u, profile.v[k], dv[k], ddv[k])
        })
        .collect())
}

/// Interpolated profile for `params` glued at `U` on a log-uniform grid
/// starting `guard · u_a` above the tip.
pub fn interpolated_profile(
    params: &ModelParams,
    u_glue: f64,
    u_max: f64,
    nodes: usize,
    guard: f64,
) -> Result<RadialProfile, ApproxError> {
    let u_a = crate::model_geometry::largest_root(params)?;
    let grid = RadialGrid::new(u_a * (1.0 + guard), u_max, nodes, GridScheme::LogUniform)?;
    Ok(RadialProfile::interpolated(
        params.n, params.a, u_glue, grid,
    )?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cutoff_values() {
        assert_eq!(cutoff(0.25), 1.0);
        assert_eq!(cutoff(1.5), 0.0);
        assert!((cutoff(0.75) - 0.5).abs() < 1e-15);
        for t in [0.5, 1.0] {
            assert_eq!(cutoff_d1(t), 0.0);
            assert_eq!(cutoff_d2(t), 0.0);
            assert_eq!(cutoff_d3(t), 0.0);
        }
    }

    #[test]
    fn cutoff_derivatives_match_differences() {
        let h = 1e-6;
        for k in 1..50 {
            let t = 0.5 + k as f64 / 100.0;
            let fd1 = (cutoff(t + h) - cutoff(t - h)) / (2.0 * h);
            let fd2 = (cutoff_d1(t + h) - cutoff_d1(t - h)) / (2.0 * h);
            let fd3 = (cutoff_d2(t + h) - cutoff_d2(t - h)) / (2.0 * h);
            assert!((fd1 - cutoff_d1(t)).abs() < 1e-8, "t={t}");
            assert!((fd2 - cutoff_d2(t)).abs() < 1e-6, "t={t}");
            assert!((fd3 - cutoff_d3(t)).abs() < 1e-4, "t={t}");
        }
    }

    #[test]
    fn cutoff_bounds_by_sampling() {
        let mut m1 = 0.0f64;
        let mut m2 = 0.0f64;
        let mut prev = 1.0;
        for k in 0..=200_000 {
            let t = 0.5 + 0.5 * k as f64 / 200_000.0;
            m1 = m1.max(cutoff_d1(t).abs());
            m2 = m2.max(cutoff_d2(t).abs());
            assert!(cutoff(t) <= prev + 1e-14);
            prev = cutoff(t);
        }
        assert!((m1 - CUTOFF.sup_d1).abs() < 1e-9);
        assert!((m2 - CUTOFF.sup_d2).abs() < 1e-6);
    }

    #[test]
    fn interpolated_v_examples() {
        let (a, n, big_u) = (0.315330, 4, 10.0);
        let u = 2.5;
        assert_eq!(interpolated_v(u, a, n, big_u), u * u - 1.0 + a / u);
        assert_eq!(interpolated_v(20.0, a, n, big_u), 399.0);
        assert!((interpolated_v(7.5, a, n, big_u) - 55.27102).abs() < 1e-5);
    }

    #[test]
    fn error_support_and_reduction() {
        for n in 4..=6 {
            for u in [1.0, 4.99, 10.01, 30.0] {
                assert_eq!(einstein_error(u, 0.3, n, 10.0), (0.0, 0.0));
            }
        }
        let (u, a, big_u) = (7.0, 0.3, 10.0);
        let (f, g) = einstein_error(u, a, 4, big_u);
        assert!((f + a / (u * u) / big_u * cutoff_d1(0.7)).abs() < 1e-16);
        assert!((g + 0.5 * a / u / (big_u * big_u) * cutoff_d2(0.7)).abs() < 1e-16);
        assert_eq!(error_sup_norm(0.0, 4, 10.0, None, 101).unwrap(), 0.0);
    }

    #[test]
    fn weight_shape_and_smoothness() {
        let um = 1000.0;
        assert_eq!(weight(250.0, um), 250.0);
        assert_eq!(weight(2000.0, um), um);
        assert!((weight(500.0 + 1e-9, um) - 500.0).abs() < 1e-6);
        assert!((weight(um - 1e-9, um) - um).abs() < 1e-6);
        let mut prev = 0.0;
        for k in 0..=10_000 {
            let u = 400.0 + 0.07 * k as f64;
            let w = weight(u, um);
            assert!(w >= prev - 1e-9 * um, "u={u}");
            prev = w;
        }
        // derivatives are continuous across both junctions
        for m in 1..=4 {
            let inside = weight_scaled_derivative(500.0 * (1.0 + 1e-12), um, m);
            let below = weight_scaled_derivative(500.0, um, m);
            assert!((inside - below).abs() / um < 1e-6, "m={m} {inside} {below}");
            assert!(weight_scaled_derivative(um * (1.0 - 1e-12), um, m).abs() / um < 1e-6);
        }
    }

    #[test]
    fn weight_report_is_scale_free() {
        let r2 = weight_derivative_report(100.0, 2001).unwrap();
        let r4 = weight_derivative_report(10_000.0, 2001).unwrap();
        for m in 0..4 {
            assert!((r2[m] / r4[m] - 1.0).abs() < 1e-6);
        }
    }

    #[test]
    fn weighted_sup_examples() {
        let um = 100.0;
        let u: Vec<f64> = (1..400).map(|k| k as f64 * 0.5).collect();
        let s: Vec<f64> = u.iter().map(|&x| weight(x, um).powf(-0.3)).collect();
        assert!((weighted_sup_norm(&u, &s, 0.3, um).unwrap() - 1.0).abs() < 1e-12);
        let plain: f64 = s.iter().cloned().fold(0.0, f64::max);
        assert_eq!(weighted_sup_norm(&u, &s, 0.0, um).unwrap(), plain);
        assert!(weighted_sup_norm(&u, &s, -1.0, um).is_err());
    }

    #[test]
    fn gluing_parameter_examples() {
        let c = choose_gluing_parameter(1e6, 0.2).unwrap();
        assert!((c.exponent - 0.983_333_333_333).abs() < 1e-9);
        assert!((c.decay_exponent + 0.025).abs() < 1e-12);
        let c = choose_gluing_parameter(1e6, 0.1).unwrap();
        assert!((c.lower - 0.9).abs() < 1e-12);
        assert!((c.exponent - 0.95).abs() < 1e-12);
        assert!((c.decay_exponent + 0.075).abs() < 1e-12);
        let c = choose_gluing_parameter(1e100, 0.24).unwrap();
        assert!(c.decay_exponent < 0.0 && c.decay_exponent > -1e-2);
        assert!(c.within_half(1e100) && c.u_glue <= 0.5e100);
        assert!(!c.within_half(1e6));
        assert!(choose_gluing_parameter(1e6, 0.25).is_err());
        assert!(choose_gluing_parameter(1e6, 0.0).is_err());
    }
}
