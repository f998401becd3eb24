//! The Einstein model family `g_a = du²/V + V dθ² + u² h`, with
//! `V(u) = u² − 1 + a u^{3−n}`, its cone data and curvature, and distances
//! in tube coordinates around a totally geodesic codimension-2 axis.
//!
//! Every curvature component of the ansatz is a function of `V`, `V′`, `V″`
//! and `u` alone. In the orthonormal coframe `(u fⁱ, du/W, W dθ)` with
//! `W = √V`, the nonzero sectional curvatures are those of the coordinate
//! 2-planes:
//!
//! * `K_S = −(1 + V)/u²` on planes tangent to the axis directions,
//! * `K_mix = −V′/(2u)` on planes mixing one axis and one normal direction,
//! * `K_ρθ = −V″/2` on the normal plane.
//!
//! The curvature operator is diagonal on these planes, so the maximal
//! sectional curvature is the largest of the three values.

use std::f64::consts::PI;

use thiserror::Error;

use crate::numerics::{bisect, FdOrder, NumericsError};
use crate::profile::{RadialProfile, ResidualPair};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ModelError {
    #[error("dimension must be at least 4, got {0}")]
    DimensionTooSmall(usize),
    #[error("branching degree must be at least 2, got {0}")]
    DegreeTooSmall(u32),
    #[error("a = {a} exceeds a_max = {a_max}: V has no positive root")]
    NoPositiveRoot { a: f64, a_max: f64 },
    #[error("u must be positive, got {0}")]
    NonPositiveU(f64),
    #[error("u = {u} is not beyond the cone tip u_a = {u_a}")]
    InsideConeTip { u: f64, u_a: f64 },
    #[error("tube coordinate u must be >= 1, got {0}")]
    TubeCoordinate(f64),
    #[error("points are closer than the cutoff {cutoff} (distance {distance})")]
    PointsTooClose { distance: f64, cutoff: f64 },
    #[error("cone coefficient check failed: closed form {closed} vs derivative {fd}")]
    ConeCheck { closed: f64, fd: f64 },
    #[error("root {0} of V is not the largest one")]
    RootNotLargest(f64),
    #[error("non-finite parameter")]
    NonFinite,
    #[error(transparent)]
    Numerics(#[from] NumericsError),
}

/// `v = √((n−3)/(n−1))`, the location of the minimum of `V` at `a = a_max`.
pub fn v_crit(n: usize) -> f64 {
    ((n as f64 - 3.0) / (n as f64 - 1.0)).sqrt()
}

/// `a_max = (2/(n−1)) v^{n−3}`.
pub fn a_max(n: usize) -> f64 {
    2.0 / (n as f64 - 1.0) * v_crit(n).powi(n as i32 - 3)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ModelParams {
    pub n: usize,
    pub a: f64,
    pub l: Option<u32>,
}

impl ModelParams {
    pub fn new(n: usize, a: f64) -> Result<Self, ModelError> {
        if n < 4 {
            return Err(ModelError::DimensionTooSmall(n));
        }
        if !a.is_finite() {
            return Err(ModelError::NonFinite);
        }
        let am = a_max(n);
        // tolerate rounding in a value computed as a_max itself
        if a > am * (1.0 + 4.0 * f64::EPSILON) {
            return Err(ModelError::NoPositiveRoot { a, a_max: am });
        }
        Ok(Self {
            n,
            a: a.min(am),
            l: None,
        })
    }

    pub fn hyperbolic(n: usize) -> Result<Self, ModelError> {
        Self::new(n, 0.0)
    }

    fn exponent(&self) -> i32 {
        3 - self.n as i32
    }
}

pub fn hyperbolic_v(u: f64) -> f64 {
    u * u - 1.0
}

/// `V(u) = u² − 1 + a u^{3−n}`.
pub fn potential_v(u: f64, p: &ModelParams) -> Result<f64, ModelError> {
    if !(u > 0.0) {
        return Err(ModelError::NonPositiveU(u));
    }
    Ok(u * u - 1.0 + p.a * u.powi(p.exponent()))
}

/// `(V, V′, V″)` in closed form.
pub fn potential_derivatives(u: f64, p: &ModelParams) -> Result<(f64, f64, f64), ModelError> {
    let v = potential_v(u, p)?;
    let k = p.exponent() as f64;
    let dv = 2.0 * u + p.a * k * u.powi(p.exponent() - 1);
    let ddv = 2.0 + p.a * k * (k - 1.0) * u.powi(p.exponent() - 2);
    Ok((v, dv, ddv))
}

/// Largest root `u_a` of `V`, by bisection on `[v, max(2, 2|a| + 2)]` where
/// `V` is increasing.
pub fn largest_root(p: &ModelParams) -> Result<f64, ModelError> {
    let lo = v_crit(p.n);
    let hi = 2.0f64.max(2.0 * p.a.abs() + 2.0);
    let f = |u: f64| u * u - 1.0 + p.a * u.powi(p.exponent());
    if f(lo) >= 0.0 {
        // only reachable at a = a_max, where V touches zero at v
        return Ok(lo);
    }
    let root = bisect(f, lo, hi, 0.0, 0.0).ok_or(ModelError::NoPositiveRoot {
        a: p.a,
        a_max: a_max(p.n),
    })?;
    if !(1..=32).all(|k| f(root + (hi - root) * k as f64 / 32.0) > 0.0) {
        return Err(ModelError::RootNotLargest(root));
    }
    Ok(root)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ConeData {
    pub u_a: f64,
    pub c_a: f64,
    pub cone_angle: f64,
}

/// `2c_a = (n−1)u_a + (3−n)/u_a`, cross-checked against `½V′(u_a)` by a
/// central difference.
pub fn cone_coefficient(p: &ModelParams) -> Result<ConeData, ModelError> {
    let u_a = largest_root(p)?;
    let n = p.n as f64;
    let c_a = 0.5 * ((n - 1.0) * u_a + (3.0 - n) / u_a);
    let h = 1e-5 * u_a.max(1.0);
    let fd = 0.25 * (potential_v(u_a + h, p)? - potential_v(u_a - h, p)?) / h;
    if (fd - c_a).abs() > 1e-8 {
        return Err(ModelError::ConeCheck { closed: c_a, fd });
    }
    Ok(ConeData {
        u_a,
        c_a,
        cone_angle: 2.0 * PI * c_a,
    })
}

/// The `a ∈ [0, a_max]` whose cone angle is `2π/l`.
pub fn solve_cone_angle(n: usize, l: u32) -> Result<ModelParams, ModelError> {
    if n < 4 {
        return Err(ModelError::DimensionTooSmall(n));
    }
    if l < 2 {
        return Err(ModelError::DegreeTooSmall(l));
    }
    let target = 1.0 / l as f64;
    let c = |a: f64| -> f64 {
        let p = ModelParams::new(n, a).expect("a within range");
        cone_coefficient(&p).map(|d| d.c_a).unwrap_or(f64::NAN) - target
    };
    let a = bisect(c, 0.0, a_max(n), 0.0, 1e-14).ok_or(ModelError::NonFinite)?;
    let mut p = ModelParams::new(n, a)?;
    p.l = Some(l);
    Ok(p)
}

/// Sectional curvatures of the three classes of coordinate 2-planes.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CurvatureFrame {
    /// Planes spanned by two axis directions.
    pub tangential: f64,
    /// The normal plane `(ρ, θ)`.
    pub normal: f64,
    /// Planes spanned by one axis and one normal direction.
    pub mixed: f64,
}

impl CurvatureFrame {
    pub fn from_potential(u: f64, v: f64, dv: f64, ddv: f64) -> Self {
        Self {
            tangential: -(1.0 + v) / (u * u),
            normal: -0.5 * ddv,
            mixed: -0.5 * dv / u,
        }
    }

    pub fn max(&self) -> f64 {
        self.tangential.max(self.normal).max(self.mixed)
    }

    pub fn min(&self) -> f64 {
        self.tangential.min(self.normal).min(self.mixed)
    }

    /// `Ric` on the axis directions, `(n−3)K_S + 2K_mix`.
    pub fn ricci_axis(&self, n: usize) -> f64 {
        (n as f64 - 3.0) * self.tangential + 2.0 * self.mixed
    }

    /// `Ric` on the normal directions, `(n−2)K_mix + K_ρθ`.
    pub fn ricci_normal(&self, n: usize) -> f64 {
        (n as f64 - 2.0) * self.mixed + self.normal
    }
}

pub fn curvature_components(u: f64, p: &ModelParams) -> Result<CurvatureFrame, ModelError> {
    let u_a = largest_root(p)?;
    if !(u > u_a) {
        return Err(ModelError::InsideConeTip { u, u_a });
    }
    let (v, dv, ddv) = potential_derivatives(u, p)?;
    Ok(CurvatureFrame::from_potential(u, v, dv, ddv))
}

/// Supremum of the sectional curvature over `u > u_a`, attained at the tip
/// by the mixed planes when `a ≥ 0`: `−1 + (n−3)/2 · a u_a^{1−n}`.
pub fn sec_max(p: &ModelParams) -> Result<f64, ModelError> {
    let u_a = largest_root(p)?;
    let (v, dv, ddv) = potential_derivatives(u_a, p)?;
    Ok(CurvatureFrame::from_potential(u_a, v, dv, ddv).max())
}

/// `V′ = (n−1)u − (n−3)/u − (n−3)V/u`.
pub fn einstein_ode_rhs(u: f64, v: f64, n: usize) -> Result<f64, ModelError> {
    if !(u > 0.0) {
        return Err(ModelError::NonPositiveU(u));
    }
    let k = n as f64 - 3.0;
    Ok((n as f64 - 1.0) * u - k / u - k * v / u)
}

/// `F = R_ii + (n−1)` and `G = R_μμ + (n−1)` from finite differences of `V`.
pub fn ricci_residual(profile: &RadialProfile, order: FdOrder) -> Result<ResidualPair, ModelError> {
    let n = profile.n;
    let (dv, ddv) = profile.grid.derivatives(&profile.v, order)?;
    let u = profile.nodes().to_vec();
    let mut f = Vec::with_capacity(u.len());
    let mut g = Vec::with_capacity(u.len());
    for k in 0..u.len() {
        let frame = CurvatureFrame::from_potential(u[k], profile.v[k], dv[k], ddv[k]);
        f.push(frame.ricci_axis(n) + (n as f64 - 1.0));
        g.push(frame.ricci_normal(n) + (n as f64 - 1.0));
    }
    Ok(ResidualPair { u, f, g })
}

/// Point in tube coordinates around the axis `Σ = H^{n−2}`: `u = cosh` of the
/// distance to `Σ`, `θ` the angle around it, and `(s, φ)` geodesic polar
/// coordinates of the foot point in `Σ`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TubePoint {
    pub u: f64,
    pub theta: f64,
    pub s: f64,
    pub phi: f64,
}

impl TubePoint {
    pub fn new(u: f64, theta: f64, s: f64, phi: f64) -> Result<Self, ModelError> {
        if !(u >= 1.0) || !u.is_finite() {
            return Err(ModelError::TubeCoordinate(u));
        }
        if !(theta.is_finite() && s.is_finite() && phi.is_finite()) {
            return Err(ModelError::NonFinite);
        }
        Ok(Self {
            u,
            theta,
            s: s.abs(),
            phi,
        })
    }

    /// The same point with its angle scaled by `l`, i.e. its image on the
    /// `l`-fold cover in the unwrapped angle.
    pub fn lifted(&self, l: u32) -> Self {
        Self {
            theta: self.theta * l as f64,
            ..*self
        }
    }
}

/// `cosh d − 1` for the tube distance, written as a sum of nonnegative
/// half-angle terms so that nearby points keep full relative accuracy.
fn tube_cosh_m1(x: &TubePoint, y: &TubePoint, angle: f64) -> f64 {
    let half_sq = |t: f64| 2.0 * (0.5 * t).sinh().powi(2);
    let half_sin_sq = |t: f64| 2.0 * (0.5 * t).sin().powi(2);
    let (rx, ry) = (x.u.acosh(), y.u.acosh());
    let foot_m1 = half_sq(x.s - y.s) + x.s.sinh() * y.s.sinh() * half_sin_sq(x.phi - y.phi);
    let radial = rx.sinh() * ry.sinh();
    x.u * y.u * foot_m1 + half_sq(rx - ry) + radial * half_sin_sq(angle)
}

/// Hyperbolic distance, `cosh d = u_x u_y cosh s − √((u_x²−1)(u_y²−1)) cos Δθ`
/// with `s` the distance between the foot points.
pub fn tube_distance(x: &TubePoint, y: &TubePoint) -> f64 {
    2.0 * (0.5 * tube_cosh_m1(x, y, x.theta - y.theta)).sqrt().asinh()
}

/// Shape of the pointwise Green's kernel bound on the `l`-fold cover,
/// `(u_x u_y cosh s − √((u_x²−1)(u_y²−1)) cos(lΔθ))^{−3}`, with unit constant.
/// Pairs closer than `cutoff` on the cover are rejected.
pub fn greens_bound(x: &TubePoint, y: &TubePoint, l: u32, cutoff: f64) -> Result<f64, ModelError> {
    let m1 = tube_cosh_m1(x, y, l as f64 * (x.theta - y.theta));
    let c = 1.0 + m1;
    let distance = 2.0 * (0.5 * m1).sqrt().asinh();
    if !(distance > cutoff) {
        return Err(ModelError::PointsTooClose { distance, cutoff });
    }
    Ok(c.powi(-3))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn potential_examples() {
        let h = ModelParams::hyperbolic(4).unwrap();
        assert_eq!(potential_v(2.0, &h).unwrap(), 3.0);
        let p = ModelParams::new(4, a_max(4)).unwrap();
        assert!(potential_v(v_crit(4), &p).unwrap().abs() < 1e-15);
        assert!((a_max(4) - 0.384900).abs() < 1e-6);
        assert!(potential_v(0.0, &h).is_err());
    }

    #[test]
    fn a_above_maximum_is_rejected() {
        assert!(matches!(
            ModelParams::new(4, 0.4),
            Err(ModelError::NoPositiveRoot { .. })
        ));
        assert!(ModelParams::new(3, 0.0).is_err());
    }

    #[test]
    fn cone_endpoints() {
        let d = cone_coefficient(&ModelParams::hyperbolic(5).unwrap()).unwrap();
        assert!((d.u_a - 1.0).abs() < 1e-15);
        assert!((d.c_a - 1.0).abs() < 1e-14);
        assert!((d.cone_angle - 2.0 * PI).abs() < 1e-13);
        for n in 4..=8 {
            let d = cone_coefficient(&ModelParams::new(n, a_max(n)).unwrap()).unwrap();
            assert!((d.u_a - v_crit(n)).abs() < 1e-8, "n={n}");
            assert!(d.c_a.abs() < 1e-7, "n={n} c={}", d.c_a);
        }
    }

    #[test]
    fn cone_solver_matches_quadratic_oracles() {
        // c = 1/2: 3u² − u − 1 = 0; c = 1/3: 9u² − 2u − 3 = 0
        for (l, u_exact) in [
            (2, (1.0 + 13f64.sqrt()) / 6.0),
            (3, (1.0 + 28f64.sqrt()) / 9.0),
        ] {
            let p = solve_cone_angle(4, l).unwrap();
            let a_exact = (1.0 - u_exact * u_exact) * u_exact;
            assert!((p.a - a_exact).abs() < 1e-12, "l={l}");
            let d = cone_coefficient(&p).unwrap();
            assert!((d.u_a - u_exact).abs() < 1e-12);
            assert!((d.c_a - 1.0 / l as f64).abs() < 1e-10);
        }
        assert!(solve_cone_angle(4, 1).is_err());
    }

    #[test]
    fn large_degree_approaches_a_max() {
        let p = solve_cone_angle(4, 1000).unwrap();
        assert!(a_max(4) - p.a < 1e-5 && p.a < a_max(4));
    }

    #[test]
    fn curvature_examples() {
        let h = ModelParams::hyperbolic(4).unwrap();
        let c = curvature_components(3.0, &h).unwrap();
        for k in [c.tangential, c.normal, c.mixed] {
            assert!((k + 1.0).abs() < 1e-14);
        }
        let p = solve_cone_angle(4, 2).unwrap();
        // at the tip a u_a^{-3} = 1/u_a² − 1 since V(u_a) = 0
        let u_a = (1.0 + 13f64.sqrt()) / 6.0;
        let exact = -1.0 + 0.5 * (1.0 / (u_a * u_a) - 1.0);
        assert!((sec_max(&p).unwrap() - exact).abs() < 1e-12);
        assert!((exact + 0.651388).abs() < 1e-6);
        let far = curvature_components(1e4, &p).unwrap();
        assert!((far.min() + 1.0).abs() < 1e-9 && (far.max() + 1.0).abs() < 1e-9);
        assert!(curvature_components(0.5, &p).is_err());
    }

    #[test]
    fn closed_form_curvature_coefficients() {
        for n in 4..=7 {
            let p = ModelParams::new(n, 0.6 * a_max(n)).unwrap();
            let (nf, a) = (n as f64, p.a);
            for u in [1.0, 1.7, 4.0] {
                let c = curvature_components(u, &p).unwrap();
                let q = a * u.powi(1 - n as i32);
                assert!((c.tangential + 1.0 + q).abs() < 1e-13);
                assert!((c.mixed - (-1.0 + (nf - 3.0) / 2.0 * q)).abs() < 1e-13);
                assert!((c.normal + 1.0 + (nf - 3.0) * (nf - 2.0) / 2.0 * q).abs() < 1e-13);
            }
        }
    }

    #[test]
    fn ode_examples() {
        assert_eq!(einstein_ode_rhs(1.0, 0.0, 4).unwrap(), 2.0);
        assert_eq!(einstein_ode_rhs(1.5, 7.0, 3).unwrap(), 3.0);
        for n in 4..=6 {
            let p = ModelParams::new(n, -0.7).unwrap();
            for u in [0.9, 2.0, 5.0] {
                let (v, dv, _) = potential_derivatives(u, &p).unwrap();
                assert!((einstein_ode_rhs(u, v, n).unwrap() - dv).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn tube_distance_examples() {
        let x = TubePoint::new(2.0, 0.0, 0.0, 0.0).unwrap();
        let y = TubePoint::new(2.0, PI, 0.0, 0.0).unwrap();
        assert!((tube_distance(&x, &y) - 7f64.acosh()).abs() < 1e-14);
        assert!((tube_distance(&x, &y) - 2.6339).abs() < 1e-4);
        assert_eq!(tube_distance(&x, &x), 0.0);
        let a = TubePoint::new(1.0, 0.3, 0.5, 0.0).unwrap();
        let b = TubePoint::new(1.0, 2.0, 2.0, 0.0).unwrap();
        assert!((tube_distance(&a, &b) - 1.5).abs() < 1e-12);
        assert!(TubePoint::new(0.9, 0.0, 0.0, 0.0).is_err());
    }

    #[test]
    fn greens_bound_examples() {
        let x = TubePoint::new(3.0, 0.0, 0.0, 0.0).unwrap();
        let y = TubePoint::new(5.0, 0.0, 0.0, 0.0).unwrap();
        let g = greens_bound(&x, &y, 1, 0.1).unwrap();
        // (15 − 8√3)^{−3}, correctly rounded
        let exact = 0.668_628_555_563_840_4_f64;
        assert!((g - exact).abs() < 1e-15, "{:e}", g - exact);
        assert!(greens_bound(&x, &x, 1, 0.1).is_err());
        // far along the axis the bound tends to 8 e^{−3s}·(u_x u_y)^{−3}
        let p = TubePoint::new(1.0, 0.0, 0.0, 0.0).unwrap();
        let q = TubePoint::new(1.0, 0.0, 30.0, 0.0).unwrap();
        let r = greens_bound(&p, &q, 2, 0.1).unwrap() / (-90.0f64).exp();
        assert!((r - 8.0).abs() < 1e-9);
    }
}
