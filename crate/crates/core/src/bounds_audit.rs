//! Volume and injectivity-radius bookkeeping for the congruence covers.
//!
//! Exponents are carried as exact rationals; only volumes are floating
//! point. Bounds are also reported as natural logarithms, since the values
//! themselves overflow for moderate `n · i_M`.

use num_rational::Ratio;
use thiserror::Error;

use crate::numerics::{simpson, NumericsError};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum BoundsError {
    #[error("dimension must be at least {min}, got {n}")]
    DimensionTooSmall { n: usize, min: usize },
    #[error("{name} must be non-negative and finite, got {value}")]
    Negative { name: &'static str, value: f64 },
    #[error("{name} must be positive and finite, got {value}")]
    NonPositive { name: &'static str, value: f64 },
    #[error(transparent)]
    Numerics(#[from] NumericsError),
}

fn positive(name: &'static str, value: f64) -> Result<f64, BoundsError> {
    if value > 0.0 && value.is_finite() {
        Ok(value)
    } else {
        Err(BoundsError::NonPositive { name, value })
    }
}

fn non_negative(name: &'static str, value: f64) -> Result<f64, BoundsError> {
    if value >= 0.0 && value.is_finite() {
        Ok(value)
    } else {
        Err(BoundsError::Negative { name, value })
    }
}

fn min_dimension(n: usize, min: usize) -> Result<(), BoundsError> {
    if n < min {
        Err(BoundsError::DimensionTooSmall { n, min })
    } else {
        Ok(())
    }
}

/// Volume growth rate `n(n+1)/4` in the injectivity radius.
pub fn murillo_rate(n: usize) -> Ratio<i64> {
    let n = n as i64;
    Ratio::new(n * (n + 1), 4)
}

/// `A · exp(n(n+1)/4 · i_M)`.
pub fn murillo_bound(n: usize, i_m: f64, a: f64) -> Result<f64, BoundsError> {
    min_dimension(n, 2)?;
    non_negative("injectivity radius", i_m)?;
    positive("A", a)?;
    Ok(a * (rational_to_f64(murillo_rate(n)) * i_m).exp())
}

/// Exponent picked up from the tube volumes: `(3 − 2n)/2`.
pub fn tube_rate(n: usize) -> Ratio<i64> {
    Ratio::new(3 - 2 * n as i64, 2)
}

/// Target rate `(n² − 3n + 6)/4`.
pub fn sigma_rate(n: usize) -> Ratio<i64> {
    let n = n as i64;
    Ratio::new(n * n - 3 * n + 6, 4)
}

/// Exact check of `n(n+1)/4 + (3 − 2n)/2 = (n² − 3n + 6)/4`.
pub fn exponent_identity(n: usize) -> Result<bool, BoundsError> {
    min_dimension(n, 4)?;
    Ok(murillo_rate(n) + tube_rate(n) == sigma_rate(n))
}

fn rational_to_f64(r: Ratio<i64>) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

/// Simpson intervals used for `∫ cosh^{n−1}`; enough to resolve the
/// exponential growth rate `n − 1` over the interval.
fn tube_intervals(r: f64, n: usize) -> usize {
    let k = (200.0 * (1.0 + r * (n as f64 - 1.0))).ceil() as usize;
    k + k % 2
}

/// `vol_H · ∫_{−r}^{r} cosh^{n−1}(t) dt`.
pub fn hypersurface_tube_volume(vol_h: f64, r: f64, n: usize) -> Result<f64, BoundsError> {
    min_dimension(n, 2)?;
    positive("hypersurface volume", vol_h)?;
    non_negative("tube radius", r)?;
    if r == 0.0 {
        return Ok(0.0);
    }
    let p = n as i32 - 1;
    let half = simpson(|t| t.cosh().powi(p), 0.0, r, tube_intervals(r, n))?;
    Ok(2.0 * vol_h * half)
}

/// Large-`r` asymptote `vol_H · 2^{2−n} e^{(n−1)r}/(n−1)` of the hypersurface tube.
pub fn hypersurface_tube_asymptote(vol_h: f64, r: f64, n: usize) -> f64 {
    let nf = n as f64;
    vol_h * 2f64.powf(2.0 - nf) * ((nf - 1.0) * r).exp() / (nf - 1.0)
}

/// `2π · vol_Σ · (U^{n−1} − 1)/(n − 1)`: the volume element `u^{n−2} du dθ dvol_Σ`
/// integrated over `1 ≤ u ≤ U`.
pub fn codim2_tube_volume(vol_sigma: f64, u: f64, n: usize) -> Result<f64, BoundsError> {
    min_dimension(n, 3)?;
    positive("submanifold volume", vol_sigma)?;
    if !(u >= 1.0 && u.is_finite()) {
        return Err(BoundsError::NonPositive {
            name: "U − 1",
            value: u - 1.0,
        });
    }
    let nf = n as f64;
    Ok(2.0 * std::f64::consts::PI * vol_sigma * (u.powi(n as i32 - 1) - 1.0) / (nf - 1.0))
}

/// `vol(Σ) ≲ U_max⁵` in dimension four, with `U_max = cosh(i_M/2)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct UmaxForm {
    pub u_max: f64,
    pub ln_u_max_fifth: f64,
    /// `5 · ½ = 5/2` checked exactly against the chain rate.
    pub rate_consistent: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct BoundChainReport {
    pub n: usize,
    pub i_m: f64,
    /// `ln` of the Murillo bound on `vol(M)`.
    pub ln_murillo: f64,
    /// `ln` of the bound on `vol(H)` from `vol(H) e^{(n−1)i} ≤ A₁ vol(M)`.
    pub ln_hypersurface: f64,
    /// `ln` of the bound on `vol(Σ)` from `vol(Σ) ≤ A₂ vol(H) e^{i/2}`.
    pub ln_codim2: f64,
    /// `ln` of `A A₁ A₂ e^{(n² − 3n + 6)/4 · i}`, computed directly.
    pub ln_sigma: f64,
    pub murillo_rate: Ratio<i64>,
    pub tube_rate: Ratio<i64>,
    pub sigma_rate: Ratio<i64>,
    pub identity_holds: bool,
    pub u_max_form: Option<UmaxForm>,
}

impl BoundChainReport {
    pub fn sigma_bound(&self) -> f64 {
        self.ln_sigma.exp()
    }
}

pub fn bound_chain(
    n: usize,
    i_m: f64,
    a: f64,
    a1: f64,
    a2: f64,
) -> Result<BoundChainReport, BoundsError> {
    min_dimension(n, 4)?;
    non_negative("injectivity radius", i_m)?;
    for (name, v) in [("A", a), ("A1", a1), ("A2", a2)] {
        positive(name, v)?;
    }
    let nf = n as f64;
    let ln_murillo = a.ln() + rational_to_f64(murillo_rate(n)) * i_m;
    let ln_hypersurface = a1.ln() + ln_murillo - (nf - 1.0) * i_m;
    let ln_codim2 = a2.ln() + ln_hypersurface + 0.5 * i_m;
    let ln_sigma = (a * a1 * a2).ln() + rational_to_f64(sigma_rate(n)) * i_m;
    let u_max_form = (n == 4).then(|| {
        let u_max = (0.5 * i_m).cosh();
        UmaxForm {
            u_max,
            ln_u_max_fifth: 5.0 * u_max.ln(),
            rate_consistent: Ratio::new(5, 1) * Ratio::new(1, 2) == sigma_rate(4),
        }
    });
    Ok(BoundChainReport {
        n,
        i_m,
        ln_murillo,
        ln_hypersurface,
        ln_codim2,
        ln_sigma,
        murillo_rate: murillo_rate(n),
        tube_rate: tube_rate(n),
        sigma_rate: sigma_rate(n),
        identity_holds: exponent_identity(n)?,
        u_max_form,
    })
}
