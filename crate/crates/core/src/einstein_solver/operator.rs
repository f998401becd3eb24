//! The linearized Einstein operator `L = ½Δ_L + (n−1)` on radial diagonal
//! symmetric 2-tensors `s = σ_S Σ eⁱ⊗eⁱ + σ_ρ e^ρ⊗e^ρ + σ_θ e^θ⊗e^θ`.
//!
//! In the coframe `(u fⁱ, du/W, W dθ)` the rough Laplacian acts by
//!
//! * `(∇*∇s)_S = −u^{2−n}(u^{n−2}Vσ_S′)′ + 2(V/u²)(σ_S − σ_ρ)`
//! * `(∇*∇s)_ρ = −u^{2−n}(u^{n−2}Vσ_ρ′)′ + 2(n−2)(V/u²)(σ_ρ − σ_S) + 2W′²(σ_ρ − σ_θ)`
//! * `(∇*∇s)_θ = −u^{2−n}(u^{n−2}Vσ_θ′)′ + 2W′²(σ_θ − σ_ρ)`
//!
//! with `W′² = V′²/(4V)`, and the curvature action on diagonal tensors is
//! `Rm(s)_S = (n−3)K_Sσ_S + K_mix(σ_ρ + σ_θ)`,
//! `Rm(s)_ρ = (n−2)K_mixσ_S + K_ρθσ_θ`, `Rm(s)_θ = (n−2)K_mixσ_S + K_ρθσ_ρ`.
//! Off-diagonal components are never produced.
//!
//! These are the Euler–Lagrange operators of the energy
//! `∫ Σ_c w_c V σ_c′² + coupling` with component weights `w = (n−2, 1, 1)`
//! and volume `u^{n−2} du`. The discretization keeps that structure: fluxes
//! live at cell midpoints in the grid coordinate, so `M·A` is symmetric for
//! the diagonal mass matrix `M`. Unknowns are interleaved node by node,
//! giving a half-bandwidth of three.

use super::SolverError;
use crate::model_geometry::CurvatureFrame;
use crate::numerics::{BandedMatrix, BandedSym};
use crate::profile::RadialProfile;

/// Number of diagonal tensor components `(σ_S, σ_ρ, σ_θ)`.
pub const COMPONENTS: usize = 3;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OperatorKind {
    RoughLaplacian,
    LinearizedEinstein,
    /// `½Δφ + (n−1)φ` on functions.
    Scalar,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BoundaryCondition {
    /// All components vanish at both ends of the grid.
    Dirichlet,
}

/// Grid functions `(σ_S, σ_ρ, σ_θ)` on the full grid.
#[derive(Clone, Debug, PartialEq)]
pub struct SymmetricTensorProfile {
    pub sigma_s: Vec<f64>,
    pub sigma_rho: Vec<f64>,
    pub sigma_theta: Vec<f64>,
}

impl SymmetricTensorProfile {
    pub fn pure_trace(phi: &[f64]) -> Self {
        Self {
            sigma_s: phi.to_vec(),
            sigma_rho: phi.to_vec(),
            sigma_theta: phi.to_vec(),
        }
    }

    /// Interleaved vector of interior values.
    pub fn interior_vector(&self) -> Vec<f64> {
        let n = self.sigma_s.len();
        (1..n - 1)
            .flat_map(|k| [self.sigma_s[k], self.sigma_rho[k], self.sigma_theta[k]])
            .collect()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct OperatorMatrix {
    pub kind: OperatorKind,
    pub bc: BoundaryCondition,
    pub n: usize,
    /// Interior nodes carrying unknowns.
    pub nodes: Vec<f64>,
    pub components: usize,
    pub matrix: BandedMatrix,
    /// Diagonal of the discrete inner product, one entry per unknown.
    pub mass: Vec<f64>,
}

impl OperatorMatrix {
    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }

    pub fn apply(&self, x: &[f64]) -> Vec<f64> {
        self.matrix.apply(x)
    }

    /// `max |M_i A_ij − M_j A_ji|` relative to `max |M_i A_ij|`.
    pub fn weighted_asymmetry(&self) -> f64 {
        let (mut worst, mut scale) = (0.0f64, 0.0f64);
        for i in 0..self.dim() {
            for (j, a) in self.matrix.row(i) {
                let lhs = self.mass[i] * a;
                let rhs = self.mass[j] * self.matrix.get(j, i);
                worst = worst.max((lhs - rhs).abs());
                scale = scale.max(lhs.abs());
            }
        }
        if scale == 0.0 {
            0.0
        } else {
            worst / scale
        }
    }

    /// `M^{−1/2} · sym(M A) · M^{−1/2}`, whose spectrum is that of the
    /// symmetric part of `A` in the weighted inner product.
    pub fn symmetrized(&self) -> BandedSym {
        let bw = self.matrix.bandwidth();
        let mut b = BandedSym::zeros(self.dim(), bw);
        for i in 0..self.dim() {
            for (j, a) in self.matrix.row(i) {
                if j > i {
                    continue;
                }
                let sym = 0.5 * (self.mass[i] * a + self.mass[j] * self.matrix.get(j, i));
                b.set(i, j, sym / (self.mass[i] * self.mass[j]).sqrt());
            }
        }
        b
    }

    /// Weighted inner product `Σ M_i x_i y_i`.
    pub fn inner(&self, x: &[f64], y: &[f64]) -> f64 {
        self.mass
            .iter()
            .zip(x)
            .zip(y)
            .map(|((m, a), b)| m * a * b)
            .sum()
    }
}

struct Background {
    u: Vec<f64>,
    v: Vec<f64>,
    frames: Vec<CurvatureFrame>,
    /// `W′² = V′²/(4V)`.
    dw2: Vec<f64>,
    /// `u^{n−2}V/J` at the midpoint after each node.
    flux: Vec<f64>,
    /// `u^{n−2} J h²` at each node.
    volume: Vec<f64>,
    mass_volume: Vec<f64>,
}

fn background(profile: &RadialProfile) -> Result<Background, SolverError> {
    let grid = &profile.grid;
    let len = grid.len();
    if len < 6 {
        return Err(SolverError::TooFewNodes { min: 6, got: len });
    }
    let n = profile.n as i32;
    let (dv, ddv) = profile.derivatives()?;
    let u = profile.nodes().to_vec();
    let h = grid.h();
    let frames = (0..len)
        .map(|k| CurvatureFrame::from_potential(u[k], profile.v[k], dv[k], ddv[k]))
        .collect();
    let dw2 = (0..len)
        .map(|k| dv[k] * dv[k] / (4.0 * profile.v[k]))
        .collect();
    let flux = (0..len - 1)
        .map(|k| {
            let um = grid.midpoint(k);
            let vm = 0.5 * (profile.v[k] + profile.v[k + 1]);
            um.powi(n - 2) * vm / grid.jacobian(um)
        })
        .collect();
    let mass_volume: Vec<f64> = u
        .iter()
        .map(|&x| x.powi(n - 2) * grid.jacobian(x) * h)
        .collect();
    let volume = mass_volume.iter().map(|m| m * h).collect();
    Ok(Background {
        u,
        v: profile.v.clone(),
        frames,
        dw2,
        flux,
        volume,
        mass_volume,
    })
}

fn component_weights(n: usize, components: usize) -> Vec<f64> {
    if components == 1 {
        vec![1.0]
    } else {
        vec![n as f64 - 2.0, 1.0, 1.0]
    }
}

fn assemble(profile: &RadialProfile, kind: OperatorKind) -> Result<OperatorMatrix, SolverError> {
    let bg = background(profile)?;
    let n = profile.n;
    let nf = n as f64;
    let len = bg.u.len();
    let comps = if kind == OperatorKind::Scalar {
        1
    } else {
        COMPONENTS
    };
    let interior = len - 2;
    let mut a = BandedMatrix::zeros(interior * comps, comps);
    let diffusion = match kind {
        OperatorKind::RoughLaplacian => 1.0,
        _ => 0.5,
    };
    let weights = component_weights(n, comps);
    let mut mass = Vec::with_capacity(interior * comps);
    for k in 1..len - 1 {
        let i = k - 1;
        let (cp, cm) = (bg.flux[k], bg.flux[k - 1]);
        let den = bg.volume[k];
        for (c, w) in weights.iter().enumerate() {
            let row = comps * i + c;
            a.add(row, row, diffusion * (cp + cm) / den);
            if k + 1 < len - 1 {
                a.add(row, row + comps, -diffusion * cp / den);
            }
            if k > 1 {
                a.add(row, row - comps, -diffusion * cm / den);
            }
            mass.push(w * bg.mass_volume[k]);
        }
        let u = bg.u[k];
        match kind {
            OperatorKind::Scalar => {
                a.add(comps * i, comps * i, nf - 1.0);
            }
            OperatorKind::RoughLaplacian | OperatorKind::LinearizedEinstein => {
                let (s, r, t) = (3 * i, 3 * i + 1, 3 * i + 2);
                let q = 2.0 * bg.v[k] / (u * u);
                let p = 2.0 * bg.dw2[k];
                let d = diffusion;
                a.add(s, s, d * q);
                a.add(s, r, -d * q);
                a.add(r, r, d * ((nf - 2.0) * q + p));
                a.add(r, s, -d * (nf - 2.0) * q);
                a.add(r, t, -d * p);
                a.add(t, t, d * p);
                a.add(t, r, -d * p);
                if kind == OperatorKind::LinearizedEinstein {
                    let f = &bg.frames[k];
                    let ric_axis = f.ricci_axis(n);
                    let ric_normal = f.ricci_normal(n);
                    a.add(s, s, ric_axis + nf - 1.0 - (nf - 3.0) * f.tangential);
                    a.add(s, r, -f.mixed);
                    a.add(s, t, -f.mixed);
                    a.add(r, r, ric_normal + nf - 1.0);
                    a.add(r, s, -(nf - 2.0) * f.mixed);
                    a.add(r, t, -f.normal);
                    a.add(t, t, ric_normal + nf - 1.0);
                    a.add(t, s, -(nf - 2.0) * f.mixed);
                    a.add(t, r, -f.normal);
                }
            }
        }
    }
    Ok(OperatorMatrix {
        kind,
        bc: BoundaryCondition::Dirichlet,
        n,
        nodes: bg.u[1..len - 1].to_vec(),
        components: comps,
        matrix: a,
        mass,
    })
}

/// `L = ½∇*∇ + Ric∘s − Rm(s) + (n−1)s` at the background itself.
pub fn assemble_l(
    profile: &RadialProfile,
    gauge_background: &RadialProfile,
) -> Result<OperatorMatrix, SolverError> {
    if profile != gauge_background {
        return Err(SolverError::UnsupportedGauge);
    }
    assemble(profile, OperatorKind::LinearizedEinstein)
}

pub fn assemble_rough_laplacian(profile: &RadialProfile) -> Result<OperatorMatrix, SolverError> {
    assemble(profile, OperatorKind::RoughLaplacian)
}

/// `½Δφ + (n−1)φ` with `Δ = −u^{2−n}(u^{n−2}Vφ′)′`.
pub fn assemble_scalar(profile: &RadialProfile) -> Result<OperatorMatrix, SolverError> {
    assemble(profile, OperatorKind::Scalar)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CoercivityReport {
    pub smallest_eigenvalue: f64,
    pub unknowns: usize,
    pub u_min: f64,
    pub u_max: f64,
}

/// Smallest eigenvalue of the symmetrized Dirichlet-truncated `L`.
pub fn coercivity_estimate(
    profile: &RadialProfile,
    tol: f64,
) -> Result<CoercivityReport, SolverError> {
    let op = assemble_l(profile, profile)?;
    let smallest_eigenvalue = op.symmetrized().smallest_eigenvalue(tol)?;
    Ok(CoercivityReport {
        smallest_eigenvalue,
        unknowns: op.dim(),
        u_min: profile.grid.u_min(),
        u_max: profile.grid.u_max(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::{GridScheme, RadialGrid};

    fn hyperbolic(nodes: usize) -> RadialProfile {
        RadialProfile::hyperbolic(
            4,
            RadialGrid::new(1.2, 8.0, nodes, GridScheme::LogUniform).unwrap(),
        )
        .unwrap()
    }

    #[test]
    fn pure_trace_reduces_to_scalar_operator() {
        let prof = hyperbolic(300);
        let l = assemble_l(&prof, &prof).unwrap();
        let scalar = assemble_scalar(&prof).unwrap();
        let phi: Vec<f64> = prof
            .nodes()
            .iter()
            .map(|u| (u - 1.2) * (8.0 - u) * u.sin())
            .collect();
        let lt = l.apply(&SymmetricTensorProfile::pure_trace(&phi).interior_vector());
        let ls = scalar.apply(&phi[1..phi.len() - 1]);
        for (i, s) in ls.iter().enumerate() {
            for c in 0..3 {
                assert!(
                    (lt[3 * i + c] - s).abs() < 1e-8 * (1.0 + s.abs()),
                    "i={i} c={c}"
                );
            }
        }
    }

    #[test]
    fn rough_laplacian_annihilates_constants_in_the_interior() {
        let prof = hyperbolic(100);
        let op = assemble_rough_laplacian(&prof).unwrap();
        let ones = vec![1.0; op.dim()];
        let y = op.apply(&ones);
        // rows not touching the eliminated boundary nodes
        for (i, v) in y.iter().enumerate().skip(3).take(op.dim() - 6) {
            assert!(v.abs() < 1e-9, "row {i}: {v}");
        }
    }

    #[test]
    fn operators_are_weighted_symmetric() {
        let p = crate::model_geometry::solve_cone_angle(4, 2).unwrap();
        let u_a = crate::model_geometry::largest_root(&p).unwrap();
        let grid = RadialGrid::new(u_a * 1.001, 20.0, 400, GridScheme::LogUniform).unwrap();
        let prof = RadialProfile::exact_model(&p, grid).unwrap();
        assert!(
            assemble_rough_laplacian(&prof)
                .unwrap()
                .weighted_asymmetry()
                < 1e-10
        );
        assert!(assemble_l(&prof, &prof).unwrap().weighted_asymmetry() < 1e-10);
    }

    #[test]
    fn symmetrized_spectrum_matches_dense_oracle() {
        use nalgebra::DMatrix;
        let prof = hyperbolic(40);
        let op = assemble_l(&prof, &prof).unwrap();
        let b = op.symmetrized();
        let n = b.dim();
        let dense = DMatrix::from_fn(n, n, |i, j| b.get(i, j));
        let mut ev: Vec<f64> = dense
            .symmetric_eigen()
            .eigenvalues
            .iter()
            .cloned()
            .collect();
        ev.sort_by(|a, b| a.partial_cmp(b).unwrap());
        for k in [0, 1, 5] {
            assert!(
                (b.eigenvalue(k, 1e-11).unwrap() - ev[k]).abs() < 1e-8,
                "k={k}"
            );
        }
    }

    #[test]
    fn other_gauge_backgrounds_are_rejected() {
        let a = hyperbolic(50);
        let b = hyperbolic(51);
        assert_eq!(
            assemble_l(&a, &b).unwrap_err(),
            SolverError::UnsupportedGauge
        );
    }
}
