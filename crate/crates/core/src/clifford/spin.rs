//! Spin-group operations: twisted action on vectors, the double cover to
//! `SO(R^{n+1}, f)`, reflections and congruence membership.

use super::{CliffordElement, CliffordError, Matrix, MultiIndex, Scalar};
use crate::number_ring::{is_prime, RingElement};

/// Numeric tolerance for spin certification in `f64` mode.
pub const NUMERIC_TOL: f64 = 1e-10;

#[derive(Clone, Debug, PartialEq)]
pub struct SpinCertificate<S: Scalar> {
    pub element: CliffordElement<S>,
    pub is_even: bool,
    pub unit_spin_norm: bool,
    pub preserves_vectors: bool,
}

impl<S: Scalar> SpinCertificate<S> {
    pub fn is_spin(&self) -> bool {
        self.is_even && self.unit_spin_norm && self.preserves_vectors
    }

    fn into_result(self) -> Result<CliffordElement<S>, CliffordError> {
        if self.is_spin() {
            Ok(self.element)
        } else {
            Err(CliffordError::NotSpin {
                is_even: self.is_even,
                unit_spin_norm: self.unit_spin_norm,
                preserves_vectors: self.preserves_vectors,
            })
        }
    }
}

fn tol<S: Scalar>() -> f64 {
    if S::EXACT {
        0.0
    } else {
        NUMERIC_TOL
    }
}

/// `N(s) = s · reversal(s)`.
pub fn spin_norm<S: Scalar>(s: &CliffordElement<S>) -> CliffordElement<S> {
    s.product(&s.reversal()).expect("same space")
}

/// `s⁻¹ = reversal(s) / N(s)`, available when `N(s)` is an invertible scalar.
pub fn inverse<S: Scalar>(s: &CliffordElement<S>) -> Result<CliffordElement<S>, CliffordError> {
    let n = spin_norm(s);
    if n.magnitude_outside(|j| j == MultiIndex::EMPTY) > tol::<S>() {
        return Err(CliffordError::NotInvertible);
    }
    let c = n.coefficient(MultiIndex::EMPTY);
    let rev = s.reversal();
    let terms: Option<Vec<_>> = rev
        .terms()
        .map(|(j, x)| x.div_exact(&c).map(|q| (*j, q)))
        .collect();
    let terms = terms.ok_or(CliffordError::NotInvertible)?;
    CliffordElement::from_terms(s.generators(), terms)
}

fn conjugate_by<S: Scalar>(
    s: &CliffordElement<S>,
    s_inv: &CliffordElement<S>,
    v: &CliffordElement<S>,
) -> Result<Vec<S>, CliffordError> {
    let w = s.product(v)?.product(s_inv)?;
    let stray = w.magnitude_outside(|j| j.grade() == 1);
    if stray > tol::<S>() {
        return Err(CliffordError::NotAVector(stray));
    }
    Ok(w.vector_part())
}

/// `ρ(s)(v) = s v s⁻¹`, failing if the result leaves grade 1.
pub fn vector_action<S: Scalar>(s: &CliffordElement<S>, v: &[S]) -> Result<Vec<S>, CliffordError> {
    if v.len() != s.generators() {
        return Err(CliffordError::DimensionMismatch {
            left: s.generators(),
            right: v.len(),
        });
    }
    let s_inv = inverse(s)?;
    conjugate_by(s, &s_inv, &CliffordElement::vector(v)?)
}

/// Checks evenness, `N(s) = 1` and that `s eᵢ s⁻¹` stays a vector for each `i`.
pub fn certify<S: Scalar>(s: &CliffordElement<S>) -> SpinCertificate<S> {
    let t = tol::<S>();
    let one = CliffordElement::one(s.generators()).expect("valid size");
    let unit_spin_norm = spin_norm(s).approx_eq(&one, t);
    let preserves_vectors = match inverse(s) {
        Ok(s_inv) => (0..s.generators()).all(|i| {
            let e = CliffordElement::basis(s.generators(), &[i]).expect("valid index");
            conjugate_by(s, &s_inv, &e).is_ok()
        }),
        Err(_) => false,
    };
    SpinCertificate {
        element: s.clone(),
        is_even: s.is_even(),
        unit_spin_norm,
        preserves_vectors,
    }
}

/// Image of a certified spin element under the double cover; column `i`
/// holds the coordinates of `ρ(s)(eᵢ)`.
pub fn so_matrix_of_spin<S: Scalar>(s: &CliffordElement<S>) -> Result<Matrix<S>, CliffordError> {
    let s = certify(s).into_result()?;
    let g = s.generators();
    let s_inv = inverse(&s)?;
    let mut m = Matrix::zeros(g, g);
    for i in 0..g {
        let col = conjugate_by(&s, &s_inv, &CliffordElement::basis(g, &[i])?)?;
        for (r, c) in col.into_iter().enumerate() {
            m.set(r, i, c);
        }
    }
    Ok(m)
}

/// Diagonal Gram matrix of the standardized form: `diag(−1, 1, …, 1)`.
pub fn standard_gram<S: Scalar>(generators: usize) -> Matrix<S> {
    let mut g = Matrix::identity(generators);
    g.set(0, 0, S::one().neg());
    g
}

/// Matrix of `x ↦ s·x` on the basis `e_J` ordered by bitmask.
pub fn left_representation<S: Scalar>(s: &CliffordElement<S>) -> Matrix<S> {
    let dim = 1usize << s.generators();
    let mut m = Matrix::zeros(dim, dim);
    for col in 0..dim {
        for (j, c) in s.terms() {
            let (sign, k) = j.product(MultiIndex(col as u32));
            m.set(
                k.0 as usize,
                col,
                if sign > 0 { c.clone() } else { c.neg() },
            );
        }
    }
    m
}

/// `rᵢ(x) = eᵢ x eᵢ` for `i ≥ 1`.
pub fn reflection_r<S: Scalar>(
    i: usize,
    x: &CliffordElement<S>,
) -> Result<CliffordElement<S>, CliffordError> {
    if i == 0 {
        return Err(CliffordError::InvalidReflectionAxis(i));
    }
    let e = CliffordElement::basis(x.generators(), &[i])?;
    e.product(x)?.product(&e)
}

/// Whether `c_J ≡ 0` for `J ≠ ∅` and `c_∅ ≡ 1` modulo `p Z[√2]`, without
/// any spin certification.
pub fn congruent_to_identity<S: Scalar>(
    s: &CliffordElement<S>,
    p: u64,
) -> Result<bool, CliffordError> {
    if !S::EXACT {
        return Err(CliffordError::NumericMode);
    }
    let one = CliffordElement::one(s.generators())?;
    let diff = s.sub(&one)?;
    let all = diff
        .terms()
        .all(|(_, c)| c.divisible_by(p).expect("exact scalar"));
    Ok(all)
}

/// Membership of a certified spin element in the principal congruence
/// subgroup of level `p`.
pub fn gamma_i_membership<S: Scalar>(
    s: &CliffordElement<S>,
    p: u64,
) -> Result<bool, CliffordError> {
    if !S::EXACT {
        return Err(CliffordError::NumericMode);
    }
    if !is_prime(p) {
        return Err(CliffordError::NotPrime(p));
    }
    let s = certify(s).into_result()?;
    congruent_to_identity(&s, p)
}

fn reduce_mod(x: &CliffordElement<RingElement>, p: u64) -> CliffordElement<RingElement> {
    x.map_coefficients(|c| {
        let r = c.reduce(p);
        RingElement::new(r.a, r.b)
    })
}

pub fn power(
    s: &CliffordElement<RingElement>,
    mut k: u64,
) -> Result<CliffordElement<RingElement>, CliffordError> {
    let mut acc = CliffordElement::one(s.generators())?;
    let mut base = s.clone();
    while k > 0 {
        if k & 1 == 1 {
            acc = acc.product(&base)?;
        }
        k >>= 1;
        if k > 0 {
            base = base.product(&base)?;
        }
    }
    Ok(acc)
}

/// Smallest `m ≤ limit` with `s^m` congruent to the identity modulo `p`,
/// together with the exact power `s^m`.
pub fn congruence_order(
    s: &CliffordElement<RingElement>,
    p: u64,
    limit: u64,
) -> Result<Option<(u64, CliffordElement<RingElement>)>, CliffordError> {
    let reduced = reduce_mod(s, p);
    let mut acc = reduced.clone();
    for m in 1..=limit {
        if congruent_to_identity(&acc, p)? {
            return Ok(Some((m, power(s, m)?)));
        }
        acc = reduce_mod(&acc.product(&reduced)?, p);
    }
    Ok(None)
}

/// The lattice vector `c e₀ + c eᵢ + e_j` (with `i ≠ j`, both `≥ 1`), which
/// has standardized norm `+1` for every `c ∈ Z[√2]`.
pub fn unit_lattice_vector(
    generators: usize,
    c: &RingElement,
    i: usize,
    j: usize,
) -> Result<Vec<RingElement>, CliffordError> {
    for idx in [i, j] {
        if idx == 0 || idx >= generators {
            return Err(CliffordError::IndexOutOfRange {
                index: idx,
                generators,
            });
        }
    }
    if i == j {
        return Err(CliffordError::IndexOutOfRange {
            index: j,
            generators,
        });
    }
    let mut v = vec![RingElement::from_int(0); generators];
    v[0] = c.clone();
    v[i] = c.clone();
    v[j] = RingElement::from_int(1);
    Ok(v)
}

/// Standardized quadratic form `−x₀² + x₁² + ⋯ + xₙ²`.
pub fn standard_norm<S: Scalar>(v: &[S]) -> S {
    v.iter().enumerate().fold(S::zero(), |acc, (i, x)| {
        let sq = x.mul(x);
        if i == 0 {
            acc.sub(&sq)
        } else {
            acc.add(&sq)
        }
    })
}
