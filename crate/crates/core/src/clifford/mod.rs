//! Clifford algebra `Cliff(R^{n+1}, f)` on the standardized orthonormal basis.
//!
//! Basis vectors satisfy `g_f(e₀, e₀) = −1`, `g_f(eᵢ, eᵢ) = +1` for `i ≥ 1`,
//! and the product obeys `v·w + w·v = −2 g_f(v, w)`, so `e₀² = +1` and
//! `eᵢ² = −1`. This is the sign that makes `r₁(c) = e₁ c e₁` act on basis
//! monomials by `(−1)^{|J|+1}` when `1 ∉ J` and `(−1)^{|J|}` when `1 ∈ J`;
//! with the opposite sign `r₁(e₁)` would be `+e₁` instead of `−e₁`.
//!
//! Elements are sparse maps from basis monomials `e_J` to coefficients.
//! A monomial is stored as a bitmask, bit `i` standing for `eᵢ`, which also
//! fixes the dense basis order `1, e₀, e₁, e₀e₁, e₂, …` used by
//! [`spin::left_representation`].

pub mod matrix;
mod scalar;
pub mod spin;
pub mod suite;

use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

pub use matrix::Matrix;
pub use scalar::Scalar;

/// Largest ambient dimension `n + 1` supported by the bitmask encoding.
pub const MAX_GENERATORS: usize = 16;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CliffordError {
    #[error("dimension mismatch: {left} vs {right} generators")]
    DimensionMismatch { left: usize, right: usize },
    #[error("unsupported number of generators {0} (max {MAX_GENERATORS})")]
    TooManyGenerators(usize),
    #[error("index {index} out of range for {generators} generators")]
    IndexOutOfRange { index: usize, generators: usize },
    #[error("element is not invertible in the Clifford group")]
    NotInvertible,
    #[error("conjugated vector left grade 1 (magnitude {0:e})")]
    NotAVector(f64),
    #[error("reflection axis must be >= 1, got {0}")]
    InvalidReflectionAxis(usize),
    #[error("spin certification failed: even={is_even}, unit_norm={unit_spin_norm}, preserves_vectors={preserves_vectors}")]
    NotSpin {
        is_even: bool,
        unit_spin_norm: bool,
        preserves_vectors: bool,
    },
    #[error("congruence membership needs exact coefficients")]
    NumericMode,
    #[error("{0} is not a prime")]
    NotPrime(u64),
}

/// Strictly increasing multi-index `J ⊂ {0, …, n}`, stored as a bitmask.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct MultiIndex(pub u32);

impl MultiIndex {
    pub const EMPTY: MultiIndex = MultiIndex(0);

    pub fn from_indices(indices: &[usize]) -> Self {
        let mut mask = 0u32;
        for &i in indices {
            mask ^= 1 << i;
        }
        MultiIndex(mask)
    }

    pub fn single(i: usize) -> Self {
        MultiIndex(1 << i)
    }

    pub fn grade(self) -> u32 {
        self.0.count_ones()
    }

    pub fn contains(self, i: usize) -> bool {
        self.0 & (1 << i) != 0
    }

    pub fn indices(self) -> impl Iterator<Item = usize> {
        (0..32).filter(move |i| self.0 & (1 << i) != 0)
    }

    /// `e_J e_K = sign · e_{J Δ K}`.
    pub fn product(self, other: MultiIndex) -> (i8, MultiIndex) {
        let mut swaps = 0u32;
        let mut a = self.0 >> 1;
        while a != 0 {
            swaps += (a & other.0).count_ones();
            a >>= 1;
        }
        // each shared eᵢ with i ≥ 1 squares to −1; e₀ squares to +1
        let squares = (self.0 & other.0 & !1).count_ones();
        let sign = if (swaps + squares).is_multiple_of(2) {
            1
        } else {
            -1
        };
        (sign, MultiIndex(self.0 ^ other.0))
    }
}

impl fmt::Display for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0 == 0 {
            return write!(f, "1");
        }
        for i in self.indices() {
            write!(f, "e{i}")?;
        }
        Ok(())
    }
}

/// Sparse Clifford element; zero coefficients are never stored.
#[derive(Clone, Debug, PartialEq)]
pub struct CliffordElement<S: Scalar> {
    generators: usize,
    terms: BTreeMap<MultiIndex, S>,
}

impl<S: Scalar> CliffordElement<S> {
    /// The zero element of `Cliff(R^{n+1})`, built from `n + 1` generators.
    pub fn zero(generators: usize) -> Result<Self, CliffordError> {
        if generators == 0 || generators > MAX_GENERATORS {
            return Err(CliffordError::TooManyGenerators(generators));
        }
        Ok(Self {
            generators,
            terms: BTreeMap::new(),
        })
    }

    pub fn scalar(generators: usize, c: S) -> Result<Self, CliffordError> {
        let mut x = Self::zero(generators)?;
        x.insert(MultiIndex::EMPTY, c);
        Ok(x)
    }

    pub fn one(generators: usize) -> Result<Self, CliffordError> {
        Self::scalar(generators, S::one())
    }

    pub fn basis(generators: usize, indices: &[usize]) -> Result<Self, CliffordError> {
        let mut x = Self::zero(generators)?;
        let mut acc = (1i8, MultiIndex::EMPTY);
        for &i in indices {
            x.check_index(i)?;
            let (s, m) = acc.1.product(MultiIndex::single(i));
            acc = (acc.0 * s, m);
        }
        x.insert(acc.1, if acc.0 > 0 { S::one() } else { S::one().neg() });
        Ok(x)
    }

    /// Embeds `v = Σ vᵢ eᵢ` as a grade-1 element.
    pub fn vector(v: &[S]) -> Result<Self, CliffordError> {
        let mut x = Self::zero(v.len())?;
        for (i, c) in v.iter().enumerate() {
            x.insert(MultiIndex::single(i), c.clone());
        }
        Ok(x)
    }

    pub fn from_terms(
        generators: usize,
        terms: impl IntoIterator<Item = (MultiIndex, S)>,
    ) -> Result<Self, CliffordError> {
        let mut x = Self::zero(generators)?;
        for (j, c) in terms {
            if j.0 >> generators != 0 {
                return Err(CliffordError::IndexOutOfRange {
                    index: 31 - j.0.leading_zeros() as usize,
                    generators,
                });
            }
            x.accumulate(j, &c);
        }
        Ok(x)
    }

    fn check_index(&self, i: usize) -> Result<(), CliffordError> {
        if i >= self.generators {
            Err(CliffordError::IndexOutOfRange {
                index: i,
                generators: self.generators,
            })
        } else {
            Ok(())
        }
    }

    fn insert(&mut self, j: MultiIndex, c: S) {
        if c.is_zero() {
            self.terms.remove(&j);
        } else {
            self.terms.insert(j, c);
        }
    }

    fn accumulate(&mut self, j: MultiIndex, c: &S) {
        let next = match self.terms.get(&j) {
            Some(old) => old.add(c),
            None => c.clone(),
        };
        self.insert(j, next);
    }

    pub fn generators(&self) -> usize {
        self.generators
    }

    pub fn terms(&self) -> impl Iterator<Item = (&MultiIndex, &S)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, j: MultiIndex) -> S {
        self.terms.get(&j).cloned().unwrap_or_else(S::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_even(&self) -> bool {
        self.terms.keys().all(|j| j.grade() % 2 == 0)
    }

    /// Largest coefficient magnitude over blades outside `keep`.
    pub fn magnitude_outside(&self, keep: impl Fn(MultiIndex) -> bool) -> f64 {
        self.terms
            .iter()
            .filter(|(j, _)| !keep(**j))
            .map(|(_, c)| c.to_f64().abs())
            .fold(0.0, f64::max)
    }

    fn same_space(&self, other: &Self) -> Result<(), CliffordError> {
        if self.generators != other.generators {
            Err(CliffordError::DimensionMismatch {
                left: self.generators,
                right: other.generators,
            })
        } else {
            Ok(())
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self, CliffordError> {
        self.same_space(other)?;
        let mut out = self.clone();
        for (j, c) in &other.terms {
            out.accumulate(*j, c);
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self, CliffordError> {
        self.add(&other.scale(&S::one().neg()))
    }

    pub fn scale(&self, c: &S) -> Self {
        let mut out = Self {
            generators: self.generators,
            terms: BTreeMap::new(),
        };
        for (j, x) in &self.terms {
            out.insert(*j, x.mul(c));
        }
        out
    }

    /// Clifford product.
    pub fn product(&self, other: &Self) -> Result<Self, CliffordError> {
        self.same_space(other)?;
        let mut out = Self {
            generators: self.generators,
            terms: BTreeMap::new(),
        };
        for (ja, ca) in &self.terms {
            for (jb, cb) in &other.terms {
                let (sign, j) = ja.product(*jb);
                let c = ca.mul(cb);
                out.accumulate(j, &if sign > 0 { c } else { c.neg() });
            }
        }
        Ok(out)
    }

    fn map_signs(&self, sign: impl Fn(u32) -> bool) -> Self {
        let mut out = self.clone();
        for (j, c) in out.terms.iter_mut() {
            if sign(j.grade()) {
                *c = c.neg();
            }
        }
        out
    }

    /// `e_{i₁}⋯e_{i_r} ↦ e_{i_r}⋯e_{i₁}`, i.e. sign `(−1)^{r(r−1)/2}`.
    pub fn reversal(&self) -> Self {
        self.map_signs(|r| (r * r.saturating_sub(1) / 2) % 2 == 1)
    }

    /// Negates the odd part.
    pub fn grade_involution(&self) -> Self {
        self.map_signs(|r| r % 2 == 1)
    }

    /// Grade-1 coefficients `(v₀, …, vₙ)`.
    pub fn vector_part(&self) -> Vec<S> {
        (0..self.generators)
            .map(|i| self.coefficient(MultiIndex::single(i)))
            .collect()
    }

    pub fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        if self.generators != other.generators {
            return false;
        }
        let keys = self.terms.keys().chain(other.terms.keys());
        keys.into_iter()
            .all(|j| self.coefficient(*j).near(&other.coefficient(*j), tol))
    }

    pub fn map_coefficients<T: Scalar>(&self, f: impl Fn(&S) -> T) -> CliffordElement<T> {
        let mut out = CliffordElement::<T> {
            generators: self.generators,
            terms: BTreeMap::new(),
        };
        for (j, c) in &self.terms {
            out.insert(*j, f(c));
        }
        out
    }
}

impl<S: Scalar> fmt::Display for CliffordElement<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(j, c)| format!("({c:?}){j}"))
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}
