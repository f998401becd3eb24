//! Banded matrices and a bisection eigensolver based on inertia counts.

use super::NumericsError;

/// General banded matrix with half-bandwidth `bw`.
#[derive(Clone, Debug, PartialEq)]
pub struct BandedMatrix {
    n: usize,
    bw: usize,
    data: Vec<f64>,
}

impl BandedMatrix {
    pub fn zeros(n: usize, bw: usize) -> Self {
        Self {
            n,
            bw,
            data: vec![0.0; n * (2 * bw + 1)],
        }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn bandwidth(&self) -> usize {
        self.bw
    }

    fn slot(&self, i: usize, j: usize) -> Option<usize> {
        (i < self.n && j < self.n && i.abs_diff(j) <= self.bw)
            .then(|| i * (2 * self.bw + 1) + j + self.bw - i)
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.slot(i, j).map_or(0.0, |s| self.data[s])
    }

    /// Adds `v` to entry `(i, j)`.
    ///
    /// # Panics
    /// If `(i, j)` lies outside the band.
    pub fn add(&mut self, i: usize, j: usize, v: f64) {
        let s = self.slot(i, j).expect("entry inside band");
        self.data[s] += v;
    }

    pub fn row(&self, i: usize) -> impl Iterator<Item = (usize, f64)> + '_ {
        let lo = i.saturating_sub(self.bw);
        let hi = (i + self.bw).min(self.n - 1);
        (lo..=hi).map(move |j| (j, self.get(i, j)))
    }

    pub fn apply(&self, x: &[f64]) -> Vec<f64> {
        (0..self.n)
            .map(|i| self.row(i).map(|(j, a)| a * x[j]).sum())
            .collect()
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        (0..self.n)
            .flat_map(|i| self.row(i).map(move |(j, a)| (i, j, a)))
            .map(|(i, j, a)| (a - other.get(i, j)).abs())
            .fold(0.0, f64::max)
    }

    pub fn to_dense(&self) -> Vec<Vec<f64>> {
        (0..self.n)
            .map(|i| (0..self.n).map(|j| self.get(i, j)).collect())
            .collect()
    }
}

/// Symmetric banded matrix; only the lower band is stored.
#[derive(Clone, Debug, PartialEq)]
pub struct BandedSym {
    n: usize,
    bw: usize,
    data: Vec<f64>,
}

impl BandedSym {
    pub fn zeros(n: usize, bw: usize) -> Self {
        Self {
            n,
            bw,
            data: vec![0.0; n * (bw + 1)],
        }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    fn slot(&self, i: usize, j: usize) -> Option<usize> {
        let (i, j) = if i >= j { (i, j) } else { (j, i) };
        (i < self.n && i - j <= self.bw).then(|| i * (self.bw + 1) + j + self.bw - i)
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.slot(i, j).map_or(0.0, |s| self.data[s])
    }

    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        let s = self.slot(i, j).expect("entry inside band");
        self.data[s] = v;
    }

    /// Number of eigenvalues strictly below `sigma`, by Sylvester's law of
    /// inertia applied to an `LDLᵀ` factorization of `A − σI`.
    pub fn count_below(&self, sigma: f64) -> usize {
        let (n, bw) = (self.n, self.bw);
        let scale = self
            .data
            .iter()
            .fold(sigma.abs(), |m, x| m.max(x.abs()))
            .max(1.0);
        let tiny = f64::EPSILON * scale;
        let mut d = vec![0.0; n];
        // l[i * (bw + 1) + (j + bw - i)] = L_ij for i − bw ≤ j < i
        let mut l = vec![0.0; n * (bw + 1)];
        let mut negatives = 0;
        for i in 0..n {
            let lo = i.saturating_sub(bw);
            for j in lo..i {
                let mut s = self.get(i, j);
                let klo = lo.max(j.saturating_sub(bw));
                for k in klo..j {
                    s -= l[i * (bw + 1) + k + bw - i] * l[j * (bw + 1) + k + bw - j] * d[k];
                }
                l[i * (bw + 1) + j + bw - i] = s / d[j];
            }
            let mut di = self.get(i, i) - sigma;
            for k in lo..i {
                let lik = l[i * (bw + 1) + k + bw - i];
                di -= lik * lik * d[k];
            }
            if di.abs() < tiny {
                di = -tiny;
            }
            if di < 0.0 {
                negatives += 1;
            }
            d[i] = di;
        }
        negatives
    }

    /// Gershgorin interval containing the spectrum.
    pub fn gershgorin(&self) -> (f64, f64) {
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for i in 0..self.n {
            let jlo = i.saturating_sub(self.bw);
            let jhi = (i + self.bw).min(self.n - 1);
            let r: f64 = (jlo..=jhi)
                .filter(|&j| j != i)
                .map(|j| self.get(i, j).abs())
                .sum();
            lo = lo.min(self.get(i, i) - r);
            hi = hi.max(self.get(i, i) + r);
        }
        (lo, hi)
    }

    /// The `k`-th smallest eigenvalue (0-based), to absolute accuracy `tol`.
    pub fn eigenvalue(&self, k: usize, tol: f64) -> Result<f64, NumericsError> {
        if k >= self.n {
            return Err(NumericsError::EigenNoConvergence);
        }
        let (mut lo, mut hi) = self.gershgorin();
        let pad = 1e-12 * (hi - lo).abs().max(1.0);
        lo -= pad;
        hi += pad;
        for _ in 0..200 {
            if hi - lo <= tol {
                return Ok(0.5 * (lo + hi));
            }
            let mid = 0.5 * (lo + hi);
            if self.count_below(mid) > k {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        Err(NumericsError::EigenNoConvergence)
    }

    pub fn smallest_eigenvalue(&self, tol: f64) -> Result<f64, NumericsError> {
        self.eigenvalue(0, tol)
    }

    pub fn to_dense(&self) -> Vec<Vec<f64>> {
        (0..self.n)
            .map(|i| (0..self.n).map(|j| self.get(i, j)).collect())
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tridiagonal_laplacian_spectrum() {
        // eigenvalues 2 − 2cos(kπ/(n+1))
        let n = 50;
        let mut a = BandedSym::zeros(n, 1);
        for i in 0..n {
            a.set(i, i, 2.0);
            if i > 0 {
                a.set(i, i - 1, -1.0);
            }
        }
        for k in [0usize, 1, 7, 49] {
            let exact = 2.0 - 2.0 * ((k + 1) as f64 * std::f64::consts::PI / (n + 1) as f64).cos();
            assert!(
                (a.eigenvalue(k, 1e-13).unwrap() - exact).abs() < 1e-12,
                "k={k}"
            );
        }
    }

    #[test]
    fn banded_apply_matches_dense() {
        let mut m = BandedMatrix::zeros(5, 2);
        for i in 0..5usize {
            for j in i.saturating_sub(2)..(i + 3).min(5) {
                m.add(i, j, (i * 7 + j * 3) as f64 - 4.0);
            }
        }
        let x = [1.0, -2.0, 0.5, 3.0, -1.0];
        let dense = m.to_dense();
        let expect: Vec<f64> = dense
            .iter()
            .map(|r| r.iter().zip(&x).map(|(a, b)| a * b).sum())
            .collect();
        assert_eq!(m.apply(&x), expect);
        assert_eq!(m.get(0, 4), 0.0);
    }
}
