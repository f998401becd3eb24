//! Small dense matrices over a [`Scalar`] ring.

use super::Scalar;

#[derive(Clone, Debug, PartialEq)]
pub struct Matrix<S: Scalar> {
    pub rows: usize,
    pub cols: usize,
    data: Vec<S>,
}

impl<S: Scalar> Matrix<S> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![S::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, S::one());
        }
        m
    }

    pub fn get(&self, i: usize, j: usize) -> &S {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: S) {
        self.data[i * self.cols + j] = v;
    }

    pub fn mul(&self, other: &Self) -> Option<Self> {
        if self.cols != other.rows {
            return None;
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let acc = out.get(i, j).add(&a.mul(other.get(k, j)));
                    out.set(i, j, acc);
                }
            }
        }
        Some(out)
    }

    pub fn transpose(&self) -> Self {
        let mut out = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(j, i, self.get(i, j).clone());
            }
        }
        out
    }

    pub fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        self.rows == other.rows
            && self.cols == other.cols
            && self
                .data
                .iter()
                .zip(&other.data)
                .all(|(a, b)| a.near(b, tol))
    }

    pub fn to_f64(&self) -> Matrix<f64> {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(Scalar::to_f64).collect(),
        }
    }

    /// Determinant by fraction-free (Bareiss) elimination. Divisions are
    /// exact in any integral domain, so this stays inside `Z[√2]`.
    pub fn determinant(&self) -> Option<S> {
        if self.rows != self.cols {
            return None;
        }
        let n = self.rows;
        if n == 0 {
            return Some(S::one());
        }
        let mut a = self.clone();
        let mut sign = S::one();
        let mut prev = S::one();
        for k in 0..n - 1 {
            if a.get(k, k).is_zero() {
                let pivot = (k + 1..n).find(|&r| !a.get(r, k).is_zero());
                match pivot {
                    Some(r) => {
                        for j in 0..n {
                            let t = a.get(k, j).clone();
                            a.set(k, j, a.get(r, j).clone());
                            a.set(r, j, t);
                        }
                        sign = sign.neg();
                    }
                    None => return Some(S::zero()),
                }
            }
            let akk = a.get(k, k).clone();
            for i in k + 1..n {
                for j in k + 1..n {
                    let num = akk.mul(a.get(i, j)).sub(&a.get(i, k).mul(a.get(k, j)));
                    a.set(i, j, num.div_exact(&prev)?);
                }
                a.set(i, k, S::zero());
            }
            prev = akk;
        }
        Some(sign.mul(a.get(n - 1, n - 1)))
    }
}
