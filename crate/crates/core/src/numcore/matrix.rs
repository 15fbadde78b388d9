//! Dense square complex matrices and the tolerance bundle.

use std::fmt;
use std::ops::{Add, Index, Mul, Neg, Sub};

use ndarray::{Array1, Array2};
use num_complex::Complex64;

use crate::error::{Error, Result};

/// Numerical tolerances threaded through every analysis.
///
/// `eps_cluster` decides when two computed eigenvalues count as the same
/// eigenvalue; it is always applied relative to `1 + max |λ|`. `eps_rank`
/// is the pivot threshold for numerical rank, relative to the largest
/// column norm. `eps_verify` bounds matrix-equation residuals relative to
/// the magnitudes of the compared quantities.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    /// Root-finder convergence threshold (per-root update size).
    pub eps_root: f64,
    /// Rank / nullspace pivot threshold.
    pub eps_rank: f64,
    /// Eigenvalue-identity threshold.
    pub eps_cluster: f64,
    /// Matrix-equation residual threshold.
    pub eps_verify: f64,
    /// Iteration cap for root finding and series summation.
    pub max_iter: usize,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            eps_root: 1e-12,
            eps_rank: 1e-9,
            eps_cluster: 1e-7,
            eps_verify: 1e-8,
            max_iter: 200,
        }
    }
}

impl Tolerances {
    /// Validates positivity and the ordering `eps_cluster >= eps_root`.
    pub fn validate(&self) -> Result<()> {
        let fields = [
            ("eps_root", self.eps_root),
            ("eps_rank", self.eps_rank),
            ("eps_cluster", self.eps_cluster),
            ("eps_verify", self.eps_verify),
        ];
        for (name, v) in fields {
            if v <= 0.0 || !v.is_finite() {
                return Err(Error::InvalidInput(format!("{name} must be positive and finite")));
            }
        }
        if self.max_iter == 0 {
            return Err(Error::InvalidInput("max_iter must be positive".into()));
        }
        if self.eps_cluster < self.eps_root {
            return Err(Error::InvalidInput(
                "eps_cluster must be at least eps_root".into(),
            ));
        }
        Ok(())
    }

    /// Absolute clustering threshold for eigenvalues of magnitude up to `max_abs`.
    pub fn cluster_tol(&self, max_abs: f64) -> f64 {
        self.eps_cluster * (1.0 + max_abs)
    }
}

/// A dense square complex matrix, the universal carrier of the crate.
///
/// Invariants: square, dimension at least 1, every entry finite.
#[derive(Debug, Clone, PartialEq)]
pub struct CMatrix {
    data: Array2<Complex64>,
}

fn all_finite(a: &Array2<Complex64>) -> bool {
    a.iter().all(|z| z.re.is_finite() && z.im.is_finite())
}

impl CMatrix {
    /// Wraps an owned array, checking squareness and finiteness.
    pub fn new(data: Array2<Complex64>) -> Result<Self> {
        if data.nrows() != data.ncols() {
            return Err(Error::InvalidInput(format!(
                "matrix must be square, got {}x{}",
                data.nrows(),
                data.ncols()
            )));
        }
        if data.nrows() == 0 {
            return Err(Error::InvalidInput("matrix dimension must be at least 1".into()));
        }
        if !all_finite(&data) {
            return Err(Error::InvalidInput("matrix has non-finite entries".into()));
        }
        Ok(CMatrix { data })
    }

    /// Builds from nested rows; rows must be equal length and square.
    pub fn from_rows(rows: &[Vec<Complex64>]) -> Result<Self> {
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return Err(Error::InvalidInput("rows do not form a square matrix".into()));
        }
        let mut a = Array2::zeros((n, n));
        for (i, row) in rows.iter().enumerate() {
            for (j, &z) in row.iter().enumerate() {
                a[(i, j)] = z;
            }
        }
        CMatrix::new(a)
    }

    /// Builds an n×n matrix of real entries.
    pub fn from_real_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let rows: Vec<Vec<Complex64>> = rows
            .iter()
            .map(|r| r.iter().map(|&x| Complex64::new(x, 0.0)).collect())
            .collect();
        CMatrix::from_rows(&rows)
    }

    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        assert!(n >= 1, "dimension must be at least 1");
        let data = Array2::from_shape_fn((n, n), |(i, j)| f(i, j));
        assert!(all_finite(&data), "matrix entries must be finite");
        CMatrix { data }
    }

    pub fn zeros(n: usize) -> Self {
        Self::from_fn(n, |_, _| Complex64::new(0.0, 0.0))
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, |i, j| {
            if i == j { Complex64::new(1.0, 0.0) } else { Complex64::new(0.0, 0.0) }
        })
    }

    pub fn diagonal(d: &[Complex64]) -> Self {
        Self::from_fn(d.len(), |i, j| {
            if i == j { d[i] } else { Complex64::new(0.0, 0.0) }
        })
    }

    pub fn dim(&self) -> usize {
        self.data.nrows()
    }

    pub fn array(&self) -> &Array2<Complex64> {
        &self.data
    }

    pub fn into_array(self) -> Array2<Complex64> {
        self.data
    }

    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.data[(i, j)]
    }

    pub fn set(&mut self, i: usize, j: usize, z: Complex64) {
        assert!(z.re.is_finite() && z.im.is_finite(), "entries must stay finite");
        self.data[(i, j)] = z;
    }

    pub fn trace(&self) -> Complex64 {
        self.data.diag().sum()
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> CMatrix {
        let n = self.dim();
        CMatrix::from_fn(n, |i, j| self.data[(j, i)].conj())
    }

    pub fn transpose(&self) -> CMatrix {
        CMatrix { data: self.data.t().to_owned() }
    }

    pub fn matmul(&self, other: &CMatrix) -> CMatrix {
        assert_eq!(self.dim(), other.dim(), "dimension mismatch in matmul");
        CMatrix { data: self.data.dot(&other.data) }
    }

    pub fn apply(&self, v: &Array1<Complex64>) -> Array1<Complex64> {
        self.data.dot(v)
    }

    pub fn scale(&self, c: Complex64) -> CMatrix {
        CMatrix { data: self.data.mapv(|z| z * c) }
    }

    /// Integer matrix power by repeated squaring; `pow(0)` is the identity.
    pub fn pow(&self, mut k: u32) -> CMatrix {
        let mut result = CMatrix::identity(self.dim());
        let mut base = self.clone();
        while k > 0 {
            if k & 1 == 1 {
                result = result.matmul(&base);
            }
            k >>= 1;
            if k > 0 {
                base = base.matmul(&base);
            }
        }
        result
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn norm_fro(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Maximum absolute column sum (the induced 1-norm).
    pub fn norm_one(&self) -> f64 {
        (0..self.dim())
            .map(|j| (0..self.dim()).map(|i| self.data[(i, j)].norm()).sum::<f64>())
            .fold(0.0, f64::max)
    }

    /// Operator 2-norm estimate by power iteration on `M^H M`.
    ///
    /// Deterministic: starts from a fixed pseudo-random vector. At desk
    /// scale 60 iterations put the estimate well within a percent.
    pub fn opnorm_est(&self) -> f64 {
        let n = self.dim();
        let mh = self.adjoint();
        let mut v: Array1<Complex64> = Array1::from_shape_fn(n, |i| {
            let t = 0.7 * (i as f64 + 1.0);
            Complex64::new(t.cos(), t.sin())
        });
        let mut norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm == 0.0 {
            return 0.0;
        }
        v.mapv_inplace(|z| z / norm);
        let mut sigma2 = 0.0f64;
        for _ in 0..60 {
            let w = mh.apply(&self.apply(&v));
            sigma2 = w
                .iter()
                .zip(v.iter())
                .map(|(a, b)| (a * b.conj()).re)
                .sum::<f64>()
                .max(0.0);
            norm = w.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            if norm == 0.0 {
                return 0.0;
            }
            v = w.mapv(|z| z / norm);
        }
        sigma2.sqrt()
    }
}

impl Index<(usize, usize)> for CMatrix {
    type Output = Complex64;
    fn index(&self, idx: (usize, usize)) -> &Complex64 {
        &self.data[idx]
    }
}

impl Add for &CMatrix {
    type Output = CMatrix;
    fn add(self, rhs: &CMatrix) -> CMatrix {
        assert_eq!(self.dim(), rhs.dim(), "dimension mismatch in add");
        CMatrix { data: &self.data + &rhs.data }
    }
}

impl Sub for &CMatrix {
    type Output = CMatrix;
    fn sub(self, rhs: &CMatrix) -> CMatrix {
        assert_eq!(self.dim(), rhs.dim(), "dimension mismatch in sub");
        CMatrix { data: &self.data - &rhs.data }
    }
}

impl Mul for &CMatrix {
    type Output = CMatrix;
    fn mul(self, rhs: &CMatrix) -> CMatrix {
        self.matmul(rhs)
    }
}

impl Mul<Complex64> for &CMatrix {
    type Output = CMatrix;
    fn mul(self, rhs: Complex64) -> CMatrix {
        self.scale(rhs)
    }
}

impl Neg for &CMatrix {
    type Output = CMatrix;
    fn neg(self) -> CMatrix {
        self.scale(Complex64::new(-1.0, 0.0))
    }
}

impl fmt::Display for CMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let n = self.dim();
        let cells: Vec<Vec<String>> = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        let z = self.data[(i, j)];
                        format!("{:.6}{}{:.6}i", z.re, if z.im < 0.0 { "-" } else { "+" }, z.im.abs())
                    })
                    .collect()
            })
            .collect();
        let width = cells.iter().flatten().map(|s| s.len()).max().unwrap_or(0);
        for row in &cells {
            write!(f, "[")?;
            for (j, cell) in row.iter().enumerate() {
                if j > 0 {
                    write!(f, "  ")?;
                }
                write!(f, "{cell:>width$}")?;
            }
            writeln!(f, "]")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn rejects_non_square_and_non_finite() {
        assert!(CMatrix::new(Array2::zeros((2, 3))).is_err());
        let mut a = Array2::zeros((2, 2));
        a[(0, 0)] = c(f64::NAN, 0.0);
        assert!(CMatrix::new(a).is_err());
    }

    #[test]
    fn pow_matches_repeated_multiplication() {
        let m = CMatrix::from_rows(&[vec![c(1.0, 1.0), c(0.5, 0.0)], vec![c(0.0, -1.0), c(2.0, 0.0)]])
            .unwrap();
        let m3 = m.matmul(&m).matmul(&m);
        assert!((&m.pow(3) - &m3).max_abs() < 1e-12);
        assert!((&m.pow(0) - &CMatrix::identity(2)).max_abs() == 0.0);
    }

    #[test]
    fn opnorm_estimate_matches_known_values() {
        let m = CMatrix::diagonal(&[c(3.0, 0.0), c(-1.0, 0.0)]);
        assert!((m.opnorm_est() - 3.0).abs() < 1e-8);
        // Nilpotent shift has operator norm 1.
        let s = CMatrix::from_real_rows(&[vec![0.0, 1.0], vec![0.0, 0.0]]).unwrap();
        assert!((s.opnorm_est() - 1.0).abs() < 1e-8);
    }

    #[test]
    fn tolerance_validation() {
        assert!(Tolerances::default().validate().is_ok());
        let bad = Tolerances { eps_cluster: 1e-13, ..Tolerances::default() };
        assert!(bad.validate().is_err());
    }
}
