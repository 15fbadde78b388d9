//! Dense factorizations: partial-pivot LU and column-pivoted Householder QR.

use ndarray::Array2;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::numcore::CMatrix;

/// LU factorization with partial pivoting, kept in packed form.
pub struct Lu {
    lu: Array2<Complex64>,
    piv: Vec<usize>,
    /// Parity of the row permutation, +1 or -1.
    sign: f64,
}

impl Lu {
    pub fn factor(a: &Array2<Complex64>) -> Result<Lu> {
        let n = a.nrows();
        assert_eq!(n, a.ncols(), "LU requires a square matrix");
        let mut lu = a.to_owned();
        let mut piv: Vec<usize> = (0..n).collect();
        let mut sign = 1.0;
        let scale = lu.iter().map(|z| z.norm()).fold(0.0, f64::max).max(1.0);
        for k in 0..n {
            let mut p = k;
            let mut best = lu[(k, k)].norm();
            for i in k + 1..n {
                let v = lu[(i, k)].norm();
                if v > best {
                    best = v;
                    p = i;
                }
            }
            if best < 1e-300 * scale {
                return Err(Error::IllConditioned { gap: best });
            }
            if p != k {
                for j in 0..n {
                    let tmp = lu[(k, j)];
                    lu[(k, j)] = lu[(p, j)];
                    lu[(p, j)] = tmp;
                }
                piv.swap(k, p);
                sign = -sign;
            }
            let pivot = lu[(k, k)];
            for i in k + 1..n {
                let m = lu[(i, k)] / pivot;
                lu[(i, k)] = m;
                for j in k + 1..n {
                    let sub = m * lu[(k, j)];
                    lu[(i, j)] -= sub;
                }
            }
        }
        Ok(Lu { lu, piv, sign })
    }

    /// Solves `A X = B` for a matrix right-hand side.
    pub fn solve(&self, b: &Array2<Complex64>) -> Array2<Complex64> {
        let n = self.lu.nrows();
        assert_eq!(b.nrows(), n, "dimension mismatch in solve");
        let m = b.ncols();
        let mut x = Array2::zeros((n, m));
        for i in 0..n {
            for j in 0..m {
                x[(i, j)] = b[(self.piv[i], j)];
            }
        }
        // Forward substitution with unit lower factor.
        for k in 0..n {
            for i in k + 1..n {
                let l = self.lu[(i, k)];
                for j in 0..m {
                    let sub = l * x[(k, j)];
                    x[(i, j)] -= sub;
                }
            }
        }
        // Back substitution.
        for k in (0..n).rev() {
            let d = self.lu[(k, k)];
            for j in 0..m {
                x[(k, j)] /= d;
            }
            for i in 0..k {
                let u = self.lu[(i, k)];
                for j in 0..m {
                    let sub = u * x[(k, j)];
                    x[(i, j)] -= sub;
                }
            }
        }
        x
    }

    pub fn det(&self) -> Complex64 {
        let mut d = Complex64::new(self.sign, 0.0);
        for k in 0..self.lu.nrows() {
            d *= self.lu[(k, k)];
        }
        d
    }
}

impl CMatrix {
    /// Solves `self · X = rhs`.
    pub fn solve(&self, rhs: &CMatrix) -> Result<CMatrix> {
        assert_eq!(self.dim(), rhs.dim(), "dimension mismatch in solve");
        let lu = Lu::factor(self.array())?;
        CMatrix::new(lu.solve(rhs.array()))
    }

    pub fn inverse(&self) -> Result<CMatrix> {
        self.solve(&CMatrix::identity(self.dim()))
    }

    /// Determinant through the LU factorization. Returns 0 when the
    /// factorization breaks down on an (numerically) singular matrix.
    pub fn det(&self) -> Complex64 {
        match Lu::factor(self.array()) {
            Ok(lu) => lu.det(),
            Err(_) => Complex64::new(0.0, 0.0),
        }
    }
}

/// Column-pivoted Householder QR of an m×n matrix: `A P = Q R`.
pub struct PivotedQr {
    /// Full unitary factor, m×m.
    pub q: Array2<Complex64>,
    /// Upper-trapezoidal factor, m×n, columns permuted by `perm`.
    pub r: Array2<Complex64>,
    /// `perm[j]` is the original index of the j-th factored column.
    pub perm: Vec<usize>,
    /// Largest Euclidean column norm of the input.
    pub max_col_norm: f64,
}

impl PivotedQr {
    pub fn factor(a: &Array2<Complex64>) -> PivotedQr {
        let (m, n) = (a.nrows(), a.ncols());
        let mut r = a.to_owned();
        let mut q = Array2::from_shape_fn((m, m), |(i, j)| {
            if i == j { Complex64::new(1.0, 0.0) } else { Complex64::new(0.0, 0.0) }
        });
        let mut perm: Vec<usize> = (0..n).collect();
        let col_norm = |r: &Array2<Complex64>, j: usize, from: usize| -> f64 {
            (from..m).map(|i| r[(i, j)].norm_sqr()).sum::<f64>().sqrt()
        };
        let max_col_norm = (0..n).map(|j| col_norm(&r, j, 0)).fold(0.0, f64::max);

        for k in 0..m.min(n) {
            // Pivot: bring the remaining column with the largest trailing norm forward.
            let (mut best_j, mut best) = (k, col_norm(&r, k, k));
            for j in k + 1..n {
                let v = col_norm(&r, j, k);
                if v > best {
                    best = v;
                    best_j = j;
                }
            }
            if best_j != k {
                for i in 0..m {
                    let tmp = r[(i, k)];
                    r[(i, k)] = r[(i, best_j)];
                    r[(i, best_j)] = tmp;
                }
                perm.swap(k, best_j);
            }
            if best == 0.0 {
                break;
            }
            // Householder reflector sending the trailing column to ±‖x‖ e_k.
            let x0 = r[(k, k)];
            let phase = if x0.norm() > 0.0 { x0 / x0.norm() } else { Complex64::new(1.0, 0.0) };
            let beta = -phase * best;
            let mut v: Vec<Complex64> = (k..m).map(|i| r[(i, k)]).collect();
            v[0] -= beta;
            let vnorm2: f64 = v.iter().map(|z| z.norm_sqr()).sum();
            if vnorm2 > 0.0 {
                let tau = 2.0 / vnorm2;
                for j in k..n {
                    let dot: Complex64 =
                        v.iter().enumerate().map(|(t, &vt)| vt.conj() * r[(k + t, j)]).sum();
                    let s = dot * tau;
                    for (t, &vt) in v.iter().enumerate() {
                        let sub = vt * s;
                        r[(k + t, j)] -= sub;
                    }
                }
                // Accumulate Q ← Q·H (H is Hermitian).
                for i in 0..m {
                    let dot: Complex64 =
                        v.iter().enumerate().map(|(t, &vt)| q[(i, k + t)] * vt).sum();
                    let s = dot * tau;
                    for (t, &vt) in v.iter().enumerate() {
                        let sub = s * vt.conj();
                        q[(i, k + t)] -= sub;
                    }
                }
            }
            r[(k, k)] = beta;
            for i in k + 1..m {
                r[(i, k)] = Complex64::new(0.0, 0.0);
            }
        }
        PivotedQr { q, r, perm, max_col_norm }
    }

    /// Number of diagonal pivots above `threshold`.
    pub fn rank_with_threshold(&self, threshold: f64) -> usize {
        let steps = self.r.nrows().min(self.r.ncols());
        (0..steps).take_while(|&k| self.r[(k, k)].norm() > threshold).count()
    }
}

/// Orthonormal basis of the numerical nullspace of an m×n matrix, with an
/// absolute pivot threshold.
///
/// Factors the conjugate transpose: the nullspace of `A` is the orthogonal
/// complement of the row space, so the trailing columns of the full Q of
/// `A^H` form an orthonormal kernel basis directly.
pub fn nullspace_abs(a: &Array2<Complex64>, threshold: f64) -> Array2<Complex64> {
    let ah = Array2::from_shape_fn((a.ncols(), a.nrows()), |(i, j)| a[(j, i)].conj());
    let qr = PivotedQr::factor(&ah);
    let rank = qr.rank_with_threshold(threshold);
    let n = a.ncols();
    let mut basis = Array2::zeros((n, n - rank));
    for (jj, j) in (rank..n).enumerate() {
        for i in 0..n {
            basis[(i, jj)] = qr.q[(i, j)];
        }
    }
    basis
}

/// Nullspace with the default relative threshold: `eps_rank` times the
/// largest column norm.
pub fn nullspace(a: &Array2<Complex64>, eps_rank: f64) -> Array2<Complex64> {
    let max_col = (0..a.ncols())
        .map(|j| (0..a.nrows()).map(|i| a[(i, j)].norm_sqr()).sum::<f64>().sqrt())
        .fold(0.0, f64::max);
    nullspace_abs(a, eps_rank * max_col)
}
