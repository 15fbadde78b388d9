//! Numerical subspaces: kernels, diagonalizability, common eigenvectors.

use ndarray::{Array1, Array2};
use num_complex::Complex64;

use crate::error::Result;
use crate::numcore::factor::{nullspace, nullspace_abs, PivotedQr};
use crate::numcore::{spectrum, CMatrix, Tolerances};

/// A linear subspace of ℂⁿ carried by an orthonormal basis.
#[derive(Debug, Clone)]
pub struct Subspace {
    /// n × dim matrix whose columns are orthonormal.
    basis: Array2<Complex64>,
}

impl Subspace {
    /// Wraps a basis matrix whose columns are already orthonormal.
    pub fn from_orthonormal(basis: Array2<Complex64>) -> Subspace {
        Subspace { basis }
    }

    /// Orthonormalizes arbitrary spanning columns (rank-revealing QR).
    pub fn from_spanning(columns: &Array2<Complex64>, tol: &Tolerances) -> Subspace {
        if columns.ncols() == 0 {
            return Subspace { basis: Array2::zeros((columns.nrows(), 0)) };
        }
        let qr = PivotedQr::factor(columns);
        let rank = qr.rank_with_threshold(tol.eps_rank * qr.max_col_norm.max(1e-300));
        let n = columns.nrows();
        let mut basis = Array2::zeros((n, rank));
        for j in 0..rank {
            for i in 0..n {
                basis[(i, j)] = qr.q[(i, j)];
            }
        }
        Subspace { basis }
    }

    pub fn full(n: usize) -> Subspace {
        Subspace {
            basis: Array2::from_shape_fn((n, n), |(i, j)| {
                if i == j { Complex64::new(1.0, 0.0) } else { Complex64::new(0.0, 0.0) }
            }),
        }
    }

    pub fn dim(&self) -> usize {
        self.basis.ncols()
    }

    pub fn ambient_dim(&self) -> usize {
        self.basis.nrows()
    }

    pub fn basis(&self) -> &Array2<Complex64> {
        &self.basis
    }

    pub fn basis_vector(&self, j: usize) -> Array1<Complex64> {
        self.basis.column(j).to_owned()
    }

    /// The orthogonal projector `Q Q^H` onto the subspace.
    pub fn projector(&self) -> CMatrix {
        let n = self.ambient_dim();
        let q = &self.basis;
        CMatrix::from_fn(n, |i, j| {
            (0..self.dim()).map(|k| q[(i, k)] * q[(j, k)].conj()).sum()
        })
    }

    /// Distance of a unit vector from the subspace: `‖v − QQ^H v‖`.
    pub fn residual_of(&self, v: &Array1<Complex64>) -> f64 {
        let q = &self.basis;
        let mut proj = Array1::<Complex64>::zeros(self.ambient_dim());
        for k in 0..self.dim() {
            let coef: Complex64 = (0..self.ambient_dim()).map(|i| q[(i, k)].conj() * v[i]).sum();
            for i in 0..self.ambient_dim() {
                proj[i] += q[(i, k)] * coef;
            }
        }
        (v - &proj).iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Max residual of the columns of `M·Q` against the subspace itself,
    /// i.e. how far `M` moves the subspace out of itself.
    pub fn invariance_residual(&self, m: &CMatrix) -> f64 {
        let mut worst = 0.0f64;
        for j in 0..self.dim() {
            let img = m.apply(&self.basis_vector(j));
            worst = worst.max(self.residual_of(&img));
        }
        worst
    }

    /// Mutual-containment residual between equal-dimension subspaces.
    pub fn distance_to(&self, other: &Subspace) -> f64 {
        let mut worst = 0.0f64;
        for j in 0..self.dim() {
            worst = worst.max(other.residual_of(&self.basis_vector(j)));
        }
        for j in 0..other.dim() {
            worst = worst.max(self.residual_of(&other.basis_vector(j)));
        }
        worst
    }

    /// Orthonormalized direct sum (concatenate bases, re-orthonormalize).
    pub fn direct_sum(parts: &[&Subspace], tol: &Tolerances) -> Subspace {
        assert!(!parts.is_empty());
        let n = parts[0].ambient_dim();
        let total: usize = parts.iter().map(|s| s.dim()).sum();
        let mut cols = Array2::zeros((n, total));
        let mut j0 = 0;
        for s in parts {
            for j in 0..s.dim() {
                for i in 0..n {
                    cols[(i, j0 + j)] = s.basis[(i, j)];
                }
            }
            j0 += s.dim();
        }
        Subspace::from_spanning(&cols, tol)
    }
}

/// Orthonormal basis of the numerical nullspace of a square matrix, with
/// the pivot threshold `eps_rank` relative to the largest column norm.
pub fn kernel(m: &CMatrix, tol: &Tolerances) -> Subspace {
    Subspace::from_orthonormal(nullspace(m.array(), tol.eps_rank))
}

/// Kernel with an absolute pivot threshold, for callers that know the
/// uncertainty scale of the matrix they null (eigenvalue-cluster noise is
/// far above `eps_rank`).
pub fn kernel_abs(m: &CMatrix, threshold: f64) -> Subspace {
    Subspace::from_orthonormal(nullspace_abs(m.array(), threshold))
}

/// Nullspace of a rectangular stack (used for eigenspace intersections).
pub fn kernel_rect(a: &Array2<Complex64>, tol: &Tolerances) -> Subspace {
    Subspace::from_orthonormal(nullspace(a, tol.eps_rank))
}

/// True iff every eigenvalue cluster has full geometric multiplicity.
///
/// The kernel threshold per cluster accounts for where the computed
/// eigenvalues actually landed: a cluster of radius δ pushes singular
/// values of `M − λ̄I` in its own eigendirections up to about δ, so the
/// cutoff is `3δ + eps_cluster·(1+max|λ|)` rather than a bare `eps_rank`.
pub fn is_diagonalizable(m: &CMatrix, tol: &Tolerances) -> Result<bool> {
    let spec = spectrum(m, tol)?;
    let n = m.dim();
    let base = tol.cluster_tol(spec.max_abs());
    for cluster in spec.clusters(tol) {
        let shifted = m - &CMatrix::identity(n).scale(cluster.center);
        let threshold = 3.0 * cluster.radius(&spec) + base;
        let geometric = kernel_abs(&shifted, threshold.max(tol.eps_rank * shifted.norm_one()))
            .dim();
        if geometric != cluster.multiplicity() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Searches for a shared eigenvector: some unit `v` with `Av ∥ v` and
/// `Bv ∥ v`. Walks the eigenvalue cluster pairs and intersects the
/// eigenspaces via the nullspace of the stacked shifted pair.
pub fn common_eigenvector(
    a: &CMatrix,
    b: &CMatrix,
    tol: &Tolerances,
) -> Result<Option<Array1<Complex64>>> {
    assert_eq!(a.dim(), b.dim(), "dimension mismatch");
    let n = a.dim();
    let sa = spectrum(a, tol)?;
    let sb = spectrum(b, tol)?;
    let base = tol.cluster_tol(sa.max_abs()) + tol.cluster_tol(sb.max_abs());
    for ca in sa.clusters(tol) {
        for cb in sb.clusters(tol) {
            let mut stack = Array2::zeros((2 * n, n));
            for i in 0..n {
                for j in 0..n {
                    stack[(i, j)] = a.get(i, j)
                        - if i == j { ca.center } else { Complex64::new(0.0, 0.0) };
                    stack[(n + i, j)] = b.get(i, j)
                        - if i == j { cb.center } else { Complex64::new(0.0, 0.0) };
                }
            }
            let threshold = 3.0 * (ca.radius(&sa) + cb.radius(&sb)) + base;
            let joint = Subspace::from_orthonormal(nullspace_abs(&stack, threshold));
            if joint.dim() > 0 {
                return Ok(Some(joint.basis_vector(0)));
            }
        }
    }
    Ok(None)
}
