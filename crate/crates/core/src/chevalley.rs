//! Characteristic subspaces, eigenprojections, and the decomposition of a
//! matrix into commuting diagonalizable and nilpotent parts.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::expmat::expm;
use crate::numcore::{
    is_diagonalizable, kernel_abs, spectrum, CMatrix, Cluster, SpectrumMultiset, Subspace,
    Tolerances,
};

/// The decomposition `M = D + N` with `D` diagonalizable, `N` nilpotent,
/// and `DN = ND`.
#[derive(Debug, Clone)]
pub struct JCDecomposition {
    pub d: CMatrix,
    pub n: CMatrix,
    pub eigenvalues: SpectrumMultiset,
}

/// The spectral projections of a matrix: for each distinct eigenvalue λ,
/// the projection onto `Ker(M−λI)^n` along the other characteristic
/// subspaces. They sum to the identity, are idempotent, mutually
/// annihilate, and commute with `M`.
#[derive(Debug, Clone)]
pub struct EigenprojectionSet {
    pub pairs: Vec<(Complex64, CMatrix)>,
}

impl EigenprojectionSet {
    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    /// Worst violation of the projection algebra, for verification:
    /// max of ‖ΣP − I‖, ‖P² − P‖, ‖P_iP_j‖ (i≠j), ‖[P, M]‖, scaled by
    /// the largest projection norm.
    pub fn algebra_residual(&self, m: &CMatrix) -> f64 {
        let n = m.dim();
        let scale = self
            .pairs
            .iter()
            .map(|(_, p)| p.norm_fro())
            .fold(1.0, f64::max)
            * m.norm_fro().max(1.0);
        let mut sum = CMatrix::zeros(n);
        let mut worst = 0.0f64;
        for (i, (_, p)) in self.pairs.iter().enumerate() {
            sum = &sum + p;
            worst = worst.max((&p.matmul(p) - p).norm_fro());
            for (j, (_, q)) in self.pairs.iter().enumerate() {
                if i != j {
                    worst = worst.max(p.matmul(q).norm_fro());
                }
            }
            worst = worst.max((&p.matmul(m) - &m.matmul(p)).norm_fro());
        }
        worst = worst.max((&sum - &CMatrix::identity(n)).norm_fro());
        worst / scale
    }
}

/// Cluster uncertainty radius: how far the true eigenvalue may sit from
/// the cluster center, given where the computed roots landed.
fn cluster_uncertainty(cluster: &Cluster, spec: &SpectrumMultiset, tol: &Tolerances) -> f64 {
    3.0 * cluster.radius(spec) + tol.cluster_tol(spec.max_abs())
}

/// The characteristic subspace `Ker(M − λI)^n`.
///
/// `λ` must sit within clustering tolerance of an eigenvalue. The kernel
/// is grown power by power (the power never needs to exceed the cluster
/// multiplicity), with the shifted matrix normalized to unit norm so the
/// rank cutoff tracks the eigenvalue uncertainty instead of `‖M‖^k`.
pub fn char_subspace(m: &CMatrix, lambda: Complex64, tol: &Tolerances) -> Result<Subspace> {
    let spec = spectrum(m, tol)?;
    let clusters = spec.clusters(tol);
    let target = clusters
        .iter()
        .min_by(|a, b| {
            (a.center - lambda).norm().partial_cmp(&(b.center - lambda).norm()).unwrap()
        })
        .ok_or(Error::NotAnEigenvalue { value: lambda })?;
    let ct = tol.cluster_tol(spec.max_abs());
    if (target.center - lambda).norm() > target.radius(&spec) + ct {
        return Err(Error::NotAnEigenvalue { value: lambda });
    }
    Ok(char_subspace_of_cluster(m, target, &spec, tol))
}

fn char_subspace_of_cluster(
    m: &CMatrix,
    cluster: &Cluster,
    spec: &SpectrumMultiset,
    tol: &Tolerances,
) -> Subspace {
    let n = m.dim();
    let mult = cluster.multiplicity();
    let shifted = m - &CMatrix::identity(n).scale(cluster.center);
    let norm = shifted.norm_fro();
    if norm == 0.0 {
        return Subspace::full(n);
    }
    let unit = shifted.scale(Complex64::new(1.0 / norm, 0.0));
    let u = cluster_uncertainty(cluster, spec, tol) / norm;
    let mut power = CMatrix::identity(n);
    let mut best = None;
    for k in 1..=mult {
        power = power.matmul(&unit);
        let threshold = (3.0 * k as f64 * u).max(tol.eps_rank);
        let ker = kernel_abs(&power, threshold);
        let dim = ker.dim();
        best = Some(ker);
        if dim >= mult {
            break;
        }
    }
    best.expect("multiplicity is at least one")
}

/// Eigenprojections by interpolation polynomials in `M`.
///
/// For each cluster λᵢ with multiplicity mᵢ, builds the polynomial that
/// is `1` to order mᵢ at λᵢ and `0` to order mⱼ at every other cluster
/// (inverting the complementary factor as a truncated power series), and
/// evaluates it at `M`. Refuses clusters separated by less than ten
/// clustering tolerances: such spectra cannot be split reliably.
pub fn eigenprojections(m: &CMatrix, tol: &Tolerances) -> Result<EigenprojectionSet> {
    let spec = spectrum(m, tol)?;
    eigenprojections_with_spectrum(m, &spec, tol)
}

pub(crate) fn eigenprojections_with_spectrum(
    m: &CMatrix,
    spec: &SpectrumMultiset,
    tol: &Tolerances,
) -> Result<EigenprojectionSet> {
    let n = m.dim();
    let clusters = spec.clusters(tol);
    let ct = tol.cluster_tol(spec.max_abs());
    for i in 0..clusters.len() {
        for j in i + 1..clusters.len() {
            let gap = (clusters[i].center - clusters[j].center).norm();
            if gap < 10.0 * ct {
                return Err(Error::IllConditioned { gap });
            }
        }
    }
    if clusters.len() == 1 {
        return Ok(EigenprojectionSet {
            pairs: vec![(clusters[0].center, CMatrix::identity(n))],
        });
    }
    let mut pairs = Vec::with_capacity(clusters.len());
    for (i, ci) in clusters.iter().enumerate() {
        let mi = ci.multiplicity();
        // complementary factor Q(x) = Π_{j≠i} (x − λⱼ)^{mⱼ}, evaluated at
        // M and Taylor-expanded at λᵢ for the series inverse
        let mut q_at_m = CMatrix::identity(n);
        let mut q_poly = crate::numcore::CPoly::constant(Complex64::new(1.0, 0.0));
        for (j, cj) in clusters.iter().enumerate() {
            if j == i {
                continue;
            }
            let factor = m - &CMatrix::identity(n).scale(cj.center);
            for _ in 0..cj.multiplicity() {
                q_at_m = q_at_m.matmul(&factor);
            }
            let lin = crate::numcore::CPoly::new(vec![-cj.center, Complex64::new(1.0, 0.0)]);
            for _ in 0..cj.multiplicity() {
                q_poly = q_poly.mul(&lin);
            }
        }
        // r(h) = 1/Q(λᵢ + h) truncated to order mᵢ − 1
        let q_shifted = q_poly.taylor_shift(ci.center);
        let q0 = q_shifted.coeff(0);
        let mut series = vec![Complex64::new(0.0, 0.0); mi];
        series[0] = Complex64::new(1.0, 0.0) / q0;
        for t in 1..mi {
            let mut acc = Complex64::new(0.0, 0.0);
            for s in 1..=t {
                acc += q_shifted.coeff(s) * series[t - s];
            }
            series[t] = -acc / q0;
        }
        // P = r(M − λᵢI) · Q(M)
        let shifted = m - &CMatrix::identity(n).scale(ci.center);
        let mut r_at_m = CMatrix::zeros(n);
        let mut power = CMatrix::identity(n);
        for &coeff in &series {
            r_at_m = &r_at_m + &power.scale(coeff);
            power = power.matmul(&shifted);
        }
        pairs.push((ci.center, r_at_m.matmul(&q_at_m)));
    }
    let set = EigenprojectionSet { pairs };
    let residual = set.algebra_residual(m);
    if residual > 1e3 * tol.eps_verify {
        // the projection algebra failed badly: the clusters were too close
        // to separate even though the 10× gap guard passed
        let gap = spec.min_cluster_gap(tol);
        return Err(Error::IllConditioned { gap });
    }
    Ok(set)
}

/// The decomposition `M = D + N`: `D = Σ λ Pλ` over the eigenprojections,
/// `N = M − D`.
pub fn jordan_chevalley(m: &CMatrix, tol: &Tolerances) -> Result<JCDecomposition> {
    let spec = spectrum(m, tol)?;
    let projections = eigenprojections_with_spectrum(m, &spec, tol)?;
    let n = m.dim();
    let mut d = CMatrix::zeros(n);
    for (lambda, p) in &projections.pairs {
        d = &d + &p.scale(*lambda);
    }
    let nil = m - &d;
    Ok(JCDecomposition { d, n: nil, eigenvalues: spec })
}

impl JCDecomposition {
    /// Residuals of the defining equations, scaled to the input:
    /// `(‖DN − ND‖, ‖N^n‖)` relative residuals.
    pub fn residuals(&self) -> (f64, f64) {
        let dim = self.d.dim();
        let scale = (self.d.norm_fro() * self.n.norm_fro()).max(1.0);
        let comm = (&self.d.matmul(&self.n) - &self.n.matmul(&self.d)).norm_fro() / scale;
        let nil_scale = self.n.norm_fro().powi(dim as i32).max(1.0);
        let nil = self.n.pow(dim as u32).norm_fro() / nil_scale;
        (comm, nil)
    }

    /// Checks `D` diagonalizable, `DN = ND`, `N` nilpotent, `D + N = M`.
    pub fn verify(&self, m: &CMatrix, tol: &Tolerances) -> Result<bool> {
        let (comm, nil) = self.residuals();
        let sum_resid =
            (&(&self.d + &self.n) - m).norm_fro() / m.norm_fro().max(1.0);
        Ok(sum_resid <= tol.eps_verify
            && comm <= tol.eps_verify
            && nil <= tol.eps_verify
            && is_diagonalizable(&self.d, tol)?)
    }
}

/// `e^M = e^D e^N`; when the spectrum sits in `2πiℤ`, `e^M = e^N`.
/// Exposed as a helper because several checks want the nilpotent factor.
pub fn exp_via_parts(jc: &JCDecomposition) -> Result<CMatrix> {
    let ed = expm(&jc.d)?.value;
    let en = expm(&jc.n)?.value;
    Ok(ed.matmul(&en))
}
