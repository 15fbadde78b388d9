//! Executable checks for the exponential-homomorphism conditions:
//! windowed product identities, integral spectra, gamma-map injectivity,
//! characteristic-subspace decompositions, invariant splittings, and the
//! commutator itself.

mod gallery;

pub use gallery::{gallery, gallery_case, verify_claim, ClaimOutcome, GalleryClaim, GalleryEntry};

use num_complex::Complex64;

use crate::chevalley::char_subspace;
use crate::error::{Error, Result};
use crate::expmat::{expm, EXPM_NORM_BOUND};
use crate::numcore::{
    is_diagonalizable, spectrum, CMatrix, Subspace, Tolerances,
};

/// Which exponential identity a window check runs.
///
/// `Bourgeois3` is the one-sided family `e^{kA+B} = e^{kA}e^B = e^Be^{kA}`
/// over natural k. `TwoSided4` is `e^{kA+lB} = e^{kA}e^{lB}` over an
/// integer square, together with the commutation it implies. `Window` is
/// the same two-sided identity over an arbitrary rectangle.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ConditionKind {
    Bourgeois3,
    TwoSided4,
    Window,
}

/// Integer rectangle of pair indices.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct IndexWindow {
    pub k_lo: i64,
    pub k_hi: i64,
    pub l_lo: i64,
    pub l_hi: i64,
}

impl IndexWindow {
    pub fn square(lo: i64, hi: i64) -> IndexWindow {
        IndexWindow { k_lo: lo, k_hi: hi, l_lo: lo, l_hi: hi }
    }

    pub fn k_range(lo: i64, hi: i64) -> IndexWindow {
        IndexWindow { k_lo: lo, k_hi: hi, l_lo: 1, l_hi: 1 }
    }

    /// Default window per condition kind.
    pub fn default_for(kind: ConditionKind) -> IndexWindow {
        match kind {
            ConditionKind::Bourgeois3 => IndexWindow::k_range(0, 6),
            ConditionKind::TwoSided4 | ConditionKind::Window => IndexWindow::square(-3, 3),
        }
    }

    fn pairs(&self) -> Vec<(i64, i64)> {
        let mut out = Vec::new();
        for k in self.k_lo..=self.k_hi {
            for l in self.l_lo..=self.l_hi {
                out.push((k, l));
            }
        }
        out
    }
}

/// Result of a windowed condition check.
#[derive(Debug, Clone)]
pub struct ConditionReport {
    pub kind: ConditionKind,
    pub window: IndexWindow,
    pub holds: bool,
    /// `((k, l), residual)` for every violated lattice point. Residuals
    /// are relative to the magnitudes of the compared products.
    pub violations: Vec<((i64, i64), f64)>,
    /// Largest residual seen anywhere in the window.
    pub max_residual: f64,
}

/// Checks the requested exponential identity over the window.
///
/// Every equality is scored by `‖lhs − rhs‖ / max(1, ‖lhs‖, ‖rhs‖)` and
/// flagged when the score exceeds `eps_verify`. The window must keep
/// `‖kA + lB‖` under the exponential budget.
pub fn check_condition(
    a: &CMatrix,
    b: &CMatrix,
    kind: ConditionKind,
    window: IndexWindow,
    tol: &Tolerances,
) -> Result<ConditionReport> {
    if a.dim() != b.dim() {
        return Err(Error::InvalidInput("pair dimensions differ".into()));
    }
    let window = match kind {
        ConditionKind::Bourgeois3 => IndexWindow { l_lo: 1, l_hi: 1, ..window },
        _ => window,
    };
    let reach = |m: &CMatrix, lo: i64, hi: i64| m.norm_one() * lo.abs().max(hi.abs()) as f64;
    let budget = reach(a, window.k_lo, window.k_hi) + reach(b, window.l_lo, window.l_hi);
    if budget > EXPM_NORM_BOUND {
        return Err(Error::Overflow { norm: budget, bound: EXPM_NORM_BOUND });
    }

    // cache e^{kA} and e^{lB} across the window
    let mut exp_ka = std::collections::BTreeMap::new();
    for k in window.k_lo..=window.k_hi {
        exp_ka.insert(k, expm(&a.scale(Complex64::new(k as f64, 0.0)))?.value);
    }
    let mut exp_lb = std::collections::BTreeMap::new();
    for l in window.l_lo..=window.l_hi {
        exp_lb.insert(l, expm(&b.scale(Complex64::new(l as f64, 0.0)))?.value);
    }

    let mut violations = Vec::new();
    let mut max_residual = 0.0f64;
    for (k, l) in window.pairs() {
        let combined = &a.scale(Complex64::new(k as f64, 0.0))
            + &b.scale(Complex64::new(l as f64, 0.0));
        let direct = expm(&combined)?.value;
        let eka = &exp_ka[&k];
        let elb = &exp_lb[&l];
        let product = eka.matmul(elb);
        let reversed = elb.matmul(eka);
        let r1 = relative_residual(&direct, &product);
        let r2 = relative_residual(&product, &reversed);
        let residual = r1.max(r2);
        max_residual = max_residual.max(residual);
        if residual > tol.eps_verify {
            violations.push(((k, l), residual));
        }
    }
    Ok(ConditionReport { kind, window, holds: violations.is_empty(), violations, max_residual })
}

fn relative_residual(lhs: &CMatrix, rhs: &CMatrix) -> f64 {
    let scale = lhs.norm_fro().max(rhs.norm_fro()).max(1.0);
    (lhs - rhs).norm_fro() / scale
}

/// Per-point outcome of the integral-spectrum scan.
#[derive(Debug, Clone)]
pub struct IntegralSpectrumRow {
    pub k: i64,
    pub l: i64,
    pub diagonalizable: bool,
    pub spectrum_integral: bool,
    /// Largest distance from an eigenvalue to its nearest integer.
    pub max_integer_deviation: f64,
}

#[derive(Debug, Clone)]
pub struct IntegralSpectrumReport {
    pub holds: bool,
    pub rows: Vec<IntegralSpectrumRow>,
}

/// Tests diagonalizability and spectrum ⊂ ℤ for every `kA + lB` in the
/// window.
pub fn check_integral_spectrum(
    a: &CMatrix,
    b: &CMatrix,
    window: IndexWindow,
    tol: &Tolerances,
) -> Result<IntegralSpectrumReport> {
    if a.dim() != b.dim() {
        return Err(Error::InvalidInput("pair dimensions differ".into()));
    }
    let mut rows = Vec::new();
    for (k, l) in window.pairs() {
        let m = &a.scale(Complex64::new(k as f64, 0.0)) + &b.scale(Complex64::new(l as f64, 0.0));
        let diagonalizable = is_diagonalizable(&m, tol)?;
        let spec = spectrum(&m, tol)?;
        let mut max_dev = 0.0f64;
        let mut integral = true;
        for lambda in spec.values() {
            let nearest = Complex64::new(lambda.re.round(), 0.0);
            let dev = (lambda - nearest).norm();
            max_dev = max_dev.max(dev);
            if dev > tol.eps_cluster * (1.0 + lambda.norm()) {
                integral = false;
            }
        }
        rows.push(IntegralSpectrumRow {
            k,
            l,
            diagonalizable,
            spectrum_integral: integral,
            max_integer_deviation: max_dev,
        });
    }
    let holds = rows.iter().all(|r| r.diagonalizable && r.spectrum_integral);
    Ok(IntegralSpectrumReport { holds, rows })
}

/// The product map `(λ, μ) ↦ λ^k μ` over `Sp(e^A) × Sp(e^B)`.
#[derive(Debug, Clone)]
pub struct GammaMap {
    pub k: u32,
    /// `((λ, μ), λ^k μ)` over the distinct exponential eigenvalues.
    pub table: Vec<((Complex64, Complex64), Complex64)>,
}

/// Builds the gamma map for exponent `k`.
pub fn gamma_map(a: &CMatrix, b: &CMatrix, k: u32, tol: &Tolerances) -> Result<GammaMap> {
    let ea = expm(a)?.value;
    let eb = expm(b)?.value;
    let sa = spectrum(&ea, tol)?;
    let sb = spectrum(&eb, tol)?;
    let la: Vec<Complex64> = sa.clusters(tol).iter().map(|c| c.center).collect();
    let mb: Vec<Complex64> = sb.clusters(tol).iter().map(|c| c.center).collect();
    let mut table = Vec::with_capacity(la.len() * mb.len());
    for &lambda in &la {
        for &mu in &mb {
            table.push(((lambda, mu), lambda.powu(k) * mu));
        }
    }
    Ok(GammaMap { k, table })
}

/// True iff the gamma map separates distinct `(λ, μ)` pairs.
///
/// Product pairs separated by less than the identity threshold collide;
/// separations inside `[eps_cluster, 10·eps_cluster)` are refused as
/// undecidable.
pub fn gamma_injectivity(a: &CMatrix, b: &CMatrix, k: u32, tol: &Tolerances) -> Result<bool> {
    let map = gamma_map(a, b, k, tol)?;
    let scale = 1.0
        + map
            .table
            .iter()
            .map(|&(_, v)| v.norm())
            .fold(0.0, f64::max);
    let mut ambiguous: Option<f64> = None;
    for i in 0..map.table.len() {
        for j in i + 1..map.table.len() {
            let gap = (map.table[i].1 - map.table[j].1).norm();
            if gap < tol.eps_cluster * scale {
                // a definite collision settles the verdict outright
                return Ok(false);
            } else if gap < 10.0 * tol.eps_cluster * scale {
                ambiguous = Some(gap);
            }
        }
    }
    match ambiguous {
        Some(gap) => Err(Error::AmbiguousSeparation { gap }),
        None => Ok(true),
    }
}

/// Scans `k = 1..=kmax` for an exponent making the gamma map injective.
/// Exponents with ambiguous separation are skipped, not certified.
pub fn find_injective_k(
    a: &CMatrix,
    b: &CMatrix,
    kmax: u32,
    tol: &Tolerances,
) -> Result<Option<u32>> {
    for k in 1..=kmax {
        match gamma_injectivity(a, b, k, tol) {
            Ok(true) => return Ok(Some(k)),
            Ok(false) => {}
            Err(Error::AmbiguousSeparation { .. }) => {}
            Err(e) => return Err(e),
        }
    }
    Ok(None)
}

/// Report of the pairwise eigenvalue-difference rationality scan.
#[derive(Debug, Clone)]
pub struct RationalityReport {
    /// True iff every difference in `2πiℚ` (with denominator up to qmax)
    /// is already in `2πiℤ`.
    pub holds: bool,
    /// Differences found rational: `((λ, μ), numerator, denominator)`.
    pub rational_pairs: Vec<((Complex64, Complex64), i64, u64)>,
    /// Least common multiple of the denominators: scaling by it moves
    /// every detected rational difference into the integers.
    pub scaling: u64,
}

/// Checks that eigenvalue differences of `A` that are rational multiples
/// of `2πi` (denominator at most `qmax`) are integer multiples.
///
/// Rationality is detected by continued fractions at the identity
/// tolerance; undetected irrationality imposes no constraint.
pub fn check_condition6(a: &CMatrix, tol: &Tolerances, qmax: u64) -> Result<RationalityReport> {
    let spec = spectrum(a, tol)?;
    let centers: Vec<Complex64> = spec.clusters(tol).iter().map(|c| c.center).collect();
    let two_pi = 2.0 * std::f64::consts::PI;
    let mut holds = true;
    let mut rational_pairs = Vec::new();
    let mut scaling = 1u64;
    for (i, &lambda) in centers.iter().enumerate() {
        for &mu in centers.iter().skip(i + 1) {
            let diff = lambda - mu;
            // (λ−μ)/(2πi) = im/2π − i·re/2π
            let x = Complex64::new(diff.im / two_pi, -diff.re / two_pi);
            if x.im.abs() > tol.eps_cluster * (1.0 + x.norm()) {
                continue; // not a real multiple, no constraint
            }
            if let Some((p, q)) = rational_approx(x.re, qmax, tol.eps_cluster * (1.0 + x.re.abs()))
            {
                rational_pairs.push(((lambda, mu), p, q));
                scaling = lcm(scaling, q);
                if q > 1 {
                    holds = false;
                }
            }
        }
    }
    Ok(RationalityReport { holds, rational_pairs, scaling })
}

/// Best rational approximation p/q with q ≤ qmax within `tol`, via
/// continued fractions.
fn rational_approx(x: f64, qmax: u64, tol: f64) -> Option<(i64, u64)> {
    let mut a = x.floor();
    let mut frac = x - a;
    let (mut p0, mut q0) = (1i64, 0u64);
    let (mut p1, mut q1) = (a as i64, 1u64);
    for _ in 0..64 {
        if (x - p1 as f64 / q1 as f64).abs() <= tol {
            return Some((p1, q1));
        }
        if frac.abs() < 1e-15 {
            break;
        }
        let inv = 1.0 / frac;
        a = inv.floor();
        frac = inv - a;
        let p2 = a as i64 * p1 + p0;
        let q2 = a as u64 * q1 + q0;
        if q2 > qmax {
            break;
        }
        (p0, q0) = (p1, q1);
        (p1, q1) = (p2, q2);
    }
    ((x - p1 as f64 / q1 as f64).abs() <= tol).then_some((p1, q1))
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 { a } else { gcd(b, a % b) }
}

fn lcm(a: u64, b: u64) -> u64 {
    a / gcd(a, b) * b
}

/// Per-eigenvalue outcome of the characteristic-subspace decomposition
/// check.
#[derive(Debug, Clone)]
pub struct DecompositionRow {
    pub mu: Complex64,
    /// dim of the characteristic subspace of e^B at μ.
    pub lhs_dim: usize,
    /// Σ dims of the product characteristic subspaces.
    pub rhs_dim: usize,
    /// Worst mutual-containment residual.
    pub residual: f64,
}

#[derive(Debug, Clone)]
pub struct DecompositionReport {
    pub holds: bool,
    pub rows: Vec<DecompositionRow>,
}

/// Verifies that each characteristic subspace of `e^B` splits as the
/// direct sum of the characteristic subspaces of `e^A e^B` at the
/// products `λμ`, assuming `e^A`, `e^B` commute and the product map is
/// injective (checked; `HypothesisViolated` otherwise).
pub fn check_eq7(a: &CMatrix, b: &CMatrix, tol: &Tolerances) -> Result<DecompositionReport> {
    let ea = expm(a)?.value;
    let eb = expm(b)?.value;
    let comm = relative_residual(&ea.matmul(&eb), &eb.matmul(&ea));
    if comm > tol.eps_verify {
        return Err(Error::HypothesisViolated(format!(
            "e^A and e^B do not commute (residual {comm:.3e})"
        )));
    }
    if !gamma_injectivity(a, b, 1, tol)? {
        return Err(Error::HypothesisViolated(
            "the product map on Sp(e^A) × Sp(e^B) is not one-to-one".into(),
        ));
    }
    let product = ea.matmul(&eb);
    let sa = spectrum(&ea, tol)?;
    let sprod = spectrum(&product, tol)?;
    let lambdas: Vec<Complex64> = sa.clusters(tol).iter().map(|c| c.center).collect();
    let prod_centers: Vec<Complex64> = sprod.clusters(tol).iter().map(|c| c.center).collect();
    let prod_ct = tol.cluster_tol(sprod.max_abs());

    let sb = spectrum(&eb, tol)?;
    let mut rows = Vec::new();
    for mub in sb.clusters(tol) {
        let mu = mub.center;
        let lhs = char_subspace(&eb, mu, tol)?;
        let mut parts: Vec<Subspace> = Vec::new();
        for &lambda in &lambdas {
            let target = lambda * mu;
            // the product λμ contributes only when it is an eigenvalue
            if prod_centers.iter().any(|c| (c - target).norm() <= prod_ct + 1e-9) {
                parts.push(char_subspace(&product, target, tol)?);
            }
        }
        let rhs_dim: usize = parts.iter().map(|s| s.dim()).sum();
        let residual = if parts.is_empty() {
            f64::INFINITY
        } else {
            let part_refs: Vec<&Subspace> = parts.iter().collect();
            let rhs = Subspace::direct_sum(&part_refs, tol);
            lhs.distance_to(&rhs)
        };
        rows.push(DecompositionRow { mu, lhs_dim: lhs.dim(), rhs_dim, residual });
    }
    let holds = rows
        .iter()
        .all(|r| r.lhs_dim == r.rhs_dim && r.residual <= 1e3 * tol.eps_verify);
    Ok(DecompositionReport { holds, rows })
}

/// A verified invariant splitting `ℂⁿ = F ⊕ G`.
#[derive(Debug, Clone)]
pub struct PairSplitting {
    pub f: Subspace,
    pub g: Subspace,
    /// Worst invariance residual of F and G under A and B.
    pub residual: f64,
}

/// Searches for a nontrivial decomposition into subspaces invariant under
/// both matrices, assembling candidates from sub-collections of the
/// characteristic subspaces of `A`, `B`, `e^A`, `e^B`, and `e^A e^B`.
///
/// Sound but incomplete: `None` means the candidate set was exhausted,
/// not that the pair is indecomposable.
pub fn find_splitting(a: &CMatrix, b: &CMatrix, tol: &Tolerances) -> Result<Option<PairSplitting>> {
    if a.dim() != b.dim() {
        return Err(Error::InvalidInput("pair dimensions differ".into()));
    }
    let n = a.dim();
    let mut sources: Vec<CMatrix> = vec![a.clone(), b.clone()];
    if a.norm_one() <= EXPM_NORM_BOUND && b.norm_one() <= EXPM_NORM_BOUND {
        let ea = expm(a)?.value;
        let eb = expm(b)?.value;
        sources.push(ea.matmul(&eb));
        sources.push(ea);
        sources.push(eb);
    }
    let inv_scale = |m: &CMatrix| m.norm_fro().max(1.0);
    for source in &sources {
        let spec = spectrum(source, tol)?;
        let clusters = spec.clusters(tol);
        let q = clusters.len();
        if q < 2 {
            continue;
        }
        let subspaces: Vec<Subspace> = clusters
            .iter()
            .map(|cl| char_subspace(source, cl.center, tol))
            .collect::<Result<_>>()?;
        // sub-collections containing the first subspace: each split is
        // visited once
        for mask in 0..(1u32 << (q - 1)) {
            let mask = mask << 1 | 1;
            if mask == (1 << q) - 1 {
                continue; // the full collection is the trivial split
            }
            let mut fs = Vec::new();
            let mut gs = Vec::new();
            for (i, s) in subspaces.iter().enumerate() {
                if mask & (1 << i) != 0 {
                    fs.push(s);
                } else {
                    gs.push(s);
                }
            }
            let f = Subspace::direct_sum(&fs, tol);
            let g = Subspace::direct_sum(&gs, tol);
            if f.dim() == 0 || g.dim() == 0 || f.dim() + g.dim() != n {
                continue;
            }
            let residual = [&f, &g]
                .iter()
                .flat_map(|s| {
                    [a, b].map(|m| s.invariance_residual(m) / inv_scale(m))
                })
                .fold(0.0, f64::max);
            if residual <= tol.eps_verify * 1e2 {
                return Ok(Some(PairSplitting { f, g, residual }));
            }
        }
    }
    Ok(None)
}

/// `AB − BA` and an operator-norm estimate of it.
pub fn commutator(a: &CMatrix, b: &CMatrix) -> (CMatrix, f64) {
    assert_eq!(a.dim(), b.dim(), "dimension mismatch");
    let c = &a.matmul(b) - &b.matmul(a);
    let norm = c.opnorm_est();
    (c, norm)
}
