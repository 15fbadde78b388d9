//! Analysis of the one-parameter pencil `z ↦ A + zB`: generic eigenvalue
//! count, exceptional points, branch/monodromy structure near a point,
//! affine eigenvalue families, and eigenprojection trajectories.

mod property_l;
mod trajectory;

pub use property_l::{property_l_pair, property_l_span, replay_family, AffineFamily};
pub use trajectory::{eigenprojection_trajectory, TrajectoryReport};

use num_complex::Complex64;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::numcore::{
    min_cost_assignment, roots_seeded, spectrum_seeded, CMatrix, CPoly,
    SpectrumMultiset, Tolerances,
};

/// Relative eigenvalue-gap threshold that confirms an exceptional point.
///
/// Near a candidate z*, colliding branches reopen like a square root of
/// the distance, so a candidate located to ~1e-9 still shows a gap of
/// ~3e-5 there; the confirmation tolerance must sit well above that and
/// well below generic gaps.
pub const EXCEPTIONAL_GAP_TOL: f64 = 1e-4;

/// The pencil `z ↦ A + zB`.
#[derive(Debug, Clone)]
pub struct Pencil {
    a: CMatrix,
    b: CMatrix,
}

/// Counting profile of a pencil: the generic number of distinct
/// eigenvalues and the confirmed exceptional points.
#[derive(Debug, Clone)]
pub struct PencilProfile {
    /// Generic number of distinct eigenvalues.
    pub p: usize,
    /// Confirmed parameter values where the distinct count drops.
    pub exceptional_points: Vec<Complex64>,
    pub samples_used: usize,
    pub seed: u64,
    /// True when the eigenvalue-collision polynomial vanished identically
    /// (a persistent multiple eigenvalue); the exceptional list is then
    /// empty and `p` comes from sampling alone.
    pub degenerate_discriminant: bool,
}

/// One monodromy cycle of the branch structure at a point.
#[derive(Debug, Clone)]
pub struct BranchCycle {
    /// Cycle length d: the branch closes after d loops.
    pub length: usize,
    /// Common limit of the cycle's eigenvalues at the center.
    pub value_at_center: Complex64,
    /// Leading correction `b·ζ^order` in the local root `ζ = (z−z₀)^{1/d}`,
    /// absent when the branch is constant to noise level.
    pub leading_term: Option<(Complex64, usize)>,
}

/// Puiseux-style branch structure of the pencil near a point.
#[derive(Debug, Clone)]
pub struct BranchStructure {
    pub center: Complex64,
    /// Number of cycles q.
    pub q: usize,
    /// Cycles, lengths summing to n.
    pub cycles: Vec<BranchCycle>,
    /// Radius at which tracking succeeded.
    pub radius: f64,
}

/// Eigenvalue paths tracked around a circle, for branch analysis and for
/// trajectory emission.
#[derive(Debug, Clone)]
pub struct TrackedCircle {
    pub center: Complex64,
    pub radius: f64,
    /// Sample parameters, one full loop, angle-ordered.
    pub zs: Vec<Complex64>,
    /// `paths[t][j]`: value of track t at sample j.
    pub paths: Vec<Vec<Complex64>>,
    /// Closure permutation: track t continues as track `monodromy[t]`.
    pub monodromy: Vec<usize>,
}

impl Pencil {
    pub fn new(a: CMatrix, b: CMatrix) -> Result<Pencil> {
        if a.dim() != b.dim() {
            return Err(Error::InvalidInput(format!(
                "pencil matrices must share a dimension, got {} and {}",
                a.dim(),
                b.dim()
            )));
        }
        Ok(Pencil { a, b })
    }

    pub fn a(&self) -> &CMatrix {
        &self.a
    }

    pub fn b(&self) -> &CMatrix {
        &self.b
    }

    pub fn dim(&self) -> usize {
        self.a.dim()
    }

    /// The matrix `A + zB`.
    pub fn at(&self, z: Complex64) -> CMatrix {
        &self.a + &self.b.scale(z)
    }
}

/// `OSp(A + zB)`.
pub fn sample_spectrum(p: &Pencil, z: Complex64, tol: &Tolerances) -> Result<SpectrumMultiset> {
    spectrum_seeded(&p.at(z), tol, 0)
}

/// Profile of the pencil: generic distinct-eigenvalue count from seeded
/// sampling, exceptional points from the eigenvalue-collision polynomial.
///
/// The collision polynomial in z — the discriminant of the characteristic
/// polynomial with respect to X — is recovered by exact interpolation
/// from circle samples (its z-degree is at most n(n−1)); its roots are
/// candidates, and each candidate is confirmed by an actual drop in the
/// distinct count at the coarse collision tolerance.
pub fn profile(pencil: &Pencil, tol: &Tolerances, seed: u64) -> Result<PencilProfile> {
    let n = pencil.dim();
    let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_mul(0x9e37).wrapping_add(5));
    let mut samples_used = 0usize;

    // generic distinct count from random samples in a disk of radius 10
    let mut p_generic = 0usize;
    for _ in 0..20.max(2 * n) {
        let z = random_disk_point(&mut rng, 10.0);
        let spec = sample_spectrum(pencil, z, tol)?;
        samples_used += 1;
        p_generic = p_generic.max(spec.distinct_count(tol));
    }

    if n == 1 {
        return Ok(PencilProfile {
            p: 1,
            exceptional_points: Vec::new(),
            samples_used,
            seed,
            degenerate_discriminant: false,
        });
    }

    // scale the pencil so sampled spectra are O(1); exceptional points in
    // z are untouched by a global rescale of A and B
    let scale = 1.0 / (pencil.a.norm_one() + 1.3 * pencil.b.norm_one()).max(1.0);
    let sc = Complex64::new(scale, 0.0);
    let scaled = Pencil { a: pencil.a.scale(sc), b: pencil.b.scale(sc) };

    // interpolate the collision polynomial on a circle: the z-degree of
    // disc_X(χ) is at most n(n−1), so n(n−1)+1 samples pin it exactly
    let deg_bound = n * (n - 1);
    let m = deg_bound + 1;
    let radius = 1.3;
    let mut disc_samples = Vec::with_capacity(m);
    for k in 0..m {
        let th = 2.0 * std::f64::consts::PI * k as f64 / m as f64;
        let z = Complex64::new(radius * th.cos(), radius * th.sin());
        let spec = sample_spectrum(&scaled, z, tol)?;
        samples_used += 1;
        disc_samples.push(discriminant_from_roots(spec.values()));
    }
    // a persistent multiple eigenvalue means the collision polynomial is
    // identically zero; the generic count detects it scale-free (the raw
    // sample magnitudes shrink geometrically with n even for healthy
    // pencils, so they cannot be thresholded directly)
    let max_sample = disc_samples.iter().map(|d| d.norm()).fold(0.0, f64::max);
    if p_generic < n || max_sample == 0.0 {
        return Ok(PencilProfile {
            p: p_generic,
            exceptional_points: Vec::new(),
            samples_used,
            seed,
            degenerate_discriminant: true,
        });
    }

    // inverse DFT on the circle recovers the coefficients
    let norm = Complex64::new(1.0 / max_sample, 0.0);
    let mut coeffs = Vec::with_capacity(m);
    for k in 0..m {
        let mut acc = Complex64::new(0.0, 0.0);
        for (j, d) in disc_samples.iter().enumerate() {
            let th = -2.0 * std::f64::consts::PI * (k * j) as f64 / m as f64;
            acc += d * norm * Complex64::new(th.cos(), th.sin());
        }
        acc /= m as f64;
        acc /= Complex64::new(radius, 0.0).powu(k as u32);
        coeffs.push(acc);
    }
    // trim interpolation noise above the true degree
    let max_coeff = coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max);
    for c in coeffs.iter_mut() {
        if c.norm() < 1e-10 * max_coeff {
            *c = Complex64::new(0.0, 0.0);
        }
    }
    let disc_poly = CPoly::new(coeffs);
    if disc_poly.degree() == 0 {
        return Ok(PencilProfile {
            p: p_generic,
            exceptional_points: Vec::new(),
            samples_used,
            seed,
            degenerate_discriminant: false,
        });
    }

    let candidate_roots = roots_seeded(&disc_poly, tol, seed)?;
    // The collision polynomial vanishes to second order at an affine
    // crossing, so its computed roots arrive as pairs split by the square
    // root of the coefficient noise. Cluster candidates at the
    // confirmation scale and keep the means.
    let dedupe = EXCEPTIONAL_GAP_TOL * (1.0 + candidate_roots.max_abs());
    let candidates: Vec<Complex64> = candidate_roots
        .clusters_with_tol(dedupe)
        .into_iter()
        .map(|cl| cl.center)
        .collect();
    let mut exceptional = Vec::new();
    for z in candidates {
        let spec = sample_spectrum(pencil, z, tol)?;
        samples_used += 1;
        let coarse = EXCEPTIONAL_GAP_TOL * (1.0 + spec.max_abs());
        if spec.clusters_with_tol(coarse).len() < p_generic {
            exceptional.push(z);
        }
    }
    exceptional.sort_by(|a, b| {
        a.re.partial_cmp(&b.re).unwrap().then(a.im.partial_cmp(&b.im).unwrap())
    });

    Ok(PencilProfile {
        p: p_generic,
        exceptional_points: exceptional,
        samples_used,
        seed,
        degenerate_discriminant: false,
    })
}

/// `Π_{i<j} (zᵢ − zⱼ)²` over the eigenvalues: the discriminant of the
/// monic characteristic polynomial.
fn discriminant_from_roots(values: &[Complex64]) -> Complex64 {
    let mut acc = Complex64::new(1.0, 0.0);
    for i in 0..values.len() {
        for j in i + 1..values.len() {
            let d = values[i] - values[j];
            acc *= d * d;
        }
    }
    acc
}

fn random_disk_point(rng: &mut ChaCha8Rng, radius: f64) -> Complex64 {
    let r = radius * rng.gen::<f64>().sqrt();
    let th = 2.0 * std::f64::consts::PI * rng.gen::<f64>();
    Complex64::new(r * th.cos(), r * th.sin())
}

/// Tracks the pencil eigenvalues once around the circle
/// `z₀ + r·e^{iθ}` at `angles` equally spaced samples.
///
/// Continuation matches consecutive spectra by minimum-cost assignment
/// and refuses ambiguous steps, where a competing candidate sits within
/// twice the matched distance or two tracked values collide outright.
pub fn track_circle(
    pencil: &Pencil,
    center: Complex64,
    radius: f64,
    angles: usize,
    tol: &Tolerances,
) -> Result<TrackedCircle> {
    assert!(angles >= 8, "need at least 8 samples around the circle");
    let n = pencil.dim();
    let zs: Vec<Complex64> = (0..angles)
        .map(|j| {
            let th = 2.0 * std::f64::consts::PI * j as f64 / angles as f64;
            center + Complex64::new(radius * th.cos(), radius * th.sin())
        })
        .collect();
    let mut spectra = Vec::with_capacity(angles);
    for &z in &zs {
        spectra.push(sample_spectrum(pencil, z, tol)?);
    }

    let mut paths: Vec<Vec<Complex64>> = spectra[0].values().iter().map(|&v| vec![v]).collect();
    let mut current: Vec<Complex64> = spectra[0].values().to_vec();
    let cluster_scale = tol.cluster_tol(spectra.iter().map(|s| s.max_abs()).fold(0.0, f64::max));

    let step = |current: &mut Vec<Complex64>,
                    next: &[Complex64],
                    paths: Option<&mut Vec<Vec<Complex64>>>|
     -> Result<Vec<usize>> {
        let cost: Vec<Vec<f64>> = current
            .iter()
            .map(|&c| next.iter().map(|&t| (c - t).norm()).collect())
            .collect();
        let perm = min_cost_assignment(&cost);
        // ambiguity guards
        for (i, &j) in perm.iter().enumerate() {
            let matched = cost[i][j];
            let second = (0..n)
                .filter(|&k| k != j)
                .map(|k| cost[i][k])
                .fold(f64::INFINITY, f64::min);
            if second < 2.0 * matched {
                return Err(Error::TrackingAmbiguous { radius });
            }
        }
        for i in 0..n {
            for k in i + 1..n {
                if (next[i] - next[k]).norm() <= cluster_scale {
                    return Err(Error::TrackingAmbiguous { radius });
                }
            }
        }
        if let Some(paths) = paths {
            for (i, &j) in perm.iter().enumerate() {
                paths[i].push(next[j]);
            }
        }
        for (i, &j) in perm.iter().enumerate() {
            current[i] = next[j];
        }
        Ok(perm)
    };

    for spec in spectra.iter().skip(1) {
        step(&mut current, spec.values(), Some(&mut paths))?;
    }
    // closure: match the end of each track back to the start values
    let start: Vec<Complex64> = paths.iter().map(|p| p[0]).collect();
    let closure = step(&mut current, &start, None)?;

    Ok(TrackedCircle { center, radius, zs, paths, monodromy: closure })
}

/// Branch structure at `z₀`: monodromy cycles from circle tracking and a
/// leading-term fit per cycle.
///
/// Starts at the default radius 1e-2 and halves on ambiguity, at most
/// five times.
pub fn branch_structure(
    pencil: &Pencil,
    center: Complex64,
    tol: &Tolerances,
) -> Result<BranchStructure> {
    branch_structure_with(pencil, center, 1e-2, 64, tol)
}

/// `branch_structure` with explicit starting radius and sample count.
pub fn branch_structure_with(
    pencil: &Pencil,
    center: Complex64,
    start_radius: f64,
    angles: usize,
    tol: &Tolerances,
) -> Result<BranchStructure> {
    let angles = angles.max(64);
    let mut radius = start_radius;
    let mut last_err = None;
    for _ in 0..=5 {
        match track_circle(pencil, center, radius, angles, tol) {
            Ok(tracked) => return Ok(analyze_cycles(&tracked)),
            Err(Error::TrackingAmbiguous { .. }) => {
                last_err = Some(Error::TrackingAmbiguous { radius });
                radius /= 2.0;
            }
            Err(e) => return Err(e),
        }
    }
    Err(last_err.unwrap_or(Error::TrackingAmbiguous { radius }))
}

fn analyze_cycles(tracked: &TrackedCircle) -> BranchStructure {
    let n = tracked.paths.len();
    let m = tracked.zs.len();
    let mut seen = vec![false; n];
    let mut cycles = Vec::new();
    for start in 0..n {
        if seen[start] {
            continue;
        }
        // walk the monodromy orbit of this track
        let mut orbit = vec![start];
        seen[start] = true;
        let mut at = tracked.monodromy[start];
        while at != start {
            seen[at] = true;
            orbit.push(at);
            at = tracked.monodromy[at];
        }
        let d = orbit.len();
        // concatenated samples of the analytic branch over d loops: the
        // local coordinate ζ = (z−z₀)^{1/d} sweeps its circle once
        let samples: Vec<Complex64> =
            orbit.iter().flat_map(|&t| tracked.paths[t][0..m].iter().copied()).collect();
        let total = samples.len();
        let rho = tracked.radius.powf(1.0 / d as f64);
        // Fourier modes of the concatenated path: mode k is c_k ρ^k
        let mode = |k: usize| -> Complex64 {
            let mut acc = Complex64::new(0.0, 0.0);
            for (j, &s) in samples.iter().enumerate() {
                let th = -2.0 * std::f64::consts::PI * (k * j) as f64 / total as f64;
                acc += s * Complex64::new(th.cos(), th.sin());
            }
            acc / total as f64
        };
        let value_at_center = mode(0);
        let kmax = (8 * d).min(total / 2);
        let mut best: Option<(usize, Complex64, f64)> = None;
        for k in 1..=kmax {
            let contribution = mode(k);
            if best.as_ref().is_none_or(|&(_, _, b)| contribution.norm() > b) {
                best = Some((k, contribution, contribution.norm()));
            }
        }
        let noise_floor = 1e3 * f64::EPSILON * (1.0 + value_at_center.norm());
        let leading_term = best.and_then(|(k, contribution, mag)| {
            if mag > noise_floor.max(1e-9 * (1.0 + value_at_center.norm())) {
                let b = contribution / Complex64::new(rho, 0.0).powu(k as u32);
                Some((b, k))
            } else {
                None
            }
        });
        cycles.push(BranchCycle { length: d, value_at_center, leading_term });
    }
    cycles.sort_by_key(|cy| std::cmp::Reverse(cy.length));
    BranchStructure {
        center: tracked.center,
        q: cycles.len(),
        cycles,
        radius: tracked.radius,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numcore::multiset_match;
    use crate::synth;
    use crate::two_pi_i;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn shift_pencil() -> Pencil {
        let a = CMatrix::from_real_rows(&[vec![0.0, 1.0], vec![0.0, 0.0]]).unwrap();
        let b = CMatrix::from_real_rows(&[vec![0.0, 0.0], vec![1.0, 0.0]]).unwrap();
        Pencil::new(a, b).unwrap()
    }

    fn tu_reversed_pencil() -> Pencil {
        // B₁ + t·A₁: eigenvalues 0, 2iπ(t+2), 2iπ(2t+3)
        let tp = two_pi_i();
        let a1 = CMatrix::diagonal(&[tp, tp * 2.0, c(0.0, 0.0)]);
        let b1 = CMatrix::from_real_rows(&[
            vec![2.0, 1.0, 1.0],
            vec![1.0, 3.0, -2.0],
            vec![1.0, 1.0, 0.0],
        ])
        .unwrap()
        .scale(tp);
        Pencil::new(b1, a1).unwrap()
    }

    #[test]
    fn sample_spectrum_constant_pencil() {
        let tol = Tolerances::default();
        let a = CMatrix::diagonal(&[c(1.0, 0.0), c(-2.0, 0.5)]);
        let p = Pencil::new(a.clone(), CMatrix::zeros(2)).unwrap();
        let s = sample_spectrum(&p, c(3.7, -1.2), &tol).unwrap();
        let want = crate::numcore::spectrum(&a, &tol).unwrap();
        assert!(multiset_match(&s, &want, &tol).is_some());
    }

    #[test]
    fn sample_spectrum_tu_reversed_at_2() {
        let tol = Tolerances::default();
        let p = tu_reversed_pencil();
        let s = sample_spectrum(&p, c(2.0, 0.0), &tol).unwrap();
        let tp = two_pi_i();
        let want = SpectrumMultiset::new(vec![c(0.0, 0.0), tp * 4.0, tp * 7.0]);
        assert!(multiset_match(&s, &want, &tol).is_some(), "{:?}", s.values());
    }

    #[test]
    fn sample_spectrum_shift_pencil() {
        let tol = Tolerances::default();
        let s = sample_spectrum(&shift_pencil(), c(4.0, 0.0), &tol).unwrap();
        let want = SpectrumMultiset::new(vec![c(2.0, 0.0), c(-2.0, 0.0)]);
        assert!(multiset_match(&s, &want, &tol).is_some());
    }

    #[test]
    fn profile_of_affine_diagonal_pencil() {
        // diag(z, 1−z): the forms collide at z = 1/2 only
        let tol = Tolerances::default();
        let a = CMatrix::diagonal(&[c(0.0, 0.0), c(1.0, 0.0)]);
        let b = CMatrix::diagonal(&[c(1.0, 0.0), c(-1.0, 0.0)]);
        let p = Pencil::new(a, b).unwrap();
        let prof = profile(&p, &tol, 1).unwrap();
        assert_eq!(prof.p, 2);
        assert!(!prof.degenerate_discriminant);
        assert_eq!(prof.exceptional_points.len(), 1, "{:?}", prof.exceptional_points);
        assert!((prof.exceptional_points[0] - c(0.5, 0.0)).norm() < 1e-5);
    }

    #[test]
    fn profile_of_tu_reversed_pencil() {
        let tol = Tolerances::default();
        let prof = profile(&tu_reversed_pencil(), &tol, 2).unwrap();
        assert_eq!(prof.p, 3);
        let want = [c(-2.0, 0.0), c(-1.5, 0.0), c(-1.0, 0.0)];
        assert_eq!(prof.exceptional_points.len(), 3, "{:?}", prof.exceptional_points);
        for w in want {
            assert!(
                prof.exceptional_points.iter().any(|z| (z - w).norm() < 2e-5),
                "missing {w}, got {:?}",
                prof.exceptional_points
            );
        }
    }

    #[test]
    fn profile_of_constant_pencil() {
        let tol = Tolerances::default();
        let a = CMatrix::diagonal(&[c(1.0, 0.0), c(2.0, 0.0), c(3.0, 0.0)]);
        let p = Pencil::new(a, CMatrix::zeros(3)).unwrap();
        let prof = profile(&p, &tol, 3).unwrap();
        assert_eq!(prof.p, 3);
        assert!(prof.exceptional_points.is_empty());
    }

    #[test]
    fn profile_flags_persistent_multiplicity() {
        // A + zB with a forced persistent double eigenvalue
        let tol = Tolerances::default();
        let a = CMatrix::diagonal(&[c(1.0, 0.0), c(1.0, 0.0), c(0.0, 0.0)]);
        let b = CMatrix::diagonal(&[c(1.0, 0.0), c(1.0, 0.0), c(-1.0, 0.0)]);
        let p = Pencil::new(a, b).unwrap();
        let prof = profile(&p, &tol, 4).unwrap();
        assert!(prof.degenerate_discriminant);
        assert!(prof.exceptional_points.is_empty());
        assert_eq!(prof.p, 2);
    }

    #[test]
    fn profile_of_larger_pencil_is_not_degenerate() {
        // collision values shrink geometrically with n; the degeneracy
        // verdict must not read that as a vanishing polynomial
        let tol = Tolerances::default();
        let (a, b, _) = synth::diagonalizable_commuting_pair(5, 77);
        let p = Pencil::new(a, b).unwrap();
        let prof = profile(&p, &tol, 5).unwrap();
        assert!(!prof.degenerate_discriminant);
        assert_eq!(prof.p, 5);
        assert!(!prof.exceptional_points.is_empty(), "affine families generically collide");
    }

    #[test]
    fn branch_structure_of_shift_pencil() {
        // eigenvalues ±√z: one cycle of length 2, leading term 1·ζ
        let tol = Tolerances::default();
        let bs = branch_structure(&shift_pencil(), c(0.0, 0.0), &tol).unwrap();
        assert_eq!(bs.q, 1);
        assert_eq!(bs.cycles[0].length, 2);
        assert!(bs.cycles[0].value_at_center.norm() < 1e-8);
        // the sheet labeling fixes the coefficient only up to sign
        let (b, order) = bs.cycles[0].leading_term.expect("√z has a leading term");
        assert_eq!(order, 1);
        assert!(
            (b - c(1.0, 0.0)).norm() < 1e-6 || (b + c(1.0, 0.0)).norm() < 1e-6,
            "leading coefficient {b}"
        );
    }

    #[test]
    fn branch_structure_at_affine_collision() {
        // affine family ⇒ trivial monodromy at the exceptional point
        let tol = Tolerances::default();
        let bs = branch_structure(&tu_reversed_pencil(), c(-1.0, 0.0), &tol).unwrap();
        assert_eq!(bs.q, 3);
        assert!(bs.cycles.iter().all(|cy| cy.length == 1));
        // the two colliding branches both limit to 2iπ(t+2) = 2iπ at t=−1
        let tp = two_pi_i();
        let near_tp = bs
            .cycles
            .iter()
            .filter(|cy| (cy.value_at_center - tp).norm() < 1e-4)
            .count();
        assert_eq!(near_tp, 2, "{:?}", bs.cycles);
    }

    #[test]
    fn branch_structure_at_regular_point() {
        let tol = Tolerances::default();
        let (a, b) = synth::commuting_pair(3, 1.0, 17);
        let p = Pencil::new(a, b).unwrap();
        let bs = branch_structure(&p, c(0.37, 0.21), &tol).unwrap();
        assert!(bs.cycles.iter().all(|cy| cy.length == 1));
        assert_eq!(bs.cycles.iter().map(|cy| cy.length).sum::<usize>(), 3);
    }

    #[test]
    fn tracked_paths_are_continuous() {
        let tol = Tolerances::default();
        let tracked = track_circle(&shift_pencil(), c(0.0, 0.0), 1e-2, 64, &tol).unwrap();
        // consecutive steps must stay below the inter-branch gap
        for path in &tracked.paths {
            for w in path.windows(2) {
                assert!((w[1] - w[0]).norm() < 0.05);
            }
        }
        // monodromy is the transposition of the two tracks
        assert_eq!(tracked.monodromy, vec![1, 0]);
    }
}
