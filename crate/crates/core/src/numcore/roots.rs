//! Simultaneous polynomial root finding (Aberth–Ehrlich).

use num_complex::Complex64;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::numcore::{CPoly, SpectrumMultiset, Tolerances};

/// Finds all roots of `p` with multiplicity.
///
/// Uses the Aberth–Ehrlich simultaneous iteration from perturbed-circle
/// initial guesses. Deterministic: a fixed base seed is used and, on
/// non-convergence, a small ladder of retry seeds re-randomizes the
/// initial phases before giving up.
pub fn roots(p: &CPoly, tol: &Tolerances) -> Result<SpectrumMultiset> {
    let mut last = Err(Error::NonConvergence { max_iter: tol.max_iter, context: "aberth" });
    for seed in 0..4u64 {
        last = roots_seeded(p, tol, seed);
        if last.is_ok() {
            return last;
        }
    }
    last
}

/// `roots` with an explicit seed for the initial-guess phases.
pub fn roots_seeded(p: &CPoly, tol: &Tolerances, seed: u64) -> Result<SpectrumMultiset> {
    if p.degree() < 1 || p.is_zero() {
        return Err(Error::InvalidInput("root finding needs degree >= 1".into()));
    }
    // Rescale X = s·Y so the transformed roots live near the unit circle;
    // this keeps one iteration setup honest across wildly scaled inputs.
    let s = root_scale(p);
    if s == 0.0 {
        // every non-leading coefficient is zero: X^d, a d-fold root at 0
        return Ok(SpectrumMultiset::new(vec![Complex64::new(0.0, 0.0); p.degree()]));
    }
    let d = p.degree();
    let lead = p.leading();
    // q(Y) = p(sY)/(lead·s^d): coefficient k is c_k·s^{k-d}/lead
    let q = CPoly::new(
        (0..=d)
            .map(|k| p.coeff(k) / lead * Complex64::new(s.powi(k as i32 - d as i32), 0.0))
            .collect(),
    );
    let sc = Complex64::new(s, 0.0);
    let xs: Vec<Complex64> = aberth(&q, tol, seed)?.into_iter().map(|y| y * sc).collect();
    // evaluation-noise floor of the original polynomial at the roots; the
    // clustering layer uses it to recognize m-fold roots from their spread
    let noise = xs
        .iter()
        .map(|x| 2.0 * d as f64 * f64::EPSILON * p.eval_abs(x.norm()))
        .fold(0.0, f64::max);
    let raw = SpectrumMultiset::with_poly_noise(xs, noise);
    Ok(polish_multiple_roots(p, raw, tol))
}

/// Sharpens m-fold roots: an m-fold root of `p` is a simple root of the
/// (m−1)-th derivative, so Newton on that derivative recovers the center
/// to machine precision where the raw cluster mean only reaches the m-th
/// root of the noise floor. Every member of a polished cluster is
/// replaced by the common center.
fn polish_multiple_roots(
    p: &CPoly,
    raw: SpectrumMultiset,
    tol: &Tolerances,
) -> SpectrumMultiset {
    let clusters = raw.clusters(tol);
    if clusters.iter().all(|c| c.multiplicity() == 1) {
        return raw;
    }
    let mut values = raw.values().to_vec();
    for cluster in &clusters {
        let m = cluster.multiplicity();
        if m < 2 {
            continue;
        }
        let mut q = p.clone();
        for _ in 0..m - 1 {
            q = q.derivative();
        }
        let dq = q.derivative();
        let qd = q.degree() as f64;
        let mut z = cluster.center;
        let mut ok = false;
        for _ in 0..40 {
            let qv = q.eval(z);
            // stop at the evaluation-noise floor of q; the step criterion
            // alone stalls just above machine precision there
            if qv.norm() <= 4.0 * qd * f64::EPSILON * q.eval_abs(z.norm()) {
                ok = true;
                break;
            }
            let dv = dq.eval(z);
            if dv.norm() == 0.0 {
                break;
            }
            let step = qv / dv;
            z -= step;
            if step.norm() <= 1e-14 * (1.0 + z.norm()) {
                ok = true;
                break;
            }
        }
        // keep the polish only if it stayed local to the cluster
        let span = cluster.radius(&raw) + tol.cluster_tol(raw.max_abs());
        let center = if ok && (z - cluster.center).norm() <= 4.0 * span {
            z
        } else {
            cluster.center
        };
        for &idx in &cluster.members {
            values[idx] = center;
        }
    }
    SpectrumMultiset::with_poly_noise(values, raw.poly_noise())
}

/// Scale factor bounding the root magnitudes: `max_k |c_k/c_d|^{1/(d-k)}`.
fn root_scale(p: &CPoly) -> f64 {
    let d = p.degree();
    let lead = p.leading().norm();
    (0..d)
        .map(|k| (p.coeff(k).norm() / lead).powf(1.0 / (d - k) as f64))
        .fold(0.0, f64::max)
}

fn aberth(q: &CPoly, tol: &Tolerances, seed: u64) -> Result<Vec<Complex64>> {
    let d = q.degree();
    let dq = q.derivative();
    let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_mul(0x9e3779b97f4a7c15).wrapping_add(1));

    // Initial guesses on a circle of radius 1 + max|coeff|, phases spread
    // by the golden angle plus seeded jitter so no two start symmetric.
    let radius = 1.0 + q.max_coeff();
    let golden = 2.0 * std::f64::consts::PI * 0.381_966_011_250_105;
    let mut z: Vec<Complex64> = (0..d)
        .map(|i| {
            let jitter = 0.2 * (rng.gen::<f64>() - 0.5);
            let r = radius * (1.0 + 0.05 * (rng.gen::<f64>() - 0.5));
            let th = golden * i as f64 + 0.3 + jitter;
            Complex64::new(r * th.cos(), r * th.sin())
        })
        .collect();

    let mut converged = vec![false; d];
    for _ in 0..tol.max_iter {
        let mut all_done = true;
        for i in 0..d {
            if converged[i] {
                continue;
            }
            let pz = q.eval(z[i]);
            // Residual at the roundoff floor of Horner evaluation counts
            // as converged; this is what multiple roots reach in practice.
            let floor = 4.0 * (d as f64) * f64::EPSILON * q.eval_abs(z[i].norm());
            if pz.norm() <= floor {
                converged[i] = true;
                continue;
            }
            let dpz = dq.eval(z[i]);
            let newton = if dpz.norm() > 0.0 { pz / dpz } else { pz };
            let mut repulsion = Complex64::new(0.0, 0.0);
            for j in 0..d {
                if j != i {
                    let diff = z[i] - z[j];
                    if diff.norm() > 0.0 {
                        repulsion += Complex64::new(1.0, 0.0) / diff;
                    }
                }
            }
            let denom = Complex64::new(1.0, 0.0) - newton * repulsion;
            let step = if denom.norm() > 1e-300 { newton / denom } else { newton };
            z[i] -= step;
            if !(z[i].re.is_finite() && z[i].im.is_finite()) {
                // restart this particle at a fresh jittered location
                let th = rng.gen::<f64>() * 2.0 * std::f64::consts::PI;
                z[i] = Complex64::new(radius * th.cos(), radius * th.sin());
                all_done = false;
                continue;
            }
            if step.norm() <= tol.eps_root * (1.0 + z[i].norm()) {
                converged[i] = true;
            } else {
                all_done = false;
            }
        }
        if all_done {
            return Ok(z);
        }
    }
    // Accept if every residual is at the evaluation noise floor even though
    // the last sweep still moved some iterate.
    if z.iter().all(|&zi| q.eval(zi).norm() <= 16.0 * (d as f64) * f64::EPSILON * q.eval_abs(zi.norm()))
    {
        return Ok(z);
    }
    Err(Error::NonConvergence { max_iter: tol.max_iter, context: "aberth" })
}
