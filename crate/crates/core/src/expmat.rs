//! Matrix exponentials: scaling-and-squaring, an independent Taylor
//! oracle, the finite logarithm of unipotent matrices, and the
//! characterization of solutions of `e^M = I`.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::numcore::{is_diagonalizable, spectrum, CMatrix, Tolerances};

/// Norm budget above which `expm` refuses to run.
pub const EXPM_NORM_BOUND: f64 = 1e3;

/// Norm budget for the Taylor oracle.
pub const ORACLE_NORM_BOUND: f64 = 50.0;

/// Result of `expm`, with the scaling/squaring bookkeeping attached.
#[derive(Debug, Clone)]
pub struct ExpResult {
    pub value: CMatrix,
    /// Number of squarings; chosen so the scaled norm is at most 0.5.
    pub scaling_steps: u32,
    /// Order of the diagonal Padé approximant (fixed at 13).
    pub pade_order: u32,
}

// Diagonal Padé(13) numerator coefficients, ascending.
const PADE13: [f64; 14] = [
    64764752532480000.0,
    32382376266240000.0,
    7771770303897600.0,
    1187353796428800.0,
    129060195264000.0,
    10559470521600.0,
    670442572800.0,
    33522128640.0,
    1323241920.0,
    40840800.0,
    960960.0,
    16380.0,
    182.0,
    1.0,
];

/// Matrix exponential by scaling and squaring with a diagonal Padé(13)
/// approximant. The scaling threshold 0.5 is deliberately conservative;
/// at desk scale the extra squarings are free.
pub fn expm(m: &CMatrix) -> Result<ExpResult> {
    expm_bounded(m, EXPM_NORM_BOUND)
}

/// `expm` with an explicit norm budget.
pub fn expm_bounded(m: &CMatrix, bound: f64) -> Result<ExpResult> {
    let norm = m.norm_one();
    if norm > bound {
        return Err(Error::Overflow { norm, bound });
    }
    let steps = if norm > 0.5 { (norm / 0.5).log2().ceil() as u32 } else { 0 };
    let scaled = m.scale(Complex64::new(0.5f64.powi(steps as i32), 0.0));
    let mut value = pade13(&scaled)?;
    for _ in 0..steps {
        value = value.matmul(&value);
    }
    Ok(ExpResult { value, scaling_steps: steps, pade_order: 13 })
}

fn pade13(a: &CMatrix) -> Result<CMatrix> {
    let n = a.dim();
    let id = CMatrix::identity(n);
    let a2 = a.matmul(a);
    let a4 = a2.matmul(&a2);
    let a6 = a2.matmul(&a4);
    let b = |k: usize| Complex64::new(PADE13[k], 0.0);

    let w1 = &(&a6.scale(b(13)) + &a4.scale(b(11))) + &a2.scale(b(9));
    let w2 = &(&a6.scale(b(7)) + &a4.scale(b(5))) + &(&a2.scale(b(3)) + &id.scale(b(1)));
    let u = a.matmul(&(&a6.matmul(&w1) + &w2));

    let z1 = &(&a6.scale(b(12)) + &a4.scale(b(10))) + &a2.scale(b(8));
    let v = &a6.matmul(&z1)
        + &(&(&a6.scale(b(6)) + &a4.scale(b(4))) + &(&a2.scale(b(2)) + &id.scale(b(0))));

    // exp(A) ≈ (V − U)⁻¹ (V + U)
    (&v - &u).solve(&(&v + &u))
}

/// Independent exponential: plain Taylor summation with compensated
/// (Kahan) accumulation, stopping when the term norm falls below
/// `eps_verify` times the partial-sum norm. Exists to cross-check `expm`;
/// shares nothing with the Padé path.
pub fn expm_oracle(m: &CMatrix, tol: &Tolerances) -> Result<CMatrix> {
    let norm = m.norm_one();
    if norm > ORACLE_NORM_BOUND {
        return Err(Error::Overflow { norm, bound: ORACLE_NORM_BOUND });
    }
    let n = m.dim();
    let mut sum = CMatrix::identity(n);
    let mut comp = CMatrix::zeros(n); // Kahan compensation carried per entry
    let mut term = CMatrix::identity(n);
    for k in 1..=tol.max_iter {
        term = term.matmul(m).scale(Complex64::new(1.0 / k as f64, 0.0));
        // compensated add: sum += term
        let mut new_sum = CMatrix::zeros(n);
        let mut new_comp = CMatrix::zeros(n);
        for i in 0..n {
            for j in 0..n {
                let y = term.get(i, j) - comp.get(i, j);
                let t = sum.get(i, j) + y;
                new_comp.set(i, j, (t - sum.get(i, j)) - y);
                new_sum.set(i, j, t);
            }
        }
        sum = new_sum;
        comp = new_comp;
        let term_norm = term.norm_fro();
        if term_norm <= tol.eps_verify * sum.norm_fro() && k as f64 > norm {
            return Ok(sum);
        }
    }
    Err(Error::NonConvergence { max_iter: tol.max_iter, context: "exponential series" })
}

/// Logarithm of a unipotent matrix by the finite alternating series
/// `N = Σ_{k=1}^{n−1} ((−1)^{k+1}/k)(U − I)^k`.
///
/// Rejects inputs whose `(U−I)^n` is not negligible against
/// `max(1, ‖U−I‖^n)`.
pub fn unipotent_log(u: &CMatrix, tol: &Tolerances) -> Result<CMatrix> {
    let n = u.dim();
    let shifted = u - &CMatrix::identity(n);
    let residual = shifted.pow(n as u32).norm_fro();
    let allowance = tol.eps_verify * shifted.norm_fro().powi(n as i32).max(1.0);
    if residual > allowance {
        return Err(Error::NotUnipotent { residual });
    }
    let mut log = CMatrix::zeros(n);
    let mut power = CMatrix::identity(n);
    for k in 1..n {
        power = power.matmul(&shifted);
        let coeff = if k % 2 == 1 { 1.0 } else { -1.0 } / k as f64;
        log = &log + &power.scale(Complex64::new(coeff, 0.0));
    }
    Ok(log)
}

/// True iff `e^M = I`: `M` diagonalizable with every eigenvalue within
/// clustering tolerance of `2πi` times an integer.
pub fn is_unit_exponential(m: &CMatrix, tol: &Tolerances) -> Result<bool> {
    if !is_diagonalizable(m, tol)? {
        return Ok(false);
    }
    let two_pi = 2.0 * std::f64::consts::PI;
    let spec = spectrum(m, tol)?;
    Ok(spec.values().iter().all(|lambda| {
        let k = (lambda.im / two_pi).round();
        let target = Complex64::new(0.0, two_pi * k);
        (lambda - target).norm() <= tol.eps_cluster * (1.0 + lambda.norm())
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::synth;
    use crate::two_pi_i;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn tu_pair() -> (CMatrix, CMatrix) {
        let tp = two_pi_i();
        let a1 = CMatrix::diagonal(&[tp, tp * 2.0, c(0.0, 0.0)]);
        let b1 = CMatrix::from_real_rows(&[
            vec![2.0, 1.0, 1.0],
            vec![1.0, 3.0, -2.0],
            vec![1.0, 1.0, 0.0],
        ])
        .unwrap()
        .scale(tp);
        (a1, b1)
    }

    #[test]
    fn exp_of_zero_and_unit_spectra() {
        let e = expm(&CMatrix::zeros(3)).unwrap();
        assert!((&e.value - &CMatrix::identity(3)).max_abs() < 1e-14);
        assert_eq!(e.scaling_steps, 0);

        let tp = two_pi_i();
        let m = CMatrix::diagonal(&[tp, tp * 2.0]);
        let e = expm(&m).unwrap();
        assert!((&e.value - &CMatrix::identity(2)).max_abs() < 1e-12);
    }

    #[test]
    fn exp_of_tu_matrix_is_identity() {
        let (a1, _) = tu_pair();
        let e = expm(&a1).unwrap();
        assert!((&e.value - &CMatrix::identity(3)).max_abs() < 1e-10);
    }

    #[test]
    fn oracle_terminating_series() {
        let tol = Tolerances::default();
        let s = CMatrix::from_real_rows(&[vec![0.0, 1.0], vec![0.0, 0.0]]).unwrap();
        let e = expm_oracle(&s, &tol).unwrap();
        let want = CMatrix::from_real_rows(&[vec![1.0, 1.0], vec![0.0, 1.0]]).unwrap();
        assert!((&e - &want).max_abs() < 1e-14);

        // truncation tracks eps_verify; tighten it for a sharp value check
        let tight = Tolerances { eps_verify: 1e-15, ..tol };
        let one = CMatrix::diagonal(&[c(1.0, 0.0)]);
        let e = expm_oracle(&one, &tight).unwrap();
        assert!((e.get(0, 0) - c(std::f64::consts::E, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn pade_and_taylor_agree() {
        let tight = Tolerances { eps_verify: 1e-15, max_iter: 400, ..Tolerances::default() };
        for seed in 0..10 {
            let m = synth::random_matrix(4, 1.0, seed);
            let a = expm(&m).unwrap().value;
            let b = expm_oracle(&m, &tight).unwrap();
            let rel = (&a - &b).norm_fro() / a.norm_fro();
            assert!(rel < 1e-12, "seed {seed}: relative deviation {rel}");
        }
    }

    #[test]
    fn envelope_agreement_with_oracle() {
        // the working envelope: norms up to 30, dimension up to 8
        let tight = Tolerances { eps_verify: 1e-15, max_iter: 800, ..Tolerances::default() };
        for (n, target, seed) in [(6usize, 10.0f64, 21u64), (8, 30.0, 22), (5, 20.0, 23)] {
            let m = synth::rescaled_to(&synth::random_matrix(n, 1.0, seed), target);
            let a = expm(&m).unwrap().value;
            let b = expm_oracle(&m, &tight).unwrap();
            let budget = 1e-10 * target.exp();
            assert!((&a - &b).norm_fro() <= budget, "n={n} ‖M‖={target}");
        }
    }

    #[test]
    fn exp_inverse_identity() {
        for seed in 0..5 {
            let m = synth::random_matrix(4, 1.5, seed);
            let e = expm(&m).unwrap().value;
            let einv = expm(&(-&m)).unwrap().value;
            let resid = (&e.matmul(&einv) - &CMatrix::identity(4)).norm_fro();
            assert!(resid < 1e-9 * (1.0 + e.norm_fro() * einv.norm_fro()), "{resid}");
        }
    }

    #[test]
    fn commuting_product_identity() {
        for seed in 0..5 {
            let (a, b) = synth::commuting_pair(4, 2.0, seed);
            let lhs = expm(&(&a + &b)).unwrap().value;
            let rhs = expm(&a).unwrap().value.matmul(&expm(&b).unwrap().value);
            let budget = 1e-9 * (a.norm_one() + b.norm_one()).exp();
            assert!((&lhs - &rhs).norm_fro() < budget);
        }
    }

    #[test]
    fn det_of_exp_is_exp_of_trace() {
        for seed in 0..5 {
            let m = synth::random_matrix(3, 1.0, seed);
            let e = expm(&m).unwrap().value;
            let want = m.trace().exp();
            assert!((e.det() - want).norm() < 1e-8 * (1.0 + want.norm()));
        }
    }

    #[test]
    fn overflow_guard() {
        let m = CMatrix::identity(2).scale(c(2e3, 0.0));
        assert!(matches!(expm(&m), Err(Error::Overflow { .. })));
    }

    #[test]
    fn unipotent_log_examples() {
        let tol = Tolerances::default();
        assert!(unipotent_log(&CMatrix::identity(3), &tol).unwrap().max_abs() < 1e-14);

        let u = CMatrix::from_real_rows(&[vec![1.0, 1.0], vec![0.0, 1.0]]).unwrap();
        let l = unipotent_log(&u, &tol).unwrap();
        let want = CMatrix::from_real_rows(&[vec![0.0, 1.0], vec![0.0, 0.0]]).unwrap();
        assert!((&l - &want).max_abs() < 1e-14);

        // U = I + N + N²/2 for the 3×3 shift recovers N
        let nm = CMatrix::from_real_rows(&[
            vec![0.0, 1.0, 0.0],
            vec![0.0, 0.0, 1.0],
            vec![0.0, 0.0, 0.0],
        ])
        .unwrap();
        let u = &(&CMatrix::identity(3) + &nm) + &nm.matmul(&nm).scale(c(0.5, 0.0));
        let l = unipotent_log(&u, &tol).unwrap();
        assert!((&l - &nm).max_abs() < 1e-12);
    }

    #[test]
    fn unipotent_log_rejects_non_unipotent() {
        let tol = Tolerances::default();
        let m = CMatrix::diagonal(&[c(2.0, 0.0), c(1.0, 0.0)]);
        assert!(matches!(unipotent_log(&m, &tol), Err(Error::NotUnipotent { .. })));
    }

    #[test]
    fn log_exp_round_trip_on_nilpotents() {
        let tol = Tolerances::default();
        for seed in 0..5 {
            let nm = synth::nilpotent(5, 0.8, seed);
            let u = expm(&nm).unwrap().value;
            let back = unipotent_log(&u, &tol).unwrap();
            assert!((&back - &nm).norm_fro() < 1e-10 * (1.0 + nm.norm_fro()), "seed {seed}");
            assert!(back.pow(5).norm_fro() < 1e-9, "log output must stay nilpotent");
            let forward = expm(&back).unwrap().value;
            assert!((&forward - &u).norm_fro() < 1e-10 * (1.0 + u.norm_fro()));
        }
    }

    #[test]
    fn unit_exponential_verdicts() {
        let tol = Tolerances::default();
        let tp = two_pi_i();
        assert!(is_unit_exponential(&CMatrix::diagonal(&[tp, -tp]), &tol).unwrap());
        // non-diagonalizable with the right spectrum still fails
        let m = CMatrix::from_rows(&[vec![tp, c(1.0, 0.0)], vec![c(0.0, 0.0), tp]]).unwrap();
        assert!(!is_unit_exponential(&m, &tol).unwrap());
        // eigenvalue off the lattice fails
        assert!(!is_unit_exponential(&CMatrix::diagonal(&[tp * 0.5]), &tol).unwrap());
    }

    #[test]
    fn unit_exponential_along_tu_line() {
        let tol = Tolerances::default();
        let (a1, b1) = tu_pair();
        for t in 0..=5 {
            let m = &a1.scale(c(t as f64, 0.0)) + &b1;
            assert!(is_unit_exponential(&m, &tol).unwrap(), "t = {t}");
            let e = expm(&m).unwrap().value;
            assert!((&e - &CMatrix::identity(3)).max_abs() < 1e-8, "t = {t}");
        }
    }
}
