//! Complex polynomials and the trace-based characteristic polynomial.

use num_complex::Complex64;

use crate::numcore::CMatrix;

/// A polynomial over ℂ with ascending coefficients.
///
/// The zero polynomial is stored as a single zero coefficient; otherwise
/// the leading coefficient is nonzero (exact zeros are trimmed, computed
/// near-zeros are kept as data).
#[derive(Debug, Clone, PartialEq)]
pub struct CPoly {
    coeffs: Vec<Complex64>,
}

impl CPoly {
    pub fn new(mut coeffs: Vec<Complex64>) -> CPoly {
        while coeffs.len() > 1 && coeffs.last() == Some(&Complex64::new(0.0, 0.0)) {
            coeffs.pop();
        }
        if coeffs.is_empty() {
            coeffs.push(Complex64::new(0.0, 0.0));
        }
        assert!(
            coeffs.iter().all(|z| z.re.is_finite() && z.im.is_finite()),
            "polynomial coefficients must be finite"
        );
        CPoly { coeffs }
    }

    pub fn constant(c: Complex64) -> CPoly {
        CPoly::new(vec![c])
    }

    /// Monic polynomial with the given roots.
    pub fn from_roots(roots: &[Complex64]) -> CPoly {
        let mut coeffs = vec![Complex64::new(1.0, 0.0)];
        for &r in roots {
            // multiply by (X - r)
            let mut next = vec![Complex64::new(0.0, 0.0); coeffs.len() + 1];
            for (k, &c) in coeffs.iter().enumerate() {
                next[k + 1] += c;
                next[k] -= r * c;
            }
            coeffs = next;
        }
        CPoly { coeffs }
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> Complex64 {
        self.coeffs.get(k).copied().unwrap_or_else(|| Complex64::new(0.0, 0.0))
    }

    pub fn leading(&self) -> Complex64 {
        *self.coeffs.last().unwrap()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0] == Complex64::new(0.0, 0.0)
    }

    /// Horner evaluation.
    pub fn eval(&self, z: Complex64) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for &c in self.coeffs.iter().rev() {
            acc = acc * z + c;
        }
        acc
    }

    /// Evaluates `Σ |c_k| |z|^k`, the natural magnitude scale of `p(z)`;
    /// used for residual-based stopping in the root finder.
    pub fn eval_abs(&self, zabs: f64) -> f64 {
        let mut acc = 0.0;
        for &c in self.coeffs.iter().rev() {
            acc = acc * zabs + c.norm();
        }
        acc
    }

    pub fn derivative(&self) -> CPoly {
        if self.degree() == 0 {
            return CPoly::constant(Complex64::new(0.0, 0.0));
        }
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(k, &c)| c * k as f64)
            .collect();
        CPoly::new(coeffs)
    }

    pub fn mul(&self, other: &CPoly) -> CPoly {
        let mut coeffs =
            vec![Complex64::new(0.0, 0.0); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            for (j, &b) in other.coeffs.iter().enumerate() {
                coeffs[i + j] += a * b;
            }
        }
        CPoly::new(coeffs)
    }

    pub fn scale(&self, c: Complex64) -> CPoly {
        CPoly::new(self.coeffs.iter().map(|&a| a * c).collect())
    }

    /// Largest coefficient magnitude.
    pub fn max_coeff(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    /// Coefficients of `p(center + h)` as a polynomial in `h`, by repeated
    /// synthetic division.
    pub fn taylor_shift(&self, center: Complex64) -> CPoly {
        let mut work = self.coeffs.clone();
        let n = work.len();
        let mut shifted = vec![Complex64::new(0.0, 0.0); n];
        for slot in shifted.iter_mut() {
            // divide work by (X - center): remainder is the next Taylor coefficient
            let mut rem = Complex64::new(0.0, 0.0);
            for c in work.iter_mut().rev() {
                let tmp = *c + rem * center;
                rem = tmp;
                *c = tmp;
            }
            *slot = work[0];
            work.remove(0);
            if work.is_empty() {
                break;
            }
        }
        CPoly::new(shifted)
    }
}

/// Characteristic polynomial `det(XI − M)` by the Faddeev–LeVerrier
/// trace recurrence. Monic of degree `n`; needs only matrix products and
/// traces, no eigendecomposition.
pub fn charpoly(m: &CMatrix) -> CPoly {
    let n = m.dim();
    let mut coeffs = vec![Complex64::new(0.0, 0.0); n + 1];
    coeffs[n] = Complex64::new(1.0, 0.0);
    let mut acc = CMatrix::zeros(n);
    let mut c_prev = Complex64::new(1.0, 0.0);
    for k in 1..=n {
        // acc ← M (acc + c_{n-k+1} I)
        let shifted = &acc + &CMatrix::identity(n).scale(c_prev);
        acc = m.matmul(&shifted);
        let c = -acc.trace() / (k as f64);
        coeffs[n - k] = c;
        c_prev = c;
    }
    CPoly::new(coeffs)
}
