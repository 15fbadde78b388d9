//! Independent oracles shared by unit tests. Test builds only.

use num_complex::Complex64;

use crate::numcore::{CMatrix, CPoly};

/// Characteristic polynomial by permutation expansion of `det(XI − M)`
/// over polynomial entries. Exponential cost; the point is that it shares
/// nothing with the trace recurrence it checks.
pub(crate) fn charpoly_det_expansion(m: &CMatrix) -> CPoly {
    let n = m.dim();
    assert!(n <= 4, "expansion oracle is for n <= 4");
    let one = Complex64::new(1.0, 0.0);
    let entry = |i: usize, j: usize| -> CPoly {
        if i == j {
            CPoly::new(vec![-m.get(i, j), one])
        } else {
            CPoly::constant(-m.get(i, j))
        }
    };
    let mut acc = CPoly::constant(Complex64::new(0.0, 0.0));
    for (perm, sign) in permutations(n) {
        let mut term = CPoly::constant(Complex64::new(sign, 0.0));
        for (i, &j) in perm.iter().enumerate() {
            term = term.mul(&entry(i, j));
        }
        let coeffs: Vec<Complex64> = (0..=acc.degree().max(term.degree()))
            .map(|k| acc.coeff(k) + term.coeff(k))
            .collect();
        acc = CPoly::new(coeffs);
    }
    acc
}

fn permutations(n: usize) -> Vec<(Vec<usize>, f64)> {
    fn go(
        prefix: &mut Vec<usize>,
        used: &mut Vec<bool>,
        sign: f64,
        out: &mut Vec<(Vec<usize>, f64)>,
    ) {
        let n = used.len();
        if prefix.len() == n {
            out.push((prefix.clone(), sign));
            return;
        }
        for j in 0..n {
            if !used[j] {
                let inversions = prefix.iter().filter(|&&p| p > j).count();
                used[j] = true;
                prefix.push(j);
                go(prefix, used, sign * if inversions % 2 == 0 { 1.0 } else { -1.0 }, out);
                prefix.pop();
                used[j] = false;
            }
        }
    }
    let mut out = Vec::new();
    go(&mut Vec::new(), &mut vec![false; n], 1.0, &mut out);
    out
}
