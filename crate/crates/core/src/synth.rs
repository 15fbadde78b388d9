//! Seeded construction of structured matrices and pairs.
//!
//! Everything here is deterministic given the seed; the gallery and the
//! test suites lean on these to manufacture commuting pairs, nilpotents,
//! prescribed Jordan data, and simultaneously triangularizable pairs.

use ndarray::Array2;
use num_complex::Complex64;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::numcore::{CMatrix, PivotedQr};

fn rng_for(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn gaussian(rng: &mut ChaCha8Rng) -> Complex64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex64::new(re, im) / 2.0f64.sqrt()
}

/// Random matrix with independent complex-gaussian entries, Frobenius
/// norm roughly `scale·√n`.
pub fn random_matrix(n: usize, scale: f64, seed: u64) -> CMatrix {
    let mut rng = rng_for(seed);
    CMatrix::from_fn(n, |_, _| gaussian(&mut rng) * scale)
}

/// Random unitary matrix: the Q factor of a gaussian sample.
pub fn unitary(n: usize, seed: u64) -> CMatrix {
    let g = random_matrix(n, 1.0, seed);
    let qr = PivotedQr::factor(g.array());
    CMatrix::new(qr.q).expect("Q factor is square and finite")
}

/// Well-conditioned invertible matrix: unitary times a diagonal with
/// singular values in [1, 2] (condition number at most 2).
pub fn well_conditioned(n: usize, seed: u64) -> CMatrix {
    let mut rng = rng_for(seed.wrapping_add(0x5eed));
    let q = unitary(n, seed);
    let d: Vec<Complex64> =
        (0..n).map(|_| Complex64::new(1.0 + rng.gen::<f64>(), 0.0)).collect();
    q.matmul(&CMatrix::diagonal(&d))
}

/// Rescales `m` so its 1-norm equals `target` (no-op on a zero matrix).
pub fn rescaled_to(m: &CMatrix, target: f64) -> CMatrix {
    let norm = m.norm_one();
    if norm == 0.0 {
        m.clone()
    } else {
        m.scale(Complex64::new(target / norm, 0.0))
    }
}

/// Commuting pair built as polynomials of a shared random matrix, each
/// rescaled to 1-norm near `target_norm`. Commutes exactly up to rounding.
pub fn commuting_pair(n: usize, target_norm: f64, seed: u64) -> (CMatrix, CMatrix) {
    let mut rng = rng_for(seed);
    let base = random_matrix(n, 1.0, seed.wrapping_add(1));
    let mut poly_of = |deg: usize| {
        let mut acc = CMatrix::zeros(n);
        let mut pw = CMatrix::identity(n);
        for _ in 0..=deg {
            acc = &acc + &pw.scale(gaussian(&mut rng));
            pw = pw.matmul(&base);
        }
        acc
    };
    let deg = (n - 1).clamp(1, 3);
    let a = poly_of(deg);
    let b = poly_of(deg);
    let ta = target_norm * (0.4 + 0.6 * rng.gen::<f64>());
    let tb = target_norm * (0.4 + 0.6 * rng.gen::<f64>());
    (rescaled_to(&a, ta), rescaled_to(&b, tb))
}

/// Simultaneously diagonalizable pair `P diag(a) P⁻¹`, `P diag(b) P⁻¹`
/// with all `(aᵢ, bᵢ)` pairs distinct and both spectra simple, so the
/// pencil has simple generic spectrum. Returns `(A, B, P)`.
pub fn diagonalizable_commuting_pair(n: usize, seed: u64) -> (CMatrix, CMatrix, CMatrix) {
    let mut rng = rng_for(seed.wrapping_add(7));
    let p = well_conditioned(n, seed.wrapping_add(11));
    let pinv = p.inverse().expect("well-conditioned P is invertible");
    loop {
        let a: Vec<Complex64> = (0..n).map(|_| gaussian(&mut rng) * 2.0).collect();
        let b: Vec<Complex64> = (0..n).map(|_| gaussian(&mut rng) * 2.0).collect();
        let mut ok = true;
        for i in 0..n {
            for j in 0..n {
                if i != j && ((a[i] - a[j]).norm() < 0.2 || (b[i] - b[j]).norm() < 0.2) {
                    ok = false;
                }
            }
        }
        if !ok {
            continue;
        }
        let am = p.matmul(&CMatrix::diagonal(&a)).matmul(&pinv);
        let bm = p.matmul(&CMatrix::diagonal(&b)).matmul(&pinv);
        return (am, bm, p);
    }
}

/// Simultaneously triangularizable but generically non-commuting pair:
/// a shared similarity applied to two random upper-triangular matrices.
/// Diagonals are kept well separated so both spectra are simple.
pub fn triangularizable_pair(n: usize, seed: u64) -> (CMatrix, CMatrix) {
    let mut rng = rng_for(seed.wrapping_add(13));
    let p = well_conditioned(n, seed.wrapping_add(17));
    let pinv = p.inverse().expect("well-conditioned P is invertible");
    let upper = |rng: &mut ChaCha8Rng| {
        let mut diag: Vec<Complex64> = Vec::new();
        while diag.len() < n {
            let cand = gaussian(rng) * 2.0;
            if diag.iter().all(|d| (d - cand).norm() > 0.3) {
                diag.push(cand);
            }
        }
        CMatrix::from_fn(n, |i, j| {
            if i == j {
                diag[i]
            } else if i < j {
                gaussian(rng)
            } else {
                Complex64::new(0.0, 0.0)
            }
        })
    };
    let ta = upper(&mut rng);
    let tb = upper(&mut rng);
    (p.matmul(&ta).matmul(&pinv), p.matmul(&tb).matmul(&pinv))
}

/// Random nilpotent matrix: strictly upper-triangular gaussian entries
/// conjugated by a unitary (norm-preserving, keeps nilpotency exact in
/// exact arithmetic).
pub fn nilpotent(n: usize, scale: f64, seed: u64) -> CMatrix {
    let mut rng = rng_for(seed.wrapping_add(19));
    let strict = CMatrix::from_fn(n, |i, j| {
        if i < j { gaussian(&mut rng) * scale } else { Complex64::new(0.0, 0.0) }
    });
    let q = unitary(n, seed.wrapping_add(23));
    q.matmul(&strict).matmul(&q.adjoint())
}

/// One Jordan block `λI + shift` of the given size.
pub fn jordan_block(lambda: Complex64, size: usize) -> CMatrix {
    CMatrix::from_fn(size, |i, j| {
        if i == j {
            lambda
        } else if i + 1 == j {
            Complex64::new(1.0, 0.0)
        } else {
            Complex64::new(0.0, 0.0)
        }
    })
}

/// `P · diag(blocks) · P⁻¹` for prescribed Jordan blocks `(λ, size)`,
/// with a well-conditioned `P`. Returns `(M, P)`.
pub fn with_jordan_structure(blocks: &[(Complex64, usize)], seed: u64) -> (CMatrix, CMatrix) {
    let n: usize = blocks.iter().map(|&(_, s)| s).sum();
    assert!(n >= 1);
    let mut m = CMatrix::zeros(n);
    let mut at = 0;
    for &(lambda, size) in blocks {
        let jb = jordan_block(lambda, size);
        for i in 0..size {
            for j in 0..size {
                m.set(at + i, at + j, jb.get(i, j));
            }
        }
        at += size;
    }
    let p = well_conditioned(n, seed.wrapping_add(29));
    let pinv = p.inverse().expect("well-conditioned P is invertible");
    (p.matmul(&m).matmul(&pinv), p)
}

/// Matrix with engineered repeated eigenvalues: a random mix of
/// diagonalizable repeats and defective blocks, eigenvalues separated by
/// at least 0.5. Returns `(M, D, N)` where `M = D + N` is the exact
/// split in the same similarity.
pub fn repeated_eigenvalue_matrix(n: usize, seed: u64) -> (CMatrix, CMatrix, CMatrix) {
    let mut rng = rng_for(seed.wrapping_add(31));
    // distinct eigenvalues, few enough that at least one repeats (n ≥ 2)
    let distinct = if n == 1 { 1 } else { (n - 1).min(3) };
    let mut eigs: Vec<Complex64> = Vec::new();
    while eigs.len() < distinct {
        let cand = gaussian(&mut rng) * 1.5;
        if eigs.iter().all(|e| (e - cand).norm() > 0.5) {
            eigs.push(cand);
        }
    }
    // multiplicities capped at 3: the m-th root conditioning of an m-fold
    // characteristic root eats the identity tolerance beyond that
    assert!(n <= 3 * distinct, "dimension too large for the multiplicity cap");
    let mut mults = vec![1usize; eigs.len()];
    let mut rest = n - eigs.len();
    while rest > 0 {
        let k = rng.gen_range(0..eigs.len());
        if mults[k] < 3 {
            mults[k] += 1;
            rest -= 1;
        }
    }
    // split each multiplicity into blocks: defective with probability 1/2
    let mut d_diag: Vec<Complex64> = Vec::new();
    let mut blocks: Vec<(Complex64, usize)> = Vec::new();
    for (e, m) in eigs.iter().zip(&mults) {
        let mut left = *m;
        while left > 0 {
            let size = if left >= 2 && rng.gen::<bool>() { 2 } else { 1 };
            blocks.push((*e, size));
            for _ in 0..size {
                d_diag.push(*e);
            }
            left -= size;
        }
    }
    debug_assert_eq!(blocks.iter().map(|&(_, s)| s).sum::<usize>(), n);
    // assemble J = D + N in block form, then conjugate everything by P
    let mut nil = CMatrix::zeros(n);
    let mut at = 0;
    for &(_, size) in &blocks {
        for i in 0..size.saturating_sub(1) {
            nil.set(at + i, at + i + 1, Complex64::new(1.0, 0.0));
        }
        at += size;
    }
    let d = CMatrix::diagonal(&d_diag);
    let p = well_conditioned(n, seed.wrapping_add(37));
    let pinv = p.inverse().expect("well-conditioned P is invertible");
    let conj = |x: &CMatrix| p.matmul(x).matmul(&pinv);
    let dm = conj(&d);
    let nm = conj(&nil);
    (&dm + &nm, dm, nm)
}

/// Block-diagonal pair in a shared similarity: `P·diag(A₁,A₂)·P⁻¹` and
/// `P·diag(B₁,B₂)·P⁻¹` where the two diagonal blocks have disjoint
/// spectra (block 1 shifted by +3, block 2 by −3). Returns the pair and
/// the first block size.
pub fn block_diagonal_pair(n1: usize, n2: usize, seed: u64) -> (CMatrix, CMatrix, usize) {
    let shift = |m: &CMatrix, s: f64| -> CMatrix {
        m + &CMatrix::identity(m.dim()).scale(Complex64::new(s, 0.0))
    };
    let a1 = shift(&random_matrix(n1, 0.5, seed.wrapping_add(41)), 3.0);
    let b1 = shift(&random_matrix(n1, 0.5, seed.wrapping_add(43)), 3.0);
    let a2 = shift(&random_matrix(n2, 0.5, seed.wrapping_add(47)), -3.0);
    let b2 = shift(&random_matrix(n2, 0.5, seed.wrapping_add(53)), -3.0);
    let n = n1 + n2;
    let embed = |top: &CMatrix, bot: &CMatrix| {
        CMatrix::from_fn(n, |i, j| {
            if i < n1 && j < n1 {
                top.get(i, j)
            } else if i >= n1 && j >= n1 {
                bot.get(i - n1, j - n1)
            } else {
                Complex64::new(0.0, 0.0)
            }
        })
    };
    let p = well_conditioned(n, seed.wrapping_add(59));
    let pinv = p.inverse().expect("well-conditioned P is invertible");
    let a = p.matmul(&embed(&a1, &a2)).matmul(&pinv);
    let b = p.matmul(&embed(&b1, &b2)).matmul(&pinv);
    (a, b, n1)
}

/// Pair meeting the product-separation hypotheses: simultaneously
/// diagonalized in a shared basis with `Sp(e^A) ⊂ {3^i}` and
/// `Sp(e^B) ⊂ {5^j}`, so products `λμ = 3^i 5^j` are pairwise distinct
/// over distinct `(λ, μ)`. Repeated exponents make the characteristic
/// subspaces higher-dimensional. Returns `(A, B)`.
pub fn product_separated_pair(n: usize, seed: u64) -> (CMatrix, CMatrix) {
    let mut rng = rng_for(seed.wrapping_add(61));
    let p = well_conditioned(n, seed.wrapping_add(67));
    let pinv = p.inverse().expect("well-conditioned P is invertible");
    let ln3 = 3.0f64.ln();
    let ln5 = 5.0f64.ln();
    let a: Vec<Complex64> =
        (0..n).map(|_| Complex64::new(rng.gen_range(0..3) as f64 * ln3, 0.0)).collect();
    let b: Vec<Complex64> =
        (0..n).map(|_| Complex64::new(rng.gen_range(0..3) as f64 * ln5, 0.0)).collect();
    let am = p.matmul(&CMatrix::diagonal(&a)).matmul(&pinv);
    let bm = p.matmul(&CMatrix::diagonal(&b)).matmul(&pinv);
    (am, bm)
}

/// Stack of vectorized matrices as columns of an n²×r array, for
/// span-reduction bookkeeping.
pub fn vectorized_columns(ms: &[CMatrix]) -> Array2<Complex64> {
    assert!(!ms.is_empty());
    let n = ms[0].dim();
    Array2::from_shape_fn((n * n, ms.len()), |(k, j)| ms[j].get(k % n, k / n))
}
