//! Acceptance suite: one test per criterion, each printing a pass/fail
//! line. Criterion 10 (the CLI gallery gate) lives in the CLI crate's
//! acceptance target.

use num_complex::Complex64;
use pencillab::chevalley::jordan_chevalley;
use pencillab::expmat::{expm, expm_oracle, unipotent_log};
use pencillab::numcore::{
    charpoly, common_eigenvector, is_diagonalizable, CMatrix, CPoly, Tolerances,
};
use pencillab::pencil::{
    branch_structure, eigenprojection_trajectory, property_l_pair, Pencil,
};
use pencillab::verifier::{check_condition, check_eq7, commutator, ConditionKind, IndexWindow};
use pencillab::{synth, two_pi_i};

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn report(number: u32, name: &str, ok: bool, detail: &str) {
    println!(
        "acceptance criterion {number:02} ({name}): {}{}",
        if ok { "PASS" } else { "FAIL" },
        if detail.is_empty() { String::new() } else { format!("  [{detail}]") },
    );
    assert!(ok, "criterion {number} ({name}) failed: {detail}");
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
fn c01_tu_counterexample_suite() {
    let tol = Tolerances::default();
    let (a1, b1) = tu_pair();
    let id = CMatrix::identity(3);
    let tp = two_pi_i();
    let mut detail = String::new();

    // unit exponentials along the line, residual 1e-8
    let mut worst_exp = 0.0f64;
    for m in [&a1, &b1] {
        worst_exp = worst_exp.max((&expm(m).unwrap().value - &id).norm_fro());
    }
    for t in 0..=10 {
        let m = &a1.scale(c(t as f64, 0.0)) + &b1;
        worst_exp = worst_exp.max((&expm(&m).unwrap().value - &id).norm_fro());
    }
    let exp_ok = worst_exp <= 1e-8;
    detail.push_str(&format!("max ‖e^M − I‖ = {worst_exp:.2e}"));

    // characteristic polynomial matches the affine-root form, t = 0..5
    let mut worst_coeff = 0.0f64;
    for t in 0..=5 {
        let m = &a1.scale(c(t as f64, 0.0)) + &b1;
        let got = charpoly(&m);
        let want = CPoly::from_roots(&[
            c(0.0, 0.0),
            tp * (t as f64 + 2.0),
            tp * (2.0 * t as f64 + 3.0),
        ]);
        for k in 0..=3 {
            worst_coeff = worst_coeff.max((got.coeff(k) - want.coeff(k)).norm());
        }
    }
    let charpoly_ok = worst_coeff <= 1e-8;
    detail.push_str(&format!(", max coeff dev = {worst_coeff:.2e}"));

    let no_shared = common_eigenvector(&a1, &b1, &tol).unwrap().is_none();
    let family = property_l_pair(&a1, &b1, &tol, 1).unwrap().is_some();
    let (_, comm_norm) = commutator(&a1, &b1);
    let comm_ok = comm_norm > 1.0;
    let two_sided = check_condition(
        &a1,
        &b1,
        ConditionKind::TwoSided4,
        IndexWindow::square(-2, 2),
        &tol,
    )
    .unwrap();
    let violated = !two_sided.violations.is_empty();
    detail.push_str(&format!(
        ", shared eigenvector = {}, property L = {family}, ‖[A,B]‖ = {comm_norm:.2}, \
         two-sided violations = {}",
        !no_shared,
        two_sided.violations.len()
    ));

    report(
        1,
        "tu counterexample suite",
        exp_ok && charpoly_ok && no_shared && family && comm_ok && violated,
        &detail,
    );
}

#[test]
fn c02_semigroup_counterexample_suite() {
    let tol = Tolerances::default();
    let tp = two_pi_i();
    let zero = c(0.0, 0.0);
    let one = c(1.0, 0.0);
    let a = CMatrix::from_rows(&[vec![zero, zero], vec![zero, tp]]).unwrap();
    let b = CMatrix::from_rows(&[vec![zero, one], vec![zero, tp]]).unwrap();
    let id = CMatrix::identity(2);

    let mut worst = 0.0f64;
    for m in [&a, &b, &(&a + &b)] {
        worst = worst.max((&expm(m).unwrap().value - &id).norm_fro());
    }
    let exp_ok = worst <= 1e-10;

    let (_, comm_norm) = commutator(&a, &b);
    let comm_ok = comm_norm > 0.5;

    let rep = check_condition(&a, &b, ConditionKind::TwoSided4, IndexWindow::square(-2, 2), &tol)
        .unwrap();
    let negative_violation = rep.violations.iter().any(|&((k, l), _)| k < 0 || l < 0);

    report(
        2,
        "semigroup counterexample suite",
        exp_ok && comm_ok && negative_violation,
        &format!(
            "max ‖e^M − I‖ = {worst:.2e}, ‖[A,B]‖ = {comm_norm:.2}, negative-index violation = \
             {negative_violation}"
        ),
    );
}

#[test]
fn c03_exponential_identity_on_commuting_pairs() {
    let oracle_tol = Tolerances { eps_verify: 1e-14, max_iter: 500, ..Tolerances::default() };
    let mut worst_identity = 0.0f64;
    let mut worst_agreement = 0.0f64;
    for i in 0..200u64 {
        let n = 2 + (i % 5) as usize; // 2..=6
        let (a, b) = synth::commuting_pair(n, 2.5, 1000 + i);
        let sum = &a + &b;
        let ea = expm(&a).unwrap().value;
        let eb = expm(&b).unwrap().value;
        let esum = expm(&sum).unwrap().value;
        let budget = (a.norm_one() + b.norm_one()).exp();
        worst_identity =
            worst_identity.max((&esum - &ea.matmul(&eb)).norm_fro() / budget);

        let oracle = expm_oracle(&sum, &oracle_tol).unwrap();
        worst_agreement =
            worst_agreement.max((&esum - &oracle).norm_fro() / esum.norm_fro());
    }
    report(
        3,
        "exponential identity on commuting pairs",
        worst_identity <= 1e-9 && worst_agreement <= 1e-10,
        &format!(
            "max scaled ‖e^{{A+B}} − e^A e^B‖ = {worst_identity:.2e}, max oracle deviation = \
             {worst_agreement:.2e}"
        ),
    );
}

#[test]
fn c04_nilpotent_log_round_trip() {
    let tol = Tolerances::default();
    let mut worst = 0.0f64;
    for i in 0..100u64 {
        let n = 2 + (i % 7) as usize; // 2..=8
        let scale = 0.8 / (n as f64).sqrt();
        let nm = synth::nilpotent(n, scale, 2000 + i);
        let u = expm(&nm).unwrap().value;
        let back = unipotent_log(&u, &tol).unwrap();
        worst = worst.max((&back - &nm).norm_fro() / nm.norm_fro().max(1.0));
    }
    report(
        4,
        "nilpotent log round trip",
        worst <= 1e-9,
        &format!("max round-trip deviation = {worst:.2e}"),
    );
}

#[test]
fn c05_jordan_chevalley_postconditions() {
    // engineered repeats need a looser identity threshold: an m-fold
    // characteristic root is conditioned like the m-th root of roundoff
    let tol = Tolerances { eps_cluster: 1e-5, ..Tolerances::default() };
    let mut worst = 0.0f64;
    let mut all_diag = true;
    let mut worst_equiv = 0.0f64;
    for i in 0..200u64 {
        let n = 2 + (i % 5) as usize; // 2..=6
        let (m, _, _) = synth::repeated_eigenvalue_matrix(n, 3000 + i);
        let jc = jordan_chevalley(&m, &tol).unwrap();
        let sum_resid = (&(&jc.d + &jc.n) - &m).norm_fro() / m.norm_fro().max(1.0);
        let (comm, nil) = jc.residuals();
        worst = worst.max(sum_resid).max(comm).max(nil);
        all_diag &= is_diagonalizable(&jc.d, &tol).unwrap();

        if i < 50 {
            // similarity equivariance
            let p = synth::well_conditioned(n, 9000 + i);
            let pinv = p.inverse().unwrap();
            let conj = p.matmul(&m).matmul(&pinv);
            let jc2 = jordan_chevalley(&conj, &tol).unwrap();
            let want_d = p.matmul(&jc.d).matmul(&pinv);
            let want_n = p.matmul(&jc.n).matmul(&pinv);
            let dev = (&jc2.d - &want_d).norm_fro().max((&jc2.n - &want_n).norm_fro())
                / m.norm_fro().max(1.0);
            worst_equiv = worst_equiv.max(dev);
        }
    }
    report(
        5,
        "jordan-chevalley postconditions",
        worst <= 1e-8 && all_diag && worst_equiv <= 1e-8,
        &format!(
            "max postcondition residual = {worst:.2e}, D always diagonalizable = {all_diag}, \
             max equivariance deviation = {worst_equiv:.2e}"
        ),
    );
}

#[test]
fn c06_property_l_discrimination() {
    let tol = Tolerances::default();
    let mut certified = 0;
    for i in 0..50u64 {
        let n = 2 + (i % 5) as usize; // 2..=6
        let (a, b) = synth::triangularizable_pair(n, 4000 + i);
        if property_l_pair(&a, &b, &tol, 4000 + i).unwrap().is_some() {
            certified += 1;
        }
    }

    // the swap pair and seeded perturbations of it must be rejected
    let mut rejected = 0;
    let swap_a = CMatrix::diagonal(&[c(1.0, 0.0), c(-1.0, 0.0)]);
    let swap_b = CMatrix::from_real_rows(&[vec![0.0, 1.0], vec![1.0, 0.0]]).unwrap();
    if property_l_pair(&swap_a, &swap_b, &tol, 77).unwrap().is_none() {
        rejected += 1;
    }
    for i in 0..20u64 {
        let eps = 0.02 + 0.01 * (i % 10) as f64;
        let (a, b) = if i % 2 == 0 {
            // n = 2 perturbation
            let da = synth::random_matrix(2, eps, 5000 + i);
            let db = synth::random_matrix(2, eps, 6000 + i);
            (&swap_a + &da, &swap_b + &db)
        } else {
            // n = 3 embedding with an extra well-separated eigenvalue
            let a3 = CMatrix::diagonal(&[c(1.0, 0.0), c(-1.0, 0.0), c(0.3, 0.4)]);
            let b3 = CMatrix::from_real_rows(&[
                vec![0.0, 1.0, 0.0],
                vec![1.0, 0.0, 0.0],
                vec![0.0, 0.0, 0.7],
            ])
            .unwrap();
            let da = synth::random_matrix(3, eps, 5000 + i);
            let db = synth::random_matrix(3, eps, 6000 + i);
            (&a3 + &da, &b3 + &db)
        };
        if property_l_pair(&a, &b, &tol, 7000 + i).unwrap().is_none() {
            rejected += 1;
        }
    }

    report(
        6,
        "property L discrimination",
        certified == 50 && rejected == 21,
        &format!("certified {certified}/50 triangularizable, rejected {rejected}/21 non-affine"),
    );
}

#[test]
fn c07_puiseux_branch_detection() {
    let tol = Tolerances::default();
    let shift_a = CMatrix::from_real_rows(&[vec![0.0, 1.0], vec![0.0, 0.0]]).unwrap();
    let shift_b = CMatrix::from_real_rows(&[vec![0.0, 0.0], vec![1.0, 0.0]]).unwrap();
    let shift = Pencil::new(shift_a, shift_b).unwrap();
    let bs = branch_structure(&shift, c(0.0, 0.0), &tol).unwrap();
    let shift_ok = bs.q == 1 && bs.cycles[0].length == 2;

    let mut affine_ok = 0;
    let mut tested = 0;
    for i in 0..20u64 {
        let n = 2 + (i % 3) as usize; // 2..=4
        let (a, b, _) = synth::diagonalizable_commuting_pair(n, 8000 + i);
        // certified affine family, then its collision points
        let Some(family) = property_l_pair(&a, &b, &tol, 8000 + i).unwrap() else {
            continue;
        };
        let collisions = family.collision_points(&tol).unwrap();
        let Some(&z0) = collisions.first() else { continue };
        tested += 1;
        let pencil = Pencil::new(a, b).unwrap();
        let bs = branch_structure(&pencil, z0, &tol).unwrap();
        if bs.cycles.iter().all(|cy| cy.length == 1) {
            affine_ok += 1;
        }
    }

    report(
        7,
        "puiseux branch detection",
        shift_ok && tested == 20 && affine_ok == tested,
        &format!(
            "shift pencil q=1 d=2: {shift_ok}; affine pencils all-analytic at exceptional \
             points: {affine_ok}/{tested}"
        ),
    );
}

#[test]
fn c08_eigenprojection_constancy() {
    let tol = Tolerances::default();
    let mut worst = 0.0f64;
    for i in 0..50u64 {
        let n = 2 + (i % 3) as usize; // 2..=4
        let (a, b, _) = synth::diagonalizable_commuting_pair(n, 10_000 + i);
        let pencil = Pencil::new(a, b).unwrap();
        // ten regular points on a seeded spiral; redraw any that land too
        // close to an exceptional point to produce projections
        let mut zs = Vec::new();
        let mut t = 0u64;
        while zs.len() < 10 {
            let angle = 0.7 + 0.61 * (zs.len() as f64 + 1.0) + 0.11 * t as f64;
            let radius = 0.5 + 0.17 * (zs.len() as f64) + 0.05 * t as f64;
            let z = c(radius * angle.cos(), radius * angle.sin());
            t += 1;
            if pencillab::chevalley::eigenprojections(&pencil.at(z), &tol).is_ok() {
                zs.push(z);
            }
            assert!(t < 200, "could not find ten regular points");
        }
        let rep = eigenprojection_trajectory(&pencil, &zs, &tol).unwrap();
        worst = worst.max(rep.max_deviation);
    }

    let shift_a = CMatrix::from_real_rows(&[vec![0.0, 1.0], vec![0.0, 0.0]]).unwrap();
    let shift_b = CMatrix::from_real_rows(&[vec![0.0, 0.0], vec![1.0, 0.0]]).unwrap();
    let shift = Pencil::new(shift_a, shift_b).unwrap();
    let rep =
        eigenprojection_trajectory(&shift, &[c(1.0, 0.0), c(4.0, 0.0)], &tol).unwrap();
    let moving = rep.max_deviation >= 0.1;

    report(
        8,
        "eigenprojection constancy",
        worst <= 1e-8 && moving,
        &format!(
            "max commuting-pair deviation = {worst:.2e}, shift-pencil deviation = {:.3}",
            rep.max_deviation
        ),
    );
}

#[test]
fn c09_characteristic_subspace_decomposition() {
    let tol = Tolerances::default();
    let mut all_hold = true;
    let mut worst = 0.0f64;
    for i in 0..100u64 {
        let n = 3 + (i % 3) as usize; // 3..=5
        let (a, b) = synth::product_separated_pair(n, 11_000 + i);
        let rep = check_eq7(&a, &b, &tol).unwrap();
        all_hold &= rep.holds;
        for row in &rep.rows {
            all_hold &= row.lhs_dim == row.rhs_dim;
            worst = worst.max(row.residual);
        }
    }
    report(
        9,
        "characteristic subspace decomposition",
        all_hold && worst <= 1e-8,
        &format!("all decompositions hold = {all_hold}, max subspace residual = {worst:.2e}"),
    );
}
