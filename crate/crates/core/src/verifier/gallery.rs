//! Built-in gallery of matrix pairs with checkable claims: the standard
//! counterexamples plus seeded reference pairs. The CLI exposes it as an
//! assertable suite.

use num_complex::Complex64;

use crate::error::Result;
use crate::expmat::{expm, is_unit_exponential};
use crate::numcore::{common_eigenvector, CMatrix, Tolerances};
use crate::pencil::{branch_structure, eigenprojection_trajectory, property_l_pair, Pencil};
use crate::two_pi_i;
use crate::verifier::{check_condition, commutator, find_splitting, ConditionKind, IndexWindow};

/// A claim the test suite asserts about a gallery pair.
#[derive(Debug, Clone, PartialEq)]
pub enum GalleryClaim {
    /// `e^A = I` within `eps_verify`.
    ExpAIsIdentity,
    /// `e^B = I` within `eps_verify`.
    ExpBIsIdentity,
    /// `e^{tA+B} = I` for every integer t in the range.
    ExpLineIsIdentity { t_lo: i64, t_hi: i64 },
    /// The one-sided condition holds on the default window.
    OneSidedHolds,
    /// The two-sided condition holds on the symmetric window.
    TwoSidedHolds { half_width: i64 },
    /// The two-sided condition is violated somewhere on the window.
    TwoSidedFails { half_width: i64 },
    /// The two-sided condition is violated at some negative index.
    TwoSidedFailsAtNegativeIndex { half_width: i64 },
    /// Commutator operator norm is at most `eps_verify`-scale.
    Commutes,
    /// Commutator operator norm exceeds the bound.
    CommutatorExceeds(f64),
    /// `property_l_pair` certifies a family (or refuses, when false).
    PropertyL(bool),
    /// The pair shares no eigenvector.
    NoCommonEigenvector,
    /// No invariant splitting among the candidate subspaces.
    SplittingAbsent,
    /// The branch structure at the origin is one cycle of the length.
    MonodromyCycleAtOrigin { length: usize },
    /// Eigenprojections move by at least this much between z=1 and z=4.
    ProjectionDeviationAtLeast(f64),
}

/// One gallery case: a named pair and its asserted claims.
#[derive(Debug, Clone)]
pub struct GalleryEntry {
    pub name: &'static str,
    pub description: &'static str,
    pub a: CMatrix,
    pub b: CMatrix,
    pub claims: Vec<GalleryClaim>,
}

/// Outcome of checking one claim.
#[derive(Debug, Clone)]
pub struct ClaimOutcome {
    pub claim: GalleryClaim,
    pub passed: bool,
    pub detail: String,
}

/// The built-in cases. Deterministic, including the seeded ones.
pub fn gallery() -> Vec<GalleryEntry> {
    let tp = two_pi_i();
    let zero = Complex64::new(0.0, 0.0);
    let one = Complex64::new(1.0, 0.0);

    let a1 = CMatrix::diagonal(&[tp, tp * 2.0, zero]);
    let b1 = CMatrix::from_real_rows(&[
        vec![2.0, 1.0, 1.0],
        vec![1.0, 3.0, -2.0],
        vec![1.0, 1.0, 0.0],
    ])
    .expect("static shape")
    .scale(tp);

    let sg_a = CMatrix::from_rows(&[vec![zero, zero], vec![zero, tp]]).expect("static shape");
    let sg_b = CMatrix::from_rows(&[vec![zero, one], vec![zero, tp]]).expect("static shape");

    let (com_a, com_b) = crate::synth::commuting_pair(3, 2.0, 0xC0);

    let shift_a =
        CMatrix::from_real_rows(&[vec![0.0, 1.0], vec![0.0, 0.0]]).expect("static shape");
    let shift_b =
        CMatrix::from_real_rows(&[vec![0.0, 0.0], vec![1.0, 0.0]]).expect("static shape");

    let (tri_a, tri_b) = crate::synth::triangularizable_pair(3, 0x7A);

    vec![
        GalleryEntry {
            name: "tu",
            description: "3x3 pair with unit exponentials along the whole line tA+B, \
                          no shared eigenvector, affine eigenvalue family, nonzero commutator",
            a: a1,
            b: b1,
            claims: vec![
                GalleryClaim::ExpAIsIdentity,
                GalleryClaim::ExpBIsIdentity,
                GalleryClaim::ExpLineIsIdentity { t_lo: 0, t_hi: 10 },
                GalleryClaim::OneSidedHolds,
                GalleryClaim::TwoSidedFails { half_width: 2 },
                GalleryClaim::NoCommonEigenvector,
                GalleryClaim::PropertyL(true),
                GalleryClaim::CommutatorExceeds(1.0),
            ],
        },
        GalleryEntry {
            name: "semigroup2x2",
            description: "2x2 pair with e^A = e^B = e^{A+B} = I yet AB != BA; the two-sided \
                          condition breaks at a negative index",
            a: sg_a,
            b: sg_b,
            claims: vec![
                GalleryClaim::ExpAIsIdentity,
                GalleryClaim::ExpBIsIdentity,
                GalleryClaim::ExpLineIsIdentity { t_lo: 1, t_hi: 1 },
                GalleryClaim::TwoSidedFailsAtNegativeIndex { half_width: 2 },
                GalleryClaim::CommutatorExceeds(0.5),
                GalleryClaim::SplittingAbsent,
            ],
        },
        GalleryEntry {
            name: "commuting",
            description: "seeded commuting pair (polynomials in a shared matrix)",
            a: com_a,
            b: com_b,
            claims: vec![
                GalleryClaim::TwoSidedHolds { half_width: 3 },
                GalleryClaim::Commutes,
                GalleryClaim::PropertyL(true),
            ],
        },
        GalleryEntry {
            name: "shift2x2",
            description: "shift / transposed-shift pencil: eigenvalues ±√z, square-root \
                          branch point at the origin, moving eigenprojections",
            a: shift_a,
            b: shift_b,
            claims: vec![
                GalleryClaim::PropertyL(false),
                GalleryClaim::MonodromyCycleAtOrigin { length: 2 },
                GalleryClaim::ProjectionDeviationAtLeast(0.1),
            ],
        },
        GalleryEntry {
            name: "triangular",
            description: "seeded simultaneously triangularizable pair: affine eigenvalue \
                          family without commuting",
            a: tri_a,
            b: tri_b,
            claims: vec![
                GalleryClaim::PropertyL(true),
                GalleryClaim::CommutatorExceeds(1e-3),
            ],
        },
    ]
}

/// Looks up a case by name.
pub fn gallery_case(name: &str) -> Option<GalleryEntry> {
    gallery().into_iter().find(|e| e.name == name)
}

/// Checks one claim against a pair.
pub fn verify_claim(
    a: &CMatrix,
    b: &CMatrix,
    claim: &GalleryClaim,
    tol: &Tolerances,
    seed: u64,
) -> Result<ClaimOutcome> {
    let n = a.dim();
    let id = CMatrix::identity(n);
    let (passed, detail) = match claim {
        GalleryClaim::ExpAIsIdentity => {
            let resid = (&expm(a)?.value - &id).norm_fro();
            let unit = is_unit_exponential(a, tol)?;
            (resid <= tol.eps_verify && unit, format!("‖e^A − I‖ = {resid:.3e}, unit={unit}"))
        }
        GalleryClaim::ExpBIsIdentity => {
            let resid = (&expm(b)?.value - &id).norm_fro();
            let unit = is_unit_exponential(b, tol)?;
            (resid <= tol.eps_verify && unit, format!("‖e^B − I‖ = {resid:.3e}, unit={unit}"))
        }
        GalleryClaim::ExpLineIsIdentity { t_lo, t_hi } => {
            let mut worst = 0.0f64;
            for t in *t_lo..=*t_hi {
                let m = &a.scale(Complex64::new(t as f64, 0.0)) + b;
                worst = worst.max((&expm(&m)?.value - &id).norm_fro());
            }
            (worst <= tol.eps_verify, format!("max ‖e^{{tA+B}} − I‖ = {worst:.3e}"))
        }
        GalleryClaim::OneSidedHolds => {
            let rep = check_condition(
                a,
                b,
                ConditionKind::Bourgeois3,
                IndexWindow::default_for(ConditionKind::Bourgeois3),
                tol,
            )?;
            (rep.holds, format!("max residual {:.3e}", rep.max_residual))
        }
        GalleryClaim::TwoSidedHolds { half_width } => {
            let rep = check_condition(
                a,
                b,
                ConditionKind::TwoSided4,
                IndexWindow::square(-half_width, *half_width),
                tol,
            )?;
            (rep.holds, format!("max residual {:.3e}", rep.max_residual))
        }
        GalleryClaim::TwoSidedFails { half_width } => {
            let rep = check_condition(
                a,
                b,
                ConditionKind::TwoSided4,
                IndexWindow::square(-half_width, *half_width),
                tol,
            )?;
            (!rep.holds, format!("{} violations", rep.violations.len()))
        }
        GalleryClaim::TwoSidedFailsAtNegativeIndex { half_width } => {
            let rep = check_condition(
                a,
                b,
                ConditionKind::TwoSided4,
                IndexWindow::square(-half_width, *half_width),
                tol,
            )?;
            let negative =
                rep.violations.iter().any(|&((k, l), _)| k < 0 || l < 0);
            (negative, format!("{} violations", rep.violations.len()))
        }
        GalleryClaim::Commutes => {
            let (_, norm) = commutator(a, b);
            let scale = (a.norm_fro() * b.norm_fro()).max(1.0);
            (norm <= tol.eps_verify * scale, format!("‖[A,B]‖ ≈ {norm:.3e}"))
        }
        GalleryClaim::CommutatorExceeds(bound) => {
            let (_, norm) = commutator(a, b);
            (norm > *bound, format!("‖[A,B]‖ ≈ {norm:.3e}"))
        }
        GalleryClaim::PropertyL(expected) => {
            let fam = property_l_pair(a, b, tol, seed)?;
            (fam.is_some() == *expected, format!("certified = {}", fam.is_some()))
        }
        GalleryClaim::NoCommonEigenvector => {
            let v = common_eigenvector(a, b, tol)?;
            (v.is_none(), format!("shared eigenvector found = {}", v.is_some()))
        }
        GalleryClaim::SplittingAbsent => {
            let s = find_splitting(a, b, tol)?;
            (s.is_none(), format!("splitting found = {}", s.is_some()))
        }
        GalleryClaim::MonodromyCycleAtOrigin { length } => {
            let pencil = Pencil::new(a.clone(), b.clone())?;
            let bs = branch_structure(&pencil, Complex64::new(0.0, 0.0), tol)?;
            (
                bs.q == 1 && bs.cycles[0].length == *length,
                format!("q = {}, lengths {:?}", bs.q, bs.cycles.iter().map(|c| c.length).collect::<Vec<_>>()),
            )
        }
        GalleryClaim::ProjectionDeviationAtLeast(bound) => {
            let pencil = Pencil::new(a.clone(), b.clone())?;
            let report = eigenprojection_trajectory(
                &pencil,
                &[Complex64::new(1.0, 0.0), Complex64::new(4.0, 0.0)],
                tol,
            )?;
            (report.max_deviation >= *bound, format!("deviation {:.3e}", report.max_deviation))
        }
    };
    Ok(ClaimOutcome { claim: claim.clone(), passed, detail })
}
