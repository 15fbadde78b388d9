//! Matrix-pencil spectral analysis at desk scale.
//!
//! `pencillab` analyzes pairs of complex matrices through their pencil
//! `z ↦ A + zB`: when do the exponentials of integer combinations
//! multiply like a homomorphism, when do the eigenvalues of the pencil
//! depend affinely on the parameter (property L), and how do the
//! eigenprojections and Puiseux branches behave near exceptional points.
//!
//! The crate is organized as:
//!
//! - [`numcore`] — dense complex matrices, characteristic polynomials,
//!   simultaneous root finding, eigenvalue clustering, numerical
//!   nullspaces, and multiset matching.
//! - [`expmat`] — the matrix exponential (scaling and squaring), an
//!   independent Taylor oracle, the finite logarithm of unipotent
//!   matrices, and the `e^M = I` characterization.
//! - [`chevalley`] — characteristic subspaces, eigenprojections via
//!   interpolation polynomials, and the decomposition `M = D + N` into
//!   commuting diagonalizable and nilpotent parts.
//! - [`pencil`] — pencil profiles (generic eigenvalue count and
//!   exceptional points), numerical branch/monodromy structure, affine
//!   eigenvalue families for pairs and spanned subspaces, and
//!   eigenprojection trajectories.
//! - [`verifier`] — executable checks for the exponential conditions,
//!   integral spectra, gamma-map injectivity, characteristic-subspace
//!   decompositions, invariant splittings, and a built-in gallery of
//!   counterexample pairs.
//! - [`synth`] — seeded constructions of structured matrices and pairs
//!   (commuting, triangularizable, nilpotent, prescribed Jordan data)
//!   used by the gallery and by tests.
//!
//! Eigenvalues are computed from characteristic polynomials by
//! simultaneous (Aberth–Ehrlich) iteration. This is accurate and fully
//! self-contained for the intended envelope — matrices up to dimension
//! ~12 with moderate norms — and is not meant for large or badly scaled
//! eigenproblems. All routines are pure functions of their inputs plus
//! an explicit seed; nothing in the crate holds global state.

pub mod chevalley;
pub mod error;
pub mod expmat;
pub mod numcore;
pub mod pencil;
pub mod synth;
pub mod verifier;

pub use error::{Error, Result};
pub use numcore::{
    CMatrix, CPoly, SpectrumMultiset, Subspace, Tolerances, multiset_match, spectrum,
};

/// The constant `2πi`, the scale of every integer-spectrum construction here.
pub fn two_pi_i() -> num_complex::Complex64 {
    num_complex::Complex64::new(0.0, 2.0 * std::f64::consts::PI)
}
