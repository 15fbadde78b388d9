//! Numerical substrate: complex matrices, characteristic polynomials,
//! simultaneous root finding, eigenvalue clustering, subspaces, and
//! multiset matching.

pub mod assign;
mod factor;
mod matrix;
mod poly;
mod roots;
mod spectrum;
mod subspace;
#[cfg(test)]
pub(crate) mod testsupport;

pub use assign::{assignment_cost, best_two_assignments, min_cost_assignment};
pub use factor::{nullspace, nullspace_abs, Lu, PivotedQr};
pub use matrix::{CMatrix, Tolerances};
pub use poly::{charpoly, CPoly};
pub use roots::{roots, roots_seeded};
pub use spectrum::{
    match_cost, multiset_match, nth_roots, spectrum, spectrum_seeded, Cluster, SpectrumMultiset,
};
pub use subspace::{
    common_eigenvector, is_diagonalizable, kernel, kernel_abs, kernel_rect, Subspace,
};
