//! Error type shared by all analysis modules.

use num_complex::Complex64;

/// Errors surfaced by the numerical routines.
///
/// Every operation that can fail returns `Result<T>`; degeneracies are
/// reported, never silently absorbed.
#[derive(Debug, Clone, thiserror::Error)]
pub enum Error {
    /// An iteration (root finding, series summation) hit its cap.
    #[error("iteration did not converge within {max_iter} steps ({context})")]
    NonConvergence { max_iter: usize, context: &'static str },

    /// A matrix norm exceeds the exponential budget.
    #[error("matrix norm {norm:.3e} exceeds the exponential budget {bound:.3e}")]
    Overflow { norm: f64, bound: f64 },

    /// Input to the unipotent logarithm is not unipotent to tolerance.
    #[error("matrix is not unipotent to tolerance (residual {residual:.3e})")]
    NotUnipotent { residual: f64 },

    /// The supplied value is not close to any eigenvalue of the matrix.
    #[error("{value} is not within tolerance of any eigenvalue")]
    NotAnEigenvalue { value: Complex64 },

    /// Eigenvalue clusters are too close to separate but too far to merge.
    #[error("eigenvalue clusters separated by {gap:.3e} are too close to resolve reliably")]
    IllConditioned { gap: f64 },

    /// Eigenvalue continuation around a circle could not be disambiguated.
    #[error("eigenvalue tracking ambiguous at radius {radius:.3e}")]
    TrackingAmbiguous { radius: f64 },

    /// Two near-optimal spectrum assignments lead to different verdicts.
    #[error("spectrum matching is ambiguous: competing assignments within {margin:.3e} disagree")]
    AmbiguousMatching { margin: f64 },

    /// A gamma-map product pair falls in the undecidable separation band.
    #[error("gamma map separation {gap:.3e} falls in the ambiguous band")]
    AmbiguousSeparation { gap: f64 },

    /// A stated hypothesis of the check does not hold for the input.
    #[error("hypothesis violated: {0}")]
    HypothesisViolated(String),

    /// Malformed input (non-finite entries, dimension mismatch, ...).
    #[error("invalid input: {0}")]
    InvalidInput(String),
}

pub type Result<T> = std::result::Result<T, Error>;
