use thiserror::Error;

/// Errors produced by the toolkit.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("matrix is not symmetric (max asymmetry {max_deviation:.3e} exceeds {tolerance:.3e})")]
    NotSymmetric { max_deviation: f64, tolerance: f64 },

    #[error("matrix is not positive definite: {0}")]
    NotPositiveDefinite(String),

    #[error("matrix is singular: {0}")]
    Singular(String),

    #[error("eigensolver failed to converge after {0} sweeps")]
    EigenFailure(usize),

    #[error("degenerate spectrum: {0}")]
    DegenerateSpectrum(String),

    #[error("not solvable: {0}")]
    NotSolvable(String),

    #[error("coupling factorization degenerate: {0}")]
    CouplingDegenerate(String),

    #[error("feedback interconnection is ill-posed: {0}")]
    IllPosedLoop(String),

    #[error("duplicate variable name `{0}`")]
    DuplicateName(String),

    #[error("expression is not affine: {0}")]
    NonAffine(String),

    #[error("constraint matrix is not symmetric: {0}")]
    NonsymmetricConstraint(String),

    #[error("evaluation point coincides with a pole: {0}")]
    PoleEvaluation(String),

    #[error("unbounded H2 norm: {0}")]
    UnboundedH2(String),

    #[error("unsupported structure: {0}")]
    UnsupportedStructure(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("solver failure: {0}")]
    SolverFailure(String),

    #[error("bracket error: {0}")]
    Bracket(String),

    #[error("non-finite data: {0}")]
    NonFinite(String),
}
