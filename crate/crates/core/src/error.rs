use thiserror::Error;

/// Errors produced by mesh handling, assembly, and the solver pipeline.
#[derive(Debug, Error)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    #[error("mesh validation failed: {0}")]
    Validation(String),

    #[error("field length {got} does not match expected {expected}")]
    LengthMismatch { expected: usize, got: usize },

    #[error("field contains a non-finite entry at index {0}")]
    NonFinite(usize),

    #[error("field must be positive everywhere; found {value} at vertex {vertex}")]
    NonPositive { vertex: usize, value: f64 },

    #[error("degenerate cell {cell}: metric volume {volume}")]
    DegenerateCell { cell: usize, volume: f64 },

    #[error("unsupported dimension {0} (this operation requires n = 3)")]
    UnsupportedDimension(usize),

    #[error("conjugate gradient did not converge after {iterations} iterations (residual {residual:.3e})")]
    CgNoConvergence { iterations: usize, residual: f64 },

    #[error("operator is not positive definite: negative curvature direction encountered at iteration {0}")]
    IndefiniteOperator(usize),

    #[error("eigensolver stagnated after {iterations} iterations (residual {residual:.3e})")]
    EigenStagnation { iterations: usize, residual: f64 },

    #[error("computed eigenvector changes sign (min entry {min:.3e}); discretization too coarse")]
    NonPositiveEigenvector { min: f64 },

    #[error("monotone iteration did not reach tolerance after {iterations} iterations (last delta {delta:.3e})")]
    MonotoneExhausted { iterations: usize, delta: f64 },

    #[error("Robin coefficient must be nonnegative for unconditional solvability; found {value} at boundary vertex {vertex}")]
    NegativeRobinCoefficient { vertex: usize, value: f64 },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("sub/super-solution verification failed: {0}")]
    BracketVerification(String),

    #[error("super-solution gluing failed after {halvings} gamma halvings: {detail}")]
    GlueExhausted { halvings: usize, detail: String },

    #[error("no interior vertex with negative shifted curvature (beta = {beta})")]
    NoNegativeRegion { beta: f64 },

    #[error("subdomain criterion unattainable at this resolution: {0}")]
    SubdomainCriterion(String),

    #[error("Newton iteration converged to the trivial solution")]
    TrivialSolution,

    #[error("Newton iteration did not converge after {iterations} steps (residual {residual:.3e})")]
    NewtonNoConvergence { iterations: usize, residual: f64 },

    #[error("scalar-sign adjustment failed after {doublings} doublings of the bump amplitude")]
    BumpTuningFailed { doublings: usize },

    #[error("boundary normalization produced a non-positive mean curvature (min {min:.3e}); discretization too coarse")]
    BoundaryNormalizationFailed { min: f64 },

    #[error("{stage} stage failed: {source}")]
    Stage {
        stage: &'static str,
        #[source]
        source: Box<Error>,
    },

    #[error("unknown gallery case `{0}`")]
    UnknownGalleryCase(String),
}

impl Error {
    pub fn stage(stage: &'static str, source: Error) -> Self {
        Error::Stage {
            stage,
            source: Box::new(source),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
