use num_complex::Complex64;
use thiserror::Error;

/// Errors surfaced by the simulation library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("degenerate basis: two_s = 0 has no spin dynamics")]
    DegenerateBasis,

    #[error("domain error: {0}")]
    Domain(String),

    #[error("singular scaling: epsilon - 2*S*chi vanishes, relative couplings undefined")]
    SingularScaling,

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error(
        "exceptional-point proximity: eigenvalue pair ({0}, {1}) cannot be bi-orthonormalized"
    )]
    ExceptionalPoint(Complex64, Complex64),

    #[error("pairing ambiguity: no conjugate partner for eigenvalue {0} within tolerance {1:e}")]
    PairingAmbiguity(Complex64, f64),

    #[error("metric construction failed: minimum eigenvalue {0:e} is not positive")]
    MetricConstruction(f64),

    #[error("evolution horizon exceeded: |Im E|*t = {0:.3e} would overflow")]
    EvolutionHorizon(f64),

    #[error("non-positive metric norm: <psi|S|psi> = {0:e}")]
    NonPositiveNorm(f64),

    #[error("undefined squeezing frame: |<S>| = {0:e} below floor {1:e}")]
    UndefinedFrame(f64, f64),

    #[error("zero state has no basis weights")]
    ZeroState,

    #[error("imaginary residue {0:e} exceeds guard {1:e}; metric moments unreliable")]
    ImaginaryResidue(f64, f64),

    #[error("closed form requires V = 0 (got V = {0})")]
    OatMisuse(f64),

    #[error("boson mapping requires V != 0")]
    BosonVanishingLipkin,

    #[error("disentanglement singularity at t = {0}")]
    DisentanglementSingularity(f64),

    #[error("quadrature variances undefined: |b_plus| = {0} >= 1")]
    RhoOutOfRange(f64),

    #[error("phase undefined on the region boundary Xi^2 = 1")]
    RegionBoundary,

    #[error("lapack: {0}")]
    Lapack(#[from] ndarray_linalg::error::LinalgError),

    #[error("config: {0}")]
    Config(String),

    #[error("scenario '{scenario}' failed at {context}: {source}")]
    Scenario {
        scenario: String,
        context: String,
        #[source]
        source: Box<Error>,
    },

    #[error("io: {0}")]
    Io(#[from] std::io::Error),

    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
