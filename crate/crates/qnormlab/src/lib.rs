//! Numerical workbench for quasi-normed sequence spaces with 0 < p < 1.
//!
//! The library models the space of finitely supported real sequences under the
//! p-homogeneous F-norm `‖x‖_p = Σ|x_i|^p`, builds biorthogonal bases whose
//! elements carry machine-checked certificates, and evaluates the induced
//! norms that generate a strictly weaker Hausdorff vector topology on the
//! span. Every inequality the construction promises is certified numerically
//! under an explicit tolerance policy instead of being assumed.
//!
//! Modules mirror the pipeline:
//!
//! - [`space`]: vectors, functionals, F-norms, bounded balls, dual norms.
//! - [`basis`]: the inductive basis construction and its certificates.
//! - [`topology`]: the induced norm `‖·‖_E`, the `(n, 𝔞)` norm family,
//!   G-set membership, separation witnesses, projections.
//! - [`audit`]: sample-based axiom checks (F-seminorm laws, modulus of
//!   concavity, neighborhood-base axioms).
//! - [`holder`]: the reverse Hölder inequality and the summability bound it
//!   implies for the p-bracket functional.
//! - [`experiment`]: the end-to-end demonstration pipeline and its reports.

pub mod audit;
pub mod basis;
pub mod experiment;
pub mod holder;
mod linalg;
pub mod space;
pub mod tolerance;
pub mod topology;

pub use tolerance::Tolerance;

/// Crate-wide error type. Mathematical check failures carry both sides of
/// the violated inequality so callers can report counterexamples verbatim.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("exponent p must lie in (0,1), got {0}")]
    InvalidExponent(f64),
    #[error("ball radius must be positive and finite, got {0}")]
    InvalidRadius(f64),
    #[error("invalid vector entry: {0}")]
    InvalidVector(String),
    #[error("cannot place zero on boundary")]
    ZeroOnBoundary,
    #[error("zero has no separation witness")]
    ZeroSeparationWitness,
    #[error("invalid basis parameters: {0}")]
    InvalidParams(String),
    #[error("singular system: chain vectors are linearly dependent at step {step}")]
    SingularChain { step: usize },
    #[error("scaling step {step} failed: {reason}")]
    ScalingFailure { step: usize, reason: String },
    #[error("certificate failure at index {index}: {condition} (lhs {lhs}, rhs {rhs})")]
    CertificateFailure {
        index: u32,
        condition: String,
        lhs: f64,
        rhs: f64,
    },
    #[error("vector lies outside the built span (residual F-norm {residual})")]
    SpanError { residual: f64 },
    #[error("basis too short: length {len}, need {need}")]
    BasisTooShort { len: usize, need: usize },
    #[error("invalid exponent function: {0}")]
    InvalidExponentFunction(String),
    #[error("invalid neighborhood spec: {0}")]
    InvalidSpec(String),
    #[error("invalid inequality instance: {0}")]
    InvalidInstance(String),
    #[error("no separation witness up to m_max = {m_max}")]
    NoWitnessFound { m_max: u32 },
    #[error("configuration error: {0}")]
    Config(String),
    #[error("empty neighborhood family")]
    EmptyFamily,
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
