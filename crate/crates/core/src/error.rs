use crate::axioms::AxiomReport;

pub type Result<T> = std::result::Result<T, Error>;

/// Errors surfaced by the toolkit operations.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("point {point} is not a member of space `{space}`")]
    NonMember { space: String, point: String },

    #[error("invalid parameter: {0}")]
    Parameter(String),

    /// The distance oracle returned a non-finite or negative value. Carries
    /// the partial report accumulated before the abort.
    #[error("distance oracle misbehaved: {detail}")]
    Oracle {
        detail: String,
        report: Box<AxiomReport>,
    },

    #[error("malformed region descriptor: {0}")]
    Descriptor(String),

    /// Evaluation ran out of exhaustion depth before the truncation rule
    /// fired; the true value lies in [lower, upper].
    #[error("exhaustion depth exceeded; value bracketed by [{lower}, {upper}]")]
    DepthExhausted { lower: f64, upper: f64 },

    #[error("map evaluation failed: {0}")]
    MapEval(String),

    #[error("stratification level {level} has too few samples to estimate")]
    Resolution { level: usize },

    #[error("point touches the stratum boundary (index {index})")]
    BoundaryContact { index: usize },

    #[error("inconclusive: {0}")]
    Inconclusive(String),

    #[error("out of scope: {0}")]
    Scope(String),
}
