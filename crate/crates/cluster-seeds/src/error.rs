//! Error type shared by every module of the library.

use crate::root_data::Q;
use thiserror::Error;

/// Everything that can go wrong while building, mutating, gluing or checking seeds.
#[derive(Debug, Error)]
pub enum Error {
    #[error("unsupported root system `{0}` (expected aN, d4 or g2)")]
    UnsupportedKind(String),

    #[error("invalid node `{0}`")]
    InvalidNode(String),

    #[error("`{0}` is not a reduced word for the longest Weyl group element")]
    NotLongestWord(String),

    #[error("word cannot be folded: {0}")]
    Folding(String),

    #[error("vertex `{0}` is frozen and cannot be mutated")]
    FrozenVertex(String),

    #[error("unknown vertex `{0}`")]
    UnknownVertex(String),

    #[error("exchange at `{vertex}` is not weight-homogeneous: incoming monomial {plus}, outgoing monomial {minus}")]
    Inhomogeneous {
        vertex: String,
        plus: String,
        minus: String,
    },

    #[error("seed carries no weights")]
    MissingWeights,

    #[error("seed invariant violated: {0}")]
    Invariant(String),

    #[error("exchange-matrix row of `{0}` is not integral")]
    NonIntegralRow(String),

    #[error("linear system `{0}` is inconsistent")]
    Inconsistent(String),

    #[error("linear system `{phase}` is not uniquely solvable (kernel dimension {})", kernel.len())]
    NonUnique { phase: String, kernel: Vec<Vec<Q>> },

    #[error("weight data: {0}")]
    Weights(String),

    #[error("edge weights disagree: {0}")]
    EdgeWeights(String),

    #[error("gluing failed: {0}")]
    Glue(String),

    #[error("triangulation: {0}")]
    Triangulation(String),

    #[error("stage {stage} of `{sequence}` gives different seeds for different mutation orders")]
    StageOrder { sequence: String, stage: usize },

    #[error("unknown mutation sequence `{0}`")]
    UnknownSequence(String),

    #[error("flags are not generic enough for this evaluation")]
    Degenerate,

    #[error("evaluation: {0}")]
    Evaluation(String),

    #[error("malformed input: {0}")]
    Format(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

/// Library-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;
