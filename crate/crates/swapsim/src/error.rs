use thiserror::Error;

use crate::detect::DetectionOutcome;
use crate::fock::Spatial;

/// Crate-wide error type.
#[derive(Debug, Error)]
pub enum Error {
    #[error("zero-norm state")]
    ZeroNorm,

    #[error("matrix is not unitary (max deviation {max_dev:.3e})")]
    NotUnitary { max_dev: f64 },

    #[error("matrix is not Hermitian (max deviation {max_dev:.3e})")]
    NotHermitian { max_dev: f64 },

    #[error("eigensolver did not converge after {sweeps} sweeps")]
    NoConvergence { sweeps: usize },

    #[error("beam splitter output path {path} already occupied")]
    OutputOccupied { path: Spatial },

    #[error("no coincidence support for outcome {outcome}")]
    NoCoincidenceSupport { outcome: DetectionOutcome },

    #[error("mixture has all-zero weights")]
    AllZeroWeights,

    #[error("state leaves the two-photon analysis space: {detail}")]
    BasisOverflow { detail: String },

    #[error("state is not purely two-photon on the analysis modes: {detail}")]
    NotTwoPhoton { detail: String },

    #[error("occupation outside the exact-coefficient range: {detail}")]
    ExactOverflow { detail: String },

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error("report serialization failed: {0}")]
    Serialize(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
