//! Finite-alphabet probability machinery: joint pmfs, entropies,
//! conditional mutual information and Markov-chain (degradation) tests.
//!
//! All quantities are in bits. Probabilities below [`ZERO_MASS`] are
//! treated as exact zeros, so 0·log 0 = 0 throughout.

mod channel;
mod pmf;

use thiserror::Error;

pub use channel::{
    chain_deviations, classify_dm_degradation, Alphabets, ChannelFile, Classification, CondPmf,
    DegradationType, DiscreteChannel, Output, CHANNEL_TOL, VAR_X, VAR_X3, VAR_Y1, VAR_Y2, VAR_Y3,
};
pub use pmf::{
    check_conditional_independence, conditional_mutual_information, entropy_bits, validate_pmf,
    Pmf, NORMALIZATION_TOL, ZERO_MASS,
};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum InfoError {
    #[error("negative probability mass {value} at flat index {index}")]
    NegativeMass { index: usize, value: f64 },
    #[error("probabilities sum to {sum}, not 1")]
    NotNormalized { sum: f64 },
    #[error("tensor has {got} entries but its shape needs {expected}")]
    ShapeMismatch { expected: usize, got: usize },
    #[error("variable index {index} outside a rank-{rank} pmf")]
    BadIndex { index: usize, rank: usize },
    #[error("variable {index} appears in more than one argument set")]
    OverlappingSets { index: usize },
    #[error("input pmf has no mass at (x={x}, x3={x3}); a full-support input is required")]
    ZeroSupport { x: usize, x3: usize },
    #[error("symbol {symbol} outside an alphabet of size {alphabet}")]
    BadSymbol { symbol: usize, alphabet: usize },
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("malformed channel file: {0}")]
    Parse(String),
}
