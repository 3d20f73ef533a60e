//! Rate-region geometry: Pareto frontiers, support functions, subset
//! tests and exact Fourier-Motzkin elimination over symbolic constants.

mod fm;
mod region;

use thiserror::Error;

pub use fm::{
    canonical_rows, feasible_interval, fm_eliminate, fm_eliminate_all, ratio, remove_redundant,
    type1_pruning_facts, type1_split_system, type2_pruning_facts, type2_system, Affine,
    LinearSystem, Rational, Row, SymbolFact, SPLIT_CONSTS, SPLIT_VARS, TYPE2_CONSTS,
};
pub use region::{
    format_sig, pareto_frontier, subset_check, support, RatePair, RateRegion, SubsetReport,
    SupportQuery, CSV_HEADER,
};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GeometryError {
    #[error("region has no boundary points")]
    EmptyRegion,
    #[error("support weights ({w1}, {w2}) must be nonnegative and not both zero")]
    BadWeights { w1: f64, w2: f64 },
    #[error("unknown variable {0:?}")]
    UnknownVariable(String),
    #[error("unknown constant {0:?}")]
    UnknownConstant(String),
    #[error("malformed region CSV: {0}")]
    Csv(String),
    #[error("malformed linear system: {0}")]
    Json(String),
}
