//! Discrete-memoryless bounds: evaluate the Type-I, II and III rate
//! constraints for explicit auxiliary laws and trace regions by
//! exhaustive search over gridded auxiliaries.

mod aux;
mod enumerate;
mod eval;
mod fast;
mod trace;

use thiserror::Error;

use crate::geometry::GeometryError;
use crate::info::InfoError;

pub use aux::{
    AuxDistribution, FactorForm, OuterFactorization, Type1InnerAux, Type1OuterAux, Type2Aux,
    Type3Aux, X3Law,
};
pub use enumerate::{
    count_aux, enumerate_aux, simplex_count, simplex_grid, AuxKind, AuxStream, Cardinalities,
    DEFAULT_BUDGET,
};
pub use eval::{
    dense_joint, eval_type1_inner, eval_type1_outer, eval_type2, eval_type3, Type1Values,
    Type2Values, Type3Values, MAX_DENSE_ENTRIES,
};
pub use trace::{
    check_inner_subset_outer, check_type2_redundancy, trace_dm_region, Bound, InnerOuterReport,
    RedundancyReport, TraceOptions, DEGRADATION_TOL,
};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum DmError {
    #[error(transparent)]
    Info(#[from] InfoError),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("relay symbol {symbol} outside an alphabet of size {alphabet}")]
    BadSymbol { symbol: usize, alphabet: usize },
    #[error("enumeration would visit {count} auxiliary laws, above the budget of {budget}")]
    BudgetExceeded { count: u128, budget: u64 },
    #[error("dense joint would need {entries} entries, above the limit of {MAX_DENSE_ENTRIES}")]
    TooLarge { entries: usize },
    #[error("channel is not Type-II degraded (chain deviation {deviation:e})")]
    NotDegraded { deviation: f64 },
    #[error("grid resolution must be at least 1, got {0}")]
    BadResolution(usize),
    #[error("auxiliary cardinalities must be at least 1")]
    BadCardinality,
    #[error("no bound is defined for a channel without a degradation order")]
    NoBound,
}
