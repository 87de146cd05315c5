//! Test support: a naive model enumerator that shares no code with the
//! library's search or evaluator, and random generators for formulas,
//! problems and frames.

pub mod gen;
pub mod naive;

pub use naive::{count_models, exists_model, query_witness_exists, OracleError};
