//! Matroid intersection toolkit.
//!
//! Oracle-backed matroids with query/round accounting, max-weight basis
//! primitives (sequential and parallel), a batched auction algorithm with
//! dual-certificate extraction, exchange-graph augmentation to exact optima,
//! weight-splitting weighted intersection, and MWU adaptive sparsification.

pub mod auction;
pub mod basis;
pub mod error;
pub mod exact;
pub mod harness;
pub mod ledger;
pub mod matroid;
pub mod ratio;
pub mod sparsify;
pub mod weighted;

pub use error::{Error, Result};
pub use ledger::QueryLedger;
pub use matroid::MatroidHandle;
