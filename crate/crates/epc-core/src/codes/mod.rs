//! Encoders and decoders for every scheme variant.
//!
//! [`basic`] is the exponent-packed code that needs no bilinear construction.
//! [`lagrange`] covers everything built on pre-encoded product vectors:
//! the improved code, one-sided/fully secure variants, batches, and the
//! systematic option. [`private`] adds the query-driven encoders where workers
//! derive coded inputs from a received query alone.

use crate::matrix::Matrix;

pub mod basic;
pub mod lagrange;
pub mod private;

/// One worker's coded input pair. Shares always have the dimensions of a
/// single block pair, whatever the mode, key count, batch or library size.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CodedShare {
    pub worker: usize,
    pub a: Matrix,
    pub b: Matrix,
}
