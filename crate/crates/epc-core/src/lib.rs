//! Entangled polynomial codes for distributed block-partitioned matrix
//! multiplication over prime fields.
//!
//! The crate is organized as layers:
//! - [`field`], [`poly`], [`matrix`]: exact GF(q) arithmetic, Lagrange
//!   interpolation, block partitioning.
//! - [`bilinear`]: rank-R tensor constructions (naive, Strassen, tensor
//!   compositions) with exact Brent validation.
//! - [`codes`]: the encoders and decoders for every scheme variant: basic,
//!   bilinear pre-encoded, one-sided/fully secure, private, private+secure,
//!   fully private, and length-L batches of all of these.
//! - [`scheme`]: parameter validation, recovery thresholds, evaluation-point
//!   layouts, and an end-to-end master/worker pipeline.
//! - [`verify`]: computational certificates — decode audits over worker
//!   subsets, secrecy rank certificates, exact mutual-information and query
//!   distribution checks by exhaustive enumeration.
//! - [`sim`]: a simulated worker cluster with latency laws and straggler
//!   injection.

pub mod bilinear;
pub mod codes;
pub mod error;
pub mod field;
pub mod matrix;
pub mod poly;
pub mod scheme;
pub mod sim;
pub mod verify;

pub use bilinear::{BilinearConstruction, BrentViolation, Side};
pub use error::{Error, Result};
pub use field::{Gf, MERSENNE61};
pub use matrix::{crop, pad_to, BlockMatrix, Matrix};
pub use poly::Poly;
pub use scheme::{Inputs, Mode, Scheme, SchemeParams};
