//! Library surface of the `epc` command-line tool, split out so integration
//! tests can drive the same code paths the binary uses.

pub mod commands;
pub mod config;
pub mod matio;
