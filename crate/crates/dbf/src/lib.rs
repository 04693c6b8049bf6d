//! File formats, configuration and the command-line driver for
//! [`dbf_core`].
//!
//! Sequences are directories of binary graymaps plus an `x,y,w,h`
//! annotation file; tracking results are CSV. The `dbf` binary exposes
//! `simulate`, `track`, `eval` and `fit`.

pub mod annotation;
pub mod cli;
pub mod config;
pub mod error;
pub mod eval;
pub mod fit;
mod fsutil;
pub mod manifest;
pub mod pgm;
pub mod results;
pub mod simulate;
pub mod track;

pub use error::{Error, Result};
pub use fsutil::write_atomic;
