//! Command-line front end, file formats and multi-threaded evaluation for
//! [`witbench_core`].
//!
//! Parallel code paths only distribute fixed units of work (Monte Carlo
//! chunks, sweep points) and reassemble them in index order, so every result
//! is bit-identical to the sequential core regardless of thread count.

pub mod cli;
pub mod config;
pub mod density;
mod error;
pub mod par;
pub mod sweep;
pub mod table;

pub use error::AppError;
