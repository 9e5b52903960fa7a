//! Front end for `friable-core`: tabulation of the special functions,
//! friable-sum grids, the verification suites and sieve runs, all emitting
//! CSV with floats in `%.12e` form.
//!
//! Exit codes: 0 success, 1 verification failure, 2 invalid input.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod commands;
mod config;
pub mod corpus;
mod error;

pub use commands::verify::{run_suite, CheckRow, Suite};
pub use commands::{run, Output};
pub use config::{default_u_range, parse_list, u_grid, Command, RunConfig};
pub use error::CliError;
