//! Batch front end for the expquad pricers.
//!
//! A scenario is one JSON document (see [`scenario::Scenario`]). Running it
//! prices every product, optionally validates each price against the Monte
//! Carlo oracle, and writes CSV reports plus a summary on standard output.

// `!(x > 0.0)` style checks are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod run;
pub mod scenario;

pub use error::CliError;
pub use run::{run, summary, write_reports, RunOptions, RunReport};
pub use scenario::{OutputRequest, Scenario, SCHEMA_VERSION};
