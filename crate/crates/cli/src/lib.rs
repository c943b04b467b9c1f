//! Command-line front end and experiment runners for the `multiform` crate.

mod app;
pub mod experiments;
mod input;

pub use app::{run, EXIT_BUDGET, EXIT_DOMAIN, EXIT_OK, EXIT_USAGE};
