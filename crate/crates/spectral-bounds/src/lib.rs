//! Command-line front end, file formats and batch runner for the
//! `spectral-bounds-core` checks.

pub mod cli;
pub mod io;
pub mod output;
pub mod suite;

pub use cli::dispatch;
