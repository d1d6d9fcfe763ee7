//! Command-line front end for the `stubmatch` simulator.

pub mod app;
pub mod render;

pub use app::run;
