//! Command-line front end for the `jnc-core` simulator: single runs, figure
//! sweeps with CSV and SVG output, the analytic DNC bound, and matrix replay.

pub mod app;
pub mod format;
pub mod report;
pub mod svg;
pub mod sweep;

pub use app::run_cli;
