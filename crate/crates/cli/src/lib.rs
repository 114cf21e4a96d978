//! Command-line front end for `polarflow`: config ingestion, flow
//! construction, audits, solvers and CSV/SVG/JSON emission.
//!
//! Exit codes: 0 on success, 1 when a flow fails its audit or structure
//! checks, 2 when construction or a solver fails, 3 for config, argument and
//! file errors.

pub mod commands;
pub mod config;
pub mod error;
pub mod export;

pub use commands::{run, Cli, Command};
pub use config::{parse_config, FlowConfig, Format};
pub use error::{CliError, Result};
