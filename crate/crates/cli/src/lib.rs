//! Command line driver for `curveguide`: fixtures, nets, decompositions,
//! toolpaths, simulations, reports and the full experiment pipeline.

pub mod commands;
pub mod config;
mod error;
pub mod io;
pub mod pipeline;

pub use commands::{cmd_compare, cmd_decompose, cmd_make_feature, cmd_net, cmd_report, cmd_simulate, cmd_toolpath};
pub use config::PipelineConfig;
pub use error::{CliError, CliResult};
pub use io::OutDir;
pub use pipeline::{cmd_pipeline, PipelineSummary};
