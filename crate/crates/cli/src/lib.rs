//! File-level pipeline around `levelstat-core`: generate spectra, analyze
//! level lists and run the missing-level experiment.

pub mod config;
pub mod error;
pub mod io;
pub mod pipeline;

pub use config::{AnalyzeConfig, GenerateConfig, MissingLevelsConfig, RunConfig, Source};
pub use error::{CliError, Result};
pub use io::{format_levels, parse_level_file, parse_levels, LevelFile};
pub use pipeline::{
    analyze_spectrum, cmd_analyze, cmd_generate, cmd_missing_levels, generate_spectrum,
    missing_levels_rows, run, Analysis, AnalysisReport, OrderSummary,
};
