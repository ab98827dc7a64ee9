//! Command-line surface of `dispersal-core`: evaluate the mean extinction
//! times, compare strategies, scan phase maps, trace crossing curves and run
//! the simulator. Every command emits CSV (with a `# schema=1` first line)
//! or the same rows as JSON.

pub mod args;
pub mod commands;
pub mod error;
pub mod output;
pub mod parallel;

pub use args::{Cli, Command, Format};
pub use commands::run;
pub use error::CliError;
