//! Text formats, script interpreter and benchmark harness behind the
//! `qgraph` binary.

pub mod bench;
pub mod error;
pub mod graphfile;
pub mod runner;
pub mod script;

pub use error::{CliError, ParseError};
pub use graphfile::{parse_graph, serialize_graph};
pub use runner::{run, run_files, Report, RunOptions};
pub use script::{parse_script, Command, OpScript};
