//! Action files, certificates and the `paracomp` command line.

pub mod actionfile;
pub mod certificate;
pub mod commands;
pub mod literal;

pub use actionfile::{format_action, parse_action_file, ActionFileError};
pub use certificate::{verify, verify_text, Certificate, Kind};
pub use commands::{run, Cli, Command, Outcome};
