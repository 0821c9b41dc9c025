//! Command-line front end: a session holding one merged program, lattice
//! and similarity relation, driven by REPL commands, script files or flags.

pub mod batch;
pub mod error;
pub mod script;
pub mod session;

pub use batch::{repl, run, setup, Args};
pub use error::CliError;
pub use script::{run_script, ScriptOutcome};
pub use session::{Flow, Session, TreeFormat};
