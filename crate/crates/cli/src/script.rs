//! Script files: one command per line, `%` comments, stop at the first error.

use std::fmt::Write;

use crate::error::CliError;
use crate::session::{Flow, Session};

#[derive(Debug)]
pub struct ScriptOutcome {
    /// Each command echoed as `> command`, followed by its output.
    pub transcript: String,
    /// The 1-based line that failed, with its error.
    pub error: Option<(usize, CliError)>,
}

pub fn run_script(session: &mut Session, text: &str) -> ScriptOutcome {
    let mut transcript = String::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('%') {
            continue;
        }
        writeln!(transcript, "> {line}").unwrap();
        match session.execute(line) {
            Ok((out, flow)) => {
                transcript.push_str(&out);
                if flow == Flow::Quit {
                    break;
                }
            }
            Err(e) => {
                return ScriptOutcome {
                    transcript,
                    error: Some((i + 1, e)),
                }
            }
        }
    }
    ScriptOutcome {
        transcript,
        error: None,
    }
}
