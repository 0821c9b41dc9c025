//! Command-line flags and the non-interactive entry point.

use std::io::{BufRead, IsTerminal, Write};
use std::path::PathBuf;

use clap::Parser;

use crate::error::CliError;
use crate::script::run_script;
use crate::session::{Flow, Session, TreeFormat};

#[derive(Debug, Parser)]
#[command(
    name = "fasill",
    version,
    about = "Interpreter for fuzzy logic programs with similarity"
)]
pub struct Args {
    /// Program file; may be repeated, rules are merged in order.
    #[arg(long = "program", value_name = "FILE")]
    pub programs: Vec<PathBuf>,
    /// Lattice definition file (default: the unit interval).
    #[arg(long, value_name = "FILE")]
    pub lattice: Option<PathBuf>,
    /// Similarity equations; may be repeated.
    #[arg(long = "sim", value_name = "FILE")]
    pub sims: Vec<PathBuf>,
    /// Goal to evaluate.
    #[arg(long)]
    pub goal: Option<String>,
    /// Maximum derivation tree depth.
    #[arg(long)]
    pub depth: Option<usize>,
    /// Print the derivation tree in this format.
    #[arg(long, value_enum)]
    pub format: Option<TreeFormat>,
    /// Leave out answers whose value is the lattice bottom.
    #[arg(long)]
    pub hide_bottom: bool,
    /// Run the commands in this file.
    #[arg(long, value_name = "FILE")]
    pub script: Option<PathBuf>,
}

/// Loads the files named by the flags into `session`.
pub fn setup(args: &Args, session: &mut Session) -> Result<(), CliError> {
    if let Some(l) = &args.lattice {
        session.load_lattice(Some(&l.to_string_lossy()))?;
    }
    for p in &args.programs {
        session.load_program(&p.to_string_lossy())?;
    }
    for s in &args.sims {
        let msg = session.load_sim(&s.to_string_lossy())?;
        for w in msg.lines().filter(|l| l.starts_with("warning:")) {
            log::warn!("{}", &w["warning: ".len()..]);
        }
    }
    if let Some(d) = args.depth {
        session.set_depth(d);
    }
    Ok(())
}

fn evaluate(args: &Args, goal: &str, session: &mut Session) -> Result<String, CliError> {
    session.intro(goal)?;
    let answers = session.render_answers(args.hide_bottom)?;
    let out = match args.format {
        None => answers,
        Some(TreeFormat::Text) => session.render_tree(TreeFormat::Text)? + "\n" + &answers,
        Some(f) => session.render_tree(f)?,
    };
    Ok(out)
}

/// Runs the flags to completion and returns the exit status.
pub fn run(args: &Args, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let mut session = Session::new();
    let status = (|| -> Result<i32, CliError> {
        setup(args, &mut session)?;
        if let Some(path) = &args.script {
            let text = std::fs::read_to_string(path).map_err(|source| CliError::Io {
                path: path.display().to_string(),
                source,
            })?;
            let base = path.parent().map(PathBuf::from).unwrap_or_default();
            session.set_base_dir(base);
            let outcome = run_script(&mut session, &text);
            out.write_all(outcome.transcript.as_bytes()).ok();
            if let Some((line, e)) = outcome.error {
                writeln!(err, "error: {}:{line}: {e}", path.display()).ok();
                return Ok(e.exit_code());
            }
            session.set_base_dir("");
        }
        if let Some(goal) = &args.goal {
            let text = evaluate(args, goal, &mut session)?;
            out.write_all(text.as_bytes()).ok();
            if let Some(e) = session.runtime_error() {
                return Err(CliError::Runtime(e));
            }
        }
        Ok(0)
    })();
    match status {
        Ok(code) => code,
        Err(e) => {
            writeln!(err, "error: {e}").ok();
            e.exit_code()
        }
    }
}

/// Reads commands from `input` until end of input or `quit`.
pub fn repl(
    session: &mut Session,
    input: &mut dyn BufRead,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> i32 {
    let interactive = std::io::stdin().is_terminal();
    let mut line = String::new();
    loop {
        if interactive {
            write!(out, "fasill> ").ok();
            out.flush().ok();
        }
        line.clear();
        match input.read_line(&mut line) {
            Ok(0) | Err(_) => return 0,
            Ok(_) => {}
        }
        let cmd = line.trim();
        if cmd.starts_with('%') {
            continue;
        }
        match session.execute(cmd) {
            Ok((text, flow)) => {
                out.write_all(text.as_bytes()).ok();
                if flow == Flow::Quit {
                    return 0;
                }
            }
            Err(e) => {
                writeln!(err, "error: {e}").ok();
            }
        }
    }
}
