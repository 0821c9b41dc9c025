use std::io;
use std::process::ExitCode;

use clap::Parser;

use fasill_cli::{repl, run, setup, Args, Session};

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let args = Args::parse();
    let mut out = io::stdout().lock();
    let mut err = io::stderr().lock();
    let code = if args.goal.is_some() || args.script.is_some() {
        run(&args, &mut out, &mut err)
    } else {
        let mut session = Session::new();
        match setup(&args, &mut session) {
            Ok(()) => repl(&mut session, &mut io::stdin().lock(), &mut out, &mut err),
            Err(e) => {
                eprintln!("error: {e}");
                e.exit_code()
            }
        }
    };
    ExitCode::from(code as u8)
}
