use std::io::{self, BufRead, IsTerminal, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, ValueEnum};
use idealdb::cli::Session;
use idealdb::groebner::set_default_degree_guard;
use idealdb::polyring::MonomialOrder;

#[derive(Clone, Copy, Debug, ValueEnum)]
enum OrderArg {
    Lex,
    Degrevlex,
}

/// Relational queries over polynomial ideals.
#[derive(Parser, Debug)]
#[command(version, about)]
struct Args {
    /// Run a script file instead of the interactive loop.
    #[arg(long)]
    script: Option<PathBuf>,

    /// Monomial order for relations declared without one.
    #[arg(long, value_enum, default_value = "degrevlex")]
    order: OrderArg,

    /// Largest total degree allowed during Gröbner basis computation.
    #[arg(long, default_value_t = 40)]
    degree_guard: u32,

    /// Log S-pair reductions to stderr.
    #[arg(long)]
    trace: bool,
}

fn main() -> ExitCode {
    let args = Args::parse();
    let mut logger = env_logger::Builder::from_default_env();
    if args.trace {
        logger.filter_module("idealdb::groebner", log::LevelFilter::Trace);
    }
    logger.init();
    set_default_degree_guard(args.degree_guard);
    let order = match args.order {
        OrderArg::Lex => MonomialOrder::Lex,
        OrderArg::Degrevlex => MonomialOrder::DegRevLex,
    };
    let session = Session::new(order);
    match args.script {
        Some(path) => run_file(session, &path),
        None => repl(session),
    }
}

fn run_file(session: Session, path: &PathBuf) -> ExitCode {
    let text = match std::fs::read_to_string(path) {
        Ok(t) => t,
        Err(e) => {
            eprintln!("error: {}: {e}", path.display());
            return ExitCode::FAILURE;
        }
    };
    let run = session.run_script(&text);
    print!("{}", run.transcript);
    match run.error {
        Some(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
        None => ExitCode::SUCCESS,
    }
}

/// Text of a line with any `#` comment removed.
fn code_part(line: &str) -> &str {
    line.split('#').next().unwrap_or("")
}

fn repl(mut session: Session) -> ExitCode {
    let stdin = io::stdin();
    let interactive = stdin.is_terminal();
    let mut buffer = String::new();
    let mut buffer_line = 1;
    let mut line_no = 0;
    let prompt = |continuing: bool| {
        if interactive {
            print!("{}", if continuing { "...> " } else { "idb> " });
            let _ = io::stdout().flush();
        }
    };
    prompt(false);
    for line in stdin.lock().lines() {
        let Ok(line) = line else { break };
        line_no += 1;
        if buffer.trim().is_empty() {
            buffer.clear();
            buffer_line = line_no;
        }
        buffer.push_str(&line);
        buffer.push('\n');
        let pending = buffer.lines().map(code_part).collect::<String>();
        let pending = pending.trim_end();
        if !pending.is_empty() && !pending.ends_with(';') {
            prompt(true);
            continue;
        }
        let run = session.run_script_at(&buffer, buffer_line);
        print!("{}", run.transcript);
        if let Some(e) = &run.error {
            eprintln!("error: {e}");
        }
        session = run.session;
        buffer.clear();
        if run.quit {
            break;
        }
        prompt(false);
    }
    ExitCode::SUCCESS
}
