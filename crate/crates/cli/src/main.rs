//! `tra`: evaluate table/relation algebra expressions over logic programs.
//!
//! Exit codes: 0 on success (for `check`: the inclusion holds), 1 on
//! evaluation failure or a violated inclusion, 2 on parse errors.

mod repl;
mod session;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use session::Session;
use tra_core::error::Error;
use tra_core::lang::{self, Binding};
use tra_core::{EvalConfig, SearchLimits};

#[derive(Parser)]
#[command(name = "tra", version, about = "A logic-programming engine with first-class relations")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct LimitArgs {
    /// Maximum SLD-tree depth for query evaluation.
    #[arg(long, default_value_t = 64)]
    max_depth: usize,
    /// Maximum number of answers per query and derived facts per model.
    #[arg(long, default_value_t = 10_000)]
    max_answers: usize,
    /// Maximum fixpoint iterations for mu.
    #[arg(long, default_value_t = 1000)]
    fix_cap: usize,
    /// Override the depth bound of the declared universe.
    #[arg(long)]
    universe_depth: Option<usize>,
}

impl LimitArgs {
    fn session(&self) -> Session {
        let config = EvalConfig {
            universe: None,
            limits: SearchLimits::new(self.max_depth.max(1), self.max_answers.max(1)),
            fix_cap: self.fix_cap.max(1),
        };
        Session::new(config, self.universe_depth)
    }
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate an expression against loaded programs and print the value.
    Eval {
        /// Program files to load (bound under their file stem).
        #[arg(short = 'p', long = "program", value_name = "FILE")]
        programs: Vec<PathBuf>,
        /// The expression to evaluate.
        #[arg(short = 'e', long = "expr", value_name = "EXPR")]
        expr: Option<String>,
        /// A file containing the expression (alternative to -e).
        #[arg(value_name = "EXPRFILE")]
        expr_file: Option<PathBuf>,
        /// Print the value as JSON.
        #[arg(long)]
        json: bool,
        #[command(flatten)]
        limits: LimitArgs,
    },
    /// Interactive session.
    Repl {
        #[arg(short = 'p', long = "program", value_name = "FILE")]
        programs: Vec<PathBuf>,
        #[command(flatten)]
        limits: LimitArgs,
    },
    /// Check an inclusion `IDENT >= EXPR`; exit 0 when it holds.
    Check {
        #[arg(short = 'p', long = "program", value_name = "FILE")]
        programs: Vec<PathBuf>,
        /// The inclusion to check.
        #[arg(short = 'e', long = "expr", value_name = "INCLUSION")]
        expr: String,
        #[command(flatten)]
        limits: LimitArgs,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                Error::Parse(_) => ExitCode::from(2),
                _ => ExitCode::from(1),
            }
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode, Error> {
    match cli.command {
        Command::Eval {
            programs,
            expr,
            expr_file,
            json,
            limits,
        } => {
            let mut session = limits.session();
            for path in &programs {
                session.load_program(path)?;
            }
            let source = match (expr, expr_file) {
                (Some(e), _) => e,
                (None, Some(path)) => std::fs::read_to_string(&path).map_err(|e| {
                    Error::InvalidProgram(format!("cannot read {}: {e}", path.display()))
                })?,
                (None, None) => {
                    return Err(Error::InvalidProgram(
                        "nothing to evaluate: pass -e EXPR or an expression file".into(),
                    ))
                }
            };
            let value = session.eval_source(source.trim())?;
            let rendered = if json {
                session.render_json(&value)?
            } else {
                session.render(&value)?
            };
            println!("{rendered}");
            Ok(ExitCode::SUCCESS)
        }
        Command::Repl { programs, limits } => {
            let mut session = limits.session();
            for path in &programs {
                let name = session.load_program(path)?;
                println!("loaded {name}");
            }
            let stdin = std::io::stdin();
            let stdout = std::io::stdout();
            repl::run(&mut session, stdin.lock(), stdout.lock())
                .map_err(|e| Error::InvalidProgram(format!("i/o error: {e}")))?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Check {
            programs,
            expr,
            limits,
        } => {
            let mut session = limits.session();
            for path in &programs {
                session.load_program(path)?;
            }
            let inclusion = lang::parse_inclusion(&expr)?;
            let lhs = session.resolve_check_lhs(&inclusion.name)?;
            // the right-hand side may mention loaded predicates through nu
            let env = session.env.bind(inclusion.name.clone(), Binding::Rel(lhs.clone()));
            let rhs = lang::eval(&inclusion.rhs, &env, &session.config)?
                .into_relation()?;
            if lang::check_inclusion(&lhs, &rhs, &session.config)? {
                println!("inclusion holds: {}", inclusion.name);
                Ok(ExitCode::SUCCESS)
            } else {
                println!("inclusion violated: {}", inclusion.name);
                Ok(ExitCode::from(1))
            }
        }
    }
}
