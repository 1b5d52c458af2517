use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use cspace_cli::commands::{
    cmd_classify, cmd_dot, cmd_enumerate, cmd_eval, cmd_laws, cmd_member, cmd_reduce, CmdError,
};

/// Algebra of computon spaces: evaluate space programs, enumerate members,
/// test membership, classify computons and verify the algebraic laws.
#[derive(Parser)]
#[command(name = "cspace", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print kind, order, cardinality and finiteness of a bound space.
    Eval { file: PathBuf, name: String },
    /// Print members of a bound space in canonical order.
    Enumerate {
        file: PathBuf,
        name: String,
        #[arg(long, default_value_t = 20)]
        limit: usize,
    },
    /// Decide membership of a computon literal.
    Member {
        file: PathBuf,
        name: String,
        computon: String,
    },
    /// Classify a member computon and list its absent spaces.
    Classify {
        file: PathBuf,
        name: String,
        computon: String,
    },
    /// Reduce a bound space by a formula and report the result.
    Reduce {
        file: PathBuf,
        name: String,
        formula: String,
    },
    /// Check the composition and reduction laws over the file's spaces.
    Laws {
        file: PathBuf,
        #[arg(long, default_value_t = 500)]
        budget: usize,
        #[arg(long, default_value_t = 200)]
        samples: usize,
        #[arg(long, default_value_t = 42)]
        seed: u64,
    },
    /// Emit a DOT diagram of a bound space's expression tree.
    Dot {
        file: PathBuf,
        name: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn run(cli: Cli) -> Result<String, CmdError> {
    match cli.command {
        Command::Eval { file, name } => cmd_eval(&file, &name),
        Command::Enumerate { file, name, limit } => cmd_enumerate(&file, &name, limit),
        Command::Member { file, name, computon } => cmd_member(&file, &name, &computon),
        Command::Classify { file, name, computon } => cmd_classify(&file, &name, &computon),
        Command::Reduce { file, name, formula } => cmd_reduce(&file, &name, &formula),
        Command::Laws { file, budget, samples, seed } => cmd_laws(&file, budget, samples, seed),
        Command::Dot { file, name, out } => cmd_dot(&file, &name, out.as_deref()),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(output) => {
            print!("{output}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            if let Some(stdout) = e.stdout() {
                print!("{stdout}");
            }
            eprintln!("{}", e.stderr());
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
