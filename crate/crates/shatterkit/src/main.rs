use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use shatterkit::commands::{self, CoverMode};
use shatterkit::core::tree::VerifyMode;

/// Shattering, dimension and covering computations on finite families of
/// binary strings.
#[derive(Parser)]
#[command(name = "shatterkit", version)]
struct Cli {
    /// Print the report as a JSON document.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// VC dimension, string dimension, a witness and the shatter function.
    Dim {
        #[arg(long)]
        family: PathBuf,
    },
    /// Shatter function values next to the Sauer bound.
    Fn {
        #[arg(long)]
        family: PathBuf,
        /// Largest k (defaults to the width).
        #[arg(long)]
        max: Option<usize>,
    },
    /// Restrict a family to a set of coordinates.
    Restrict {
        #[arg(long)]
        family: PathBuf,
        /// Comma-separated coordinates.
        #[arg(long, value_delimiter = ',')]
        coords: Vec<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Build or verify the shattering trees.
    Tree {
        #[command(subcommand)]
        action: TreeAction,
    },
    /// Cover the cube by families of string dimension below d.
    Cover {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        d: usize,
        #[arg(long, value_enum, default_value_t = CoverArg::Exact)]
        mode: CoverArg,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Dimension of the family defined by a partitioned formula.
    Fo {
        #[arg(long = "struct")]
        structure: PathBuf,
        #[arg(long)]
        formula: String,
        /// Object and parameter variables, e.g. `x;y` or `x1,x2;y`.
        #[arg(long)]
        partition: String,
    },
}

#[derive(Subcommand)]
enum TreeAction {
    Build {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    Verify {
        #[arg(long)]
        tree: PathBuf,
        #[arg(long)]
        k: usize,
        #[arg(long, value_enum, default_value_t = VerifyArg::Exhaustive)]
        mode: VerifyArg,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum CoverArg {
    Exact,
    Greedy,
}

#[derive(Clone, Copy, ValueEnum)]
enum VerifyArg {
    Exhaustive,
    Certificate,
}

fn run(cli: Cli) -> shatterkit::Result<shatterkit::Report> {
    match cli.command {
        Command::Dim { family } => commands::dim(&family),
        Command::Fn { family, max } => commands::shatter_fn(&family, max),
        Command::Restrict { family, coords, out } => commands::restrict(&family, &coords, out.as_deref()),
        Command::Tree {
            action: TreeAction::Build { n, out },
        } => commands::tree_build(n, out.as_deref()),
        Command::Tree {
            action: TreeAction::Verify { tree, k, mode },
        } => {
            let mode = match mode {
                VerifyArg::Exhaustive => VerifyMode::Exhaustive,
                VerifyArg::Certificate => VerifyMode::Certificate,
            };
            commands::tree_verify(&tree, k, mode)
        }
        Command::Cover { n, d, mode, out } => {
            let mode = match mode {
                CoverArg::Exact => CoverMode::Exact,
                CoverArg::Greedy => CoverMode::Greedy,
            };
            commands::cover(n, d, mode, out.as_deref())
        }
        Command::Fo {
            structure,
            formula,
            partition,
        } => commands::fo(&structure, &formula, &partition),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let json = cli.json;
    match run(cli) {
        Ok(report) => {
            if json {
                print!("{}", report.to_json());
            } else {
                print!("{}", report.to_text());
            }
            ExitCode::from(report.status.exit_code())
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
