//! `qdist`: determinants of q-distance matrices of trees from the command line.
//!
//! Exit status: 0 when every check passes, 1 when an identity fails, 2 on
//! invalid input or usage.

mod report;
mod source;

use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use source::{ShapeArgs, SourceArgs, SourceError};

#[derive(Debug, Parser)]
#[command(
    name = "qdist",
    version,
    about = "Exact determinants of q-distance matrices of weighted trees"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Output {
    Plain,
    Json,
    Csv,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Determinants of D, D + xJ, D_q and D*_q with their closed forms.
    Det {
        #[command(flatten)]
        source: SourceArgs,
        #[command(flatten)]
        shape: ShapeArgs,
        #[arg(long, value_enum, default_value_t = Output::Plain)]
        output: Output,
    },
    /// Run the identity suite over one or many trees.
    Verify {
        #[command(flatten)]
        source: SourceArgs,
        #[command(flatten)]
        shape: ShapeArgs,
        /// Number of random trees on `--random` vertices.
        #[arg(long, value_name = "T")]
        trials: Option<usize>,
        /// Draw orders from 2..=M; `--random` then counts trees.
        #[arg(long, value_name = "M")]
        n_max: Option<usize>,
        /// Skip the permutation generating-function comparison.
        #[arg(long)]
        no_permutations: bool,
        #[arg(long, value_enum, default_value_t = Output::Plain)]
        output: Output,
    },
    /// Signed permutation tables from every available source.
    PermTable {
        #[command(flatten)]
        source: SourceArgs,
        #[command(flatten)]
        shape: ShapeArgs,
        /// Last row to print; defaults to the highest nonzero index.
        #[arg(long, value_name = "K")]
        k_max: Option<u64>,
        #[arg(long, value_enum, default_value_t = Output::Plain)]
        output: Output,
    },
    /// Wiener polynomial and index.
    Wiener {
        #[command(flatten)]
        source: SourceArgs,
        #[command(flatten)]
        shape: ShapeArgs,
        #[arg(long, value_enum, default_value_t = Output::Plain)]
        output: Output,
    },
    /// Write a tree file.
    GenTree {
        #[command(flatten)]
        source: SourceArgs,
        #[command(flatten)]
        shape: ShapeArgs,
        #[arg(long, value_enum, default_value_t = Output::Plain)]
        output: Output,
    },
    /// List trees, one per line.
    Enumerate {
        #[command(flatten)]
        source: SourceArgs,
        #[command(flatten)]
        shape: ShapeArgs,
        #[arg(long, value_enum, default_value_t = Output::Plain)]
        output: Output,
    },
}

/// What a command produced: its text and whether every check held.
pub struct Rendered {
    pub text: String,
    pub passed: bool,
}

fn run(cli: Cli) -> Result<Rendered, SourceError> {
    match cli.command {
        Command::Det {
            source,
            shape,
            output,
        } => report::det(&source.single(&shape)?, output),
        Command::Verify {
            source,
            shape,
            trials,
            n_max,
            no_permutations,
            output,
        } => {
            if !source.is_exhaustive()
                && source.random.is_none()
                && (trials.is_some() || n_max.is_some())
            {
                return Err(SourceError::Usage(
                    "--trials and --n-max require --random".into(),
                ));
            }
            let trees = source.many(&shape, source::Sampling { trials, n_max })?;
            Ok(report::verify(trees, !no_permutations, output))
        }
        Command::PermTable {
            source,
            shape,
            k_max,
            output,
        } => report::perm_table(&source.single(&shape)?, k_max, output),
        Command::Wiener {
            source,
            shape,
            output,
        } => Ok(report::wiener(&source.single(&shape)?, output)),
        Command::GenTree {
            source,
            shape,
            output,
        } => Ok(report::gen_tree(&source.single(&shape)?, output)),
        Command::Enumerate {
            source,
            shape,
            output,
        } => {
            let sampling = source::Sampling {
                trials: None,
                n_max: None,
            };
            Ok(report::enumerate(&source.many(&shape, sampling)?, output))
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(r) => {
            print!("{}", r.text);
            if r.passed {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            let kind = match e {
                SourceError::Usage(_) => "usage",
                SourceError::Input(_) => "invalid input",
            };
            eprintln!("error ({kind}): {e}");
            ExitCode::from(2)
        }
    }
}
