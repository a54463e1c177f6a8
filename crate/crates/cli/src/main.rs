//! `hrgen`: normalize grammars, build count tables, sample, enumerate, check
//! ambiguity, time generation and render graphs.

mod commands;
mod error;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

/// Seed used when `--seed` is not given.
pub const DEFAULT_SEED: u64 = 20_240_611;

#[derive(Parser, Debug)]
#[command(name = "hrgen", version, about = "Uniform random generation from hyperedge replacement grammars")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Rewrite a grammar into normal form.
    Normalize {
        #[command(flatten)]
        io: GrammarIo,
        /// Print the applied rewrites on stderr.
        #[arg(long)]
        trace: bool,
    },
    /// Build the count tables up to offset SIZE.
    Count {
        #[command(flatten)]
        io: GrammarIo,
        #[arg(long, short = 'n', value_parser = clap::value_parser!(u64).range(1..))]
        size: u64,
    },
    /// Draw graphs of size SIZE uniformly (for unambiguous grammars).
    Sample {
        #[command(flatten)]
        io: GrammarIo,
        #[command(flatten)]
        target: Target,
        #[arg(long, default_value_t = 1)]
        count: usize,
        /// A number, or `random` for a seed from the system clock.
        #[arg(long)]
        seed: Option<String>,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
        /// Emit the derivation tree and choices along with each graph.
        #[arg(long)]
        with_tree: bool,
        /// Reuse count tables stored here, or store them if absent or stale.
        #[arg(long)]
        cache: Option<PathBuf>,
    },
    /// List the distinct graphs of one slice by exhaustive enumeration.
    Enumerate {
        #[command(flatten)]
        io: GrammarIo,
        #[command(flatten)]
        target: Target,
        /// Largest size the enumerator accepts (default: $HRGEN_ORACLE_CAP or 14).
        #[arg(long)]
        cap: Option<usize>,
    },
    /// Decide whether two derivation trees of the start symbol yield the same graph of size SIZE.
    CheckAmbiguity {
        #[command(flatten)]
        io: GrammarIo,
        #[arg(long, short = 'n', value_parser = clap::value_parser!(u64).range(1..))]
        size: u64,
        #[arg(long)]
        cap: Option<usize>,
    },
    /// Median generation time per size, tables built beforehand.
    Bench {
        #[command(flatten)]
        io: GrammarIo,
        #[arg(long)]
        start: Option<String>,
        #[arg(long, value_delimiter = ',', default_value = "200,400,800,1600")]
        sizes: Vec<usize>,
        #[arg(long, default_value_t = 200)]
        count: usize,
        #[arg(long)]
        seed: Option<String>,
    },
    /// Convert hypergraph JSON (one document, or one per line) to DOT.
    Render {
        /// Input file; `-` reads stdin.
        #[arg(long, short = 'i', default_value = "-")]
        input: PathBuf,
        #[arg(long, short = 'o')]
        output: Option<PathBuf>,
    },
}

#[derive(Args, Debug)]
struct GrammarIo {
    /// Grammar JSON file.
    #[arg(long, short = 'g')]
    grammar: PathBuf,
    /// Output file (default: stdout).
    #[arg(long, short = 'o')]
    output: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct Target {
    /// Nonterminal to start from (default: the grammar's start symbol).
    #[arg(long)]
    start: Option<String>,
    #[arg(long, short = 'n', value_parser = clap::value_parser!(u64).range(1..))]
    size: u64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Dot,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Normalize { io, trace } => commands::normalize(&io.grammar, io.output.as_deref(), trace),
        Command::Count { io, size } => commands::count(&io.grammar, io.output.as_deref(), size as usize),
        Command::Sample { io, target, count, seed, format, with_tree, cache } => commands::sample(commands::SampleRun {
            grammar: &io.grammar,
            output: io.output.as_deref(),
            start: target.start.as_deref(),
            size: target.size as usize,
            count,
            seed: seed.as_deref(),
            format,
            with_tree,
            cache: cache.as_deref(),
        }),
        Command::Enumerate { io, target, cap } => commands::enumerate(
            &io.grammar,
            io.output.as_deref(),
            target.start.as_deref(),
            target.size as usize,
            cap,
        ),
        Command::CheckAmbiguity { io, size, cap } => {
            commands::check_ambiguity(&io.grammar, io.output.as_deref(), size as usize, cap)
        }
        Command::Bench { io, start, sizes, count, seed } => {
            commands::bench(&io.grammar, io.output.as_deref(), start.as_deref(), &sizes, count, seed.as_deref())
        }
        Command::Render { input, output } => commands::render(&input, output.as_deref()),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("hrgen: {f}");
            ExitCode::from(f.code)
        }
    }
}
