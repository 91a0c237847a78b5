//! `hyperzeta`: zeta functions, L-functions and Galois coverings of
//! hypergraphs from JSON files.

mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use commands::CliError;

#[derive(Parser, Debug)]
#[command(name = "hyperzeta", version, about = "Ihara zeta and Artin-Ihara L-functions of hypergraphs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    format: Format,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Text,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Quotient hypergraph Y/G and the projection.
    Quotient(CoverArgs),
    /// Check freeness, the covering property and the deck group.
    VerifyCover {
        #[command(flatten)]
        cover: CoverArgs,
        /// Expected base hypergraph, compared up to isomorphism.
        #[arg(long)]
        base: Option<PathBuf>,
    },
    /// Reciprocal Ihara zeta function of a hypergraph or graph.
    Zeta {
        #[command(flatten)]
        input: InputArgs,
        #[command(flatten)]
        series: SeriesArgs,
    },
    /// Reciprocal Artin-Ihara L-function of a covering and a representation.
    Lfunction {
        #[command(flatten)]
        cover: CoverArgs,
        /// Representation JSON.
        #[arg(long)]
        rep: PathBuf,
        #[command(flatten)]
        sheets: SheetArgs,
        #[command(flatten)]
        series: SeriesArgs,
    },
    /// Prime cycle classes up to a length.
    Primes {
        #[command(flatten)]
        input: InputArgs,
        #[arg(long, default_value_t = 6)]
        max_len: usize,
    },
    /// Sheet partition and edge Frobenius elements.
    Sheets {
        #[command(flatten)]
        cover: CoverArgs,
        #[command(flatten)]
        sheets: SheetArgs,
    },
    /// Check the factorization of the cover's zeta function into L-functions.
    FactorCheck {
        #[command(flatten)]
        cover: CoverArgs,
        /// Manifest `{"irreps": [{"path": ..., "dim": d}]}`; paths are
        /// relative to the manifest.
        #[arg(long)]
        irreps: PathBuf,
        #[command(flatten)]
        sheets: SheetArgs,
    },
}

#[derive(Args, Debug)]
pub struct CoverArgs {
    /// Hypergraph JSON of the cover Y.
    #[arg(long)]
    pub hypergraph: PathBuf,
    /// Action JSON with the generators of G.
    #[arg(long)]
    pub action: PathBuf,
}

#[derive(Args, Debug)]
#[group(required = true, multiple = false)]
pub struct InputArgs {
    #[arg(long)]
    pub hypergraph: Option<PathBuf>,
    /// Graph JSON (every edge has two members).
    #[arg(long)]
    pub graph: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct SeriesArgs {
    /// edge-det, three-term, euler, euler-census or trace-exp.
    #[arg(long, default_value = "edge-det")]
    pub method: String,
    /// Truncation degree for the series methods.
    #[arg(long)]
    pub truncate: Option<usize>,
}

#[derive(Args, Debug)]
pub struct SheetArgs {
    /// Spanning tree of B_X as comma-separated `v:e` ids, or a JSON file
    /// holding an array of them.
    #[arg(long)]
    pub tree: Option<String>,
    #[arg(long)]
    pub base_vertex: Option<String>,
    #[arg(long)]
    pub base_lift: Option<String>,
}

fn run(cli: Cli) -> Result<commands::Report, CliError> {
    let f = cli.format;
    match cli.command {
        Command::Quotient(c) => commands::quotient(&c),
        Command::VerifyCover { cover, base } => commands::verify_cover(&cover, base.as_deref()),
        Command::Zeta { input, series } => commands::zeta(&input, &series),
        Command::Lfunction {
            cover,
            rep,
            sheets,
            series,
        } => commands::lfunction(&cover, &rep, &sheets, &series),
        Command::Primes { input, max_len } => commands::primes(&input, max_len),
        Command::Sheets { cover, sheets } => commands::sheets(&cover, &sheets),
        Command::FactorCheck {
            cover,
            irreps,
            sheets,
        } => commands::factor_check(&cover, &irreps, &sheets),
    }
    .map(|r| r.with_format(f))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let format = cli.format;
    match run(cli) {
        Ok(report) => {
            println!("{}", report.render());
            ExitCode::from(if report.passed { 0 } else { 1 })
        }
        Err(e) => {
            match format {
                Format::Json => eprintln!(
                    "{}",
                    serde_json::to_string_pretty(&e.to_json()).expect("error JSON")
                ),
                Format::Text => eprintln!("error: {e}"),
            }
            ExitCode::from(e.exit_code())
        }
    }
}
