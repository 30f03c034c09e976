mod commands;
mod fixtures;
mod pairfile;

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Duration;

use clap::{Args, Parser, Subcommand, ValueEnum};

use commands::CliError;

#[derive(Parser, Debug)]
#[command(
    name = "hgs",
    version,
    about = "Transitive holomorph subgroups and parallel Hopf-Galois structures"
)]
struct Cli {
    #[command(flatten)]
    global: GlobalOpts,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct GlobalOpts {
    /// Directory for catalogue and analysis cache files.
    #[arg(long, global = true, env = "HGS_CACHE_DIR")]
    pub cache_dir: Option<PathBuf>,

    /// Output format; tables default to csv, reports to text.
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,

    /// Worker threads (default: all cores).
    #[arg(long, global = true, env = "HGS_THREADS", value_parser = clap::value_parser!(u32).range(1..))]
    pub threads: Option<u32>,

    /// Refuse holomorphs of larger order.
    #[arg(long, global = true, value_parser = clap::value_parser!(u64).range(1..))]
    pub max_order: Option<u64>,

    /// Wall-clock limit in seconds; completed cache files are kept.
    #[arg(long, global = true, env = "HGS_TIME_LIMIT", value_parser = clap::value_parser!(u64).range(1..))]
    pub time_limit: Option<u64>,

    /// Reuse valid cache files instead of recomputing them.
    #[arg(long, global = true)]
    pub resume: bool,

    /// Record computed counts in this fixture file, or check them against it.
    #[arg(long, global = true, value_name = "FILE")]
    pub seed_fixtures: Option<PathBuf>,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Build (or load) the transitive-subgroup catalogue of a degree.
    Catalog {
        #[arg(long, required = true, num_args = 1.., value_delimiter = ',')]
        degree: Vec<u64>,
    },
    /// Count catalogue entries with a parallel pair admitting no Hopf-Galois structure.
    NoHgs {
        #[arg(long, required = true, num_args = 1.., value_delimiter = ',')]
        degree: Vec<u64>,
        /// Include every failing (G, H) pair in the output.
        #[arg(long)]
        emit_witnesses: bool,
    },
    /// Check the degree-pq constructions and counts against the general engine.
    VerifyPq {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        q: u64,
    },
    /// Analyze one pair (G, H) read from a JSON file.
    Analyze {
        /// JSON {degree, G: [perms], H: [perms], one_based?}.
        pair_file: PathBuf,
    },
    /// Extend a no-HGS witness of odd degree n to G x C_q of degree nq.
    Extend {
        #[arg(long)]
        degree: u64,
        /// Catalogue entry id; defaults to the first entry with a witness.
        #[arg(long)]
        entry: Option<usize>,
        /// Use the least admissible prime above the degree.
        #[arg(long, conflicts_with = "primes")]
        auto_prime: bool,
        /// Apply the extension once per prime, in order.
        #[arg(long, value_delimiter = ',', required_unless_present = "auto_prime")]
        primes: Vec<u64>,
    },
}

fn run(cli: Cli) -> Result<bool, CliError> {
    if let Some(n) = cli.global.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n as usize)
            .build_global()
            .map_err(|e| CliError::usage(format!("cannot configure {n} threads: {e}")))?;
    }
    if let Some(secs) = cli.global.time_limit {
        std::thread::spawn(move || {
            std::thread::sleep(Duration::from_secs(secs));
            eprintln!("error: time limit of {secs}s exceeded");
            std::process::exit(3);
        });
    }
    let g = &cli.global;
    match cli.command {
        Command::Catalog { degree } => commands::catalog(g, &degree),
        Command::NoHgs {
            degree,
            emit_witnesses,
        } => commands::no_hgs(g, &degree, emit_witnesses),
        Command::VerifyPq { p, q } => commands::verify_pq(g, p, q),
        Command::Analyze { pair_file } => commands::analyze(g, &pair_file),
        Command::Extend {
            degree,
            entry,
            auto_prime,
            primes,
        } => commands::extend(g, degree, entry, auto_prime, &primes),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {}", e.message);
            ExitCode::from(e.code)
        }
    }
}
