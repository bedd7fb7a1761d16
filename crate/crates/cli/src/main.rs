use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use process_duality::commands::{self, Exit, Output, OutputFormat, Side};
use process_duality::fuzz::{Dims, Mutant};
use process_duality_core::certify::DEFAULT_FRONTIER_LIMIT;

const THREADS_VAR: &str = "PROCESS_DUALITY_THREADS";

#[derive(Parser)]
#[command(
    name = "process-duality",
    version,
    about = "Exact Lagrange processes and duality certificates for polyhedral vector programs"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Format {
    /// Machine-readable output.
    #[arg(long, conflicts_with = "text")]
    json: bool,
    /// Human-readable output.
    #[arg(long)]
    text: bool,
}

impl Format {
    fn resolve(&self, default: OutputFormat) -> OutputFormat {
        match (self.json, self.text) {
            (true, _) => OutputFormat::Json,
            (_, true) => OutputFormat::Text,
            _ => default,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum SideArg {
    #[value(name = "P")]
    P,
    #[value(name = "D")]
    D,
    Both,
}

#[derive(Clone, Copy, ValueEnum)]
enum MutantArg {
    SignFlip,
}

#[derive(Subcommand)]
enum Command {
    /// Build the Lagrange process at y0 and check every duality clause.
    Certify {
        problem: PathBuf,
        /// Comma-separated rationals, e.g. 0/1,1/2.
        #[arg(long, allow_hyphen_values = true, required_unless_present = "frontier", conflicts_with = "frontier")]
        y0: Option<String>,
        /// Certify every minimal vertex of W(0).
        #[arg(long)]
        frontier: bool,
        #[arg(long, default_value_t = DEFAULT_FRONTIER_LIMIT)]
        limit: usize,
        #[command(flatten)]
        format: Format,
    },
    /// Print the separator generators and the graph of the Lagrange process.
    Process {
        problem: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        y0: String,
        /// Also evaluate L(z) at this z; repeatable.
        #[arg(long, allow_hyphen_values = true)]
        at: Vec<String>,
        #[command(flatten)]
        format: Format,
    },
    /// Minimality and proper efficiency of y0 for the primal and dual programs.
    Classify {
        problem: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        y0: String,
        #[arg(long, value_enum, default_value = "both")]
        side: SideArg,
        #[command(flatten)]
        format: Format,
    },
    /// Minimal vertices of W(0), or of the dual image with --dual-at.
    Frontier {
        problem: PathBuf,
        #[arg(long, default_value_t = DEFAULT_FRONTIER_LIMIT)]
        limit: usize,
        #[arg(long, allow_hyphen_values = true)]
        dual_at: Option<String>,
        #[command(flatten)]
        format: Format,
    },
    /// Certify random instances and shrink the first failure.
    Fuzz {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 100)]
        count: usize,
        /// Fixed dimensions x,y,z; random in 1..=3 when omitted.
        #[arg(long)]
        dims: Option<Dims>,
        /// Deliberately broken construction, to check the harness.
        #[arg(long, value_enum)]
        mutant: Option<MutantArg>,
        /// Directory for counterexample problem files.
        #[arg(long)]
        out: Option<PathBuf>,
        #[command(flatten)]
        format: Format,
    },
}

fn configure_threads() -> anyhow::Result<()> {
    let Ok(raw) = std::env::var(THREADS_VAR) else {
        return Ok(());
    };
    let n: usize = raw
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| anyhow::anyhow!("{THREADS_VAR} must be a positive integer, got `{raw}`"))?;
    rayon::ThreadPoolBuilder::new().num_threads(n).build_global()?;
    Ok(())
}

fn run(cli: Cli) -> anyhow::Result<Output> {
    configure_threads()?;
    match cli.command {
        Command::Certify { problem, y0, frontier, limit, format } => {
            commands::certify(&problem, y0.as_deref(), frontier.then_some(limit), format.resolve(OutputFormat::Text))
        }
        Command::Process { problem, y0, at, format } => {
            commands::process(&problem, &y0, &at, format.resolve(OutputFormat::Text))
        }
        Command::Classify { problem, y0, side, format } => {
            let side = match side {
                SideArg::P => Side::Primal,
                SideArg::D => Side::Dual,
                SideArg::Both => Side::Both,
            };
            commands::classify(&problem, &y0, side, format.resolve(OutputFormat::Json))
        }
        Command::Frontier { problem, limit, dual_at, format } => {
            commands::frontier(&problem, limit, dual_at.as_deref(), format.resolve(OutputFormat::Text))
        }
        Command::Fuzz { seed, count, dims, mutant, out, format } => {
            let mutant = mutant.map(|MutantArg::SignFlip| Mutant::SignFlip);
            commands::fuzz(seed, count, dims, mutant, out.as_deref(), format.resolve(OutputFormat::Text))
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(out) => {
            print!("{}", out.stdout);
            eprint!("{}", out.stderr);
            ExitCode::from(out.exit as u8)
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(Exit::InputError as u8)
        }
    }
}
