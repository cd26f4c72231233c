use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use diolic_cli::{commands, Caps, CliResult, Report};

/// Exact checks for diolic Poisson, Jacobi and algebroid structures.
#[derive(Parser)]
#[command(name = "diolic", version)]
struct Cli {
    /// Print a plain-text report instead of JSON.
    #[arg(long, global = true)]
    pretty: bool,

    /// Dimension caps such as "n=4,m=3,order=4,D=6".
    #[arg(long, global = true, value_name = "SPEC")]
    max_dim: Option<String>,

    /// Add wall-clock time to the report (makes output run-dependent).
    #[arg(long, global = true)]
    timing: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the checker named by a problem file's kind.
    Check { file: PathBuf },
    /// Bracket two operands given as symbol text or JSON.
    Bracket {
        #[arg(long)]
        kind: String,
        /// Variable count; inferred from the operands when omitted.
        #[arg(long)]
        n: Option<usize>,
        /// Rank of P; inferred from the operands when omitted.
        #[arg(long)]
        m: Option<usize>,
        left: String,
        right: String,
    },
    /// Betti numbers of a Chevalley–Eilenberg or truncated Der complex.
    Cohomology(CohomologyArgs),
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct CohomologyArgs {
    #[arg(long, value_name = "FILE")]
    ce: Option<PathBuf>,
    #[arg(long, num_args = 3, value_names = ["N", "M", "D"])]
    der: Option<Vec<u32>>,
}

fn run(cli: &Cli) -> CliResult<Report> {
    let caps: Caps = match &cli.max_dim {
        Some(spec) => spec.parse()?,
        None => Caps::default(),
    };
    match &cli.command {
        Command::Check { file } => commands::check_file(file, &caps),
        Command::Bracket { kind, n, m, left, right } => commands::bracket(kind, left, right, *n, *m, &caps),
        Command::Cohomology(args) => match (&args.ce, &args.der) {
            (Some(path), _) => commands::ce_cohomology_file(path, &caps),
            (None, Some(v)) => commands::der_cohomology(v[0] as usize, v[1] as usize, v[2], &caps),
            (None, None) => unreachable!("clap enforces one of --ce and --der"),
        },
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let start = Instant::now();
    match run(&cli) {
        Ok(mut report) => {
            if cli.timing {
                report.timing_ms = Some(start.elapsed().as_millis() as u64);
            }
            if cli.pretty {
                print!("{}", report.to_text());
            } else {
                println!("{}", report.to_json());
            }
            ExitCode::from(report.exit_code() as u8)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
