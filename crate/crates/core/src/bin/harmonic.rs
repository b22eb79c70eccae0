use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use harmonic_core::cli::{cmd_density, cmd_embed_s2, cmd_phi, cmd_verify, is_usage_error, CommonOptions};
use harmonic_core::report::RunReport;

#[derive(Parser)]
#[command(name = "harmonic", version, about = "Verification pipelines for harmonic manifolds and rank-one symmetric spaces")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Grid size (density, phi) or quadrature resolution (embed-s2)
    #[arg(long, global = true)]
    grid: Option<usize>,
    /// Override the main tolerance of density and phi
    #[arg(long, global = true)]
    tol: Option<f64>,
    /// Print the report as JSON on stdout
    #[arg(long, global = true)]
    json: bool,
    /// Seed for randomized checks
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Number of cases in randomized suites
    #[arg(long, global = true)]
    cases: Option<usize>,
    /// Directory for CSV and JSON artifacts
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Jacobi-tensor density against the closed-form table
    Density {
        /// Space identifier, e.g. sphere:3, cpn:2, op2, chn:4
        space: String,
    },
    /// Radial eigenfunction for the k-th eigenvalue of a compact space
    Phi { space: String, k: u32 },
    /// Run an invariant suite: density, ode, roots, embedding or all
    Verify { suite: String },
    /// Explicit first-eigenspace embedding of the round 2-sphere
    EmbedS2 {
        /// Gauss-Legendre nodes in cos(theta); azimuth uses twice as many
        #[arg(long)]
        resolution: Option<usize>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let opts = CommonOptions { grid: cli.grid, tol: cli.tol, seed: cli.seed, cases: cli.cases, out: cli.out };
    let result = match &cli.command {
        Command::Density { space } => cmd_density(space, &opts),
        Command::Phi { space, k } => cmd_phi(space, *k, &opts),
        Command::Verify { suite } => cmd_verify(suite, &opts),
        Command::EmbedS2 { resolution } => cmd_embed_s2(*resolution, &opts),
    };
    match result {
        Ok(report) => {
            emit(&report, cli.json);
            if report.pass {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(if is_usage_error(&e) { 2 } else { 1 })
        }
    }
}

fn emit(report: &RunReport, json: bool) {
    if json {
        println!("{}", report.to_json());
    } else {
        print!("{}", report.to_table());
    }
}
