//! Command-line front end: bound computation over measurement files,
//! certificate verification, measurement simulation and catalog listing.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use entcert::catalog::catalog_names;
use entcert::concurrence::ConjugateSearchConfig;
use entcert::error::Result;
use entcert::formats;
use entcert::report::{
    run_report, simulate_measurement, verify_report, CertificationReport, Measure, ReportConfig,
};

#[derive(Parser)]
#[command(
    name = "entcert",
    version,
    about = "Certified lower bounds on entanglement measures from witness data"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute bounds for the requested measures over a measurement file.
    Bound {
        /// Measure to bound; repeat for several. One of negativity, ef,
        /// concurrence, robustness-gen, robustness-rand.
        #[arg(long, required = true)]
        measure: Vec<Measure>,
        /// Measurement record file.
        #[arg(long)]
        data: PathBuf,
        /// Witness (catalog name or file) for records that name none;
        /// consumed in order.
        #[arg(long)]
        witness: Vec<String>,
        /// Emit the machine-readable report instead of text.
        #[arg(long)]
        json: bool,
        /// Upper-bracket multistarts in the conjugate search.
        #[arg(long, default_value_t = ConjugateSearchConfig::default().upper_starts)]
        conjugate_starts: usize,
        /// Grid size of the conjugate coefficient scan.
        #[arg(long, default_value_t = ConjugateSearchConfig::default().alpha_scan)]
        conjugate_scan: usize,
        /// Seed for the conjugate search multistarts.
        #[arg(long, default_value_t = ConjugateSearchConfig::default().seed)]
        conjugate_seed: u64,
    },
    /// Recompute every bound in a report from its certificates.
    Verify {
        /// Machine-readable report file.
        #[arg(long)]
        report: PathBuf,
    },
    /// Measure a witness against a state file with seeded gaussian noise.
    Simulate {
        /// State file (vector or density matrix).
        #[arg(long)]
        state: PathBuf,
        /// Witness catalog name or file.
        #[arg(long)]
        witness: String,
        /// Standard deviation of the added noise.
        #[arg(long, default_value_t = 0.0)]
        noise: f64,
        /// Noise seed; identical seeds reproduce the record exactly.
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Inspect the built-in witness catalog.
    Catalog {
        #[command(subcommand)]
        action: CatalogAction,
    },
}

#[derive(Subcommand)]
enum CatalogAction {
    /// Print every built-in witness name with a short description.
    List,
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Bound {
            measure,
            data,
            witness,
            json,
            conjugate_starts,
            conjugate_scan,
            conjugate_seed,
        } => {
            let config = ReportConfig {
                measures: measure,
                data,
                witnesses: witness,
                conjugate: ConjugateSearchConfig {
                    upper_starts: conjugate_starts,
                    alpha_scan: conjugate_scan,
                    seed: conjugate_seed,
                },
            };
            let report = run_report(&config)?;
            if json {
                println!("{}", report.to_json());
            } else {
                print!("{}", report.render_text());
            }
        }
        Command::Verify { report } => {
            let text = std::fs::read_to_string(&report)?;
            let parsed = CertificationReport::from_json(&text)?;
            verify_report(&parsed, report.parent())?;
            println!(
                "report verifies: {} row(s), equality tolerance {:.0e}",
                parsed.rows.len(),
                parsed.tolerances.verify_equality
            );
        }
        Command::Simulate {
            state,
            witness,
            noise,
            seed,
        } => {
            let record = simulate_measurement(&state, &witness, noise, seed)?;
            print!("{}", formats::measurements_text(&[record]));
        }
        Command::Catalog { action } => match action {
            CatalogAction::List => {
                for (name, description) in catalog_names() {
                    println!("{name:12} {description}");
                }
            }
        },
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
