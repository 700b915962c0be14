use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use gaussmap::verify::summary_table;
use gaussmap_cli::{
    analyze, catalog_listing, fields_csv, resolve_surface, summary, verify, write_output, Failure, GridOptions,
};

/// Gauss-map geometry of Lorentzian surfaces in Minkowski space E⁴₁.
#[derive(Parser)]
#[command(name = "gaussmap", version)]
struct Cli {
    /// Worker threads for grid evaluation (0 = one per core).
    #[arg(long, global = true, default_value_t = 0)]
    threads: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct GridArgs {
    /// Samples per axis of the square grid.
    #[arg(long = "grid", value_name = "N")]
    n: Option<usize>,
    /// Sampling rectangle; defaults to the surface's own domain.
    #[arg(long, num_args = 4, value_names = ["S_MIN", "S_MAX", "T_MIN", "T_MAX"], allow_negative_numbers = true)]
    domain: Option<Vec<f64>>,
    /// Identity tolerance.
    #[arg(long)]
    tol: Option<f64>,
}

impl GridArgs {
    fn options(&self) -> GridOptions {
        GridOptions {
            n: self.n,
            domain: self.domain.as_ref().map(|d| [d[0], d[1], d[2], d[3]]),
            identity_tol: self.tol,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Run every identity and classification predicate on a surface.
    Analyze {
        /// Surface file, or `catalog:NAME`.
        surface: String,
        #[command(flatten)]
        grid: GridArgs,
        /// Write the JSON report here instead of standard output.
        #[arg(long)]
        json: Option<PathBuf>,
        /// Record wall-clock timings in the report.
        #[arg(long)]
        timings: bool,
    },
    /// Dump det g, K, K^D, ‖H‖ and ‖Δν‖ per grid point as CSV.
    Fields {
        surface: String,
        #[command(flatten)]
        grid: GridArgs,
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Run a property suite: algebra, jets, engine, identities,
    /// classification or all.
    Verify {
        suite: String,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Only properties whose name contains this text.
        #[arg(long)]
        filter: Option<String>,
    },
    /// List the built-in surfaces, or print one in file format.
    Catalog { name: Option<String> },
}

fn io(e: anyhow::Error) -> Failure {
    Failure { code: 2, error: e }
}

fn run(cli: Cli) -> Result<ExitCode, Failure> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(cli.threads)
        .build_global()
        .map_err(|e| io(e.into()))?;
    match cli.command {
        Command::Analyze { surface, grid, json, timings } => {
            let s = resolve_surface(&surface)?;
            let g = grid.options().grid_for(&s)?;
            let (report, failure) = analyze(&s, &g, timings)?;
            match json {
                Some(path) => {
                    write_output(&path, &report.to_json()).map_err(io)?;
                    print!("{}", summary(&report));
                }
                None => print!("{}", report.to_json()),
            }
            failure.map_or(Ok(ExitCode::SUCCESS), Err)
        }
        Command::Fields { surface, grid, csv } => {
            let s = resolve_surface(&surface)?;
            let g = grid.options().grid_for(&s)?;
            let (text, failure) = fields_csv(&s, &g)?;
            match csv {
                Some(path) => write_output(&path, &text).map_err(io)?,
                None => print!("{text}"),
            }
            failure.map_or(Ok(ExitCode::SUCCESS), Err)
        }
        Command::Verify { suite, seed, filter } => {
            let checks = verify(&suite, seed, filter.as_deref())?;
            print!("{}", summary_table(&checks));
            let mut ok = !checks.is_empty();
            for c in checks.iter().filter(|c| !c.passed) {
                ok = false;
                println!("FAILED {}/{}: {}", c.suite.name(), c.name, c.failure.as_deref().unwrap_or(""));
            }
            Ok(if ok { ExitCode::SUCCESS } else { ExitCode::from(1) })
        }
        Command::Catalog { name } => {
            print!("{}", catalog_listing(name.as_deref())?);
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(f) => {
            eprintln!("error: {:#}", f.error);
            ExitCode::from(f.code)
        }
    }
}
