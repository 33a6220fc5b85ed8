use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use expquad_cli::{run, summary, write_reports, RunOptions, Scenario};

/// Price the products of a scenario file and write CSV reports.
#[derive(Debug, Parser)]
#[command(name = "expquad", version)]
struct Args {
    /// Scenario JSON file.
    #[arg(long)]
    scenario: PathBuf,
    /// Directory for the CSV reports.
    #[arg(long, default_value = ".")]
    out_dir: PathBuf,
    /// Run the Monte Carlo validation even without an `mc` block.
    #[arg(long)]
    mc: bool,
    /// Override the Monte Carlo seed.
    #[arg(long)]
    seed: Option<u64>,
    /// Replace strikes and fixed rates with their fair values before pricing.
    #[arg(long)]
    solve_fair_rate: bool,
}

fn main() -> ExitCode {
    let args = Args::parse();
    let scenario = match Scenario::load(&args.scenario) {
        Ok(s) => s,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(e.exit_code() as u8);
        }
    };
    let options = RunOptions {
        force_mc: args.mc,
        seed: args.seed,
        solve_fair_rate: args.solve_fair_rate,
    };
    let report = run(&scenario, &options);
    print!("{}", summary(&report));
    if let Err(e) = write_reports(&report, &args.out_dir) {
        eprintln!("error: {e}");
        return ExitCode::from(e.exit_code() as u8);
    }
    let code = report.exit_code();
    if code != 0 {
        for r in &report.products {
            if let Err(e) = &r.price {
                eprintln!("error: product {}: {e}", r.index);
            } else if let Some(Err(e)) = &r.mc {
                eprintln!("error: product {} (Monte Carlo): {e}", r.index);
            }
        }
        for (name, rows) in &report.curves {
            if let Err(e) = rows {
                eprintln!("error: curve dump {name}: {e}");
            }
        }
    }
    ExitCode::from(code as u8)
}
