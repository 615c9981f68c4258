//! Batch front-end for configuration-driven verification campaigns.
//!
//! Three subcommands share one declarative TOML configuration:
//!
//! * `run` executes the selected suites, writes `report.json` plus every CSV
//!   artifact into the output directory, and exits 0 only if all checks pass.
//! * `describe` prints the execution plan without side effects.
//! * `export` executes the campaign but writes only the CSV artifacts, for
//!   pipelines that consume curves and ignore verdicts.
//!
//! Exit codes: 0 all checks passed, 1 at least one check failed (the report
//! is still written), 2 the configuration or an I/O operation was invalid.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use strictlab::error::Result;
use strictlab::{describe_campaign, run_campaign, CampaignConfig, CampaignOutcome};

#[derive(Parser)]
#[command(
    name = "strictlab",
    version,
    about = "Config-driven verification campaigns for Markov semigroups under the strict topology"
)]
struct Cli {
    /// Path to the campaign configuration (TOML).
    #[arg(long, global = true, value_name = "PATH")]
    config: Option<PathBuf>,

    /// Output directory for the report and CSV artifacts (created if missing).
    #[arg(long, global = true, value_name = "DIR", default_value = "out")]
    out: PathBuf,

    /// Override the master seed from the configuration.
    #[arg(long, global = true, value_name = "OVERRIDE")]
    seed: Option<u64>,

    /// Size of the worker thread pool (defaults to all cores).
    #[arg(long, global = true, value_name = "N")]
    jobs: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Execute the campaign; write report.json and CSV artifacts.
    Run,
    /// Print the execution plan without running anything.
    Describe,
    /// Execute the campaign; write only the CSV artifacts.
    Export,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(&cli) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(2)
        }
    }
}

fn dispatch(cli: &Cli) -> Result<ExitCode> {
    let config = load_config(cli)?;
    match cli.command {
        Command::Describe => {
            print!("{}", describe_campaign(&config)?);
            Ok(ExitCode::SUCCESS)
        }
        Command::Run => {
            configure_pool(cli.jobs);
            let outcome = run_campaign(&config)?;
            // The report is written before the verdict is inspected so that a
            // failing campaign still leaves a complete record on disk.
            fs::create_dir_all(&cli.out)?;
            let report_path = cli.out.join("report.json");
            fs::write(&report_path, outcome.report.to_json()?)?;
            write_artifacts(&cli.out, &outcome)?;
            for check in &outcome.report.checks {
                println!("{}", check.summary_line());
            }
            println!(
                "{} checks passed, {} failed; report written to {}",
                outcome.report.passed,
                outcome.report.failed,
                report_path.display()
            );
            Ok(if outcome.report.all_pass() { ExitCode::SUCCESS } else { ExitCode::from(1) })
        }
        Command::Export => {
            configure_pool(cli.jobs);
            let outcome = run_campaign(&config)?;
            fs::create_dir_all(&cli.out)?;
            write_artifacts(&cli.out, &outcome)?;
            println!(
                "{} artifacts written to {}",
                outcome.artifacts.len(),
                cli.out.display()
            );
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn load_config(cli: &Cli) -> Result<CampaignConfig> {
    let path = cli.config.as_deref().ok_or_else(|| {
        strictlab::error::Error::Config("missing required flag --config PATH".into())
    })?;
    let text = fs::read_to_string(path)?;
    let mut config = CampaignConfig::from_toml_str(&text)?;
    if let Some(seed) = cli.seed {
        config.seed = seed;
    }
    Ok(config)
}

fn write_artifacts(out: &Path, outcome: &CampaignOutcome) -> Result<()> {
    for artifact in &outcome.artifacts {
        fs::write(out.join(&artifact.name), &artifact.contents)?;
    }
    Ok(())
}

/// Pin the global worker pool size when `--jobs` is given. Results do not
/// depend on the pool size; the flag only trades latency for cores.
fn configure_pool(jobs: Option<usize>) {
    if let Some(n) = jobs {
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
}
