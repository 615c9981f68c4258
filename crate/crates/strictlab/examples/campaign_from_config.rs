//! Driving a verification campaign from a declarative TOML configuration,
//! without the command-line wrapper: parse, describe, run, and inspect the
//! report object directly. The same configuration text always produces the
//! same report and the same CSV artifact bytes.
//!
//! Run with: `cargo run --release --example campaign_from_config`

use strictlab::{describe_campaign, run_campaign, CampaignConfig, Result};

const CONFIG: &str = r#"
seed = 42
functions = ["one", "cos_recip"]
suites = ["martingale", "extension"]

[space]
kind = "truncated_countable"
n_max = 80

[model]
family = "birth_death"
rate = 1.0

[sampling]
n_paths = 4000

[schedule]
t_grid = [0.1, 0.5]
"#;

fn main() -> Result<()> {
    let config = CampaignConfig::from_toml_str(CONFIG)?;

    println!("=== plan ===");
    print!("{}", describe_campaign(&config)?);

    println!();
    println!("=== run ===");
    let outcome = run_campaign(&config)?;
    for check in &outcome.report.checks {
        println!("{}", check.summary_line());
    }

    println!();
    println!(
        "exit status: {} ({} passed, {} failed)",
        outcome.report.exit_status, outcome.report.passed, outcome.report.failed
    );
    println!("artifacts:");
    for artifact in &outcome.artifacts {
        let rows = artifact.contents.lines().count().saturating_sub(1);
        println!("  {} ({} data rows)", artifact.name, rows);
    }

    // Determinism: a second run reproduces the report byte for byte.
    let again = run_campaign(&config)?;
    println!();
    println!(
        "bit-for-bit reproducible: {}",
        again.report.to_json()? == outcome.report.to_json()?
    );
    Ok(())
}
