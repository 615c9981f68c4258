//! Machine-readable campaign reports and CSV artifacts.
//!
//! A report is a single JSON document: schema version, tool provenance, the
//! materialized configuration, one record per executed check, and the
//! aggregate exit status. Field names are stable; numerical fields are
//! bit-for-bit reproducible for a fixed configuration because every sampler
//! in the crate is seeded. Curves go to CSV files, one artifact per curve,
//! so plots can be produced by external tooling.

use serde::Serialize;

use crate::config::CampaignConfig;
use crate::error::{Error, Result};

/// One executed check: suite, stable name, verdict, and the headline
/// numbers behind it.
#[derive(Clone, Debug, Serialize)]
pub struct CheckRecord {
    pub suite: &'static str,
    pub name: String,
    pub pass: bool,
    /// Headline residual or estimate, when the check has one.
    pub residual: Option<f64>,
    /// Tolerance or confidence band the residual was compared against.
    pub band: Option<f64>,
    /// Human-readable outcome, including failure reasons.
    pub detail: String,
}

impl CheckRecord {
    pub fn new(suite: &'static str, name: impl Into<String>, pass: bool) -> Self {
        CheckRecord { suite, name: name.into(), pass, residual: None, band: None, detail: String::new() }
    }

    pub fn with_numbers(mut self, residual: f64, band: f64) -> Self {
        self.residual = Some(residual);
        self.band = Some(band);
        self
    }

    pub fn with_detail(mut self, detail: impl Into<String>) -> Self {
        self.detail = detail.into();
        self
    }

    /// A failed record carrying the error that prevented the check.
    pub fn failed(suite: &'static str, name: impl Into<String>, err: &Error) -> Self {
        CheckRecord::new(suite, name, false).with_detail(err.to_string())
    }

    /// One line of the run log: `PASS  suite  name  detail`.
    pub fn summary_line(&self) -> String {
        let verdict = if self.pass { "PASS" } else { "FAIL" };
        if self.detail.is_empty() {
            format!("{verdict}  [{}] {}", self.suite, self.name)
        } else {
            format!("{verdict}  [{}] {}: {}", self.suite, self.name, self.detail)
        }
    }
}

/// A named CSV artifact produced by a campaign.
#[derive(Clone, Debug)]
pub struct Artifact {
    /// File name relative to the output directory (always `.csv`).
    pub name: String,
    pub contents: String,
}

impl Artifact {
    pub fn new(name: impl Into<String>, contents: impl Into<String>) -> Self {
        Artifact { name: name.into(), contents: contents.into() }
    }
}

/// The complete outcome of a campaign.
#[derive(Clone, Debug, Serialize)]
pub struct Report {
    /// Version of the report layout itself.
    pub schema_version: u32,
    pub tool: &'static str,
    pub tool_version: &'static str,
    /// Master seed the campaign actually ran with (after any override).
    pub seed: u64,
    /// The materialized configuration, defaults included.
    pub config: CampaignConfig,
    pub checks: Vec<CheckRecord>,
    pub passed: usize,
    pub failed: usize,
    /// `"pass"` iff every executed check passed.
    pub exit_status: &'static str,
}

impl Report {
    pub fn new(config: CampaignConfig, checks: Vec<CheckRecord>) -> Self {
        let passed = checks.iter().filter(|c| c.pass).count();
        let failed = checks.len() - passed;
        Report {
            schema_version: 1,
            tool: "strictlab",
            tool_version: env!("CARGO_PKG_VERSION"),
            seed: config.seed,
            config,
            checks,
            passed,
            failed,
            exit_status: if failed == 0 { "pass" } else { "fail" },
        }
    }

    pub fn all_pass(&self) -> bool {
        self.failed == 0
    }

    /// The report as pretty-printed JSON with a trailing newline.
    pub fn to_json(&self) -> Result<String> {
        let mut s = serde_json::to_string_pretty(self)
            .map_err(|e| Error::Config(format!("report serialization: {e}")))?;
        s.push('\n');
        Ok(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn config() -> CampaignConfig {
        CampaignConfig::from_toml_str("seed = 5\n").unwrap()
    }

    #[test]
    fn exit_status_is_the_conjunction_of_verdicts() {
        let ok = CheckRecord::new("topology", "classifier", true).with_numbers(0.01, 0.05);
        let bad = CheckRecord::new("topology", "walk", false).with_detail("lost mass");
        let r = Report::new(config(), vec![ok.clone()]);
        assert!(r.all_pass());
        assert_eq!(r.exit_status, "pass");
        let r = Report::new(config(), vec![ok, bad]);
        assert!(!r.all_pass());
        assert_eq!(r.exit_status, "fail");
        assert_eq!((r.passed, r.failed), (1, 1));
    }

    #[test]
    fn json_echoes_the_materialized_config_and_is_stable() {
        let r = Report::new(config(), vec![CheckRecord::new("scle", "law", true)]);
        let a = r.to_json().unwrap();
        let b = r.to_json().unwrap();
        assert_eq!(a, b);
        assert!(a.contains("\"schema_version\": 1"));
        assert!(a.contains("\"n_paths\": 10000"), "defaults must be echoed: {a}");
        assert!(a.contains("\"seed\": 5"));
        assert!(a.ends_with('\n'));
    }

    #[test]
    fn summary_lines_read_like_a_log() {
        let c = CheckRecord::new("martingale", "mean test", true).with_detail("gap 0.001");
        assert_eq!(c.summary_line(), "PASS  [martingale] mean test: gap 0.001");
        let f = CheckRecord::failed(
            "extension",
            "round trip",
            &Error::Precondition("mass leaks".into()),
        );
        assert!(f.summary_line().starts_with("FAIL  [extension] round trip"));
    }
}
