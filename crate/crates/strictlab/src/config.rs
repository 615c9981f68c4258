//! Declarative campaign configuration.
//!
//! A campaign is a single TOML document: one space, one model, a list of
//! suites, and every tolerance, schedule point, and sample size spelled out
//! or defaulted. The master seed is the only mandatory field, so that no
//! campaign is ever accidentally unseeded. Parsing materializes all
//! defaults; the report echoes the materialized struct, never the raw file.

use serde::{Deserialize, Serialize};

use crate::catalog;
use crate::error::{Error, Result};
use crate::func::TestFunction;
use crate::generator::{build_birth_death, build_ctmc, build_diffusion_1d, GeneratorGraph, QMatrix};
use crate::path::SamplerKind;
use crate::semigroup::SemigroupOperator;
use crate::space::StateSpace;

/// Verification suites selectable in a campaign.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Suite {
    /// Path-ensemble tests of the martingale property of the generator.
    Martingale,
    /// Semigroup law, strong continuity, local equicontinuity, generator
    /// recovery (strong continuity and local equicontinuity in the strict
    /// topology).
    Scle,
    /// Compact-containment certificate and path-modulus estimate.
    Containment,
    /// Restriction/extension round trip, mass conservation, core property.
    Extension,
    /// Strict-topology classifier suite, Hahn–Jordan reconstruction,
    /// vague-vs-weak discrimination.
    Topology,
}

impl Suite {
    pub fn name(self) -> &'static str {
        match self {
            Suite::Martingale => "martingale",
            Suite::Scle => "scle",
            Suite::Containment => "containment",
            Suite::Extension => "extension",
            Suite::Topology => "topology",
        }
    }
}

/// Which state space the campaign runs on.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum SpaceConfig {
    /// `n` abstract points with the discrete metric.
    Finite { n: usize },
    /// `{0, ..., n_max}` truncating the countable space.
    TruncatedCountable { n_max: usize },
    /// Symmetric grid `[-half_width, half_width]` truncating the real line.
    RealGrid { half_width: f64, spacing: f64 },
}

impl Default for SpaceConfig {
    fn default() -> Self {
        SpaceConfig::TruncatedCountable { n_max: 40 }
    }
}

/// Generator families the campaign can instantiate.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ModelFamily {
    /// Symmetric 2-state chain with jump rate `rate` in both directions.
    TwoState,
    /// Birth–death chain with constant birth and death rates, reflecting
    /// truncation at the space boundary.
    BirthDeath,
    /// Brownian motion on the real grid: closed-form transition operator,
    /// reflected Euler–Maruyama paths.
    Heat,
}

impl ModelFamily {
    pub fn name(self) -> &'static str {
        match self {
            ModelFamily::TwoState => "two_state",
            ModelFamily::BirthDeath => "birth_death",
            ModelFamily::Heat => "heat",
        }
    }
}

/// Deliberate fault injections for negative controls.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Corruption {
    /// No fault: the generator under test is the simulation generator.
    #[default]
    None,
    /// Hand the checks `2Q` instead of `Q` while simulating from `Q`.
    DoubleGenerator,
}

/// Model section: family, rates, and fault knobs.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelConfig {
    pub family: ModelFamily,
    /// Jump rate (two-state) or birth rate (birth–death). Ignored by heat.
    #[serde(default = "one")]
    pub rate: f64,
    /// Death rate for birth–death; defaults to `rate` when non-positive.
    #[serde(default)]
    pub death_rate: f64,
    /// Fault injection applied to the generator handed to the checks.
    #[serde(default)]
    pub corruption: Corruption,
    /// Uniform killing rate added to the transition model (makes the dual
    /// lose mass at rate `kill_rate`); 0 disables it.
    #[serde(default)]
    pub kill_rate: f64,
    /// Time step for diffusion path sampling (heat model only).
    #[serde(default = "default_dt")]
    pub dt: f64,
}

impl Default for ModelConfig {
    fn default() -> Self {
        ModelConfig {
            family: ModelFamily::BirthDeath,
            rate: 1.0,
            death_rate: 0.0,
            corruption: Corruption::None,
            kill_rate: 0.0,
            dt: default_dt(),
        }
    }
}

/// Monte Carlo sample sizes and statistical levels.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SamplingConfig {
    #[serde(default = "default_n_paths")]
    pub n_paths: usize,
    /// Confidence level for interval estimates (containment, moduli).
    #[serde(default = "default_confidence")]
    pub confidence: f64,
    /// Significance level for the martingale hypothesis tests.
    #[serde(default = "default_alpha")]
    pub alpha: f64,
}

impl Default for SamplingConfig {
    fn default() -> Self {
        SamplingConfig {
            n_paths: default_n_paths(),
            confidence: default_confidence(),
            alpha: default_alpha(),
        }
    }
}

/// Tolerances, one per check class.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ToleranceConfig {
    /// Sup-norm budget for the semigroup law residual.
    #[serde(default = "default_law_tol")]
    pub law: f64,
    /// Total-mass defect budget for the conservative dual.
    #[serde(default = "default_mass_tol")]
    pub mass: f64,
    /// Compact-seminorm budget for strict-topology convergence verdicts.
    #[serde(default = "default_beta_tol")]
    pub beta: f64,
    /// Budget for the extension round trip against the direct action.
    #[serde(default = "default_round_trip_tol")]
    pub round_trip: f64,
    /// Budget for the core-property approximation residuals.
    #[serde(default = "default_core_tol")]
    pub core: f64,
    /// Sup-norm budget for the restriction check at the smallest time.
    #[serde(default = "default_restrict_tol")]
    pub restrict: f64,
}

impl Default for ToleranceConfig {
    fn default() -> Self {
        ToleranceConfig {
            law: default_law_tol(),
            mass: default_mass_tol(),
            beta: default_beta_tol(),
            round_trip: default_round_trip_tol(),
            core: default_core_tol(),
            restrict: default_restrict_tol(),
        }
    }
}

/// Time grids, horizons, and search budgets.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScheduleConfig {
    /// Observation times for martingale tests and extension round trips.
    #[serde(default = "default_t_grid")]
    pub t_grid: Vec<f64>,
    /// Decreasing times for the restriction check.
    #[serde(default = "default_restrict_ts")]
    pub restrict_ts: Vec<f64>,
    /// Containment horizon `T`.
    #[serde(default = "one")]
    pub t_horizon: f64,
    /// Containment exception budget `ε`.
    #[serde(default = "default_eps")]
    pub eps: f64,
    /// Initial law: uniform over `{0, ..., initial_uniform_to}`
    /// (0 means the point mass at 0).
    #[serde(default = "default_initial")]
    pub initial_uniform_to: usize,
    /// Side length of the `(s, t)` grid for the semigroup law check.
    #[serde(default = "default_law_points")]
    pub law_points: usize,
    /// Largest `s + t` probed by the law check.
    #[serde(default = "one")]
    pub law_t_max: f64,
    /// Geometric h-schedule length for continuity and generator limits.
    #[serde(default = "default_continuity_n")]
    pub continuity_n_max: usize,
    /// Sequence length for the local-equicontinuity check.
    #[serde(default = "default_equi_n")]
    pub equi_n_max: usize,
    /// Compact-exhaustion depth for strict-topology verdicts.
    #[serde(default = "default_beta_m")]
    pub beta_m_max: usize,
    /// Largest cutoff index the extension iteration may consume.
    #[serde(default = "default_cutoff_horizon")]
    pub cutoff_horizon: usize,
    /// Seminorm depth certified by the extension iteration.
    #[serde(default = "default_seminorm_horizon")]
    pub seminorm_horizon: usize,
    /// Window for the path-modulus estimate.
    #[serde(default = "default_modulus_delta")]
    pub modulus_delta: f64,
    /// Distance threshold for the path-modulus estimate.
    #[serde(default = "default_modulus_eps")]
    pub modulus_eps: f64,
}

impl Default for ScheduleConfig {
    fn default() -> Self {
        ScheduleConfig {
            t_grid: default_t_grid(),
            restrict_ts: default_restrict_ts(),
            t_horizon: 1.0,
            eps: default_eps(),
            initial_uniform_to: default_initial(),
            law_points: default_law_points(),
            law_t_max: 1.0,
            continuity_n_max: default_continuity_n(),
            equi_n_max: default_equi_n(),
            beta_m_max: default_beta_m(),
            cutoff_horizon: default_cutoff_horizon(),
            seminorm_horizon: default_seminorm_horizon(),
            modulus_delta: default_modulus_delta(),
            modulus_eps: default_modulus_eps(),
        }
    }
}

fn one() -> f64 {
    1.0
}
fn default_dt() -> f64 {
    1e-3
}
fn default_n_paths() -> usize {
    10_000
}
fn default_confidence() -> f64 {
    0.99
}
fn default_alpha() -> f64 {
    0.01
}
fn default_law_tol() -> f64 {
    1e-10
}
fn default_mass_tol() -> f64 {
    1e-12
}
fn default_beta_tol() -> f64 {
    0.05
}
fn default_round_trip_tol() -> f64 {
    1e-6
}
fn default_core_tol() -> f64 {
    1e-9
}
fn default_restrict_tol() -> f64 {
    0.025
}
fn default_t_grid() -> Vec<f64> {
    vec![0.5, 1.0]
}
fn default_restrict_ts() -> Vec<f64> {
    vec![0.5, 0.1, 0.01]
}
fn default_eps() -> f64 {
    0.05
}
fn default_initial() -> usize {
    5
}
fn default_law_points() -> usize {
    10
}
fn default_continuity_n() -> usize {
    10
}
fn default_equi_n() -> usize {
    100
}
fn default_beta_m() -> usize {
    3
}
fn default_cutoff_horizon() -> usize {
    60
}
fn default_seminorm_horizon() -> usize {
    4
}
fn default_modulus_delta() -> f64 {
    0.05
}
fn default_modulus_eps() -> f64 {
    0.5
}
fn default_functions() -> Vec<String> {
    vec!["indicator_0".into()]
}

/// A complete, deterministic campaign description.
///
/// Two runs of the same materialized config produce byte-identical CSV
/// artifacts and reports; the seed is the only entropy source.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CampaignConfig {
    /// Master seed for every sampler in the campaign. Mandatory.
    pub seed: u64,
    #[serde(default)]
    pub space: SpaceConfig,
    #[serde(default)]
    pub model: ModelConfig,
    /// Catalog selections for the function under test.
    #[serde(default = "default_functions")]
    pub functions: Vec<String>,
    /// Suites to execute, in order.
    #[serde(default)]
    pub suites: Vec<Suite>,
    #[serde(default)]
    pub sampling: SamplingConfig,
    #[serde(default)]
    pub tolerances: ToleranceConfig,
    #[serde(default)]
    pub schedule: ScheduleConfig,
}

impl CampaignConfig {
    /// Parses a TOML document and materializes all defaults.
    ///
    /// Unknown keys, type mismatches, and the missing mandatory `seed` all
    /// surface as config errors naming the offending key.
    pub fn from_toml_str(text: &str) -> Result<Self> {
        let config: CampaignConfig =
            toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        config.validate()?;
        Ok(config)
    }

    /// Serializes the materialized configuration back to TOML.
    pub fn to_toml_string(&self) -> Result<String> {
        toml::to_string_pretty(self).map_err(|e| Error::Config(e.to_string()))
    }

    /// Cross-field validation; collects every offense before reporting.
    pub fn validate(&self) -> Result<()> {
        let mut offenses: Vec<String> = Vec::new();
        match self.space {
            SpaceConfig::Finite { n } if n == 0 => {
                offenses.push("space.n: must be at least 1".into())
            }
            SpaceConfig::TruncatedCountable { n_max } if n_max == 0 => {
                offenses.push("space.n_max: must be at least 1".into())
            }
            SpaceConfig::RealGrid { half_width, spacing }
                if !(half_width > 0.0) || !(spacing > 0.0) =>
            {
                offenses.push("space.half_width, space.spacing: must be positive".into())
            }
            _ => {}
        }
        match (self.model.family, self.space) {
            (ModelFamily::TwoState, SpaceConfig::Finite { n: 2 }) => {}
            (ModelFamily::TwoState, _) => offenses.push(
                "model.family/space.kind: two_state needs a finite space with n = 2".into(),
            ),
            (ModelFamily::BirthDeath, SpaceConfig::TruncatedCountable { .. }) => {}
            (ModelFamily::BirthDeath, _) => offenses.push(
                "model.family/space.kind: birth_death needs a truncated_countable space".into(),
            ),
            (ModelFamily::Heat, SpaceConfig::RealGrid { .. }) => {}
            (ModelFamily::Heat, _) => {
                offenses.push("model.family/space.kind: heat needs a real_grid space".into())
            }
        }
        if !(self.model.rate > 0.0) || !self.model.rate.is_finite() {
            offenses.push("model.rate: must be positive and finite".into());
        }
        if self.model.kill_rate < 0.0 || !self.model.kill_rate.is_finite() {
            offenses.push("model.kill_rate: must be non-negative and finite".into());
        }
        if !(self.model.dt > 0.0) {
            offenses.push("model.dt: must be positive".into());
        }
        if self.model.corruption != Corruption::None && self.model.family == ModelFamily::Heat {
            offenses.push("model.corruption: fault injection needs a chain model".into());
        }
        if self.sampling.n_paths < 2 {
            offenses.push("sampling.n_paths: must be at least 2".into());
        }
        for (key, level) in [
            ("sampling.confidence", self.sampling.confidence),
            ("sampling.alpha", self.sampling.alpha),
        ] {
            if !(level > 0.0 && level < 1.0) {
                offenses.push(format!("{key}: must lie strictly between 0 and 1"));
            }
        }
        if !(self.schedule.eps > 0.0 && self.schedule.eps <= 1.0) {
            offenses.push("schedule.eps: must lie in (0, 1]".into());
        }
        if self.schedule.t_grid.is_empty()
            || self.schedule.t_grid.iter().any(|t| !(*t > 0.0) || !t.is_finite())
        {
            offenses.push("schedule.t_grid: needs at least one positive finite time".into());
        }
        if !(self.schedule.t_horizon > 0.0) {
            offenses.push("schedule.t_horizon: must be positive".into());
        }
        if self.schedule.law_points == 0 {
            offenses.push("schedule.law_points: must be at least 1".into());
        }
        if self.schedule.beta_m_max == 0
            || self.schedule.continuity_n_max == 0
            || self.schedule.equi_n_max == 0
        {
            offenses.push(
                "schedule.beta_m_max, schedule.continuity_n_max, schedule.equi_n_max: must be \
                 at least 1"
                    .into(),
            );
        }
        if self.schedule.cutoff_horizon < 2 || self.schedule.seminorm_horizon == 0 {
            offenses.push(
                "schedule.cutoff_horizon (>= 2), schedule.seminorm_horizon (>= 1): out of range"
                    .into(),
            );
        }
        if self.functions.is_empty() {
            offenses.push("functions: needs at least one catalog selection".into());
        }
        if let Ok(space) = self.space() {
            for name in &self.functions {
                if let Err(e) = resolve_function(space, name) {
                    offenses.push(format!("functions: '{name}' ({e})"));
                }
            }
        }
        if offenses.is_empty() {
            Ok(())
        } else {
            Err(Error::Config(offenses.join("; ")))
        }
    }

    /// The configured state space.
    pub fn space(&self) -> Result<StateSpace> {
        match self.space {
            SpaceConfig::Finite { n } => StateSpace::finite(n),
            SpaceConfig::TruncatedCountable { n_max } => StateSpace::truncated_countable(n_max),
            SpaceConfig::RealGrid { half_width, spacing } => {
                StateSpace::real_grid(half_width, spacing)
            }
        }
    }

    /// The intensity matrix of the transition model, before fault injection
    /// but after optional uniform killing. `None` for the heat model.
    pub fn q_matrix(&self) -> Result<Option<QMatrix>> {
        let q = match self.model.family {
            ModelFamily::TwoState => {
                let r = self.model.rate;
                QMatrix::from_rows(vec![vec![-r, r], vec![r, -r]])?
            }
            ModelFamily::BirthDeath => {
                let SpaceConfig::TruncatedCountable { n_max } = self.space else {
                    return Err(Error::Config(
                        "birth_death needs a truncated_countable space".into(),
                    ));
                };
                let death_rate = if self.model.death_rate > 0.0 {
                    self.model.death_rate
                } else {
                    self.model.rate
                };
                let birth = vec![self.model.rate; n_max + 1];
                let mut death = vec![death_rate; n_max + 1];
                death[0] = 0.0;
                return Ok(Some(
                    build_birth_death(&birth, &death, n_max)?
                        .q_matrix()
                        .expect("birth–death chains carry a matrix realization")
                        .clone(),
                ));
            }
            ModelFamily::Heat => return Ok(None),
        };
        Ok(Some(q))
    }

    /// The generator used to simulate paths (always the uncorrupted model).
    pub fn simulation_generator(&self) -> Result<GeneratorGraph> {
        let space = self.space()?;
        match self.model.family {
            ModelFamily::Heat => build_diffusion_1d(|_| 0.0, |_| 1.0, space),
            _ => {
                let q = self.q_matrix()?.expect("chain families carry a matrix");
                match self.model.family {
                    ModelFamily::TwoState => build_ctmc(q),
                    _ => {
                        let SpaceConfig::TruncatedCountable { n_max } = self.space else {
                            unreachable!("validated above");
                        };
                        let death_rate = if self.model.death_rate > 0.0 {
                            self.model.death_rate
                        } else {
                            self.model.rate
                        };
                        let birth = vec![self.model.rate; n_max + 1];
                        let mut death = vec![death_rate; n_max + 1];
                        death[0] = 0.0;
                        build_birth_death(&birth, &death, n_max)
                    }
                }
            }
        }
    }

    /// The generator handed to the checks: equal to the simulation
    /// generator unless a corruption knob doubles it.
    pub fn test_generator(&self) -> Result<GeneratorGraph> {
        match (self.model.corruption, self.model.family) {
            (Corruption::None, _) => self.simulation_generator(),
            (Corruption::DoubleGenerator, ModelFamily::Heat) => Err(Error::Config(
                "model.corruption: fault injection needs a chain model".into(),
            )),
            (Corruption::DoubleGenerator, ModelFamily::TwoState) => {
                let q = self.q_matrix()?.expect("chain families carry a matrix");
                build_ctmc(q.scaled(2.0)?)
            }
            (Corruption::DoubleGenerator, ModelFamily::BirthDeath) => {
                let SpaceConfig::TruncatedCountable { n_max } = self.space else {
                    unreachable!("validated on load");
                };
                let death_rate = if self.model.death_rate > 0.0 {
                    self.model.death_rate
                } else {
                    self.model.rate
                };
                let birth = vec![2.0 * self.model.rate; n_max + 1];
                let mut death = vec![2.0 * death_rate; n_max + 1];
                death[0] = 0.0;
                build_birth_death(&birth, &death, n_max)
            }
        }
    }

    /// The exact transition operator of the configured model, with the
    /// optional killing applied.
    pub fn operator(&self) -> Result<SemigroupOperator> {
        let space = self.space()?;
        match self.model.family {
            ModelFamily::Heat => SemigroupOperator::heat_closed_form(space),
            _ => {
                let mut q = self.q_matrix()?.expect("chain families carry a matrix");
                if self.model.kill_rate > 0.0 {
                    q = q.uniformly_killed(self.model.kill_rate)?;
                }
                SemigroupOperator::matrix_exp(space, q)
            }
        }
    }

    /// How paths are sampled for this model.
    pub fn sampler_kind(&self) -> SamplerKind {
        match self.model.family {
            ModelFamily::Heat => SamplerKind::Diffusion { dt: self.model.dt },
            _ => SamplerKind::Chain,
        }
    }

    /// The configured initial law.
    pub fn initial_law(&self) -> Result<crate::measure::SignedMeasure> {
        let space = self.space()?;
        let hi = self.schedule.initial_uniform_to.min(space.len() - 1);
        let w = 1.0 / (hi + 1) as f64;
        crate::measure::SignedMeasure::new(space, (0..=hi).map(|i| (i, w)))
    }

    /// Resolves the configured catalog selections on the campaign space.
    pub fn resolved_functions(&self) -> Result<Vec<TestFunction>> {
        let space = self.space()?;
        self.functions.iter().map(|n| resolve_function(space, n)).collect()
    }
}

/// Maps a catalog selection name to a concrete function on `space`.
///
/// Functions that vanish at infinity carry the vanishing flag when the
/// space makes that meaningful.
pub fn resolve_function(space: StateSpace, name: &str) -> Result<TestFunction> {
    let f = match name {
        "one" => catalog::constant(space, 1.0)?,
        "indicator_0" => catalog::indicator_point(space, 0)?,
        "gaussian" => {
            let g = catalog::gaussian(space)?;
            g.clone().declare_vanishing().unwrap_or(g)
        }
        "sin_square" => catalog::sin_square(space)?,
        "cauchy_bump" => catalog::cauchy_bump(space)?,
        "cos_recip" => TestFunction::from_fn(space, "cos(1/(1+x))", 1.0, |x| {
            (1.0 / (1.0 + x.abs())).cos()
        })?,
        other => {
            return Err(Error::Config(format!(
                "unknown function selection '{other}'; known: one, indicator_0, gaussian, \
                 sin_square, cauchy_bump, cos_recip"
            )))
        }
    };
    Ok(f)
}

#[cfg(test)]
mod tests {
    use super::*;

    const MINIMAL: &str = "seed = 42\n";

    #[test]
    fn minimal_config_materializes_every_default() {
        let c = CampaignConfig::from_toml_str(MINIMAL).unwrap();
        assert_eq!(c.seed, 42);
        assert_eq!(c.space, SpaceConfig::TruncatedCountable { n_max: 40 });
        assert_eq!(c.model.family, ModelFamily::BirthDeath);
        assert_eq!(c.sampling.n_paths, 10_000);
        assert_eq!(c.suites, Vec::<Suite>::new());
        // the echo contains the materialized values, not the raw file
        let echo = c.to_toml_string().unwrap();
        assert!(echo.contains("n_paths = 10000"), "echo:\n{echo}");
        assert!(echo.contains("law = 1e-10") || echo.contains("law = 0.0000000001"));
    }

    #[test]
    fn missing_seed_is_named() {
        let err = CampaignConfig::from_toml_str("suites = [\"topology\"]\n").unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("seed"), "error does not name the seed: {msg}");
    }

    #[test]
    fn unknown_keys_and_bad_variants_are_named() {
        let err = CampaignConfig::from_toml_str("seed = 1\nbogus_key = 3\n").unwrap_err();
        assert!(err.to_string().contains("bogus_key"), "{err}");

        let err = CampaignConfig::from_toml_str(
            "seed = 1\n[space]\nkind = \"hyperbolic\"\nn = 2\n",
        )
        .unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("hyperbolic") || msg.contains("variant"), "{msg}");
    }

    #[test]
    fn family_space_mismatch_is_rejected_with_both_keys() {
        let text = "seed = 1\n[space]\nkind = \"finite\"\nn = 2\n";
        let err = CampaignConfig::from_toml_str(text).unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("model.family") && msg.contains("space.kind"), "{msg}");
    }

    #[test]
    fn two_state_round_trip() {
        let text = "seed = 7\n\
                    suites = [\"martingale\"]\n\
                    [space]\nkind = \"finite\"\nn = 2\n\
                    [model]\nfamily = \"two_state\"\nrate = 1.0\n";
        let c = CampaignConfig::from_toml_str(text).unwrap();
        let q = c.q_matrix().unwrap().unwrap();
        assert_eq!(q.dim(), 2);
        assert!(c.test_generator().unwrap().is_conservative());
        // the corrupted twin doubles every rate
        let mut c2 = c.clone();
        c2.model.corruption = Corruption::DoubleGenerator;
        let g2 = c2.test_generator().unwrap();
        let f = resolve_function(c.space().unwrap(), "indicator_0").unwrap();
        let af = c.test_generator().unwrap().apply(&f).unwrap();
        let af2 = g2.apply(&f).unwrap();
        for i in 0..2 {
            assert!((af2.value(i) - 2.0 * af.value(i)).abs() < 1e-12);
        }
    }

    #[test]
    fn unknown_function_selection_is_rejected() {
        let text = "seed = 1\nfunctions = [\"warp_core\"]\n";
        let err = CampaignConfig::from_toml_str(text).unwrap_err();
        assert!(err.to_string().contains("warp_core"), "{err}");
    }

    #[test]
    fn heat_configuration_builds_the_closed_form_operator() {
        let text = "seed = 3\n\
                    suites = [\"scle\"]\n\
                    functions = [\"sin_square\"]\n\
                    [space]\nkind = \"real_grid\"\nhalf_width = 20.0\nspacing = 0.05\n\
                    [model]\nfamily = \"heat\"\n";
        let c = CampaignConfig::from_toml_str(text).unwrap();
        let op = c.operator().unwrap();
        assert!(op.is_exact());
        assert!(matches!(c.sampler_kind(), SamplerKind::Diffusion { .. }));
    }
}
