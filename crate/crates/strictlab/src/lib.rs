//! strictlab: a numerical laboratory for Markov transition semigroups viewed
//! through the strict topology on bounded continuous functions.
//!
//! The crate represents bounded functions on concrete truncated state spaces,
//! classifies sequences for convergence in the strict topology, builds Markov
//! generators and their transition semigroups, simulates paths to test the
//! martingale property of `f(η(t)) − ∫ Af(η(s)) ds`, and checks the
//! restriction/extension round trip between a semigroup on the bounded
//! continuous functions and its restriction to functions vanishing at
//! infinity.

pub mod campaign;
pub mod catalog;
pub mod config;
pub mod error;
pub mod expm;
pub mod extension;
pub mod func;
pub mod generator;
pub mod heat;
pub mod measure;
pub mod path;
pub mod report;
pub mod semigroup;
pub mod space;
pub mod stats;
pub mod verify;

pub use campaign::{describe_campaign, run_campaign, CampaignOutcome};
pub use config::{
    resolve_function, CampaignConfig, Corruption, ModelConfig, ModelFamily, SamplingConfig,
    ScheduleConfig, SpaceConfig, Suite, ToleranceConfig,
};
pub use error::{Error, Result};
pub use extension::{
    core_check, extend_apply, mass_conservation_check, restrict_check, CoreReport,
    CutoffFamily, ExtensionTrace, MassPoint, MassReport, RestrictPoint, RestrictReport,
};
pub use func::{
    beta_converges, density_probe, dini_check, BetaHorizon, BetaVerdict, CompactResidual,
    DensityVerdict, EvalRule, StrictSeminorm, TestFunction,
};
pub use generator::{
    build_birth_death, build_ctmc, build_diffusion_1d, DiffusionStencil, GeneratorGraph,
    QMatrix, Realization,
};
pub use heat::{gaussian_expectation, heat_apply, integrate, sin_square_envelope, sin_square_flow};
pub use measure::{
    hahn_jordan, tightness_test, vague_convergence_test, weak_convergence_test,
    ConvergenceVerdict, HahnJordan, PairingResidual, SignedMeasure, TightnessCertificate,
};
pub use semigroup::{
    mc_apply, BackendKind, ContinuityPoint, ContinuityReport, EquicontinuityReport,
    GeneratorLimitReport, LawReport, SemigroupOperator,
};
pub use path::{
    simulate_ctmc, simulate_diffusion, simulate_diffusion_raw, CadlagPath, PathEnsemble,
    PathSeed, SamplerKind,
};
pub use report::{Artifact, CheckRecord, Report};
pub use space::{CompactSet, SpaceKind, StateSpace};
pub use stats::{mean_band, mean_std, wilson_interval, z_quantile, EstimateWithBand};
pub use verify::{
    beta_suite, containment_search, martingale_increment_test, martingale_mean_test,
    martingale_statistic, modulus_probability, ContainmentCertificate, IncrementTestReport,
    MeanTestReport, SuiteCase,
};
