//! Campaign execution: a validated configuration in, a deterministic
//! report plus CSV artifacts out.
//!
//! Each suite is a sequence of checks. A check that cannot even start (its
//! module refuses the premise) is recorded as a failed check carrying the
//! refusal text, never silently skipped, so the exit status always reflects
//! the whole selection. Path ensembles are generated once per suite and
//! shared by its checks; all samplers derive from the master seed, so
//! re-running the same configuration reproduces every byte of the output.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::catalog;
use crate::config::{CampaignConfig, ModelFamily, Suite};
use crate::error::{Error, Result};
use crate::extension::{
    core_check, extend_apply, mass_conservation_check, restrict_check, CutoffFamily,
};
use crate::func::BetaHorizon;
use crate::measure::{hahn_jordan, vague_convergence_test, weak_convergence_test, SignedMeasure};
use crate::path::PathEnsemble;
use crate::report::{Artifact, CheckRecord, Report};
use crate::space::StateSpace;
use crate::verify::{
    beta_suite, containment_search, martingale_increment_test, martingale_mean_test,
    modulus_probability,
};

/// Report plus the CSV artifacts to place next to it.
#[derive(Clone, Debug)]
pub struct CampaignOutcome {
    pub report: Report,
    pub artifacts: Vec<Artifact>,
}

/// Approximant count and exhaustion depth certified by the core check.
const CORE_N_MAX: usize = 16;
const CORE_M_MAX: usize = 6;
/// Random measures drawn for the decomposition round trip.
const HAHN_TRIALS: usize = 1000;
/// A sup-norm residual this large counts as "the norm does not settle"
/// for the heat dichotomy record.
const NORM_ESCAPE_WITNESS: f64 = 0.5;

/// Executes every selected suite and assembles the report.
///
/// Only configuration-level problems surface as `Err`; anything that goes
/// wrong inside a check becomes a failed [`CheckRecord`].
pub fn run_campaign(config: &CampaignConfig) -> Result<CampaignOutcome> {
    config.validate()?;
    let mut checks = Vec::new();
    let mut artifacts = Vec::new();
    for suite in &config.suites {
        let outcome = match suite {
            Suite::Martingale => martingale_suite(config),
            Suite::Scle => scle_suite(config),
            Suite::Containment => containment_suite(config),
            Suite::Extension => extension_suite(config),
            Suite::Topology => topology_suite(config),
        };
        match outcome {
            Ok((mut c, mut a)) => {
                checks.append(&mut c);
                artifacts.append(&mut a);
            }
            Err(e) => checks.push(CheckRecord::failed(suite.name(), "suite setup", &e)),
        }
    }
    Ok(CampaignOutcome { report: Report::new(config.clone(), checks), artifacts })
}

type SuiteOutcome = Result<(Vec<CheckRecord>, Vec<Artifact>)>;

fn martingale_suite(config: &CampaignConfig) -> SuiteOutcome {
    let mut checks = Vec::new();
    let sim = config.simulation_generator()?;
    let test_gen = config.test_generator()?;
    let nu = config.initial_law()?;
    let space = *sim.space();
    let horizon = config.schedule.t_grid.iter().cloned().fold(0.0f64, f64::max);
    let ensemble = PathEnsemble::generate(
        &sim,
        config.model.family.name(),
        &nu,
        config.sampling.n_paths,
        horizon,
        config.sampler_kind(),
        config.seed,
    )?;
    let mut csv = String::from("function,t,mean,half_width,bias_allowance,pass\n");
    for f in config.resolved_functions()? {
        let name = format!("mean test: {}", f.name());
        match martingale_mean_test(
            &ensemble,
            &f,
            &test_gen,
            &config.schedule.t_grid,
            config.sampling.alpha,
        ) {
            Ok(rep) => {
                for p in &rep.points {
                    csv.push_str(&format!(
                        "{},{},{},{},{},{}\n",
                        f.name(),
                        p.t,
                        p.mean,
                        p.half_width,
                        p.bias_allowance,
                        p.pass
                    ));
                }
                let worst = rep
                    .points
                    .iter()
                    .max_by(|a, b| a.mean.abs().total_cmp(&b.mean.abs()))
                    .expect("mean test reports at least one point");
                checks.push(
                    CheckRecord::new("martingale", name, rep.pass)
                        .with_numbers(worst.mean.abs(), worst.half_width + worst.bias_allowance)
                        .with_detail(format!(
                            "N={}, alpha={}, worst |mean| {:.3e} vs width {:.3e}",
                            rep.n,
                            rep.alpha,
                            worst.mean.abs(),
                            worst.half_width + worst.bias_allowance
                        )),
                );
            }
            Err(e) => checks.push(CheckRecord::failed("martingale", name, &e)),
        }
        let s = 0.5 * horizon;
        let name = format!("increment test: {}", f.name());
        let dictionary = vec![catalog::constant(space, 1.0)?, f.clone()];
        match martingale_increment_test(
            &ensemble,
            &f,
            &test_gen,
            s,
            horizon,
            &dictionary,
            config.sampling.alpha,
        ) {
            Ok(rep) => {
                let worst = rep
                    .points
                    .iter()
                    .max_by(|a, b| a.mean.abs().total_cmp(&b.mean.abs()))
                    .expect("increment test reports at least one witness");
                checks.push(
                    CheckRecord::new("martingale", name, rep.pass)
                        .with_numbers(worst.mean.abs(), worst.half_width + worst.bias_allowance)
                        .with_detail(format!(
                            "window [{s}, {horizon}], worst witness '{}'",
                            worst.witness
                        )),
                );
            }
            Err(e) => checks.push(CheckRecord::failed("martingale", name, &e)),
        }
    }
    Ok((checks, vec![Artifact::new("martingale_mean.csv", csv)]))
}

fn scle_suite(config: &CampaignConfig) -> SuiteOutcome {
    let mut checks = Vec::new();
    let mut artifacts = Vec::new();
    let op = config.operator()?;
    let space = config.space()?;
    let functions = config.resolved_functions()?;
    let f = &functions[0];

    // semigroup law on an equispaced (s, t) grid
    let n = config.schedule.law_points;
    let mut law_csv = String::from("s,t,residual\n");
    let mut law_pass = true;
    let mut law_worst = 0.0f64;
    let law_result: Result<()> = (|| {
        for i in 1..=n {
            for j in 1..=n {
                let s = i as f64 * config.schedule.law_t_max / (2 * n) as f64;
                let t = j as f64 * config.schedule.law_t_max / (2 * n) as f64;
                let rep = op.semigroup_law_check(s, t, f, config.tolerances.law)?;
                law_csv.push_str(&format!("{},{},{}\n", rep.s, rep.t, rep.residual));
                law_pass &= rep.pass;
                law_worst = law_worst.max(rep.residual);
            }
        }
        Ok(())
    })();
    let law_name = format!("semigroup law: {}", f.name());
    match law_result {
        Ok(()) => {
            checks.push(
                CheckRecord::new("scle", law_name, law_pass)
                    .with_numbers(law_worst, config.tolerances.law)
                    .with_detail(format!("{n}x{n} grid, worst residual {law_worst:.3e}")),
            );
            artifacts.push(Artifact::new("law_grid.csv", law_csv));
        }
        Err(e) => checks.push(CheckRecord::failed("scle", law_name, &e)),
    }

    // strong continuity at t0 = 0 along a geometric h-schedule
    let probe = space.exhaustion_member(config.schedule.beta_m_max)?;
    let horizon =
        BetaHorizon { n_max: config.schedule.continuity_n_max, m_max: config.schedule.beta_m_max };
    let cont_name = format!("strong continuity at 0: {}", f.name());
    match op.strong_continuity_check(f, 0.0, 1.0, &probe, config.tolerances.beta, horizon) {
        Ok(rep) => {
            let last = rep.curve.last().expect("the h-schedule is nonempty");
            match config.model.family {
                // the transition operator of Brownian motion is not
                // sup-norm strongly continuous: the compact residuals must
                // settle while the sup-norm residual stays large
                ModelFamily::Heat => {
                    let pass = rep.verdict.converges && last.sup_residual >= NORM_ESCAPE_WITNESS;
                    checks.push(
                        CheckRecord::new("scle", "strong continuity dichotomy", pass)
                            .with_numbers(last.compact_residual, config.tolerances.beta)
                            .with_detail(format!(
                                "beta converges: {}; sup residual at h={:.3e} is {:.3} \
                                 (witness >= {NORM_ESCAPE_WITNESS})",
                                rep.verdict.converges, last.h, last.sup_residual
                            )),
                    );
                }
                _ => {
                    let pass =
                        rep.verdict.converges && last.sup_residual <= config.tolerances.beta;
                    checks.push(
                        CheckRecord::new("scle", cont_name, pass)
                            .with_numbers(last.sup_residual, config.tolerances.beta)
                            .with_detail(format!(
                                "both sup-norm and compact residuals settle by h={:.3e}",
                                last.h
                            )),
                    );
                }
            }
            artifacts.push(Artifact::new("continuity_curve.csv", rep.curve_csv()));
        }
        Err(e) => checks.push(CheckRecord::failed("scle", cont_name, &e)),
    }

    // local equicontinuity on a strictly null family
    let equi_name = "local equicontinuity: min(|x|/n, 1)";
    let zero = catalog::constant(space, 0.0)?;
    let equi_horizon =
        BetaHorizon { n_max: config.schedule.equi_n_max, m_max: config.schedule.beta_m_max };
    match op.local_equicontinuity_check(
        |n| catalog::min_abs_over(space, n as f64),
        &zero,
        &config.schedule.t_grid,
        &probe,
        config.tolerances.beta,
        equi_horizon,
    ) {
        Ok(rep) => {
            let last = *rep.residuals.last().expect("at least one member");
            checks.push(
                CheckRecord::new("scle", equi_name, rep.verdict)
                    .with_numbers(last, rep.tol)
                    .with_detail(format!(
                        "worst image residual over {} times at n={}: {last:.3e}",
                        rep.t_grid.len(),
                        rep.residuals.len()
                    )),
            );
        }
        Err(e) => checks.push(CheckRecord::failed("scle", equi_name, &e)),
    }

    // generator recovery along t = 2^-k (chain models carry a matrix)
    if config.model.family != ModelFamily::Heat {
        let test_gen = config.test_generator()?;
        let g = test_gen.apply(f)?;
        let schedule: Vec<f64> = (4..=14).map(|k| 2f64.powi(-k)).collect();
        let name = format!("generator limit: {}", f.name());
        match op.generator_limit_check(f, &g, &schedule, config.schedule.beta_m_max, 0.1) {
            Ok(rep) => {
                let mut csv = String::from("t,residual\n");
                for (t, r) in &rep.curve {
                    csv.push_str(&format!("{t},{r}\n"));
                }
                checks.push(
                    CheckRecord::new("scle", name, rep.verdict)
                        .with_numbers(rep.slope, 0.1)
                        .with_detail(format!(
                            "residual/t slope {:.4} (sup gate {}, beta {})",
                            rep.slope, rep.sup_ok, rep.beta.converges
                        )),
                );
                artifacts.push(Artifact::new("generator_limit.csv", csv));
            }
            Err(e) => checks.push(CheckRecord::failed("scle", name, &e)),
        }
    }
    Ok((checks, artifacts))
}

fn containment_suite(config: &CampaignConfig) -> SuiteOutcome {
    let mut checks = Vec::new();
    let mut artifacts = Vec::new();
    let sim = config.simulation_generator()?;
    let nu = config.initial_law()?;
    let space = *sim.space();
    let ensemble = PathEnsemble::generate(
        &sim,
        config.model.family.name(),
        &nu,
        config.sampling.n_paths,
        config.schedule.t_horizon,
        config.sampler_kind(),
        config.seed,
    )?;
    let start_index = nu
        .atoms()
        .iter()
        .map(|(i, _)| space.min_exhaustion_index_containing(*i))
        .max()
        .unwrap_or(1)
        .max(1);
    let k = space.exhaustion_member(start_index)?;
    let name = format!("compact containment from K_{start_index}");
    match containment_search(
        &ensemble,
        &k,
        config.schedule.eps,
        config.schedule.t_horizon,
        config.sampling.confidence,
    ) {
        Ok(cert) => {
            let mut csv = String::from("m,stay_count,wilson_lower,pass\n");
            for row in &cert.scan {
                csv.push_str(&format!(
                    "{},{},{},{}\n",
                    row.m, row.stay_count, row.wilson_lower, row.pass
                ));
            }
            let m = cert.k_prime.exhaustion_index().expect("certificates use the exhaustion");
            checks.push(
                CheckRecord::new("containment", name, true)
                    .with_numbers(cert.wilson_lower, cert.required)
                    .with_detail(format!(
                        "K' = K_{m} holds {} of {} paths to T={} (lower bound {:.4} >= {:.4})",
                        cert.stay_count,
                        cert.n_paths,
                        cert.t_horizon,
                        cert.wilson_lower,
                        cert.required
                    )),
            );
            artifacts.push(Artifact::new("containment_scan.csv", csv));
        }
        Err(e) => checks.push(CheckRecord::failed("containment", name, &e)),
    }
    let name = format!(
        "path modulus: within {} over windows of {}",
        config.schedule.modulus_eps, config.schedule.modulus_delta
    );
    match modulus_probability(
        &ensemble,
        config.schedule.modulus_delta,
        config.schedule.modulus_eps,
        config.sampling.confidence,
    ) {
        Ok(est) => checks.push(
            CheckRecord::new("containment", name, true)
                .with_numbers(est.estimate, est.half_width)
                .with_detail(format!(
                    "estimate {:.4} +/- {:.4} at confidence {}",
                    est.estimate, est.half_width, est.confidence
                )),
        ),
        Err(e) => checks.push(CheckRecord::failed("containment", name, &e)),
    }
    Ok((checks, artifacts))
}

fn extension_suite(config: &CampaignConfig) -> SuiteOutcome {
    let mut checks = Vec::new();
    let mut artifacts = Vec::new();
    if config.model.family != ModelFamily::BirthDeath {
        checks.push(
            CheckRecord::new("extension", "model admits restriction/extension", false)
                .with_detail(
                    "the round trip needs a locally compact, non-compact space with a \
                     matrix-backed dual; configure the birth_death model"
                        .to_string(),
                ),
        );
        return Ok((checks, artifacts));
    }
    let op = config.operator()?;
    let space = config.space()?;

    // conservative dual: probability in, probability out
    let mus = vec![SignedMeasure::delta(space, 0)?, config.initial_law()?];
    match mass_conservation_check(&op, &mus, &config.schedule.t_grid, config.tolerances.mass) {
        Ok(rep) => checks.push(
            CheckRecord::new("extension", "mass conservation", rep.verdict)
                .with_numbers(rep.worst_defect, rep.tol)
                .with_detail(format!(
                    "{} measures x {} times, worst defect {:.3e}",
                    mus.len(),
                    config.schedule.t_grid.len(),
                    rep.worst_defect
                )),
        ),
        Err(e) => checks.push(CheckRecord::failed("extension", "mass conservation", &e)),
    }

    // the semigroup restricts to the vanishing functions
    let bump = catalog::gaussian(space)?.declare_vanishing()?;
    match restrict_check(&op, &bump, &config.schedule.restrict_ts, config.tolerances.restrict) {
        Ok(rep) => {
            let mut csv = String::from("t,sup_residual,vanishing\n");
            for p in &rep.points {
                csv.push_str(&format!("{},{},{}\n", p.t, p.sup_residual, p.vanishing_ok));
            }
            let last = rep.points.last().expect("schedule is nonempty");
            checks.push(
                CheckRecord::new("extension", "restriction to vanishing functions", rep.verdict)
                    .with_numbers(last.sup_residual, rep.tol)
                    .with_detail(format!(
                        "sup residual {:.3e} at t={}",
                        last.sup_residual, last.t
                    )),
            );
            artifacts.push(Artifact::new("restriction_curve.csv", csv));
        }
        Err(e) => checks
            .push(CheckRecord::failed("extension", "restriction to vanishing functions", &e)),
    }

    // cutoff extension reproduces the direct action
    let cutoffs = CutoffFamily::linear(space);
    let mut trace_csv = String::from("function,t,m,residual\n");
    for f in config.resolved_functions()? {
        let name = format!("extension round trip: {}", f.name());
        let mut worst_gap = 0.0f64;
        let mut worst_leak = 0.0f64;
        let result: Result<()> = (|| {
            let kj = space.exhaustion_member(config.schedule.seminorm_horizon)?;
            for &t in &config.schedule.t_grid {
                let (ext, trace) = extend_apply(
                    &op,
                    t,
                    &f,
                    &cutoffs,
                    config.tolerances.round_trip,
                    config.schedule.cutoff_horizon,
                    config.schedule.seminorm_horizon,
                )?;
                for (m, r) in &trace.rows {
                    trace_csv.push_str(&format!("{},{},{},{}\n", f.name(), t, m, r));
                }
                let leak = trace.rows.last().map(|(_, r)| *r).unwrap_or(0.0);
                let direct = op.apply(t, &f)?;
                let gap = ext.sub(&direct)?.compact_seminorm(&kj)?;
                worst_gap = worst_gap.max(gap);
                worst_leak = worst_leak.max(leak);
                if gap > config.tolerances.round_trip + leak {
                    return Err(Error::Validation(format!(
                        "round trip gap {gap:.3e} exceeds tol {:.3e} + leak {leak:.3e} at t={t}",
                        config.tolerances.round_trip
                    )));
                }
            }
            Ok(())
        })();
        match result {
            Ok(()) => checks.push(
                CheckRecord::new("extension", name, true)
                    .with_numbers(worst_gap, config.tolerances.round_trip + worst_leak)
                    .with_detail(format!(
                        "worst gap {:.3e} against budget tol + truncation leak {:.3e}",
                        worst_gap,
                        config.tolerances.round_trip + worst_leak
                    )),
            ),
            Err(e) => checks.push(CheckRecord::failed("extension", name, &e)),
        }
    }
    artifacts.push(Artifact::new("extension_trace.csv", trace_csv));

    // the vanishing-support approximants determine the generator
    let core_horizon = BetaHorizon { n_max: CORE_N_MAX, m_max: CORE_M_MAX };
    match config.test_generator() {
        Ok(graph) => {
            for f in config.resolved_functions()? {
                for family in [CutoffFamily::linear(space), CutoffFamily::smooth(space)] {
                    let name = format!("core property: {} ({} cutoffs)", f.name(), family.label());
                    match core_check(&graph, &f, &family, config.tolerances.core, core_horizon) {
                        Ok(rep) => checks.push(
                            CheckRecord::new("extension", name, rep.verdict).with_detail(format!(
                                "f.chi_k converges: {}; A(f.chi_k) converges: {}",
                                rep.function_limit.converges, rep.image_limit.converges
                            )),
                        ),
                        Err(e) => checks.push(CheckRecord::failed("extension", name, &e)),
                    }
                }
            }
            // negative control: a family that never exhausts the space
            let frozen = CutoffFamily::custom(space, "frozen", move |_| {
                catalog::cutoff_linear(space, 1)
            });
            let f = config.resolved_functions()?.remove(0);
            let name = "core check rejects non-exhausting cutoffs";
            match core_check(&graph, &f, &frozen, config.tolerances.core, core_horizon) {
                Ok(rep) => checks.push(
                    CheckRecord::new("extension", name, !rep.verdict)
                        .with_detail("a frozen cutoff family must fail the core check".to_string()),
                ),
                Err(e) => checks.push(CheckRecord::failed("extension", name, &e)),
            }
        }
        Err(e) => checks.push(CheckRecord::failed("extension", "core property", &e)),
    }
    Ok((checks, artifacts))
}

fn topology_suite(config: &CampaignConfig) -> SuiteOutcome {
    let mut checks = Vec::new();
    let mut artifacts = Vec::new();

    // classifier suite on its own canonical grid (the cases are fixed)
    let grid = StateSpace::real_grid(16.0, 0.01)?;
    match beta_suite(grid) {
        Ok(cases) => {
            let mut csv = String::from("case,expected,observed,pass\n");
            for c in &cases {
                csv.push_str(&format!("{},{},{},{}\n", c.name, c.expected, c.observed, c.pass));
            }
            let pass = cases.iter().all(|c| c.pass);
            let hits = cases.iter().filter(|c| c.pass).count();
            checks.push(
                CheckRecord::new("topology", "strict-convergence classifier suite", pass)
                    .with_detail(format!("{hits}/{} hand-labeled cases reproduced", cases.len())),
            );
            artifacts.push(Artifact::new("beta_suite.csv", csv));
        }
        Err(e) => {
            checks.push(CheckRecord::failed("topology", "strict-convergence classifier", &e))
        }
    }

    // Hahn–Jordan decomposition round trip, exact to the bit
    let name = format!("signed-measure decomposition round trip ({HAHN_TRIALS} draws)");
    let result: Result<()> = (|| {
        use rand::Rng;
        let space = StateSpace::truncated_countable(50)?;
        let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
        for trial in 0..HAHN_TRIALS {
            let n_atoms = rng.gen_range(1..=8);
            let atoms: Vec<(usize, f64)> = (0..n_atoms)
                .map(|_| (rng.gen_range(0..=50), rng.gen_range(-2.0..2.0)))
                .collect();
            let mu = SignedMeasure::new(space, atoms)?;
            let parts = hahn_jordan(&mu)?;
            let recon = parts.reconstruct()?;
            if recon.atoms() != mu.atoms() {
                return Err(Error::Validation(format!(
                    "trial {trial}: reconstruction differs from the original"
                )));
            }
            if parts.c_plus > 0.0 && !parts.mu_plus.is_probability() {
                return Err(Error::Validation(format!(
                    "trial {trial}: positive part is not a probability measure"
                )));
            }
        }
        Ok(())
    })();
    match result {
        Ok(()) => checks.push(
            CheckRecord::new("topology", name, true)
                .with_detail("every reconstruction matched atom-for-atom".to_string()),
        ),
        Err(e) => checks.push(CheckRecord::failed("topology", name, &e)),
    }

    // a walking point mass: vague limit 0, no weak limit
    let name = "walking point mass: vague yes, weak no";
    let result: Result<(bool, bool)> = (|| {
        let space = StateSpace::truncated_countable(60)?;
        let mus: Vec<SignedMeasure> =
            (1..=40).map(|n| SignedMeasure::delta(space, n)).collect::<Result<_>>()?;
        let zero = SignedMeasure::zero(space);
        let vanishing = vec![
            catalog::gaussian(space)?.declare_vanishing()?,
            catalog::cauchy_bump(space)?.declare_vanishing()?,
        ];
        // the slowest dictionary decay is 1/(1+x^2) ~ 6e-4 at the walk's end
        let vague = vague_convergence_test(&mus, &zero, &vanishing, 1e-3)?;
        let weak_dict = vec![catalog::constant(space, 1.0)?, catalog::gaussian(space)?];
        let weak = weak_convergence_test(&mus, &zero, &weak_dict, 1e-3)?;
        Ok((vague.converges, weak.converges))
    })();
    match result {
        Ok((vague, weak)) => checks.push(
            CheckRecord::new("topology", name, vague && !weak).with_detail(format!(
                "vague converges: {vague}; weak converges: {weak} (mass escapes to infinity)"
            )),
        ),
        Err(e) => checks.push(CheckRecord::failed("topology", name, &e)),
    }
    Ok((checks, artifacts))
}

/// Renders the execution plan without running anything.
pub fn describe_campaign(config: &CampaignConfig) -> Result<String> {
    config.validate()?;
    let mut out = String::new();
    out.push_str(&format!("strictlab campaign plan (seed {})\n", config.seed));
    out.push_str(&format!("space: {:?}\n", config.space));
    out.push_str(&format!(
        "model: {} (rate {}, corruption {:?}, kill rate {})\n",
        config.model.family.name(),
        config.model.rate,
        config.model.corruption,
        config.model.kill_rate
    ));
    out.push_str(&format!("functions: {}\n", config.functions.join(", ")));
    out.push_str(&format!("suites: {} selected\n", config.suites.len()));
    let mut simulated_paths = 0usize;
    for suite in &config.suites {
        match suite {
            Suite::Martingale => {
                simulated_paths += config.sampling.n_paths;
                out.push_str(&format!(
                    "  [martingale] mean test at t in {:?} and increment test, N={} paths, \
                     alpha={}\n",
                    config.schedule.t_grid, config.sampling.n_paths, config.sampling.alpha
                ));
            }
            Suite::Scle => {
                // the generator-limit check needs the rate matrix; the heat
                // model recovers its generator only through the dichotomy
                let generator_part = match config.model.family {
                    ModelFamily::Heat => "",
                    _ => "; generator limit along t = 2^-k, k=4..14",
                };
                out.push_str(&format!(
                    "  [scle] semigroup law on a {n}x{n} (s,t) grid (tol {}); \
                     strong-continuity curve with compact (beta) residuals and sup-norm \
                     residuals over {} geometric h points; local equicontinuity over {} \
                     members{generator_part}\n",
                    config.tolerances.law,
                    config.schedule.continuity_n_max,
                    config.schedule.equi_n_max,
                    n = config.schedule.law_points,
                ));
            }
            Suite::Containment => {
                simulated_paths += config.sampling.n_paths;
                out.push_str(&format!(
                    "  [containment] exhaustion search with eps={}, T={}, N={} paths, \
                     confidence={}; path-modulus estimate\n",
                    config.schedule.eps,
                    config.schedule.t_horizon,
                    config.sampling.n_paths,
                    config.sampling.confidence
                ));
            }
            Suite::Extension => {
                out.push_str(&format!(
                    "  [extension] mass conservation (tol {}); restriction check; cutoff \
                     extension round trip for {} function(s) x {} time(s); core property \
                     with linear and smooth cutoffs plus a non-exhausting control\n",
                    config.tolerances.mass,
                    config.functions.len(),
                    config.schedule.t_grid.len()
                ));
            }
            Suite::Topology => {
                out.push_str(&format!(
                    "  [topology] 10-case strict-convergence classifier suite; \
                     {HAHN_TRIALS}-draw decomposition round trip; walking point mass \
                     vague/weak discrimination\n"
                ));
            }
        }
    }
    out.push_str(&format!(
        "estimated work: {simulated_paths} simulated paths, deterministic given the seed\n"
    ));
    if config.suites.is_empty() {
        out.push_str("warning: no suites selected; the campaign will run zero checks\n");
    }
    Ok(out)
}
