//! Statistical verification of the martingale property
//! `M_f(t) = f(η(t)) − f(η(0)) − ∫₀ᵗ Af(η(s)) ds`, the compact-containment
//! condition, and the short-time modulus of path continuity, over seeded
//! path ensembles. Also hosts the hand-labeled convergence suite for the
//! strict-topology classifier.
//!
//! All statistics are plain reductions over paths; verdicts carry the
//! bands and counts they were decided on.

use crate::catalog;
use crate::error::{Error, Result};
use crate::func::{beta_converges, dini_check, BetaHorizon, TestFunction};
use crate::generator::{GeneratorGraph, Realization};
use crate::path::{PathEnsemble, SamplerKind};
use crate::space::{CompactSet, SpaceKind, StateSpace};
use crate::stats::{mean_band, wilson_interval, EstimateWithBand};

/// Per-path martingale statistic `M_f(t)`. Exact on jump paths; on grid
/// paths the integral term carries the sampler's O(dt) bias.
pub fn martingale_statistic(
    ensemble: &PathEnsemble,
    f: &TestFunction,
    af: &TestFunction,
    t: f64,
) -> Result<Vec<f64>> {
    ensemble
        .paths()
        .iter()
        .map(|p| {
            let ft = f.value(p.state_at(t)?);
            let f0 = f.value(p.state_at(0.0)?);
            Ok(ft - f0 - p.path_integral(af, t)?)
        })
        .collect()
}

/// Documented bias heuristic for grid-sampled ensembles: the integral term
/// of `M_f` drifts by about `‖(Af)′‖ · σ_max · √dt` per unit time, so mean
/// tests on diffusions widen their acceptance by that allowance. Chains
/// are exact and get 0.
fn bias_allowance(a: &GeneratorGraph, af: &TestFunction, kind: SamplerKind, t: f64) -> f64 {
    let SamplerKind::Diffusion { dt } = kind else {
        return 0.0;
    };
    let space = a.space();
    let SpaceKind::RealGrid { spacing, .. } = space.kind() else {
        return 0.0;
    };
    let deriv_sup = af
        .values()
        .windows(2)
        .map(|w| (w[1] - w[0]).abs() / spacing)
        .fold(0.0f64, f64::max);
    let sigma_max = match a.realization() {
        Some(Realization::Stencil(st)) => {
            st.sigma2().iter().cloned().fold(0.0f64, f64::max).sqrt()
        }
        _ => 1.0,
    };
    deriv_sup * sigma_max * dt.sqrt() * t
}

/// One time point of a martingale mean test.
#[derive(Clone, Copy, Debug)]
pub struct MeanTestPoint {
    pub t: f64,
    pub mean: f64,
    pub half_width: f64,
    /// Extra acceptance width granted to grid-sampled ensembles.
    pub bias_allowance: f64,
    pub pass: bool,
}

/// Outcome of a martingale mean test over several times.
#[derive(Clone, Debug)]
pub struct MeanTestReport {
    pub pass: bool,
    pub points: Vec<MeanTestPoint>,
    pub n: usize,
    pub alpha: f64,
}

/// Minimum ensemble size for the normal approximation behind the z tests.
pub const MIN_SAMPLES: usize = 30;

/// Tests `E[M_f(t)] = 0` at each requested time: fail at a time iff
/// `|mean| > z_{1−α/2}·σ̂/√N` (plus the grid-bias allowance).
pub fn martingale_mean_test(
    ensemble: &PathEnsemble,
    f: &TestFunction,
    a: &GeneratorGraph,
    times: &[f64],
    alpha: f64,
) -> Result<MeanTestReport> {
    if ensemble.len() < MIN_SAMPLES {
        return Err(Error::InsufficientSamples { needed: MIN_SAMPLES, have: ensemble.len() });
    }
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::Validation(format!("significance must be in (0,1), got {alpha}")));
    }
    if times.is_empty() {
        return Err(Error::Validation("the mean test needs at least one time".into()));
    }
    let af = a.apply(f)?;
    let mut points = Vec::with_capacity(times.len());
    for &t in times {
        let samples = martingale_statistic(ensemble, f, &af, t)?;
        let band = mean_band(&samples, 1.0 - alpha)?;
        let bias = bias_allowance(a, &af, ensemble.kind(), t);
        points.push(MeanTestPoint {
            t,
            mean: band.estimate,
            half_width: band.half_width,
            bias_allowance: bias,
            pass: band.estimate.abs() <= band.half_width + bias,
        });
    }
    Ok(MeanTestReport {
        pass: points.iter().all(|p| p.pass),
        points,
        n: ensemble.len(),
        alpha,
    })
}

/// One dictionary element of a martingale increment test.
#[derive(Clone, Debug)]
pub struct IncrementTestPoint {
    pub witness: String,
    pub mean: f64,
    pub half_width: f64,
    pub bias_allowance: f64,
    pub pass: bool,
}

/// Outcome of a martingale increment test.
#[derive(Clone, Debug)]
pub struct IncrementTestReport {
    pub pass: bool,
    pub s: f64,
    pub t: f64,
    pub points: Vec<IncrementTestPoint>,
    pub n: usize,
    pub alpha: f64,
}

/// Weak-form test of the martingale increment property:
/// `E[(M_f(t) − M_f(s)) · g(η(s))] = 0` for every dictionary element `g`.
/// The dictionary must contain the constant 1 (which reduces the test to
/// the plain mean gap).
pub fn martingale_increment_test(
    ensemble: &PathEnsemble,
    f: &TestFunction,
    a: &GeneratorGraph,
    s: f64,
    t: f64,
    dictionary: &[TestFunction],
    alpha: f64,
) -> Result<IncrementTestReport> {
    if ensemble.len() < MIN_SAMPLES {
        return Err(Error::InsufficientSamples { needed: MIN_SAMPLES, have: ensemble.len() });
    }
    if !(s < t) {
        return Err(Error::Precondition(format!("need s < t, got s={s}, t={t}")));
    }
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::Validation(format!("significance must be in (0,1), got {alpha}")));
    }
    let has_one = dictionary
        .iter()
        .any(|g| g.values().iter().all(|v| (v - 1.0).abs() <= 1e-12));
    if !has_one {
        return Err(Error::Precondition(
            "the dictionary must include the constant function 1".into(),
        ));
    }
    let af = a.apply(f)?;
    // ΔM_i = f(η(t)) − f(η(s)) − ∫ₛᵗ Af(η(u)) du, per path
    let mut deltas = Vec::with_capacity(ensemble.len());
    let mut states_s = Vec::with_capacity(ensemble.len());
    for p in ensemble.paths() {
        let xs = p.state_at(s)?;
        let xt = p.state_at(t)?;
        let seg = p.path_integral(&af, t)? - p.path_integral(&af, s)?;
        deltas.push(f.value(xt) - f.value(xs) - seg);
        states_s.push(xs);
    }
    let bias = bias_allowance(a, &af, ensemble.kind(), t - s);
    let mut points = Vec::with_capacity(dictionary.len());
    for g in dictionary {
        if g.space() != ensemble.space() {
            return Err(Error::Domain(format!(
                "dictionary function '{}' lives on a different space",
                g.name()
            )));
        }
        let samples: Vec<f64> = deltas
            .iter()
            .zip(&states_s)
            .map(|(dm, &xs)| dm * g.value(xs))
            .collect();
        let band = mean_band(&samples, 1.0 - alpha)?;
        let allowance = bias * g.sup_norm();
        points.push(IncrementTestPoint {
            witness: g.name().to_string(),
            mean: band.estimate,
            half_width: band.half_width,
            bias_allowance: allowance,
            pass: band.estimate.abs() <= band.half_width + allowance,
        });
    }
    Ok(IncrementTestReport {
        pass: points.iter().all(|p| p.pass),
        s,
        t,
        points,
        n: ensemble.len(),
        alpha,
    })
}

/// One scanned exhaustion element of a containment search.
#[derive(Clone, Copy, Debug)]
pub struct ContainmentScanRow {
    pub m: usize,
    pub stay_count: usize,
    pub wilson_lower: f64,
    pub pass: bool,
}

/// Empirical certificate that paths started in `K` stay inside the
/// exhaustion element `K′ = K_m` up to the horizon, with probability
/// bounded below (Wilson) by the required level `(1 − ε)·ν(K)`.
#[derive(Clone, Debug)]
pub struct ContainmentCertificate {
    pub k: CompactSet,
    pub k_prime: CompactSet,
    pub eps: f64,
    pub t_horizon: f64,
    pub n_paths: usize,
    pub stay_count: usize,
    pub wilson_lower: f64,
    pub required: f64,
    pub confidence: f64,
    /// All exhaustion elements scanned, in order, for the monotonicity
    /// record.
    pub scan: Vec<ContainmentScanRow>,
}

/// Searches the exhaustion for the smallest `K_m` such that the Wilson
/// lower confidence bound of `P[η(t) ∈ K_m for all represented t < T]`
/// reaches `(1 − ε)·ν(K)`. The initial law must be supported in `K`.
pub fn containment_search(
    ensemble: &PathEnsemble,
    k: &CompactSet,
    eps: f64,
    t_horizon: f64,
    confidence: f64,
) -> Result<ContainmentCertificate> {
    let space = ensemble.space();
    if k.space() != space {
        return Err(Error::Domain("compact set lives on a different space".into()));
    }
    if !(eps > 0.0 && eps <= 1.0) {
        return Err(Error::Validation(format!("eps must be in (0,1], got {eps}")));
    }
    if !(t_horizon > 0.0) || t_horizon > ensemble.paths()[0].horizon() {
        return Err(Error::Precondition(format!(
            "containment horizon {t_horizon} outside the simulated horizon {}",
            ensemble.paths()[0].horizon()
        )));
    }
    for (i, _) in ensemble.initial_law().atoms() {
        if !k.contains(*i) {
            return Err(Error::Precondition(format!(
                "initial law puts mass outside K (at point {i})"
            )));
        }
    }
    let required = (1.0 - eps) * ensemble.initial_law().mass_on(k)?;
    // smallest exhaustion index covering each path up to (but excluding) T
    let needed: Vec<usize> = ensemble
        .paths()
        .iter()
        .map(|p| {
            let mut worst = 1usize;
            for (time, state) in p.event_times().iter().zip(path_states(p)?) {
                if *time >= t_horizon {
                    break;
                }
                worst = worst.max(space.min_exhaustion_index_containing(state));
            }
            Ok(worst)
        })
        .collect::<Result<_>>()?;
    let n = needed.len();
    let saturation = space.saturation_index();
    let mut scan = Vec::new();
    let mut best: Option<ContainmentScanRow> = None;
    for m in 1..=saturation {
        let stay = needed.iter().filter(|&&w| w <= m).count();
        let (lower, _) = wilson_interval(stay, n, confidence)?;
        let row = ContainmentScanRow { m, stay_count: stay, wilson_lower: lower, pass: lower >= required };
        scan.push(row);
        if best.is_none_or(|b| row.wilson_lower > b.wilson_lower) {
            best = Some(row);
        }
        if row.pass {
            return Ok(ContainmentCertificate {
                k: *k,
                k_prime: space.exhaustion_member(m)?,
                eps,
                t_horizon,
                n_paths: n,
                stay_count: stay,
                wilson_lower: lower,
                required,
                confidence,
                scan,
            });
        }
    }
    let best = best.expect("saturation index >= 1");
    Err(Error::ContainmentHorizon {
        best_index: best.m,
        best_lower_bound: best.wilson_lower,
        required,
    })
}

/// Recorded states of a path in event order (same length as
/// [`event_times`](crate::path::CadlagPath::event_times)).
fn path_states(p: &crate::path::CadlagPath) -> Result<Vec<usize>> {
    p.event_times().iter().map(|&t| p.state_at(t)).collect()
}

/// Estimates `P[sup_{s ≤ δ} d(η(0), η(s)) < ε′]` over the ensemble. The
/// band is symmetric and covers the Wilson interval at the given
/// confidence.
pub fn modulus_probability(
    ensemble: &PathEnsemble,
    delta: f64,
    eps_prime: f64,
    confidence: f64,
) -> Result<EstimateWithBand> {
    let mut hits = 0usize;
    for p in ensemble.paths() {
        if p.modulus_event(delta, eps_prime)? {
            hits += 1;
        }
    }
    let n = ensemble.len();
    let p_hat = hits as f64 / n as f64;
    let (lo, hi) = wilson_interval(hits, n, confidence)?;
    Ok(EstimateWithBand {
        estimate: p_hat,
        half_width: (p_hat - lo).max(hi - p_hat),
        sigma_hat: (p_hat * (1.0 - p_hat)).sqrt(),
        n,
        confidence,
    })
}

/// One case of the hand-labeled convergence suite.
#[derive(Clone, Debug)]
pub struct SuiteCase {
    pub name: String,
    pub expected: bool,
    pub observed: bool,
    /// Whether the classifier reproduced the label.
    pub pass: bool,
}

/// Runs the 10-case hand-labeled suite for the strict-topology classifier
/// on a real grid: norm-bounded compact-uniform convergence must be
/// accepted (including a marching bump that never converges uniformly),
/// norm blow-ups, oscillation, and non-decaying wiggles must be rejected.
pub fn beta_suite(space: StateSpace) -> Result<Vec<SuiteCase>> {
    let SpaceKind::RealGrid { half_width, .. } = space.kind() else {
        return Err(Error::Validation("the convergence suite runs on a real grid".into()));
    };
    if half_width < 12.0 {
        return Err(Error::Validation(
            "the convergence suite needs a grid of half-width at least 12".into(),
        ));
    }
    let zero = catalog::constant(space, 0.0)?;
    let one = catalog::constant(space, 1.0)?;
    let mut cases = Vec::new();
    let mut record = |name: &str, expected: bool, observed: bool| {
        cases.push(SuiteCase {
            name: name.to_string(),
            expected,
            observed,
            pass: expected == observed,
        });
    };

    // 1. f_n = min(|x|/n, 1) → 0: residual m/n on K_m, settles
    let v = beta_converges(
        |n| catalog::min_abs_over(space, n as f64),
        &zero,
        0.1,
        BetaHorizon { n_max: 60, m_max: 3 },
    )?;
    record("min(|x|/n,1) -> 0", true, v.converges);

    // 2. f_n = n·e^{−nx²}: norm blows up at the origin
    let v = beta_converges(
        |n| catalog::scaled_gaussian(space, n as f64, n as f64, 0.0),
        &zero,
        0.1,
        BetaHorizon { n_max: 40, m_max: 3 },
    )?;
    record("n·exp(-n·x^2) -> 0", false, v.converges);

    // 3. f_n = e^{−x²/n} ↑ 1: the monotone (Dini) family
    let v = dini_check(
        |n| catalog::scaled_gaussian(space, 1.0, 1.0 / n as f64, 0.0),
        &one,
        0.1,
        BetaHorizon { n_max: 60, m_max: 2 },
    )?;
    record("exp(-x^2/n) ↑ 1", true, v.converges);

    // 4. constant sequence
    let target = catalog::cauchy_bump(space)?;
    let v = beta_converges(
        |_| catalog::cauchy_bump(space),
        &target,
        1e-9,
        BetaHorizon { n_max: 10, m_max: 3 },
    )?;
    record("constant sequence", true, v.converges);

    // 5. (1 − 1/n)·c ↑ c
    let c = catalog::constant(space, 2.0)?;
    let v = dini_check(
        |n| catalog::constant(space, 2.0 * (1.0 - 1.0 / n as f64)),
        &c,
        0.05,
        BetaHorizon { n_max: 50, m_max: 3 },
    )?;
    record("(1-1/n)c ↑ c", true, v.converges);

    // 6. sin(x²/n) → 0: residual ≤ m²/n on K_m
    let v = beta_converges(
        |n| catalog::sin_square_scaled(space, n as f64),
        &zero,
        0.1,
        BetaHorizon { n_max: 80, m_max: 2 },
    )?;
    record("sin(x^2/n) -> 0", true, v.converges);

    // 7. marching bump e^{−(x−n)²} → 0: β-true though the sup norm stays 1
    let v = beta_converges(
        |n| catalog::scaled_gaussian(space, 1.0, 1.0, n as f64),
        &zero,
        0.05,
        BetaHorizon { n_max: 10, m_max: 3 },
    )?;
    record("marching bump -> 0", true, v.converges);

    // 8. (−1)ⁿ·c: oscillates, never settles
    let v = beta_converges(
        |n| catalog::constant(space, if n % 2 == 0 { 1.0 } else { -1.0 }),
        &zero,
        0.1,
        BetaHorizon { n_max: 20, m_max: 1 },
    )?;
    record("(-1)^n·c -> 0", false, v.converges);

    // 9. x/n clipped to the grid → 0
    let v = beta_converges(
        |n| catalog::clipped_scaled_identity(space, 1.0 / n as f64, half_width),
        &zero,
        0.1,
        BetaHorizon { n_max: 60, m_max: 3 },
    )?;
    record("x/n -> 0", true, v.converges);

    // 10. sin(nx) → 0: oscillation with no compact-uniform decay
    let v = beta_converges(
        |n| catalog::sin_freq(space, n as f64),
        &zero,
        0.1,
        BetaHorizon { n_max: 20, m_max: 2 },
    )?;
    record("sin(nx) -> 0", false, v.converges);

    Ok(cases)
}
