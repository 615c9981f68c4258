//! Transition semigroups `S(t)f(x) = E[f(η(t)) | η(0) = x]`: exact matrix
//! and heat-flow backends, Monte Carlo estimation, the dual action on
//! measures, and the operator checks (semigroup law, strong continuity in
//! the strict topology, local equicontinuity, generator recovery).
//!
//! Exact backends are deterministic; the Monte Carlo backend exists to
//! cross-validate them pointwise and to serve models without an exact
//! backend, so it refuses the operator-level checks outright rather than
//! forcing statistical tolerances onto them.

use crate::error::{Error, Result};
use crate::expm::{expm_apply, expm_apply_left};
use crate::func::{beta_converges, BetaHorizon, BetaVerdict, EvalRule, TestFunction};
use crate::generator::{GeneratorGraph, QMatrix};
use crate::heat::{heat_apply, sin_square_flow};
use crate::measure::SignedMeasure;
use crate::path::{PathEnsemble, SamplerKind};
use crate::space::{CompactSet, SpaceKind, StateSpace};
use crate::stats::{mean_band, EstimateWithBand};

/// Which backend an operator runs on.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BackendKind {
    MatrixExp,
    HeatClosedForm,
    MonteCarlo,
}

enum Backend {
    /// Matrix exponential by uniformization. `time_skew` shifts every
    /// requested time by a fixed amount; it exists purely as a fault
    /// injection for negative controls and is 0 in normal use.
    MatrixExp { q: QMatrix, time_skew: f64 },
    /// Heat flow on the line (generator ½f″), closed form plus quadrature.
    HeatClosedForm,
    /// Seeded path simulation; estimates values pointwise with bands.
    MonteCarlo { graph: GeneratorGraph, kind: SamplerKind, n_paths: usize, master_seed: u64 },
}

/// A transition semigroup with a fixed backend over a fixed space.
pub struct SemigroupOperator {
    space: StateSpace,
    backend: Backend,
}

impl SemigroupOperator {
    /// Matrix-exponential backend for a rate matrix on a finite or
    /// truncated space.
    pub fn matrix_exp(space: StateSpace, q: QMatrix) -> Result<Self> {
        if q.dim() != space.len() {
            return Err(Error::Validation(format!(
                "rate matrix is {}×{} but the space has {} points",
                q.dim(),
                q.dim(),
                space.len()
            )));
        }
        Ok(Self { space, backend: Backend::MatrixExp { q, time_skew: 0.0 } })
    }

    /// Matrix-exponential backend with a deliberate time offset: every
    /// `apply(t)` evaluates at `t + skew`. Fault injection for negative
    /// controls of the semigroup law; never use it for real transport.
    pub fn corrupted_matrix_exp(space: StateSpace, q: QMatrix, skew: f64) -> Result<Self> {
        if !(skew >= 0.0) || !skew.is_finite() {
            return Err(Error::Validation("time skew must be >= 0 and finite".into()));
        }
        let mut op = Self::matrix_exp(space, q)?;
        if let Backend::MatrixExp { time_skew, .. } = &mut op.backend {
            *time_skew = skew;
        }
        Ok(op)
    }

    /// Heat-flow backend (σ² = 1, zero drift) on a real grid.
    pub fn heat_closed_form(space: StateSpace) -> Result<Self> {
        let SpaceKind::RealGrid { .. } = space.kind() else {
            return Err(Error::Validation("the heat backend needs a real grid".into()));
        };
        Ok(Self { space, backend: Backend::HeatClosedForm })
    }

    /// Monte Carlo backend over a generator graph; `kind` picks the path
    /// sampler, `n_paths` and `master_seed` are the stored defaults used by
    /// [`mc_estimate`](Self::mc_estimate).
    pub fn monte_carlo(
        graph: GeneratorGraph,
        kind: SamplerKind,
        n_paths: usize,
        master_seed: u64,
    ) -> Result<Self> {
        if n_paths < 2 {
            return Err(Error::InsufficientSamples { needed: 2, have: n_paths });
        }
        let space = *graph.space();
        Ok(Self { space, backend: Backend::MonteCarlo { graph, kind, n_paths, master_seed } })
    }

    pub fn space(&self) -> &StateSpace {
        &self.space
    }

    pub fn kind(&self) -> BackendKind {
        match self.backend {
            Backend::MatrixExp { .. } => BackendKind::MatrixExp,
            Backend::HeatClosedForm => BackendKind::HeatClosedForm,
            Backend::MonteCarlo { .. } => BackendKind::MonteCarlo,
        }
    }

    /// Human-readable backend descriptor for reports.
    pub fn descriptor(&self) -> String {
        match &self.backend {
            Backend::MatrixExp { q, time_skew } => {
                if *time_skew == 0.0 {
                    format!("matrix-exponential(uniformization, dim {})", q.dim())
                } else {
                    format!(
                        "matrix-exponential(uniformization, dim {}, time skew {time_skew})",
                        q.dim()
                    )
                }
            }
            Backend::HeatClosedForm => "heat-closed-form(sigma2=1)".into(),
            Backend::MonteCarlo { kind, n_paths, master_seed, .. } => {
                format!("monte-carlo({kind:?}, N={n_paths}, seed={master_seed})")
            }
        }
    }

    pub fn is_exact(&self) -> bool {
        !matches!(self.backend, Backend::MonteCarlo { .. })
    }

    fn require_exact(&self, op: &str) -> Result<()> {
        if self.is_exact() {
            Ok(())
        } else {
            Err(Error::UnsupportedBackend(format!(
                "{op} needs an exact backend; the Monte Carlo backend only estimates \
                 pointwise values"
            )))
        }
    }

    /// `S(t)f`, tabulated over the whole space. Exact backends only.
    pub fn apply(&self, t: f64, f: &TestFunction) -> Result<TestFunction> {
        self.require_exact("apply")?;
        if !(t >= 0.0) || !t.is_finite() {
            return Err(Error::Domain(format!("time must be >= 0 and finite, got {t}")));
        }
        if f.space() != &self.space {
            return Err(Error::Domain(format!(
                "function '{}' lives on a different space",
                f.name()
            )));
        }
        match &self.backend {
            Backend::MatrixExp { q, time_skew } => {
                let values = expm_apply(q, t + time_skew, f.values())?;
                TestFunction::from_values(
                    self.space,
                    format!("S({t}){}", f.name()),
                    values,
                    f.bound(),
                )
            }
            Backend::HeatClosedForm => {
                let name = format!("S({t}){}", f.name());
                if t == 0.0 {
                    return Ok(f.clone().with_name(name));
                }
                let rule = match f.rule() {
                    EvalRule::SinSquare => {
                        EvalRule::Analytic(std::sync::Arc::new(move |x| sin_square_flow(t, x)))
                    }
                    EvalRule::Analytic(c) => {
                        let c = std::sync::Arc::clone(c);
                        EvalRule::Analytic(std::sync::Arc::new(move |x| {
                            crate::heat::gaussian_expectation(|y| c(y), x, t, 1e-9)
                                .unwrap_or(f64::NAN)
                        }))
                    }
                    EvalRule::Tabulated => {
                        return Err(Error::Validation(format!(
                            "function '{}' has no pointwise rule; the heat flow needs one",
                            f.name()
                        )))
                    }
                };
                let flow = rule.closure().expect("analytic rule");
                let values = self.space.points().map(|i| flow(self.space.coord(i))).collect();
                TestFunction::build(self.space, name, values, f.bound(), rule)
            }
            Backend::MonteCarlo { .. } => unreachable!("guarded by require_exact"),
        }
    }

    /// `S(t)f` at selected points only. For the heat backend this avoids
    /// tabulating quadrature over the whole grid.
    pub fn apply_at(&self, t: f64, f: &TestFunction, indices: &[usize]) -> Result<Vec<f64>> {
        self.require_exact("apply_at")?;
        if f.space() != &self.space {
            return Err(Error::Domain(format!(
                "function '{}' lives on a different space",
                f.name()
            )));
        }
        match &self.backend {
            Backend::MatrixExp { q, time_skew } => {
                let values = expm_apply(q, t + time_skew, f.values())?;
                indices
                    .iter()
                    .map(|&i| {
                        values.get(i).copied().ok_or_else(|| {
                            Error::Domain(format!("index {i} outside the space"))
                        })
                    })
                    .collect()
            }
            Backend::HeatClosedForm => indices
                .iter()
                .map(|&i| {
                    if i >= self.space.len() {
                        return Err(Error::Domain(format!("index {i} outside the space")));
                    }
                    heat_apply(t, f, self.space.coord(i))
                })
                .collect(),
            Backend::MonteCarlo { .. } => unreachable!("guarded by require_exact"),
        }
    }

    /// Dual action on measures: `⟨f, S′(t)μ⟩ = ⟨S(t)f, μ⟩`. Matrix backend
    /// only; the heat flow maps atoms to densities, which this measure
    /// representation cannot hold, and Monte Carlo is not exact.
    pub fn dual_apply(&self, t: f64, mu: &SignedMeasure) -> Result<SignedMeasure> {
        if !(t >= 0.0) || !t.is_finite() {
            return Err(Error::Domain(format!("time must be >= 0 and finite, got {t}")));
        }
        let Backend::MatrixExp { q, time_skew } = &self.backend else {
            return Err(Error::UnsupportedBackend(
                "the dual action needs the matrix-exponential backend; other backends \
                 cannot transport atomic measures exactly"
                    .into(),
            ));
        };
        if mu.space() != &self.space {
            return Err(Error::Domain("measure lives on a different space".into()));
        }
        let mut dense = vec![0.0; self.space.len()];
        for (i, w) in mu.atoms() {
            dense[*i] += w;
        }
        let moved = expm_apply_left(q, t + time_skew, &dense)?;
        SignedMeasure::from_dense(self.space, &moved)
    }

    /// Monte Carlo estimate of `S(t)f(x)` with the stored sample count and
    /// seed. Available on the Monte Carlo backend only.
    pub fn mc_estimate(&self, t: f64, f: &TestFunction, x0: usize, confidence: f64)
        -> Result<EstimateWithBand>
    {
        let Backend::MonteCarlo { graph, kind, n_paths, master_seed } = &self.backend else {
            return Err(Error::UnsupportedBackend(
                "mc_estimate needs the Monte Carlo backend".into(),
            ));
        };
        mc_apply(graph, *kind, t, f, x0, *n_paths, *master_seed, confidence)
    }

    /// `‖S(s)S(t)f − S(s+t)f‖` against a tolerance. Exact backends only.
    pub fn semigroup_law_check(
        &self,
        s: f64,
        t: f64,
        f: &TestFunction,
        tol: f64,
    ) -> Result<LawReport> {
        self.require_exact("semigroup_law_check")?;
        if !(tol > 0.0) {
            return Err(Error::Validation("tolerance must be positive".into()));
        }
        let two_step = self.apply(s, &self.apply(t, f)?)?;
        let one_step = self.apply(s + t, f)?;
        let residual = two_step.sub(&one_step)?.sup_norm();
        Ok(LawReport { s, t, residual, tol, pass: residual <= tol })
    }

    /// Strong continuity at `t0` in the strict topology: classifies
    /// `S(t0 + h)f → S(t0)f` along the geometric schedule
    /// `h_n = t_unit · 2^{1−n}`, `n = 1..=horizon.n_max`, and reports the
    /// residual curve on a probe compact alongside the sup-norm residuals.
    pub fn strong_continuity_check(
        &self,
        f: &TestFunction,
        t0: f64,
        t_unit: f64,
        probe: &CompactSet,
        tol: f64,
        horizon: BetaHorizon,
    ) -> Result<ContinuityReport> {
        self.require_exact("strong_continuity_check")?;
        if !(t_unit > 0.0) || !t_unit.is_finite() {
            return Err(Error::Validation("t_unit must be positive and finite".into()));
        }
        let limit = self.apply(t0, f)?;
        let schedule: Vec<f64> =
            (1..=horizon.n_max).map(|n| t_unit * 2f64.powi(1 - n as i32)).collect();
        let verdict =
            beta_converges(|n| self.apply(t0 + schedule[n - 1], f), &limit, tol, horizon)?;
        let mut curve = Vec::with_capacity(schedule.len());
        for &h in &schedule {
            let diff = self.apply(t0 + h, f)?.sub(&limit)?;
            curve.push(ContinuityPoint {
                h,
                compact_residual: diff.compact_seminorm(probe)?,
                sup_residual: diff.sup_norm(),
            });
        }
        Ok(ContinuityReport { t0, verdict, curve })
    }

    /// Local equicontinuity on a compact: given a sequence `f_n → f` in the
    /// strict topology (the premise is re-checked), tests whether
    /// `sup_{t ∈ grid} p_K(S(t)f_n − S(t)f)` settles at or below `tol` by
    /// the end of the sequence.
    pub fn local_equicontinuity_check<F>(
        &self,
        mut seq: F,
        limit: &TestFunction,
        t_grid: &[f64],
        k: &CompactSet,
        tol: f64,
        horizon: BetaHorizon,
    ) -> Result<EquicontinuityReport>
    where
        F: FnMut(usize) -> Result<TestFunction>,
    {
        self.require_exact("local_equicontinuity_check")?;
        if t_grid.is_empty() || t_grid.iter().any(|t| !(*t >= 0.0) || !t.is_finite()) {
            return Err(Error::Validation(
                "the time grid must be non-empty with times >= 0".into(),
            ));
        }
        if !(tol > 0.0) {
            return Err(Error::Validation("tolerance must be positive".into()));
        }
        let members: Vec<TestFunction> =
            (1..=horizon.n_max).map(&mut seq).collect::<Result<_>>()?;
        let premise = beta_converges(|n| Ok(members[n - 1].clone()), limit, tol, horizon)?;
        if !premise.converges {
            return Err(Error::Precondition(
                "the sequence does not converge to the limit in the strict topology \
                 at the declared horizon"
                    .into(),
            ));
        }
        let indices: Vec<usize> = k.indices().collect();
        let mut residuals = Vec::with_capacity(members.len());
        for fun in &members {
            let mut worst = 0.0f64;
            for &t in t_grid {
                let a = self.apply_at(t, fun, &indices)?;
                let b = self.apply_at(t, limit, &indices)?;
                let r = a
                    .iter()
                    .zip(&b)
                    .map(|(x, y)| (x - y).abs())
                    .fold(0.0f64, f64::max);
                worst = worst.max(r);
            }
            residuals.push(worst);
        }
        let verdict = residuals.last().is_some_and(|r| *r <= tol);
        Ok(EquicontinuityReport { verdict, residuals, t_grid: t_grid.to_vec(), tol })
    }

    /// Generator recovery: checks `(S(t)f − f)/t → g` in the strict
    /// topology along a decreasing positive schedule, with the sup-norm
    /// bound `‖(S(t)f − f)/t‖ ≤ ‖g‖(1 + tol)` on every schedule point, and
    /// reports the slope of the sup residual against t.
    pub fn generator_limit_check(
        &self,
        f: &TestFunction,
        g: &TestFunction,
        t_schedule: &[f64],
        m_max: usize,
        tol: f64,
    ) -> Result<GeneratorLimitReport> {
        self.require_exact("generator_limit_check")?;
        if t_schedule.is_empty() || t_schedule.iter().any(|t| !(*t > 0.0) || !t.is_finite()) {
            return Err(Error::Validation(
                "the schedule must be non-empty with times > 0".into(),
            ));
        }
        let quotient = |t: f64| -> Result<TestFunction> {
            self.apply(t, f)?.sub(f)?.scale(1.0 / t)
        };
        let g_norm = g.sup_norm();
        let mut curve = Vec::with_capacity(t_schedule.len());
        let mut sup_ok = true;
        for &t in t_schedule {
            let q = quotient(t)?;
            // dividing by t amplifies the round-off of S(t)f by 1/t; grant
            // that much absolute slack on top of the relative tolerance
            let slack = 64.0 * f64::EPSILON * f.bound().max(1.0) / t;
            if q.sup_norm() > g_norm * (1.0 + tol) + slack {
                sup_ok = false;
            }
            curve.push((t, q.sub(g)?.sup_norm()));
        }
        let beta = beta_converges(
            |n| quotient(t_schedule[n - 1]),
            g,
            tol,
            BetaHorizon { n_max: t_schedule.len(), m_max },
        )?;
        let slope = {
            let num: f64 = curve.iter().map(|(t, r)| t * r).sum();
            let den: f64 = curve.iter().map(|(t, _)| t * t).sum();
            num / den
        };
        Ok(GeneratorLimitReport { verdict: sup_ok && beta.converges, sup_ok, beta, curve, slope })
    }
}

/// Monte Carlo estimate of `S(t)f(x0)`: the sample mean of `f(η(t))` over
/// `n` independent seeded paths started at `x0`, with a confidence band.
#[allow(clippy::too_many_arguments)]
pub fn mc_apply(
    graph: &GeneratorGraph,
    kind: SamplerKind,
    t: f64,
    f: &TestFunction,
    x0: usize,
    n: usize,
    master_seed: u64,
    confidence: f64,
) -> Result<EstimateWithBand> {
    if n < 2 {
        return Err(Error::InsufficientSamples { needed: 2, have: n });
    }
    if f.space() != graph.space() {
        return Err(Error::Domain(format!(
            "function '{}' lives on a different space",
            f.name()
        )));
    }
    if !(t >= 0.0) || !t.is_finite() {
        return Err(Error::Domain(format!("time must be >= 0 and finite, got {t}")));
    }
    if t == 0.0 {
        return mean_band(&vec![f.value(x0); n], confidence);
    }
    let nu = SignedMeasure::delta(*graph.space(), x0)?;
    let ensemble = PathEnsemble::generate(graph, "mc_apply", &nu, n, t, kind, master_seed)?;
    let samples: Vec<f64> = ensemble
        .paths()
        .iter()
        .map(|p| p.state_at(t).map(|x| f.value(x)))
        .collect::<Result<_>>()?;
    mean_band(&samples, confidence)
}

/// Outcome of a semigroup-law check.
#[derive(Clone, Debug)]
pub struct LawReport {
    pub s: f64,
    pub t: f64,
    pub residual: f64,
    pub tol: f64,
    pub pass: bool,
}

/// One h-point of a strong-continuity residual curve.
#[derive(Clone, Copy, Debug)]
pub struct ContinuityPoint {
    pub h: f64,
    /// `p_K(S(t0+h)f − S(t0)f)` on the probe compact.
    pub compact_residual: f64,
    /// `‖S(t0+h)f − S(t0)f‖` over the whole represented space.
    pub sup_residual: f64,
}

/// Outcome of a strong-continuity check: the strict-topology verdict plus
/// the residual curve for export.
#[derive(Clone, Debug)]
pub struct ContinuityReport {
    pub t0: f64,
    pub verdict: BetaVerdict,
    pub curve: Vec<ContinuityPoint>,
}

impl ContinuityReport {
    /// Curve rows as CSV: `h,compact_residual,sup_residual`.
    pub fn curve_csv(&self) -> String {
        let mut out = String::from("h,compact_residual,sup_residual\n");
        for p in &self.curve {
            out.push_str(&format!("{},{},{}\n", p.h, p.compact_residual, p.sup_residual));
        }
        out
    }
}

/// Outcome of a local-equicontinuity check: per-member worst residuals over
/// the time grid, on the chosen compact.
#[derive(Clone, Debug)]
pub struct EquicontinuityReport {
    pub verdict: bool,
    pub residuals: Vec<f64>,
    pub t_grid: Vec<f64>,
    pub tol: f64,
}

/// Outcome of a generator-recovery check.
#[derive(Clone, Debug)]
pub struct GeneratorLimitReport {
    pub verdict: bool,
    /// Whether `‖(S(t)f − f)/t‖ ≤ ‖g‖(1+tol)` held on the whole schedule.
    pub sup_ok: bool,
    pub beta: BetaVerdict,
    /// `(t, ‖(S(t)f − f)/t − g‖)` per schedule point.
    pub curve: Vec<(f64, f64)>,
    /// Least-squares slope (through the origin) of residual against t.
    pub slope: f64,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::generator::build_ctmc;
    use approx::assert_abs_diff_eq;
    use rand::prelude::*;
    use rand_chacha::ChaCha8Rng;

    fn two_state() -> (StateSpace, SemigroupOperator) {
        let space = StateSpace::finite(2).unwrap();
        let q = QMatrix::from_rows(vec![vec![-1.0, 1.0], vec![1.0, -1.0]]).unwrap();
        (space, SemigroupOperator::matrix_exp(space, q).unwrap())
    }

    fn indicator0(space: StateSpace) -> TestFunction {
        TestFunction::from_values(space, "1{x=a}", vec![1.0, 0.0], 1.0).unwrap()
    }

    #[test]
    fn two_state_transition_probabilities() {
        let (space, op) = two_state();
        let f = indicator0(space);
        let t = 2f64.ln() / 2.0;
        let sf = op.apply(t, &f).unwrap();
        assert_abs_diff_eq!(sf.value(0), 0.75, epsilon = 1e-12);
        assert_abs_diff_eq!(sf.value(1), 0.25, epsilon = 1e-12);
        // t = 0 is the identity
        let s0 = op.apply(0.0, &f).unwrap();
        assert_eq!(s0.values(), f.values());
        // constants are preserved exactly on conservative models
        let one = catalog::constant(space, 1.0).unwrap();
        for v in op.apply(1.7, &one).unwrap().values() {
            assert_abs_diff_eq!(*v, 1.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn positivity_and_contraction_on_random_inputs() {
        let space = StateSpace::finite(5).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        for _ in 0..20 {
            let mut rows = vec![vec![0.0; 5]; 5];
            for i in 0..5 {
                for j in 0..5 {
                    if i != j {
                        rows[i][j] = rng.gen::<f64>() * 2.0;
                    }
                }
                let s: f64 = rows[i].iter().sum();
                rows[i][i] = -s;
            }
            let op =
                SemigroupOperator::matrix_exp(space, QMatrix::from_rows(rows).unwrap()).unwrap();
            let values: Vec<f64> = (0..5).map(|_| rng.gen::<f64>() * 4.0 - 2.0).collect();
            let f = TestFunction::from_values(space, "f", values, 2.0).unwrap();
            let t = rng.gen::<f64>() * 3.0;
            let sf = op.apply(t, &f).unwrap();
            assert!(sf.sup_norm() <= f.sup_norm() + 1e-12, "contraction violated");
            let pos = TestFunction::from_values(
                space,
                "pos",
                f.values().iter().map(|v| v + 2.0).collect(),
                4.0,
            )
            .unwrap();
            assert!(
                op.apply(t, &pos).unwrap().values().iter().all(|v| *v >= -1e-13),
                "positivity violated"
            );
        }
    }

    #[test]
    fn dual_action_moves_mass_along_transition_rows() {
        let (space, op) = two_state();
        let t = 2f64.ln() / 2.0;
        let mu = SignedMeasure::delta(space, 0).unwrap();
        let moved = op.dual_apply(t, &mu).unwrap();
        assert_abs_diff_eq!(moved.weight_at(0), 0.75, epsilon = 1e-12);
        assert_abs_diff_eq!(moved.weight_at(1), 0.25, epsilon = 1e-12);
        assert!(moved.is_probability());
        // t = 0 is the identity
        let same = op.dual_apply(0.0, &mu).unwrap();
        assert_eq!(same.atoms(), mu.atoms());
    }

    #[test]
    fn duality_identity_on_random_inputs() {
        let space = StateSpace::finite(4).unwrap();
        let q = QMatrix::from_rows(vec![
            vec![-2.0, 1.0, 0.5, 0.5],
            vec![0.3, -0.9, 0.3, 0.3],
            vec![1.0, 0.0, -1.5, 0.5],
            vec![0.2, 0.2, 0.2, -0.6],
        ])
        .unwrap();
        let op = SemigroupOperator::matrix_exp(space, q).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        for _ in 0..10 {
            let f = TestFunction::from_values(
                space,
                "f",
                (0..4).map(|_| rng.gen::<f64>() * 2.0 - 1.0).collect(),
                1.0,
            )
            .unwrap();
            let mu = SignedMeasure::new(
                space,
                (0..4).map(|i| (i, rng.gen::<f64>() * 2.0 - 1.0)).collect::<Vec<_>>(),
            )
            .unwrap();
            let t = rng.gen::<f64>() * 2.0;
            let lhs = mu.pair(&op.apply(t, &f).unwrap()).unwrap();
            let rhs = op.dual_apply(t, &mu).unwrap().pair(&f).unwrap();
            assert_abs_diff_eq!(lhs, rhs, epsilon = 1e-10);
        }
    }

    #[test]
    fn mc_estimate_matches_exact_with_band() {
        let space = StateSpace::finite(2).unwrap();
        let q = QMatrix::from_rows(vec![vec![-1.0, 1.0], vec![1.0, -1.0]]).unwrap();
        let graph = build_ctmc(q).unwrap();
        let f = indicator0(space);
        let t = 2f64.ln() / 2.0;
        let est =
            mc_apply(&graph, SamplerKind::Chain, t, &f, 0, 100_000, 12, 0.99).unwrap();
        // σ = √(0.75·0.25) ≈ 0.433, z = 2.576: half width ≈ 0.00353
        assert!((est.half_width - 0.00353).abs() < 4e-4, "width {}", est.half_width);
        assert!(est.contains(0.75), "estimate {} ± {}", est.estimate, est.half_width);
    }

    #[test]
    fn mc_estimate_trivial_cases() {
        let space = StateSpace::finite(2).unwrap();
        let q = QMatrix::from_rows(vec![vec![-1.0, 1.0], vec![1.0, -1.0]]).unwrap();
        let graph = build_ctmc(q).unwrap();
        // constants come back exactly with zero width
        let c = catalog::constant(space, 2.5).unwrap();
        let est = mc_apply(&graph, SamplerKind::Chain, 1.0, &c, 0, 500, 3, 0.99).unwrap();
        assert_eq!(est.estimate, 2.5);
        assert_eq!(est.half_width, 0.0);
        // t = 0 returns f(x0) exactly
        let f = indicator0(space);
        let est = mc_apply(&graph, SamplerKind::Chain, 0.0, &f, 0, 500, 3, 0.99).unwrap();
        assert_eq!(est.estimate, 1.0);
        assert_eq!(est.half_width, 0.0);
        // sample gate
        assert!(mc_apply(&graph, SamplerKind::Chain, 1.0, &f, 0, 1, 3, 0.99).is_err());
    }

    #[test]
    fn law_check_passes_and_catches_the_skewed_control() {
        let (space, op) = two_state();
        let f = indicator0(space);
        let report = op.semigroup_law_check(0.3, 0.3, &f, 1e-10).unwrap();
        assert!(report.pass, "residual {}", report.residual);
        // s = 0 gives a zero residual up to machine precision
        let report = op.semigroup_law_check(0.0, 0.7, &f, 1e-13).unwrap();
        assert!(report.pass, "residual {}", report.residual);
        // the time-skewed control must fail
        let q = QMatrix::from_rows(vec![vec![-1.0, 1.0], vec![1.0, -1.0]]).unwrap();
        let bad = SemigroupOperator::corrupted_matrix_exp(space, q, 0.05).unwrap();
        let report = bad.semigroup_law_check(0.3, 0.3, &f, 1e-10).unwrap();
        assert!(!report.pass, "skewed backend slipped through: {}", report.residual);
        assert!(report.residual > 1e-3);
    }

    #[test]
    fn strong_continuity_two_state_reference_residual() {
        let (space, op) = two_state();
        let f = indicator0(space);
        let probe = space.exhaustion_member(1).unwrap();
        let report = op
            .strong_continuity_check(
                &f,
                0.0,
                0.01,
                &probe,
                1e-3,
                BetaHorizon { n_max: 10, m_max: 1 },
            )
            .unwrap();
        assert!(report.verdict.converges);
        // first schedule point is h = t_unit: residual (1 − e^{−0.02})/2
        let first = &report.curve[0];
        assert_abs_diff_eq!(first.h, 0.01, epsilon = 1e-15);
        assert_abs_diff_eq!(first.sup_residual, (1.0 - (-0.02f64).exp()) / 2.0,
            epsilon = 1e-12);
        // constants have zero residuals everywhere
        let one = catalog::constant(space, 1.0).unwrap();
        let report = op
            .strong_continuity_check(
                &one,
                0.0,
                0.01,
                &probe,
                1e-12,
                BetaHorizon { n_max: 5, m_max: 1 },
            )
            .unwrap();
        assert!(report.verdict.converges);
        assert!(report.curve.iter().all(|p| p.sup_residual <= 1e-12));
    }

    #[test]
    fn heat_flow_dichotomy_on_a_reduced_grid() {
        // sup-norm residual stays order one while the compact residual
        // vanishes: the counterexample dichotomy, on a smaller grid than
        // the acceptance gate uses
        let space = StateSpace::real_grid(40.0, 0.01).unwrap();
        let op = SemigroupOperator::heat_closed_form(space).unwrap();
        let f = catalog::sin_square(space).unwrap();
        let probe = space.ball(0.0, 3.0);
        let report = op
            .strong_continuity_check(
                &f,
                0.0,
                0.1,
                &probe,
                0.05,
                BetaHorizon { n_max: 8, m_max: 3 },
            )
            .unwrap();
        assert!(report.verdict.converges, "compact residuals must settle");
        for p in &report.curve {
            assert!(p.sup_residual >= 0.9, "sup residual {} at h={}", p.sup_residual, p.h);
        }
        let last = report.curve.last().unwrap();
        assert!(last.compact_residual < 0.05, "compact residual {}", last.compact_residual);
    }

    #[test]
    fn equicontinuity_on_the_heat_flow() {
        // f_n = min(|x|/n, 1) → 0 strictly; the flow residual on [−2, 2] up
        // to T = 1 is bounded by (2 + √(2/π))/n ≈ 0.0999 at n = 28
        let space = StateSpace::real_grid(40.0, 0.05).unwrap();
        let op = SemigroupOperator::heat_closed_form(space).unwrap();
        let zero = catalog::constant(space, 0.0).unwrap();
        let k = space.ball(0.0, 2.0);
        let t_grid = [0.0, 0.2, 0.5, 1.0];
        let report = op
            .local_equicontinuity_check(
                |n| catalog::min_abs_over(space, n as f64),
                &zero,
                &t_grid,
                &k,
                0.1,
                BetaHorizon { n_max: 28, m_max: 2 },
            )
            .unwrap();
        assert!(report.verdict, "last residual {}", report.residuals.last().unwrap());
        let last = *report.residuals.last().unwrap();
        assert!(last <= (2.0 + (2.0 / std::f64::consts::PI).sqrt()) / 28.0 + 1e-6);
        // the residuals decay roughly like 1/n
        assert!(report.residuals[0] > 5.0 * last);
    }

    #[test]
    fn equicontinuity_trivial_and_premise_gate() {
        let (space, op) = two_state();
        let f = indicator0(space);
        // constant sequence: residuals identically zero
        let report = op
            .local_equicontinuity_check(
                |_| Ok(f.clone()),
                &f,
                &[0.0, 0.5, 1.0],
                &space.exhaustion_member(1).unwrap(),
                1e-9,
                BetaHorizon { n_max: 4, m_max: 1 },
            )
            .unwrap();
        assert!(report.verdict);
        assert!(report.residuals.iter().all(|r| *r == 0.0));
        // a sequence that does not converge is refused
        let minus = f.scale(-1.0).unwrap();
        let err = op.local_equicontinuity_check(
            |_| Ok(minus.clone()),
            &f,
            &[0.5],
            &space.exhaustion_member(1).unwrap(),
            1e-3,
            BetaHorizon { n_max: 4, m_max: 1 },
        );
        assert!(matches!(err, Err(Error::Precondition(_))));
    }

    #[test]
    fn generator_recovery_two_state() {
        let (space, op) = two_state();
        let f = indicator0(space);
        let g = TestFunction::from_values(space, "Qf", vec![-1.0, 1.0], 1.0).unwrap();
        let schedule: Vec<f64> = (4..=14).map(|k| 2f64.powi(-k)).collect();
        let report = op.generator_limit_check(&f, &g, &schedule, 1, 1e-2).unwrap();
        assert!(report.verdict);
        assert!(report.sup_ok);
        // residual at t = 2⁻⁴ ≈ (2t − 1 + e^{−2t})/(2t), and residual/t → 1
        let (t0, r0) = report.curve[0];
        let expected = (2.0 * t0 - 1.0 + (-2.0 * t0).exp()) / (2.0 * t0);
        assert_abs_diff_eq!(r0, expected, epsilon = 1e-12);
        let (t_last, r_last) = *report.curve.last().unwrap();
        assert!((r_last / t_last - 1.0).abs() < 0.1, "slope {}", r_last / t_last);
        assert!((report.slope - 1.0).abs() < 0.1, "fit slope {}", report.slope);
    }

    #[test]
    fn generator_recovery_rejects_wrong_generator() {
        let (space, op) = two_state();
        let f = indicator0(space);
        // claim 2Qf instead of Qf: the residual tends to ‖Qf‖ = 1
        let wrong = TestFunction::from_values(space, "2Qf", vec![-2.0, 2.0], 2.0).unwrap();
        let schedule: Vec<f64> = (4..=14).map(|k| 2f64.powi(-k)).collect();
        let report = op.generator_limit_check(&f, &wrong, &schedule, 1, 1e-2).unwrap();
        assert!(!report.verdict);
        let (_, r_last) = *report.curve.last().unwrap();
        assert!((r_last - 1.0).abs() < 0.01, "residual {r_last}");
        // conservative constants recover the zero generator exactly
        let one = catalog::constant(space, 1.0).unwrap();
        let zero = catalog::constant(space, 0.0).unwrap();
        let report = op.generator_limit_check(&one, &zero, &schedule, 1, 1e-9).unwrap();
        assert!(report.verdict);
        assert!(report.curve.iter().all(|(_, r)| *r <= 1e-11));
    }

    #[test]
    fn monotone_limits_are_preserved() {
        // 0 ≤ f_n ↑ f pointwise forces S(t)f_n ↑ S(t)f pointwise
        let (space, op) = two_state();
        let f = TestFunction::from_values(space, "f", vec![1.0, 0.5], 1.0).unwrap();
        let t = 0.8;
        let sf = op.apply(t, &f).unwrap();
        let mut prev = vec![f64::NEG_INFINITY; 2];
        for n in 1..=6 {
            let fn_scaled = f.scale(1.0 - 1.0 / n as f64).unwrap();
            let sfn = op.apply(t, &fn_scaled).unwrap();
            for i in 0..2 {
                assert!(sfn.value(i) >= prev[i] - 1e-14, "not monotone at {i}");
                assert!(sfn.value(i) <= sf.value(i) + 1e-14, "exceeds the limit at {i}");
                prev[i] = sfn.value(i);
            }
        }
    }

    #[test]
    fn monte_carlo_backend_refuses_exact_operations() {
        let space = StateSpace::finite(2).unwrap();
        let q = QMatrix::from_rows(vec![vec![-1.0, 1.0], vec![1.0, -1.0]]).unwrap();
        let graph = build_ctmc(q).unwrap();
        let op = SemigroupOperator::monte_carlo(graph, SamplerKind::Chain, 100, 1).unwrap();
        let f = indicator0(space);
        let mu = SignedMeasure::delta(space, 0).unwrap();
        assert!(matches!(op.apply(1.0, &f), Err(Error::UnsupportedBackend(_))));
        assert!(matches!(op.dual_apply(1.0, &mu), Err(Error::UnsupportedBackend(_))));
        assert!(matches!(
            op.semigroup_law_check(0.1, 0.1, &f, 1e-6),
            Err(Error::UnsupportedBackend(_))
        ));
        // and the exact backends refuse the estimator
        let (_, exact) = two_state();
        assert!(matches!(
            exact.mc_estimate(1.0, &f, 0, 0.99),
            Err(Error::UnsupportedBackend(_))
        ));
    }
}
