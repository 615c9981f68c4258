//! Restriction and extension between the bounded continuous functions and
//! the functions vanishing at infinity, made operational: a semigroup that
//! maps vanishing functions to vanishing functions with sup-norm strong
//! continuity restricts to the smaller space; conservativity of the dual
//! extends it back uniquely, realized here by cutoff approximation
//! `S(t)f = lim_m S(t)(f·χ_m)`; and the restricted generator determines the
//! full one (core property), checked as strict-topology convergence of both
//! `f·χ_k → f` and `A(f·χ_k) → Af`.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::func::{beta_converges, BetaHorizon, BetaVerdict, TestFunction};
use crate::generator::GeneratorGraph;
use crate::measure::SignedMeasure;
use crate::semigroup::SemigroupOperator;
use crate::space::StateSpace;
use crate::catalog;

/// An increasing family of cutoffs `χ_m`: 1 on `K_m`, 0 outside `K_{m+1}`.
/// Members are built on demand. [`validate`](Self::validate) certifies the
/// defining properties up to an index; checks that must survive adversarial
/// families (the core check) accept unvalidated ones and let the verdict
/// speak.
#[derive(Clone)]
pub struct CutoffFamily {
    space: StateSpace,
    label: String,
    builder: Arc<dyn Fn(usize) -> Result<TestFunction> + Send + Sync>,
    validated_to: usize,
}

impl CutoffFamily {
    /// Piecewise-linear cutoffs from the catalog.
    pub fn linear(space: StateSpace) -> Self {
        Self {
            space,
            label: "linear".into(),
            builder: Arc::new(move |m| catalog::cutoff_linear(space, m)),
            validated_to: 0,
        }
    }

    /// Smoothstep cutoffs from the catalog.
    pub fn smooth(space: StateSpace) -> Self {
        Self {
            space,
            label: "smooth".into(),
            builder: Arc::new(move |m| catalog::cutoff_smooth(space, m)),
            validated_to: 0,
        }
    }

    /// Arbitrary family, for negative controls and experiments. Carries no
    /// certification until [`validate`](Self::validate) passes.
    pub fn custom<F>(space: StateSpace, label: impl Into<String>, builder: F) -> Self
    where
        F: Fn(usize) -> Result<TestFunction> + Send + Sync + 'static,
    {
        Self { space, label: label.into(), builder: Arc::new(builder), validated_to: 0 }
    }

    pub fn space(&self) -> &StateSpace {
        &self.space
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    /// The `m`-th cutoff (`m ≥ 1`).
    pub fn member(&self, m: usize) -> Result<TestFunction> {
        if m == 0 {
            return Err(Error::Domain("cutoff index starts at 1".into()));
        }
        let chi = (self.builder)(m)?;
        if chi.space() != &self.space {
            return Err(Error::Validation(format!(
                "cutoff family '{}' built a member on the wrong space",
                self.label
            )));
        }
        Ok(chi)
    }

    /// Index up to which [`validate`](Self::validate) has certified the
    /// family (0 when never validated).
    pub fn validated_to(&self) -> usize {
        self.validated_to
    }

    /// Certifies, for every `m ≤ horizon`: values in [0,1], `χ_m = 1` on
    /// `K_m`, `χ_m = 0` outside `K_{m+1}`, pointwise monotone in `m`, and
    /// the vanishing flag on spaces where it is meaningful.
    pub fn validate(&mut self, horizon: usize) -> Result<()> {
        if horizon == 0 {
            return Err(Error::Validation("validation horizon starts at 1".into()));
        }
        let mut prev: Option<TestFunction> = None;
        for m in 1..=horizon {
            let chi = self.member(m)?;
            let inner = self.space.exhaustion_member(m)?;
            let outer = self.space.exhaustion_member(m + 1)?;
            for i in self.space.points() {
                let v = chi.value(i);
                if !(0.0..=1.0).contains(&v) {
                    return Err(Error::Validation(format!(
                        "cutoff {m} of family '{}' leaves [0,1] at point {i}: {v}",
                        self.label
                    )));
                }
                if inner.contains(i) && v != 1.0 {
                    return Err(Error::Validation(format!(
                        "cutoff {m} of family '{}' is {v} inside K_{m} at point {i}",
                        self.label
                    )));
                }
                if !outer.contains(i) && v != 0.0 {
                    return Err(Error::Validation(format!(
                        "cutoff {m} of family '{}' is {v} outside K_{} at point {i}",
                        self.label,
                        m + 1
                    )));
                }
                if let Some(p) = &prev {
                    if v < p.value(i) - 1e-12 {
                        return Err(Error::Validation(format!(
                            "family '{}' is not monotone at point {i} between cutoffs {} and {m}",
                            self.label,
                            m - 1
                        )));
                    }
                }
            }
            if self.space.is_locally_compact_noncompact()
                && m + 1 < self.space.saturation_index()
                && !chi.is_vanishing()
            {
                return Err(Error::Validation(format!(
                    "cutoff {m} of family '{}' lacks the vanishing flag",
                    self.label
                )));
            }
            prev = Some(chi);
        }
        self.validated_to = horizon;
        Ok(())
    }
}

impl std::fmt::Debug for CutoffFamily {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("CutoffFamily")
            .field("label", &self.label)
            .field("validated_to", &self.validated_to)
            .finish()
    }
}

/// One schedule point of a restriction check.
#[derive(Clone, Copy, Debug)]
pub struct RestrictPoint {
    pub t: f64,
    /// Whether `S(t)f` passed the vanishing-at-infinity validation.
    pub vanishing_ok: bool,
    /// `‖S(t)f − f‖`.
    pub sup_residual: f64,
}

/// Outcome of a restriction check.
#[derive(Clone, Debug)]
pub struct RestrictReport {
    pub verdict: bool,
    pub points: Vec<RestrictPoint>,
    pub tol: f64,
}

/// Checks that the semigroup restricts to the functions vanishing at
/// infinity with sup-norm strong continuity: along the (decreasing) time
/// schedule, `S(t)f` keeps vanishing at infinity and `‖S(t)f − f‖` settles
/// at or below `tol` by the final point.
pub fn restrict_check(
    s: &SemigroupOperator,
    f: &TestFunction,
    t_schedule: &[f64],
    tol: f64,
) -> Result<RestrictReport> {
    if !s.space().is_locally_compact_noncompact() {
        return Err(Error::Validation(
            "restriction is trivial on a compact (finite) space; nothing to check".into(),
        ));
    }
    if !f.is_vanishing() {
        return Err(Error::Precondition(format!(
            "function '{}' lacks the vanishing flag; restrict_check only applies inside \
             the vanishing subspace",
            f.name()
        )));
    }
    if t_schedule.is_empty() || t_schedule.iter().any(|t| !(*t >= 0.0) || !t.is_finite()) {
        return Err(Error::Validation("the schedule needs times >= 0".into()));
    }
    if !(tol > 0.0) {
        return Err(Error::Validation("tolerance must be positive".into()));
    }
    let mut points = Vec::with_capacity(t_schedule.len());
    for &t in t_schedule {
        let sf = s.apply(t, f)?;
        let vanishing_ok = sf.clone().declare_vanishing().is_ok();
        points.push(RestrictPoint { t, vanishing_ok, sup_residual: sf.sub(f)?.sup_norm() });
    }
    let verdict = points.iter().all(|p| p.vanishing_ok)
        && points.last().is_some_and(|p| p.sup_residual <= tol);
    Ok(RestrictReport { verdict, points, tol })
}

/// One (measure, time) row of a mass-conservation check.
#[derive(Clone, Copy, Debug)]
pub struct MassPoint {
    pub measure_index: usize,
    pub t: f64,
    pub mass: f64,
    pub min_weight: f64,
    pub pass: bool,
}

/// Outcome of a mass-conservation check on the dual semigroup.
#[derive(Clone, Debug)]
pub struct MassReport {
    pub verdict: bool,
    pub points: Vec<MassPoint>,
    pub tol: f64,
    /// Largest observed deviation of the total mass from 1.
    pub worst_defect: f64,
}

/// Checks that the dual semigroup maps probability measures to probability
/// measures: for every measure and schedule time, the transported measure
/// keeps total mass 1 within `tol` and weights above `−tol`.
pub fn mass_conservation_check(
    s: &SemigroupOperator,
    mus: &[SignedMeasure],
    t_schedule: &[f64],
    tol: f64,
) -> Result<MassReport> {
    if mus.is_empty() {
        return Err(Error::Validation("the mass check needs at least one measure".into()));
    }
    if t_schedule.is_empty() {
        return Err(Error::Validation("the mass check needs at least one time".into()));
    }
    if !(tol > 0.0) {
        return Err(Error::Validation("tolerance must be positive".into()));
    }
    for mu in mus {
        if !mu.is_probability() {
            return Err(Error::Precondition(
                "mass conservation is asserted for probability measures only".into(),
            ));
        }
    }
    let mut points = Vec::new();
    let mut worst = 0.0f64;
    for (idx, mu) in mus.iter().enumerate() {
        for &t in t_schedule {
            let moved = s.dual_apply(t, mu)?;
            let mass = moved.total_mass();
            let min_weight =
                moved.atoms().iter().map(|(_, w)| *w).fold(f64::INFINITY, f64::min);
            let min_weight = if min_weight.is_finite() { min_weight } else { 0.0 };
            let pass = (mass - 1.0).abs() <= tol && min_weight >= -tol;
            worst = worst.max((mass - 1.0).abs());
            points.push(MassPoint { measure_index: idx, t, mass, min_weight, pass });
        }
    }
    Ok(MassReport { verdict: points.iter().all(|p| p.pass), points, tol, worst_defect: worst })
}

/// Convergence trace of a cutoff extension: per iteration, the worst
/// compact-seminorm gap to the previous iterate.
#[derive(Clone, Debug)]
pub struct ExtensionTrace {
    /// `(m, max_{j ≤ seminorm_horizon} p_{K_j}(g_m − g_{m−1}))`, starting
    /// at the second iterate.
    pub rows: Vec<(usize, f64)>,
    pub seminorm_horizon: usize,
    pub tol: f64,
}

impl ExtensionTrace {
    /// Trace rows as CSV: `m,residual`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("m,residual\n");
        for (m, r) in &self.rows {
            out.push_str(&format!("{m},{r}\n"));
        }
        out
    }
}

/// Extends the restricted semigroup back to a bounded function `f` by
/// cutoff approximation: iterates `g_m = S(t)(f·χ_m)` until successive
/// iterates agree within `tol` in every `p_{K_j}`, `j ≤ seminorm_horizon`.
/// Mass conservation of the model is re-checked first (the extension is
/// only unique for conservative duals).
pub fn extend_apply(
    s: &SemigroupOperator,
    t: f64,
    f: &TestFunction,
    cutoffs: &CutoffFamily,
    tol: f64,
    cutoff_horizon: usize,
    seminorm_horizon: usize,
) -> Result<(TestFunction, ExtensionTrace)> {
    if !s.space().is_locally_compact_noncompact() {
        return Err(Error::Validation(
            "extension is trivial on a compact (finite) space; nothing to check".into(),
        ));
    }
    if cutoffs.space() != s.space() {
        return Err(Error::Domain("cutoff family lives on a different space".into()));
    }
    if !(tol > 0.0) || cutoff_horizon < 2 || seminorm_horizon == 0 {
        return Err(Error::Validation(
            "need tol > 0, a cutoff horizon of at least 2 and a seminorm horizon of at \
             least 1"
                .into(),
        ));
    }
    // conservativity gate: a leaking dual has no unique extension
    let probe = SignedMeasure::delta(*s.space(), 0)?;
    let mass = mass_conservation_check(s, &[probe], &[t], 1e-12)?;
    if !mass.verdict {
        return Err(Error::Precondition(format!(
            "mass conservation fails at t={t} (worst defect {:.3e}); the extension is \
             only unique for conservative models",
            mass.worst_defect
        )));
    }
    let compacts: Vec<_> = (1..=seminorm_horizon)
        .map(|j| s.space().exhaustion_member(j))
        .collect::<Result<_>>()?;
    let mut trace = ExtensionTrace { rows: Vec::new(), seminorm_horizon, tol };
    let mut prev: Option<TestFunction> = None;
    for m in 1..=cutoff_horizon {
        let chi = cutoffs.member(m)?;
        let g = s.apply(t, &f.mul(&chi)?)?;
        if let Some(p) = &prev {
            let diff = g.sub(p)?;
            let mut residual = 0.0f64;
            for k in &compacts {
                residual = residual.max(diff.compact_seminorm(k)?);
            }
            trace.rows.push((m, residual));
            if residual <= tol {
                return Ok((g, trace));
            }
        }
        prev = Some(g);
    }
    let (last_index, last_residual) =
        trace.rows.last().copied().unwrap_or((cutoff_horizon, f64::INFINITY));
    Err(Error::CutoffHorizon { last_index, last_residual, tol })
}

/// Outcome of a core check: both approximation sequences with their
/// strict-topology verdicts.
#[derive(Clone, Debug)]
pub struct CoreReport {
    pub verdict: bool,
    /// Verdict for `f·χ_k → f`.
    pub function_limit: BetaVerdict,
    /// Verdict for `A(f·χ_k) → Af`.
    pub image_limit: BetaVerdict,
}

/// Checks that vanishing-support approximants determine the generator on
/// `f`: both `f·χ_k → f` and `A(f·χ_k) → Af` must converge in the strict
/// topology at the horizon. Accepts unvalidated cutoff families so that
/// adversarial controls produce a false verdict rather than an error.
pub fn core_check(
    a: &GeneratorGraph,
    f: &TestFunction,
    cutoffs: &CutoffFamily,
    tol: f64,
    horizon: BetaHorizon,
) -> Result<CoreReport> {
    if !a.is_conservative() {
        return Err(Error::Precondition(
            "the core check applies to conservative generators".into(),
        ));
    }
    if cutoffs.space() != a.space() {
        return Err(Error::Domain("cutoff family lives on a different space".into()));
    }
    let af = a.apply(f)?;
    let approximant = |k: usize| -> Result<TestFunction> {
        f.mul(&cutoffs.member(k)?)
            .map_err(|e| Error::Domain(format!("approximant {k} failed: {e}")))
    };
    let function_limit = beta_converges(approximant, f, tol, horizon)?;
    let image_limit = beta_converges(
        |k| {
            a.apply(&approximant(k)?)
                .map_err(|e| Error::Domain(format!("generator image {k} failed: {e}")))
        },
        &af,
        tol,
        horizon,
    )?;
    Ok(CoreReport {
        verdict: function_limit.converges && image_limit.converges,
        function_limit,
        image_limit,
    })
}
