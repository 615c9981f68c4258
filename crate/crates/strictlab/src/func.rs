//! Bounded test functions and the three seminorm families that generate the
//! topologies of interest: the uniform norm, the compact-open seminorms
//! `p_K(f) = sup_{x in K} |f|`, the strict seminorms
//! `p_{K_n,a_n}(f) = sup_n a_n p_{K_n}(f)` with weights `a_n → 0`, and the
//! weighted seminorms `p_g(f) = ‖f·g‖` for weights `g` with compact
//! super-level sets.
//!
//! Also hosts the finite-horizon classifier for convergence in the strict
//! topology, the monotone (Dini) variant, and a least-squares density probe
//! for algebras of test functions.

use std::fmt;
use std::sync::Arc;

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::space::{CompactSet, StateSpace};

/// How a function's values were produced.
///
/// `Analytic` carries a global formula that is meaningful off the represented
/// grid as well; integral transforms (heat flow quadrature) require it.
#[derive(Clone)]
pub enum EvalRule {
    /// `f(x) = sin(x²)`; kept distinct because its heat flow has a closed
    /// form.
    SinSquare,
    /// A global formula, evaluable at any real coordinate.
    Analytic(Arc<dyn Fn(f64) -> f64 + Send + Sync>),
    /// Values known only at the represented points.
    Tabulated,
}

impl EvalRule {
    /// The global formula, when one is known.
    pub fn closure(&self) -> Option<Arc<dyn Fn(f64) -> f64 + Send + Sync>> {
        match self {
            EvalRule::SinSquare => Some(Arc::new(|x: f64| (x * x).sin())),
            EvalRule::Analytic(f) => Some(Arc::clone(f)),
            EvalRule::Tabulated => None,
        }
    }
}

impl fmt::Debug for EvalRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EvalRule::SinSquare => write!(f, "SinSquare"),
            EvalRule::Analytic(_) => write!(f, "Analytic"),
            EvalRule::Tabulated => write!(f, "Tabulated"),
        }
    }
}

/// A bounded function on a [`StateSpace`], tabulated at the represented
/// points, with a declared norm bound and an optional declaration that the
/// function vanishes at infinity.
///
/// Immutable; all operations return new functions.
#[derive(Clone, Debug)]
pub struct TestFunction {
    space: StateSpace,
    name: String,
    values: Vec<f64>,
    bound: f64,
    vanishing: bool,
    rule: EvalRule,
}

impl TestFunction {
    /// Build from explicit values. The declared bound must dominate every
    /// value.
    pub fn from_values(
        space: StateSpace,
        name: impl Into<String>,
        values: Vec<f64>,
        bound: f64,
    ) -> Result<Self> {
        Self::build(space, name.into(), values, bound, EvalRule::Tabulated)
    }

    /// Build by tabulating a global formula at the represented coordinates.
    pub fn from_fn<F>(space: StateSpace, name: impl Into<String>, bound: f64, f: F) -> Result<Self>
    where
        F: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        let values: Vec<f64> = space.points().map(|i| f(space.coord(i))).collect();
        Self::build(space, name.into(), values, bound, EvalRule::Analytic(Arc::new(f)))
    }

    pub(crate) fn build(
        space: StateSpace,
        name: String,
        values: Vec<f64>,
        bound: f64,
        rule: EvalRule,
    ) -> Result<Self> {
        if values.len() != space.len() {
            return Err(Error::Validation(format!(
                "function '{name}' has {} values but the space has {} points",
                values.len(),
                space.len()
            )));
        }
        if !bound.is_finite() || bound < 0.0 {
            return Err(Error::Validation(format!(
                "function '{name}' has a non-finite or negative norm bound {bound}"
            )));
        }
        let slack = 1e-12 * bound.max(1.0);
        for (i, v) in values.iter().enumerate() {
            if !v.is_finite() {
                return Err(Error::Validation(format!(
                    "function '{name}' is non-finite at point {i}"
                )));
            }
            if v.abs() > bound + slack {
                return Err(Error::Validation(format!(
                    "function '{name}' violates its declared bound {bound} at point {i}: |{v}|"
                )));
            }
        }
        Ok(Self { space, name, values, bound, vanishing: false, rule })
    }

    /// Assert that this function vanishes at infinity. The assertion is
    /// validated on the represented points: for each sampled level
    /// `α ∈ {s/2, s/10, s/100}` (with `s` the attained sup) the super-level
    /// set `{|f| ≥ α}` must fit inside an exhaustion element strictly below
    /// the saturation index. Compact spaces pass trivially.
    pub fn declare_vanishing(mut self) -> Result<Self> {
        check_super_level_condition(&self, "function")?;
        self.vanishing = true;
        Ok(self)
    }

    /// Same check as [`declare_vanishing`](Self::declare_vanishing) but
    /// reports the outcome instead of failing.
    pub fn vanishes_at_infinity(&self) -> bool {
        check_super_level_condition(self, "function").is_ok()
    }

    /// Re-declare the norm bound. Still must dominate the values.
    pub fn with_bound(mut self, bound: f64) -> Result<Self> {
        let s = self.sup_norm();
        if !bound.is_finite() || bound < s {
            return Err(Error::Validation(format!(
                "bound {bound} does not dominate attained sup {s} of '{}'",
                self.name
            )));
        }
        self.bound = bound;
        Ok(self)
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub(crate) fn with_rule(mut self, rule: EvalRule) -> Self {
        self.rule = rule;
        self
    }

    pub fn space(&self) -> &StateSpace {
        &self.space
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn value(&self, i: usize) -> f64 {
        self.values[i]
    }

    /// Declared norm bound `B ≥ sup |f|`.
    pub fn bound(&self) -> f64 {
        self.bound
    }

    pub fn is_vanishing(&self) -> bool {
        self.vanishing
    }

    pub fn rule(&self) -> &EvalRule {
        &self.rule
    }

    /// Attained uniform norm over the represented points.
    pub fn sup_norm(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    /// Compact-open seminorm `p_K(f) = sup_{x ∈ K} |f(x)|`.
    /// The empty set gives 0 by convention.
    pub fn compact_seminorm(&self, k: &CompactSet) -> Result<f64> {
        self.same_space_as_set(k)?;
        Ok(k.indices().fold(0.0, |m, i| m.max(self.values[i].abs())))
    }

    /// Strict seminorm `sup_n a_n · p_{K_n}(f)` over the declared pairs.
    pub fn strict_seminorm(&self, s: &StrictSeminorm) -> Result<f64> {
        if *s.space() != self.space {
            return Err(Error::Domain(format!(
                "seminorm and function '{}' live on different spaces",
                self.name
            )));
        }
        let mut out = 0.0f64;
        for (k, a) in s.pairs() {
            out = out.max(a * self.compact_seminorm(k)?);
        }
        Ok(out)
    }

    /// Weighted seminorm `p_g(f) = ‖f·g‖` for a weight `g` whose sampled
    /// super-level sets are compact (fit inside proper exhaustion elements).
    pub fn weighted_seminorm(&self, g: &TestFunction) -> Result<f64> {
        self.same_space(g)?;
        check_super_level_condition(g, "weight")?;
        Ok(self
            .values
            .iter()
            .zip(&g.values)
            .fold(0.0f64, |m, (a, b)| m.max((a * b).abs())))
    }

    /// Pointwise sum; bounds add, vanishing declarations must both hold.
    pub fn add(&self, other: &TestFunction) -> Result<TestFunction> {
        self.combine(other, |a, b| a + b, format!("{}+{}", self.name, other.name))
    }

    /// Pointwise difference.
    pub fn sub(&self, other: &TestFunction) -> Result<TestFunction> {
        self.combine(other, |a, b| a - b, format!("{}-{}", self.name, other.name))
    }

    /// Pointwise product; the product is declared vanishing when either
    /// factor is (a C₀ function times a bounded function stays in C₀).
    pub fn mul(&self, other: &TestFunction) -> Result<TestFunction> {
        self.same_space(other)?;
        let values: Vec<f64> =
            self.values.iter().zip(&other.values).map(|(a, b)| a * b).collect();
        let rule = match (self.rule.closure(), other.rule.closure()) {
            (Some(f), Some(g)) => EvalRule::Analytic(Arc::new(move |x| f(x) * g(x))),
            _ => EvalRule::Tabulated,
        };
        let mut out = TestFunction::build(
            self.space,
            format!("{}*{}", self.name, other.name),
            values,
            self.bound * other.bound,
            rule,
        )?;
        out.vanishing = self.vanishing || other.vanishing;
        Ok(out)
    }

    /// Scalar multiple.
    pub fn scale(&self, lambda: f64) -> Result<TestFunction> {
        if !lambda.is_finite() {
            return Err(Error::Validation("scale factor must be finite".into()));
        }
        let values: Vec<f64> = self.values.iter().map(|v| lambda * v).collect();
        let rule = match self.rule.closure() {
            Some(f) => EvalRule::Analytic(Arc::new(move |x| lambda * f(x))),
            None => EvalRule::Tabulated,
        };
        let mut out = TestFunction::build(
            self.space,
            format!("{}*{}", lambda, self.name),
            values,
            lambda.abs() * self.bound,
            rule,
        )?;
        out.vanishing = self.vanishing;
        Ok(out)
    }

    fn combine(
        &self,
        other: &TestFunction,
        op: impl Fn(f64, f64) -> f64 + Copy + Send + Sync + 'static,
        name: String,
    ) -> Result<TestFunction> {
        self.same_space(other)?;
        let values: Vec<f64> =
            self.values.iter().zip(&other.values).map(|(a, b)| op(*a, *b)).collect();
        let rule = match (self.rule.closure(), other.rule.closure()) {
            (Some(f), Some(g)) => EvalRule::Analytic(Arc::new(move |x| op(f(x), g(x)))),
            _ => EvalRule::Tabulated,
        };
        let mut out =
            TestFunction::build(self.space, name, values, self.bound + other.bound, rule)?;
        out.vanishing = self.vanishing && other.vanishing;
        Ok(out)
    }

    pub(crate) fn same_space(&self, other: &TestFunction) -> Result<()> {
        if self.space != other.space {
            return Err(Error::Domain(format!(
                "functions '{}' and '{}' live on different spaces",
                self.name, other.name
            )));
        }
        Ok(())
    }

    fn same_space_as_set(&self, k: &CompactSet) -> Result<()> {
        if *k.space() != self.space {
            return Err(Error::Domain(format!(
                "compact set and function '{}' live on different spaces",
                self.name
            )));
        }
        Ok(())
    }
}

/// Validate that every sampled super-level set `{|f| ≥ α}` fits inside an
/// exhaustion element strictly below the saturation index. On compact
/// (finite) spaces the condition is vacuous. The sampled levels are
/// `{s/2, s/10, s/100}` for `s = sup |f|`.
///
/// The strict-inequality reading is deliberate: the saturated element stands
/// for the whole (non-compact) underlying space, so a set that only fits
/// there has not witnessed compact containment.
fn check_super_level_condition(f: &TestFunction, role: &str) -> Result<()> {
    let space = f.space;
    if !space.is_locally_compact_noncompact() {
        return Ok(());
    }
    let s = f.sup_norm();
    if s == 0.0 {
        return Ok(());
    }
    let sat = space.saturation_index();
    for alpha in [s / 2.0, s / 10.0, s / 100.0] {
        let mut cover = 0usize;
        for i in space.points() {
            if f.values[i].abs() >= alpha {
                cover = cover.max(space.min_exhaustion_index_containing(i));
            }
        }
        if cover >= sat {
            return Err(Error::Validation(format!(
                "{role} '{}' fails the compact super-level condition at alpha = {alpha}: \
                 the set {{|f| >= alpha}} only fits in the saturated exhaustion element K_{sat}",
                f.name
            )));
        }
    }
    Ok(())
}

/// The pairs `(K_n, a_n)` of a strict seminorm: exhaustion elements with
/// non-negative weights that decay along the represented indices.
#[derive(Clone, Debug)]
pub struct StrictSeminorm {
    space: StateSpace,
    pairs: Vec<(CompactSet, f64)>,
}

impl StrictSeminorm {
    /// Pair the first `weights.len()` exhaustion elements with the given
    /// weights. Weights must be non-negative, finite, and decay: for each
    /// threshold `τ ∈ {max/2, max/10, max/100}` some suffix of the list must
    /// sit entirely below `τ`.
    pub fn new(space: StateSpace, weights: &[f64]) -> Result<Self> {
        if weights.is_empty() {
            return Err(Error::Validation("strict seminorm needs at least one weight".into()));
        }
        let mut amax = 0.0f64;
        for (i, a) in weights.iter().enumerate() {
            if !a.is_finite() || *a < 0.0 {
                return Err(Error::Validation(format!(
                    "seminorm weight a_{} = {a} is negative or non-finite",
                    i + 1
                )));
            }
            amax = amax.max(*a);
        }
        if amax > 0.0 {
            let last = *weights.last().expect("non-empty");
            for tau in [amax / 2.0, amax / 10.0, amax / 100.0] {
                if last > tau {
                    return Err(Error::Validation(format!(
                        "seminorm weights do not decay below threshold {tau} \
                         within the represented indices (last weight {last})"
                    )));
                }
            }
        }
        let mut pairs = Vec::with_capacity(weights.len());
        for (i, a) in weights.iter().enumerate() {
            pairs.push((space.exhaustion_member(i + 1)?, *a));
        }
        Ok(Self { space, pairs })
    }

    pub fn space(&self) -> &StateSpace {
        &self.space
    }

    pub fn pairs(&self) -> &[(CompactSet, f64)] {
        &self.pairs
    }

    /// Largest weight; `strict_seminorm(f) ≤ max_weight · sup_norm(f)`.
    pub fn max_weight(&self) -> f64 {
        self.pairs.iter().fold(0.0, |m, (_, a)| m.max(*a))
    }
}

/// Finite horizon for the strict-convergence classifier: sequence indices
/// `1..=n_max` and exhaustion indices `1..=m_max`.
#[derive(Clone, Copy, Debug)]
pub struct BetaHorizon {
    pub n_max: usize,
    pub m_max: usize,
}

/// Residual record for one exhaustion element `K_m`.
#[derive(Clone, Debug)]
pub struct CompactResidual {
    /// Exhaustion index `m`.
    pub index: usize,
    /// Smallest `N` such that `p_{K_m}(f_n − f) ≤ tol` for every
    /// `n ∈ [N, n_max]`, when such an `N` exists.
    pub tail_start: Option<usize>,
    /// Sup of the residuals over that settled tail, or the residual at
    /// `n_max` when no tail settles.
    pub tail_sup: f64,
    /// Residual of the last sequence member, `p_{K_m}(f_{n_max} − f)`.
    pub last: f64,
}

/// Outcome of the finite-horizon strict-convergence check.
#[derive(Clone, Debug)]
pub struct BetaVerdict {
    /// True when the norm witness is finite and every compact residual
    /// settles below tolerance within the horizon.
    pub converges: bool,
    /// Largest attained sup-norm along the sequence.
    pub norm_bound_witness: f64,
    /// One record per exhaustion index `1..=m_max`.
    pub residuals: Vec<CompactResidual>,
}

/// Classify convergence of `f_n → f` in the strict topology at a finite
/// horizon.
///
/// On norm-bounded sets the strict topology coincides with uniform
/// convergence on compacts, so the check is: the attained sup-norms stay
/// finite, and on each `K_m` (for `m ≤ m_max`) the residuals
/// `p_{K_m}(f_n − f)` settle at or below `tol` from some index on.
///
/// `seq(n)` is called once for each `n = 1..=n_max`, in order.
pub fn beta_converges<F>(
    mut seq: F,
    limit: &TestFunction,
    tol: f64,
    horizon: BetaHorizon,
) -> Result<BetaVerdict>
where
    F: FnMut(usize) -> Result<TestFunction>,
{
    if !(tol > 0.0) {
        return Err(Error::Validation("tolerance must be positive".into()));
    }
    if horizon.n_max == 0 || horizon.m_max == 0 {
        return Err(Error::Validation("horizon indices start at 1".into()));
    }
    let compacts: Vec<CompactSet> = (1..=horizon.m_max)
        .map(|m| limit.space().exhaustion_member(m))
        .collect::<Result<_>>()?;
    let mut witness = 0.0f64;
    // residual matrix r[m][n-1] = p_{K_m}(f_n − f)
    let mut r = vec![vec![0.0f64; horizon.n_max]; horizon.m_max];
    for n in 1..=horizon.n_max {
        let fnn = seq(n)?;
        limit.same_space(&fnn)?;
        witness = witness.max(fnn.sup_norm());
        for (row, k) in r.iter_mut().zip(&compacts) {
            let mut sup = 0.0f64;
            for i in k.indices() {
                sup = sup.max((fnn.values[i] - limit.values[i]).abs());
            }
            row[n - 1] = sup;
        }
    }
    let mut residuals = Vec::with_capacity(horizon.m_max);
    let mut all_settle = true;
    for (m, row) in r.iter().enumerate() {
        // longest suffix staying at or below tol
        let mut start = None;
        let mut tail_sup = 0.0f64;
        for n in (1..=horizon.n_max).rev() {
            if row[n - 1] <= tol {
                tail_sup = tail_sup.max(row[n - 1]);
                start = Some(n);
            } else {
                break;
            }
        }
        if start.is_none() {
            tail_sup = row[horizon.n_max - 1];
            all_settle = false;
        }
        residuals.push(CompactResidual {
            index: m + 1,
            tail_start: start,
            tail_sup,
            last: row[horizon.n_max - 1],
        });
    }
    Ok(BetaVerdict { converges: witness.is_finite() && all_settle, norm_bound_witness: witness, residuals })
}

/// Monotone-convergence (Dini) variant of [`beta_converges`].
///
/// Validates on the represented points that the sequence is pointwise
/// monotone and approaches the limit (the distance `|f_n(x) − f(x)|` never
/// increases), then classifies as usual. For a genuinely monotone pointwise
/// convergent sequence with continuous limit the verdict is true once the
/// horizon is large enough; the validation is sampled, so a sequence
/// approaching a different limit cannot always be distinguished.
pub fn dini_check<F>(
    mut seq: F,
    limit: &TestFunction,
    tol: f64,
    horizon: BetaHorizon,
) -> Result<BetaVerdict>
where
    F: FnMut(usize) -> Result<TestFunction>,
{
    let mut prev: Option<Vec<f64>> = None;
    let mut dir: Vec<i8> = vec![0; limit.space().len()];
    let limit_values = limit.values().to_vec();
    let checked = move |n: usize| -> Result<TestFunction> {
        let f = seq(n)?;
        if f.values.len() != limit_values.len() {
            return Err(Error::Domain("sequence member on a different space".into()));
        }
        if let Some(p) = &prev {
            for (i, (cur, old)) in f.values.iter().zip(p).enumerate() {
                let d = cur - old;
                let step = if d > 1e-12 {
                    1i8
                } else if d < -1e-12 {
                    -1
                } else {
                    0
                };
                if step != 0 {
                    if dir[i] == -step {
                        return Err(Error::Validation(format!(
                            "sequence is not pointwise monotone: direction flips at point {i} \
                             between members {} and {n}",
                            n - 1
                        )));
                    }
                    dir[i] = step;
                }
                let (dn, dp) = ((cur - limit_values[i]).abs(), (old - limit_values[i]).abs());
                if dn > dp + 1e-12 {
                    return Err(Error::Validation(format!(
                        "sequence moves away from the declared limit at point {i} \
                         between members {} and {n}",
                        n - 1
                    )));
                }
            }
        }
        prev = Some(f.values.clone());
        Ok(f)
    };
    beta_converges(checked, limit, tol, horizon)
}

/// Result of the polynomial density probe.
#[derive(Clone, Debug)]
pub struct DensityVerdict {
    /// Smallest uniform residual achieved at any degree up to the requested
    /// one. Non-increasing in the requested degree by construction.
    pub best_residual: f64,
    /// Degree at which the best residual was achieved.
    pub best_degree: usize,
    /// Raw uniform residual of the least-squares fit per degree `0..=degree`.
    pub residual_by_degree: Vec<f64>,
    /// Whether the best residual is at or below the requested tolerance.
    pub meets_tol: bool,
}

/// Probe how well polynomials in the given generators approximate `target`
/// uniformly on `K`.
///
/// For each degree `d ≤ degree` the target is fit on `K` by least squares
/// over all monomials in the generators of total degree at most `d`; the
/// uniform residual of each fit is recorded and the best one returned. The
/// probe reports; it never asserts density.
///
/// Preconditions, checked on the represented points of `K`: the generators
/// together separate points and vanish nowhere.
pub fn density_probe(
    generators: &[TestFunction],
    target: &TestFunction,
    k: &CompactSet,
    degree: usize,
    tol: f64,
) -> Result<DensityVerdict> {
    if generators.is_empty() {
        return Err(Error::Validation("density probe needs at least one generator".into()));
    }
    for g in generators {
        target.same_space(g)?;
    }
    if k.space() != target.space() {
        return Err(Error::Domain("compact set lives on a different space".into()));
    }
    if k.is_empty() {
        return Err(Error::Validation("density probe needs a non-empty compact set".into()));
    }

    // Sampled separation / vanish-nowhere checks. Large sets are thinned to a
    // deterministic sub-sample to keep the pair scan quadratic in ~2000.
    let pts: Vec<usize> = k.indices().collect();
    let sample: Vec<usize> = if pts.len() <= 2000 {
        pts.clone()
    } else {
        let stride = pts.len().div_ceil(2000);
        pts.iter().copied().step_by(stride).collect()
    };
    const EPS: f64 = 1e-9;
    for &i in &sample {
        if generators.iter().all(|g| g.values[i].abs() <= EPS) {
            return Err(Error::Validation(format!(
                "generators all vanish at point {i}; the algebra cannot vanish nowhere on K"
            )));
        }
    }
    for (a, &i) in sample.iter().enumerate() {
        for &j in sample.iter().skip(a + 1) {
            if generators.iter().all(|g| (g.values[i] - g.values[j]).abs() <= EPS) {
                return Err(Error::Validation(format!(
                    "generators do not separate points {i} and {j} of K"
                )));
            }
        }
    }

    // Monomial basis columns over all of K (not just the thinned sample).
    let rows = pts.len();
    let b = DVector::from_iterator(rows, pts.iter().map(|&i| target.values[i]));
    let mut residual_by_degree = Vec::with_capacity(degree + 1);
    let mut best = f64::INFINITY;
    let mut best_degree = 0;
    for d in 0..=degree {
        let exponents = monomial_exponents(generators.len(), d);
        let mut a = DMatrix::zeros(rows, exponents.len());
        for (c, expo) in exponents.iter().enumerate() {
            for (r, &i) in pts.iter().enumerate() {
                let mut v = 1.0;
                for (g, &e) in generators.iter().zip(expo) {
                    v *= g.values[i].powi(e as i32);
                }
                a[(r, c)] = v;
            }
        }
        let svd = a.clone().svd(true, true);
        let coef = svd
            .solve(&b, 1e-12)
            .map_err(|e| Error::Validation(format!("least-squares solve failed: {e}")))?;
        let fit = a * coef;
        let resid = (0..rows).fold(0.0f64, |m, r| m.max((fit[r] - b[r]).abs()));
        residual_by_degree.push(resid);
        if resid < best {
            best = resid;
            best_degree = d;
        }
    }
    Ok(DensityVerdict {
        best_residual: best,
        best_degree,
        residual_by_degree,
        meets_tol: best <= tol,
    })
}

/// All exponent tuples over `k` generators with total degree exactly ≤ `d`.
fn monomial_exponents(k: usize, d: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = vec![0usize; k];
    fn rec(out: &mut Vec<Vec<usize>>, cur: &mut Vec<usize>, pos: usize, left: usize) {
        if pos == cur.len() {
            out.push(cur.clone());
            return;
        }
        for e in 0..=left {
            cur[pos] = e;
            rec(out, cur, pos + 1, left - e);
        }
        cur[pos] = 0;
    }
    rec(&mut out, &mut cur, 0, d);
    out.sort();
    out.dedup();
    out
}
