//! Markov generators as graphs of (f, Af) pairs together with concrete
//! realizations: rate matrices on finite and truncated countable spaces, and
//! central-difference diffusion stencils on real grids.
//!
//! Reflecting boundaries are used everywhere (ghost-point reflection on
//! grids, zero birth rate at the truncation boundary of chains) so that the
//! realizations annihilate constants exactly and the associated transition
//! semigroups conserve mass.

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::func::TestFunction;
use crate::space::{SpaceKind, StateSpace};

/// A transition-rate matrix: non-negative off-diagonal rates, row sums ≤ 0.
///
/// A row sum strictly below zero is a killing (mass-losing) rate; the largest
/// deficit is recorded as `slack`.
#[derive(Clone, Debug, PartialEq)]
pub struct QMatrix {
    rates: DMatrix<f64>,
    conservative: bool,
    slack: f64,
}

impl QMatrix {
    /// Validate a full rate matrix, diagonals included.
    pub fn from_rows(rows: Vec<Vec<f64>>) -> Result<Self> {
        let n = rows.len();
        if n == 0 || rows.iter().any(|r| r.len() != n) {
            return Err(Error::Validation("rate matrix must be square and non-empty".into()));
        }
        let rates = DMatrix::from_fn(n, n, |i, j| rows[i][j]);
        Self::from_matrix(rates)
    }

    /// Validate an `nalgebra` rate matrix.
    pub fn from_matrix(rates: DMatrix<f64>) -> Result<Self> {
        let n = rates.nrows();
        if n == 0 || rates.ncols() != n {
            return Err(Error::Validation("rate matrix must be square and non-empty".into()));
        }
        let mut slack = 0.0f64;
        let mut conservative = true;
        for i in 0..n {
            let mut sum = 0.0;
            for j in 0..n {
                let q = rates[(i, j)];
                if !q.is_finite() {
                    return Err(Error::Validation(format!("non-finite rate at ({i},{j})")));
                }
                if i != j && q < 0.0 {
                    return Err(Error::Validation(format!(
                        "negative off-diagonal rate {q} at ({i},{j})"
                    )));
                }
                sum += q;
            }
            if sum > 1e-9 {
                return Err(Error::Validation(format!("row {i} sums to {sum} > 0")));
            }
            if sum.abs() > 1e-12 {
                conservative = false;
            }
            slack = slack.max(-sum);
        }
        Ok(Self { rates, conservative, slack })
    }

    /// Build from off-diagonal rates only; diagonals are set to the negated
    /// off-diagonal row sums, so row sums are exactly zero.
    pub fn from_off_diagonal(off: &DMatrix<f64>) -> Result<Self> {
        let n = off.nrows();
        if n == 0 || off.ncols() != n {
            return Err(Error::Validation("rate matrix must be square and non-empty".into()));
        }
        let mut rates = off.clone();
        for i in 0..n {
            let mut sum = 0.0;
            for j in 0..n {
                if i != j {
                    sum += off[(i, j)];
                }
            }
            rates[(i, i)] = -sum;
        }
        Self::from_matrix(rates)
    }

    /// Parse a square numeric CSV: one row per line, comma-separated rates.
    /// Blank lines and `#` comment lines are skipped.
    pub fn from_csv_str(text: &str) -> Result<Self> {
        let mut rows = Vec::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let row: Vec<f64> = line
                .split(',')
                .map(|tok| {
                    tok.trim().parse::<f64>().map_err(|e| {
                        Error::Config(format!("line {}: bad rate '{tok}': {e}", lineno + 1))
                    })
                })
                .collect::<Result<_>>()?;
            rows.push(row);
        }
        Self::from_rows(rows)
    }

    /// `factor · Q`; positive factors preserve the Q-matrix structure.
    pub fn scaled(&self, factor: f64) -> Result<Self> {
        if !(factor > 0.0) || !factor.is_finite() {
            return Err(Error::Validation("scale factor must be positive and finite".into()));
        }
        Self::from_matrix(factor * self.rates.clone())
    }

    /// `Q − κI`: kill mass uniformly at rate `κ`. The transition semigroup of
    /// the result scales total mass by exactly `e^{−κt}`.
    pub fn uniformly_killed(&self, kappa: f64) -> Result<Self> {
        if !(kappa > 0.0) {
            return Err(Error::Validation("killing rate must be positive".into()));
        }
        let mut rates = self.rates.clone();
        for i in 0..rates.nrows() {
            rates[(i, i)] -= kappa;
        }
        Self::from_matrix(rates)
    }

    pub fn dim(&self) -> usize {
        self.rates.nrows()
    }

    pub fn rates(&self) -> &DMatrix<f64> {
        &self.rates
    }

    pub fn rate(&self, i: usize, j: usize) -> f64 {
        self.rates[(i, j)]
    }

    /// Whether all row sums vanish (within 1e−12).
    pub fn is_conservative(&self) -> bool {
        self.conservative
    }

    /// Largest row-sum deficit (0 for conservative matrices).
    pub fn slack(&self) -> f64 {
        self.slack
    }

    /// Largest exit rate `max_i |q_ii|`; the uniformization constant.
    pub fn max_exit_rate(&self) -> f64 {
        (0..self.dim()).fold(0.0f64, |m, i| m.max(self.rates[(i, i)].abs()))
    }

    /// `(Qf)_i = Σ_j q_ij f_j`.
    pub fn apply_to_values(&self, f: &[f64]) -> Result<Vec<f64>> {
        let n = self.dim();
        if f.len() != n {
            return Err(Error::Domain(format!(
                "value vector has {} entries, matrix is {n}×{n}",
                f.len()
            )));
        }
        let mut out = vec![0.0; n];
        for i in 0..n {
            let mut acc = 0.0;
            for j in 0..n {
                acc += self.rates[(i, j)] * f[j];
            }
            out[i] = acc;
        }
        Ok(out)
    }
}

/// Tabulated drift and diffusion coefficients for a 1-D diffusion on a grid,
/// realized by second-order central differences with reflecting boundaries.
#[derive(Clone, Debug)]
pub struct DiffusionStencil {
    space: StateSpace,
    drift: Vec<f64>,
    sigma2: Vec<f64>,
    spacing: f64,
}

impl DiffusionStencil {
    pub fn new(space: StateSpace, drift: Vec<f64>, sigma2: Vec<f64>) -> Result<Self> {
        let SpaceKind::RealGrid { spacing, .. } = space.kind() else {
            return Err(Error::Validation("diffusion stencils need a real grid".into()));
        };
        if drift.len() != space.len() || sigma2.len() != space.len() {
            return Err(Error::Validation("coefficient vectors must match the grid".into()));
        }
        for (i, s2) in sigma2.iter().enumerate() {
            if !(*s2 > 0.0) {
                return Err(Error::Validation(format!(
                    "diffusion coefficient must be positive; got {s2} at point {i}"
                )));
            }
        }
        if drift.iter().any(|b| !b.is_finite()) {
            return Err(Error::Validation("non-finite drift coefficient".into()));
        }
        Ok(Self { space, drift, sigma2, spacing })
    }

    pub fn space(&self) -> &StateSpace {
        &self.space
    }

    pub fn drift(&self) -> &[f64] {
        &self.drift
    }

    pub fn sigma2(&self) -> &[f64] {
        &self.sigma2
    }

    /// `Af = b f′ + ½σ² f″` by central differences; boundary points use a
    /// reflected ghost value (`f_{-1} = f_1`), which kills the drift term and
    /// makes the second difference one-sided.
    pub fn apply_to_values(&self, f: &[f64]) -> Result<Vec<f64>> {
        let n = self.space.len();
        if f.len() != n {
            return Err(Error::Domain(format!(
                "value vector has {} entries, grid has {n} points",
                f.len()
            )));
        }
        let h = self.spacing;
        let mut out = vec![0.0; n];
        for i in 0..n {
            let (left, right) = match i {
                0 => (f[1], f[1]),
                _ if i == n - 1 => (f[n - 2], f[n - 2]),
                _ => (f[i - 1], f[i + 1]),
            };
            let first = (right - left) / (2.0 * h);
            let second = (right - 2.0 * f[i] + left) / (h * h);
            out[i] = self.drift[i] * first + 0.5 * self.sigma2[i] * second;
        }
        Ok(out)
    }
}

/// A concrete realization that can act on arbitrary value vectors.
#[derive(Clone, Debug)]
pub enum Realization {
    Matrix(QMatrix),
    Stencil(DiffusionStencil),
}

impl Realization {
    pub fn apply_to_values(&self, f: &[f64]) -> Result<Vec<f64>> {
        match self {
            Realization::Matrix(q) => q.apply_to_values(f),
            Realization::Stencil(s) => s.apply_to_values(f),
        }
    }
}

/// A generator presented as its graph: stored `(f, Af)` pairs, an optional
/// realization for functions outside the stored list, and the
/// conservativity flag (`A1 = 0`).
#[derive(Clone, Debug)]
pub struct GeneratorGraph {
    space: StateSpace,
    pairs: Vec<(TestFunction, TestFunction)>,
    realization: Option<Realization>,
    conservative: bool,
    notes: Vec<String>,
}

impl GeneratorGraph {
    /// Graph-only generator: the domain is exactly the stored pairs.
    /// The conservativity claim is the caller's.
    pub fn from_pairs(
        space: StateSpace,
        pairs: Vec<(TestFunction, TestFunction)>,
        conservative: bool,
    ) -> Result<Self> {
        let g = Self { space, pairs, realization: None, conservative, notes: Vec::new() };
        g.validate_pairs()?;
        Ok(g)
    }

    /// Generator with a realization. Stored pairs are cross-checked against
    /// the realization within 1e−10, and conservativity is measured by
    /// applying the realization to the constant 1.
    pub fn with_realization(
        space: StateSpace,
        pairs: Vec<(TestFunction, TestFunction)>,
        realization: Realization,
    ) -> Result<Self> {
        let ones = vec![1.0; space.len()];
        let a_one = realization.apply_to_values(&ones)?;
        let conservative = a_one.iter().all(|v| v.abs() <= 1e-10);
        let g = Self { space, pairs, realization: Some(realization), conservative, notes: Vec::new() };
        g.validate_pairs()?;
        g.validate_realization()?;
        Ok(g)
    }

    fn validate_pairs(&self) -> Result<()> {
        for (f, af) in &self.pairs {
            if f.space() != &self.space || af.space() != &self.space {
                return Err(Error::Domain(format!(
                    "stored pair ('{}', '{}') lives on a different space",
                    f.name(),
                    af.name()
                )));
            }
        }
        // single-valued: identical f values imply identical Af values
        for (i, (f1, g1)) in self.pairs.iter().enumerate() {
            for (f2, g2) in self.pairs.iter().skip(i + 1) {
                let same_f = f1.values() == f2.values();
                if same_f {
                    let conflict = g1
                        .values()
                        .iter()
                        .zip(g2.values())
                        .any(|(a, b)| (a - b).abs() > 1e-12);
                    if conflict {
                        return Err(Error::Validation(format!(
                            "graph is not single-valued: '{}' maps to both '{}' and '{}'",
                            f1.name(),
                            g1.name(),
                            g2.name()
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    fn validate_realization(&self) -> Result<()> {
        let Some(r) = &self.realization else { return Ok(()) };
        for (f, af) in &self.pairs {
            let computed = r.apply_to_values(f.values())?;
            let err = computed
                .iter()
                .zip(af.values())
                .fold(0.0f64, |m, (a, b)| m.max((a - b).abs()));
            if err > 1e-10 {
                return Err(Error::Validation(format!(
                    "stored pair ('{}', '{}') disagrees with the realization by {err}",
                    f.name(),
                    af.name()
                )));
            }
        }
        Ok(())
    }

    pub fn space(&self) -> &StateSpace {
        &self.space
    }

    pub fn pairs(&self) -> &[(TestFunction, TestFunction)] {
        &self.pairs
    }

    pub fn realization(&self) -> Option<&Realization> {
        self.realization.as_ref()
    }

    /// The rate matrix, when the realization is one.
    pub fn q_matrix(&self) -> Option<&QMatrix> {
        match &self.realization {
            Some(Realization::Matrix(q)) => Some(q),
            _ => None,
        }
    }

    pub fn is_conservative(&self) -> bool {
        self.conservative
    }

    /// Build-time remarks (truncation adjustments and the like).
    pub fn notes(&self) -> &[String] {
        &self.notes
    }

    /// `Af`: a stored pair when `f` matches one exactly, otherwise the
    /// realization applied to the values of `f`.
    pub fn apply(&self, f: &TestFunction) -> Result<TestFunction> {
        if f.space() != &self.space {
            return Err(Error::Domain(format!(
                "function '{}' lives on a different space",
                f.name()
            )));
        }
        for (stored, af) in &self.pairs {
            if stored.values() == f.values() {
                return Ok(af.clone());
            }
        }
        match &self.realization {
            Some(r) => {
                let values = r.apply_to_values(f.values())?;
                let sup = values.iter().fold(0.0f64, |m, v| m.max(v.abs()));
                TestFunction::from_values(self.space, format!("A({})", f.name()), values, sup)
            }
            None => Err(Error::Domain(format!(
                "function '{}' is not in the stored domain and the graph has no realization",
                f.name()
            ))),
        }
    }
}

/// Generator of a continuous-time Markov chain on a finite space.
///
/// Stocks the pair `(1, Q1)` so the graph always has an anchor.
pub fn build_ctmc(q: QMatrix) -> Result<GeneratorGraph> {
    let space = StateSpace::finite(q.dim())?;
    let one = crate::catalog::constant(space, 1.0)?;
    let a_one_values = q.apply_to_values(one.values())?;
    let sup = a_one_values.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let a_one = TestFunction::from_values(space, "A(const(1))", a_one_values, sup)?;
    GeneratorGraph::with_realization(space, vec![(one, a_one)], Realization::Matrix(q))
}

/// Generator of a birth–death chain truncated at `n_max` with a reflecting
/// boundary: the birth rate at `n_max` is forced to zero (recorded in the
/// graph notes when that changes the input).
///
/// `birth[i]` and `death[i]` are the rates out of state `i`; `death[0]` must
/// be zero.
pub fn build_birth_death(birth: &[f64], death: &[f64], n_max: usize) -> Result<GeneratorGraph> {
    if n_max == 0 {
        return Err(Error::Validation("birth–death chain needs n_max >= 1".into()));
    }
    let n = n_max + 1;
    if birth.len() != n || death.len() != n {
        return Err(Error::Validation(format!(
            "need {n} birth and death rates for states 0..={n_max}"
        )));
    }
    if birth.iter().chain(death).any(|r| !(*r >= 0.0) || !r.is_finite()) {
        return Err(Error::Validation("rates must be non-negative and finite".into()));
    }
    if death[0] != 0.0 {
        return Err(Error::Validation(format!(
            "death rate at state 0 must be 0 (no exit below 0); got {}",
            death[0]
        )));
    }
    let mut notes = Vec::new();
    let mut off = DMatrix::zeros(n, n);
    for i in 0..n {
        let b = if i == n_max { 0.0 } else { birth[i] };
        if i == n_max && birth[i] != 0.0 {
            notes.push(format!(
                "truncation: birth rate {} at state {n_max} replaced by 0 (reflecting boundary)",
                birth[i]
            ));
        }
        if i < n_max {
            off[(i, i + 1)] = b;
        }
        if i > 0 {
            off[(i, i - 1)] = death[i];
        }
    }
    let q = QMatrix::from_off_diagonal(&off)?;
    let space = StateSpace::truncated_countable(n_max)?;
    let one = crate::catalog::constant(space, 1.0)?;
    let zero = crate::catalog::constant(space, 0.0)?.with_name("A(const(1))");
    let mut g =
        GeneratorGraph::with_realization(space, vec![(one, zero)], Realization::Matrix(q))?;
    g.notes = notes;
    Ok(g)
}

/// Generator of a 1-D diffusion `Af = b f′ + ½ σ² f″` on a real grid, by
/// central differences with reflecting boundaries.
pub fn build_diffusion_1d<B, S>(drift: B, sigma2: S, space: StateSpace) -> Result<GeneratorGraph>
where
    B: Fn(f64) -> f64,
    S: Fn(f64) -> f64,
{
    let b: Vec<f64> = space.points().map(|i| drift(space.coord(i))).collect();
    let s2: Vec<f64> = space.points().map(|i| sigma2(space.coord(i))).collect();
    let stencil = DiffusionStencil::new(space, b, s2)?;
    let one = crate::catalog::constant(space, 1.0)?;
    let zero = crate::catalog::constant(space, 0.0)?.with_name("A(const(1))");
    GeneratorGraph::with_realization(space, vec![(one, zero)], Realization::Stencil(stencil))
}
