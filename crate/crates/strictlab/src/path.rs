//! Cadlag paths, exact-law samplers, and path functionals.
//!
//! Two path representations: jump lists for chains (exact in law) and
//! uniform time grids for Euler–Maruyama diffusions (biased at O(dt); every
//! consumer of grid paths must carry that disclaimer). Ensembles derive
//! per-path generators from a master seed by a counter scheme, so results do
//! not depend on scheduling order.

use rand::prelude::*;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Exp, StandardNormal};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::func::TestFunction;
use crate::generator::{GeneratorGraph, Realization};
use crate::measure::SignedMeasure;
use crate::space::{SpaceKind, StateSpace};

/// Seed provenance of one path: the ensemble master seed plus the path's
/// stream index. The generator is
/// `ChaCha8Rng::seed_from_u64(master)` followed by `set_stream(stream)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PathSeed {
    pub master: u64,
    pub stream: u64,
}

impl PathSeed {
    pub fn rng(&self) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.master);
        rng.set_stream(self.stream);
        rng
    }
}

/// Sample storage of one path.
#[derive(Clone, Debug, PartialEq)]
enum PathData {
    /// Jump list `(t_i, x_i)` with `t_0 = 0`, times strictly increasing.
    Jumps(Vec<(f64, usize)>),
    /// States at the uniform grid `0, dt, 2·dt, ...`.
    Grid { dt: f64, states: Vec<usize> },
}

/// A right-continuous path with left limits over a state space, on a finite
/// horizon.
#[derive(Clone, Debug, PartialEq)]
pub struct CadlagPath {
    space: StateSpace,
    data: PathData,
    horizon: f64,
    seed: PathSeed,
}

impl CadlagPath {
    /// Build from an explicit jump list. The first entry must be at time 0;
    /// times must be strictly increasing and within the horizon.
    pub fn from_jumps(
        space: StateSpace,
        jumps: Vec<(f64, usize)>,
        horizon: f64,
        seed: PathSeed,
    ) -> Result<Self> {
        if !(horizon > 0.0) || !horizon.is_finite() {
            return Err(Error::Validation("horizon must be positive and finite".into()));
        }
        let Some(first) = jumps.first() else {
            return Err(Error::Validation("path needs at least its initial state".into()));
        };
        if first.0 != 0.0 {
            return Err(Error::Validation("first path entry must be at time 0".into()));
        }
        for w in jumps.windows(2) {
            if !(w[1].0 > w[0].0) {
                return Err(Error::Validation(format!(
                    "jump times must strictly increase; got {} then {}",
                    w[0].0, w[1].0
                )));
            }
        }
        for (t, x) in &jumps {
            if *t > horizon || !t.is_finite() {
                return Err(Error::Validation(format!("jump time {t} outside [0, {horizon}]")));
            }
            if *x >= space.len() {
                return Err(Error::Domain(format!("state {x} outside the space")));
            }
        }
        Ok(Self { space, data: PathData::Jumps(jumps), horizon, seed })
    }

    /// Build from states on a uniform grid with step `dt`; the horizon is
    /// `(states.len() − 1)·dt`.
    pub fn from_grid(
        space: StateSpace,
        dt: f64,
        states: Vec<usize>,
        seed: PathSeed,
    ) -> Result<Self> {
        if !(dt > 0.0) || !dt.is_finite() {
            return Err(Error::Validation("dt must be positive and finite".into()));
        }
        if states.len() < 2 {
            return Err(Error::Validation("grid path needs at least two samples".into()));
        }
        if states.iter().any(|x| *x >= space.len()) {
            return Err(Error::Domain("state outside the space".into()));
        }
        let horizon = (states.len() - 1) as f64 * dt;
        Ok(Self { space, data: PathData::Grid { dt, states }, horizon, seed })
    }

    pub fn space(&self) -> &StateSpace {
        &self.space
    }

    pub fn horizon(&self) -> f64 {
        self.horizon
    }

    pub fn seed(&self) -> PathSeed {
        self.seed
    }

    /// Whether the path is grid-sampled (and thus carries O(dt) bias).
    pub fn is_grid_sampled(&self) -> bool {
        matches!(self.data, PathData::Grid { .. })
    }

    /// Number of recorded events (jumps or grid samples) after time 0.
    pub fn event_count(&self) -> usize {
        match &self.data {
            PathData::Jumps(j) => j.len() - 1,
            PathData::Grid { states, .. } => states.len() - 1,
        }
    }

    /// Recorded event times, including time 0.
    pub fn event_times(&self) -> Vec<f64> {
        match &self.data {
            PathData::Jumps(j) => j.iter().map(|(t, _)| *t).collect(),
            PathData::Grid { dt, states } => {
                (0..states.len()).map(|k| k as f64 * dt).collect()
            }
        }
    }

    /// State at time `t` (right-continuous evaluation).
    pub fn state_at(&self, t: f64) -> Result<usize> {
        if !(0.0..=self.horizon).contains(&t) {
            return Err(Error::Domain(format!("time {t} outside [0, {}]", self.horizon)));
        }
        Ok(match &self.data {
            PathData::Jumps(jumps) => {
                let pos = jumps.partition_point(|(ti, _)| *ti <= t);
                jumps[pos - 1].1
            }
            PathData::Grid { dt, states } => {
                let k = ((t / dt).floor() as usize).min(states.len() - 1);
                states[k]
            }
        })
    }

    /// `∫₀ᵗ g(η(s)) ds`: exact for jump lists (the path is piecewise
    /// constant), left-endpoint cell sums for grid paths.
    pub fn path_integral(&self, g: &TestFunction, t: f64) -> Result<f64> {
        if g.space() != &self.space {
            return Err(Error::Domain(format!(
                "function '{}' lives on a different space",
                g.name()
            )));
        }
        if !(0.0..=self.horizon).contains(&t) {
            return Err(Error::Domain(format!("time {t} outside [0, {}]", self.horizon)));
        }
        let mut acc = 0.0;
        match &self.data {
            PathData::Jumps(jumps) => {
                for (idx, (ti, xi)) in jumps.iter().enumerate() {
                    if *ti >= t {
                        break;
                    }
                    let next = jumps.get(idx + 1).map(|(tn, _)| *tn).unwrap_or(self.horizon);
                    acc += g.value(*xi) * (next.min(t) - ti);
                }
            }
            PathData::Grid { dt, states } => {
                let mut k = 0usize;
                while (k as f64) * dt < t {
                    let left = k as f64 * dt;
                    let right = ((k + 1) as f64 * dt).min(t);
                    acc += g.value(states[k]) * (right - left);
                    k += 1;
                }
            }
        }
        Ok(acc)
    }

    /// Whether the path stays within `eps_prime` of its start over `[0, δ]`:
    /// `sup_{s ≤ δ} d(η(0), η(s)) < ε′`, with the sup over represented times.
    pub fn modulus_event(&self, delta: f64, eps_prime: f64) -> Result<bool> {
        if !(delta >= 0.0) || delta > self.horizon {
            return Err(Error::Domain(format!(
                "delta {delta} outside [0, {}]",
                self.horizon
            )));
        }
        if !(eps_prime > 0.0) {
            return Err(Error::Validation("eps_prime must be positive".into()));
        }
        let x0 = self.state_at(0.0)?;
        let mut sup = 0.0f64;
        match &self.data {
            PathData::Jumps(jumps) => {
                for (ti, xi) in jumps {
                    if *ti > delta {
                        break;
                    }
                    sup = sup.max(self.space.distance(x0, *xi)?);
                }
            }
            PathData::Grid { dt, states } => {
                let kmax = ((delta / dt).floor() as usize).min(states.len() - 1);
                for x in &states[..=kmax] {
                    sup = sup.max(self.space.distance(x0, *x)?);
                }
            }
        }
        Ok(sup < eps_prime)
    }

    fn append_csv(&self, id: usize, out: &mut String) {
        match &self.data {
            PathData::Jumps(jumps) => {
                for (t, x) in jumps {
                    out.push_str(&format!("{id},{t},{x}\n"));
                }
            }
            PathData::Grid { dt, states } => {
                for (k, x) in states.iter().enumerate() {
                    out.push_str(&format!("{id},{},{x}\n", k as f64 * dt));
                }
            }
        }
    }
}

/// Exact-law chain sampler: exponential holding times at rate `−q_xx`, jump
/// law `q_xy / (−q_xx)`. Requires a conservative matrix realization.
pub fn simulate_ctmc(
    graph: &GeneratorGraph,
    x0: usize,
    horizon: f64,
    seed: PathSeed,
) -> Result<CadlagPath> {
    let Some(q) = graph.q_matrix() else {
        return Err(Error::Validation(
            "chain simulation needs a rate-matrix realization".into(),
        ));
    };
    if !graph.is_conservative() {
        return Err(Error::Validation(
            "chain simulation requires a conservative generator (row sums 0)".into(),
        ));
    }
    let space = *graph.space();
    if x0 >= space.len() {
        return Err(Error::Domain(format!("initial state {x0} outside the space")));
    }
    if !(horizon > 0.0) || !horizon.is_finite() {
        return Err(Error::Validation("horizon must be positive and finite".into()));
    }
    let mut rng = seed.rng();
    let mut t = 0.0;
    let mut x = x0;
    let mut jumps = vec![(0.0, x0)];
    loop {
        let rate = -q.rate(x, x);
        if rate <= 0.0 {
            break;
        }
        let hold: f64 = rng.sample(Exp::new(rate).expect("positive rate"));
        t += hold;
        if t >= horizon {
            break;
        }
        // pick the next state proportionally to the off-diagonal rates
        let mut u = rng.gen::<f64>() * rate;
        let mut next = x;
        for j in 0..q.dim() {
            if j == x {
                continue;
            }
            u -= q.rate(x, j);
            if u <= 0.0 {
                next = j;
                break;
            }
        }
        if next == x {
            // rounding pushed u past the last positive rate; take the largest
            next = (0..q.dim())
                .filter(|j| *j != x && q.rate(x, *j) > 0.0)
                .last()
                .unwrap_or(x);
            if next == x {
                break;
            }
        }
        x = next;
        jumps.push((t, x));
    }
    CadlagPath::from_jumps(space, jumps, horizon, seed)
}

/// Euler–Maruyama sampler from raw coefficient vectors (`σ² ≥ 0` allowed):
/// `y_{k+1} = y_k + b(y_k)·dt + σ(y_k)·√dt·ξ_k`, reflected at the grid
/// boundary by mirroring, recorded at the nearest grid point.
///
/// The continuous position is propagated between steps; only the recording
/// snaps to the grid.
pub fn simulate_diffusion_raw(
    space: StateSpace,
    drift: &[f64],
    sigma2: &[f64],
    x0: usize,
    horizon: f64,
    dt: f64,
    seed: PathSeed,
) -> Result<CadlagPath> {
    let SpaceKind::RealGrid { half_width, .. } = space.kind() else {
        return Err(Error::Validation("diffusion paths need a real grid".into()));
    };
    if drift.len() != space.len() || sigma2.len() != space.len() {
        return Err(Error::Validation("coefficient vectors must match the grid".into()));
    }
    if sigma2.iter().any(|s| !(*s >= 0.0)) {
        return Err(Error::Validation("σ² must be non-negative".into()));
    }
    if !(dt > 0.0) {
        return Err(Error::Validation(format!("dt must be positive, got {dt}")));
    }
    if !(horizon > 0.0) || !horizon.is_finite() {
        return Err(Error::Validation("horizon must be positive and finite".into()));
    }
    let steps_f = horizon / dt;
    let steps = steps_f.round();
    if (steps_f - steps).abs() > 1e-9 * steps_f.max(1.0) || steps < 1.0 {
        return Err(Error::Validation(format!(
            "dt {dt} does not divide the horizon {horizon}"
        )));
    }
    let steps = steps as usize;
    if x0 >= space.len() {
        return Err(Error::Domain(format!("initial state {x0} outside the space")));
    }
    let mut rng = seed.rng();
    let sqrt_dt = dt.sqrt();
    let mut y = space.coord(x0);
    let mut states = Vec::with_capacity(steps + 1);
    states.push(x0);
    for _ in 0..steps {
        let at = space.nearest_point(y);
        let xi: f64 = rng.sample(StandardNormal);
        y += drift[at] * dt + sigma2[at].sqrt() * sqrt_dt * xi;
        // mirror back into [−L, L]
        while y.abs() > half_width {
            y = if y > half_width { 2.0 * half_width - y } else { -2.0 * half_width - y };
        }
        states.push(space.nearest_point(y));
    }
    CadlagPath::from_grid(space, dt, states, seed)
}

/// Euler–Maruyama sampler for a diffusion generator (stencil realization).
pub fn simulate_diffusion(
    graph: &GeneratorGraph,
    x0: usize,
    horizon: f64,
    dt: f64,
    seed: PathSeed,
) -> Result<CadlagPath> {
    let Some(Realization::Stencil(st)) = graph.realization() else {
        return Err(Error::Validation(
            "diffusion simulation needs a stencil realization".into(),
        ));
    };
    simulate_diffusion_raw(*graph.space(), st.drift(), st.sigma2(), x0, horizon, dt, seed)
}

/// How ensemble paths are produced.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum SamplerKind {
    Chain,
    Diffusion { dt: f64 },
}

/// An independent family of paths of one model, with a common master seed
/// and initial law.
#[derive(Clone, Debug)]
pub struct PathEnsemble {
    paths: Vec<CadlagPath>,
    model: String,
    master_seed: u64,
    initial_law: SignedMeasure,
    kind: SamplerKind,
}

impl PathEnsemble {
    /// Sample `n_paths` independent paths. Path `i` uses stream `i` of the
    /// master seed and draws its initial state from `nu` before simulating,
    /// so the ensemble is reproducible and independent of scheduling order.
    pub fn generate(
        graph: &GeneratorGraph,
        model: impl Into<String>,
        nu: &SignedMeasure,
        n_paths: usize,
        horizon: f64,
        kind: SamplerKind,
        master_seed: u64,
    ) -> Result<Self> {
        if n_paths == 0 {
            return Err(Error::Validation("ensemble needs at least one path".into()));
        }
        if nu.space() != graph.space() {
            return Err(Error::Domain("initial law lives on a different space".into()));
        }
        if !nu.is_probability() {
            return Err(Error::Precondition("initial law must be a probability measure".into()));
        }
        let paths: Vec<CadlagPath> = (0..n_paths as u64)
            .into_par_iter()
            .map(|stream| {
                let seed = PathSeed { master: master_seed, stream };
                // the initial draw must not share randomness with the path:
                // the simulators restart the path stream from position 0, so
                // drawing x0 from it would correlate the initial state with
                // the first holding time
                let mut init_rng =
                    PathSeed { master: master_seed, stream: stream | INITIAL_DRAW_STREAM }.rng();
                let x0 = sample_atom(nu, init_rng.gen::<f64>())?;
                match kind {
                    SamplerKind::Chain => simulate_ctmc(graph, x0, horizon, seed),
                    SamplerKind::Diffusion { dt } => {
                        simulate_diffusion(graph, x0, horizon, dt, seed)
                    }
                }
            })
            .collect::<Result<_>>()?;
        Ok(Self {
            paths,
            model: model.into(),
            master_seed,
            initial_law: nu.clone(),
            kind,
        })
    }

    pub fn paths(&self) -> &[CadlagPath] {
        &self.paths
    }

    pub fn len(&self) -> usize {
        self.paths.len()
    }

    pub fn is_empty(&self) -> bool {
        self.paths.is_empty()
    }

    pub fn model(&self) -> &str {
        &self.model
    }

    pub fn master_seed(&self) -> u64 {
        self.master_seed
    }

    pub fn initial_law(&self) -> &SignedMeasure {
        &self.initial_law
    }

    pub fn kind(&self) -> SamplerKind {
        self.kind
    }

    pub fn space(&self) -> &StateSpace {
        self.paths[0].space()
    }

    /// Whether any member is grid-sampled (O(dt) bias disclaimer applies).
    pub fn is_grid_sampled(&self) -> bool {
        self.paths.iter().any(|p| p.is_grid_sampled())
    }

    /// Empirical law of `η(t)` as a probability measure.
    pub fn marginal_at(&self, t: f64) -> Result<SignedMeasure> {
        let w = 1.0 / self.paths.len() as f64;
        let atoms: Vec<(usize, f64)> = self
            .paths
            .iter()
            .map(|p| p.state_at(t).map(|x| (x, w)))
            .collect::<Result<_>>()?;
        SignedMeasure::new(*self.space(), atoms)
    }

    /// Serialize as CSV: metadata comment lines, a header, then one
    /// `path,time,state` row per recorded event.
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("# model={}\n", self.model));
        out.push_str(&format!("# master_seed={}\n", self.master_seed));
        out.push_str(&format!("# horizon={}\n", self.paths[0].horizon));
        match self.kind {
            SamplerKind::Chain => out.push_str("# kind=chain\n"),
            SamplerKind::Diffusion { dt } => out.push_str(&format!("# kind=grid dt={dt}\n")),
        }
        out.push_str("path,time,state\n");
        for (id, p) in self.paths.iter().enumerate() {
            p.append_csv(id, &mut out);
        }
        out
    }

    /// Parse an ensemble serialized by [`to_csv`](Self::to_csv). The initial
    /// law is reconstructed empirically from the time-0 states.
    pub fn from_csv(space: StateSpace, text: &str) -> Result<Self> {
        let mut model = String::from("imported");
        let mut master_seed = 0u64;
        let mut horizon = None;
        let mut kind = None;
        let mut rows: Vec<(usize, f64, usize)> = Vec::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            if let Some(meta) = line.strip_prefix('#') {
                let meta = meta.trim();
                if let Some(v) = meta.strip_prefix("model=") {
                    model = v.to_string();
                } else if let Some(v) = meta.strip_prefix("master_seed=") {
                    master_seed = v
                        .parse()
                        .map_err(|e| Error::Config(format!("bad master_seed: {e}")))?;
                } else if let Some(v) = meta.strip_prefix("horizon=") {
                    horizon =
                        Some(v.parse::<f64>().map_err(|e| Error::Config(format!("bad horizon: {e}")))?);
                } else if meta == "kind=chain" {
                    kind = Some(SamplerKind::Chain);
                } else if let Some(v) = meta.strip_prefix("kind=grid dt=") {
                    let dt =
                        v.parse::<f64>().map_err(|e| Error::Config(format!("bad dt: {e}")))?;
                    kind = Some(SamplerKind::Diffusion { dt });
                }
                continue;
            }
            if line == "path,time,state" {
                continue;
            }
            let mut parts = line.split(',');
            let parse = |tok: Option<&str>, what: &str| -> Result<String> {
                tok.map(str::to_string).ok_or_else(|| {
                    Error::Config(format!("line {}: missing {what}", lineno + 1))
                })
            };
            let id: usize = parse(parts.next(), "path id")?
                .parse()
                .map_err(|e| Error::Config(format!("line {}: bad path id: {e}", lineno + 1)))?;
            let t: f64 = parse(parts.next(), "time")?
                .parse()
                .map_err(|e| Error::Config(format!("line {}: bad time: {e}", lineno + 1)))?;
            let x: usize = parse(parts.next(), "state")?
                .parse()
                .map_err(|e| Error::Config(format!("line {}: bad state: {e}", lineno + 1)))?;
            rows.push((id, t, x));
        }
        let horizon = horizon.ok_or_else(|| Error::Config("missing horizon metadata".into()))?;
        let kind = kind.ok_or_else(|| Error::Config("missing kind metadata".into()))?;
        if rows.is_empty() {
            return Err(Error::Config("no path rows".into()));
        }
        let n_paths = rows.iter().map(|(id, _, _)| *id).max().expect("non-empty") + 1;
        let mut grouped: Vec<Vec<(f64, usize)>> = vec![Vec::new(); n_paths];
        for (id, t, x) in rows {
            grouped[id].push((t, x));
        }
        let paths: Vec<CadlagPath> = grouped
            .into_iter()
            .enumerate()
            .map(|(stream, events)| {
                let seed = PathSeed { master: master_seed, stream: stream as u64 };
                match kind {
                    SamplerKind::Chain => {
                        CadlagPath::from_jumps(space, events, horizon, seed)
                    }
                    SamplerKind::Diffusion { dt } => {
                        let states = events.iter().map(|(_, x)| *x).collect();
                        CadlagPath::from_grid(space, dt, states, seed)
                    }
                }
            })
            .collect::<Result<_>>()?;
        let w = 1.0 / paths.len() as f64;
        let initial_law = SignedMeasure::new(
            space,
            paths
                .iter()
                .map(|p| p.state_at(0.0).map(|x| (x, w)))
                .collect::<Result<Vec<_>>>()?,
        )?;
        Ok(Self { paths, model, master_seed, initial_law, kind })
    }
}

/// Stream-index flag reserving a disjoint ChaCha stream family for initial
/// draws; path indices stay far below it.
const INITIAL_DRAW_STREAM: u64 = 1 << 63;

/// Inverse-CDF draw from the atoms of a probability measure.
fn sample_atom(nu: &SignedMeasure, u: f64) -> Result<usize> {
    let total = nu.total_mass();
    let mut acc = 0.0;
    for (i, w) in nu.atoms() {
        acc += w;
        if u * total <= acc {
            return Ok(*i);
        }
    }
    Ok(nu.atoms().last().expect("probability measure has atoms").0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::generator::{build_ctmc, build_diffusion_1d, QMatrix};
    use approx::assert_abs_diff_eq;

    const SEED: PathSeed = PathSeed { master: 7, stream: 0 };

    fn two_state_graph() -> GeneratorGraph {
        build_ctmc(QMatrix::from_rows(vec![vec![-1.0, 1.0], vec![1.0, -1.0]]).unwrap()).unwrap()
    }

    #[test]
    fn zero_rate_chain_never_jumps() {
        let g = build_ctmc(QMatrix::from_rows(vec![vec![0.0, 0.0], vec![0.0, 0.0]]).unwrap())
            .unwrap();
        let p = simulate_ctmc(&g, 1, 5.0, SEED).unwrap();
        assert_eq!(p.event_count(), 0);
        assert_eq!(p.state_at(0.0).unwrap(), 1);
        assert_eq!(p.state_at(5.0).unwrap(), 1);
    }

    #[test]
    fn chain_paths_are_reproducible() {
        let g = two_state_graph();
        let a = simulate_ctmc(&g, 0, 50.0, SEED).unwrap();
        let b = simulate_ctmc(&g, 0, 50.0, SEED).unwrap();
        assert_eq!(a, b);
        let c = simulate_ctmc(&g, 0, 50.0, PathSeed { master: 7, stream: 1 }).unwrap();
        assert_ne!(a, c);
        let d = simulate_ctmc(&g, 0, 50.0, PathSeed { master: 8, stream: 0 }).unwrap();
        assert_ne!(a, d);
    }

    #[test]
    fn occupancy_of_symmetric_chain_is_balanced() {
        let g = two_state_graph();
        let space = *g.space();
        let ind0 = TestFunction::from_values(space, "1{x=0}", vec![1.0, 0.0], 1.0).unwrap();
        let horizon = 4000.0;
        let p = simulate_ctmc(&g, 0, horizon, SEED).unwrap();
        let occupancy = p.path_integral(&ind0, horizon).unwrap() / horizon;
        assert!((0.45..0.55).contains(&occupancy), "occupancy {occupancy}");
    }

    #[test]
    fn holding_time_tail_matches_exponential_law() {
        // P[no jump by δ] = e^{−δ} ≈ 0.95 at δ = 0.0513, rate 1
        let g = two_state_graph();
        let delta = 0.0513;
        let n = 2000;
        let mut still = 0usize;
        for stream in 0..n {
            let p = simulate_ctmc(
                &g,
                0,
                delta,
                PathSeed { master: 11, stream: stream as u64 },
            )
            .unwrap();
            if p.event_count() == 0 {
                still += 1;
            }
        }
        let p_hat = still as f64 / n as f64;
        assert!((0.93..0.97).contains(&p_hat), "p_hat {p_hat}");
    }

    #[test]
    fn chain_marginals_match_matrix_exponential() {
        // 99% Wilson band around the empirical P[η(t) = 0] must contain the
        // transition probability computed by uniformization
        let g = two_state_graph();
        let t = 0.5;
        let row = crate::expm::expm_apply_left(g.q_matrix().unwrap(), t, &[1.0, 0.0]).unwrap();
        let nu = SignedMeasure::delta(*g.space(), 0).unwrap();
        let ens =
            PathEnsemble::generate(&g, "m", &nu, 2000, t, SamplerKind::Chain, 21).unwrap();
        let hits = ens
            .paths()
            .iter()
            .filter(|p| p.state_at(t).unwrap() == 0)
            .count();
        let (lo, hi) = crate::stats::wilson_interval(hits, 2000, 0.99).unwrap();
        assert!(
            (lo..=hi).contains(&row[0]),
            "expm gives {}, band [{lo}, {hi}]",
            row[0]
        );
    }

    #[test]
    fn path_integral_examples() {
        let s = StateSpace::finite(2).unwrap();
        let c = catalog::constant(s, 3.0).unwrap();
        let path = CadlagPath::from_jumps(s, vec![(0.0, 0), (0.4, 1)], 1.0, SEED).unwrap();
        // constant: c·t up to one rounding of the segmented sum
        assert_abs_diff_eq!(path.path_integral(&c, 0.7).unwrap(), 3.0 * 0.7, epsilon = 1e-15);
        // two rectangles: g=2 before the jump, 5 after
        let g = TestFunction::from_values(s, "g", vec![2.0, 5.0], 5.0).unwrap();
        assert_abs_diff_eq!(path.path_integral(&g, 1.0).unwrap(), 3.8, epsilon = 1e-15);
        assert_eq!(path.path_integral(&g, 0.0).unwrap(), 0.0);
        assert!(path.path_integral(&g, 1.5).is_err());
    }

    #[test]
    fn right_continuous_evaluation() {
        let s = StateSpace::finite(3).unwrap();
        let p = CadlagPath::from_jumps(s, vec![(0.0, 0), (0.5, 2)], 1.0, SEED).unwrap();
        assert_eq!(p.state_at(0.499).unwrap(), 0);
        assert_eq!(p.state_at(0.5).unwrap(), 2);
        assert_eq!(p.state_at(1.0).unwrap(), 2);

        let gp = CadlagPath::from_grid(s, 0.25, vec![0, 1, 2, 1, 0], SEED).unwrap();
        assert_eq!(gp.horizon(), 1.0);
        assert_eq!(gp.state_at(0.3).unwrap(), 1);
        assert_eq!(gp.state_at(0.5).unwrap(), 2);
        assert_eq!(gp.state_at(1.0).unwrap(), 0);
    }

    #[test]
    fn modulus_event_examples() {
        let s = StateSpace::finite(2).unwrap();
        let constant = CadlagPath::from_jumps(s, vec![(0.0, 0)], 1.0, SEED).unwrap();
        assert!(constant.modulus_event(1.0, 1e-9).unwrap());

        let jumpy = CadlagPath::from_jumps(s, vec![(0.0, 0), (0.03, 1)], 1.0, SEED).unwrap();
        assert!(!jumpy.modulus_event(0.05, 0.5).unwrap());
        assert!(jumpy.modulus_event(0.02, 0.5).unwrap());
        assert!(jumpy.modulus_event(2.0, 0.5).is_err());
    }

    #[test]
    fn jump_list_validation() {
        let s = StateSpace::finite(2).unwrap();
        assert!(CadlagPath::from_jumps(s, vec![], 1.0, SEED).is_err());
        assert!(CadlagPath::from_jumps(s, vec![(0.1, 0)], 1.0, SEED).is_err());
        assert!(CadlagPath::from_jumps(s, vec![(0.0, 0), (0.0, 1)], 1.0, SEED).is_err());
        assert!(CadlagPath::from_jumps(s, vec![(0.0, 0), (2.0, 1)], 1.0, SEED).is_err());
        assert!(CadlagPath::from_jumps(s, vec![(0.0, 7)], 1.0, SEED).is_err());
    }

    #[test]
    fn frozen_coefficients_give_constant_or_drifting_paths() {
        let s = StateSpace::real_grid(10.0, 0.01).unwrap();
        let zeros = vec![0.0; s.len()];
        let x0 = s.point_at(1.0).unwrap();
        let p = simulate_diffusion_raw(s, &zeros, &zeros, x0, 1.0, 0.01, SEED).unwrap();
        for t in [0.0, 0.25, 1.0] {
            assert_eq!(p.state_at(t).unwrap(), x0);
        }
        // pure drift b = 1: ends near x0 + 1
        let ones = vec![1.0; s.len()];
        let p = simulate_diffusion_raw(s, &ones, &zeros, x0, 1.0, 0.01, SEED).unwrap();
        let end = s.coord(p.state_at(1.0).unwrap());
        assert_abs_diff_eq!(end, 2.0, epsilon = 1e-9);
    }

    #[test]
    fn diffusion_requires_consistent_dt() {
        let s = StateSpace::real_grid(5.0, 0.1).unwrap();
        let g = build_diffusion_1d(|_| 0.0, |_| 1.0, s).unwrap();
        let x0 = s.point_at(0.0).unwrap();
        assert!(simulate_diffusion(&g, x0, 1.0, -0.1, SEED).is_err());
        assert!(simulate_diffusion(&g, x0, 1.0, 0.3, SEED).is_err());
        assert!(simulate_diffusion(&g, x0, 1.0, 0.25, SEED).is_ok());
    }

    #[test]
    fn brownian_moments_smoke() {
        let s = StateSpace::real_grid(10.0, 0.01).unwrap();
        let g = build_diffusion_1d(|_| 0.0, |_| 1.0, s).unwrap();
        let nu = SignedMeasure::delta(s, s.point_at(0.0).unwrap()).unwrap();
        let ens = PathEnsemble::generate(
            &g,
            "bm",
            &nu,
            2000,
            1.0,
            SamplerKind::Diffusion { dt: 0.01 },
            99,
        )
        .unwrap();
        let ends: Vec<f64> = ens
            .paths()
            .iter()
            .map(|p| s.coord(p.state_at(1.0).unwrap()))
            .collect();
        let (mean, sd) = crate::stats::mean_std(&ends);
        assert!(mean.abs() < 0.1, "mean {mean}");
        assert!((sd - 1.0).abs() < 0.1, "sd {sd}");
    }

    #[test]
    fn ensembles_are_deterministic_and_order_independent() {
        let g = two_state_graph();
        let nu = SignedMeasure::new(*g.space(), [(0, 0.5), (1, 0.5)]).unwrap();
        let a = PathEnsemble::generate(&g, "m", &nu, 64, 10.0, SamplerKind::Chain, 42).unwrap();
        let b = PathEnsemble::generate(&g, "m", &nu, 64, 10.0, SamplerKind::Chain, 42).unwrap();
        assert_eq!(a.to_csv(), b.to_csv());
        let c = PathEnsemble::generate(&g, "m", &nu, 64, 10.0, SamplerKind::Chain, 43).unwrap();
        assert_ne!(a.to_csv(), c.to_csv());
        // initial states follow the law
        let m0 = a.marginal_at(0.0).unwrap();
        assert!(m0.is_probability());
        assert!((m0.weight_at(0) - 0.5).abs() < 0.2);
    }

    #[test]
    fn csv_roundtrip_preserves_paths() {
        let g = two_state_graph();
        let nu = SignedMeasure::delta(*g.space(), 0).unwrap();
        let ens =
            PathEnsemble::generate(&g, "chain", &nu, 16, 5.0, SamplerKind::Chain, 5).unwrap();
        let text = ens.to_csv();
        let back = PathEnsemble::from_csv(*g.space(), &text).unwrap();
        assert_eq!(back.len(), ens.len());
        assert_eq!(back.master_seed(), 5);
        for (p, q) in ens.paths().iter().zip(back.paths()) {
            assert_eq!(p, q);
        }

        let s = StateSpace::real_grid(5.0, 0.1).unwrap();
        let gd = build_diffusion_1d(|_| 0.0, |_| 1.0, s).unwrap();
        let nud = SignedMeasure::delta(s, s.point_at(0.0).unwrap()).unwrap();
        let ed = PathEnsemble::generate(
            &gd,
            "bm",
            &nud,
            4,
            0.5,
            SamplerKind::Diffusion { dt: 0.05 },
            6,
        )
        .unwrap();
        let back = PathEnsemble::from_csv(s, &ed.to_csv()).unwrap();
        for (p, q) in ed.paths().iter().zip(back.paths()) {
            assert_eq!(p, q);
        }
    }

    #[test]
    fn ensemble_validations() {
        let g = two_state_graph();
        let not_prob = SignedMeasure::new(*g.space(), [(0, 0.4)]).unwrap();
        assert!(PathEnsemble::generate(&g, "m", &not_prob, 4, 1.0, SamplerKind::Chain, 1)
            .is_err());
        let nu = SignedMeasure::delta(*g.space(), 0).unwrap();
        assert!(PathEnsemble::generate(&g, "m", &nu, 0, 1.0, SamplerKind::Chain, 1).is_err());
        // non-conservative chains are refused by the sampler
        let killed = build_ctmc(
            QMatrix::from_rows(vec![vec![-1.0, 1.0], vec![1.0, -1.0]])
                .unwrap()
                .uniformly_killed(0.3)
                .unwrap(),
        )
        .unwrap();
        assert!(simulate_ctmc(&killed, 0, 1.0, SEED).is_err());
    }
}
