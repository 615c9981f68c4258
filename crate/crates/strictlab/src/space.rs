//! Concrete metric state spaces with declared compact exhaustions.
//!
//! Three families are supported: finite point sets with the discrete metric,
//! truncated countable spaces `{0, 1, ..., n_max}` with the `|i - j|` metric,
//! and symmetric real grids `[-L, L]` with spacing `h` and the Euclidean
//! metric. Each space declares an increasing sequence of compact sets
//! `K_1 ⊆ K_2 ⊆ ...` at construction; the strict seminorms, cutoff families,
//! and containment certificates are all parametrized by that exhaustion.
//!
//! Points are addressed by their index in `0..len()`. Every index range of an
//! exhaustion element is contiguous, so compact sets are stored as ranges.

use crate::error::{Error, Result};

/// Which of the three space families a [`StateSpace`] belongs to.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum SpaceKind {
    /// `n` abstract points with the discrete metric; compact.
    Finite { n: usize },
    /// `{0, ..., n_max}` with metric `|i - j|`; locally compact, and a
    /// truncation of the non-compact countable space.
    TruncatedCountable { n_max: usize },
    /// Grid `{-L, -L+h, ..., L}` with the Euclidean metric; a truncation of
    /// the real line.
    RealGrid { half_width: f64, spacing: f64 },
}

/// A concrete state space: a family kind plus a declared compact exhaustion.
///
/// Immutable after construction; all operations are pure.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct StateSpace {
    kind: SpaceKind,
    /// Number of grid cells on each side of 0 (real grid only).
    grid_half_cells: usize,
    /// Radius increment per exhaustion index: `K_n` has radius `n * step`
    /// (coordinate units on grids, index units on countable spaces).
    exhaustion_step: f64,
}

impl StateSpace {
    /// A finite space of `n` points with the discrete metric.
    /// The exhaustion is trivial: `K_n` is the whole space for every `n`.
    pub fn finite(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::Validation("finite space needs at least one point".into()));
        }
        Ok(Self { kind: SpaceKind::Finite { n }, grid_half_cells: 0, exhaustion_step: 1.0 })
    }

    /// The truncated countable space `{0, ..., n_max}` with exhaustion
    /// `K_n = {0, ..., n}`.
    pub fn truncated_countable(n_max: usize) -> Result<Self> {
        if n_max == 0 {
            return Err(Error::Validation(
                "truncated countable space needs n_max >= 1".into(),
            ));
        }
        Ok(Self {
            kind: SpaceKind::TruncatedCountable { n_max },
            grid_half_cells: 0,
            exhaustion_step: 1.0,
        })
    }

    /// The grid `[-half_width, half_width]` with the given spacing and
    /// exhaustion `K_n = [-n, n] ∩ grid`.
    ///
    /// `half_width` must be an integer multiple of `spacing`.
    pub fn real_grid(half_width: f64, spacing: f64) -> Result<Self> {
        if !(half_width > 0.0) || !(spacing > 0.0) {
            return Err(Error::Validation(
                "real grid needs positive half_width and spacing".into(),
            ));
        }
        let cells = half_width / spacing;
        let rounded = cells.round();
        if (cells - rounded).abs() > 1e-9 * cells.max(1.0) {
            return Err(Error::Validation(format!(
                "half_width {half_width} is not a multiple of spacing {spacing}"
            )));
        }
        Ok(Self {
            kind: SpaceKind::RealGrid { half_width, spacing },
            grid_half_cells: rounded as usize,
            exhaustion_step: 1.0,
        })
    }

    /// Re-declare the exhaustion radius step (grids and countable spaces).
    pub fn with_exhaustion_step(mut self, step: f64) -> Result<Self> {
        if !(step > 0.0) {
            return Err(Error::Validation("exhaustion step must be positive".into()));
        }
        self.exhaustion_step = step;
        Ok(self)
    }

    pub fn kind(&self) -> SpaceKind {
        self.kind
    }

    /// Number of represented points.
    pub fn len(&self) -> usize {
        match self.kind {
            SpaceKind::Finite { n } => n,
            SpaceKind::TruncatedCountable { n_max } => n_max + 1,
            SpaceKind::RealGrid { .. } => 2 * self.grid_half_cells + 1,
        }
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Iterator over all point indices.
    pub fn points(&self) -> std::ops::Range<usize> {
        0..self.len()
    }

    /// Whether the space is a truncation of a locally compact, non-compact
    /// space (the setting in which vanishing at infinity is meaningful).
    pub fn is_locally_compact_noncompact(&self) -> bool {
        !matches!(self.kind, SpaceKind::Finite { .. })
    }

    /// Numeric coordinate of a point: the index itself on finite and
    /// countable spaces, the grid coordinate on real grids.
    pub fn coord(&self, i: usize) -> f64 {
        debug_assert!(i < self.len(), "point index {i} out of range");
        match self.kind {
            SpaceKind::Finite { .. } | SpaceKind::TruncatedCountable { .. } => i as f64,
            SpaceKind::RealGrid { spacing, .. } => {
                (i as f64 - self.grid_half_cells as f64) * spacing
            }
        }
    }

    /// Index of the represented point at coordinate `x`.
    pub fn point_at(&self, x: f64) -> Result<usize> {
        let err = || Error::Domain(format!("coordinate {x} is not a represented point"));
        match self.kind {
            SpaceKind::Finite { n } => {
                let i = x.round();
                if (x - i).abs() > 1e-9 || i < 0.0 || i >= n as f64 {
                    return Err(err());
                }
                Ok(i as usize)
            }
            SpaceKind::TruncatedCountable { n_max } => {
                let i = x.round();
                if (x - i).abs() > 1e-9 || i < 0.0 || i > n_max as f64 {
                    return Err(err());
                }
                Ok(i as usize)
            }
            SpaceKind::RealGrid { half_width, spacing } => {
                if x.abs() > half_width + 0.5 * spacing {
                    return Err(err());
                }
                let i = ((x + half_width) / spacing).round();
                let i = i as usize;
                if i >= self.len() || (self.coord(i) - x).abs() > 1e-6 * spacing.max(1.0) {
                    return Err(err());
                }
                Ok(i)
            }
        }
    }

    /// Index of the represented point closest to coordinate `x`, clamping
    /// into the truncation.
    pub fn nearest_point(&self, x: f64) -> usize {
        match self.kind {
            SpaceKind::Finite { n } => (x.round().max(0.0) as usize).min(n - 1),
            SpaceKind::TruncatedCountable { n_max } => (x.round().max(0.0) as usize).min(n_max),
            SpaceKind::RealGrid { half_width, spacing } => {
                let clamped = x.clamp(-half_width, half_width);
                let i = ((clamped + half_width) / spacing).round() as usize;
                i.min(self.len() - 1)
            }
        }
    }

    /// Metric distance between two represented points.
    ///
    /// Discrete on finite spaces, `|i - j|` on countable spaces, Euclidean on
    /// grids.
    pub fn distance(&self, x: usize, y: usize) -> Result<f64> {
        let n = self.len();
        if x >= n || y >= n {
            return Err(Error::Domain(format!(
                "point index out of range: {} (space has {n} points)",
                x.max(y)
            )));
        }
        Ok(match self.kind {
            SpaceKind::Finite { .. } => {
                if x == y {
                    0.0
                } else {
                    1.0
                }
            }
            SpaceKind::TruncatedCountable { .. } => (x as f64 - y as f64).abs(),
            SpaceKind::RealGrid { .. } => (self.coord(x) - self.coord(y)).abs(),
        })
    }

    /// Diameter of the represented space.
    pub fn diameter(&self) -> f64 {
        match self.kind {
            SpaceKind::Finite { n } => {
                if n == 1 {
                    0.0
                } else {
                    1.0
                }
            }
            SpaceKind::TruncatedCountable { n_max } => n_max as f64,
            SpaceKind::RealGrid { half_width, .. } => 2.0 * half_width,
        }
    }

    /// Smallest exhaustion index at which `K_n` is the whole represented
    /// space. Every larger index yields the same set.
    pub fn saturation_index(&self) -> usize {
        match self.kind {
            SpaceKind::Finite { .. } => 1,
            SpaceKind::TruncatedCountable { n_max } => {
                (n_max as f64 / self.exhaustion_step).ceil() as usize
            }
            SpaceKind::RealGrid { half_width, .. } => {
                (half_width / self.exhaustion_step).ceil() as usize
            }
        }
    }

    /// The `n`-th element of the declared exhaustion (`n >= 1`). Saturates at
    /// the whole represented space for large `n`.
    pub fn exhaustion_member(&self, n: usize) -> Result<CompactSet> {
        if n == 0 {
            return Err(Error::Domain("exhaustion index starts at 1".into()));
        }
        let radius = n as f64 * self.exhaustion_step;
        Ok(match self.kind {
            SpaceKind::Finite { n: pts } => CompactSet {
                space: *self,
                index: Some(n),
                lo: 0,
                hi: pts - 1,
            },
            SpaceKind::TruncatedCountable { n_max } => CompactSet {
                space: *self,
                index: Some(n),
                lo: 0,
                hi: (radius.floor() as usize).min(n_max),
            },
            SpaceKind::RealGrid { half_width, spacing } => {
                let r = radius.min(half_width);
                // tiny slack so that exactly-on-the-boundary grid points count
                let k = (r / spacing * (1.0 + 1e-12)).floor() as usize;
                let k = k.min(self.grid_half_cells);
                CompactSet {
                    space: *self,
                    index: Some(n),
                    lo: self.grid_half_cells - k,
                    hi: self.grid_half_cells + k,
                }
            }
        })
    }

    /// Smallest exhaustion index `n` such that `K_n` contains point `i`.
    pub fn min_exhaustion_index_containing(&self, i: usize) -> usize {
        debug_assert!(i < self.len(), "point index {i} out of range");
        let n = match self.kind {
            SpaceKind::Finite { .. } => 1,
            SpaceKind::TruncatedCountable { .. } => {
                ((i as f64 / self.exhaustion_step) * (1.0 - 1e-12)).ceil() as usize
            }
            SpaceKind::RealGrid { .. } => {
                ((self.coord(i).abs() / self.exhaustion_step) * (1.0 - 1e-12)).ceil() as usize
            }
        };
        n.clamp(1, self.saturation_index())
    }

    /// Ad-hoc compact set: all represented points within `radius` of the
    /// point with coordinate `center`.
    pub fn ball(&self, center: f64, radius: f64) -> CompactSet {
        let mut lo = usize::MAX;
        let mut hi = 0;
        for i in self.points() {
            let d = match self.kind {
                SpaceKind::Finite { .. } => {
                    if self.coord(i) == center {
                        0.0
                    } else {
                        1.0
                    }
                }
                _ => (self.coord(i) - center).abs(),
            };
            if d <= radius * (1.0 + 1e-12) {
                lo = lo.min(i);
                hi = hi.max(i);
            }
        }
        if lo == usize::MAX {
            CompactSet { space: *self, index: None, lo: 1, hi: 0 }
        } else {
            CompactSet { space: *self, index: None, lo, hi }
        }
    }
}

/// A compact subset of a state space: a contiguous range of point indices.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CompactSet {
    space: StateSpace,
    index: Option<usize>,
    lo: usize,
    hi: usize,
}

impl CompactSet {
    /// The empty set (admitted for the seminorm convention `p_∅ = 0`).
    pub fn empty(space: StateSpace) -> Self {
        Self { space, index: None, lo: 1, hi: 0 }
    }

    pub fn space(&self) -> &StateSpace {
        &self.space
    }

    /// Exhaustion index, when this set came from the declared exhaustion.
    pub fn exhaustion_index(&self) -> Option<usize> {
        self.index
    }

    pub fn contains(&self, i: usize) -> bool {
        self.lo <= i && i <= self.hi
    }

    pub fn is_empty(&self) -> bool {
        self.lo > self.hi
    }

    pub fn len(&self) -> usize {
        if self.is_empty() {
            0
        } else {
            self.hi - self.lo + 1
        }
    }

    /// Indices of the member points.
    pub fn indices(&self) -> std::ops::Range<usize> {
        if self.is_empty() {
            0..0
        } else {
            self.lo..self.hi + 1
        }
    }

    /// Set inclusion (both sets on the same space).
    pub fn is_subset_of(&self, other: &CompactSet) -> bool {
        self.is_empty() || (other.lo <= self.lo && self.hi <= other.hi)
    }

    pub fn is_whole_space(&self) -> bool {
        !self.is_empty() && self.lo == 0 && self.hi == self.space.len() - 1
    }
}
