//! Finitely-supported signed measures, duality pairings against test
//! functions, the Hahn–Jordan sign decomposition, dictionary-based weak and
//! vague convergence tests, and a tightness certificate over the declared
//! exhaustion.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::func::TestFunction;
use crate::space::StateSpace;

/// A signed measure with finitely many atoms on represented points.
///
/// Atoms are kept sorted by point index, with distinct points and no zero
/// weights, so equal measures have identical representations.
#[derive(Clone, Debug, PartialEq)]
pub struct SignedMeasure {
    space: StateSpace,
    atoms: Vec<(usize, f64)>,
}

impl SignedMeasure {
    /// Build from (point, weight) pairs. Duplicate points are merged by
    /// summing their weights; zero weights are pruned.
    pub fn new(space: StateSpace, atoms: impl IntoIterator<Item = (usize, f64)>) -> Result<Self> {
        let mut merged: BTreeMap<usize, f64> = BTreeMap::new();
        for (i, w) in atoms {
            if i >= space.len() {
                return Err(Error::Domain(format!("atom at point {i} outside the space")));
            }
            if !w.is_finite() {
                return Err(Error::Validation(format!("non-finite weight at point {i}")));
            }
            *merged.entry(i).or_insert(0.0) += w;
        }
        Ok(Self { space, atoms: merged.into_iter().filter(|(_, w)| *w != 0.0).collect() })
    }

    /// The zero measure.
    pub fn zero(space: StateSpace) -> Self {
        Self { space, atoms: Vec::new() }
    }

    /// Unit point mass at `i`.
    pub fn delta(space: StateSpace, i: usize) -> Result<Self> {
        Self::new(space, [(i, 1.0)])
    }

    /// Build from a dense weight vector, dropping exact zeros.
    pub fn from_dense(space: StateSpace, weights: &[f64]) -> Result<Self> {
        if weights.len() != space.len() {
            return Err(Error::Domain(format!(
                "dense vector has {} entries but the space has {} points",
                weights.len(),
                space.len()
            )));
        }
        Self::new(space, weights.iter().copied().enumerate())
    }

    pub fn space(&self) -> &StateSpace {
        &self.space
    }

    /// Sorted `(point, weight)` atoms.
    pub fn atoms(&self) -> &[(usize, f64)] {
        &self.atoms
    }

    /// Weight at a point (0 when the point carries no atom).
    pub fn weight_at(&self, i: usize) -> f64 {
        match self.atoms.binary_search_by_key(&i, |(p, _)| *p) {
            Ok(pos) => self.atoms[pos].1,
            Err(_) => 0.0,
        }
    }

    /// Σ |w_i|.
    pub fn total_variation(&self) -> f64 {
        self.atoms.iter().map(|(_, w)| w.abs()).sum()
    }

    /// Σ w_i (signed total mass).
    pub fn total_mass(&self) -> f64 {
        self.atoms.iter().map(|(_, w)| w).sum()
    }

    /// Non-negative weights summing to 1 within `1e-12`.
    pub fn is_probability(&self) -> bool {
        self.atoms.iter().all(|(_, w)| *w >= 0.0) && (self.total_mass() - 1.0).abs() <= 1e-12
    }

    /// Mass on a compact set: Σ of weights at points of `k`.
    pub fn mass_on(&self, k: &crate::space::CompactSet) -> Result<f64> {
        if k.space() != &self.space {
            return Err(Error::Domain("compact set lives on a different space".into()));
        }
        Ok(self.atoms.iter().filter(|(i, _)| k.contains(*i)).map(|(_, w)| w).sum())
    }

    /// Duality pairing `⟨f, μ⟩ = Σ f(x_i) w_i`.
    pub fn pair(&self, f: &TestFunction) -> Result<f64> {
        if f.space() != &self.space {
            return Err(Error::Domain(format!(
                "function '{}' and measure live on different spaces",
                f.name()
            )));
        }
        Ok(self.atoms.iter().map(|(i, w)| f.value(*i) * w).sum())
    }

    /// Scalar multiple.
    pub fn scale(&self, lambda: f64) -> Result<Self> {
        if !lambda.is_finite() {
            return Err(Error::Validation("scale factor must be finite".into()));
        }
        Self::new(self.space, self.atoms.iter().map(|(i, w)| (*i, lambda * w)))
    }

    /// Sum of two measures on the same space.
    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.space != other.space {
            return Err(Error::Domain("measures live on different spaces".into()));
        }
        Self::new(self.space, self.atoms.iter().chain(&other.atoms).copied())
    }
}

/// Sign decomposition `μ = c⁺μ⁺ − c⁻μ⁻` with mutually singular probability
/// (or zero) parts.
///
/// The unnormalized positive and negative parts are kept alongside the
/// normalized views so that [`reconstruct`](Self::reconstruct) returns the
/// input atoms exactly, with no rounding from the normalize-then-rescale
/// round trip.
#[derive(Clone, Debug)]
pub struct HahnJordan {
    pub c_plus: f64,
    pub c_minus: f64,
    /// Normalized positive part: a probability measure, or zero when
    /// `c_plus == 0`.
    pub mu_plus: SignedMeasure,
    /// Normalized negative part.
    pub mu_minus: SignedMeasure,
    pos: SignedMeasure,
    neg: SignedMeasure,
}

impl HahnJordan {
    /// `c⁺ + c⁻`; equals the input's total variation.
    pub fn total_variation(&self) -> f64 {
        self.c_plus + self.c_minus
    }

    /// `c⁺μ⁺ − c⁻μ⁻`, assembled from the exact unnormalized parts.
    pub fn reconstruct(&self) -> Result<SignedMeasure> {
        self.pos.add(&self.neg.scale(-1.0)?)
    }
}

/// Split a measure by the sign of its atoms.
///
/// The zero measure yields `c⁺ = c⁻ = 0` with both parts zero.
pub fn hahn_jordan(mu: &SignedMeasure) -> Result<HahnJordan> {
    let space = *mu.space();
    let pos = SignedMeasure::new(space, mu.atoms.iter().copied().filter(|(_, w)| *w > 0.0))?;
    let neg =
        SignedMeasure::new(space, mu.atoms.iter().map(|(i, w)| (*i, -w)).filter(|(_, w)| *w > 0.0))?;
    let c_plus = pos.total_mass();
    let c_minus = neg.total_mass();
    let mu_plus = if c_plus > 0.0 { pos.scale(1.0 / c_plus)? } else { SignedMeasure::zero(space) };
    let mu_minus =
        if c_minus > 0.0 { neg.scale(1.0 / c_minus)? } else { SignedMeasure::zero(space) };
    Ok(HahnJordan { c_plus, c_minus, mu_plus, mu_minus, pos, neg })
}

/// Residual record of a dictionary convergence test for one test function.
#[derive(Clone, Debug)]
pub struct PairingResidual {
    /// Name of the dictionary function.
    pub function: String,
    /// `|⟨f, μ_n⟩ − ⟨f, μ⟩|` at the last sequence index.
    pub last: f64,
    /// First index from which the residuals stay at or below tolerance, when
    /// such a tail exists.
    pub tail_start: Option<usize>,
}

/// Outcome of a dictionary convergence test.
#[derive(Clone, Debug)]
pub struct ConvergenceVerdict {
    /// True when every dictionary residual is at or below tolerance at the
    /// horizon (the last sequence index).
    pub converges: bool,
    pub residuals: Vec<PairingResidual>,
}

fn dictionary_test(
    mus: &[SignedMeasure],
    mu: &SignedMeasure,
    dictionary: &[TestFunction],
    tol: f64,
) -> Result<ConvergenceVerdict> {
    if mus.is_empty() {
        return Err(Error::Precondition("empty measure sequence".into()));
    }
    if !(tol > 0.0) {
        return Err(Error::Validation("tolerance must be positive".into()));
    }
    let mut residuals = Vec::with_capacity(dictionary.len());
    let mut converges = true;
    for f in dictionary {
        let at_limit = mu.pair(f)?;
        let r: Vec<f64> =
            mus.iter().map(|m| m.pair(f).map(|v| (v - at_limit).abs())).collect::<Result<_>>()?;
        let last = *r.last().expect("non-empty");
        let mut tail_start = None;
        for (n, v) in r.iter().enumerate().rev() {
            if *v <= tol {
                tail_start = Some(n + 1);
            } else {
                break;
            }
        }
        if last > tol {
            converges = false;
        }
        residuals.push(PairingResidual { function: f.name().to_string(), last, tail_start });
    }
    Ok(ConvergenceVerdict { converges, residuals })
}

/// Test convergence of `μ_n → μ` against a dictionary of bounded functions.
///
/// This probes the weak topology: the dictionary must contain the constant 1
/// so that escaping mass is detected.
pub fn weak_convergence_test(
    mus: &[SignedMeasure],
    mu: &SignedMeasure,
    dictionary: &[TestFunction],
    tol: f64,
) -> Result<ConvergenceVerdict> {
    if dictionary.is_empty() {
        return Err(Error::Precondition("dictionary must be nonempty".into()));
    }
    let has_one = dictionary.iter().any(|f| f.values().iter().all(|v| (v - 1.0).abs() <= 1e-12));
    if !has_one {
        return Err(Error::Precondition(
            "weak-convergence dictionary must include the constant 1".into(),
        ));
    }
    dictionary_test(mus, mu, dictionary, tol)
}

/// Test convergence of `μ_n → μ` against a dictionary of functions vanishing
/// at infinity (the vague topology). Every dictionary function must carry the
/// vanishing declaration.
pub fn vague_convergence_test(
    mus: &[SignedMeasure],
    mu: &SignedMeasure,
    dictionary: &[TestFunction],
    tol: f64,
) -> Result<ConvergenceVerdict> {
    if dictionary.is_empty() {
        return Err(Error::Precondition("dictionary must be nonempty".into()));
    }
    for f in dictionary {
        if !f.is_vanishing() {
            return Err(Error::Validation(format!(
                "dictionary function '{}' is not declared vanishing at infinity",
                f.name()
            )));
        }
    }
    dictionary_test(mus, mu, dictionary, tol)
}

/// A uniform-mass certificate: the smallest exhaustion element holding at
/// least `1 − eps` of the mass of every measure in the family.
#[derive(Clone, Debug)]
pub struct TightnessCertificate {
    /// Exhaustion index of the certifying compact set.
    pub index: usize,
    /// Smallest mass any family member puts on it.
    pub min_mass: f64,
    /// Mass per family member on the certifying set.
    pub masses: Vec<f64>,
}

/// Find the smallest `K_n` with `inf_family μ(K_n) ≥ 1 − eps`.
pub fn tightness_test(
    family: &[SignedMeasure],
    eps: f64,
) -> Result<TightnessCertificate> {
    if family.is_empty() {
        return Err(Error::Precondition("empty measure family".into()));
    }
    if !(eps > 0.0 && eps < 1.0) {
        return Err(Error::Validation("eps must lie in (0, 1)".into()));
    }
    let space = family[0].space();
    for m in family {
        if m.space() != space {
            return Err(Error::Domain("family members live on different spaces".into()));
        }
        if !m.is_probability() {
            return Err(Error::Precondition(
                "tightness test requires probability measures".into(),
            ));
        }
    }
    let horizon = space.saturation_index();
    let mut best: Option<(usize, f64, Vec<f64>)> = None;
    for n in 1..=horizon {
        let k = space.exhaustion_member(n)?;
        let masses: Vec<f64> = family.iter().map(|m| m.mass_on(&k)).collect::<Result<_>>()?;
        let min_mass = masses.iter().fold(f64::INFINITY, |a, b| a.min(*b));
        if min_mass >= 1.0 - eps {
            best = Some((n, min_mass, masses));
            break;
        }
    }
    match best {
        Some((index, min_mass, masses)) => Ok(TightnessCertificate { index, min_mass, masses }),
        None => Err(Error::ContainmentHorizon {
            best_index: horizon,
            best_lower_bound: 0.0,
            required: 1.0 - eps,
        }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use approx::assert_abs_diff_eq;
    use rand::prelude::*;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn pairing_examples() {
        let two = StateSpace::finite(2).unwrap();
        let f = TestFunction::from_values(two, "e0", vec![1.0, 0.0], 1.0).unwrap();
        let mu = SignedMeasure::new(two, [(0, 0.75), (1, 0.25)]).unwrap();
        assert_eq!(mu.pair(&f).unwrap(), 0.75);

        let one = catalog::constant(two, 1.0).unwrap();
        assert_eq!(mu.pair(&one).unwrap(), 1.0);

        let c = StateSpace::truncated_countable(5).unwrap();
        let id = catalog::clipped_identity(c, 5.0).unwrap();
        let nu = SignedMeasure::new(c, [(0, 3.0), (1, -2.0)]).unwrap();
        assert_eq!(nu.pair(&id).unwrap(), -2.0);
    }

    #[test]
    fn pairing_is_bilinear_and_bounded() {
        let s = StateSpace::truncated_countable(30).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..50 {
            let atoms_a: Vec<(usize, f64)> =
                (0..6).map(|_| (rng.gen_range(0..31), rng.gen_range(-2.0..2.0))).collect();
            let atoms_b: Vec<(usize, f64)> =
                (0..6).map(|_| (rng.gen_range(0..31), rng.gen_range(-2.0..2.0))).collect();
            let mu = SignedMeasure::new(s, atoms_a).unwrap();
            let nu = SignedMeasure::new(s, atoms_b).unwrap();
            let fv: Vec<f64> = (0..s.len()).map(|_| rng.gen_range(-1.0..1.0)).collect();
            let gv: Vec<f64> = (0..s.len()).map(|_| rng.gen_range(-1.0..1.0)).collect();
            let f = TestFunction::from_values(s, "f", fv, 1.0).unwrap();
            let g = TestFunction::from_values(s, "g", gv, 1.0).unwrap();
            let a: f64 = rng.gen_range(-2.0..2.0);

            let lhs = mu.add(&nu.scale(a).unwrap()).unwrap().pair(&f).unwrap();
            let rhs = mu.pair(&f).unwrap() + a * nu.pair(&f).unwrap();
            assert_abs_diff_eq!(lhs, rhs, epsilon = 1e-10);

            let sum = f.add(&g).unwrap();
            assert_abs_diff_eq!(
                mu.pair(&sum).unwrap(),
                mu.pair(&f).unwrap() + mu.pair(&g).unwrap(),
                epsilon = 1e-10
            );

            assert!(mu.pair(&f).unwrap().abs() <= f.sup_norm() * mu.total_variation() + 1e-12);
        }
    }

    #[test]
    fn hahn_jordan_examples() {
        let s = StateSpace::truncated_countable(5).unwrap();
        let mu = SignedMeasure::new(s, [(0, 3.0), (1, -2.0)]).unwrap();
        let hj = hahn_jordan(&mu).unwrap();
        assert_eq!(hj.c_plus, 3.0);
        assert_eq!(hj.c_minus, 2.0);
        assert_eq!(hj.mu_plus, SignedMeasure::delta(s, 0).unwrap());
        assert_eq!(hj.mu_minus, SignedMeasure::delta(s, 1).unwrap());
        assert_eq!(hj.total_variation(), 5.0);

        let p = SignedMeasure::new(s, [(2, 0.5), (3, 0.5)]).unwrap();
        let hj = hahn_jordan(&p).unwrap();
        assert_eq!(hj.c_plus, 1.0);
        assert_eq!(hj.c_minus, 0.0);
        assert_eq!(hj.mu_plus, p);

        let zero = SignedMeasure::zero(s);
        let hj = hahn_jordan(&zero).unwrap();
        assert_eq!(hj.c_plus, 0.0);
        assert_eq!(hj.c_minus, 0.0);
        assert!(hj.mu_plus.atoms().is_empty());
    }

    #[test]
    fn hahn_jordan_reconstruction_is_exact_on_random_measures() {
        let s = StateSpace::real_grid(10.0, 0.1).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        for _ in 0..200 {
            let atoms: Vec<(usize, f64)> = (0..rng.gen_range(0..12))
                .map(|_| (rng.gen_range(0..s.len()), rng.gen_range(-1.0..1.0) * 0.3))
                .collect();
            let mu = SignedMeasure::new(s, atoms).unwrap();
            let hj = hahn_jordan(&mu).unwrap();
            // exact equality, atom by atom: no tolerance
            assert_eq!(hj.reconstruct().unwrap(), mu);
            // mutual singularity
            for (i, _) in hj.mu_plus.atoms() {
                assert_eq!(hj.mu_minus.weight_at(*i), 0.0);
            }
            assert_abs_diff_eq!(
                hj.total_variation(),
                mu.total_variation(),
                epsilon = 1e-15 * (1.0 + mu.total_variation())
            );
            if hj.c_plus > 0.0 {
                assert!(hj.mu_plus.is_probability());
            }
        }
    }

    #[test]
    fn weak_test_detects_escaping_mass_and_vague_test_does_not() {
        let s = StateSpace::truncated_countable(100).unwrap();
        let mus: Vec<SignedMeasure> =
            (1..=100).map(|n| SignedMeasure::delta(s, n).unwrap()).collect();
        let zero = SignedMeasure::zero(s);
        let one = catalog::constant(s, 1.0).unwrap();
        let bump = catalog::gaussian(s).unwrap().declare_vanishing().unwrap();
        let narrow = catalog::scaled_gaussian(s, 1.0, 0.5, 3.0)
            .unwrap()
            .declare_vanishing()
            .unwrap();

        let weak =
            weak_convergence_test(&mus, &zero, &[one, bump.clone(), narrow.clone()], 1e-6)
                .unwrap();
        assert!(!weak.converges);
        assert_eq!(weak.residuals[0].last, 1.0);

        let vague = vague_convergence_test(&mus, &zero, &[bump, narrow], 1e-6).unwrap();
        assert!(vague.converges, "residuals: {:?}", vague.residuals);
    }

    #[test]
    fn point_masses_converge_weakly_to_the_limit_point() {
        let s = StateSpace::real_grid(2.0, 1.0 / 1024.0).unwrap();
        let mus: Vec<SignedMeasure> = (1..=64)
            .map(|n| SignedMeasure::delta(s, s.nearest_point(1.0 / n as f64)).unwrap())
            .collect();
        let mu = SignedMeasure::delta(s, s.point_at(0.0).unwrap()).unwrap();
        let dict = [
            catalog::constant(s, 1.0).unwrap(),
            catalog::clipped_identity(s, 2.0).unwrap(),
            catalog::gaussian(s).unwrap(),
        ];
        let v = weak_convergence_test(&mus, &mu, &dict, 0.05).unwrap();
        assert!(v.converges);

        let same = weak_convergence_test(&[mu.clone()], &mu, &dict, 1e-15).unwrap();
        assert!(same.converges);
        assert!(same.residuals.iter().all(|r| r.last == 0.0));
    }

    #[test]
    fn dictionary_preconditions() {
        let s = StateSpace::truncated_countable(10).unwrap();
        let mu = SignedMeasure::delta(s, 0).unwrap();
        let bump = catalog::gaussian(s).unwrap().declare_vanishing().unwrap();
        let one = catalog::constant(s, 1.0).unwrap();

        // weak test without the constant 1
        assert!(weak_convergence_test(&[mu.clone()], &mu, &[bump.clone()], 0.1).is_err());
        // vague test with a non-vanishing function
        assert!(vague_convergence_test(&[mu.clone()], &mu, &[one], 0.1).is_err());
        // empty dictionary
        assert!(weak_convergence_test(&[mu.clone()], &mu, &[], 0.1).is_err());
    }

    #[test]
    fn weak_convergence_implies_vague_on_the_vanishing_subset() {
        let s = StateSpace::truncated_countable(40).unwrap();
        let mus: Vec<SignedMeasure> = (1..=20)
            .map(|n| {
                SignedMeasure::new(s, [(0, 1.0 - 1.0 / n as f64), (1, 1.0 / n as f64)]).unwrap()
            })
            .collect();
        let mu = SignedMeasure::delta(s, 0).unwrap();
        let one = catalog::constant(s, 1.0).unwrap();
        let vanishing: Vec<TestFunction> = vec![
            catalog::gaussian(s).unwrap().declare_vanishing().unwrap(),
            catalog::scaled_gaussian(s, 1.0, 2.0, 1.0).unwrap().declare_vanishing().unwrap(),
        ];
        let mut dict = vec![one];
        dict.extend(vanishing.clone());
        let weak = weak_convergence_test(&mus, &mu, &dict, 0.06).unwrap();
        assert!(weak.converges);
        let vague = vague_convergence_test(&mus, &mu, &vanishing, 0.06).unwrap();
        assert!(vague.converges);
    }

    #[test]
    fn tightness_examples() {
        let s = StateSpace::truncated_countable(100).unwrap();
        let single = [SignedMeasure::delta(s, 0).unwrap()];
        let cert = tightness_test(&single, 0.1).unwrap();
        assert_eq!(cert.index, 1);
        assert_eq!(cert.min_mass, 1.0);

        let family: Vec<SignedMeasure> =
            (0..=50).map(|m| SignedMeasure::delta(s, m).unwrap()).collect();
        let cert = tightness_test(&family, 0.1).unwrap();
        assert_eq!(cert.index, 50);

        // Binomial(10, 1/2) masses: C(10,k)/1024 exactly
        let mut coef = 1u64;
        let mut atoms = Vec::new();
        for k in 0..=10usize {
            atoms.push((k, coef as f64 / 1024.0));
            coef = coef * (10 - k as u64) / (k as u64 + 1);
        }
        let binom = [SignedMeasure::new(s, atoms).unwrap()];
        let cert = tightness_test(&binom, 1e-4).unwrap();
        assert_eq!(cert.index, 10);

        // non-probability member rejected
        let bad = [SignedMeasure::new(s, [(0, 0.5)]).unwrap()];
        assert!(tightness_test(&bad, 0.1).is_err());
    }

    #[test]
    fn atoms_merge_and_prune() {
        let s = StateSpace::finite(3).unwrap();
        let mu = SignedMeasure::new(s, [(1, 0.5), (1, 0.5), (2, 0.25), (2, -0.25)]).unwrap();
        assert_eq!(mu.atoms(), &[(1, 1.0)]);
        assert_eq!(mu.weight_at(2), 0.0);
        assert!(SignedMeasure::new(s, [(7, 1.0)]).is_err());
        assert!(SignedMeasure::new(s, [(0, f64::NAN)]).is_err());
    }
}
