//! Actions of the matrix exponential `exp(tQ)` for rate matrices, by
//! uniformization.
//!
//! With `Λ = max_i |q_ii|` and `P = I + Q/Λ` (a substochastic matrix with
//! non-negative entries),
//!
//! `exp(tQ) v = Σ_k e^{−Λt} (Λt)^k / k! · P^k v`.
//!
//! Every term is non-negative for non-negative input, so positivity is
//! preserved without cancellation, and for conservative `Q` the Poisson
//! weights are normalized to unit sum so that constants (right action) and
//! total mass (left action) are reproduced to machine precision. Large `Λt`
//! is handled by splitting `t` into equal chunks.

use crate::error::{Error, Result};
use crate::generator::QMatrix;

/// Λ·δ per uniformization chunk; keeps `e^{−Λδ}` well inside the normal
/// floating-point range.
const MAX_CHUNK_RATE: f64 = 30.0;
/// Poisson tail mass dropped per chunk.
const TAIL: f64 = 1e-16;

/// Right action `v ↦ exp(tQ) v` (evolution of function values).
pub fn expm_apply(q: &QMatrix, t: f64, v: &[f64]) -> Result<Vec<f64>> {
    expm_action(q, t, v, false)
}

/// Left action `w ↦ wᵀ exp(tQ)` (evolution of measure weights).
pub fn expm_apply_left(q: &QMatrix, t: f64, w: &[f64]) -> Result<Vec<f64>> {
    expm_action(q, t, w, true)
}

fn expm_action(q: &QMatrix, t: f64, v: &[f64], left: bool) -> Result<Vec<f64>> {
    if !(t >= 0.0) || !t.is_finite() {
        return Err(Error::Validation(format!("time must be finite and non-negative, got {t}")));
    }
    let n = q.dim();
    if v.len() != n {
        return Err(Error::Domain(format!("vector has {} entries, matrix is {n}×{n}", v.len())));
    }
    if v.iter().any(|x| !x.is_finite()) {
        return Err(Error::Validation("non-finite vector entry".into()));
    }
    let lambda = q.max_exit_rate();
    if t == 0.0 || lambda == 0.0 {
        return Ok(v.to_vec());
    }
    let chunks = (lambda * t / MAX_CHUNK_RATE).ceil().max(1.0) as usize;
    let delta = t / chunks as f64;
    let weights = poisson_weights(lambda * delta);
    let mut cur = v.to_vec();
    for _ in 0..chunks {
        cur = uniformized_chunk(q, lambda, &weights, &cur, left);
    }
    Ok(cur)
}

/// Normalized Poisson(rate) weights up to the index where the tail mass
/// drops below `TAIL`.
fn poisson_weights(rate: f64) -> Vec<f64> {
    let mut w = vec![(-rate).exp()];
    let mut cum = w[0];
    let mut k = 0usize;
    while cum < 1.0 - TAIL || (k as f64) < rate {
        k += 1;
        let next = w[k - 1] * rate / k as f64;
        w.push(next);
        cum += next;
        if k > 4000 {
            break;
        }
    }
    for x in &mut w {
        *x /= cum;
    }
    w
}

fn uniformized_chunk(q: &QMatrix, lambda: f64, weights: &[f64], v: &[f64], left: bool) -> Vec<f64> {
    let n = v.len();
    let rates = q.rates();
    // P x = x + (Q x)/Λ, applied on the chosen side
    let step = |x: &[f64]| -> Vec<f64> {
        let mut out = x.to_vec();
        for i in 0..n {
            let mut acc = 0.0;
            for j in 0..n {
                acc += if left { x[j] * rates[(j, i)] } else { rates[(i, j)] * x[j] };
            }
            out[i] += acc / lambda;
        }
        out
    };
    let mut term = v.to_vec();
    let mut out: Vec<f64> = term.iter().map(|x| weights[0] * x).collect();
    for wk in &weights[1..] {
        term = step(&term);
        for (o, x) in out.iter_mut().zip(&term) {
            *o += wk * x;
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use nalgebra::DMatrix;
    use rand::prelude::*;
    use rand_chacha::ChaCha8Rng;

    fn symmetric_two_state() -> QMatrix {
        QMatrix::from_rows(vec![vec![-1.0, 1.0], vec![1.0, -1.0]]).unwrap()
    }

    #[test]
    fn two_state_closed_form() {
        // exp(tQ) = [[(1+e^{−2t})/2, (1−e^{−2t})/2], ...] for the symmetric chain
        let q = symmetric_two_state();
        for t in [0.0, 0.05, 0.5_f64.ln() / -2.0 * 2.0, 1.0, 7.3] {
            let e = (-2.0 * t).exp();
            let got = expm_apply(&q, t, &[1.0, 0.0]).unwrap();
            assert_abs_diff_eq!(got[0], (1.0 + e) / 2.0, epsilon = 1e-12);
            assert_abs_diff_eq!(got[1], (1.0 - e) / 2.0, epsilon = 1e-12);
        }
        // t = ln(2)/2 gives rows (0.75, 0.25)
        let t = 2.0f64.ln() / 2.0;
        let got = expm_apply(&q, t, &[1.0, 0.0]).unwrap();
        assert_abs_diff_eq!(got[0], 0.75, epsilon = 1e-12);
        assert_abs_diff_eq!(got[1], 0.25, epsilon = 1e-12);
    }

    #[test]
    fn three_state_complete_graph() {
        // exp(tQ)_ij = 1/3 + (δ_ij − 1/3) e^{−3t}
        let q = QMatrix::from_rows(vec![
            vec![-2.0, 1.0, 1.0],
            vec![1.0, -2.0, 1.0],
            vec![1.0, 1.0, -2.0],
        ])
        .unwrap();
        let t = 0.7f64;
        let e = (-3.0 * t).exp();
        for basis in 0..3 {
            let mut v = [0.0; 3];
            v[basis] = 1.0;
            let got = expm_apply(&q, t, &v).unwrap();
            for i in 0..3 {
                let expect = 1.0 / 3.0 + (if i == basis { 1.0 } else { 0.0 } - 1.0 / 3.0) * e;
                assert_abs_diff_eq!(got[i], expect, epsilon = 1e-12);
            }
        }
    }

    #[test]
    fn three_state_path_graph_spectral_form() {
        // eigenvalues 0, −1, −3 with projectors J/3, vvᵀ/2 (v=(1,0,−1)),
        // wwᵀ/6 (w=(1,−2,1))
        let q = QMatrix::from_rows(vec![
            vec![-1.0, 1.0, 0.0],
            vec![1.0, -2.0, 1.0],
            vec![0.0, 1.0, -1.0],
        ])
        .unwrap();
        let t = 0.5f64;
        let (e1, e3) = ((-t).exp(), (-3.0 * t).exp());
        let v = [1.0f64, 0.0, -1.0];
        let w = [1.0f64, -2.0, 1.0];
        for basis in 0..3 {
            let mut x = [0.0; 3];
            x[basis] = 1.0;
            let got = expm_apply(&q, t, &x).unwrap();
            for i in 0..3 {
                let expect = 1.0 / 3.0 + e1 * v[i] * v[basis] / 2.0 + e3 * w[i] * w[basis] / 6.0;
                assert_abs_diff_eq!(got[i], expect, epsilon = 1e-12);
            }
        }
    }

    #[test]
    fn large_rate_times_use_chunking() {
        let q = QMatrix::from_rows(vec![vec![-50.0, 50.0], vec![50.0, -50.0]]).unwrap();
        let got = expm_apply(&q, 30.0, &[1.0, 0.0]).unwrap();
        assert_abs_diff_eq!(got[0], 0.5, epsilon = 1e-12);
        assert_abs_diff_eq!(got[1], 0.5, epsilon = 1e-12);
        // constants are reproduced to machine precision
        let ones = expm_apply(&q, 30.0, &[1.0, 1.0]).unwrap();
        assert_abs_diff_eq!(ones[0], 1.0, epsilon = 1e-14);
        assert_abs_diff_eq!(ones[1], 1.0, epsilon = 1e-14);
    }

    #[test]
    fn semigroup_property() {
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        for _ in 0..20 {
            let n = rng.gen_range(2..6);
            let off = DMatrix::from_fn(n, n, |i, j| {
                if i == j {
                    0.0
                } else {
                    rng.gen_range(0.0..2.0)
                }
            });
            let q = QMatrix::from_off_diagonal(&off).unwrap();
            let v: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
            let (s, t) = (rng.gen_range(0.0..1.5), rng.gen_range(0.0..1.5));
            let direct = expm_apply(&q, s + t, &v).unwrap();
            let stepped = expm_apply(&q, s, &expm_apply(&q, t, &v).unwrap()).unwrap();
            for (a, b) in direct.iter().zip(&stepped) {
                assert_abs_diff_eq!(a, b, epsilon = 1e-12);
            }
        }
    }

    #[test]
    fn left_action_preserves_mass_and_finds_stationary_law() {
        let q = QMatrix::from_rows(vec![vec![-2.0, 2.0], vec![3.0, -3.0]]).unwrap();
        let w = expm_apply_left(&q, 0.3, &[1.0, 0.0]).unwrap();
        assert_abs_diff_eq!(w[0] + w[1], 1.0, epsilon = 1e-14);
        assert!(w.iter().all(|x| *x >= 0.0));
        // stationary law π = (3, 2)/5
        let w = expm_apply_left(&q, 50.0, &[1.0, 0.0]).unwrap();
        assert_abs_diff_eq!(w[0], 0.6, epsilon = 1e-12);
        assert_abs_diff_eq!(w[1], 0.4, epsilon = 1e-12);
    }

    #[test]
    fn uniform_killing_scales_mass_exactly() {
        let q = symmetric_two_state().uniformly_killed(0.8).unwrap();
        for t in [0.1, 1.0, 2.5] {
            let w = expm_apply_left(&q, t, &[0.25, 0.75]).unwrap();
            assert_abs_diff_eq!(w[0] + w[1], (-0.8 * t).exp(), epsilon = 1e-13);
        }
    }

    #[test]
    fn duality_of_left_and_right_actions() {
        let mut rng = ChaCha8Rng::seed_from_u64(37);
        for _ in 0..20 {
            let n = rng.gen_range(2..7);
            let off = DMatrix::from_fn(n, n, |i, j| {
                if i == j {
                    0.0
                } else {
                    rng.gen_range(0.0..1.5)
                }
            });
            let q = QMatrix::from_off_diagonal(&off).unwrap();
            let f: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
            let mu: Vec<f64> = (0..n).map(|_| rng.gen_range(0.0..1.0)).collect();
            let t = rng.gen_range(0.0..2.0);
            let lhs: f64 = expm_apply(&q, t, &f)
                .unwrap()
                .iter()
                .zip(&mu)
                .map(|(a, b)| a * b)
                .sum();
            let rhs: f64 = expm_apply_left(&q, t, &mu)
                .unwrap()
                .iter()
                .zip(&f)
                .map(|(a, b)| a * b)
                .sum();
            assert_abs_diff_eq!(lhs, rhs, epsilon = 1e-10);
        }
    }

    #[test]
    fn positivity_and_contraction() {
        let mut rng = ChaCha8Rng::seed_from_u64(41);
        let q = QMatrix::from_rows(vec![
            vec![-3.0, 1.0, 2.0],
            vec![0.5, -1.0, 0.5],
            vec![2.0, 2.0, -4.0],
        ])
        .unwrap();
        for _ in 0..50 {
            let v: Vec<f64> = (0..3).map(|_| rng.gen_range(0.0..2.0)).collect();
            let t = rng.gen_range(0.0..5.0);
            let out = expm_apply(&q, t, &v).unwrap();
            assert!(out.iter().all(|x| *x >= 0.0), "positivity violated: {out:?}");
            let vmax = v.iter().fold(0.0f64, |m, x| m.max(x.abs()));
            let omax = out.iter().fold(0.0f64, |m, x| m.max(x.abs()));
            assert!(omax <= vmax * (1.0 + 1e-13), "contraction violated");
        }
    }

    #[test]
    fn invalid_inputs() {
        let q = symmetric_two_state();
        assert!(expm_apply(&q, -0.1, &[1.0, 0.0]).is_err());
        assert!(expm_apply(&q, f64::NAN, &[1.0, 0.0]).is_err());
        assert!(expm_apply(&q, 1.0, &[1.0]).is_err());
        assert!(expm_apply(&q, 1.0, &[f64::INFINITY, 0.0]).is_err());
    }
}
