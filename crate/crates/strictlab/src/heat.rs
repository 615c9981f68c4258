//! Heat flow on the line: closed form for sin(x²), Gaussian-kernel
//! quadrature for other pointwise-defined functions.
//!
//! The flow is E[f(x + W_t)] with W_t a centered normal of variance t, the
//! transition semigroup of the generator ½f″. For f(x) = sin(x²) the
//! Gaussian integral evaluates in closed form to
//! `Im[(1 − 2it)^{−1/2} · exp(ix²/(1 − 2it))]`, whose modulus is the
//! envelope `(1 + 4t²)^{−1/4} · exp(−2tx²/(1 + 4t²))`; the flow flattens
//! everywhere in sup norm yet converges uniformly on compacts as t ↓ 0.

use nalgebra::Complex;

use crate::error::{Error, Result};
use crate::func::{EvalRule, TestFunction};

/// 15-point Kronrod nodes on [0, 1] side (symmetric), QUADPACK values.
const GK_NODES: [f64; 8] = [
    0.991455371120813,
    0.949107912342759,
    0.864864423359769,
    0.741531185599394,
    0.586087235467691,
    0.405845151377397,
    0.207784955007898,
    0.0,
];

/// Kronrod weights paired with `GK_NODES`.
const GK_WEIGHTS: [f64; 8] = [
    0.022935322010529,
    0.063092092629979,
    0.104790010322250,
    0.140653259715525,
    0.169004726639267,
    0.190350578064785,
    0.204432940075298,
    0.209482141084728,
];

/// 7-point Gauss weights paired with `GK_NODES[1], GK_NODES[3], GK_NODES[5],
/// GK_NODES[7]`.
const GAUSS_WEIGHTS: [f64; 4] = [
    0.129484966168870,
    0.279705391489277,
    0.381830050505119,
    0.417959183673469,
];

/// Normal tail radius for expectation integrals: 2Φ(−8.6) < 1e−17, below
/// every tolerance this crate accepts.
const TAIL_RADIUS: f64 = 8.6;

/// Interval budget of the adaptive scheme.
const MAX_INTERVALS: usize = 100_000;

/// One Gauss–Kronrod 7–15 panel on [a, b]: returns the Kronrod value and
/// the |K15 − G7| error gauge.
fn gk15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> (f64, f64) {
    let half = 0.5 * (b - a);
    let mid = 0.5 * (a + b);
    let mut kronrod = 0.0;
    let mut gauss = 0.0;
    for (j, (&u, &wk)) in GK_NODES.iter().zip(&GK_WEIGHTS).enumerate() {
        let pair = if u == 0.0 {
            f(mid)
        } else {
            f(mid - half * u) + f(mid + half * u)
        };
        kronrod += wk * pair;
        if j % 2 == 1 {
            gauss += GAUSS_WEIGHTS[j / 2] * pair;
        }
    }
    (half * kronrod, half * (kronrod - gauss).abs())
}

/// Adaptive Gauss–Kronrod integral of `f` over [a, b] with absolute error
/// target `abs_tol`, by bisection with halved budgets.
pub fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, abs_tol: f64) -> Result<f64> {
    if !(abs_tol > 0.0) {
        return Err(Error::Validation("quadrature tolerance must be positive".into()));
    }
    if !(a.is_finite() && b.is_finite() && a < b) {
        return Err(Error::Validation(format!("bad quadrature interval [{a}, {b}]")));
    }
    let mut stack = vec![(a, b, abs_tol)];
    let mut sum = 0.0;
    let mut used = 0usize;
    while let Some((lo, hi, tol)) = stack.pop() {
        used += 1;
        if used > MAX_INTERVALS {
            return Err(Error::Validation(
                "quadrature interval budget exhausted; integrand too rough for the tolerance"
                    .into(),
            ));
        }
        let (value, err) = gk15(&f, lo, hi);
        if err <= tol || hi - lo < 1e-14 * (b - a) {
            sum += value;
        } else {
            let mid = 0.5 * (lo + hi);
            stack.push((lo, mid, 0.5 * tol));
            stack.push((mid, hi, 0.5 * tol));
        }
    }
    Ok(sum)
}

/// E[f(center + √variance · Z)] for standard normal Z, by quadrature over
/// |z| ≤ 8.6. The truncated tail is below 1e−17 times the bound of `f`,
/// negligible against any accepted tolerance.
pub fn gaussian_expectation<F: Fn(f64) -> f64>(
    f: F,
    center: f64,
    variance: f64,
    abs_tol: f64,
) -> Result<f64> {
    if !(variance >= 0.0) || !variance.is_finite() {
        return Err(Error::Validation(format!("variance must be >= 0, got {variance}")));
    }
    if variance == 0.0 {
        return Ok(f(center));
    }
    let sigma = variance.sqrt();
    let norm = 1.0 / (2.0 * std::f64::consts::PI).sqrt();
    integrate(
        |z| f(center + sigma * z) * norm * (-0.5 * z * z).exp(),
        -TAIL_RADIUS,
        TAIL_RADIUS,
        abs_tol,
    )
}

/// Heat flow of sin(x²) in closed form:
/// `Im[(1 − 2it)^{−1/2} · exp(ix²/(1 − 2it))]`.
pub fn sin_square_flow(t: f64, x: f64) -> f64 {
    if t == 0.0 {
        return (x * x).sin();
    }
    let z = Complex::new(1.0, -2.0 * t);
    let prefactor = z.sqrt().inv();
    let phase = (Complex::i() * x * x / z).exp();
    (prefactor * phase).im
}

/// Modulus envelope of the closed form:
/// `(1 + 4t²)^{−1/4} · exp(−2tx²/(1 + 4t²))`.
pub fn sin_square_envelope(t: f64, x: f64) -> f64 {
    let d = 1.0 + 4.0 * t * t;
    d.powf(-0.25) * (-2.0 * t * x * x / d).exp()
}

/// Heat flow `E[f(x + W_t)]` at a real point. Dispatches on the evaluation
/// rule: closed form for sin(x²), adaptive quadrature (absolute error
/// ≤ 1e−8) for other pointwise rules.
pub fn heat_apply(t: f64, f: &TestFunction, x: f64) -> Result<f64> {
    if !(t >= 0.0) || !t.is_finite() {
        return Err(Error::Domain(format!("time must be >= 0 and finite, got {t}")));
    }
    match f.rule() {
        EvalRule::SinSquare => Ok(sin_square_flow(t, x)),
        EvalRule::Analytic(_) => {
            let c = f.rule().closure().expect("analytic rule has a closure");
            gaussian_expectation(move |y| c(y), x, t, 1e-9)
        }
        EvalRule::Tabulated => Err(Error::Validation(format!(
            "function '{}' has no pointwise evaluation rule; the heat flow needs one",
            f.name()
        ))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::space::StateSpace;
    use approx::assert_abs_diff_eq;

    #[test]
    fn flow_at_time_zero_is_the_function() {
        for x in [-3.0, -0.7, 0.0, 1.3, 11.0] {
            assert_eq!(sin_square_flow(0.0, x), (x * x).sin());
        }
    }

    #[test]
    fn closed_form_reference_value() {
        // t = 1/2, x = 0: (1 − i)^{−1/2} has imaginary part 2^{−1/4}·sin(π/8)
        assert_abs_diff_eq!(
            sin_square_flow(0.5, 0.0),
            0.3217971264527913,
            epsilon = 1e-14
        );
        let by_hand = 2f64.powf(-0.25) * (std::f64::consts::PI / 8.0).sin();
        assert_abs_diff_eq!(sin_square_flow(0.5, 0.0), by_hand, epsilon = 1e-14);
    }

    #[test]
    fn closed_form_matches_quadrature() {
        // the quadrature path knows nothing about the complex-analytic form
        let space = StateSpace::real_grid(20.0, 0.5).unwrap();
        let f = TestFunction::from_fn(space, "sin_sq_generic", 1.0, |x| (x * x).sin()).unwrap();
        for t in [1e-3, 1e-2, 0.1, 0.5] {
            for x in [0.0, 0.5, 1.0, 2.5, 5.0] {
                let quad = heat_apply(t, &f, x).unwrap();
                assert_abs_diff_eq!(quad, sin_square_flow(t, x), epsilon = 1e-6);
            }
        }
    }

    #[test]
    fn envelope_dominates_the_flow() {
        for t in [0.01, 0.1, 1.0, 4.0] {
            let mut tight = false;
            for k in -80..=80 {
                let x = 0.25 * k as f64;
                let v = sin_square_flow(t, x).abs();
                let e = sin_square_envelope(t, x);
                assert!(v <= e + 1e-12, "flow {v} exceeds envelope {e} at t={t}, x={x}");
                if v > 0.7 * e {
                    tight = true;
                }
            }
            assert!(tight, "envelope never approached at t={t}");
        }
    }

    #[test]
    fn gaussian_expectation_reference_values() {
        // E[1] = 1
        assert_abs_diff_eq!(gaussian_expectation(|_| 1.0, 3.0, 2.0, 1e-10).unwrap(), 1.0,
            epsilon = 1e-10);
        // E[x + W] = x
        assert_abs_diff_eq!(gaussian_expectation(|y| y, 1.5, 0.7, 1e-10).unwrap(), 1.5,
            epsilon = 1e-10);
        // E|W_1| = sqrt(2/π)
        assert_abs_diff_eq!(
            gaussian_expectation(f64::abs, 0.0, 1.0, 1e-10).unwrap(),
            (2.0 / std::f64::consts::PI).sqrt(),
            epsilon = 1e-8
        );
        // E[(x + W_t)²] = x² + t
        assert_abs_diff_eq!(
            gaussian_expectation(|y| y * y, 2.0, 0.3, 1e-10).unwrap(),
            4.3,
            epsilon = 1e-9
        );
        // zero variance evaluates the function
        assert_eq!(gaussian_expectation(|y| y * y, 3.0, 0.0, 1e-10).unwrap(), 9.0);
    }

    #[test]
    fn heat_flow_of_gaussian_matches_closed_form() {
        // E[e^{−(x+W_t)²}] = (1 + 2t)^{−1/2} e^{−x²/(1+2t)}
        let space = StateSpace::real_grid(20.0, 0.5).unwrap();
        let f = catalog::gaussian(space).unwrap();
        for t in [0.0f64, 0.1, 0.3, 1.0] {
            for x in [0.0f64, 0.8, 2.0] {
                let exact = (1.0 + 2.0 * t).powf(-0.5) * (-x * x / (1.0 + 2.0 * t)).exp();
                assert_abs_diff_eq!(heat_apply(t, &f, x).unwrap(), exact, epsilon = 1e-8);
            }
        }
    }

    #[test]
    fn tabulated_functions_are_refused() {
        let space = StateSpace::finite(3).unwrap();
        let f = TestFunction::from_values(space, "tab", vec![1.0, 2.0, 3.0], 3.0).unwrap();
        assert!(heat_apply(0.5, &f, 0.0).is_err());
        assert!(heat_apply(-0.1, &f, 0.0).is_err());
    }

    #[test]
    fn integrate_handles_polynomials_exactly() {
        // G7 is exact through degree 13, K15 through 22
        let v = integrate(|x| x * x * x * x, 0.0, 1.0, 1e-12).unwrap();
        assert_abs_diff_eq!(v, 0.2, epsilon = 1e-13);
        let v = integrate(|x| (x * 40.0).sin(), 0.0, 2.0, 1e-10).unwrap();
        let exact = (1.0 - (80.0f64).cos()) / 40.0;
        assert_abs_diff_eq!(v, exact, epsilon = 1e-9);
        assert!(integrate(|x| x, 1.0, 0.0, 1e-8).is_err());
        assert!(integrate(|x| x, 0.0, 1.0, -1e-8).is_err());
    }
}
