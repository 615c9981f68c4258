//! Built-in catalog of test functions, addressable by name and parameters
//! from configuration files.
//!
//! Every constructor tabulates a global formula on the represented points,
//! declares an exact norm bound for the underlying real-line function, and
//! sets the vanishing-at-infinity flag when the truncation witnesses the
//! decay (see [`TestFunction::declare_vanishing`]).

use crate::error::{Error, Result};
use crate::func::{EvalRule, TestFunction};
use crate::space::{SpaceKind, StateSpace};

/// Set the vanishing flag when the represented values support it.
fn flag_if_vanishing(f: TestFunction) -> TestFunction {
    match f.clone().declare_vanishing() {
        Ok(v) => v,
        Err(_) => f,
    }
}

/// `f ≡ c`.
pub fn constant(space: StateSpace, c: f64) -> Result<TestFunction> {
    if !c.is_finite() {
        return Err(Error::Validation("constant must be finite".into()));
    }
    let f = TestFunction::from_fn(space, format!("const({c})"), c.abs(), move |_| c)?;
    Ok(flag_if_vanishing(f))
}

/// Indicator of a single point, on spaces where single points are open
/// (finite and countable spaces). Rejected on grids, where an indicator has
/// no continuous counterpart.
pub fn indicator_point(space: StateSpace, i: usize) -> Result<TestFunction> {
    if matches!(space.kind(), SpaceKind::RealGrid { .. }) {
        return Err(Error::Validation(
            "point indicators are not continuous on grid spaces; use a cutoff".into(),
        ));
    }
    if i >= space.len() {
        return Err(Error::Domain(format!("point {i} not in the space")));
    }
    let mut values = vec![0.0; space.len()];
    values[i] = 1.0;
    let f = TestFunction::from_values(space, format!("1{{x={i}}}"), values, 1.0)?;
    Ok(flag_if_vanishing(f))
}

/// `f(x) = x` clamped to `[-clip, clip]`.
pub fn clipped_identity(space: StateSpace, clip: f64) -> Result<TestFunction> {
    clipped_scaled_identity(space, 1.0, clip)
}

/// `f(x) = scale·x` clamped to `[-clip, clip]`.
pub fn clipped_scaled_identity(space: StateSpace, scale: f64, clip: f64) -> Result<TestFunction> {
    if !(clip > 0.0) || !scale.is_finite() {
        return Err(Error::Validation("need finite scale and positive clip".into()));
    }
    TestFunction::from_fn(space, format!("clip({scale}x,{clip})"), clip, move |x| {
        (scale * x).clamp(-clip, clip)
    })
}

/// `f(x) = min(|x|, cap)`.
pub fn min_abs(space: StateSpace, cap: f64) -> Result<TestFunction> {
    if !(cap > 0.0) {
        return Err(Error::Validation("cap must be positive".into()));
    }
    TestFunction::from_fn(space, format!("min(|x|,{cap})"), cap, move |x| x.abs().min(cap))
}

/// `f(x) = min(|x|/n, 1)`; flattens toward 0 as `n` grows.
pub fn min_abs_over(space: StateSpace, n: f64) -> Result<TestFunction> {
    if !(n > 0.0) {
        return Err(Error::Validation("n must be positive".into()));
    }
    TestFunction::from_fn(space, format!("min(|x|/{n},1)"), 1.0, move |x| (x.abs() / n).min(1.0))
}

/// `f(x) = sin(x²)`; the one function whose heat flow has a closed form.
pub fn sin_square(space: StateSpace) -> Result<TestFunction> {
    let f = TestFunction::from_fn(space, "sin(x^2)", 1.0, |x| (x * x).sin())?;
    Ok(f.with_rule(EvalRule::SinSquare))
}

/// `f(x) = sin(x²/n)`.
pub fn sin_square_scaled(space: StateSpace, n: f64) -> Result<TestFunction> {
    if !(n > 0.0) {
        return Err(Error::Validation("n must be positive".into()));
    }
    TestFunction::from_fn(space, format!("sin(x^2/{n})"), 1.0, move |x| (x * x / n).sin())
}

/// `f(x) = sin(freq·x)`.
pub fn sin_freq(space: StateSpace, freq: f64) -> Result<TestFunction> {
    if !freq.is_finite() {
        return Err(Error::Validation("frequency must be finite".into()));
    }
    TestFunction::from_fn(space, format!("sin({freq}x)"), 1.0, move |x| (freq * x).sin())
}

/// `f(x) = e^{-x²}`.
pub fn gaussian(space: StateSpace) -> Result<TestFunction> {
    scaled_gaussian(space, 1.0, 1.0, 0.0)
}

/// `f(x) = amplitude · e^{-rate·(x-center)²}`.
pub fn scaled_gaussian(
    space: StateSpace,
    amplitude: f64,
    rate: f64,
    center: f64,
) -> Result<TestFunction> {
    if !amplitude.is_finite() || !center.is_finite() || !(rate >= 0.0) {
        return Err(Error::Validation(
            "need finite amplitude and center, non-negative rate".into(),
        ));
    }
    let f = TestFunction::from_fn(
        space,
        format!("{amplitude}*exp(-{rate}(x-{center})^2)"),
        amplitude.abs(),
        move |x| amplitude * (-rate * (x - center) * (x - center)).exp(),
    )?;
    Ok(flag_if_vanishing(f))
}

/// `f(x) = 1/(1+x²)`.
pub fn cauchy_bump(space: StateSpace) -> Result<TestFunction> {
    let f = TestFunction::from_fn(space, "1/(1+x^2)", 1.0, |x| 1.0 / (1.0 + x * x))?;
    Ok(flag_if_vanishing(f))
}

/// `f(x) = x/(1+x²)`; bounded by 1/2, attained at `x = ±1`.
pub fn cauchy_odd(space: StateSpace) -> Result<TestFunction> {
    let f = TestFunction::from_fn(space, "x/(1+x^2)", 0.5, |x| x / (1.0 + x * x))?;
    Ok(flag_if_vanishing(f))
}

/// Piecewise-linear cutoff: 1 on `K_m`, 0 outside `K_{m+1}`, linear between.
/// Constant 1 on finite spaces, where every `K_m` is the whole space.
pub fn cutoff_linear(space: StateSpace, m: usize) -> Result<TestFunction> {
    let Some((r0, r1)) = cutoff_radii(space, m)? else {
        return constant_cutoff(space, format!("chi_lin({m})"));
    };
    let f = TestFunction::from_fn(space, format!("chi_lin({m})"), 1.0, move |x| {
        ((r1 - x.abs()) / (r1 - r0)).clamp(0.0, 1.0)
    })?;
    Ok(flag_if_vanishing(f))
}

/// Smoothstep cutoff: 1 on `K_m`, 0 outside `K_{m+1}`, C² transition.
pub fn cutoff_smooth(space: StateSpace, m: usize) -> Result<TestFunction> {
    let Some((r0, r1)) = cutoff_radii(space, m)? else {
        return constant_cutoff(space, format!("chi_smooth({m})"));
    };
    let f = TestFunction::from_fn(space, format!("chi_smooth({m})"), 1.0, move |x| {
        let u = ((x.abs() - r0) / (r1 - r0)).clamp(0.0, 1.0);
        1.0 - u * u * u * (u * (6.0 * u - 15.0) + 10.0)
    })?;
    Ok(flag_if_vanishing(f))
}

fn constant_cutoff(space: StateSpace, name: String) -> Result<TestFunction> {
    let f = TestFunction::from_fn(space, name, 1.0, |_| 1.0)?;
    Ok(flag_if_vanishing(f))
}

/// Inner and outer radii (in coordinate units) of the `m`-th cutoff, or
/// `None` on finite spaces where every exhaustion element is everything.
fn cutoff_radii(space: StateSpace, m: usize) -> Result<Option<(f64, f64)>> {
    if m == 0 {
        return Err(Error::Validation("cutoff index starts at 1".into()));
    }
    match space.kind() {
        SpaceKind::Finite { .. } => Ok(None),
        _ => {
            let inner = space.exhaustion_member(m)?;
            let outer = space.exhaustion_member(m + 1)?;
            let radius = |k: &crate::space::CompactSet| {
                k.indices().fold(0.0f64, |r, i| r.max(space.coord(i).abs()))
            };
            let r0 = radius(&inner);
            let r1 = radius(&outer).max(r0 + f64::MIN_POSITIVE);
            Ok(Some((r0, r1)))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn cutoffs_are_one_inside_and_zero_outside() {
        let s = StateSpace::real_grid(10.0, 0.1).unwrap();
        for chi in [cutoff_linear(s, 3).unwrap(), cutoff_smooth(s, 3).unwrap()] {
            let inner = s.exhaustion_member(3).unwrap();
            let outer = s.exhaustion_member(4).unwrap();
            for i in s.points() {
                let v = chi.value(i);
                if inner.contains(i) {
                    assert_eq!(v, 1.0, "{} at {}", chi.name(), s.coord(i));
                } else if !outer.contains(i) {
                    assert_eq!(v, 0.0, "{} at {}", chi.name(), s.coord(i));
                } else {
                    assert!((0.0..=1.0).contains(&v));
                }
            }
            assert!(chi.is_vanishing());
        }
    }

    #[test]
    fn cutoffs_increase_with_index() {
        let s = StateSpace::truncated_countable(60).unwrap();
        let a = cutoff_linear(s, 2).unwrap();
        let b = cutoff_linear(s, 5).unwrap();
        for i in s.points() {
            assert!(a.value(i) <= b.value(i) + 1e-12);
        }
    }

    #[test]
    fn cutoff_on_finite_space_is_one() {
        let s = StateSpace::finite(4).unwrap();
        let chi = cutoff_smooth(s, 1).unwrap();
        assert!(chi.values().iter().all(|v| *v == 1.0));
    }

    #[test]
    fn catalog_bounds_are_exact() {
        let s = StateSpace::real_grid(10.0, 0.01).unwrap();
        let odd = cauchy_odd(s).unwrap();
        assert_abs_diff_eq!(odd.sup_norm(), 0.5, epsilon = 1e-9);
        assert_eq!(odd.bound(), 0.5);
        let g = scaled_gaussian(s, -2.0, 3.0, 1.0).unwrap();
        assert_abs_diff_eq!(g.sup_norm(), 2.0, epsilon = 1e-9);
        assert!(g.is_vanishing());
    }

    #[test]
    fn indicator_rules() {
        let fin = StateSpace::finite(3).unwrap();
        let f = indicator_point(fin, 1).unwrap();
        assert_eq!(f.values(), &[0.0, 1.0, 0.0]);
        let grid = StateSpace::real_grid(1.0, 0.5).unwrap();
        assert!(indicator_point(grid, 0).is_err());
        assert!(indicator_point(fin, 9).is_err());
    }
}
