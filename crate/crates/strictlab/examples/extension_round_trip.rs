//! Restriction and extension of a transition semigroup between the bounded
//! continuous functions and the functions vanishing at infinity.
//!
//! On a conservative model the story has three acts:
//!  1. restriction: S(t) maps vanishing functions to vanishing functions,
//!     and S(t)f → f on them as t ↓ 0;
//!  2. extension: S(t)f for a merely bounded f is recovered as the limit of
//!     S(t)(f·χ_m) along a cutoff family χ_m ↑ 1, and the round trip agrees
//!     with applying S(t) directly;
//!  3. the cutoff approximations f·χ_k form a core: both f·χ_k → f and
//!     A(f·χ_k) → Af in the strict topology.
//!
//! Mass conservation is what makes the extension unique; a killed chain
//! (uniform extra exit rate κ) leaks mass e^{−κt} and is rejected.
//!
//! Run with: `cargo run --release --example extension_round_trip`

use strictlab::catalog;
use strictlab::extension::{
    core_check, extend_apply, mass_conservation_check, restrict_check, CutoffFamily,
};
use strictlab::generator::build_birth_death;
use strictlab::measure::SignedMeasure;
use strictlab::func::BetaHorizon;
use strictlab::{Result, SemigroupOperator, StateSpace, TestFunction};

/// Sixteen cutoff approximants, compared on the first six exhaustion sets.
const HORIZON: BetaHorizon = BetaHorizon { n_max: 16, m_max: 6 };

fn bd_operator(n_max: usize, killed: Option<f64>) -> Result<(SemigroupOperator, StateSpace)> {
    let birth = vec![1.0; n_max + 1];
    let mut death = vec![1.0; n_max + 1];
    death[0] = 0.0;
    let graph = build_birth_death(&birth, &death, n_max)?;
    let space = graph.space().clone();
    let q = graph.q_matrix().expect("birth-death carries its rate matrix").clone();
    let q = match killed {
        Some(kappa) => q.uniformly_killed(kappa)?,
        None => q,
    };
    Ok((SemigroupOperator::matrix_exp(space.clone(), q)?, space))
}

fn main() -> Result<()> {
    let n_max = 120;
    let (op, space) = bd_operator(n_max, None)?;

    // Act 0: mass conservation, the precondition for everything below.
    let mus =
        [SignedMeasure::delta(space.clone(), 0)?, SignedMeasure::delta(space.clone(), 17)?];
    let mass = mass_conservation_check(&op, &mus, &[0.1, 0.5, 1.0], 1e-12)?;
    println!("mass conservation (2 point masses, 3 times): worst defect {:.3e}", mass.worst_defect);

    let (killed_op, _) = bd_operator(n_max, Some(0.7))?;
    let killed = mass_conservation_check(&killed_op, &mus, &[1.0], 1e-12)?;
    println!(
        "killed chain (kappa = 0.7): mass {:.12} vs e^-0.7 = {:.12} -> verdict {}",
        killed.points[0].mass,
        (-0.7f64).exp(),
        killed.verdict
    );

    // Act 1: restriction to the vanishing subspace.
    let gauss = catalog::gaussian(space.clone())?.declare_vanishing()?;
    let restrict = restrict_check(&op, &gauss, &[0.5, 0.1, 0.01], 0.025)?;
    println!();
    println!("restriction on a Gaussian bump (vanishing flag preserved at every t):");
    println!("{:>6}  {:>14}  {:>10}", "t", "sup residual", "vanishing");
    for p in &restrict.points {
        println!("{:>6}  {:>14.6}  {:>10}", p.t, p.sup_residual, p.vanishing_ok);
    }
    println!("verdict: {}", restrict.verdict);

    // Act 2: extension of bounded functions by cutoffs, vs direct action.
    let cutoffs = CutoffFamily::linear(space.clone());
    let one = catalog::constant(space.clone(), 1.0)?;
    let cos_recip = TestFunction::from_fn(space.clone(), "cos(1/(1+x))", 1.0, |x| {
        (1.0 / (1.0 + x.abs())).cos()
    })?;
    println!();
    println!("extension round trip, residuals measured on K_4:");
    println!("{:>14}  {:>5}  {:>10}  {:>12}  {:>12}", "f", "t", "cutoffs m", "gap", "leak");
    let probe = space.exhaustion_member(4)?;
    for f in [&one, &cos_recip] {
        for &t in &[0.1, 0.5, 1.0] {
            let (ext, trace) = extend_apply(&op, t, f, &cutoffs, 1e-6, 90, 4)?;
            let direct = op.apply(t, f)?;
            let gap = ext.sub(&direct)?.compact_seminorm(&probe)?;
            let (last_m, leak) = *trace.rows.last().expect("trace is nonempty");
            println!("{:>14}  {:>5}  {:>10}  {:>12.3e}  {:>12.3e}", f.name(), t, last_m, gap, leak);
        }
    }
    println!("gap = extension vs direct matrix exponential; leak = last cutoff increment.");

    // Act 3: the cutoff approximations form a core for the generator.
    let (graph, smooth) = {
        let birth = vec![1.0; n_max + 1];
        let mut death = vec![1.0; n_max + 1];
        death[0] = 0.0;
        (build_birth_death(&birth, &death, n_max)?, CutoffFamily::smooth(space.clone()))
    };
    println!();
    for (label, family) in [("linear", &cutoffs), ("smooth", &smooth)] {
        for f in [&one, &cos_recip] {
            let rep = core_check(&graph, f, family, 1e-9, HORIZON)?;
            println!(
                "core check, {label} cutoffs, f = {}: f·χ_k -> f: {}, A(f·χ_k) -> Af: {} => {}",
                f.name(),
                rep.function_limit.converges,
                rep.image_limit.converges,
                if rep.verdict { "PASS" } else { "FAIL" }
            );
        }
    }

    // Negative control: a family that stalls at χ_3 never exhausts the
    // space, so f·χ_k cannot reach f.
    let stalled = CutoffFamily::custom(space.clone(), "stalled at 3", move |m| {
        catalog::cutoff_linear(space.clone(), m.min(3))
    });
    let rep = core_check(&graph, &cos_recip, &stalled, 1e-9, HORIZON)?;
    println!(
        "core check, non-exhausting control: verdict {} (expected false)",
        rep.verdict
    );
    Ok(())
}
