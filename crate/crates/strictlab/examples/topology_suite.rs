//! The strict topology on bounded continuous functions, from the dual side
//! and the convergence side.
//!
//! * the classifier reproduces ten hand-labeled verdicts on sequences where
//!   the sup norm and compact-uniform convergence genuinely disagree;
//! * a Dini family (monotone pointwise convergence on compacts) passes;
//! * Hahn–Jordan decomposition of random signed measures reconstructs the
//!   input exactly, atom for atom;
//! * the walking point mass δ_n distinguishes vague from weak convergence:
//!   it pairs to zero against every vanishing function but keeps mass 1
//!   against the constant 1.
//!
//! Run with: `cargo run --release --example topology_suite`

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use strictlab::catalog;
use strictlab::func::{dini_check, BetaHorizon};
use strictlab::measure::{
    hahn_jordan, vague_convergence_test, weak_convergence_test, SignedMeasure,
};
use strictlab::verify::beta_suite;
use strictlab::{Result, StateSpace};

fn main() -> Result<()> {
    // Ten labeled sequences on a wide grid.
    let grid = StateSpace::real_grid(16.0, 0.01)?;
    println!("strict-convergence classifier, 10 hand-labeled cases:");
    for case in beta_suite(grid.clone())? {
        println!(
            "  {:<44} expected {:<5} observed {:<5} {}",
            case.name,
            case.expected,
            case.observed,
            if case.pass { "ok" } else { "MISMATCH" }
        );
    }

    // A Dini family: f_n = exp(-x²/n) increases pointwise to 1, monotonically
    // at every point, hence converges in the strict topology. On K_4 the
    // residual is 1 − e^{−16/n}, which needs n ≈ 320 to clear 0.05.
    let one = catalog::constant(grid.clone(), 1.0)?;
    let dini = dini_check(
        |n| catalog::scaled_gaussian(grid.clone(), 1.0, 1.0 / n as f64, 0.0),
        &one,
        0.05,
        BetaHorizon { n_max: 320, m_max: 4 },
    )?;
    println!();
    println!("Dini family exp(-x²/n) -> 1: converges = {}", dini.converges);

    // Hahn-Jordan on random atomic measures: exact reconstruction.
    let space = StateSpace::truncated_countable(50)?;
    let mut rng = ChaCha8Rng::seed_from_u64(2718);
    let trials = 1000;
    let mut exact = 0;
    for _ in 0..trials {
        let n_atoms = rng.gen_range(1..=8);
        let mu = SignedMeasure::new(
            space.clone(),
            (0..n_atoms).map(|_| (rng.gen_range(0..=50), rng.gen_range(-2.0..2.0))),
        )?;
        let hj = hahn_jordan(&mu)?;
        if hj.reconstruct()?.atoms() == mu.atoms() {
            exact += 1;
        }
    }
    println!();
    println!("Hahn-Jordan reconstruction, {trials} random signed measures: {exact} exact");

    // Weak vs vague: the walking point mass.
    let walk_space = StateSpace::truncated_countable(60)?;
    let mus: Vec<SignedMeasure> =
        (1..=40).map(|n| SignedMeasure::delta(walk_space.clone(), n)).collect::<Result<_>>()?;
    let zero = SignedMeasure::zero(walk_space.clone());
    let vanishing = vec![
        catalog::gaussian(walk_space.clone())?.declare_vanishing()?,
        catalog::cauchy_bump(walk_space.clone())?.declare_vanishing()?,
    ];
    let bounded =
        vec![catalog::constant(walk_space.clone(), 1.0)?, catalog::gaussian(walk_space)?];
    let vague = vague_convergence_test(&mus, &zero, &vanishing, 1e-3)?;
    let weak = weak_convergence_test(&mus, &zero, &bounded, 1e-3)?;
    println!();
    println!("walking point mass delta_n, n = 1..40, against the zero measure:");
    println!("  vague (vanishing dictionary): converges = {}", vague.converges);
    for r in &vague.residuals {
        println!("    <delta_40, {:<12}> = {:.3e}", r.function, r.last);
    }
    println!("  weak (bounded dictionary):    converges = {}", weak.converges);
    for r in &weak.residuals {
        println!("    <delta_40, {:<12}> = {:.3e}", r.function, r.last);
    }
    println!("  the escaping mass is invisible to vanishing functions but not to 1.");
    Ok(())
}
