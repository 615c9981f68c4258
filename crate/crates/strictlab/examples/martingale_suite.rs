//! Testing whether a path law solves the martingale problem for a claimed
//! generator: for each test function f,
//!
//!   M_f(t) = f(η(t)) − f(η(0)) − ∫₀ᵗ Af(η(s)) ds
//!
//! must have mean zero (and, conditionally on the past, mean-zero
//! increments). Paths are simulated from a birth–death chain; the tests are
//! run twice, once against the true generator and once against the
//! corrupted generator A′ = 2Q. The corruption leaves the paths untouched
//! but doubles the compensator, which the tests must detect.
//!
//! Run with: `cargo run --release --example martingale_suite`

use strictlab::catalog;
use strictlab::generator::build_birth_death;
use strictlab::measure::SignedMeasure;
use strictlab::path::{PathEnsemble, SamplerKind};
use strictlab::verify::{martingale_increment_test, martingale_mean_test};
use strictlab::Result;

fn main() -> Result<()> {
    let n_max = 40;
    let birth = vec![1.0; n_max + 1];
    let mut death = vec![1.0; n_max + 1];
    death[0] = 0.0;
    let graph = build_birth_death(&birth, &death, n_max)?;
    let space = graph.space().clone();

    // One ensemble, reused by every test below: 10⁴ paths from the uniform
    // law on {0,...,5}, simulated to horizon 1.
    let nu = SignedMeasure::new(space.clone(), (0..=5).map(|i| (i, 1.0 / 6.0)))?;
    let ensemble =
        PathEnsemble::generate(&graph, "birth-death", &nu, 10_000, 1.0, SamplerKind::Chain, 42)?;

    let f = catalog::indicator_point(space.clone(), 0)?;
    let one = catalog::constant(space.clone(), 1.0)?;
    let times = [0.25, 0.5, 1.0];

    // The doubled generator: same chain, every rate times two.
    let doubled = build_birth_death(
        &birth.iter().map(|r| 2.0 * r).collect::<Vec<_>>(),
        &death.iter().map(|r| 2.0 * r).collect::<Vec<_>>(),
        n_max,
    )?;

    for (label, a) in [("true generator", &graph), ("corrupted 2Q", &doubled)] {
        println!("--- {label} ---");
        let rep = martingale_mean_test(&ensemble, &f, a, &times, 0.01)?;
        println!("mean test (alpha = {}):", rep.alpha);
        println!("{:>6}  {:>12}  {:>12}  {:>6}", "t", "mean M_f(t)", "band", "pass");
        for p in &rep.points {
            println!(
                "{:>6}  {:>12.5}  {:>12.5}  {:>6}",
                p.t,
                p.mean,
                p.half_width + p.bias_allowance,
                p.pass
            );
        }

        let inc = martingale_increment_test(
            &ensemble,
            &f,
            a,
            0.5,
            1.0,
            &[one.clone(), f.clone()],
            0.01,
        )?;
        println!("increment test on [{}, {}]:", inc.s, inc.t);
        println!("{:>10}  {:>12}  {:>12}  {:>6}", "witness", "mean", "band", "pass");
        for p in &inc.points {
            println!(
                "{:>10}  {:>12.5}  {:>12.5}  {:>6}",
                p.witness,
                p.mean,
                p.half_width + p.bias_allowance,
                p.pass
            );
        }
        println!("suite verdict: {}\n", if rep.pass && inc.pass { "PASS" } else { "FAIL" });
    }
    println!("the corrupted generator fails because its compensator drifts by");
    println!("E[∫ Qf(η(s)) ds], which is nonzero whenever the chain is off balance.");
    Ok(())
}
