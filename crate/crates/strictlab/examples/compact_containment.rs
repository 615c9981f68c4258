//! Empirical compact-containment certificates: paths started inside a
//! compact K must stay inside some larger compact K′ up to a horizon T,
//! with probability at least 1 − ε. The search scans the exhaustion
//! K_1 ⊆ K_2 ⊆ ... of the state space, counts paths that never leave each
//! member before T, and stops at the first member whose Wilson lower
//! confidence bound clears the requirement.
//!
//! Run with: `cargo run --release --example compact_containment`

use strictlab::generator::build_birth_death;
use strictlab::measure::SignedMeasure;
use strictlab::path::{PathEnsemble, SamplerKind};
use strictlab::verify::{containment_search, modulus_probability};
use strictlab::Result;

fn main() -> Result<()> {
    let n_max = 40;
    let birth = vec![1.0; n_max + 1];
    let mut death = vec![1.0; n_max + 1];
    death[0] = 0.0;
    let graph = build_birth_death(&birth, &death, n_max)?;
    let space = graph.space().clone();

    // nu uniform on {0,...,5}: the initial compact is K_5.
    let nu = SignedMeasure::new(space.clone(), (0..=5).map(|i| (i, 1.0 / 6.0)))?;
    let ensemble =
        PathEnsemble::generate(&graph, "birth-death", &nu, 100_000, 1.0, SamplerKind::Chain, 7)?;
    let k = space.exhaustion_member(5)?;

    let cert = containment_search(&ensemble, &k, 0.05, 1.0, 0.95)?;
    println!(
        "containment scan: {} paths from uniform{{0..5}}, horizon T = {}, eps = {}",
        cert.n_paths, cert.t_horizon, cert.eps
    );
    println!();
    println!("{:>4}  {:>12}  {:>14}  {:>6}", "m", "stay count", "Wilson lower", "pass");
    for row in &cert.scan {
        println!(
            "{:>4}  {:>12}  {:>14.4}  {:>6}",
            row.m, row.stay_count, row.wilson_lower, row.pass
        );
    }
    println!();
    println!(
        "certificate: paths stay in K_{} with probability >= {:.4} (required {:.4})",
        cert.k_prime.exhaustion_index().expect("scan returns exhaustion members"),
        cert.wilson_lower,
        cert.required
    );
    println!("the stay fraction is monotone in m: growing K' can only keep more paths.");

    // A related path statistic: how often the path moves less than 1/2 in
    // any window of length delta. Cadlag regularity shows up as this
    // probability climbing toward 1 as delta shrinks.
    println!();
    println!("path modulus: P[sup over windows of length delta of jump total < 1/2]");
    println!("{:>8}  {:>10}  {:>12}", "delta", "estimate", "half-width");
    for &delta in &[0.2, 0.1, 0.05, 0.025] {
        let est = modulus_probability(&ensemble, delta, 0.5, 0.99)?;
        println!("{:>8}  {:>10.4}  {:>12.4}", delta, est.estimate, est.half_width);
    }

    // Tightness of the time-t marginals, certified on the same exhaustion.
    let marginals = [
        ensemble.marginal_at(0.25)?,
        ensemble.marginal_at(0.5)?,
        ensemble.marginal_at(1.0)?,
    ];
    let tight = strictlab::measure::tightness_test(&marginals, 0.05)?;
    println!();
    println!(
        "tightness of the marginals at t = 0.25, 0.5, 1: K_{} carries mass >= {:.4} for all three",
        tight.index, tight.min_mass
    );
    Ok(())
}
