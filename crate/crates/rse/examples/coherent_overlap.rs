//! Overlaps between a coherent reference and large Fock states: where the
//! μ = ⟨n|α⟩ coupling comes from and how the truncation dimension is
//! chosen.
//!
//! Run with: cargo run --example coherent_overlap

use num_complex::Complex64;
use rse::fock::{coherent_state, fock_state, inner, recommended_dim, FockSpace};

fn main() {
    let alpha = Complex64::new(10.0, 0.0); // mean photon number 100
    let dim = recommended_dim(alpha, 150);
    let space = FockSpace::new(dim).expect("non-empty space");
    let reference = coherent_state(space, alpha);

    println!("coherent reference |α = 10⟩, truncation dim = {dim}");
    println!("{:>5}  {:>14}  {:>14}", "n", "|⟨n|α⟩|", "|⟨n|α⟩|²");
    for n in [80usize, 90, 95, 100, 105, 110, 120, 140] {
        let target = fock_state(space, n).expect("level inside truncation");
        let mu = inner(&target, &reference).expect("same space");
        println!("{n:>5}  {:>14.8}  {:>14.8}", mu.norm(), mu.norm_sqr());
    }

    // the Poisson peak sits at n = |α|²; the overlap there sets both the
    // resonant coupling strength and the transfer-time bound π/(2Ω|μ|)
    let peak = fock_state(space, 100).unwrap();
    let mu = inner(&peak, &reference).unwrap().norm();
    println!("\npeak overlap μ = {mu:.12}");
    println!("transfer-time bound π/(2·|μ|) = {:.6}", std::f64::consts::PI / (2.0 * mu));

    // truncation check: tail mass outside the truncated space
    let tail: f64 = 1.0 - reference.norm().powi(2);
    println!("probability lost to truncation: {tail:.3e}");
}
