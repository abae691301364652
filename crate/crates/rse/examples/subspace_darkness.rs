//! The invariant subspace in action: every protocol oracle preserves the
//! span of the reference and targets, and the orthogonal complement stays
//! dark no matter how many oracles are applied.
//!
//! Run with: cargo run --example subspace_darkness

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rse::fock::{coherent_state, fock_state, FockSpace};
use rse::gates::{coherent_goo, fock_goo, GateEngine};
use rse::subspace::{build_subspace, leakage, project_state};

fn main() {
    let alpha = Complex64::new(10.0, 0.0);
    let space = FockSpace::new(200).unwrap();
    let target = fock_state(space, 100).unwrap();
    let reference = coherent_state(space, alpha);
    let model = build_subspace(vec![target], reference).unwrap();

    println!("subspace basis: |100⟩ plus the normalized residual of |α⟩");
    println!("reference coordinates in that basis:");
    for (i, c) in model.reference_coords().iter().enumerate() {
        println!("  component {i}: {:.8} + {:.8}i", c.re, c.im);
    }

    // random alternating oracles keep the state inside the 2-dim subspace
    let mut engine = GateEngine::new(space);
    let mut state = model.reference().clone();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    println!("\n{:>7}  {:>12}  {:>10}", "oracles", "leakage", "|c_target|");
    for applied in 1..=1000usize {
        let phi = rng.gen_range(-std::f64::consts::PI..std::f64::consts::PI);
        let seq = if applied % 2 == 1 {
            fock_goo(100, phi)
        } else {
            coherent_goo(alpha, phi)
        };
        state = engine.apply_sequence(&seq, &state).unwrap();
        if applied % 100 == 0 {
            let leak = leakage(&model, &state).unwrap();
            let coords = project_state(&model, &state).unwrap();
            println!("{applied:>7}  {leak:>12.3e}  {:>10.6}", coords[0].norm());
        }
    }
    println!("\nthe complement is dark: leakage stays at machine precision");
}
