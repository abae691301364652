//! Multi-target engineering: preparing weighted Fock superpositions from
//! a single coherent state, with full-space verification of the compiled
//! gate sequence.
//!
//! Run with: cargo run --release --example superpositions

use ndarray::Array1;
use num_complex::Complex64;
use rse::fock::{coherent_state, fidelity, fock_state, recommended_dim, BosonicState, FockSpace};
use rse::gates::GateEngine;
use rse::optimizer::{optimize, OptimizerConfig};
use rse::protocol::discrete_protocol;
use rse::subspace::{build_subspace, leakage};

fn main() {
    let alpha = Complex64::new(88.0_f64.sqrt(), 0.0);
    let dim = recommended_dim(alpha, 100);
    let space = FockSpace::new(dim).unwrap();

    let cases: [(&str, &[usize], &[f64], usize); 3] = [
        ("√0.3|70⟩ + √0.7|100⟩", &[70, 100], &[0.3, 0.7], 5),
        ("√0.2|70⟩ + √0.5|85⟩ + √0.3|100⟩", &[70, 85, 100], &[0.2, 0.5, 0.3], 4),
        (
            "√0.1|70⟩ + √0.3|80⟩ + √0.4|90⟩ + √0.2|100⟩",
            &[70, 80, 90, 100],
            &[0.1, 0.3, 0.4, 0.2],
            3,
        ),
    ];

    for (label, levels, weights, n_iters) in cases {
        let targets = levels.iter().map(|&n| fock_state(space, n).unwrap()).collect();
        let reference = coherent_state(space, alpha);
        let model = build_subspace(targets, reference).unwrap();

        let mut coords: Vec<Complex64> = weights
            .iter()
            .map(|&w| Complex64::new(w.sqrt(), 0.0))
            .collect();
        coords.push(Complex64::new(0.0, 0.0));

        let config = OptimizerConfig::default();
        let (params, reduced_f) = optimize(&model, &coords, n_iters, &config).unwrap();

        // compile to displacements and SNAPs, then replay in the full space
        let seq = discrete_protocol(&params, alpha, levels).unwrap();
        let mut engine = GateEngine::new(space);
        let prepared = engine.apply_sequence(&seq, model.reference()).unwrap();

        let mut amps = Array1::zeros(dim);
        for (&n, &w) in levels.iter().zip(weights.iter()) {
            amps[n] = Complex64::new(w.sqrt(), 0.0);
        }
        let target = BosonicState::new(space, amps).unwrap();
        let full_f = fidelity(&target, &prepared).unwrap();
        let leak = leakage(&model, &prepared).unwrap();

        println!("{label}");
        println!("  iterations:          {n_iters}");
        println!("  gates in sequence:   {}", seq.len());
        println!("  reduced fidelity:    {reduced_f:.9}");
        println!("  full-space fidelity: {full_f:.9}");
        println!("  subspace leakage:    {leak:.3e}");
        println!();
    }
}
