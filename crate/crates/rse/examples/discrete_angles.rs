//! Discrete protocols with optimized oracle angles: how few alternating
//! oracle iterations reach a large Fock state, compared with the
//! Grover-like all-π schedule.
//!
//! Run with: cargo run --release --example discrete_angles

use num_complex::Complex64;
use rse::fock::{coherent_state, fidelity, fock_state, recommended_dim, FockSpace};
use rse::gates::GateEngine;
use rse::optimizer::{optimize, reduced_objective, OptimizerConfig, ProtocolParams};
use rse::protocol::discrete_protocol;
use rse::subspace::build_subspace;

fn main() {
    let n = 100;
    let alpha = Complex64::new(10.0, 0.0);
    let dim = recommended_dim(alpha, n);
    let space = FockSpace::new(dim).unwrap();
    let target_state = fock_state(space, n).unwrap();
    let reference = coherent_state(space, alpha);
    let model = build_subspace(vec![target_state.clone()], reference).unwrap();
    let target = vec![Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)];

    // the Grover-like schedule: every oracle angle set to π
    println!("all-π (amplitude-amplification) schedule:");
    for n_iters in 1..=6 {
        let params = ProtocolParams::new(
            vec![std::f64::consts::PI; n_iters],
            vec![vec![std::f64::consts::PI]; n_iters],
            None,
        )
        .unwrap();
        let f = reduced_objective(&params, &model, &target).unwrap();
        println!("  N = {n_iters}: F = {f:.6}");
    }

    // optimized angles reach the target much faster
    let config = OptimizerConfig { restarts: 32, seed: 1, ..Default::default() };
    println!("\noptimized angles:");
    let mut best: Option<ProtocolParams> = None;
    for n_iters in 1..=5 {
        let (params, f) = optimize(&model, &target, n_iters, &config).unwrap();
        println!("  N = {n_iters}: F = {f:.9}");
        if f >= 0.995 && best.is_none() {
            best = Some(params);
        }
    }

    if let Some(params) = best {
        println!("\nangles for the first schedule with F ≥ 0.995:");
        for (j, (c, b)) in params
            .coherent_phases()
            .iter()
            .zip(params.fock_phases().iter())
            .enumerate()
        {
            println!("  iteration {}: fock phase {:+.6}, coherent phase {c:+.6}", j + 1, b[0]);
        }
        // verify in the full space by compiling and applying the gates
        let seq = discrete_protocol(&params, alpha, &[n]).unwrap();
        let mut engine = GateEngine::new(space);
        let prepared = engine.apply_sequence(&seq, model.reference()).unwrap();
        let f_full = fidelity(&target_state, &prepared).unwrap();
        println!("full-space fidelity after {} gates: {f_full:.9}", seq.len());
    }
}
