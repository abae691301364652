//! Transfer-time scaling with photon number: T(n) with α = √n follows an
//! O(n^(1/4)) law because the Poisson peak overlap decays like n^(-1/4).
//!
//! Run with: cargo run --release --example scaling_law

use num_complex::Complex64;
use rse::fock::{coherent_state, fock_state, recommended_dim, FockSpace};
use rse::optimizer::fit_scaling_exponent;
use rse::subspace::{build_subspace, reduced_hamiltonian, resonance_weights, transfer_time};

fn main() {
    let omega = 1.0;
    println!("{:>5}  {:>10}  {:>10}  {:>12}", "n", "T", "bound", "|μ|");
    let mut t_pairs = Vec::new();
    let mut b_pairs = Vec::new();
    for n in [16usize, 25, 50, 100, 200, 400, 800] {
        let alpha = Complex64::new((n as f64).sqrt(), 0.0);
        let dim = recommended_dim(alpha, n);
        let space = FockSpace::new(dim).unwrap();
        let target = fock_state(space, n).unwrap();
        let reference = coherent_state(space, alpha);
        let model = build_subspace(vec![target], reference).unwrap();
        let w = resonance_weights(&model, omega).unwrap();
        let h = reduced_hamiltonian(&model, omega, &[w]).unwrap();
        let tt = transfer_time(&model, &h).unwrap();
        let mu = model.overlaps()[0].norm();
        println!("{n:>5}  {:>10.5}  {:>10.5}  {mu:>12.8}", tt.time, tt.bound);
        t_pairs.push((n as f64, tt.time));
        b_pairs.push((n as f64, tt.bound));
    }

    let (slope_t, _) = fit_scaling_exponent(&t_pairs).unwrap();
    let (slope_b, _) = fit_scaling_exponent(&b_pairs).unwrap();
    println!("\nlog-log fit of T(n):     exponent {slope_t:.4}");
    println!("log-log fit of bound(n): exponent {slope_b:.4}");
    println!("Poisson peak pmf ~ (2πn)^(-1/2) gives |μ| ~ n^(-1/4), hence T ~ n^(1/4)");
}
