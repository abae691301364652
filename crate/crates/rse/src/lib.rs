//! Resonant subspace engineering for bosonic modes.
//!
//! The dynamics generated by rank-1 phase oracles on a reference coherent
//! state and a set of orthonormal targets are confined to the
//! (K+1)-dimensional span of those states. This crate constructs that
//! invariant subspace, derives the resonance / phase-matching parameters
//! and transfer time in closed form, evolves states exactly in both the
//! reduced and full truncated Fock space, compiles protocols into
//! displacement + SNAP gate sequences, and optimizes discrete iteration
//! angles for Fock-state and superposition targets.
//!
//! Start with the runnable programs in `examples/` — each one exercises a
//! major capability end to end — or the `rse` binary for batch runs.

pub mod cli;
pub mod error;
pub mod fock;
pub mod gates;
pub mod linalg;
pub mod optimizer;
pub mod protocol;
pub mod subspace;

pub use error::{Error, Result};
pub use fock::{coherent_state, fidelity, fock_state, inner, recommended_dim, BosonicState, FockSpace};
pub use gates::{
    coherent_goo, displacement, fock_goo, multi_fock_goo, rank1_phase, sequence_unitary, snap,
    Gate, GateEngine, GateSequence, UnitaryOperator,
};
pub use optimizer::{
    fit_scaling_exponent, minimal_iterations, objective_gradient, optimize, reduced_objective,
    OptimizedRecord, OptimizerConfig, ProtocolParams,
};
pub use protocol::{
    continuous_fidelity_trace, discrete_protocol, evolve_full, evolve_reduced, first_passage,
    first_passage_refined, pre_rotation_gate, resonant_crossing_time, sequence_fidelity_trace,
    time_grid, trotter_compile, write_trace_csv, FidelityTrace,
};
pub use subspace::{
    build_subspace, leakage, lift_state, phase_matching_mismatch, project_state,
    reduced_hamiltonian, resonance_weights, transfer_time, ReducedHamiltonian, SubspaceModel,
    TransferTime,
};
