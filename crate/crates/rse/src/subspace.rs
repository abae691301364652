//! The engineered invariant subspace: orthonormal targets plus a coherent
//! reference, the orthogonal complement, the projected effective
//! Hamiltonian, and the closed-form resonance / phase-matching /
//! transfer-time diagnostics.

use std::f64::consts::PI;

use ndarray::Array1;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::fock::{inner, BosonicState, FockSpace};
use crate::gates::wrap_phase;
use crate::linalg::CMat;

pub const ORTHONORMALITY_TOL: f64 = 1e-8;
pub const OVERLAP_FLOOR: f64 = 1e-8;

/// Span of K orthonormal targets and a reference state, with the
/// complement |ψ⊥⟩ completing an orthonormal (K+1)-dimensional basis
/// ordered [targets..., complement].
#[derive(Debug, Clone)]
pub struct SubspaceModel {
    space: FockSpace,
    targets: Vec<BosonicState>,
    reference: BosonicState,
    overlaps: Vec<Complex64>,
    complement: BosonicState,
}

impl SubspaceModel {
    pub fn space(&self) -> FockSpace {
        self.space
    }

    pub fn targets(&self) -> &[BosonicState] {
        &self.targets
    }

    pub fn reference(&self) -> &BosonicState {
        &self.reference
    }

    /// μ_k = ⟨ψ_k|α⟩.
    pub fn overlaps(&self) -> &[Complex64] {
        &self.overlaps
    }

    pub fn complement(&self) -> &BosonicState {
        &self.complement
    }

    pub fn k(&self) -> usize {
        self.targets.len()
    }

    /// Reduced dimension K+1.
    pub fn reduced_dim(&self) -> usize {
        self.targets.len() + 1
    }

    /// θ = arg(μ); only defined for a single target.
    pub fn theta(&self) -> Result<f64> {
        if self.k() != 1 {
            return Err(Error::Unsupported(
                "theta is defined only for a single target (K = 1)".into(),
            ));
        }
        Ok(self.overlaps[0].arg())
    }

    /// Basis vector i of [targets..., complement].
    pub fn basis_vector(&self, i: usize) -> &BosonicState {
        if i < self.targets.len() {
            &self.targets[i]
        } else {
            &self.complement
        }
    }

    /// Reference coordinates in the basis: (μ_1, ..., μ_K, √(1 - Σ|μ|²)).
    pub fn reference_coords(&self) -> Vec<Complex64> {
        let mut v: Vec<Complex64> = self.overlaps.clone();
        let rem = 1.0 - self.overlaps.iter().map(|m| m.norm_sqr()).sum::<f64>();
        v.push(Complex64::new(rem.max(0.0).sqrt(), 0.0));
        v
    }
}

/// Build the invariant subspace from orthonormal targets and a reference.
///
/// The complement is (|α⟩ - Σ μ_k|ψ_k⟩)/√(1 - Σ|μ_k|²).
pub fn build_subspace(targets: Vec<BosonicState>, reference: BosonicState) -> Result<SubspaceModel> {
    if targets.is_empty() {
        return Err(Error::Config("at least one target state is required".into()));
    }
    let space = reference.space();
    for t in &targets {
        if t.space().dim() != space.dim() {
            return Err(Error::DimensionMismatch(t.space().dim(), space.dim()));
        }
    }
    // pairwise orthonormality
    for i in 0..targets.len() {
        for j in 0..=i {
            let g = inner(&targets[i], &targets[j])?;
            let expected = if i == j { 1.0 } else { 0.0 };
            let residual = (g - expected).norm();
            if residual > ORTHONORMALITY_TOL {
                return Err(Error::NonOrthonormalTargets(residual));
            }
        }
    }
    let mut overlaps = Vec::with_capacity(targets.len());
    for (idx, t) in targets.iter().enumerate() {
        let mu = inner(t, &reference)?;
        if mu.norm() < OVERLAP_FLOOR {
            return Err(Error::UnreachableTarget { index: idx, overlap: mu.norm() });
        }
        overlaps.push(mu);
    }
    let total: f64 = overlaps.iter().map(|m| m.norm_sqr()).sum();
    if total >= 1.0 - 1e-10 {
        return Err(Error::DegenerateSubspace);
    }
    let mut comp: Array1<Complex64> = reference.amplitudes().clone();
    for (mu, t) in overlaps.iter().zip(targets.iter()) {
        comp.zip_mut_with(t.amplitudes(), |c, &t| *c -= mu * t);
    }
    let scale = Complex64::new(1.0 / (1.0 - total).sqrt(), 0.0);
    comp.mapv_inplace(|z| z * scale);
    let complement = BosonicState::new(space, comp)?;
    Ok(SubspaceModel { space, targets, reference, overlaps, complement })
}

/// Effective generator projected onto the subspace basis (angular
/// frequency units), with the weights that produced it.
#[derive(Debug, Clone)]
pub struct ReducedHamiltonian {
    matrix: CMat,
    reference_weight: f64,
    target_weights: Vec<f64>,
}

impl ReducedHamiltonian {
    pub fn matrix(&self) -> &CMat {
        &self.matrix
    }

    pub fn reference_weight(&self) -> f64 {
        self.reference_weight
    }

    pub fn target_weights(&self) -> &[f64] {
        &self.target_weights
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }
}

/// Project H = Ω|α⟩⟨α| + Σ ω_j|ψ_j⟩⟨ψ_j| onto the [targets..., complement]
/// basis. Since the targets are basis vectors the result is
/// diag(ω_1..ω_K, 0) + Ω v v† with v the reference coordinates.
pub fn reduced_hamiltonian(
    model: &SubspaceModel,
    reference_weight: f64,
    target_weights: &[f64],
) -> Result<ReducedHamiltonian> {
    if target_weights.len() != model.k() {
        return Err(Error::SizeMismatch(format!(
            "{} target weights for K = {}",
            target_weights.len(),
            model.k()
        )));
    }
    let d = model.reduced_dim();
    let v = model.reference_coords();
    let mut m = CMat::zeros((d, d));
    for i in 0..d {
        for j in 0..d {
            m[[i, j]] = Complex64::new(reference_weight, 0.0) * v[i] * v[j].conj();
        }
    }
    for (k, &w) in target_weights.iter().enumerate() {
        m[[k, k]] += Complex64::new(w, 0.0);
    }
    Ok(ReducedHamiltonian {
        matrix: m,
        reference_weight,
        target_weights: target_weights.to_vec(),
    })
}

/// Resonant target weight ω = Ω(1 - 2|μ|²) for a single target; feeding it
/// back into `reduced_hamiltonian` makes the two diagonal entries equal.
pub fn resonance_weights(model: &SubspaceModel, omega: f64) -> Result<f64> {
    if model.k() != 1 {
        return Err(Error::Unsupported(
            "closed-form resonance applies only to K = 1; use the optimizer for multi-target protocols"
                .into(),
        ));
    }
    Ok(omega * (1.0 - 2.0 * model.overlaps()[0].norm_sqr()))
}

/// Wrapped difference arg(H_12) - θ - π/2 in (-π, π]; zero means the
/// geodesic through the reference needs no pre-rotation.
pub fn phase_matching_mismatch(model: &SubspaceModel, h: &ReducedHamiltonian) -> Result<f64> {
    if model.k() != 1 {
        return Err(Error::Unsupported("phase matching is defined for K = 1".into()));
    }
    let h12 = h.matrix()[[0, 1]];
    if h12.norm() == 0.0 {
        return Err(Error::UndefinedPhase);
    }
    Ok(wrap_phase(h12.arg() - model.theta()? - PI / 2.0))
}

#[derive(Debug, Clone, Copy)]
pub struct TransferTime {
    /// arccos(|μ|)/|H_12|.
    pub time: f64,
    /// π/(2 Ω |μ|), the closed-form upper bound.
    pub bound: f64,
}

/// Deterministic transfer time for the resonant K = 1 protocol.
pub fn transfer_time(model: &SubspaceModel, h: &ReducedHamiltonian) -> Result<TransferTime> {
    if model.k() != 1 {
        return Err(Error::Unsupported("transfer time is defined for K = 1".into()));
    }
    let m = h.matrix();
    let h12 = m[[0, 1]].norm();
    if h12 == 0.0 {
        return Err(Error::UndefinedPhase);
    }
    let detuning = (m[[0, 0]].re - m[[1, 1]].re).abs();
    if detuning > 1e-9 * h12 {
        return Err(Error::ResonanceViolated(detuning));
    }
    let mu = model.overlaps()[0].norm();
    Ok(TransferTime {
        time: mu.acos() / h12,
        bound: PI / (2.0 * h.reference_weight() * mu),
    })
}

/// Coordinates of a full-space state in the [targets..., complement] basis.
pub fn project_state(model: &SubspaceModel, state: &BosonicState) -> Result<Vec<Complex64>> {
    if state.space().dim() != model.space().dim() {
        return Err(Error::DimensionMismatch(state.space().dim(), model.space().dim()));
    }
    (0..model.reduced_dim())
        .map(|i| inner(model.basis_vector(i), state))
        .collect()
}

/// Full-space state Σ c_i |b_i⟩ from reduced coordinates.
pub fn lift_state(model: &SubspaceModel, coords: &[Complex64]) -> Result<BosonicState> {
    if coords.len() != model.reduced_dim() {
        return Err(Error::SizeMismatch(format!(
            "{} coordinates for reduced dimension {}",
            coords.len(),
            model.reduced_dim()
        )));
    }
    let mut v: Array1<Complex64> = Array1::zeros(model.space().dim());
    for (i, c) in coords.iter().enumerate() {
        v.zip_mut_with(model.basis_vector(i).amplitudes(), |acc, &b| *acc += c * b);
    }
    BosonicState::new(model.space(), v)
}

/// Population outside the engineered subspace, clamped at zero.
pub fn leakage(model: &SubspaceModel, state: &BosonicState) -> Result<f64> {
    let coords = project_state(model, state)?;
    let inside: f64 = coords.iter().map(|c| c.norm_sqr()).sum();
    Ok((state.norm().powi(2) - inside).max(0.0))
}
