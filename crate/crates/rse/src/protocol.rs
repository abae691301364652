//! Protocol generation and simulation: exact continuous evolution in the
//! reduced and full spaces, Trotter compilation into alternating oracles,
//! discrete iteration sequences, and fidelity traces.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::io::Write;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::fock::{inner, BosonicState};
use crate::gates::{coherent_goo, multi_fock_goo, Gate, GateEngine, GateSequence};
use crate::linalg::{hermitian_eig, CMat};
use crate::optimizer::ProtocolParams;
use crate::subspace::{lift_state, project_state, ReducedHamiltonian, SubspaceModel};

/// Pre-rotation U_n = e^{-i π/2 |n⟩⟨n|}, a single SNAP gate that aligns
/// the reference with the resonant rotation trajectory.
pub fn pre_rotation_gate(n: usize) -> GateSequence {
    GateSequence::new(vec![Gate::snap(&[(n, -PI / 2.0)]).expect("single entry")])
}

/// Exact propagator for a reduced (K+1)-dimensional generator, built from
/// one Hermitian eigendecomposition.
pub struct ReducedPropagator {
    eigvals: Vec<f64>,
    eigvecs: CMat,
}

impl ReducedPropagator {
    pub fn new(h: &ReducedHamiltonian) -> Self {
        let (eigvals, eigvecs) = hermitian_eig(h.matrix());
        Self { eigvals, eigvecs }
    }

    /// exp(-iHt) applied to reduced coordinates.
    pub fn evolve(&self, t: f64, coords: &[Complex64]) -> Vec<Complex64> {
        let d = self.eigvals.len();
        assert_eq!(coords.len(), d);
        // c' = V diag(e^{-i λ t}) V† c
        let mut proj = vec![Complex64::new(0.0, 0.0); d];
        for k in 0..d {
            for i in 0..d {
                proj[k] += self.eigvecs[[i, k]].conj() * coords[i];
            }
            proj[k] *= (Complex64::new(0.0, -t) * self.eigvals[k]).exp();
        }
        let mut out = vec![Complex64::new(0.0, 0.0); d];
        for i in 0..d {
            for k in 0..d {
                out[i] += self.eigvecs[[i, k]] * proj[k];
            }
        }
        out
    }
}

/// One-shot exp(-iHt) on reduced coordinates.
pub fn evolve_reduced(h: &ReducedHamiltonian, t: f64, coords: &[Complex64]) -> Vec<Complex64> {
    ReducedPropagator::new(h).evolve(t, coords)
}

/// Full-space evolution under the rank-(K+1) generator: the subspace part
/// evolves by the reduced propagator, the complement stays dark.
pub fn evolve_full(
    model: &SubspaceModel,
    h: &ReducedHamiltonian,
    t: f64,
    state: &BosonicState,
) -> Result<BosonicState> {
    let coords = project_state(model, state)?;
    let evolved = evolve_reduced(h, t, &coords);
    let inside_before = lift_state(model, &coords)?;
    let inside_after = lift_state(model, &evolved)?;
    let mut amps = state.amplitudes().clone();
    amps.zip_mut_with(inside_before.amplitudes(), |a, &b| *a -= b);
    amps.zip_mut_with(inside_after.amplitudes(), |a, &b| *a += b);
    BosonicState::new(model.space(), amps)
}

/// First-order Trotter compilation of exp(-iHt) into `steps` repetitions
/// of [Fock oracle, coherent oracle]; the Fock oracle acts first in each
/// step.
pub fn trotter_compile(
    alpha: Complex64,
    target_levels: &[(usize, f64)],
    reference_weight: f64,
    t: f64,
    steps: usize,
) -> Result<GateSequence> {
    if steps == 0 {
        return Err(Error::Config("steps must be >= 1".into()));
    }
    let dt = t / steps as f64;
    let fock_phases: Vec<(usize, f64)> =
        target_levels.iter().map(|&(n, w)| (n, w * dt)).collect();
    let mut seq = GateSequence::default();
    for _ in 0..steps {
        seq.extend(multi_fock_goo(&fock_phases)?);
        seq.extend(coherent_goo(alpha, reference_weight * dt));
    }
    Ok(seq)
}

/// Discrete iteration protocol: for each iteration j the Fock oracle with
/// phases b_j acts first, then the coherent oracle with phase c_j; a
/// trailing SNAP fixes the relative phases of the target components when
/// `final_phase` is present.
pub fn discrete_protocol(
    params: &ProtocolParams,
    alpha: Complex64,
    target_levels: &[usize],
) -> Result<GateSequence> {
    let k = target_levels.len();
    params.validate(k)?;
    let mut seq = GateSequence::default();
    for j in 0..params.iterations() {
        let pairs: Vec<(usize, f64)> = target_levels
            .iter()
            .zip(params.fock_phases()[j].iter())
            .map(|(&n, &b)| (n, b))
            .collect();
        seq.extend(multi_fock_goo(&pairs)?);
        seq.extend(coherent_goo(alpha, params.coherent_phases()[j]));
    }
    if let Some(final_phase) = params.final_phase() {
        let pairs: Vec<(usize, f64)> = target_levels
            .iter()
            .zip(final_phase.iter())
            .map(|(&n, &f)| (n, f))
            .collect();
        seq.extend(multi_fock_goo(&pairs)?);
    }
    Ok(seq)
}

/// Fidelity sampled along an evolution.
#[derive(Debug, Clone)]
pub struct FidelityTrace {
    times: Vec<f64>,
    values: Vec<f64>,
    metadata: BTreeMap<String, f64>,
}

impl FidelityTrace {
    pub fn new(times: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        if times.len() != values.len() {
            return Err(Error::SizeMismatch(format!(
                "{} times vs {} values",
                times.len(),
                values.len()
            )));
        }
        if times.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::Config("trace times must be strictly increasing".into()));
        }
        let values = values.into_iter().map(|v| v.clamp(0.0, 1.0)).collect();
        Ok(Self { times, values, metadata: BTreeMap::new() })
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn metadata(&self) -> &BTreeMap<String, f64> {
        &self.metadata
    }

    pub fn set_metadata(&mut self, key: &str, value: f64) {
        self.metadata.insert(key.to_string(), value);
    }

    pub fn peak(&self) -> f64 {
        self.values.iter().copied().fold(0.0, f64::max)
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }
}

/// Uniform grid 0, dt, 2dt, ..., covering [0, horizon].
pub fn time_grid(horizon: f64, dt: f64) -> Vec<f64> {
    let n = (horizon / dt).round() as usize;
    (0..=n).map(|i| i as f64 * dt).collect()
}

/// Trace of |⟨target|e^{-iHt}|initial⟩|² on a time grid, using the exact
/// reduced propagator plus the static dark component.
pub fn continuous_fidelity_trace(
    model: &SubspaceModel,
    h: &ReducedHamiltonian,
    initial: &BosonicState,
    target: &BosonicState,
    grid: &[f64],
) -> Result<FidelityTrace> {
    let f = fidelity_at_fn(model, h, initial, target)?;
    let values: Vec<f64> = grid.iter().map(|&t| f(t)).collect();
    FidelityTrace::new(grid.to_vec(), values)
}

/// Closure evaluating the continuous fidelity at arbitrary times; used for
/// traces and for first-passage refinement.
pub fn fidelity_at_fn(
    model: &SubspaceModel,
    h: &ReducedHamiltonian,
    initial: &BosonicState,
    target: &BosonicState,
) -> Result<impl Fn(f64) -> f64> {
    let prop = ReducedPropagator::new(h);
    let init_coords = project_state(model, initial)?;
    let target_coords = project_state(model, target)?;
    // overlap of the target with the dark residual of the initial state
    let inside = lift_state(model, &init_coords)?;
    let mut dark = initial.amplitudes().clone();
    dark.zip_mut_with(inside.amplitudes(), |a, &b| *a -= b);
    let dark_state = BosonicState::new(model.space(), dark)?;
    let static_overlap = inner(target, &dark_state)?;
    Ok(move |t: f64| {
        let evolved = prop.evolve(t, &init_coords);
        let mut ov = static_overlap;
        for (tc, ec) in target_coords.iter().zip(evolved.iter()) {
            ov += tc.conj() * ec;
        }
        ov.norm_sqr().clamp(0.0, 1.0)
    })
}

/// Fidelity to the target after each gate of a sequence; the grid indexes
/// gate boundaries (0 = before the first gate).
pub fn sequence_fidelity_trace(
    engine: &mut GateEngine,
    seq: &GateSequence,
    initial: &BosonicState,
    target: &BosonicState,
) -> Result<FidelityTrace> {
    let states = engine.states_along(seq, initial)?;
    let mut times = Vec::with_capacity(states.len());
    let mut values = Vec::with_capacity(states.len());
    for (i, s) in states.iter().enumerate() {
        times.push(i as f64);
        values.push(crate::fock::fidelity(target, s)?);
    }
    FidelityTrace::new(times, values)
}

/// Earliest grid time at which the trace reaches `threshold`.
pub fn first_passage(trace: &FidelityTrace, threshold: f64) -> Option<f64> {
    trace
        .values
        .iter()
        .position(|&v| v >= threshold)
        .map(|i| trace.times[i])
}

/// Earliest crossing time, refined to 1e-6 time resolution by bisection of
/// the continuous evolver between the bracketing grid points.
pub fn first_passage_refined(
    trace: &FidelityTrace,
    threshold: f64,
    fidelity_at: impl Fn(f64) -> f64,
) -> Option<f64> {
    let i = trace.values.iter().position(|&v| v >= threshold)?;
    if i == 0 {
        return Some(trace.times[0]);
    }
    let mut lo = trace.times[i - 1];
    let mut hi = trace.times[i];
    while hi - lo > 1e-6 {
        let mid = 0.5 * (lo + hi);
        if fidelity_at(mid) >= threshold {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Some(0.5 * (lo + hi))
}

/// Closed-form time at which the resonant K = 1 trace first reaches
/// `threshold`: (arccos|μ| - arccos√threshold)/|H_12|.
pub fn resonant_crossing_time(
    model: &SubspaceModel,
    h: &ReducedHamiltonian,
    threshold: f64,
) -> Result<f64> {
    if model.k() != 1 {
        return Err(Error::Unsupported("closed-form crossing is defined for K = 1".into()));
    }
    let mu = model.overlaps()[0].norm();
    let h12 = h.matrix()[[0, 1]].norm();
    if h12 == 0.0 {
        return Err(Error::UndefinedPhase);
    }
    Ok((mu.acos() - threshold.sqrt().acos()) / h12)
}

/// CSV export with header `t,fidelity`, 17 significant digits.
pub fn write_trace_csv<W: Write>(trace: &FidelityTrace, mut w: W) -> Result<()> {
    writeln!(w, "t,fidelity")?;
    for (t, v) in trace.times.iter().zip(trace.values.iter()) {
        writeln!(w, "{:.16e},{:.16e}", t, v)?;
    }
    Ok(())
}
