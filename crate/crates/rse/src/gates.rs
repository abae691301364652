//! Displacement, SNAP, and rank-1 phase oracle unitaries, plus the
//! compilation of oracles into primitive gate sequences and a text
//! serialization for compiled programs.

use std::collections::HashMap;
use std::f64::consts::PI;
use std::sync::Arc;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::fock::{BosonicState, FockSpace, NORM_TOL};
use crate::linalg::{expm, identity, unitarity_defect, CMat};

/// Wrap an angle into (-pi, pi].
pub fn wrap_phase(x: f64) -> f64 {
    let w = x.rem_euclid(2.0 * PI);
    if w > PI {
        w - 2.0 * PI
    } else if w == 0.0 {
        0.0
    } else {
        w
    }
}

/// Dense unitary on a truncated Fock space.
#[derive(Debug, Clone)]
pub struct UnitaryOperator {
    space: FockSpace,
    matrix: CMat,
}

impl UnitaryOperator {
    pub fn new(space: FockSpace, matrix: CMat) -> Result<Self> {
        if matrix.nrows() != space.dim() || matrix.ncols() != space.dim() {
            return Err(Error::DimensionMismatch(matrix.nrows(), space.dim()));
        }
        let defect = unitarity_defect(&matrix);
        if defect > 1e-10 {
            return Err(Error::NotUnitary(defect));
        }
        Ok(Self { space, matrix })
    }

    pub fn space(&self) -> FockSpace {
        self.space
    }

    pub fn matrix(&self) -> &CMat {
        &self.matrix
    }

    pub fn apply(&self, state: &BosonicState) -> Result<BosonicState> {
        if state.space().dim() != self.space.dim() {
            return Err(Error::DimensionMismatch(state.space().dim(), self.space.dim()));
        }
        BosonicState::new(self.space, self.matrix.dot(state.amplitudes()))
    }

    /// U† as an operator.
    pub fn adjoint(&self) -> Self {
        Self {
            space: self.space,
            matrix: self.matrix.t().mapv(|z| z.conj()),
        }
    }
}

/// Hardware primitive: a displacement pulse or a SNAP gate.
#[derive(Debug, Clone, PartialEq)]
pub enum Gate {
    Displacement(Complex64),
    Snap(Vec<(usize, f64)>),
}

impl Gate {
    /// Build a SNAP gate, wrapping phases into (-pi, pi] and rejecting
    /// duplicate level indices.
    pub fn snap(phase_map: &[(usize, f64)]) -> Result<Self> {
        let mut seen = std::collections::HashSet::new();
        let mut map = Vec::with_capacity(phase_map.len());
        for &(n, phase) in phase_map {
            if !seen.insert(n) {
                return Err(Error::DuplicateLevel(n));
            }
            map.push((n, wrap_phase(phase)));
        }
        Ok(Gate::Snap(map))
    }

    pub fn max_level(&self) -> Option<usize> {
        match self {
            Gate::Displacement(_) => None,
            Gate::Snap(map) => map.iter().map(|&(n, _)| n).max(),
        }
    }

    pub fn unitary(&self, space: FockSpace) -> Result<UnitaryOperator> {
        match self {
            Gate::Displacement(alpha) => displacement(space, *alpha),
            Gate::Snap(map) => snap(space, map),
        }
    }
}

/// Ordered list of primitives; the first listed gate acts first.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct GateSequence {
    gates: Vec<Gate>,
}

impl GateSequence {
    pub fn new(gates: Vec<Gate>) -> Self {
        Self { gates }
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    pub fn len(&self) -> usize {
        self.gates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gates.is_empty()
    }

    pub fn push(&mut self, gate: Gate) {
        self.gates.push(gate);
    }

    pub fn extend(&mut self, other: GateSequence) {
        self.gates.extend(other.gates);
    }

    /// One gate per line: `D <re> <im>` or `SNAP n:phase,...`,
    /// 17 significant digits.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for gate in &self.gates {
            match gate {
                Gate::Displacement(a) => {
                    out.push_str(&format!("D {:.16e} {:.16e}\n", a.re, a.im));
                }
                Gate::Snap(map) => {
                    let body: Vec<String> =
                        map.iter().map(|(n, p)| format!("{}:{:.16e}", n, p)).collect();
                    if body.is_empty() {
                        out.push_str("SNAP\n");
                    } else {
                        out.push_str(&format!("SNAP {}\n", body.join(",")));
                    }
                }
            }
        }
        out
    }

    pub fn parse_text(text: &str) -> Result<Self> {
        let mut gates = Vec::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() {
                continue;
            }
            let bad = |msg: &str| Error::Parse(format!("line {}: {}", lineno + 1, msg));
            if let Some(rest) = line.strip_prefix("D ") {
                let parts: Vec<&str> = rest.split_whitespace().collect();
                if parts.len() != 2 {
                    return Err(bad("expected `D <re> <im>`"));
                }
                let re: f64 = parts[0].parse().map_err(|_| bad("bad re"))?;
                let im: f64 = parts[1].parse().map_err(|_| bad("bad im"))?;
                gates.push(Gate::Displacement(Complex64::new(re, im)));
            } else if line == "SNAP" {
                gates.push(Gate::snap(&[])?);
            } else if let Some(rest) = line.strip_prefix("SNAP ") {
                let mut map = Vec::new();
                for item in rest.split(',') {
                    let (n, p) = item
                        .split_once(':')
                        .ok_or_else(|| bad("expected n:phase"))?;
                    let n: usize = n.trim().parse().map_err(|_| bad("bad level"))?;
                    let p: f64 = p.trim().parse().map_err(|_| bad("bad phase"))?;
                    map.push((n, p));
                }
                gates.push(Gate::snap(&map)?);
            } else {
                return Err(bad("unknown gate"));
            }
        }
        Ok(Self { gates })
    }
}

/// D(α) = exp(α a† - α* a) on the truncated space.
///
/// Built as the exponential of the truncated generator, so the result is
/// exactly unitary; truncation artifacts are confined to the top levels
/// covered by the `recommended_dim` headroom.
pub fn displacement(space: FockSpace, alpha: Complex64) -> Result<UnitaryOperator> {
    let dim = space.dim();
    if alpha == Complex64::new(0.0, 0.0) {
        return UnitaryOperator::new(space, identity(dim));
    }
    let mut gen = CMat::zeros((dim, dim));
    for n in 0..dim - 1 {
        let s = ((n + 1) as f64).sqrt();
        gen[[n + 1, n]] = alpha * s; // α a†
        gen[[n, n + 1]] = -alpha.conj() * s; // -α* a
    }
    UnitaryOperator::new(space, expm(&gen))
}

/// Diagonal SNAP unitary: entry e^{iθ_n} at each listed level, 1 elsewhere.
pub fn snap(space: FockSpace, phase_map: &[(usize, f64)]) -> Result<UnitaryOperator> {
    let dim = space.dim();
    let mut seen = std::collections::HashSet::new();
    let mut m = identity(dim);
    for &(n, phase) in phase_map {
        if !seen.insert(n) {
            return Err(Error::DuplicateLevel(n));
        }
        if n >= dim {
            return Err(Error::LevelOutOfRange { level: n, dim });
        }
        m[[n, n]] = Complex64::from_polar(1.0, phase);
    }
    UnitaryOperator::new(space, m)
}

/// Rank-1 phase oracle O(ψ, φ) = e^{-iφ|ψ⟩⟨ψ|} = I + (e^{-iφ} - 1)|ψ⟩⟨ψ|.
pub fn rank1_phase(psi: &BosonicState, phi: f64) -> Result<UnitaryOperator> {
    if (psi.norm() - 1.0).abs() > NORM_TOL {
        return Err(Error::NotNormalized(psi.norm()));
    }
    let dim = psi.space().dim();
    let coeff = Complex64::from_polar(1.0, -phi) - 1.0;
    let mut m = identity(dim);
    let v = psi.amplitudes();
    for i in 0..dim {
        let ci = coeff * v[i];
        for j in 0..dim {
            m[[i, j]] += ci * v[j].conj();
        }
    }
    UnitaryOperator::new(psi.space(), m)
}

/// Oracle on a single Fock state, realized by one SNAP gate.
///
/// O(|n⟩, φ) imprints e^{-iφ} on |n⟩, i.e. SNAP phase θ_n = -φ.
pub fn fock_goo(n: usize, phi: f64) -> GateSequence {
    GateSequence::new(vec![Gate::snap(&[(n, -phi)]).expect("single entry")])
}

/// Oracle on several mutually orthogonal Fock states as one SNAP gate.
pub fn multi_fock_goo(phase_pairs: &[(usize, f64)]) -> Result<GateSequence> {
    let negated: Vec<(usize, f64)> = phase_pairs.iter().map(|&(n, p)| (n, -p)).collect();
    Ok(GateSequence::new(vec![Gate::snap(&negated)?]))
}

/// Oracle on a coherent state via displacement conjugation:
/// O(|α⟩, φ) = D(α) · O(|0⟩, φ) · D(-α), applied left to right.
pub fn coherent_goo(alpha: Complex64, phi: f64) -> GateSequence {
    GateSequence::new(vec![
        Gate::Displacement(-alpha),
        Gate::snap(&[(0, -phi)]).expect("single entry"),
        Gate::Displacement(alpha),
    ])
}

/// Ordered matrix product of the primitive unitaries (first gate rightmost).
pub fn sequence_unitary(seq: &GateSequence, space: FockSpace) -> Result<UnitaryOperator> {
    let mut acc = identity(space.dim());
    for gate in seq.gates() {
        let u = gate.unitary(space)?;
        acc = u.matrix().dot(&acc);
    }
    UnitaryOperator::new(space, acc)
}

/// Applies gate sequences to states, caching displacement matrices so that
/// long alternating protocols cost one dense exponential per distinct
/// amplitude.
pub struct GateEngine {
    space: FockSpace,
    displacements: HashMap<(u64, u64), Arc<CMat>>,
}

impl GateEngine {
    pub fn new(space: FockSpace) -> Self {
        Self { space, displacements: HashMap::new() }
    }

    pub fn space(&self) -> FockSpace {
        self.space
    }

    fn displacement_matrix(&mut self, alpha: Complex64) -> Result<Arc<CMat>> {
        let key = (alpha.re.to_bits(), alpha.im.to_bits());
        if let Some(m) = self.displacements.get(&key) {
            return Ok(m.clone());
        }
        let u = displacement(self.space, alpha)?;
        let m = Arc::new(u.matrix().clone());
        self.displacements.insert(key, m.clone());
        Ok(m)
    }

    pub fn apply_gate(&mut self, gate: &Gate, state: &BosonicState) -> Result<BosonicState> {
        if state.space().dim() != self.space.dim() {
            return Err(Error::DimensionMismatch(state.space().dim(), self.space.dim()));
        }
        match gate {
            Gate::Displacement(alpha) => {
                let m = self.displacement_matrix(*alpha)?;
                BosonicState::new(self.space, m.dot(state.amplitudes()))
            }
            Gate::Snap(map) => {
                let mut v = state.amplitudes().clone();
                for &(n, phase) in map {
                    if n >= self.space.dim() {
                        return Err(Error::LevelOutOfRange { level: n, dim: self.space.dim() });
                    }
                    v[n] *= Complex64::from_polar(1.0, phase);
                }
                BosonicState::new(self.space, v)
            }
        }
    }

    pub fn apply_sequence(&mut self, seq: &GateSequence, state: &BosonicState) -> Result<BosonicState> {
        let mut s = state.clone();
        for gate in seq.gates() {
            s = self.apply_gate(gate, &s)?;
        }
        Ok(s)
    }

    /// States after each gate, starting with the initial state
    /// (length = gates + 1).
    pub fn states_along(&mut self, seq: &GateSequence, state: &BosonicState) -> Result<Vec<BosonicState>> {
        let mut out = Vec::with_capacity(seq.len() + 1);
        out.push(state.clone());
        for gate in seq.gates() {
            let next = self.apply_gate(gate, out.last().unwrap())?;
            out.push(next);
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::{coherent_state, fidelity, fock_state};
    use crate::linalg::max_norm;

    fn space(dim: usize) -> FockSpace {
        FockSpace::new(dim).unwrap()
    }

    #[test]
    fn displacement_zero_is_identity() {
        let u = displacement(space(8), Complex64::new(0.0, 0.0)).unwrap();
        assert!(max_norm(&(u.matrix() - &identity(8))) < 1e-14);
    }

    #[test]
    fn displacement_inverse_pair() {
        let s = space(40);
        let a = Complex64::new(1.5, -0.7);
        let u = displacement(s, a).unwrap();
        let v = displacement(s, -a).unwrap();
        let prod = u.matrix().dot(v.matrix());
        assert!(max_norm(&(&prod - &identity(40))) < 1e-10);
    }

    #[test]
    fn displacement_generates_coherent_state() {
        let s = space(200);
        let u = displacement(s, Complex64::new(10.0, 0.0)).unwrap();
        let moved = u.apply(&fock_state(s, 0).unwrap()).unwrap();
        let target = coherent_state(s, Complex64::new(10.0, 0.0));
        assert!(fidelity(&moved, &target).unwrap() > 1.0 - 1e-8);
    }

    #[test]
    fn snap_cases() {
        let s = space(4);
        let u = snap(s, &[]).unwrap();
        assert!(max_norm(&(u.matrix() - &identity(4))) < 1e-15);
        let u = snap(s, &[(3, std::f64::consts::PI)]).unwrap();
        assert!((u.matrix()[[3, 3]] - Complex64::new(-1.0, 0.0)).norm() < 1e-15);
        assert!((u.matrix()[[2, 2]] - Complex64::new(1.0, 0.0)).norm() < 1e-15);
        assert!(matches!(
            snap(s, &[(1, 0.1), (1, 0.2)]),
            Err(Error::DuplicateLevel(1))
        ));
    }

    #[test]
    fn snap_composition_adds_phases() {
        let s = space(6);
        let u1 = snap(s, &[(2, 0.4), (5, -1.0)]).unwrap();
        let u2 = snap(s, &[(2, 0.5)]).unwrap();
        let sum = snap(s, &[(2, 0.9), (5, -1.0)]).unwrap();
        let prod = u1.matrix().dot(u2.matrix());
        assert!(max_norm(&(&prod - sum.matrix())) < 1e-14);
    }

    #[test]
    fn rank1_phase_matches_generic_exponential() {
        let s = space(12);
        let psi = coherent_state(s, Complex64::new(1.2, 0.4));
        let phi = 0.83;
        let direct = rank1_phase(&psi, phi).unwrap();
        // oracle: scaling-and-squaring exponential of -i φ |ψ⟩⟨ψ|
        let dim = s.dim();
        let mut h = CMat::zeros((dim, dim));
        let v = psi.amplitudes();
        for i in 0..dim {
            for j in 0..dim {
                h[[i, j]] = Complex64::new(0.0, -phi) * v[i] * v[j].conj();
            }
        }
        let via_expm = expm(&h);
        assert!(max_norm(&(direct.matrix() - &via_expm)) < 1e-10);
    }

    #[test]
    fn rank1_phase_zero_is_identity() {
        let s = space(5);
        let psi = fock_state(s, 2).unwrap();
        let u = rank1_phase(&psi, 0.0).unwrap();
        assert!(max_norm(&(u.matrix() - &identity(5))) < 1e-15);
    }

    #[test]
    fn rank1_pi_is_reflection() {
        let s = space(5);
        let psi = coherent_state(s, Complex64::new(0.6, 0.0));
        let u = rank1_phase(&psi, std::f64::consts::PI).unwrap();
        let v = psi.amplitudes();
        let mut refl = identity(5);
        for i in 0..5 {
            for j in 0..5 {
                refl[[i, j]] -= 2.0 * v[i] * v[j].conj();
            }
        }
        assert!(max_norm(&(u.matrix() - &refl)) < 1e-14);
    }

    #[test]
    fn rank1_update_is_parallel_to_psi() {
        let s = space(9);
        let psi = coherent_state(s, Complex64::new(0.9, -0.3));
        let u = rank1_phase(&psi, 1.3).unwrap();
        let v = coherent_state(s, Complex64::new(-0.4, 1.1));
        let moved = u.apply(&v).unwrap();
        let diff: Vec<Complex64> = moved
            .amplitudes()
            .iter()
            .zip(v.amplitudes().iter())
            .map(|(a, b)| a - b)
            .collect();
        // diff must be a complex multiple of psi
        let p = psi.amplitudes();
        let scale = diff[0] / p[0];
        for i in 0..9 {
            assert!((diff[i] - scale * p[i]).norm() < 1e-12);
        }
    }

    #[test]
    fn fock_goo_matches_rank1() {
        let s = space(16);
        let seq = fock_goo(5, 0.7);
        let u = sequence_unitary(&seq, s).unwrap();
        let oracle = rank1_phase(&fock_state(s, 5).unwrap(), 0.7).unwrap();
        assert!(max_norm(&(u.matrix() - oracle.matrix())) < 1e-12);
    }

    #[test]
    fn fock_goo_phases_add() {
        let s = space(8);
        let mut ab = fock_goo(3, 0.4);
        ab.extend(fock_goo(3, 0.9));
        let combined = fock_goo(3, 1.3);
        let u1 = sequence_unitary(&ab, s).unwrap();
        let u2 = sequence_unitary(&combined, s).unwrap();
        assert!(max_norm(&(u1.matrix() - u2.matrix())) < 1e-14);
    }

    #[test]
    fn coherent_goo_phi_zero_cancels() {
        let s = space(30);
        let seq = coherent_goo(Complex64::new(1.1, 0.3), 0.0);
        let u = sequence_unitary(&seq, s).unwrap();
        assert!(max_norm(&(u.matrix() - &identity(30))) < 1e-10);
    }

    #[test]
    fn coherent_goo_matches_rank1_closed_form() {
        let s = space(60);
        let alpha = Complex64::new(2.0, 0.0);
        let phi = 1.1;
        let u = sequence_unitary(&coherent_goo(alpha, phi), s).unwrap();
        let oracle = rank1_phase(&coherent_state(s, alpha), phi).unwrap();
        assert!(max_norm(&(u.matrix() - oracle.matrix())) < 1e-9);
    }

    #[test]
    fn multi_fock_goo_commuting_product() {
        let s = space(16);
        let seq = multi_fock_goo(&[(3, 1.0), (9, -0.5)]).unwrap();
        assert_eq!(seq.len(), 1);
        let u = sequence_unitary(&seq, s).unwrap();
        let u1 = rank1_phase(&fock_state(s, 3).unwrap(), 1.0).unwrap();
        let u2 = rank1_phase(&fock_state(s, 9).unwrap(), -0.5).unwrap();
        let prod = u1.matrix().dot(u2.matrix());
        assert!(max_norm(&(u.matrix() - &prod)) < 1e-13);
        assert!(multi_fock_goo(&[]).unwrap().gates()[0] == Gate::snap(&[]).unwrap());
        assert!(matches!(multi_fock_goo(&[(2, 0.1), (2, 0.2)]), Err(Error::DuplicateLevel(2))));
    }

    #[test]
    fn sequence_unitary_empty_and_inverse() {
        let s = space(20);
        let u = sequence_unitary(&GateSequence::default(), s).unwrap();
        assert!(max_norm(&(u.matrix() - &identity(20))) < 1e-15);
        let a = Complex64::new(0.8, -0.2);
        let seq = GateSequence::new(vec![Gate::Displacement(a), Gate::Displacement(-a)]);
        let u = sequence_unitary(&seq, s).unwrap();
        assert!(max_norm(&(u.matrix() - &identity(20))) < 1e-10);
    }

    #[test]
    fn engine_agrees_with_dense_product() {
        let s = space(24);
        let mut seq = coherent_goo(Complex64::new(0.9, 0.1), 0.6);
        seq.extend(fock_goo(7, -1.2));
        seq.extend(coherent_goo(Complex64::new(0.9, 0.1), -0.3));
        let init = coherent_state(s, Complex64::new(0.5, 0.5));
        let mut engine = GateEngine::new(s);
        let via_engine = engine.apply_sequence(&seq, &init).unwrap();
        let via_matrix = sequence_unitary(&seq, s).unwrap().apply(&init).unwrap();
        let d: f64 = via_engine
            .amplitudes()
            .iter()
            .zip(via_matrix.amplitudes().iter())
            .map(|(a, b)| (a - b).norm_sqr())
            .sum::<f64>()
            .sqrt();
        assert!(d < 1e-11);
    }

    #[test]
    fn text_round_trip() {
        let mut seq = coherent_goo(Complex64::new(1.25, -0.75), 2.0);
        seq.extend(multi_fock_goo(&[(70, 3.0), (100, -0.25)]).unwrap());
        seq.push(Gate::snap(&[]).unwrap());
        let text = seq.to_text();
        let parsed = GateSequence::parse_text(&text).unwrap();
        assert_eq!(seq, parsed);
    }

    #[test]
    fn parse_rejects_garbage() {
        assert!(GateSequence::parse_text("Q 1 2").is_err());
        assert!(GateSequence::parse_text("D 1.0").is_err());
        assert!(GateSequence::parse_text("SNAP 3").is_err());
    }

    #[test]
    fn wrap_phase_range() {
        assert_eq!(wrap_phase(std::f64::consts::PI), std::f64::consts::PI);
        assert!((wrap_phase(-std::f64::consts::PI) - std::f64::consts::PI).abs() < 1e-15);
        assert!((wrap_phase(3.0 * std::f64::consts::PI) - std::f64::consts::PI).abs() < 1e-12);
        assert_eq!(wrap_phase(0.0), 0.0);
    }
}
