//! Truncated Fock space: state construction, overlaps, fidelity, and
//! the truncation policy for coherent-state amplitudes.

use ndarray::Array1;
use num_complex::Complex64;
use statrs::function::gamma::ln_gamma;

use crate::error::{Error, Result};
use crate::linalg::CVec;

pub const NORM_TOL: f64 = 1e-9;

/// A bosonic mode truncated to levels |0⟩ … |dim-1⟩.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FockSpace {
    dim: usize,
}

impl FockSpace {
    pub fn new(dim: usize) -> Result<Self> {
        if dim == 0 {
            return Err(Error::EmptySpace);
        }
        Ok(Self { dim })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }
}

/// Complex amplitude vector over the truncated Fock basis.
#[derive(Debug, Clone, PartialEq)]
pub struct BosonicState {
    space: FockSpace,
    amplitudes: CVec,
}

impl BosonicState {
    pub fn new(space: FockSpace, amplitudes: CVec) -> Result<Self> {
        if amplitudes.len() != space.dim() {
            return Err(Error::DimensionMismatch(amplitudes.len(), space.dim()));
        }
        Ok(Self { space, amplitudes })
    }

    pub fn space(&self) -> FockSpace {
        self.space
    }

    pub fn amplitudes(&self) -> &CVec {
        &self.amplitudes
    }

    pub fn into_amplitudes(self) -> CVec {
        self.amplitudes
    }

    pub fn norm(&self) -> f64 {
        self.amplitudes.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn is_normalized(&self) -> bool {
        (self.norm() - 1.0).abs() < NORM_TOL
    }

    /// Rescale to unit norm.
    pub fn normalized(mut self) -> Self {
        let n = self.norm();
        if n > 0.0 {
            let inv = Complex64::new(1.0 / n, 0.0);
            self.amplitudes.mapv_inplace(|z| z * inv);
        }
        self
    }
}

/// Basis vector |n⟩.
pub fn fock_state(space: FockSpace, n: usize) -> Result<BosonicState> {
    if n >= space.dim() {
        return Err(Error::LevelOutOfRange { level: n, dim: space.dim() });
    }
    let mut v = Array1::zeros(space.dim());
    v[n] = Complex64::new(1.0, 0.0);
    BosonicState::new(space, v)
}

/// Truncated, renormalized coherent state |α⟩.
///
/// Amplitudes e^{-|α|²/2} α^n / √(n!) are evaluated in log domain so that
/// levels beyond n ≈ 170 (where n! overflows f64) remain finite.
pub fn coherent_state(space: FockSpace, alpha: Complex64) -> BosonicState {
    let dim = space.dim();
    if alpha == Complex64::new(0.0, 0.0) {
        return fock_state(space, 0).expect("dim >= 1");
    }
    if recommended_dim(alpha, 0) > dim {
        log::warn!(
            "coherent_state: dim = {} below recommended {} for |alpha| = {:.3}; truncation error may be significant",
            dim,
            recommended_dim(alpha, 0),
            alpha.norm()
        );
    }
    let r = alpha.norm();
    let phi = alpha.arg();
    let log_r = r.ln();
    let mut v = Array1::zeros(dim);
    for n in 0..dim {
        let nf = n as f64;
        let log_mag = -0.5 * r * r + nf * log_r - 0.5 * ln_gamma(nf + 1.0);
        v[n] = Complex64::from_polar(log_mag.exp(), nf * phi);
    }
    BosonicState::new(space, v).expect("length matches").normalized()
}

/// ⟨a|b⟩, conjugate-linear in the first argument.
pub fn inner(a: &BosonicState, b: &BosonicState) -> Result<Complex64> {
    if a.space().dim() != b.space().dim() {
        return Err(Error::DimensionMismatch(a.space().dim(), b.space().dim()));
    }
    Ok(a.amplitudes
        .iter()
        .zip(b.amplitudes.iter())
        .map(|(x, y)| x.conj() * y)
        .sum())
}

/// |⟨a|b⟩|², clamped to [0, 1] against rounding.
pub fn fidelity(a: &BosonicState, b: &BosonicState) -> Result<f64> {
    let ov = inner(a, b)?;
    Ok(ov.norm_sqr().clamp(0.0, 1.0))
}

/// Truncation policy: max(n_max + 25, ceil(|α|² + 8|α| + 20)).
///
/// Mean plus eight standard deviations of the Poisson photon-number
/// distribution keeps the coherent tail below 1e-12, with headroom above
/// the largest addressed level.
pub fn recommended_dim(alpha: Complex64, n_max: usize) -> usize {
    let a = alpha.norm();
    let poisson = (a * a + 8.0 * a + 20.0).ceil() as usize;
    (n_max + 25).max(poisson)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn space(dim: usize) -> FockSpace {
        FockSpace::new(dim).unwrap()
    }

    #[test]
    fn fock_basis_vectors() {
        let s = space(4);
        let v = fock_state(s, 0).unwrap();
        assert_eq!(v.amplitudes()[0], Complex64::new(1.0, 0.0));
        let v = fock_state(s, 3).unwrap();
        assert_eq!(v.amplitudes()[3], Complex64::new(1.0, 0.0));
        assert_eq!(v.amplitudes()[0], Complex64::new(0.0, 0.0));
        assert!(matches!(
            fock_state(s, 4),
            Err(Error::LevelOutOfRange { level: 4, dim: 4 })
        ));
    }

    #[test]
    fn coherent_vacuum_limit() {
        let s = space(10);
        let v = coherent_state(s, Complex64::new(0.0, 0.0));
        let vac = fock_state(s, 0).unwrap();
        assert_eq!(inner(&v, &vac).unwrap(), Complex64::new(1.0, 0.0));
    }

    #[test]
    fn coherent_overlap_matches_poisson_pmf() {
        // |<100|alpha=10>|^2 = Poisson pmf(100; mean 100) = 0.03986099680914...
        let s = space(200);
        let alpha = Complex64::new(10.0, 0.0);
        let c = coherent_state(s, alpha);
        let n100 = fock_state(s, 100).unwrap();
        let f = fidelity(&c, &n100).unwrap();
        let pmf = (-100.0 + 100.0 * 10.0_f64.ln() * 2.0 - ln_gamma(101.0)).exp();
        assert!((f - pmf).abs() / pmf < 1e-9, "f = {f}, pmf = {pmf}");
        assert!((f - 0.0398609968091464).abs() < 1e-12);
        let ov = inner(&n100, &c).unwrap();
        assert!(ov.im.abs() < 1e-15 && ov.re > 0.0);
        assert!((ov.re - 0.19965218959266737).abs() < 1e-12);
    }

    #[test]
    fn coherent_tail_below_policy_bound() {
        // Raw (pre-normalization) tail deficiency for alpha = 10 at dim = 200.
        let r: f64 = 10.0;
        let mut kept = 0.0;
        for n in 0..200 {
            let nf = n as f64;
            kept += (-r * r + 2.0 * nf * r.ln() - ln_gamma(nf + 1.0)).exp();
        }
        assert!((1.0 - kept).abs() < 1e-12);
    }

    #[test]
    fn recommended_dim_values() {
        assert_eq!(recommended_dim(Complex64::new(0.0, 0.0), 0), 25);
        assert_eq!(recommended_dim(Complex64::new(10.0, 0.0), 100), 200);
        let d = recommended_dim(Complex64::new(380.0_f64.sqrt(), 0.0), 380);
        assert!(d >= 556, "d = {d}");
        // tail oracle at mean 380
        let r2: f64 = 380.0;
        let mut kept = 0.0;
        for n in 0..d {
            let nf = n as f64;
            kept += (-r2 + nf * r2.ln() - ln_gamma(nf + 1.0)).exp();
        }
        assert!((1.0 - kept).abs() < 1e-12);
    }

    #[test]
    fn inner_rejects_dimension_mismatch() {
        let a = fock_state(space(4), 0).unwrap();
        let b = fock_state(space(5), 0).unwrap();
        assert!(matches!(inner(&a, &b), Err(Error::DimensionMismatch(4, 5))));
    }

    #[test]
    fn normalization_of_constructors() {
        for dim in [1usize, 2, 25, 200] {
            let s = space(dim);
            let v = coherent_state(s, Complex64::new(2.0, -1.5));
            assert!((v.norm() - 1.0).abs() < 1e-9);
        }
    }
}
