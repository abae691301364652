//! Dense complex linear algebra kernels: matrix exponential via
//! scaling-and-squaring with a Padé(13) approximant, LU solves, and a
//! Jacobi eigensolver for small Hermitian matrices.

use ndarray::{Array1, Array2};
use num_complex::Complex64;

pub type CVec = Array1<Complex64>;
pub type CMat = Array2<Complex64>;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

pub fn identity(n: usize) -> CMat {
    Array2::eye(n)
}

/// Maximum column sum of absolute values (the induced 1-norm).
pub fn one_norm(a: &CMat) -> f64 {
    let mut best = 0.0_f64;
    for col in a.columns() {
        let s: f64 = col.iter().map(|z| z.norm()).sum();
        best = best.max(s);
    }
    best
}

/// Largest entrywise modulus.
pub fn max_norm(a: &CMat) -> f64 {
    a.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// Entrywise deviation of `u` from unitarity, max |(U†U - I)_ij|.
pub fn unitarity_defect(u: &CMat) -> f64 {
    let mut g = u.t().mapv(|z| z.conj()).dot(u);
    for i in 0..g.nrows() {
        g[[i, i]] -= ONE;
    }
    max_norm(&g)
}

/// Solve A X = B with partial-pivoted LU; consumes both operands.
pub fn lu_solve(mut a: CMat, mut b: CMat) -> CMat {
    let n = a.nrows();
    assert_eq!(n, a.ncols());
    assert_eq!(n, b.nrows());
    let m = b.ncols();
    for k in 0..n {
        // pivot
        let mut piv = k;
        let mut best = a[[k, k]].norm();
        for i in k + 1..n {
            let v = a[[i, k]].norm();
            if v > best {
                best = v;
                piv = i;
            }
        }
        if piv != k {
            for j in 0..n {
                a.swap([k, j], [piv, j]);
            }
            for j in 0..m {
                b.swap([k, j], [piv, j]);
            }
        }
        let d = a[[k, k]];
        for i in k + 1..n {
            let f = a[[i, k]] / d;
            if f == ZERO {
                continue;
            }
            for j in k + 1..n {
                let akj = a[[k, j]];
                a[[i, j]] -= f * akj;
            }
            for j in 0..m {
                let bkj = b[[k, j]];
                b[[i, j]] -= f * bkj;
            }
        }
    }
    // back substitution
    for k in (0..n).rev() {
        let d = a[[k, k]];
        for j in 0..m {
            let mut s = b[[k, j]];
            for l in k + 1..n {
                s -= a[[k, l]] * b[[l, j]];
            }
            b[[k, j]] = s / d;
        }
    }
    b
}

/// Padé(13) numerator coefficients (Higham 2005).
const PADE13: [f64; 14] = [
    64764752532480000.0,
    32382376266240000.0,
    7771770303897600.0,
    1187353796428800.0,
    129060195264000.0,
    10559470521600.0,
    670442572800.0,
    33522128640.0,
    1323241920.0,
    40840800.0,
    960960.0,
    16380.0,
    182.0,
    1.0,
];

/// Matrix exponential exp(A) by scaling-and-squaring with Padé(13).
pub fn expm(a: &CMat) -> CMat {
    let n = a.nrows();
    assert_eq!(n, a.ncols());
    if n == 0 {
        return CMat::zeros((0, 0));
    }
    let theta13 = 5.371920351148152_f64;
    let norm = one_norm(a);
    let s = if norm > theta13 {
        (norm / theta13).log2().ceil() as u32
    } else {
        0
    };
    let scale = Complex64::new((0.5f64).powi(s as i32), 0.0);
    let a1 = a.mapv(|z| z * scale);
    let a2 = a1.dot(&a1);
    let a4 = a2.dot(&a2);
    let a6 = a2.dot(&a4);
    let b = |k: usize| Complex64::new(PADE13[k], 0.0);
    let id = identity(n);

    let mut w = &a6 * b(13) + &a4 * b(11) + &a2 * b(9);
    w = a6.dot(&w);
    w = w + &a6 * b(7) + &a4 * b(5) + &a2 * b(3) + &id * b(1);
    let u = a1.dot(&w);

    let mut v = &a6 * b(12) + &a4 * b(10) + &a2 * b(8);
    v = a6.dot(&v);
    v = v + &a6 * b(6) + &a4 * b(4) + &a2 * b(2) + &id * b(0);

    let mut r = lu_solve(&v - &u, &v + &u);
    for _ in 0..s {
        r = r.dot(&r);
    }
    r
}

/// Eigendecomposition of a Hermitian matrix by cyclic complex Jacobi
/// rotations. Returns (eigenvalues, eigenvectors-as-columns), unsorted.
/// Intended for small matrices (reduced subspace generators).
pub fn hermitian_eig(h: &CMat) -> (Vec<f64>, CMat) {
    let n = h.nrows();
    assert_eq!(n, h.ncols());
    let mut a = h.clone();
    let mut v = identity(n);
    let scale = max_norm(h).max(1e-300);
    for _sweep in 0..100 {
        let mut off = 0.0_f64;
        for p in 0..n {
            for q in p + 1..n {
                off = off.max(a[[p, q]].norm());
            }
        }
        if off < 1e-15 * scale {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = a[[p, q]];
                let r = apq.norm();
                if r < 1e-18 * scale {
                    continue;
                }
                let phase = apq / r; // e^{i arg}
                let app = a[[p, p]].re;
                let aqq = a[[q, q]].re;
                let tau = (aqq - app) / (2.0 * r);
                let t = -tau.signum() / (tau.abs() + (1.0 + tau * tau).sqrt());
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                // J columns: p -> (c, s e^{-iθ}),  q -> (-s, c e^{-iθ})
                let cp = Complex64::new(c, 0.0);
                let se = phase.conj() * s;
                let ms = Complex64::new(-s, 0.0);
                let ce = phase.conj() * c;
                // A <- A J (columns p,q)
                for i in 0..n {
                    let aip = a[[i, p]];
                    let aiq = a[[i, q]];
                    a[[i, p]] = aip * cp + aiq * se;
                    a[[i, q]] = aip * ms + aiq * ce;
                }
                // A <- J† A (rows p,q)
                for j in 0..n {
                    let apj = a[[p, j]];
                    let aqj = a[[q, j]];
                    a[[p, j]] = apj * cp.conj() + aqj * se.conj();
                    a[[q, j]] = apj * ms.conj() + aqj * ce.conj();
                }
                // V <- V J
                for i in 0..n {
                    let vip = v[[i, p]];
                    let viq = v[[i, q]];
                    v[[i, p]] = vip * cp + viq * se;
                    v[[i, q]] = vip * ms + viq * ce;
                }
            }
        }
    }
    let vals = (0..n).map(|i| a[[i, i]].re).collect();
    (vals, v)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn expm_zero_is_identity() {
        let z = CMat::zeros((4, 4));
        let e = expm(&z);
        assert!(max_norm(&(&e - &identity(4))) < 1e-14);
    }

    #[test]
    fn expm_diagonal() {
        let mut d = CMat::zeros((3, 3));
        d[[0, 0]] = c(1.0, 0.0);
        d[[1, 1]] = c(0.0, 2.0);
        d[[2, 2]] = c(-0.5, -1.0);
        let e = expm(&d);
        for i in 0..3 {
            assert!((e[[i, i]] - d[[i, i]].exp()).norm() < 1e-13);
        }
    }

    #[test]
    fn expm_pauli_x_rotation() {
        // exp(-i t σx) = cos t · I - i sin t · σx
        let t = 0.7;
        let mut m = CMat::zeros((2, 2));
        m[[0, 1]] = c(0.0, -t);
        m[[1, 0]] = c(0.0, -t);
        let e = expm(&m);
        assert!((e[[0, 0]] - c(t.cos(), 0.0)).norm() < 1e-14);
        assert!((e[[0, 1]] - c(0.0, -t.sin())).norm() < 1e-14);
    }

    #[test]
    fn lu_solves_random_system() {
        let n = 8;
        let mut a = CMat::zeros((n, n));
        let mut state = 1u64;
        let mut next = || {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            ((state >> 11) as f64) / ((1u64 << 53) as f64) - 0.5
        };
        for i in 0..n {
            for j in 0..n {
                a[[i, j]] = c(next(), next());
            }
        }
        let x_true = CMat::from_shape_fn((n, 2), |_| c(next(), next()));
        let b = a.dot(&x_true);
        let x = lu_solve(a, b);
        assert!(max_norm(&(&x - &x_true)) < 1e-10);
    }

    #[test]
    fn hermitian_eig_reconstructs() {
        let n = 5;
        let mut h = CMat::zeros((n, n));
        let mut state = 7u64;
        let mut next = || {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            ((state >> 11) as f64) / ((1u64 << 53) as f64) - 0.5
        };
        for i in 0..n {
            h[[i, i]] = c(next(), 0.0);
            for j in i + 1..n {
                let z = c(next(), next());
                h[[i, j]] = z;
                h[[j, i]] = z.conj();
            }
        }
        let (vals, vecs) = hermitian_eig(&h);
        assert!(unitarity_defect(&vecs) < 1e-12);
        let mut d = CMat::zeros((n, n));
        for i in 0..n {
            d[[i, i]] = c(vals[i], 0.0);
        }
        let rec = vecs.dot(&d).dot(&vecs.t().mapv(|z| z.conj()));
        assert!(max_norm(&(&rec - &h)) < 1e-12);
    }

    #[test]
    fn eig_matches_expm_for_propagator() {
        // exp(-iHt) from the eigensystem must agree with the Padé route.
        let t = 1.3;
        let mut h = CMat::zeros((3, 3));
        h[[0, 0]] = c(0.4, 0.0);
        h[[1, 1]] = c(-0.2, 0.0);
        h[[2, 2]] = c(0.9, 0.0);
        h[[0, 1]] = c(0.3, 0.1);
        h[[1, 0]] = c(0.3, -0.1);
        h[[1, 2]] = c(-0.2, 0.4);
        h[[2, 1]] = c(-0.2, -0.4);
        let (vals, vecs) = hermitian_eig(&h);
        let mut d = CMat::zeros((3, 3));
        for i in 0..3 {
            d[[i, i]] = (c(0.0, -t) * vals[i]).exp();
        }
        let u_eig = vecs.dot(&d).dot(&vecs.t().mapv(|z| z.conj()));
        let u_pade = expm(&h.mapv(|z| z * c(0.0, -t)));
        assert!(max_norm(&(&u_eig - &u_pade)) < 1e-12);
    }
}
