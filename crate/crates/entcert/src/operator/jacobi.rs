//! Dense Hermitian eigensolver: cyclic Jacobi with complex rotations.
//!
//! Deterministic (fixed sweep order, no pivot search randomness) and
//! self-contained, so spectra and eigenvectors are bit-reproducible across
//! runs. Intended for the dimensions this crate works at (D <= 256).

use num_complex::Complex64;

/// Eigendecomposition of a Hermitian matrix.
///
/// Eigenvalues are sorted ascending; `vectors` is column-major, column k
/// being the unit eigenvector for `values[k]`. Each eigenvector carries a
/// canonical global phase: its largest-magnitude component is real positive.
pub struct Eig {
    pub values: Vec<f64>,
    pub vectors: Vec<Complex64>,
    n: usize,
}

impl Eig {
    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn vector(&self, k: usize) -> &[Complex64] {
        &self.vectors[k * self.n..(k + 1) * self.n]
    }
}

/// Diagonalizes a Hermitian matrix given in row-major order.
///
/// The caller guarantees Hermiticity; the strict lower triangle is ignored
/// and reconstructed by conjugation.
pub fn eig_hermitian_raw(n: usize, matrix: &[Complex64]) -> Eig {
    assert_eq!(matrix.len(), n * n);
    let mut a = matrix.to_vec();
    // Work on an exactly Hermitian copy.
    for i in 0..n {
        a[i * n + i] = Complex64::new(a[i * n + i].re, 0.0);
        for j in (i + 1)..n {
            let m = 0.5 * (a[i * n + j] + a[j * n + i].conj());
            a[i * n + j] = m;
            a[j * n + i] = m.conj();
        }
    }

    let mut v = vec![Complex64::new(0.0, 0.0); n * n];
    for i in 0..n {
        v[i * n + i] = Complex64::new(1.0, 0.0);
    }

    let frob: f64 = a.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    let stop = (1e-15 * frob.max(1e-300)).powi(2);

    for _sweep in 0..64 {
        let off: f64 = (0..n)
            .flat_map(|i| ((i + 1)..n).map(move |j| (i, j)))
            .map(|(i, j)| a[i * n + j].norm_sqr())
            .sum();
        if 2.0 * off <= stop {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                rotate(n, &mut a, &mut v, p, q);
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| {
        a[i * n + i]
            .re
            .partial_cmp(&a[j * n + j].re)
            .expect("eigenvalues are finite")
    });

    let mut values = Vec::with_capacity(n);
    let mut vectors = vec![Complex64::new(0.0, 0.0); n * n];
    for (col, &src) in order.iter().enumerate() {
        values.push(a[src * n + src].re);
        for k in 0..n {
            vectors[col * n + k] = v[k * n + src];
        }
        canonical_phase(&mut vectors[col * n..(col + 1) * n]);
    }

    Eig {
        values,
        vectors,
        n,
    }
}

/// One Jacobi rotation zeroing A[p][q], accumulated into V.
fn rotate(n: usize, a: &mut [Complex64], v: &mut [Complex64], p: usize, q: usize) {
    let apq = a[p * n + q];
    let m = apq.norm();
    if m < 1e-300 {
        a[p * n + q] = Complex64::new(0.0, 0.0);
        a[q * n + p] = Complex64::new(0.0, 0.0);
        return;
    }
    let u = apq / m;
    let app = a[p * n + p].re;
    let aqq = a[q * n + q].re;
    let tau = (aqq - app) / (2.0 * m);
    // Small root of t^2 + 2*tau*t - 1 = 0 gives the rotation angle < pi/4.
    let t = if tau >= 0.0 {
        1.0 / (tau + (1.0 + tau * tau).sqrt())
    } else {
        -1.0 / (-tau + (1.0 + tau * tau).sqrt())
    };
    let c = 1.0 / (1.0 + t * t).sqrt();
    let s = t * c;
    let su = s * u;
    let su_conj = s * u.conj();

    for k in 0..n {
        if k == p || k == q {
            continue;
        }
        let akp = a[k * n + p];
        let akq = a[k * n + q];
        let new_kp = c * akp - su_conj * akq;
        let new_kq = su * akp + c * akq;
        a[k * n + p] = new_kp;
        a[p * n + k] = new_kp.conj();
        a[k * n + q] = new_kq;
        a[q * n + k] = new_kq.conj();
    }
    a[p * n + p] = Complex64::new(app - t * m, 0.0);
    a[q * n + q] = Complex64::new(aqq + t * m, 0.0);
    a[p * n + q] = Complex64::new(0.0, 0.0);
    a[q * n + p] = Complex64::new(0.0, 0.0);

    for k in 0..n {
        let vkp = v[k * n + p];
        let vkq = v[k * n + q];
        v[k * n + p] = c * vkp - su_conj * vkq;
        v[k * n + q] = su * vkp + c * vkq;
    }
}

fn canonical_phase(col: &mut [Complex64]) {
    let mut best = 0;
    let mut best_mag = 0.0;
    for (k, z) in col.iter().enumerate() {
        let mag = z.norm_sqr();
        if mag > best_mag + 1e-24 {
            best_mag = mag;
            best = k;
        }
    }
    let z = col[best];
    let mag = z.norm();
    if mag > 1e-300 {
        let phase = z / mag;
        let correction = phase.conj();
        for entry in col.iter_mut() {
            *entry *= correction;
        }
    }
}
