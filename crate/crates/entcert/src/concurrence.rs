//! Two-qubit concurrence machinery: the pure-state formula in the
//! phase-adjusted Bell basis, the exact mixed-state value, the relation to
//! the entanglement of formation, and two witness-based lower bounds.
//!
//! The mixed-state value is the oracle every other concurrence and
//! formation bound in this crate is tested against: it is exact for two
//! qubits, so a sound bound may never exceed it on consistent data.

use std::collections::BTreeMap;

use num_complex::Complex64;

use crate::bound::{BoundResult, Certificate, ConcurrenceCertificate};
use crate::catalog::{verstraete_witness, Witness};
use crate::error::{Error, Result};
use crate::operator::{
    eig_raw, lambda_max, partial_transpose, DensityMatrix, HermitianOperator, HilbertShape,
    StateVector,
};
use crate::optimize::{best_of_starts, free_ascent, golden_max, sphere_ascent, AscentConfig};

fn cx(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn pair_shape() -> HilbertShape {
    HilbertShape::qubits(2)
        .and_then(|s| s.with_split(&[0]))
        .expect("two-qubit shape")
}

fn require_two_qubits(shape: &HilbertShape) -> Result<()> {
    if shape.dims() != [2, 2] {
        return Err(Error::Shape(format!(
            "concurrence needs a 2x2 factor space, got dims {:?}",
            shape.dims()
        )));
    }
    Ok(())
}

/// Binary entropy in bits, with the 0 log 0 = 0 convention.
pub(crate) fn binary_entropy(p: f64) -> f64 {
    let mut h = 0.0;
    for q in [p, 1.0 - p] {
        if q > 0.0 {
            h -= q * q.log2();
        }
    }
    h
}

/// The four Bell vectors with phases arranged so that pure-state
/// concurrence becomes |sum c_i^2| in this basis.
pub fn magic_basis() -> [StateVector; 4] {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let make = |amp: [Complex64; 4]| {
        StateVector::new(pair_shape(), amp.to_vec()).expect("unit Bell vector")
    };
    [
        make([cx(s, 0.0), cx(0.0, 0.0), cx(0.0, 0.0), cx(s, 0.0)]),
        make([cx(0.0, s), cx(0.0, 0.0), cx(0.0, 0.0), cx(0.0, -s)]),
        make([cx(0.0, 0.0), cx(0.0, s), cx(0.0, s), cx(0.0, 0.0)]),
        make([cx(0.0, 0.0), cx(s, 0.0), cx(-s, 0.0), cx(0.0, 0.0)]),
    ]
}

/// Coordinates of a two-qubit vector in the `magic_basis` order.
pub fn magic_coefficients(psi: &StateVector) -> Result<[Complex64; 4]> {
    require_two_qubits(psi.shape())?;
    let basis = magic_basis();
    let mut c = [cx(0.0, 0.0); 4];
    for (k, b) in basis.iter().enumerate() {
        c[k] = b.inner(psi);
    }
    Ok(c)
}

/// Pure-state concurrence |sum c_i^2| over the magic coordinates.
pub fn pure_concurrence(psi: &StateVector) -> Result<f64> {
    let c = magic_coefficients(psi)?;
    Ok(c.iter().map(|z| z * z).sum::<Complex64>().norm())
}

/// Exact mixed-state concurrence: decreasing square roots l_i of the
/// eigenvalues of rho (Y rho* Y) with Y the two-qubit spin flip, then
/// max(0, l_1 - l_2 - l_3 - l_4).
pub fn wootters_concurrence(rho: &DensityMatrix) -> Result<f64> {
    require_two_qubits(rho.shape())?;
    let d = rho.op().data();
    // Y = sigma_y (x) sigma_y is -1, 1, 1, -1 on the antidiagonal, so
    // (Y M Y)[i][j] = t_i t_j M[3-i][3-j] with t = (-1, 1, 1, -1).
    let t = [-1.0, 1.0, 1.0, -1.0];
    let mut flipped = vec![cx(0.0, 0.0); 16];
    for i in 0..4 {
        for j in 0..4 {
            flipped[i * 4 + j] = t[i] * t[j] * d[(3 - i) * 4 + (3 - j)].conj();
        }
    }
    let root = crate::operator::psd_sqrt(4, d)?;
    let inner = crate::operator::matmul(4, &crate::operator::matmul(4, &root, &flipped), &root);
    let spec = eig_raw(4, &inner);
    let mut l: Vec<f64> = spec
        .eigenvalues()
        .iter()
        .map(|w| w.max(0.0).sqrt())
        .collect();
    l.reverse();
    Ok((l[0] - l[1] - l[2] - l[3]).max(0.0))
}

/// Entanglement of formation of a two-qubit state with concurrence `c`.
pub fn ef_from_concurrence(c: f64) -> Result<f64> {
    if !(-1e-9..=1.0 + 1e-9).contains(&c) {
        return Err(Error::BadInput(format!(
            "concurrence {c} outside [0, 1]"
        )));
    }
    let c = c.clamp(0.0, 1.0);
    Ok(binary_entropy(0.5 * (1.0 + (1.0 - c * c).sqrt())))
}

/// Lower bound max(0, -c) from a witness of the partial-transposed
/// rank-one form. `a` is the 2x2 factor row-major; it is rescaled to unit
/// determinant exactly as in the witness constructor, so `c` must be the
/// expectation of that rescaled witness.
pub fn concurrence_bound_verstraete(
    a: &[Complex64; 4],
    c: f64,
    sigma: f64,
) -> Result<BoundResult> {
    verstraete_witness(a)?;
    let bound = (-c).max(0.0);
    let mut detail = BTreeMap::new();
    detail.insert("c".into(), c);
    Ok(BoundResult {
        measure: "concurrence".into(),
        bound,
        sigma,
        certificate: Certificate::Concurrence(ConcurrenceCertificate {
            method: "restricted-form".into(),
            alpha1: None,
            conjugate_upper: None,
            detail,
        }),
        notes: Vec::new(),
    })
}

/// Multistart value of sup |c|=1 of c^dag H c - |c^T c| in magic
/// coordinates, H[i][j] = <Psi_i|X|Psi_j>. A lower bracket on the true
/// conjugate: never subtract it in a certified bound.
pub fn concurrence_conjugate(x: &HermitianOperator) -> Result<f64> {
    require_two_qubits(x.shape())?;
    let h = magic_matrix(x);
    let cfg = AscentConfig::default();
    let (_, best) = best_of_starts(128, 41, 8, |start| {
        sphere_ascent(start, &cfg, |v| magic_objective(&h, v))
    });
    Ok(best)
}

fn magic_matrix(x: &HermitianOperator) -> [Complex64; 16] {
    let basis = magic_basis();
    let n = 4;
    let mut h = [cx(0.0, 0.0); 16];
    for i in 0..n {
        for j in 0..n {
            let mut acc = cx(0.0, 0.0);
            for k in 0..n {
                for l in 0..n {
                    acc += basis[i].amplitudes()[k].conj()
                        * x.data()[k * n + l]
                        * basis[j].amplitudes()[l];
                }
            }
            h[i * n + j] = acc;
        }
    }
    h
}

/// Objective and gradient over the 8 real coordinates (re c, im c).
fn magic_objective(h: &[Complex64; 16], v: &[f64]) -> (f64, Vec<f64>) {
    let c: Vec<Complex64> = (0..4).map(|i| cx(v[i], v[4 + i])).collect();
    let hc: Vec<Complex64> = (0..4)
        .map(|i| (0..4).map(|j| h[i * 4 + j] * c[j]).sum())
        .collect();
    let quad: f64 = (0..4).map(|i| (c[i].conj() * hc[i]).re).sum();
    let s: Complex64 = c.iter().map(|z| z * z).sum();
    let value = quad - s.norm();
    // Gradient of -|s| is -(s/|s|) conj(c); drop it at the |s| = 0 kink
    // (that is the maximizer of the term, so a zero subgradient is valid).
    let phase = if s.norm() > 1e-12 {
        s / s.norm()
    } else {
        cx(0.0, 0.0)
    };
    let mut grad = vec![0.0; 8];
    for i in 0..4 {
        let g = hc[i] - phase * c[i].conj();
        grad[i] = 2.0 * g.re;
        grad[4 + i] = 2.0 * g.im;
    }
    (value, grad)
}

/// Certified upper bracket on the concurrence conjugate, with the dual
/// data that proves it.
///
/// The concurrence is the largest convex function that is 0 on product
/// states and dominated by the restricted-form witness bounds, so its
/// conjugate satisfies f*(X) <= lambda_max(X + V) for every V in the
/// closed dual family {|B><B|^PT : |det B| <= 1}. Any B therefore yields
/// a sound bracket; descent only tightens it.
#[derive(Debug, Clone)]
pub struct ConjugateDual {
    pub upper: f64,
    /// Row-major 2x2 factor of the dual operator actually used.
    pub b: [Complex64; 4],
}

/// Search effort for the dual bracket and the scalar coefficient scan.
#[derive(Debug, Clone, Copy)]
pub struct ConjugateSearchConfig {
    pub upper_starts: usize,
    pub alpha_scan: usize,
    pub seed: u64,
}

impl Default for ConjugateSearchConfig {
    fn default() -> Self {
        Self {
            upper_starts: 10,
            alpha_scan: 13,
            seed: 23,
        }
    }
}

fn det2(b: &[Complex64; 4]) -> Complex64 {
    b[0] * b[3] - b[1] * b[2]
}

/// |B><B|^PT for |B> = sum B[r][c] |r,c>, without normalizing anything.
fn dual_operator(b: &[Complex64; 4]) -> HermitianOperator {
    let amp: Vec<Complex64> = b.to_vec();
    let mut outer = vec![cx(0.0, 0.0); 16];
    for i in 0..4 {
        for j in 0..4 {
            outer[i * 4 + j] = amp[i] * amp[j].conj();
        }
    }
    let op = HermitianOperator::from_exact(pair_shape(), outer);
    partial_transpose(&op, &[0]).expect("two-qubit partial transpose")
}

/// Pull B back into the |det| <= 1 body; the rescaling keeps the ray.
fn clamp_det(b: &[Complex64; 4]) -> [Complex64; 4] {
    let d = det2(b).norm();
    if d <= 1.0 {
        return *b;
    }
    let scale = 1.0 / d.sqrt();
    let mut out = *b;
    for z in &mut out {
        *z *= scale;
    }
    out
}

fn dual_value(x: &HermitianOperator, params: &[f64]) -> f64 {
    let b = clamp_det(&[
        cx(params[0], params[1]),
        cx(params[2], params[3]),
        cx(params[4], params[5]),
        cx(params[6], params[7]),
    ]);
    let shifted = x.plus(&dual_operator(&b)).expect("same shape");
    lambda_max(&shifted)
}

pub fn concurrence_conjugate_upper(
    x: &HermitianOperator,
    cfg: &ConjugateSearchConfig,
    warm: Option<&[f64; 8]>,
) -> Result<ConjugateDual> {
    require_two_qubits(x.shape())?;
    let ascent = AscentConfig {
        max_iter: 120,
        grad_tol: 1e-9,
        initial_step: 0.5,
    };
    let run = |start: &[f64]| {
        free_ascent(start, &ascent, |p| {
            let f = -dual_value(x, p);
            // Central differences; the objective is cheap and piecewise
            // smooth, and validity never depends on gradient quality.
            let mut grad = vec![0.0; 8];
            let mut probe = p.to_vec();
            let h = 1e-5;
            for k in 0..8 {
                probe[k] = p[k] + h;
                let up = -dual_value(x, &probe);
                probe[k] = p[k] - h;
                let down = -dual_value(x, &probe);
                probe[k] = p[k];
                grad[k] = (up - down) / (2.0 * h);
            }
            (f, grad)
        })
    };
    let mut best_params = vec![0.0; 8];
    let mut best = -run(&best_params).1;
    let mut consider = |params: &[f64]| {
        let (p, neg) = run(params);
        if -neg < best {
            best = -neg;
            best_params = p;
        }
    };
    // B = identity covers the maximally entangled direction.
    consider(&[1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 1.0, 0.0]);
    // If X is close to -|B><B|^PT for some B, that B is the top eigenpair
    // of (-X)^PT. Starting there makes exact cancellations findable, which
    // matters because lambda_max is non-smooth precisely at such minima.
    if let Ok(neg_pt) = partial_transpose(&x.scaled(-1.0), &[0]) {
        let spec = crate::operator::eig_hermitian(&neg_pt);
        let top = spec.eigenvalues()[3];
        if top > 0.0 {
            let v = spec.eigenvector(3);
            let scale = top.sqrt();
            let guess: Vec<f64> = (0..4)
                .flat_map(|k| [scale * v[k].re, scale * v[k].im])
                .collect();
            consider(&guess);
        }
    }
    if let Some(w) = warm {
        consider(w);
    }
    let gaussian_starts = cfg.upper_starts.saturating_sub(3);
    if gaussian_starts > 0 {
        best_of_starts(gaussian_starts, cfg.seed, 8, |start| {
            let (p, neg) = run(start);
            if -neg < best {
                best = -neg;
                best_params = p.clone();
            }
            (p, neg)
        });
    }
    let b = clamp_det(&[
        cx(best_params[0], best_params[1]),
        cx(best_params[2], best_params[3]),
        cx(best_params[4], best_params[5]),
        cx(best_params[6], best_params[7]),
    ]);
    Ok(ConjugateDual { upper: best, b })
}

/// Recompute the bracket a `ConjugateDual` claims, for verification.
pub fn dual_bracket_value(x: &HermitianOperator, b: &[Complex64; 4]) -> Result<f64> {
    require_two_qubits(x.shape())?;
    if det2(b).norm() > 1.0 + 1e-9 {
        return Err(Error::Verification(format!(
            "dual factor determinant {} exceeds 1",
            det2(b).norm()
        )));
    }
    Ok(lambda_max(&x.plus(&dual_operator(b))?))
}

/// Conjugate-method concurrence bound: sup over alpha of
/// alpha c - upper(f*(alpha W)), clipped at zero.
pub fn concurrence_bound_conjugate(w: &Witness, c: f64, sigma: f64) -> Result<BoundResult> {
    concurrence_bound_conjugate_with(w, c, sigma, &ConjugateSearchConfig::default())
}

pub fn concurrence_bound_conjugate_with(
    w: &Witness,
    c: f64,
    sigma: f64,
    cfg: &ConjugateSearchConfig,
) -> Result<BoundResult> {
    require_two_qubits(w.op.shape())?;
    let mut warm: Option<[f64; 8]> = None;
    let eval = |alpha: f64, warm: &mut Option<[f64; 8]>| -> Result<(f64, ConjugateDual)> {
        let x = w.op.scaled(alpha);
        let local = if warm.is_some() {
            ConjugateSearchConfig {
                upper_starts: 3,
                ..*cfg
            }
        } else {
            *cfg
        };
        let dual = concurrence_conjugate_upper(&x, &local, warm.as_ref())?;
        *warm = Some(params_of(&dual.b));
        Ok((alpha * c - dual.upper, dual))
    };
    // Zero coefficient is always available and certifies the trivial 0.
    let mut best_alpha = 0.0;
    let mut best_value = 0.0;
    let mut best_dual = ConjugateDual {
        upper: 0.0,
        b: [cx(0.0, 0.0); 4],
    };
    let mut mags = Vec::new();
    for k in 0..cfg.alpha_scan {
        let t = k as f64 / (cfg.alpha_scan - 1).max(1) as f64;
        mags.push(10f64.powf(-1.0 + 4.0 * t));
    }
    for sign in [-1.0, 1.0] {
        let mut local_warm: Option<[f64; 8]> = None;
        for (k, m) in mags.iter().enumerate() {
            let alpha = sign * m;
            let (value, dual) = eval(alpha, &mut local_warm)?;
            if value > best_value {
                best_value = value;
                best_alpha = alpha;
                best_dual = dual;
                warm = local_warm;
            }
            // A scan point whose bracket already certifies less than the
            // trivial bound cannot recover at 10x the magnitude unless c
            // is large; keep scanning, it is cheap relative to refine.
            let _ = k;
        }
    }
    if best_alpha != 0.0 {
        // Golden refinement over magnitude around the winning scan point.
        let sign = best_alpha.signum();
        let m = best_alpha.abs();
        let (lo, hi) = (m / 10.0, (m * 10.0).min(1e3));
        let mut refine_warm = warm;
        let mut cache: Vec<(f64, f64, ConjugateDual)> = Vec::new();
        golden_max(
            |mag| {
                let alpha = sign * mag;
                match eval(alpha, &mut refine_warm) {
                    Ok((value, dual)) => {
                        cache.push((alpha, value, dual));
                        value
                    }
                    Err(_) => f64::NEG_INFINITY,
                }
            },
            lo,
            hi,
            m * 1e-4,
        );
        // Keep the best point that was actually evaluated so the stored
        // dual certificate matches the reported coefficient exactly.
        for (alpha, value, dual) in cache {
            if value > best_value {
                best_value = value;
                best_alpha = alpha;
                best_dual = dual;
            }
        }
    }
    let bound = best_value.max(0.0);
    let mut detail = BTreeMap::new();
    detail.insert("c".into(), c);
    for (k, z) in best_dual.b.iter().enumerate() {
        detail.insert(format!("dual_b{k}_re"), z.re);
        detail.insert(format!("dual_b{k}_im"), z.im);
    }
    Ok(BoundResult {
        measure: "concurrence".into(),
        bound,
        sigma: best_alpha.abs() * sigma,
        certificate: Certificate::Concurrence(ConcurrenceCertificate {
            method: "conjugate-dual".into(),
            alpha1: Some(best_alpha),
            conjugate_upper: Some(best_dual.upper),
            detail,
        }),
        notes: Vec::new(),
    })
}

fn params_of(b: &[Complex64; 4]) -> [f64; 8] {
    [
        b[0].re, b[0].im, b[1].re, b[1].im, b[2].re, b[2].im, b[3].re, b[3].im,
    ]
}
