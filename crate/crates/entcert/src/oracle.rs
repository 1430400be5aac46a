//! Reference values computed directly from a known density matrix.
//!
//! The bound engines only ever see witness expectation values. Everything
//! here sees the state itself and returns the exact measure that those
//! bounds must stay below, so the soundness suites have an independent
//! yardstick. Negativity, two-qubit formation and white-noise robustness
//! are closed-form; the generalized robustness has none and is solved as a
//! cutting-plane program whose two ends bracket the optimum.

use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::concurrence::{ef_from_concurrence, wootters_concurrence};
use crate::error::{Error, Result};
use crate::operator::{
    eig_hermitian, lambda_min, partial_transpose, trace_norm, DensityMatrix, HermitianOperator,
    HilbertShape, StateVector,
};
use crate::simplex;

fn cx(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Trace-norm negativity across the state's declared cut.
pub fn negativity(rho: &DensityMatrix) -> Result<f64> {
    let first = rho.shape().require_split()?.to_vec();
    let pt = partial_transpose(rho.op(), &first)?;
    Ok((trace_norm(&pt) - 1.0).max(0.0))
}

/// Exact two-qubit entanglement of formation through the closed-form
/// concurrence.
pub fn formation_two_qubit(rho: &DensityMatrix) -> Result<f64> {
    ef_from_concurrence(wootters_concurrence(rho)?)
}

fn require_two_qubits(rho: &DensityMatrix) -> Result<Vec<usize>> {
    if rho.shape().dims() != [2, 2] {
        return Err(Error::BadInput(format!(
            "exact robustness needs a 2x2 system (positivity under partial \
             transposition characterizes separability only there), got dims {:?}",
            rho.shape().dims()
        )));
    }
    Ok(match rho.shape().split() {
        Some(s) => s.to_vec(),
        None => vec![0],
    })
}

/// Exact white-noise robustness on two qubits. Mixing in s/D times the
/// identity shifts every eigenvalue of the partial transpose by s/D, so
/// the smallest admissible s is D times the worst violation.
pub fn random_robustness_two_qubit(rho: &DensityMatrix) -> Result<f64> {
    let first = require_two_qubits(rho)?;
    let pt = partial_transpose(rho.op(), &first)?;
    Ok((-lambda_min(&pt)).max(0.0) * rho.dim() as f64)
}

/// Certified two-sided bracket from the cutting-plane solve: `lower` is a
/// linear-relaxation value that never exceeds the optimum, `upper` the
/// trace of a verified feasible mixing operator that never undershoots it.
#[derive(Debug, Clone, Copy)]
pub struct RobustnessBracket {
    pub lower: f64,
    pub upper: f64,
}

const GAP_TOL: f64 = 1e-9;
const MAX_ROUNDS: usize = 400;
/// Beyond this many rows the slackest cuts are dropped; dropping only
/// loosens the relaxation, so both bracket ends stay certified.
const CUT_CAP: usize = 220;
/// Stop once the gap has shrunk by less than half a percent for this many
/// consecutive rounds: the tail of the cut loop flattens out well before
/// the round cap, and the bracket is certified at any width.
const STALL_ROUNDS: usize = 15;

/// Exact generalized robustness on two qubits, bracketed to `GAP_TOL`
/// (best effort: the bracket is certified at any width, so a stalled run
/// still returns a valid if wider interval).
///
/// Primal form: minimize tr[s'] over s' >= 0 with (rho + s')^PT >= 0.
/// The spectral constraints are relaxed to linear cuts along eigenvectors
/// of the iterates; every linear-program value lower-bounds the optimum,
/// and lifting an iterate by its worst eigenvalue makes it feasible,
/// giving the upper end. Variables are shifted so the search starts from
/// the feasible s' = s0 * I, which keeps every right-hand side
/// nonnegative as the simplex requires. The Lagrangian dual (maximize
/// -tr[Q rho^PT] over Q >= 0 with Q^PT <= 1) supplies a second certified
/// lower bound: any direction u yields the feasible point
/// Q = uu' / lambda_max((uu')^PT), and near convergence the kernel of
/// (rho + s')^PT is exactly the support of the optimal Q, so feeding the
/// iterate's eigenvectors through it closes the tail of the gap that the
/// linear relaxation alone approaches only slowly.
pub fn generalized_robustness_two_qubit(rho: &DensityMatrix) -> Result<RobustnessBracket> {
    let first = require_two_qubits(rho)?;
    let shape = rho.shape().clone();
    let d = rho.dim();
    let rho_pt = partial_transpose(rho.op(), &first)?;
    let s0 = (-lambda_min(&rho_pt)).max(0.0);
    if s0 <= 0.0 {
        // Positive partial transpose: separable here, nothing to mix in.
        // The upper end carries an identity margin covering the
        // eigensolver tail.
        return Ok(RobustnessBracket {
            lower: 0.0,
            upper: d as f64 * 1e-13,
        });
    }

    // s' = s0 I + Delta(p); minimizing tr[s'] means maximizing -tr[Delta].
    let mut objective = vec![0.0; d * d];
    for slot in objective.iter_mut().take(d) {
        *slot = -1.0;
    }

    let mut seed_cuts: Vec<(Vec<f64>, f64)> = Vec::new();
    for i in 0..d {
        let mut v = vec![cx(0.0, 0.0); d];
        v[i] = cx(1.0, 0.0);
        seed_cuts.push(psd_cut(&shape, &v, s0));
    }
    let mut cuts: Vec<(Vec<f64>, f64)> = Vec::new();
    let mut dual = DualTrack {
        value: 0.0,
        direction: None,
        polished: true,
    };
    let mut best_gap = f64::INFINITY;
    let mut stalled = 0usize;
    let spec = eig_hermitian(&rho_pt);
    for k in 0..d {
        let u = spec.eigenvector(k);
        cuts.push(pt_cut(&shape, &first, u, &rho_pt, s0)?);
        dual.consider(rank_one_dual_value(&shape, &first, u, &rho_pt)?, u);
    }

    let identity = HermitianOperator::identity(shape.clone());
    let mut best_upper = d as f64 * s0; // s' = s0 I is always feasible
    for _round in 0..MAX_ROUNDS {
        let joined: Vec<(Vec<f64>, f64)> =
            seed_cuts.iter().chain(cuts.iter()).cloned().collect();
        let sol = simplex::maximize(&objective, &joined)?;
        let lp_lower = (d as f64 * s0 - sol.value).max(0.0);
        if lp_lower > dual.value + 1e-13 * (1.0 + lp_lower) {
            // A better value changes the weight the polish aims for.
            dual.polished = false;
        }
        dual.value = dual.value.max(lp_lower);

        let sigma = identity.scaled(s0).plus(&unpack(&shape, &sol.x))?;
        let spec_s = eig_hermitian(&sigma);
        let joint_pt = partial_transpose(&rho.op().plus(&sigma)?, &first)?;
        let spec_j = eig_hermitian(&joint_pt);
        let lift = (-spec_s.min()).max(0.0).max((-spec_j.min()).max(0.0)) + 1e-13;
        best_upper = best_upper.min(sigma.trace() + d as f64 * lift);
        for k in 0..d {
            let u = spec_j.eigenvector(k);
            dual.consider(rank_one_dual_value(&shape, &first, u, &rho_pt)?, u);
        }
        // Complementary slackness puts the optimal mixing operator inside
        // the top eigenspace of (uu')^PT for the optimal dual direction u,
        // and strong duality predicts its weight, so a search within that
        // eigenspace can close the gap outright.
        if !dual.polished {
            if let Some(u) = dual.direction.clone() {
                if let Some(candidate) =
                    degenerate_polish(&shape, &first, &u, &rho_pt, dual.value)?
                {
                    best_upper = best_upper.min(candidate);
                }
            }
            dual.polished = true;
        }
        let mut clipped = HermitianOperator::identity(shape.clone()).scaled(0.0);
        for k in 0..d {
            let weight = spec_s.eigenvalues()[k];
            if weight > 1e-12 {
                let slice = rank_one(&shape, spec_s.eigenvector(k));
                if let Some(candidate) = min_scale_along(&first, &slice, &rho_pt)? {
                    best_upper = best_upper.min(candidate);
                }
                clipped = clipped.plus(&slice.scaled(weight))?;
            }
        }
        if let Some(candidate) = min_scale_along(&first, &clipped, &rho_pt)? {
            best_upper = best_upper.min(candidate);
        }
        let gap = best_upper - dual.value;
        if gap <= GAP_TOL {
            break;
        }
        if gap < 0.995 * best_gap {
            best_gap = gap;
            stalled = 0;
        } else {
            stalled += 1;
            if stalled >= STALL_ROUNDS {
                break;
            }
        }

        if cuts.len() > CUT_CAP {
            // Slack at the current iterate ranks how binding a cut is.
            let mut ranked: Vec<(f64, usize)> = cuts
                .iter()
                .enumerate()
                .map(|(i, (row, rhs))| {
                    let lhs: f64 = row.iter().zip(&sol.x).map(|(a, x)| a * x).sum();
                    (rhs - lhs, i)
                })
                .collect();
            ranked.sort_by(|a, b| a.0.partial_cmp(&b.0).expect("finite slack"));
            let keep: Vec<(Vec<f64>, f64)> = ranked
                .iter()
                .take(CUT_CAP)
                .map(|&(_, i)| cuts[i].clone())
                .collect();
            cuts = keep;
        }
        for k in 0..d {
            if spec_s.eigenvalues()[k] < 1e-9 {
                cuts.push(psd_cut(&shape, spec_s.eigenvector(k), s0));
            }
            if spec_j.eigenvalues()[k] < 1e-9 {
                cuts.push(pt_cut(&shape, &first, spec_j.eigenvector(k), &rho_pt, s0)?);
            }
        }
    }
    Ok(RobustnessBracket {
        lower: dual.value.min(best_upper),
        upper: best_upper.max(dual.value),
    })
}

struct DualTrack {
    value: f64,
    direction: Option<Vec<Complex64>>,
    polished: bool,
}

impl DualTrack {
    fn consider(&mut self, value: f64, u: &[Complex64]) {
        if value > self.value || self.direction.is_none() {
            self.value = self.value.max(value);
            self.direction = Some(u.to_vec());
            self.polished = false;
        }
    }
}

/// Certified dual value from a single direction: Q = uu'/lambda_max((uu')^PT)
/// satisfies Q >= 0 and Q^PT <= 1, so weak duality makes -tr[Q rho^PT] a
/// lower bound on the robustness for every u (the scaling cancels, so u
/// need not be normalized).
fn rank_one_dual_value(
    shape: &HilbertShape,
    first: &[usize],
    u: &[Complex64],
    rho_pt: &HermitianOperator,
) -> Result<f64> {
    let weight = partial_transpose(&rank_one(shape, u), first)?;
    let top = eig_hermitian(&weight).max();
    if top <= 0.0 {
        return Ok(0.0);
    }
    Ok((-quad_form(rho_pt, u) / top).max(0.0))
}

/// Hunts for the unit direction e inside the top eigenspace of (uu')^PT
/// whose weighted projector restores positivity at the weight `target`
/// the dual value predicts. The eigenspace is degenerate whenever u has
/// balanced Schmidt coefficients, so the right e is an interior rotation
/// rather than any single returned eigenvector; a compass search over the
/// complex mixing coefficients finds it. Whatever floor remains is lifted
/// onto the identity, so the returned candidate is certified even when the
/// search stops short.
fn degenerate_polish(
    shape: &HilbertShape,
    first: &[usize],
    u: &[Complex64],
    rho_pt: &HermitianOperator,
    target: f64,
) -> Result<Option<f64>> {
    let norm: f64 = u.iter().map(|z| z.norm_sqr()).sum();
    if norm <= 1e-14 || target <= 0.0 {
        return Ok(None);
    }
    let xi = partial_transpose(&rank_one(shape, u).scaled(1.0 / norm), first)?;
    let spec = eig_hermitian(&xi);
    let d = xi.dim();
    let theta = spec.max();
    if theta <= 1e-12 {
        return Ok(None);
    }
    let basis: Vec<Vec<Complex64>> = (0..d)
        .filter(|&k| spec.eigenvalues()[k] >= theta * (1.0 - 1e-7))
        .map(|k| spec.eigenvector(k).to_vec())
        .collect();
    let k = basis.len();
    let mix = |c: &[f64]| -> Vec<Complex64> {
        // c lists k complex coefficients as (re, im) pairs
        let mut e = vec![cx(0.0, 0.0); d];
        let mut nrm = 0.0;
        for (j, b) in basis.iter().enumerate() {
            let w = cx(c[2 * j], c[2 * j + 1]);
            nrm += w.norm_sqr();
            for (slot, amp) in e.iter_mut().zip(b.iter()) {
                *slot += w * amp;
            }
        }
        let scale = nrm.sqrt().max(1e-300).recip();
        for slot in e.iter_mut() {
            *slot *= scale;
        }
        e
    };
    let floor_of = |e: &[Complex64]| -> Result<f64> {
        let f = partial_transpose(&rank_one(shape, e), first)?;
        Ok(eig_hermitian(&rho_pt.plus(&f.scaled(target))?).min())
    };
    let mut best_c = vec![0.0; 2 * k];
    best_c[0] = 1.0;
    let mut best_floor = floor_of(&mix(&best_c))?;
    for j in 1..k {
        let mut c = vec![0.0; 2 * k];
        c[2 * j] = 1.0;
        let f = floor_of(&mix(&c))?;
        if f > best_floor {
            best_floor = f;
            best_c = c;
        }
    }
    if k > 1 {
        let mut h = 0.35;
        while h > 1e-6 {
            for _ in 0..60 {
                let mut improved = false;
                for slot in 0..2 * k {
                    for sign in [1.0, -1.0] {
                        let mut c = best_c.clone();
                        c[slot] += sign * h;
                        let f = floor_of(&mix(&c))?;
                        if f > best_floor {
                            best_floor = f;
                            best_c = c;
                            improved = true;
                        }
                    }
                }
                if !improved {
                    break;
                }
            }
            h *= 0.5;
        }
    }
    let lift = (-best_floor).max(0.0) + 1e-13;
    let mut candidate = target + d as f64 * lift;
    let e = mix(&best_c);
    if let Some(scaled) = min_scale_along(first, &rank_one(shape, &e), rho_pt)? {
        candidate = candidate.min(scaled);
    }
    Ok(Some(candidate))
}

/// Smallest scale s >= 0 keeping rho^PT + s t^PT positive, where t must be
/// positive semidefinite. Any feasible s yields the mixing operator s t,
/// so s tr[t] certifies the upper end. None when t cannot help.
fn min_scale_along(
    first: &[usize],
    t: &HermitianOperator,
    rho_pt: &HermitianOperator,
) -> Result<Option<f64>> {
    let trace_t = t.trace();
    if trace_t <= 1e-14 {
        return Ok(None);
    }
    let t_pt = partial_transpose(t, first)?;
    let floor = |s: f64| -> Result<f64> { Ok(eig_hermitian(&rho_pt.plus(&t_pt.scaled(s))?).min()) };
    if floor(0.0)? >= 0.0 {
        return Ok(Some(0.0));
    }
    let mut hi = 1.0 / trace_t;
    let mut feasible = floor(hi)? >= 0.0;
    for _ in 0..40 {
        if feasible {
            break;
        }
        hi *= 1.6;
        feasible = floor(hi)? >= 0.0;
    }
    if !feasible {
        return Ok(None);
    }
    let mut lo = 0.0;
    for _ in 0..80 {
        if hi - lo <= 1e-16 * (1.0 + hi) {
            break;
        }
        let mid = 0.5 * (lo + hi);
        if floor(mid)? >= 0.0 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    // hi stayed on the feasible side throughout; adding a sliver of the
    // identity to the candidate covers the eigensolver tail.
    let d = rho_pt.dim() as f64;
    Ok(Some(hi * trace_t + d * 1e-13))
}

/// Hermitian matrix from packed coordinates: diagonal first, then
/// (re, im) pairs over the strict upper triangle in row-major order.
fn unpack(shape: &HilbertShape, p: &[f64]) -> HermitianOperator {
    let d = shape.total_dim();
    let mut m = vec![cx(0.0, 0.0); d * d];
    for i in 0..d {
        m[i * d + i] = cx(p[i], 0.0);
    }
    let mut k = d;
    for i in 0..d {
        for j in (i + 1)..d {
            m[i * d + j] = cx(p[k], p[k + 1]);
            m[j * d + i] = cx(p[k], -p[k + 1]);
            k += 2;
        }
    }
    HermitianOperator::from_exact(shape.clone(), m)
}

/// Coefficients of the linear functional p -> tr[Delta(p) M] in the same
/// packed coordinates.
fn pack_coefficients(m: &HermitianOperator) -> Vec<f64> {
    let d = m.dim();
    let mut a = vec![0.0; d * d];
    for i in 0..d {
        a[i] = m.entry(i, i).re;
    }
    let mut k = d;
    for i in 0..d {
        for j in (i + 1)..d {
            a[k] = 2.0 * m.entry(i, j).re;
            a[k + 1] = 2.0 * m.entry(i, j).im;
            k += 2;
        }
    }
    a
}

fn rank_one(shape: &HilbertShape, v: &[Complex64]) -> HermitianOperator {
    let d = v.len();
    let mut m = vec![cx(0.0, 0.0); d * d];
    for i in 0..d {
        for j in 0..d {
            m[i * d + j] = v[i] * v[j].conj();
        }
    }
    HermitianOperator::from_exact(shape.clone(), m)
}

fn quad_form(op: &HermitianOperator, v: &[Complex64]) -> f64 {
    let d = op.dim();
    let mut acc = cx(0.0, 0.0);
    for i in 0..d {
        for j in 0..d {
            acc += v[i].conj() * op.entry(i, j) * v[j];
        }
    }
    acc.re
}

/// v' s' v >= 0 at s' = s0 I + Delta: -tr[Delta vv'] <= s0 |v|^2.
fn psd_cut(shape: &HilbertShape, v: &[Complex64], s0: f64) -> (Vec<f64>, f64) {
    let weight = rank_one(shape, v);
    let row: Vec<f64> = pack_coefficients(&weight).iter().map(|a| -a).collect();
    let norm_sqr: f64 = v.iter().map(|z| z.norm_sqr()).sum();
    (row, s0 * norm_sqr)
}

/// u' (rho + s')^PT u >= 0: -tr[Delta (uu')^PT] <= u' rho^PT u + s0 |u|^2.
/// The right-hand side is nonnegative by the choice of s0; clamping guards
/// the rounding tail, and clamping upward only loosens the relaxation.
fn pt_cut(
    shape: &HilbertShape,
    first: &[usize],
    u: &[Complex64],
    rho_pt: &HermitianOperator,
    s0: f64,
) -> Result<(Vec<f64>, f64)> {
    let weight = partial_transpose(&rank_one(shape, u), first)?;
    let row: Vec<f64> = pack_coefficients(&weight).iter().map(|a| -a).collect();
    let norm_sqr: f64 = u.iter().map(|z| z.norm_sqr()).sum();
    let rhs = (quad_form(rho_pt, u) + s0 * norm_sqr).max(0.0);
    Ok((row, rhs))
}

/// Two qubits with the cut after the first factor: the layout every
/// seeded soundness suite runs on.
pub fn two_qubit_shape() -> HilbertShape {
    HilbertShape::qubits(2)
        .and_then(|s| s.with_split(&[0]))
        .expect("static two-qubit shape")
}

/// Random pure state with complex normal amplitudes (Haar-distributed
/// after normalization).
pub fn random_pure_state(rng: &mut impl Rng, shape: &HilbertShape) -> StateVector {
    let d = shape.total_dim();
    loop {
        let amp: Vec<Complex64> = (0..d)
            .map(|_| cx(rng.sample(StandardNormal), rng.sample(StandardNormal)))
            .collect();
        let norm = amp.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm < 1e-6 {
            continue;
        }
        let amp: Vec<Complex64> = amp.into_iter().map(|z| z / norm).collect();
        return StateVector::new(shape.clone(), amp).expect("normalized by construction");
    }
}

/// Convex mixture of `terms` random pure states with flat simplex weights.
pub fn random_mixed_state(
    rng: &mut impl Rng,
    shape: &HilbertShape,
    terms: usize,
) -> DensityMatrix {
    let terms = terms.max(1);
    // Exponential draws normalized to the simplex are uniform on it.
    let weights: Vec<f64> = (0..terms)
        .map(|_| -(rng.gen::<f64>().max(1e-12)).ln())
        .collect();
    let total: f64 = weights.iter().sum();
    let d = shape.total_dim();
    let mut data = vec![cx(0.0, 0.0); d * d];
    for w in weights {
        let v = random_pure_state(rng, shape);
        let amp = v.amplitudes();
        let scale = w / total;
        for i in 0..d {
            for j in 0..d {
                data[i * d + j] += scale * amp[i] * amp[j].conj();
            }
        }
    }
    DensityMatrix::new(HermitianOperator::from_exact(shape.clone(), data))
        .expect("convex mixture of projectors is a state")
}

pub fn random_two_qubit_pure(rng: &mut impl Rng) -> StateVector {
    random_pure_state(rng, &two_qubit_shape())
}

pub fn random_two_qubit_mixed(rng: &mut impl Rng, terms: usize) -> DensityMatrix {
    random_mixed_state(rng, &two_qubit_shape(), terms)
}

#[cfg(test)]
mod tests {
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    use super::*;
    use crate::catalog::{bell_states, schmidt_decompose};
    use crate::formation::symmetric_family_state;

    #[test]
    fn negativity_known_values() {
        let [phi_plus, _, psi_plus, _] = bell_states();
        let n = negativity(&DensityMatrix::from_state(&phi_plus)).unwrap();
        assert!((n - 1.0).abs() < 1e-12, "bell negativity {n}");

        let shape = two_qubit_shape();
        let mut amp = vec![cx(0.0, 0.0); 4];
        amp[0] = cx(1.0, 0.0);
        let product = StateVector::new(shape, amp).unwrap();
        let n = negativity(&DensityMatrix::from_state(&product)).unwrap();
        assert!(n.abs() < 1e-12, "product negativity {n}");

        // lambda I/4 + (1-lambda) psi+: PT spectrum has a single dip
        // lambda/4 - (1-lambda)/2, so the negativity is (2-3 lambda)/2.
        let rho = symmetric_family_state(0.4).unwrap();
        let n = negativity(&rho).unwrap();
        assert!((n - 0.4).abs() < 1e-12, "family negativity {n}");
        let _ = psi_plus;
    }

    #[test]
    fn formation_matches_direct_chain() {
        let rho = symmetric_family_state(0.25).unwrap();
        let via_oracle = formation_two_qubit(&rho).unwrap();
        let direct = ef_from_concurrence(wootters_concurrence(&rho).unwrap()).unwrap();
        assert_eq!(via_oracle, direct);
    }

    #[test]
    fn random_robustness_known_values() {
        let [phi_plus, _, _, _] = bell_states();
        let er = random_robustness_two_qubit(&DensityMatrix::from_state(&phi_plus)).unwrap();
        assert!((er - 2.0).abs() < 1e-12, "bell white-noise robustness {er}");

        let shape = two_qubit_shape();
        let maximally_mixed =
            DensityMatrix::new(HermitianOperator::identity(shape).scaled(0.25)).unwrap();
        let er = random_robustness_two_qubit(&maximally_mixed).unwrap();
        assert_eq!(er, 0.0);
    }

    #[test]
    fn generalized_bracket_on_pure_states_matches_schmidt_form() {
        // For pure two-qubit states the measure equals twice the product
        // of the Schmidt coefficients.
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..25 {
            let v = random_two_qubit_pure(&mut rng);
            let schmidt = schmidt_decompose(&v, &[0]).unwrap();
            let exact = 2.0 * schmidt.coefficients()[0] * schmidt.coefficients()[1];
            let bracket =
                generalized_robustness_two_qubit(&DensityMatrix::from_state(&v)).unwrap();
            assert!(
                bracket.upper - bracket.lower <= 1e-3,
                "bracket width {}",
                bracket.upper - bracket.lower
            );
            // The dual side is the sharp one; the upper end only needs to
            // stay on the far side of the closed form.
            assert!(
                (bracket.lower - exact).abs() <= 1e-7 && exact <= bracket.upper + 1e-9,
                "bracket [{}, {}] misses exact {exact}",
                bracket.lower,
                bracket.upper
            );
        }
    }

    #[test]
    fn generalized_bracket_pins_bell_and_separable_states() {
        let [phi_plus, _, _, _] = bell_states();
        let bracket =
            generalized_robustness_two_qubit(&DensityMatrix::from_state(&phi_plus)).unwrap();
        assert!(
            bracket.lower <= 1.0 + 1e-9 && 1.0 <= bracket.upper + 1e-9,
            "bell bracket [{}, {}]",
            bracket.lower,
            bracket.upper
        );

        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let shape = two_qubit_shape();
        let single = HilbertShape::new(&[2]).unwrap();
        for _ in 0..10 {
            // Mixture of product states: separable, so the measure is zero.
            let d = 4;
            let mut data = vec![cx(0.0, 0.0); d * d];
            for _ in 0..4 {
                let a = random_pure_state(&mut rng, &single);
                let b = random_pure_state(&mut rng, &single);
                let amp: Vec<Complex64> = (0..d)
                    .map(|i| a.amplitudes()[i / 2] * b.amplitudes()[i % 2])
                    .collect();
                for i in 0..d {
                    for j in 0..d {
                        data[i * d + j] += 0.25 * amp[i] * amp[j].conj();
                    }
                }
            }
            let rho =
                DensityMatrix::new(HermitianOperator::from_exact(shape.clone(), data)).unwrap();
            let bracket = generalized_robustness_two_qubit(&rho).unwrap();
            assert!(
                bracket.upper <= 1e-6,
                "separable state got bracket [{}, {}]",
                bracket.lower,
                bracket.upper
            );
        }
    }

    #[test]
    fn generalized_never_exceeds_random_robustness() {
        // Restricting the mixing operator to the identity can only raise
        // the optimum.
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        for k in 0..25 {
            let rho = random_two_qubit_mixed(&mut rng, 1 + k % 4);
            let random = random_robustness_two_qubit(&rho).unwrap();
            let bracket = generalized_robustness_two_qubit(&rho).unwrap();
            assert!(
                bracket.lower <= random + 1e-9,
                "generalized {} above white-noise {random}",
                bracket.lower
            );
        }
    }


    #[test]
    fn robustness_oracles_reject_larger_systems() {
        let shape = HilbertShape::qubits(3)
            .and_then(|s| s.with_split(&[0]))
            .unwrap();
        let mut amp = vec![cx(0.0, 0.0); 8];
        amp[0] = cx(std::f64::consts::FRAC_1_SQRT_2, 0.0);
        amp[7] = cx(std::f64::consts::FRAC_1_SQRT_2, 0.0);
        let ghz = DensityMatrix::from_state(&StateVector::new(shape, amp).unwrap());
        assert!(generalized_robustness_two_qubit(&ghz).is_err());
        assert!(random_robustness_two_qubit(&ghz).is_err());
    }
}
