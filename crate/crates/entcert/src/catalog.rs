//! Stock states and witnesses: Bell pairs, W states, the four-partite
//! singlet-like state, the four-qubit cluster witness, projector-based
//! witness families, and Schmidt decomposition tooling.
//!
//! Witness-hood itself (nonnegativity on all separable states) is never
//! verified here; the class tag and normalization note are metadata carried
//! along so reports can show what the numbers meant.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::operator::{
    self, split_tables, HermitianOperator, HilbertShape, StateVector,
};
use crate::pauli::parse_pauli;

fn cx(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// What kind of entanglement a witness is declared to detect.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum WitnessClass {
    Bipartite,
    GenuineMultipartite,
    /// Detects states outside the k-separable class.
    KSeparability(usize),
}

impl std::fmt::Display for WitnessClass {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            WitnessClass::Bipartite => write!(f, "bipartite"),
            WitnessClass::GenuineMultipartite => write!(f, "genuine-multipartite"),
            WitnessClass::KSeparability(k) => write!(f, "{k}-separability"),
        }
    }
}

/// An observable whose negative expectation flags entanglement, plus the
/// metadata needed to interpret bound computations against it.
#[derive(Debug, Clone)]
pub struct Witness {
    pub op: HermitianOperator,
    pub class_tag: WitnessClass,
    pub normalization_note: String,
}

impl Witness {
    pub fn new(op: HermitianOperator, class_tag: WitnessClass, note: impl Into<String>) -> Self {
        Self {
            op,
            class_tag,
            normalization_note: note.into(),
        }
    }

    pub fn dim(&self) -> usize {
        self.op.dim()
    }
}

/// The four maximally entangled two-qubit states, in the order
/// phi+, phi-, psi+, psi-.
pub fn bell_states() -> [StateVector; 4] {
    let shape = HilbertShape::qubits(2)
        .and_then(|s| s.with_split(&[0]))
        .expect("two-qubit shape");
    let r = 0.5f64.sqrt();
    let mk = |amps: [(usize, f64); 2]| {
        let mut v = vec![cx(0.0, 0.0); 4];
        for (idx, val) in amps {
            v[idx] = cx(val, 0.0);
        }
        StateVector::new(shape.clone(), v).expect("bell state normalized")
    };
    [
        mk([(0, r), (3, r)]),
        mk([(0, r), (3, -r)]),
        mk([(1, r), (2, r)]),
        mk([(1, r), (2, -r)]),
    ]
}

/// Partial transpose of the phi- projector: the canonical optimal witness
/// for two-qubit entanglement. Expectation -1/2 on psi+.
pub fn bell_projector_witness() -> Witness {
    let [_, phi_minus, _, _] = bell_states();
    let op = operator::partial_transpose(&phi_minus.projector(), &[0])
        .expect("two-qubit partial transpose");
    Witness::new(
        op,
        WitnessClass::Bipartite,
        "partial transpose of a Bell projector; trace 1, min eigenvalue -1/2",
    )
}

/// aI - b|phi><phi|. The workhorse form for multipartite witnessing; a is
/// the squared overlap threshold that separable (or k-separable) states
/// cannot exceed.
pub fn projector_witness(a: f64, b: f64, phi: &StateVector) -> Result<Witness> {
    if a <= 0.0 || b < 0.0 {
        return Err(Error::BadInput(format!(
            "projector witness needs a > 0 and b >= 0, got a = {a}, b = {b}"
        )));
    }
    let proj = phi.projector();
    let op = operator::linear_combination(&[(-b, &proj)], a)?;
    let class = if phi.shape().factor_count() == 2 {
        WitnessClass::Bipartite
    } else {
        WitnessClass::GenuineMultipartite
    };
    Ok(Witness::new(
        op,
        class,
        format!("{a}*I - {b}*projector; trace {}", a * phi.dim() as f64 - b),
    ))
}

/// |phi><phi|^PT for a normalized entangled vector. On two factors the cut
/// is implied; otherwise the vector's shape must carry one.
pub fn ppt_projector_witness(phi: &StateVector) -> Result<Witness> {
    let first: Vec<usize> = match phi.shape().split() {
        Some(s) => s.to_vec(),
        None if phi.shape().factor_count() == 2 => vec![0],
        None => return Err(Error::MissingSplit),
    };
    let op = operator::partial_transpose(&phi.projector(), &first)?;
    Ok(Witness::new(
        op,
        WitnessClass::Bipartite,
        "partial transpose of a pure-state projector; trace 1",
    ))
}

/// The N-qubit W state: equal superposition of all single-excitation basis
/// states.
pub fn w_state(n: usize) -> Result<StateVector> {
    if n < 2 {
        return Err(Error::BadInput(format!(
            "W state needs at least 2 qubits, got {n}"
        )));
    }
    if n > 12 {
        return Err(Error::BadInput(format!("W state capped at 12 qubits, got {n}")));
    }
    let shape = HilbertShape::qubits(n)?;
    let mut amp = vec![cx(0.0, 0.0); 1 << n];
    let a = 1.0 / (n as f64).sqrt();
    for k in 0..n {
        amp[1 << k] = cx(a, 0.0);
    }
    StateVector::new(shape, amp)
}

/// The four-qubit state (|0011> + |1100>)/sqrt(3)
/// - (|0110> + |1001> + |0101> + |1010>)/(2 sqrt(3)).
pub fn psi4_state() -> StateVector {
    let shape = HilbertShape::qubits(4).expect("four-qubit shape");
    let big = 1.0 / 3.0f64.sqrt();
    let small = -0.5 * big;
    let mut amp = vec![cx(0.0, 0.0); 16];
    amp[0b0011] = cx(big, 0.0);
    amp[0b1100] = cx(big, 0.0);
    for idx in [0b0110, 0b1001, 0b0101, 0b1010] {
        amp[idx] = cx(small, 0.0);
    }
    StateVector::new(shape, amp).expect("psi4 normalized")
}

/// 2/3 I - |W3><W3|: detects genuine tripartite entanglement.
pub fn w_witness() -> Witness {
    let mut w = projector_witness(2.0 / 3.0, 1.0, &w_state(3).expect("W3"))
        .expect("valid parameters");
    w.normalization_note = "2/3 I - W-state projector; trace 13/3".into();
    w
}

/// 3/4 I - |Psi4><Psi4|: detects genuine four-partite entanglement.
pub fn psi4_witness() -> Witness {
    let mut w = projector_witness(0.75, 1.0, &psi4_state()).expect("valid parameters");
    w.normalization_note = "3/4 I - four-partite projector; trace 11".into();
    w
}

const CLUSTER_WITNESS_EXPR: &str = "3*IIII \
    - 0.5*(Z1Z2 + IIII)(Z2X3X4 + IIII) \
    - 0.5*(X1X2Z3 + IIII)(Z3Z4 + IIII)";

/// Stabilizer witness for the four-qubit cluster state. Minimum eigenvalue
/// -1, maximum 3, trace 32 (only the identity component carries trace).
pub fn cluster_witness() -> Witness {
    let op = parse_pauli(CLUSTER_WITNESS_EXPR, 4).expect("fixed expression parses");
    Witness::new(
        op,
        WitnessClass::GenuineMultipartite,
        "stabilizer form 3I - products of cluster stabilizers; trace 32",
    )
}

/// The four-qubit cluster state as a density matrix, built from its
/// stabilizer projector.
pub fn cluster_state() -> crate::operator::DensityMatrix {
    let expr = "0.0625*(IIII + Z1Z2)(IIII + Z2X3X4)(IIII + X1X2Z3)(IIII + Z3Z4)";
    let op = parse_pauli(expr, 4).expect("fixed expression parses");
    crate::operator::DensityMatrix::new(op).expect("stabilizer projector is a state")
}

/// The pair of two-qubit unit vectors used by the joint-witness
/// demonstration. At c1 = -1/3 and c2 = -1/6 their partial-transpose
/// projector witnesses certify 2/3 and 1/3 individually and roughly
/// 0.7375 jointly, so the pair exercises the gain from processing two
/// measurements at once.
pub fn ppt_pair_vectors() -> (StateVector, StateVector) {
    let shape = HilbertShape::qubits(2)
        .and_then(|s| s.with_split(&[0]))
        .expect("two-qubit shape");
    let phi1 = StateVector::new(
        shape.clone(),
        vec![
            cx(0.1, 0.0),
            cx(0.1, 0.0),
            cx(0.2, 0.0),
            cx((47.0f64 / 50.0).sqrt(), 0.0),
        ],
    )
    .expect("first vector is exactly normalized");
    let phi2 = StateVector::new(
        shape,
        vec![
            cx(0.3, 0.0),
            cx(0.1, 0.0),
            cx(0.2, 0.0),
            cx((43.0f64 / 50.0).sqrt(), 0.0),
        ],
    )
    .expect("second vector is exactly normalized");
    (phi1, phi2)
}

/// Witness |A><A|^PT with |A> = (A tensor I)(|00> + |11|), after rescaling
/// A to unit determinant. The vector is intentionally left unnormalized
/// (<A|A> = tr[A A^dag]), matching the convention where concurrence bounds
/// read off -tr[W rho] directly.
pub fn verstraete_witness(a: &[Complex64; 4]) -> Result<Witness> {
    let det = a[0] * a[3] - a[1] * a[2];
    if det.norm() < 1e-12 {
        return Err(Error::Singular(
            "witness matrix has zero determinant".into(),
        ));
    }
    let root = det.sqrt();
    let a: Vec<Complex64> = a.iter().map(|z| z / root).collect();
    let check = a[0] * a[3] - a[1] * a[2];
    if (check - cx(1.0, 0.0)).norm() > 1e-9 {
        return Err(Error::Singular(format!(
            "determinant normalization failed: det = {check}"
        )));
    }
    let shape = HilbertShape::qubits(2)?.with_split(&[0])?;
    // amp[2r + c] = A[r][c]
    let amp = [a[0], a[1], a[2], a[3]];
    let mut proj = vec![cx(0.0, 0.0); 16];
    for i in 0..4 {
        for j in 0..4 {
            proj[i * 4 + j] = amp[i] * amp[j].conj();
        }
    }
    let op = operator::partial_transpose(
        &HermitianOperator::from_entries(shape, proj)?,
        &[0],
    )?;
    let norm_sq: f64 = amp.iter().map(|z| z.norm_sqr()).sum();
    Ok(Witness::new(
        op,
        WitnessClass::Bipartite,
        format!("det-normalized matrix witness; vector norm^2 = {norm_sq:.6}"),
    ))
}

/// Schmidt form of a bipartite pure state: coefficients sorted descending
/// with orthonormal local vectors on each side, enough to reconstruct the
/// input exactly.
#[derive(Debug, Clone)]
pub struct SchmidtData {
    shape: HilbertShape,
    first: Vec<usize>,
    coefficients: Vec<f64>,
    basis_first: Vec<Vec<Complex64>>,
    basis_second: Vec<Vec<Complex64>>,
}

impl SchmidtData {
    /// Descending, nonnegative, squares summing to one.
    pub fn coefficients(&self) -> &[f64] {
        &self.coefficients
    }

    pub fn basis_first(&self) -> &[Vec<Complex64>] {
        &self.basis_first
    }

    pub fn basis_second(&self) -> &[Vec<Complex64>] {
        &self.basis_second
    }

    /// Largest product of two distinct coefficients; zero for product
    /// states.
    pub fn top_pair_product(&self) -> f64 {
        if self.coefficients.len() < 2 {
            0.0
        } else {
            self.coefficients[0] * self.coefficients[1]
        }
    }

    pub fn reconstruct(&self) -> Result<StateVector> {
        let tables = split_tables(&self.shape, &self.first)?;
        let mut amp = vec![cx(0.0, 0.0); self.shape.total_dim()];
        for (k, &xi) in self.coefficients.iter().enumerate() {
            if xi == 0.0 {
                continue;
            }
            for a in 0..tables.d1 {
                for b in 0..tables.d2 {
                    amp[tables.flat_of[a * tables.d2 + b]] +=
                        xi * self.basis_first[k][a] * self.basis_second[k][b];
                }
            }
        }
        StateVector::normalized(self.shape.clone(), amp)
    }
}

/// Computes the Schmidt form of `psi` across the cut given by the factor
/// positions in `first`.
pub fn schmidt_decompose(psi: &StateVector, first: &[usize]) -> Result<SchmidtData> {
    let tables = split_tables(psi.shape(), first)?;
    let (d1, d2) = (tables.d1, tables.d2);
    let rank = d1.min(d2);

    let rho1 = operator::reduced_first(psi.amplitudes(), &tables);
    let spec = operator::eig_raw(d1, &rho1);

    let mut coefficients = Vec::with_capacity(rank);
    let mut basis_first = Vec::with_capacity(rank);
    let mut basis_second: Vec<Vec<Complex64>> = Vec::with_capacity(rank);

    // Largest reduced eigenvalues first.
    for k in (d1 - rank..d1).rev() {
        let xi = spec.eigenvalues()[k].max(0.0).sqrt();
        let u = spec.eigenvector(k).to_vec();
        let w = if xi > 1e-12 {
            // w[b] = (1/xi) sum_a conj(u[a]) psi[a, b]
            let mut w = vec![cx(0.0, 0.0); d2];
            for b in 0..d2 {
                let mut acc = cx(0.0, 0.0);
                for a in 0..d1 {
                    acc += u[a].conj() * psi.amplitudes()[tables.flat_of[a * d2 + b]];
                }
                w[b] = acc / xi;
            }
            w
        } else {
            // Null coefficient: fill with any unit vector orthogonal to the
            // ones already chosen, so the basis stays orthonormal.
            orthogonal_completion(d2, &basis_second)
        };
        coefficients.push(xi);
        basis_first.push(u);
        basis_second.push(w);
    }

    Ok(SchmidtData {
        shape: psi.shape().clone(),
        first: first.to_vec(),
        coefficients,
        basis_first,
        basis_second,
    })
}

fn orthogonal_completion(dim: usize, existing: &[Vec<Complex64>]) -> Vec<Complex64> {
    for seed in 0..dim {
        let mut v = vec![cx(0.0, 0.0); dim];
        v[seed] = cx(1.0, 0.0);
        for e in existing {
            let overlap: Complex64 = e.iter().zip(&v).map(|(a, b)| a.conj() * b).sum();
            for (vi, ei) in v.iter_mut().zip(e) {
                *vi -= overlap * ei;
            }
        }
        let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm > 1e-6 {
            for z in &mut v {
                *z /= norm;
            }
            return v;
        }
    }
    unreachable!("existing vectors cannot span the whole space here");
}

/// Built-in witnesses addressable by name from files and the command line.
pub fn catalog_names() -> Vec<(&'static str, &'static str)> {
    vec![
        (
            "bell-ppt",
            "two-qubit Bell-projector witness |phi-><phi-|^PT",
        ),
        ("w3", "2/3 I - |W3><W3|, genuine tripartite"),
        ("psi4", "3/4 I - |Psi4><Psi4|, genuine four-partite"),
        ("cluster4", "stabilizer witness for the 4-qubit cluster state"),
        ("ppt-pair-a", "PPT projector witness, joint-bound demo, vector a"),
        ("ppt-pair-b", "PPT projector witness, joint-bound demo, vector b"),
    ]
}

pub fn named_witness(name: &str) -> Result<Witness> {
    match name {
        "bell-ppt" => Ok(bell_projector_witness()),
        "w3" => Ok(w_witness()),
        "psi4" => Ok(psi4_witness()),
        "cluster4" => Ok(cluster_witness()),
        "ppt-pair-a" => ppt_projector_witness(&ppt_pair_vectors().0),
        "ppt-pair-b" => ppt_projector_witness(&ppt_pair_vectors().1),
        other => Err(Error::UnknownCatalogEntry(other.into())),
    }
}
