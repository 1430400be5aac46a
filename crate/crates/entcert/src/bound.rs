//! Shared result types: measurements in, certified bounds out.
//!
//! Every engine returns a `BoundResult` whose certificate carries enough
//! data to recompute the reported bound without re-running any
//! optimization. The report verifier leans on that.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

/// A measured witness expectation value with its standard uncertainty.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct Measurement {
    pub c: f64,
    pub sigma: f64,
}

impl Measurement {
    pub fn exact(c: f64) -> Self {
        Self { c, sigma: 0.0 }
    }
}

/// A certified lower bound on an entanglement measure.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BoundResult {
    /// Which measure is bounded ("negativity", "formation", ...).
    pub measure: String,
    /// The certified lower bound as reported.
    pub bound: f64,
    /// First-order propagated uncertainty: the bound is affine in the
    /// measured values, so sigma = sqrt(sum (alpha_i sigma_i)^2).
    pub sigma: f64,
    pub certificate: Certificate,
    /// Advisory text only: discrepancy flags, tightness notes.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

/// Machine-checkable data backing a bound.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Certificate {
    Negativity(NegativityCertificate),
    Formation(FormationCertificate),
    Concurrence(ConcurrenceCertificate),
    Robustness(RobustnessBound),
    SymmetricFamily(SymmetricCertificate),
}

/// Coefficients alpha_1..alpha_{n+1} with X = sum alpha_i W_i^PT +
/// alpha_{n+1} I. Valid when -I <= X <= I; the bound is
/// sum alpha_i c_i + alpha_{n+1} - 1.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct NegativityCertificate {
    pub alphas: Vec<f64>,
    /// 1 - |X|_inf, recomputable from alphas; valid above -1e-8.
    pub feasibility_margin: f64,
    pub bound: f64,
}

/// alpha_1 and the certified upper bracket on the conjugate f*(alpha_1 W),
/// with the bound alpha_1 c - conjugate_upper.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FormationCertificate {
    pub alpha1: f64,
    pub conjugate_upper: f64,
    /// Multistart value when one was computed; a lower bracket on the
    /// conjugate, reported for diagnostics.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub conjugate_lower: Option<f64>,
    /// Which conjugate evaluation produced the upper bracket.
    pub method: String,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub detail: BTreeMap<String, f64>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ConcurrenceCertificate {
    pub method: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alpha1: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub conjugate_upper: Option<f64>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub detail: BTreeMap<String, f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RobustnessKind {
    Generalized,
    Random,
}

/// Closed-form robustness bound: |c| over the max eigenvalue (generalized)
/// or D|c| over the trace (random), zero when c >= 0.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RobustnessBound {
    pub kind: RobustnessKind,
    pub value: f64,
    pub sigma: f64,
    pub c: f64,
    /// lambda_max(W) for generalized, tr[W] for random.
    pub denominator: f64,
    pub dimension: usize,
}

/// Bound obtained by intersecting the measurement constraint with a
/// one-parameter symmetric family and evaluating the exact measure there.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SymmetricCertificate {
    pub lambda: f64,
    pub concurrence: f64,
}

pub(crate) fn propagate_sigma(alphas: &[f64], sigmas: &[f64]) -> f64 {
    alphas
        .iter()
        .zip(sigmas)
        .map(|(a, s)| (a * s) * (a * s))
        .sum::<f64>()
        .sqrt()
}
