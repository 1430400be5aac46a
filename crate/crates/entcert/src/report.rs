//! Certification reports: engine dispatch over measurement files,
//! deterministic serialization, certificate-only verification and a seeded
//! measurement simulator.
//!
//! A report row echoes everything needed to recheck it offline: the
//! witness references, the measured values and the certificate. The
//! verifier recomputes every bound from the certificate data alone, so a
//! report survives scrutiny without re-running any optimization.

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::Distribution;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::bound::{BoundResult, Certificate, Measurement, RobustnessKind};
use crate::catalog::Witness;
use crate::concurrence::{
    concurrence_bound_conjugate_with, dual_bracket_value, ef_from_concurrence,
    wootters_concurrence, ConjugateSearchConfig,
};
use crate::error::{Error, Result};
use crate::formation::{ef_bound_general, symmetric_family_state};
use crate::formats::{self, MeasurementRecord};
use crate::negativity::{negativity_bound_optimal, recompute_margin, FEASIBILITY_TOL};
use crate::operator::expectation;
use crate::robustness::{
    generalized_robustness_bound, random_robustness_bound, CLUSTER_RANDOM_ROBUSTNESS_NOTE,
    W_RANDOM_SIGMA_NOTE,
};

/// Report-wide footnote on how uncertainties are computed.
pub const SIGMA_FOOTNOTE: &str =
    "uncertainties are first-order linear propagation of the measurement sigmas";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Measure {
    Negativity,
    Ef,
    Concurrence,
    RobustnessGen,
    RobustnessRand,
}

impl Measure {
    pub const ALL: [Measure; 5] = [
        Measure::Negativity,
        Measure::Ef,
        Measure::Concurrence,
        Measure::RobustnessGen,
        Measure::RobustnessRand,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Measure::Negativity => "negativity",
            Measure::Ef => "ef",
            Measure::Concurrence => "concurrence",
            Measure::RobustnessGen => "robustness-gen",
            Measure::RobustnessRand => "robustness-rand",
        }
    }
}

impl fmt::Display for Measure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Measure {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Measure::ALL
            .into_iter()
            .find(|m| m.as_str() == s)
            .ok_or_else(|| {
                Error::BadInput(format!(
                    "unknown measure '{s}'; expected one of negativity, ef, concurrence, \
                     robustness-gen, robustness-rand"
                ))
            })
    }
}

#[derive(Debug, Clone)]
pub struct ReportConfig {
    pub measures: Vec<Measure>,
    /// Measurement record file.
    pub data: PathBuf,
    /// Fallback witness references consumed in order by records that do
    /// not name their own.
    pub witnesses: Vec<String>,
    pub conjugate: ConjugateSearchConfig,
}

impl ReportConfig {
    pub fn new(data: impl Into<PathBuf>, measures: Vec<Measure>) -> Self {
        Self {
            measures,
            data: data.into(),
            witnesses: Vec::new(),
            conjugate: ConjugateSearchConfig::default(),
        }
    }
}

/// Engine tolerances in force when the report was produced, echoed so a
/// reader can judge what the numbers mean without the source.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Tolerances {
    pub negativity_feasibility: f64,
    pub negativity_optimal_gap: f64,
    pub conjugate_upper_starts: usize,
    pub conjugate_alpha_scan: usize,
    pub conjugate_seed: u64,
    pub verify_equality: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ReportRow {
    pub label: String,
    /// Witness references exactly as given, so the verifier can resolve
    /// them again (catalog names or file paths).
    pub witnesses: Vec<String>,
    pub measurements: Vec<Measurement>,
    pub result: BoundResult,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CertificationReport {
    pub version: String,
    /// SHA-256 over the measurement file bytes and every resolved witness
    /// in its dense serialization.
    pub input_sha256: String,
    pub tolerances: Tolerances,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
    pub rows: Vec<ReportRow>,
}

impl CertificationReport {
    /// Machine-readable form; identical inputs yield identical bytes.
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serialization cannot fail")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text)
            .map_err(|e| Error::BadInput(format!("report does not parse: {e}")))
    }

    /// Human-readable form, one line per row plus indented notes.
    pub fn render_text(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("certification report (library {})\n", self.version));
        out.push_str(&format!("inputs sha256 {}\n", self.input_sha256));
        for note in &self.notes {
            out.push_str(&format!("note: {note}\n"));
        }
        for row in &self.rows {
            out.push_str(&format!(
                "{}: {} >= {:.9} +/- {:.9} [{}]\n",
                row.label,
                row.result.measure,
                row.result.bound,
                row.result.sigma,
                row.witnesses.join(", ")
            ));
            for note in &row.result.notes {
                out.push_str(&format!("  note: {note}\n"));
            }
        }
        out
    }
}

fn tolerances(cfg: &ConjugateSearchConfig) -> Tolerances {
    Tolerances {
        negativity_feasibility: FEASIBILITY_TOL,
        negativity_optimal_gap: 1e-6,
        conjugate_upper_starts: cfg.upper_starts,
        conjugate_alpha_scan: cfg.alpha_scan,
        conjugate_seed: cfg.seed,
        verify_equality: VERIFY_TOL,
    }
}

const VERIFY_TOL: f64 = 1e-9;

/// Computes every requested measure over the records in the data file.
/// Negativity aggregates all records into one jointly optimized row; the
/// other measures bound each record separately.
pub fn run_report(config: &ReportConfig) -> Result<CertificationReport> {
    let data_bytes = std::fs::read(&config.data)?;
    let records = formats::parse_measurements_text(&String::from_utf8_lossy(&data_bytes))?;
    if records.is_empty() {
        return Err(Error::BadInput(
            "measurement list is empty; nothing to bound".into(),
        ));
    }
    if config.measures.is_empty() {
        return Err(Error::BadInput("no measures requested".into()));
    }
    let base = config.data.parent();

    let mut fallback = config.witnesses.iter();
    let mut resolved: Vec<(String, Witness)> = Vec::new();
    for record in &records {
        let spec = match (&record.witness, fallback.next()) {
            (Some(s), _) => s.clone(),
            (None, Some(s)) => s.clone(),
            (None, None) => {
                return Err(Error::BadInput(format!(
                    "record '{}' names no witness and no fallback witness is left",
                    label_of(record, resolved.len())
                )))
            }
        };
        resolved.push((spec.clone(), formats::resolve_witness(&spec, base)?));
    }

    let mut hasher = Sha256::new();
    hasher.update(&data_bytes);
    for (spec, w) in &resolved {
        hasher.update(spec.as_bytes());
        hasher.update(formats::witness_text(w).as_bytes());
    }
    let input_sha256 = hasher
        .finalize()
        .iter()
        .map(|b| format!("{b:02x}"))
        .collect::<String>();

    let measurements: Vec<Measurement> = records
        .iter()
        .map(|r| Measurement {
            c: r.c,
            sigma: r.sigma,
        })
        .collect();

    let mut rows = Vec::new();
    for &measure in &config.measures {
        match measure {
            Measure::Negativity => {
                let refs: Vec<&Witness> = resolved.iter().map(|(_, w)| w).collect();
                let result = negativity_bound_optimal(&refs, &measurements)?;
                rows.push(ReportRow {
                    label: if records.len() == 1 {
                        label_of(&records[0], 0)
                    } else {
                        "joint".into()
                    },
                    witnesses: resolved.iter().map(|(s, _)| s.clone()).collect(),
                    measurements: measurements.clone(),
                    result,
                });
            }
            Measure::Ef => {
                for (k, record) in records.iter().enumerate() {
                    let result = ef_bound_general(&resolved[k].1, record.c, record.sigma)?;
                    rows.push(row_of(record, k, &resolved[k].0, result));
                }
            }
            Measure::Concurrence => {
                for (k, record) in records.iter().enumerate() {
                    let result = concurrence_bound_conjugate_with(
                        &resolved[k].1,
                        record.c,
                        record.sigma,
                        &config.conjugate,
                    )?;
                    rows.push(row_of(record, k, &resolved[k].0, result));
                }
            }
            Measure::RobustnessGen => {
                for (k, record) in records.iter().enumerate() {
                    let result =
                        generalized_robustness_bound(&resolved[k].1, record.c, record.sigma)?;
                    rows.push(row_of(record, k, &resolved[k].0, result));
                }
            }
            Measure::RobustnessRand => {
                for (k, record) in records.iter().enumerate() {
                    let mut result =
                        random_robustness_bound(&resolved[k].1, record.c, record.sigma)?;
                    attach_discrepancy_notes(&resolved[k].0, &mut result);
                    rows.push(row_of(record, k, &resolved[k].0, result));
                }
            }
        }
    }

    Ok(CertificationReport {
        version: env!("CARGO_PKG_VERSION").to_string(),
        input_sha256,
        tolerances: tolerances(&config.conjugate),
        notes: vec![SIGMA_FOOTNOTE.to_string()],
        rows,
    })
}

/// Known conflicts between this library's formulas and originally
/// reported values, keyed by the catalog witness they concern.
fn attach_discrepancy_notes(spec: &str, result: &mut BoundResult) {
    match spec {
        "cluster4" => result.notes.push(CLUSTER_RANDOM_ROBUSTNESS_NOTE.to_string()),
        "w3" => result.notes.push(W_RANDOM_SIGMA_NOTE.to_string()),
        _ => {}
    }
}

fn label_of(record: &MeasurementRecord, index: usize) -> String {
    record
        .label
        .clone()
        .unwrap_or_else(|| format!("record-{}", index + 1))
}

fn row_of(record: &MeasurementRecord, index: usize, spec: &str, result: BoundResult) -> ReportRow {
    ReportRow {
        label: label_of(record, index),
        witnesses: vec![spec.to_string()],
        measurements: vec![Measurement {
            c: record.c,
            sigma: record.sigma,
        }],
        result,
    }
}

/// Recomputes every bound in the report from its certificate and the
/// echoed measurements, resolving witness references against `base`.
/// Passes when every recomputation agrees within the report's stated
/// verification tolerance.
pub fn verify_report(report: &CertificationReport, base: Option<&Path>) -> Result<()> {
    let tol = report.tolerances.verify_equality;
    for row in &report.rows {
        verify_row(row, base, tol)
            .map_err(|e| Error::Verification(format!("row '{}': {e}", row.label)))?;
    }
    Ok(())
}

fn verify_row(row: &ReportRow, base: Option<&Path>, tol: f64) -> Result<()> {
    let check = |claim: f64, recomputed: f64, what: &str| -> Result<()> {
        if (claim - recomputed).abs() > tol {
            return Err(Error::Verification(format!(
                "{what}: reported {claim} but certificate gives {recomputed}"
            )));
        }
        Ok(())
    };
    let witness = |k: usize| -> Result<Witness> {
        let spec = row.witnesses.get(k).ok_or_else(|| {
            Error::Verification(format!("certificate references missing witness {k}"))
        })?;
        formats::resolve_witness(spec, base)
    };
    let measurement = |k: usize| -> Result<Measurement> {
        row.measurements.get(k).copied().ok_or_else(|| {
            Error::Verification(format!("certificate references missing measurement {k}"))
        })
    };

    match &row.result.certificate {
        Certificate::Negativity(cert) => {
            if cert.alphas.len() != row.measurements.len() + 1 {
                return Err(Error::Verification(format!(
                    "{} coefficients against {} measurements",
                    cert.alphas.len(),
                    row.measurements.len()
                )));
            }
            let n = row.measurements.len();
            let recomputed = cert.alphas[..n]
                .iter()
                .zip(&row.measurements)
                .map(|(a, m)| a * m.c)
                .sum::<f64>()
                + cert.alphas[n]
                - 1.0;
            check(row.result.bound, recomputed, "negativity bound")?;
            check(cert.bound, recomputed, "certificate echo")?;
            let ws: Result<Vec<Witness>> = (0..n).map(witness).collect();
            let ws = ws?;
            let refs: Vec<&Witness> = ws.iter().collect();
            let margin = recompute_margin(&refs, &cert.alphas)?;
            if margin < -FEASIBILITY_TOL {
                return Err(Error::Verification(format!(
                    "coefficients are infeasible: margin {margin}"
                )));
            }
            check(cert.feasibility_margin, margin, "feasibility margin")?;
        }
        Certificate::Formation(cert) => {
            let m = measurement(0)?;
            let recomputed = (cert.alpha1 * m.c - cert.conjugate_upper).max(0.0);
            check(row.result.bound, recomputed, "formation bound")?;
        }
        Certificate::Concurrence(cert) => match cert.method.as_str() {
            "conjugate-dual" => {
                let m = measurement(0)?;
                let alpha1 = cert.alpha1.ok_or_else(|| {
                    Error::Verification("conjugate-dual certificate without alpha1".into())
                })?;
                let upper = cert.conjugate_upper.ok_or_else(|| {
                    Error::Verification("conjugate-dual certificate without its bracket".into())
                })?;
                check(
                    row.result.bound,
                    (alpha1 * m.c - upper).max(0.0),
                    "concurrence bound",
                )?;
                if alpha1 != 0.0 {
                    let b = dual_coefficients(cert)?;
                    let w = witness(0)?;
                    let recomputed = dual_bracket_value(&w.op.scaled(alpha1), &b)?;
                    check(upper, recomputed, "conjugate bracket")?;
                }
            }
            "restricted-form" => {
                let m = measurement(0)?;
                check(row.result.bound, (-m.c).max(0.0), "concurrence bound")?;
            }
            other => {
                return Err(Error::Verification(format!(
                    "unknown concurrence method '{other}'"
                )))
            }
        },
        Certificate::Robustness(cert) => {
            let m = measurement(0)?;
            check(cert.c, m.c, "echoed expectation value")?;
            let scale = match cert.kind {
                RobustnessKind::Generalized => 1.0 / cert.denominator,
                RobustnessKind::Random => cert.dimension as f64 / cert.denominator,
            };
            if cert.denominator <= 0.0 {
                return Err(Error::Verification(format!(
                    "certificate denominator {} is not positive",
                    cert.denominator
                )));
            }
            let recomputed = (-m.c).max(0.0) * scale;
            check(row.result.bound, recomputed, "robustness bound")?;
            check(cert.value, recomputed, "certificate echo")?;
            let w = witness(0)?;
            let denominator = match cert.kind {
                RobustnessKind::Generalized => crate::operator::lambda_max(&w.op),
                RobustnessKind::Random => w.op.trace(),
            };
            check(cert.denominator, denominator, "witness normalization")?;
        }
        Certificate::SymmetricFamily(cert) => {
            let rho = symmetric_family_state(cert.lambda)?;
            let recomputed = wootters_concurrence(&rho)?;
            check(cert.concurrence, recomputed, "family concurrence")?;
            check(
                row.result.bound,
                ef_from_concurrence(cert.concurrence)?,
                "formation bound",
            )?;
        }
    }
    Ok(())
}

fn dual_coefficients(cert: &crate::bound::ConcurrenceCertificate) -> Result<[Complex64; 4]> {
    let mut b = [Complex64::new(0.0, 0.0); 4];
    for (k, slot) in b.iter_mut().enumerate() {
        let re = cert.detail.get(&format!("dual_b{k}_re"));
        let im = cert.detail.get(&format!("dual_b{k}_im"));
        match (re, im) {
            (Some(&re), Some(&im)) => *slot = Complex64::new(re, im),
            _ => {
                return Err(Error::Verification(
                    "conjugate-dual certificate without its dual coefficients".into(),
                ))
            }
        }
    }
    Ok(b)
}

/// Measures a witness against a state file, optionally adding seeded
/// gaussian noise; the record is reproducible from (inputs, seed).
pub fn simulate_measurement(
    state: &Path,
    witness_ref: &str,
    noise_sigma: f64,
    seed: u64,
) -> Result<MeasurementRecord> {
    if !(noise_sigma >= 0.0) {
        return Err(Error::BadInput(format!(
            "noise level must be a nonnegative number, got {noise_sigma}"
        )));
    }
    let rho = formats::load_state(state)?;
    let w = formats::resolve_witness(witness_ref, state.parent())?;
    let mut c = expectation(&w.op, &rho)?;
    if noise_sigma > 0.0 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let normal = rand_distr::Normal::new(0.0, noise_sigma)
            .map_err(|e| Error::BadInput(format!("noise level: {e}")))?;
        c += normal.sample(&mut rng);
    }
    Ok(MeasurementRecord {
        witness: Some(witness_ref.to_string()),
        c,
        sigma: noise_sigma,
        label: Some(format!("simulated(seed={seed}, noise={noise_sigma})")),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::io::Write;

    fn write_file(dir: &Path, name: &str, text: &str) -> PathBuf {
        let path = dir.join(name);
        let mut f = std::fs::File::create(&path).unwrap();
        f.write_all(text.as_bytes()).unwrap();
        path
    }

    fn two_witness_config(dir: &Path) -> ReportConfig {
        let data = write_file(
            dir,
            "joint.toml",
            "[[measurement]]\nwitness = \"ppt-pair-a\"\nc = -0.3333333333333333\nsigma = 0.0\n\
             label = \"first\"\n\n\
             [[measurement]]\nwitness = \"ppt-pair-b\"\nc = -0.16666666666666666\nsigma = 0.0\n\
             label = \"second\"\n",
        );
        ReportConfig::new(data, vec![Measure::Negativity])
    }

    #[test]
    fn joint_negativity_report_reproduces_two_witness_value() {
        let dir = tempfile::tempdir().unwrap();
        let report = run_report(&two_witness_config(dir.path())).unwrap();
        assert_eq!(report.rows.len(), 1);
        let row = &report.rows[0];
        assert_eq!(row.label, "joint");
        assert!(
            (row.result.bound - 0.7375).abs() < 1e-3,
            "joint bound {}",
            row.result.bound
        );
        verify_report(&report, None).unwrap();
    }

    #[test]
    fn reports_are_byte_identical_across_runs() {
        let dir = tempfile::tempdir().unwrap();
        let config = two_witness_config(dir.path());
        let a = run_report(&config).unwrap().to_json();
        let b = run_report(&config).unwrap().to_json();
        assert_eq!(a, b);
        let reparsed = CertificationReport::from_json(&a).unwrap();
        assert_eq!(reparsed.to_json(), a);
    }

    #[test]
    fn robustness_rows_carry_the_known_discrepancy_flags() {
        let dir = tempfile::tempdir().unwrap();
        let data = write_file(
            dir.path(),
            "photonic.toml",
            "[[measurement]]\nwitness = \"w3\"\nc = -0.197\nsigma = 0.018\nlabel = \"w state\"\n\n\
             [[measurement]]\nwitness = \"cluster4\"\nc = -0.299\nsigma = 0.050\nlabel = \"cluster\"\n",
        );
        let config = ReportConfig::new(
            data,
            vec![Measure::RobustnessGen, Measure::RobustnessRand],
        );
        let report = run_report(&config).unwrap();
        assert_eq!(report.rows.len(), 4);
        let random_cluster = report
            .rows
            .iter()
            .find(|r| r.label == "cluster" && r.result.measure == "random-robustness")
            .unwrap();
        assert!(random_cluster
            .result
            .notes
            .iter()
            .any(|n| n.contains("0.1120") && n.contains("0.1495")));
        let random_w = report
            .rows
            .iter()
            .find(|r| r.label == "w state" && r.result.measure == "random-robustness")
            .unwrap();
        assert!(random_w.result.notes.iter().any(|n| n.contains("0.096")));
        verify_report(&report, None).unwrap();
    }

    #[test]
    fn tampered_reports_fail_verification() {
        let dir = tempfile::tempdir().unwrap();
        let mut report = run_report(&two_witness_config(dir.path())).unwrap();
        report.rows[0].result.bound += 1e-6;
        match verify_report(&report, None) {
            Err(Error::Verification(msg)) => assert!(msg.contains("joint")),
            other => panic!("tampering went unnoticed: {other:?}"),
        }
    }

    #[test]
    fn empty_measurement_lists_are_rejected() {
        let dir = tempfile::tempdir().unwrap();
        let data = write_file(dir.path(), "empty.toml", "");
        let config = ReportConfig::new(data, vec![Measure::Negativity]);
        assert!(run_report(&config).is_err());
    }

    #[test]
    fn simulation_is_seeded_and_exact_at_zero_noise() {
        let dir = tempfile::tempdir().unwrap();
        let r = 0.5f64.sqrt();
        let state = write_file(
            dir.path(),
            "psi_plus.toml",
            &format!(
                "dims = [2, 2]\nsplit = [0]\nvector = [[0.0, 0.0], [{r}, 0.0], [{r}, 0.0], [0.0, 0.0]]\n"
            ),
        );
        let exact = simulate_measurement(&state, "bell-ppt", 0.0, 1).unwrap();
        assert!(
            (exact.c - (-0.5)).abs() < 1e-12,
            "psi+ against bell-ppt gave {}",
            exact.c
        );
        assert_eq!(exact.sigma, 0.0);

        let a = simulate_measurement(&state, "bell-ppt", 0.05, 42).unwrap();
        let b = simulate_measurement(&state, "bell-ppt", 0.05, 42).unwrap();
        assert_eq!(a.c, b.c);
        let c = simulate_measurement(&state, "bell-ppt", 0.05, 43).unwrap();
        assert_ne!(a.c, c.c);
        assert!((a.c - (-0.5)).abs() < 0.5, "noise blew up: {}", a.c);
    }

    #[test]
    fn fallback_witnesses_cover_anonymous_records() {
        let dir = tempfile::tempdir().unwrap();
        let data = write_file(
            dir.path(),
            "anon.toml",
            "[[measurement]]\nc = -0.5\nsigma = 0.0\n",
        );
        let mut config = ReportConfig::new(data, vec![Measure::Negativity]);
        let report_err = run_report(&config);
        assert!(report_err.is_err(), "no witness anywhere should fail");
        config.witnesses.push("bell-ppt".into());
        let report = run_report(&config).unwrap();
        assert!((report.rows[0].result.bound - 1.0).abs() < 1e-4);
    }
}
