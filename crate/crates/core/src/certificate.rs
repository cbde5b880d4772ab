//! Checking and deriving nonnegative combinations that push the
//! three-colored-vertex indicator below zero on every level-5 class.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use num_traits::{Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::basis::Basis;
use crate::candidates::{all_square_kinds, build_w3, inequality_kinds, CandidateKind, SquareName};
use crate::epsilon::{admissible_interpretations, Interpretation};
use crate::error::CertificateError;
use crate::json::{parse_rational, RationalJson};
use crate::lp::{check_farkas, check_solution, solve_feasibility, LpOutcome};
use crate::vector::RationalVector;
use crate::Rational;

/// The fourteen published multipliers, in their printed order.
pub const PUBLISHED_COEFFICIENTS: [(&str, &str); 14] = [
    ("23457815885978657985", "1029505785512512"),
    ("134730108347752975", "4596007971038"),
    ("134730108347752975", "4596007971038"),
    ("15852088219609163945", "514752892756256"),
    ("196791037567187109905", "12354069426150144"),
    ("33245823856447882025", "24708138852300288"),
    ("3956624143678293415", "772129339134384"),
    ("30762195734543710715", "772129339134384"),
    ("20816545085118359705", "4118023142050048"),
    ("74313622711306287405", "2059011571025024"),
    ("48968798259015", "514752892756256"),
    ("39315342699665", "6177034713075072"),
    ("15977347300925119", "32944185136400384"),
    ("8880723226482731", "24708138852300288"),
];

pub fn published_coefficients() -> Vec<Rational> {
    PUBLISHED_COEFFICIENTS.iter().map(|(n, d)| parse_rational(n, d).expect("valid constant")).collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    /// Every slack entry is nonnegative.
    Valid,
    /// Some slack entry is negative.
    Invalid,
    /// No nonnegative combination of the candidates works; a separating
    /// weighting is attached.
    Infeasible,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CertificateReport {
    pub interpretation: String,
    pub candidates: Vec<CandidateKind>,
    pub coefficients: Vec<Rational>,
    /// `-(w3 + w0)`, one entry per level-5 class.
    pub slack: RationalVector,
    pub verdict: Verdict,
    /// For infeasible reports: a nonnegative class weighting that is
    /// nonnegative on every candidate and positive on the target.
    pub witness: Option<RationalVector>,
}

impl CertificateReport {
    /// Smallest slack entry and its class index.
    pub fn min_slack(&self) -> (usize, Rational) {
        let (i, v) = self.slack.min_entry();
        (i, v.clone())
    }

    pub fn is_valid(&self) -> bool {
        self.verdict == Verdict::Valid
    }

    pub fn to_json(&self) -> ReportJson {
        let top = Basis::top();
        let entries = |v: &RationalVector| -> Vec<SlackJson> {
            v.coeffs()
                .iter()
                .enumerate()
                .map(|(i, r)| SlackJson {
                    class_key: top.key(i).to_hex(),
                    num: r.numer().to_string(),
                    den: r.denom().to_string(),
                })
                .collect()
        };
        ReportJson {
            interpretation: self.interpretation.clone(),
            candidates: self
                .candidates
                .iter()
                .map(|k| CandidateJson { kind: k.kind_str().to_string(), key: k.key() })
                .collect(),
            coefficients: self.coefficients.iter().map(RationalJson::from).collect(),
            slack: entries(&self.slack),
            verdict: self.verdict,
            witness: self.witness.as_ref().map(|w| entries(w).into_iter().filter(|e| e.num != "0").collect()),
        }
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string_pretty(&self.to_json()).expect("report serializes")
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CandidateJson {
    pub kind: String,
    pub key: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SlackJson {
    #[serde(rename = "classKey")]
    pub class_key: String,
    pub num: String,
    pub den: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReportJson {
    pub interpretation: String,
    pub candidates: Vec<CandidateJson>,
    pub coefficients: Vec<RationalJson>,
    pub slack: Vec<SlackJson>,
    pub verdict: Verdict,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub witness: Option<Vec<SlackJson>>,
}

fn class_vector(entries: &[SlackJson]) -> Result<RationalVector, CertificateError> {
    let top = Basis::top();
    let mut v = RationalVector::zeros();
    for e in entries {
        let key = crate::canon::CanonicalForm::from_hex(&e.class_key)
            .map_err(|_| CertificateError::UnknownCandidate(e.class_key.clone()))?;
        let i = top.index_of_key(&key).ok_or_else(|| CertificateError::UnknownCandidate(e.class_key.clone()))?;
        v.set(i, parse_rational(&e.num, &e.den)?);
    }
    Ok(v)
}

impl ReportJson {
    pub fn to_report(&self) -> Result<CertificateReport, CertificateError> {
        Ok(CertificateReport {
            interpretation: self.interpretation.clone(),
            candidates: self.candidates.iter().map(|c| CandidateKind::parse_key(&c.key)).collect::<Result<_, _>>()?,
            coefficients: self.coefficients.iter().map(RationalJson::to_rational).collect::<Result<_, _>>()?,
            slack: class_vector(&self.slack)?,
            verdict: self.verdict,
            witness: self.witness.as_deref().map(class_vector).transpose()?,
        })
    }

    pub fn parse(text: &str) -> Result<CertificateReport, CertificateError> {
        serde_json::from_str::<ReportJson>(text)?.to_report()
    }
}

/// Level-5 expansion of a candidate, memoized across calls.
pub fn candidate_vector(kind: &CandidateKind) -> Result<Arc<RationalVector>, CertificateError> {
    static CACHE: OnceLock<Mutex<HashMap<CandidateKind, Arc<RationalVector>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    if let Some(v) = cache.lock().expect("cache lock").get(kind) {
        return Ok(v.clone());
    }
    let v = Arc::new(kind.build()?.vector);
    cache.lock().expect("cache lock").insert(kind.clone(), v.clone());
    Ok(v)
}

fn candidate_vectors(kinds: &[CandidateKind]) -> Result<Vec<Arc<RationalVector>>, CertificateError> {
    kinds.par_iter().map(candidate_vector).collect()
}

fn w3() -> &'static RationalVector {
    static W3: OnceLock<RationalVector> = OnceLock::new();
    W3.get_or_init(build_w3)
}

/// `w3 + sum_j coeffs[j] * vectors[j]`.
fn combine(target: &RationalVector, vectors: &[Arc<RationalVector>], coeffs: &[Rational]) -> RationalVector {
    let mut total = target.clone();
    for (v, c) in vectors.iter().zip(coeffs) {
        total.add_scaled(c, v);
    }
    total
}

/// Pairs the given multipliers with candidates and checks `w3 + w0 <= 0`.
pub fn verify_certificate(
    coeffs: &[Rational],
    kinds: &[CandidateKind],
    interpretation: &str,
) -> Result<CertificateReport, CertificateError> {
    if coeffs.len() != kinds.len() {
        return Err(CertificateError::LengthMismatch { coefficients: coeffs.len(), candidates: kinds.len() });
    }
    if let Some(index) = coeffs.iter().position(Signed::is_negative) {
        return Err(CertificateError::NegativeCoefficient { index });
    }
    let vectors = candidate_vectors(kinds)?;
    let slack = -&combine(w3(), &vectors, coeffs);
    let verdict = if slack.is_nonnegative() { Verdict::Valid } else { Verdict::Invalid };
    Ok(CertificateReport {
        interpretation: interpretation.to_string(),
        candidates: kinds.to_vec(),
        coefficients: coeffs.to_vec(),
        slack,
        verdict,
        witness: None,
    })
}

/// Recomputes a report from its candidates and coefficients. For infeasible
/// reports the attached weighting is re-checked against every candidate.
pub fn recheck_report(report: &CertificateReport) -> Result<CertificateReport, CertificateError> {
    if report.coefficients.len() != report.candidates.len() {
        return Err(CertificateError::LengthMismatch {
            coefficients: report.coefficients.len(),
            candidates: report.candidates.len(),
        });
    }
    if let Some(index) = report.coefficients.iter().position(Signed::is_negative) {
        return Err(CertificateError::NegativeCoefficient { index });
    }
    match report.verdict {
        Verdict::Infeasible => {
            let witness = report.witness.as_ref().ok_or(CertificateError::Infeasible)?;
            let vectors = candidate_vectors(&report.candidates)?;
            let (a, b) = lp_system(w3(), &vectors);
            let ok = check_farkas(&a, &b, witness.coeffs());
            let mut out = report.clone();
            out.slack = -w3();
            out.coefficients = vec![Rational::zero(); report.candidates.len()];
            out.verdict = if ok { Verdict::Infeasible } else { Verdict::Invalid };
            Ok(out)
        }
        _ => verify_certificate(&report.coefficients, &report.candidates, &report.interpretation),
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub struct DeriveOptions {
    /// Drop every square candidate.
    pub exclude_squares: bool,
    /// Add 1 to every entry of the target before solving.
    pub shift_target: bool,
}

/// Rows are classes, columns are candidates; `b = -target`.
fn lp_system(target: &RationalVector, vectors: &[Arc<RationalVector>]) -> (Vec<Vec<Rational>>, Vec<Rational>) {
    let rows = target.len();
    let a = (0..rows).map(|h| vectors.iter().map(|v| v[h].clone()).collect()).collect();
    let b = target.coeffs().iter().map(|c| -c).collect();
    (a, b)
}

/// Candidate list for an interpretation: its inequalities, then every square placement.
pub fn interpretation_candidates(interp: &Interpretation, opts: DeriveOptions) -> Vec<CandidateKind> {
    let mut kinds = inequality_kinds(interp);
    if !opts.exclude_squares {
        kinds.extend(all_square_kinds());
    }
    kinds
}

/// Candidate list pooling the inequalities of every interpretation.
pub fn pooled_candidates(opts: DeriveOptions) -> Vec<CandidateKind> {
    let mut kinds: Vec<CandidateKind> = admissible_interpretations().iter().flat_map(inequality_kinds).collect();
    kinds.sort();
    kinds.dedup();
    if !opts.exclude_squares {
        kinds.extend(all_square_kinds());
    }
    kinds
}

/// Solves the exact feasibility LP over the given candidates.
pub fn derive_from_candidates(
    kinds: &[CandidateKind],
    interpretation: &str,
    opts: DeriveOptions,
) -> Result<CertificateReport, CertificateError> {
    derive_with_hint(kinds, interpretation, opts, None)
}

fn target(opts: DeriveOptions) -> RationalVector {
    if opts.shift_target {
        w3() + &RationalVector::ones()
    } else {
        w3().clone()
    }
}

fn infeasible_report(
    kinds: &[CandidateKind],
    interpretation: &str,
    target: &RationalVector,
    y: Vec<Rational>,
) -> CertificateReport {
    CertificateReport {
        interpretation: interpretation.to_string(),
        candidates: kinds.to_vec(),
        coefficients: vec![Rational::zero(); kinds.len()],
        slack: -target,
        verdict: Verdict::Infeasible,
        witness: Some(RationalVector::from_coeffs(y).expect("one weight per class")),
    }
}

/// Like [`derive_from_candidates`], but first tries `hint` as a separating
/// weighting; the LP is only solved when the hint does not apply.
fn derive_with_hint(
    kinds: &[CandidateKind],
    interpretation: &str,
    opts: DeriveOptions,
    hint: Option<&RationalVector>,
) -> Result<CertificateReport, CertificateError> {
    let vectors = candidate_vectors(kinds)?;
    let target = target(opts);
    let (a, b) = lp_system(&target, &vectors);
    if let Some(y) = hint {
        if check_farkas(&a, &b, y.coeffs()) {
            return Ok(infeasible_report(kinds, interpretation, &target, y.coeffs().to_vec()));
        }
    }
    match solve_feasibility(&a, &b) {
        LpOutcome::Feasible(x) => {
            debug_assert!(check_solution(&a, &b, &x));
            let slack = -&combine(&target, &vectors, &x);
            let verdict = if slack.is_nonnegative() { Verdict::Valid } else { Verdict::Invalid };
            Ok(CertificateReport {
                interpretation: interpretation.to_string(),
                candidates: kinds.to_vec(),
                coefficients: x,
                slack,
                verdict,
                witness: None,
            })
        }
        LpOutcome::Infeasible(y) => {
            if !check_farkas(&a, &b, &y) {
                return Err(CertificateError::Infeasible);
            }
            Ok(infeasible_report(kinds, interpretation, &target, y))
        }
    }
}

pub fn derive_certificate(interp: &Interpretation, opts: DeriveOptions) -> Result<CertificateReport, CertificateError> {
    derive_from_candidates(&interpretation_candidates(interp, opts), &interp.id(), opts)
}

/// [`derive_certificate`] under every admissible interpretation, in order.
///
/// The pooled system is solved first. Every interpretation uses a subset of
/// its columns, so a separating weighting for the pool settles each of them
/// with a single exact check.
pub fn derive_all(opts: DeriveOptions) -> Result<Vec<CertificateReport>, CertificateError> {
    let pooled = derive_pooled(opts)?;
    admissible_interpretations()
        .par_iter()
        .map(|i| derive_with_hint(&interpretation_candidates(i, opts), &i.id(), opts, pooled.witness.as_ref()))
        .collect()
}

pub const POOLED_INTERPRETATION: &str = "pooled";

/// Solves the pooled system once per option set and caches the report.
pub fn derive_pooled(opts: DeriveOptions) -> Result<CertificateReport, CertificateError> {
    static CACHE: OnceLock<Mutex<HashMap<DeriveOptions, CertificateReport>>> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    if let Some(r) = cache.lock().expect("cache lock").get(&opts) {
        return Ok(r.clone());
    }
    let report = derive_from_candidates(&pooled_candidates(opts), POOLED_INTERPRETATION, opts)?;
    cache.lock().expect("cache lock").insert(opts, report.clone());
    Ok(report)
}

/// Outcome of matching the published multipliers to candidates.
#[derive(Clone, Debug)]
pub struct AssignmentSearch {
    /// Number of assignments evaluated.
    pub tried: usize,
    /// The assignment with the largest minimum slack, re-checked exactly.
    pub best: CertificateReport,
    /// Set when the whole candidate pool admits no certificate at all, so
    /// that no assignment of nonnegative multipliers can validate.
    pub ruled_out_by: Option<CertificateReport>,
}

/// Assigns the ten large published multipliers to ten inequalities (order
/// preserving, over both type-major and color-major orderings) and the four
/// small ones to `wB, wB', wC, wC'` on every pair of labeled triangles.
/// The search is screened in floating point; the best hit is checked exactly.
pub fn search_published_assignment(interp: &Interpretation) -> Result<AssignmentSearch, CertificateError> {
    let coeffs = published_coefficients();
    let ineq = inequality_kinds(interp);
    let mut color_major = ineq.clone();
    color_major.sort_by_key(|k| match k {
        CandidateKind::Inequality { color, .. } => *color,
        CandidateKind::Square { .. } => 0,
    });
    let orders = if color_major == ineq { vec![ineq.clone()] } else { vec![ineq.clone(), color_major] };

    let w3f = w3().to_f64();
    let cf: Vec<f64> = coeffs.iter().map(|c| c.to_f64().unwrap_or(f64::NAN)).collect();
    let ineq_f: HashMap<CandidateKind, Vec<f64>> =
        ineq.iter().map(|k| Ok((k.clone(), candidate_vector(k)?.to_f64()))).collect::<Result<_, CertificateError>>()?;
    let b_labs = SquareName::WB.labelings();
    let c_labs = SquareName::WC.labelings();
    let sq =
        |name: SquareName, sigma: &crate::graph::TricoloredGraph| CandidateKind::Square { name, sigma: sigma.clone() };

    let mut square_parts: Vec<(Vec<CandidateKind>, Vec<f64>)> = Vec::new();
    for b in &b_labs {
        for c in &c_labs {
            let kinds = vec![
                sq(SquareName::WB, b),
                sq(SquareName::WBPrime, b),
                sq(SquareName::WC, c),
                sq(SquareName::WCPrime, c),
            ];
            let mut acc = vec![0.0; w3f.len()];
            for (k, coef) in kinds.iter().zip(&cf[10..]) {
                for (a, x) in acc.iter_mut().zip(candidate_vector(k)?.to_f64().iter()) {
                    *a += coef * x;
                }
            }
            square_parts.push((kinds, acc));
        }
    }

    let mut tried = 0usize;
    let mut best: Option<(f64, Vec<CandidateKind>)> = None;
    for order in &orders {
        for subset in itertools::Itertools::combinations(0..order.len(), 10) {
            let mut base = w3f.clone();
            for (slot, &j) in subset.iter().enumerate() {
                for (a, x) in base.iter_mut().zip(&ineq_f[&order[j]]) {
                    *a += cf[slot] * x;
                }
            }
            for (kinds, part) in &square_parts {
                tried += 1;
                let worst = base.iter().zip(part).map(|(a, b)| -(a + b)).fold(f64::INFINITY, f64::min);
                if best.as_ref().is_none_or(|(w, _)| worst > *w) {
                    let mut all: Vec<CandidateKind> = subset.iter().map(|&j| order[j].clone()).collect();
                    all.extend(kinds.iter().cloned());
                    best = Some((worst, all));
                }
            }
        }
    }
    let (_, kinds) = best.expect("at least one assignment");
    let best = verify_certificate(&coeffs, &kinds, &interp.id())?;
    let opts = DeriveOptions::default();
    let pooled = derive_pooled(opts)?;
    let pool = derive_with_hint(&interpretation_candidates(interp, opts), &interp.id(), opts, pooled.witness.as_ref())?;
    let ruled_out_by = (pool.verdict == Verdict::Infeasible).then_some(pool);
    Ok(AssignmentSearch { tried, best, ruled_out_by })
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    fn ratio(num: i64, den: i64) -> Rational {
        Rational::new(BigInt::from(num), BigInt::from(den))
    }

    #[test]
    fn published_constants_parse_and_are_positive() {
        let c = published_coefficients();
        assert_eq!(c.len(), 14);
        assert!(c.iter().all(Signed::is_positive));
        assert_eq!(c[1], c[2]);
    }

    #[test]
    fn zero_multipliers_are_invalid() {
        let interp = &admissible_interpretations()[0];
        let kinds = inequality_kinds(interp);
        let report = verify_certificate(&vec![Rational::zero(); kinds.len()], &kinds, &interp.id()).unwrap();
        assert_eq!(report.verdict, Verdict::Invalid);
        assert_eq!(report.slack, -w3());
    }

    #[test]
    fn negative_multiplier_rejected() {
        let interp = &admissible_interpretations()[0];
        let kinds = inequality_kinds(interp);
        let mut c = vec![Rational::zero(); kinds.len()];
        c[3] = ratio(-1, 2);
        assert!(matches!(verify_certificate(&c, &kinds, "x"), Err(CertificateError::NegativeCoefficient { index: 3 })));
        assert!(matches!(verify_certificate(&c[..2], &kinds, "x"), Err(CertificateError::LengthMismatch { .. })));
    }

    #[test]
    fn inadmissible_candidate_rejected() {
        let kinds = vec![CandidateKind::Inequality { sigma: "123111".parse().unwrap(), color: 2 }];
        assert!(matches!(verify_certificate(&[ratio(1, 1)], &kinds, "x"), Err(CertificateError::Inadmissible(_))));
    }

    #[test]
    fn report_json_round_trip() {
        let interp = &admissible_interpretations()[0];
        let kinds = inequality_kinds(interp);
        let coeffs: Vec<Rational> = (0..kinds.len()).map(|i| ratio(i as i64, 7)).collect();
        let report = verify_certificate(&coeffs, &kinds, &interp.id()).unwrap();
        let back = ReportJson::parse(&report.to_json_string()).unwrap();
        assert_eq!(back, report);
        assert_eq!(recheck_report(&back).unwrap(), report);
    }

    #[test]
    fn shifted_target_is_infeasible() {
        let interp = &admissible_interpretations()[0];
        let opts = DeriveOptions { exclude_squares: true, shift_target: true };
        let report = derive_certificate(interp, opts).unwrap();
        assert_eq!(report.verdict, Verdict::Infeasible);
    }
}
