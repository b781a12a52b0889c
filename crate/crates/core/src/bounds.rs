//! Closed-form bounds on `(λ₁ + λₙ)/n` in terms of the odd girth, and
//! per-graph certificates that replay the inequality chains behind them.

use serde::Serialize;

use crate::error::{require_odd_k, Error, Result};
use crate::graph::{odd_girth, Graph, OddGirth};
use crate::numeric::{compensated_sum, le_with_tol};
use crate::odd_poly::{chebyshev_t, high_lambda1_polynomial, threshold_partition};
use crate::spectral::{self, bipartiteness_measure, eigenvalues, Spectrum};

/// Smallest `k` for which the broad-spectrum, high-`λ₁` and main bounds
/// are asserted.
pub const PROPOSITION_MIN_K: usize = 100;

/// Relative slack used in every comparison.
pub const REL_TOL: f64 = 1e-12;
/// Absolute slack on measure-vs-bound comparisons, matching the
/// eigensolver's accuracy.
pub const MEASURE_TOL: f64 = 1e-9;
/// A spectrum sum `∑ p(λᵢ)` counts as zero when it is within this fraction
/// of `∑ |p(λᵢ)|`.
pub const SUM_ZERO_TOL: f64 = 1e-6;

/// `3 − 2√2`, the earlier upper bound for triangle-free graphs.
pub fn csikvari_bound() -> f64 {
    3.0 - 2.0 * std::f64::consts::SQRT_2
}

/// `(1 − 14^{-1/3}) / (1 + 14^{1/3})`.
pub fn gamma5_prime_value() -> f64 {
    let c = 14f64.cbrt();
    (1.0 - 1.0 / c) / (1.0 + c)
}

/// Known bound on `qₙ/n` for triangle-free graphs, exposed for comparison.
pub fn balogh_constant() -> f64 {
    0.1547
}

/// `(2/k)(1 − cos(π/k))`, the measure of the odd cycle `C_k`.
pub fn cycle_lower_bound(k: usize) -> Result<f64> {
    require_odd_k(k, 3)?;
    let kf = k as f64;
    Ok(2.0 / kf * (1.0 - (std::f64::consts::PI / kf).cos()))
}

fn require_proposition_k(k: usize) -> Result<()> {
    if k.is_multiple_of(2) || k < PROPOSITION_MIN_K {
        return Err(Error::Precondition(format!(
            "k must be odd and >= {PROPOSITION_MIN_K}, got {k}"
        )));
    }
    Ok(())
}

/// `n / k³`: lower edge of the broad-spectrum regime.
pub fn broad_spectrum_threshold(k: usize, n: usize) -> f64 {
    n as f64 / (k as f64).powi(3)
}

/// `16n / k`: lower edge of the high-`λ₁` regime.
pub fn high_lambda1_threshold(k: usize, n: usize) -> f64 {
    16.0 * n as f64 / k as f64
}

/// `100 · n · log k / k`: where the main argument switches from the
/// broad-spectrum bound to the high-`λ₁` bound.
pub fn main_case_threshold(k: usize, n: usize) -> f64 {
    let kf = k as f64;
    100.0 * kf.ln() / kf * n as f64
}

/// `(4/k²) · (λ₁/n) · log²(2n/λ₁)`, valid for odd `k ≥ 100` and
/// `λ₁ ≥ n/k³`.
pub fn broad_spectrum_bound(k: usize, lambda1: f64, n: usize) -> Result<f64> {
    require_proposition_k(k)?;
    if n == 0 {
        return Err(Error::Precondition("n must be positive".into()));
    }
    if !(lambda1 >= broad_spectrum_threshold(k, n)) {
        return Err(Error::Precondition(format!(
            "broad-spectrum bound needs λ₁ >= n/k³ = {}, got λ₁ = {lambda1}",
            broad_spectrum_threshold(k, n)
        )));
    }
    let kf = k as f64;
    let ratio = lambda1 / n as f64;
    Ok(4.0 / (kf * kf) * ratio * (2.0 / ratio).ln().powi(2))
}

/// `4 · 2^{−kλ₁/(16n)}`, valid for odd `k ≥ 100` and `λ₁ ≥ 16n/k`.
pub fn high_lambda1_bound(k: usize, lambda1: f64, n: usize) -> Result<f64> {
    require_proposition_k(k)?;
    if n == 0 {
        return Err(Error::Precondition("n must be positive".into()));
    }
    if !(lambda1 >= high_lambda1_threshold(k, n)) {
        return Err(Error::Precondition(format!(
            "high-λ₁ bound needs λ₁ >= 16n/k = {}, got λ₁ = {lambda1}",
            high_lambda1_threshold(k, n)
        )));
    }
    Ok(4.0 * 2f64.powf(-(k as f64) * lambda1 / (16.0 * n as f64)))
}

/// `6400 · k^{−3} · log³ k` for odd `k ≥ 100`.
pub fn main_bound(k: usize) -> Result<f64> {
    require_proposition_k(k)?;
    let kf = k as f64;
    Ok(6400.0 * kf.powi(-3) * kf.ln().powi(3))
}

/// Which of the three `λ₁` ranges of the main argument a graph falls in.
/// Intervals are closed below: `λ₁ = n/k³` is `BroadSpectrum`, and
/// `λ₁ = 100n·log k/k` is `HighLambda1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum MainCase {
    /// `λ₁ < n/k³`; the measure is at most `λ₁/n < k⁻³`.
    SmallLambda1,
    /// `n/k³ ≤ λ₁ < 100n·log k/k`.
    BroadSpectrum,
    /// `λ₁ ≥ 100n·log k/k`.
    HighLambda1,
}

pub fn classify_main_case(k: usize, lambda1: f64, n: usize) -> MainCase {
    if lambda1 < broad_spectrum_threshold(k, n) {
        MainCase::SmallLambda1
    } else if lambda1 < main_case_threshold(k, n) {
        MainCase::BroadSpectrum
    } else {
        MainCase::HighLambda1
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundEntry {
    pub name: String,
    pub value: f64,
    pub satisfied: bool,
    /// `value − measure`
    pub slack: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ChainCheck {
    pub description: String,
    pub left: f64,
    pub relation: String,
    pub right: f64,
    pub satisfied: bool,
}

impl ChainCheck {
    fn le(description: impl Into<String>, left: f64, right: f64) -> Self {
        ChainCheck {
            description: description.into(),
            left,
            relation: "<=".into(),
            right,
            satisfied: le_with_tol(left, right, REL_TOL, 0.0),
        }
    }

    fn lt(description: impl Into<String>, left: f64, right: f64) -> Self {
        ChainCheck {
            description: description.into(),
            left,
            relation: "<".into(),
            right,
            satisfied: left < right + REL_TOL * left.abs().max(right.abs()).max(1.0),
        }
    }

    /// `left ≈ 0` relative to `scale`.
    fn vanishes(description: impl Into<String>, left: f64, scale: f64) -> Self {
        ChainCheck {
            description: description.into(),
            left,
            relation: "~=".into(),
            right: 0.0,
            satisfied: left.abs() <= SUM_ZERO_TOL * scale.max(1e-300),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CertificateReport {
    pub graph_id: String,
    pub n: usize,
    pub k: usize,
    pub odd_girth: OddGirth,
    pub lambda1: f64,
    pub lambda_n: f64,
    pub measure: f64,
    /// Set when `λₙ = 0`, i.e. the graph has no edges.
    pub trivial: bool,
    pub main_case: Option<MainCase>,
    pub applicable_bounds: Vec<BoundEntry>,
    pub chain_checks: Vec<ChainCheck>,
    pub notes: Vec<String>,
    pub passed: bool,
}

pub const CSV_HEADER: &str =
    "graph_id,n,k,odd_girth,lambda1,lambda_n,measure,tightest_bound,tightest_value,slack,passed";

impl CertificateReport {
    /// The applicable bound with the smallest value.
    pub fn tightest_bound(&self) -> Option<&BoundEntry> {
        self.applicable_bounds
            .iter()
            .min_by(|a, b| a.value.total_cmp(&b.value))
    }

    /// One row matching [`CSV_HEADER`].
    pub fn csv_row(&self) -> String {
        let (name, value, slack) = match self.tightest_bound() {
            Some(b) => (
                b.name.clone(),
                format!("{:.17e}", b.value),
                format!("{:.17e}", b.slack),
            ),
            None => (String::new(), String::new(), String::new()),
        };
        format!(
            "{},{},{},{},{:.17e},{:.17e},{:.17e},{},{},{},{}",
            csv_field(&self.graph_id),
            self.n,
            self.k,
            self.odd_girth,
            self.lambda1,
            self.lambda_n,
            self.measure,
            name,
            value,
            slack,
            self.passed
        )
    }
}

/// Quotes a CSV field when it contains a delimiter, quote or newline.
pub fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n', '\r']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

/// Upper bounds on the measure that hold for a graph on `n` vertices with
/// odd girth at least `k` and largest eigenvalue `lambda1`.
pub fn applicable_bounds(k: usize, lambda1: f64, n: usize) -> Vec<(String, f64)> {
    let mut out = Vec::new();
    if k >= 5 {
        out.push(("gamma5_prime".to_string(), gamma5_prime_value()));
        out.push(("csikvari".to_string(), csikvari_bound()));
    }
    if k >= PROPOSITION_MIN_K && k % 2 == 1 && n > 0 {
        let kf = k as f64;
        if let Ok(b) = main_bound(k) {
            out.push(("main".to_string(), b));
        }
        if let Ok(b) = broad_spectrum_bound(k, lambda1, n) {
            out.push(("broad_spectrum".to_string(), b));
        }
        if let Ok(b) = high_lambda1_bound(k, lambda1, n) {
            out.push(("high_lambda1".to_string(), b));
        }
        match classify_main_case(k, lambda1, n) {
            MainCase::SmallLambda1 => out.push(("small_lambda1_case".to_string(), kf.powi(-3))),
            MainCase::BroadSpectrum => {}
            MainCase::HighLambda1 => out.push(("high_lambda1_case".to_string(), 4.0 * kf.powi(-3))),
        }
    }
    out
}

/// Evaluates each applicable bound against `measure`.
pub fn bound_entries(k: usize, lambda1: f64, n: usize, measure: f64) -> Vec<BoundEntry> {
    applicable_bounds(k, lambda1, n)
        .into_iter()
        .map(|(name, value)| BoundEntry {
            satisfied: le_with_tol(measure, value, REL_TOL, MEASURE_TOL),
            slack: value - measure,
            name,
            value,
        })
        .collect()
}

/// Builds the full certificate for `g` against odd girth threshold `k`.
pub fn certify(g: &Graph, k: usize, graph_id: &str) -> Result<CertificateReport> {
    require_odd_k(k, 3)?;
    let girth = odd_girth(g);
    if let OddGirth::Finite(found) = girth {
        if found < k {
            return Err(Error::GirthViolation { found, required: k });
        }
    }
    let n = g.n();
    let spectrum = eigenvalues(g)?;
    let measure = bipartiteness_measure(&spectrum)?;
    let lambda1 = spectrum.largest().unwrap_or(0.0);
    let lambda_n = spectrum.smallest().unwrap_or(0.0);
    let trivial = lambda_n == 0.0;

    let mut chain_checks = Vec::new();
    let mut notes = Vec::new();

    let first_bad = spectral::first_nonzero_odd_trace(g, k)?;
    chain_checks.push(ChainCheck {
        description: "first odd j <= k-2 with Tr(A^j) != 0 (0 = none)".into(),
        left: first_bad.unwrap_or(0) as f64,
        relation: "=".into(),
        right: 0.0,
        satisfied: first_bad.is_none(),
    });
    let two_e = 2.0 * g.edge_count() as f64;
    chain_checks.push(ChainCheck::le(
        "2e(G) <= n*lambda1",
        two_e,
        n as f64 * lambda1,
    ));
    chain_checks.push(ChainCheck::le(
        "|lambda_n| <= lambda1",
        lambda_n.abs(),
        lambda1,
    ));

    let main_case = (k >= PROPOSITION_MIN_K).then(|| classify_main_case(k, lambda1, n));
    if trivial {
        notes.push("lambda_n = 0: edgeless graph, measure bounded trivially".into());
    } else if k < PROPOSITION_MIN_K {
        notes.push(format!(
            "broad-spectrum and high-lambda1 chains inapplicable: k = {k} < {PROPOSITION_MIN_K}"
        ));
    } else {
        if lambda1 >= broad_spectrum_threshold(k, n) {
            broad_spectrum_chain(&spectrum, k, n, &mut chain_checks);
        } else {
            notes.push("broad-spectrum chain inapplicable: lambda1 < n/k^3".into());
        }
        if lambda1 >= high_lambda1_threshold(k, n) {
            high_lambda1_chain(&spectrum, k, n, measure, &mut chain_checks)?;
        } else {
            notes.push("high-lambda1 chain inapplicable: lambda1 < 16n/k".into());
        }
    }

    let applicable = bound_entries(k, lambda1, n, measure);
    let passed = applicable.iter().all(|b| b.satisfied) && chain_checks.iter().all(|c| c.satisfied);
    Ok(CertificateReport {
        graph_id: graph_id.to_string(),
        n,
        k,
        odd_girth: girth,
        lambda1,
        lambda_n,
        measure,
        trivial,
        main_case,
        applicable_bounds: applicable,
        chain_checks,
        notes,
        passed,
    })
}

/// Chebyshev certificate `p(x) = x² T_{k−4}(x/|λₙ|)`.
fn broad_spectrum_chain(s: &Spectrum, k: usize, n: usize, checks: &mut Vec<ChainCheck>) {
    let values = s.values();
    let lambda1 = values[0];
    let scale = values[values.len() - 1].abs();
    let terms: Vec<f64> = values
        .iter()
        .map(|&x| x * x * chebyshev_t(k - 4, x / scale))
        .collect();
    let magnitude: f64 = terms.iter().map(|t| t.abs()).sum();
    checks.push(ChainCheck::vanishes(
        "sum_i lambda_i^2 T_{k-4}(lambda_i/|lambda_n|) = 0",
        compensated_sum(terms.iter().copied()),
        magnitude,
    ));
    let r = lambda1 / scale;
    checks.push(ChainCheck::le(
        "lambda1^2 T_{k-4}(lambda1/|lambda_n|) <= n*lambda1",
        lambda1 * lambda1 * chebyshev_t(k - 4, r),
        n as f64 * lambda1,
    ));
    let kf = k as f64;
    checks.push(ChainCheck::lt(
        "r - 1 < (4/k^2) log^2(2n/lambda1)",
        r - 1.0,
        4.0 / (kf * kf) * (2.0 * n as f64 / lambda1).ln().powi(2),
    ));
}

/// Certificate `p(x) = x^{k−4d⁻−2} ∏ (x² − λᵢ²)²`, evaluated on the
/// spectrum normalised by `λ₁` (the identity is homogeneous).
fn high_lambda1_chain(
    s: &Spectrum,
    k: usize,
    n: usize,
    measure: f64,
    checks: &mut Vec<ChainCheck>,
) -> Result<()> {
    let lambda1 = s.values()[0];
    let part = threshold_partition(s)?;
    checks.push(ChainCheck::le(
        "d <= 4n/lambda1",
        part.d as f64,
        4.0 * n as f64 / lambda1,
    ));

    let normalised = Spectrum::from_values(s.values().iter().map(|x| x / lambda1).collect());
    let p = high_lambda1_polynomial(&normalised, k)?;
    let terms: Vec<f64> = normalised.values().iter().map(|&x| p.evaluate(x)).collect();
    let magnitude: f64 = terms.iter().map(|t| t.abs()).sum();
    checks.push(ChainCheck::vanishes(
        "sum_i p(lambda_i) = 0 for p = x^{k-4d^- -2} prod (x^2 - lambda_i^2)^2",
        compensated_sum(terms.iter().copied()),
        magnitude,
    ));
    let exponent = -(k as f64) + 4.0 * part.d_minus as f64 + 4.0;
    checks.push(ChainCheck::le(
        "p(lambda1) <= n lambda1^{k-3} 2^{-k+4d^- +4} (both sides / lambda1^{k-2})",
        p.evaluate(1.0),
        n as f64 / lambda1 * 2f64.powf(exponent),
    ));
    if part.d_minus > 0 {
        checks.push(ChainCheck::le(
            "(lambda1 + lambda_n)/n <= (4 lambda1/n) 2^{-k/(4d^-)}",
            measure,
            4.0 * lambda1 / n as f64 * 2f64.powf(-(k as f64) / (4.0 * part.d_minus as f64)),
        ));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{complete_bipartite, complete_graph, cycle_graph, disjoint_union};

    #[test]
    fn constants() {
        assert!((csikvari_bound() - 0.171_572_875_253_809_9).abs() < 1e-15);
        assert!(gamma5_prime_value() < csikvari_bound());
        assert_eq!(balogh_constant(), 0.1547);
    }

    #[test]
    fn cycle_bounds() {
        assert!((cycle_lower_bound(5).unwrap() - 0.076_393_202_250_021).abs() < 1e-12);
        assert!((cycle_lower_bound(3).unwrap() - 1.0 / 3.0).abs() < 1e-15);
        assert!(cycle_lower_bound(4).is_err());
        assert!(cycle_lower_bound(1).is_err());
    }

    #[test]
    fn proposition_bounds() {
        let n = 1000;
        assert_eq!(broad_spectrum_bound(101, 2.0 * n as f64, n).unwrap(), 0.0);
        let a = broad_spectrum_bound(101, 50.0, 1000).unwrap();
        let b = broad_spectrum_bound(101, 100.0, 2000).unwrap();
        assert!((a - b).abs() <= 1e-15 * a);
        assert!(matches!(
            broad_spectrum_bound(99, 1.0, 10),
            Err(Error::Precondition(_))
        ));
        assert!(matches!(
            broad_spectrum_bound(101, 1e-9, 10),
            Err(Error::Precondition(_))
        ));

        let at = high_lambda1_threshold(101, n);
        assert_eq!(high_lambda1_bound(101, at, n).unwrap(), 2.0);
        assert_eq!(
            high_lambda1_bound(101, 32.0 * n as f64 / 101.0, n).unwrap(),
            1.0
        );
        assert!(high_lambda1_bound(101, at * 0.99, n).is_err());

        assert!(main_bound(99).is_err());
        assert!(main_bound(102).is_err());
        assert!(main_bound(101).unwrap() / cycle_lower_bound(101).unwrap() > 1.0);
    }

    #[test]
    fn case_partition() {
        let (k, n) = (101, 5000);
        assert_eq!(classify_main_case(k, 0.0, n), MainCase::SmallLambda1);
        assert_eq!(
            classify_main_case(k, broad_spectrum_threshold(k, n), n),
            MainCase::BroadSpectrum
        );
        assert_eq!(
            classify_main_case(k, main_case_threshold(k, n), n),
            MainCase::HighLambda1
        );
    }

    #[test]
    fn certify_small_graphs() {
        let r = certify(&cycle_graph(5).unwrap(), 5, "C5").unwrap();
        assert!(r.passed, "{r:#?}");
        assert!(r.main_case.is_none());
        assert_eq!(r.applicable_bounds.len(), 2);
        assert!((r.measure - cycle_lower_bound(5).unwrap()).abs() < 1e-9);

        let r = certify(&complete_bipartite(3, 3), 101, "K33").unwrap();
        assert!(r.passed, "{r:#?}");
        assert!(r.measure.abs() < 1e-12);

        assert_eq!(
            certify(&complete_graph(3), 5, "K3").unwrap_err(),
            Error::GirthViolation {
                found: 3,
                required: 5
            }
        );
        assert!(certify(&complete_graph(3), 4, "K3").is_err());
    }

    #[test]
    fn certify_edgeless() {
        let r = certify(&Graph::empty(4), 101, "E4").unwrap();
        assert!(r.trivial && r.passed);
        assert_eq!(r.measure, 0.0);
        assert_eq!(r.main_case, Some(MainCase::SmallLambda1));
    }

    #[test]
    fn certify_long_cycle_runs_broad_chain() {
        let r = certify(&cycle_graph(101).unwrap(), 101, "C101").unwrap();
        assert!(r.passed, "{r:#?}");
        assert_eq!(r.main_case, Some(MainCase::BroadSpectrum));
        assert!(r
            .chain_checks
            .iter()
            .any(|c| c.description.starts_with("r - 1")));
        assert!((r.measure - cycle_lower_bound(101).unwrap()).abs() < 1e-8);
    }

    #[test]
    fn certify_runs_high_lambda1_chain() {
        // K_{30,30} plus a disjoint C_101: odd girth 101, λ₁ = 30 ≥ 16·161/101
        let g = disjoint_union(&complete_bipartite(30, 30), &cycle_graph(101).unwrap());
        let r = certify(&g, 101, "K30,30+C101").unwrap();
        assert!(r.passed, "{r:#?}");
        assert!(r.applicable_bounds.iter().any(|b| b.name == "high_lambda1"));
        assert!(r
            .chain_checks
            .iter()
            .any(|c| c.description.starts_with("d <=")));
    }

    #[test]
    fn csv_rows() {
        let r = certify(&cycle_graph(5).unwrap(), 5, "a,b").unwrap();
        let row = r.csv_row();
        assert!(row.starts_with("\"a,b\",5,5,5,"));
        assert_eq!(row.split(',').count(), CSV_HEADER.split(',').count() + 1);
        assert!(row.contains(",gamma5_prime,"));
    }
}
