//! The relaxed triangle-free supremum: the piecewise objective and its
//! maximiser, the power-sum maximisation over the unit cube, the
//! intermediate-value construction for prescribed linear and cubic sums,
//! and the extremal sequence whose measure approaches the supremum.

use serde::Serialize;

use crate::bounds::gamma5_prime_value;
use crate::error::{require_odd_k, Error, Result};
use crate::numeric::compensated_sum;

/// `f(s) = ⌊s⌋ + {s}^{3/2}`.
pub fn f_of_s(s: f64) -> Result<f64> {
    if !(s >= 0.0) {
        return Err(Error::InvalidArgument(format!(
            "f(s) needs s >= 0, got {s}"
        )));
    }
    let m = s.floor();
    Ok(m + (s - m).powf(1.5))
}

/// `(1 − f(s)^{−1/3}) / (1 + s·f(s)^{−2/3})` for `s ≥ 1`.
pub fn objective_g(s: f64) -> Result<f64> {
    if !(s >= 1.0) {
        return Err(Error::InvalidArgument(format!(
            "objective needs s >= 1, got {s}"
        )));
    }
    let inv_cbrt = 1.0 / f_of_s(s)?.cbrt();
    Ok((1.0 - inv_cbrt) / (1.0 + s * inv_cbrt * inv_cbrt))
}

/// `(1 − s^{−1/3}) / (1 + s^{1/3})`: the objective with `f(s)` replaced by
/// `s`. Its supremum over `s ≥ 1` is `3 − 2√2`.
pub fn relaxed_objective(s: f64) -> f64 {
    let c = s.cbrt();
    (1.0 - 1.0 / c) / (1.0 + c)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ObjectiveMaximum {
    pub s_star: f64,
    pub value: f64,
}

const GOLDEN_TOL: f64 = 1e-10;

/// Maximises [`objective_g`] over `[1, s_max]`.
///
/// `f` has a kink at every integer, so each unit interval is sampled on a
/// uniform grid (integers included), and the best sample is refined by
/// golden-section search over its neighbouring grid cells.
pub fn maximize_objective(s_max: f64, per_interval_samples: usize) -> Result<ObjectiveMaximum> {
    if !(s_max >= 15.0) {
        return Err(Error::InvalidArgument(format!(
            "s_max must be >= 15, got {s_max}"
        )));
    }
    if per_interval_samples < 100 {
        return Err(Error::InvalidArgument(format!(
            "need at least 100 samples per unit interval, got {per_interval_samples}"
        )));
    }
    let g = |s: f64| objective_g(s).expect("s >= 1 inside the search range");
    let step = 1.0 / per_interval_samples as f64;

    let mut best = ObjectiveMaximum {
        s_star: 1.0,
        value: g(1.0),
    };
    let consider = |s: f64, best: &mut ObjectiveMaximum| {
        let value = g(s);
        if value > best.value {
            *best = ObjectiveMaximum { s_star: s, value };
        }
    };
    let last_unit = s_max.floor() as usize;
    for m in 1..=last_unit {
        for i in 0..per_interval_samples {
            let s = m as f64 + i as f64 * step;
            if s > s_max {
                break;
            }
            consider(s, &mut best);
        }
    }
    consider(s_max, &mut best);

    let lo = (best.s_star - step).max(1.0);
    let hi = (best.s_star + step).min(s_max);
    let s_refined = golden_section_max(g, lo, hi, GOLDEN_TOL);
    consider(s_refined, &mut best);
    Ok(best)
}

fn golden_section_max<F: Fn(f64) -> f64>(f: F, mut a: f64, mut b: f64, tol: f64) -> f64 {
    let ratio = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - ratio * (b - a);
    let mut d = a + ratio * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    while b - a > tol {
        if fc >= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - ratio * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + ratio * (b - a);
            fd = f(d);
        }
    }
    0.5 * (a + b)
}

/// `⌊s⌋ + {s}^α`: the maximum of `∑ xᵢ^α` over `xᵢ ∈ [0, 1]` with
/// `∑ xᵢ = s`, attained at `(1, …, 1, {s}, 0, …, 0)`.
pub fn power_sum_max_closed_form(s: f64, alpha: f64) -> Result<f64> {
    if !(alpha > 1.0) {
        return Err(Error::InvalidArgument(format!(
            "alpha must exceed 1, got {alpha}"
        )));
    }
    if !(s >= 0.0) {
        return Err(Error::InvalidArgument(format!("s must be >= 0, got {s}")));
    }
    let m = s.floor();
    Ok(m + (s - m).powf(alpha))
}

pub const BRUTEFORCE_MAX_ELL: usize = 4;

/// Numerical maximum of `∑ xᵢ^α` over `xᵢ ∈ [0, 1]`, `∑ xᵢ = s`, with no
/// knowledge of the closed form.
///
/// The first `ℓ − 1` coordinates run over a uniform grid and the last one
/// absorbs the remainder. The best grid point is then improved by moving
/// mass between coordinate pairs: `t ↦ (xᵢ − t)^α + (xⱼ + t)^α` is convex,
/// so each move goes to an end of its feasible range.
pub fn power_sum_max_bruteforce(ell: usize, s: f64, alpha: f64, grid_steps: usize) -> Result<f64> {
    if ell == 0 || ell > BRUTEFORCE_MAX_ELL {
        return Err(Error::InvalidArgument(format!(
            "ell must be in 1..={BRUTEFORCE_MAX_ELL}, got {ell}"
        )));
    }
    if !(alpha > 1.0) {
        return Err(Error::InvalidArgument(format!(
            "alpha must exceed 1, got {alpha}"
        )));
    }
    if grid_steps < 100 {
        return Err(Error::InvalidArgument(format!(
            "grid_steps must be >= 100, got {grid_steps}"
        )));
    }
    if !(s >= 0.0 && s <= ell as f64) {
        return Err(Error::Infeasible(format!(
            "no point of [0,1]^{ell} has coordinate sum {s}"
        )));
    }

    let objective = |x: &[f64]| x.iter().map(|v| v.powf(alpha)).sum::<f64>();
    let mut point = vec![0.0; ell];
    let mut best: Option<(f64, Vec<f64>)> = None;
    grid_search(&mut point, 0, s, grid_steps, &mut |x| {
        let value = objective(x);
        if best.as_ref().is_none_or(|(b, _)| value > *b) {
            best = Some((value, x.to_vec()));
        }
    });
    let (mut value, mut x) = best.expect("s <= ell guarantees a feasible grid point");

    loop {
        let mut improved = false;
        for i in 0..ell {
            for j in 0..ell {
                if i == j {
                    continue;
                }
                // move t from i to j, t ∈ (0, min(xᵢ, 1 − xⱼ)]
                let t = x[i].min(1.0 - x[j]);
                if t <= 0.0 {
                    continue;
                }
                let mut y = x.clone();
                y[i] -= t;
                y[j] += t;
                let v = objective(&y);
                if v > value + 1e-15 {
                    value = v;
                    x = y;
                    improved = true;
                }
            }
        }
        if !improved {
            break;
        }
    }
    Ok(value)
}

fn grid_search<F: FnMut(&[f64])>(
    point: &mut Vec<f64>,
    depth: usize,
    remaining: f64,
    steps: usize,
    visit: &mut F,
) {
    let ell = point.len();
    if depth == ell - 1 {
        let slack = 1e-12;
        if remaining >= -slack && remaining <= 1.0 + slack {
            point[depth] = remaining.clamp(0.0, 1.0);
            visit(point);
        }
        return;
    }
    for i in 0..=steps {
        let v = i as f64 / steps as f64;
        if v > remaining + 1e-12 {
            break;
        }
        point[depth] = v;
        grid_search(point, depth + 1, remaining - v, steps, visit);
    }
}

/// Non-negative `x₁, …, xₙ` with `∑ xᵢ = c` and `∑ xᵢ³ = d`, for
/// `c³/n² ≤ d ≤ c³`.
///
/// Searches the segment `x₁ = c − (n − 1)y`, `x₂ = … = xₙ = y` with
/// `y = ct/n`, `t ∈ [0, 1]`, which runs from `(c, 0, …, 0)` to
/// `(c/n, …, c/n)`. The cube sum takes the values `c³` and `c³/n²` at the
/// two ends, so bisection on the sign of `∑ xᵢ³ − d` finds `t`.
pub fn solve_simple(n: usize, c: f64, d: f64) -> Result<Vec<f64>> {
    if n == 0 {
        return Err(Error::InvalidArgument("n must be at least 1".into()));
    }
    if !(c >= 0.0 && d >= 0.0) {
        return Err(Error::InvalidArgument(format!(
            "c and d must be non-negative, got c = {c}, d = {d}"
        )));
    }
    let nf = n as f64;
    let hi = c * c * c;
    let lo = hi / (nf * nf);
    if d < lo * (1.0 - 1e-12) || d > hi * (1.0 + 1e-12) {
        return Err(Error::Infeasible(format!(
            "cube sum {d} outside [c³/n², c³] = [{lo}, {hi}]"
        )));
    }
    let d = d.clamp(lo, hi);
    if n == 1 {
        return Ok(vec![c]);
    }

    let at = |t: f64| {
        let y = c * t / nf;
        let first = (c - (nf - 1.0) * y).max(0.0);
        (first, y)
    };
    let excess = |t: f64| {
        let (first, y) = at(t);
        first.powi(3) + (nf - 1.0) * y.powi(3) - d
    };

    // excess(t_lo) >= 0 >= excess(t_hi)
    let (mut t_lo, mut t_hi) = (0.0f64, 1.0f64);
    if excess(t_lo) <= 0.0 {
        t_hi = t_lo;
    } else if excess(t_hi) >= 0.0 {
        t_lo = t_hi;
    }
    for _ in 0..200 {
        let mid = 0.5 * (t_lo + t_hi);
        if mid <= t_lo || mid >= t_hi {
            break;
        }
        if excess(mid) >= 0.0 {
            t_lo = mid;
        } else {
            t_hi = mid;
        }
    }
    let t = if excess(t_lo).abs() <= excess(t_hi).abs() {
        t_lo
    } else {
        t_hi
    };
    let (first, y) = at(t);
    let mut out = vec![y; n];
    out[0] = first;
    Ok(out)
}

/// `n_ε = 15 + √((14 − (14 − ε)^{1/3})³ / ε)`, the smallest length for
/// which the extremal construction is feasible.
pub fn n_epsilon(epsilon: f64) -> Result<f64> {
    if !(epsilon > 0.0 && epsilon < 1.0) {
        return Err(Error::InvalidArgument(format!(
            "epsilon must lie in (0, 1), got {epsilon}"
        )));
    }
    let c = 14.0 - (14.0 - epsilon).cbrt();
    Ok(15.0 + (c * c * c / epsilon).sqrt())
}

/// `((14 − ε)^{2/3} − (14 − ε)^{1/3}) / (14^{2/3} + 14 + √(14ε))`, the
/// measure achieved by [`extremal_sequence`].
pub fn extremal_measure(epsilon: f64) -> f64 {
    let x1 = (14.0 - epsilon).cbrt();
    (x1 * x1 - x1) / quadratic_budget(epsilon)
}

fn quadratic_budget(epsilon: f64) -> f64 {
    14f64.cbrt().powi(2) + 14.0 + (14.0 * epsilon).sqrt()
}

/// A real sequence `λ₁ ≥ … ≥ λₙ`, a candidate point of the relaxation.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(transparent)]
pub struct RelaxedSequence {
    values: Vec<f64>,
}

impl RelaxedSequence {
    /// Sorts `values` into non-increasing order (stable for ties).
    pub fn new(mut values: Vec<f64>) -> Self {
        values.sort_by(|a, b| b.total_cmp(a));
        RelaxedSequence { values }
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn n(&self) -> usize {
        self.values.len()
    }

    /// `(λ₁ + λₙ) / n`.
    pub fn measure(&self) -> Result<f64> {
        match (self.values.first(), self.values.last()) {
            (Some(a), Some(b)) => Ok((a + b) / self.n() as f64),
            _ => Err(Error::InvalidArgument(
                "empty sequence has no measure".into(),
            )),
        }
    }
}

/// Sequence with `∑λ = ∑λ³ = 0`, `∑λ² ≤ nλ₁` and measure
/// [`extremal_measure`]`(ε)`.
///
/// Built from `x₁ = (14 − ε)^{1/3}`, fourteen entries `−1`, and `n − 15`
/// non-negative middle entries with sum `14 − x₁` and cube sum `ε`, all
/// scaled by `n·x₁ / (14^{2/3} + 14 + √(14ε))`.
pub fn extremal_sequence(epsilon: f64, n: usize) -> Result<RelaxedSequence> {
    let required = n_epsilon(epsilon)?.ceil() as usize;
    if n < required {
        return Err(Error::SizeTooSmall { n, required });
    }
    let x1 = (14.0 - epsilon).cbrt();
    let mut middle = solve_simple(n - 15, 14.0 - x1, epsilon)?;
    middle.sort_by(|a, b| b.total_cmp(a));

    let scale = n as f64 * x1 / quadratic_budget(epsilon);
    let mut values = Vec::with_capacity(n);
    values.push(x1 * scale);
    values.extend(middle.into_iter().map(|x| x * scale));
    values.extend(std::iter::repeat_n(-scale, 14));
    Ok(RelaxedSequence::new(values))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OddPowerSum {
    pub j: u32,
    pub sum: f64,
    pub tolerance: f64,
    pub satisfied: bool,
}

/// Residuals of the relaxation constraints.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConstraintCheck {
    pub sum1: f64,
    pub sum3: f64,
    pub sum2: f64,
    pub n_lambda1: f64,
    /// `1e-9 · n · max(1, λ₁²)`
    pub tolerance: f64,
    /// Every required odd power sum, `j = 1, 3, …, k − 2`.
    pub odd_sums: Vec<OddPowerSum>,
    pub satisfied: bool,
}

/// Checks `∑ λᵢ^j = 0` for odd `j ≤ k − 2` and `∑ λᵢ² ≤ nλ₁`.
///
/// `j = 1, 3` and the quadratic budget use the tolerance
/// `1e-9 · n · max(1, λ₁²)`; higher odd powers use
/// `1e-9 · n · max(1, Λ^j)` with `Λ = maxᵢ |λᵢ|`.
pub fn check_relaxed_constraints(seq: &RelaxedSequence, k: usize) -> Result<ConstraintCheck> {
    require_odd_k(k, 3)?;
    let values = seq.values();
    let n = values.len() as f64;
    let lambda1 = values.first().copied().unwrap_or(0.0);
    let max_abs = values.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let power = |j: i32| compensated_sum(values.iter().map(|v| v.powi(j)));
    let tolerance = 1e-9 * n * (lambda1 * lambda1).max(1.0);

    let odd_sums: Vec<OddPowerSum> = (1..=k as u32 - 2)
        .step_by(2)
        .map(|j| {
            let sum = power(j as i32);
            let tol = if j <= 3 {
                tolerance
            } else {
                1e-9 * n * max_abs.powi(j as i32).max(1.0)
            };
            OddPowerSum {
                j,
                sum,
                tolerance: tol,
                satisfied: sum.abs() <= tol,
            }
        })
        .collect();
    let sum2 = power(2);
    let n_lambda1 = n * lambda1;
    let satisfied = odd_sums.iter().all(|s| s.satisfied) && sum2 <= n_lambda1 + tolerance;
    Ok(ConstraintCheck {
        sum1: power(1),
        sum3: power(3),
        sum2,
        n_lambda1,
        tolerance,
        odd_sums,
        satisfied,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Residuals {
    pub sum1: f64,
    pub sum3: f64,
    /// `∑λ² − nλ₁`; non-positive when the budget holds.
    pub sum2_minus_budget: f64,
}

/// An extremal sequence with its metadata, ready for JSON export.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExtremalExport {
    pub epsilon: f64,
    pub n: usize,
    pub measure: f64,
    pub expected_measure: f64,
    pub gap_to_gamma5_prime: f64,
    pub constraints_satisfied: bool,
    pub residuals: Residuals,
    pub values: RelaxedSequence,
}

/// Builds the extremal sequence at `n` (default `⌈n_ε⌉`) and checks it
/// against the `k = 5` constraints.
pub fn export_extremal(epsilon: f64, n: Option<usize>) -> Result<ExtremalExport> {
    let n = match n {
        Some(n) => n,
        None => n_epsilon(epsilon)?.ceil() as usize,
    };
    let seq = extremal_sequence(epsilon, n)?;
    let check = check_relaxed_constraints(&seq, 5)?;
    let measure = seq.measure()?;
    Ok(ExtremalExport {
        epsilon,
        n,
        measure,
        expected_measure: extremal_measure(epsilon),
        gap_to_gamma5_prime: gamma5_prime_value() - measure,
        constraints_satisfied: check.satisfied,
        residuals: Residuals {
            sum1: check.sum1,
            sum3: check.sum3,
            sum2_minus_budget: check.sum2 - check.n_lambda1,
        },
        values: seq,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bounds::csikvari_bound;

    #[test]
    fn f_values() {
        assert_eq!(f_of_s(14.0).unwrap(), 14.0);
        assert_eq!(f_of_s(1.25).unwrap(), 1.125);
        assert!((f_of_s(0.81).unwrap() - 0.729).abs() < 1e-15);
        assert!(f_of_s(-0.1).is_err());
        assert!(f_of_s(f64::NAN).is_err());
    }

    #[test]
    fn objective_values() {
        assert_eq!(objective_g(1.0).unwrap(), 0.0);
        assert!((objective_g(14.0).unwrap() - gamma5_prime_value()).abs() < 1e-15);
        for m in 1..40 {
            let s = m as f64;
            assert!((objective_g(s).unwrap() - relaxed_objective(s)).abs() < 1e-15);
        }
        assert!(objective_g(0.5).is_err());
    }

    #[test]
    fn maximiser_at_fourteen() {
        let best = maximize_objective(100.0, 1000).unwrap();
        assert!((best.s_star - 14.0).abs() < 1e-6, "{best:?}");
        assert!((best.value - gamma5_prime_value()).abs() < 1e-10);
        assert!(best.value < csikvari_bound());
        assert!(objective_g(13.0).unwrap() < best.value);
        assert!(objective_g(15.0).unwrap() < best.value);
        assert!(maximize_objective(14.0, 1000).is_err());
        assert!(maximize_objective(100.0, 99).is_err());
    }

    #[test]
    fn closed_form_values() {
        assert_eq!(power_sum_max_closed_form(3.0, 1.5).unwrap(), 3.0);
        assert_eq!(power_sum_max_closed_form(2.25, 1.5).unwrap(), 2.125);
        assert_eq!(power_sum_max_closed_form(0.5, 2.0).unwrap(), 0.25);
        assert!(power_sum_max_closed_form(1.0, 1.0).is_err());
    }

    #[test]
    fn bruteforce_values() {
        let v = power_sum_max_bruteforce(3, 2.5, 1.5, 200).unwrap();
        assert!((v - (2.0 + 0.5f64.powf(1.5))).abs() < 1e-4);
        assert!((power_sum_max_bruteforce(2, 2.0, 1.5, 200).unwrap() - 2.0).abs() < 1e-12);
        assert_eq!(power_sum_max_bruteforce(4, 0.0, 2.0, 100).unwrap(), 0.0);
        assert!(matches!(
            power_sum_max_bruteforce(2, 2.5, 1.5, 100),
            Err(Error::Infeasible(_))
        ));
        assert!(matches!(
            power_sum_max_bruteforce(2, -0.5, 1.5, 100),
            Err(Error::Infeasible(_))
        ));
        assert!(power_sum_max_bruteforce(5, 1.0, 1.5, 100).is_err());
    }

    #[test]
    fn simple_solutions() {
        assert_eq!(solve_simple(1, 2.0, 8.0).unwrap(), vec![2.0]);
        let x = solve_simple(2, 2.0, 2.0).unwrap();
        assert!((x.iter().sum::<f64>() - 2.0).abs() < 1e-15);
        assert!((x.iter().map(|v| v.powi(3)).sum::<f64>() - 2.0).abs() < 1e-12);
        assert!((x[0] - 1.0).abs() < 1e-6 && (x[1] - 1.0).abs() < 1e-6);
        assert_eq!(solve_simple(4, 1.0, 1.0).unwrap(), vec![1.0, 0.0, 0.0, 0.0]);
        assert!(matches!(
            solve_simple(4, 1.0, 1.5),
            Err(Error::Infeasible(_))
        ));
        assert!(matches!(
            solve_simple(4, 1.0, 0.01),
            Err(Error::Infeasible(_))
        ));
        assert_eq!(solve_simple(3, 0.0, 0.0).unwrap(), vec![0.0; 3]);
    }

    #[test]
    fn thresholds() {
        let c = 14.0 - 13.99f64.cbrt();
        assert!((n_epsilon(0.01).unwrap() - (15.0 + (c.powi(3) / 0.01).sqrt())).abs() < 1e-12);
        assert!(n_epsilon(0.001).unwrap() > n_epsilon(0.01).unwrap());
        assert!(n_epsilon(0.999).unwrap().is_finite());
        assert!(n_epsilon(0.0).is_err());
        assert!(n_epsilon(1.0).is_err());
    }

    #[test]
    fn extremal_construction() {
        let n = n_epsilon(0.01).unwrap().ceil() as usize;
        let seq = extremal_sequence(0.01, n).unwrap();
        assert_eq!(seq.n(), n);
        let check = check_relaxed_constraints(&seq, 5).unwrap();
        assert!(check.satisfied, "{check:?}");
        assert!((seq.measure().unwrap() - extremal_measure(0.01)).abs() < 1e-10);
        assert_eq!(
            extremal_sequence(0.01, n - 1).unwrap_err(),
            Error::SizeTooSmall {
                n: n - 1,
                required: n
            }
        );
    }

    #[test]
    fn relaxed_constraint_edge_cases() {
        let zeros = RelaxedSequence::new(vec![0.0; 6]);
        let check = check_relaxed_constraints(&zeros, 5).unwrap();
        assert!(check.satisfied);
        assert_eq!(zeros.measure().unwrap(), 0.0);

        let bad = RelaxedSequence::new(vec![1.0, 1.0, -1.0]);
        assert!(!check_relaxed_constraints(&bad, 5).unwrap().satisfied);
        assert!(check_relaxed_constraints(&bad, 4).is_err());
    }

    #[test]
    fn export_has_metadata() {
        let e = export_extremal(0.1, None).unwrap();
        assert!(e.constraints_satisfied);
        assert!(e.gap_to_gamma5_prime > 0.0);
        let json = serde_json::to_value(&e).unwrap();
        assert_eq!(json["values"].as_array().unwrap().len(), e.n);
        assert!(json["residuals"]["sum2_minus_budget"].as_f64().unwrap() <= 1e-6);
    }
}
