//! Small numerical helpers shared across modules.

/// Neumaier-compensated sum of `terms` after ordering them by decreasing
/// magnitude.
pub fn compensated_sum<I: IntoIterator<Item = f64>>(terms: I) -> f64 {
    let mut terms: Vec<f64> = terms.into_iter().collect();
    terms.sort_by(|a, b| b.abs().total_cmp(&a.abs()));
    let mut sum = 0.0;
    let mut carry = 0.0;
    for t in terms {
        let s = sum + t;
        if sum.abs() >= t.abs() {
            carry += (sum - s) + t;
        } else {
            carry += (t - s) + sum;
        }
        sum = s;
    }
    sum + carry
}

/// `a <= b` up to a relative slack of `rel` (scaled by the larger
/// magnitude, floored at 1) plus an absolute slack `abs`.
pub fn le_with_tol(a: f64, b: f64, rel: f64, abs: f64) -> bool {
    a <= b + rel * a.abs().max(b.abs()).max(1.0) + abs
}
