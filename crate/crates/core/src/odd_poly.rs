//! Odd polynomials, Chebyshev polynomials of the first kind, and the
//! spectrum-dependent certificate polynomial used in the high-`λ₁` regime.

use serde::Serialize;

use crate::error::{require_odd_k, Error, Result};
use crate::numeric::compensated_sum;
use crate::spectral::Spectrum;

/// Above this `k` the high-`λ₁` certificate polynomial is kept factored.
pub const EXPANSION_LIMIT: usize = 31;

/// A polynomial containing only odd-degree monomials.
#[derive(Debug, Clone, PartialEq)]
pub enum OddPolynomial {
    /// `coeffs[i]` multiplies `x^(2i+1)`.
    Expanded { coeffs: Vec<f64> },
    /// `x^exponent · ∏ (x² − r²)²` over `roots`; `exponent` is odd.
    Factored { exponent: usize, roots: Vec<f64> },
}

impl OddPolynomial {
    /// Builds the expanded form from odd coefficients `c₁, c₃, c₅, …`,
    /// dropping trailing zeros so the degree is well defined.
    pub fn from_odd_coeffs(mut coeffs: Vec<f64>) -> Self {
        while coeffs.last() == Some(&0.0) {
            coeffs.pop();
        }
        OddPolynomial::Expanded { coeffs }
    }

    /// The monomial `x^j`, `j` odd.
    pub fn monomial(j: usize) -> Result<Self> {
        if j.is_multiple_of(2) {
            return Err(Error::InvalidArgument(format!(
                "x^{j} is not an odd monomial"
            )));
        }
        let mut coeffs = vec![0.0; j / 2 + 1];
        coeffs[j / 2] = 1.0;
        Ok(OddPolynomial::Expanded { coeffs })
    }

    /// Degree of the polynomial; the zero polynomial reports `None`.
    pub fn degree(&self) -> Option<usize> {
        match self {
            OddPolynomial::Expanded { coeffs } => {
                coeffs.iter().rposition(|&c| c != 0.0).map(|i| 2 * i + 1)
            }
            OddPolynomial::Factored { exponent, roots } => Some(exponent + 4 * roots.len()),
        }
    }

    /// `p(x)`. The expanded form runs Horner's scheme in `x²` and multiplies
    /// by `x` once at the end.
    pub fn evaluate(&self, x: f64) -> f64 {
        match self {
            OddPolynomial::Expanded { coeffs } => {
                let x2 = x * x;
                x * coeffs.iter().rev().fold(0.0, |acc, &c| acc * x2 + c)
            }
            OddPolynomial::Factored { exponent, roots } => {
                let x2 = x * x;
                roots
                    .iter()
                    .map(|r| {
                        let f = x2 - r * r;
                        f * f
                    })
                    .product::<f64>()
                    * x.powi(*exponent as i32)
            }
        }
    }

    /// Expanded odd coefficients, materialising the factored form if needed.
    pub fn odd_coeffs(&self) -> Vec<f64> {
        match self {
            OddPolynomial::Expanded { coeffs } => coeffs.clone(),
            OddPolynomial::Factored { exponent, roots } => expand_factored(*exponent, roots),
        }
    }

    /// Largest coefficient magnitude; the scale used when judging whether a
    /// spectrum sum is "zero".
    pub fn coefficient_scale(&self) -> f64 {
        self.odd_coeffs().iter().fold(0.0, |m, c| m.max(c.abs()))
    }
}

/// Coefficients of `x^exponent · ∏ (x² − r²)²` restricted to odd powers.
fn expand_factored(exponent: usize, roots: &[f64]) -> Vec<f64> {
    // polynomial in y = x², then shift by x^exponent
    let mut in_y = vec![1.0];
    for r in roots {
        let r2 = r * r;
        for _ in 0..2 {
            let mut next = vec![0.0; in_y.len() + 1];
            for (i, &c) in in_y.iter().enumerate() {
                next[i + 1] += c;
                next[i] -= r2 * c;
            }
            in_y = next;
        }
    }
    // x^exponent · y^i = x^(2i + exponent) = x^(2(i + exponent/2) + 1)
    let shift = exponent / 2;
    let mut coeffs = vec![0.0; shift];
    coeffs.extend(in_y);
    coeffs
}

/// `∑ p(λᵢ)` with compensated summation.
pub fn odd_poly_spectrum_sum(s: &Spectrum, p: &OddPolynomial) -> f64 {
    compensated_sum(s.values().iter().map(|&x| p.evaluate(x)))
}

/// Chebyshev polynomial of the first kind `T_j(x)`.
///
/// Three-term recurrence on `[-1, 1]`; outside, the closed form
/// `½(t^j + t^-j)` with `t = x + √(x² − 1)` (using `x − √(x² − 1) = 1/t`),
/// reflected by parity for `x < −1`.
pub fn chebyshev_t(j: usize, x: f64) -> f64 {
    if x.abs() <= 1.0 {
        chebyshev_t_recurrence(j, x)
    } else if x > 1.0 {
        chebyshev_t_closed_form(j, x)
    } else {
        let v = chebyshev_t_closed_form(j, -x);
        if j.is_multiple_of(2) {
            v
        } else {
            -v
        }
    }
}

/// `T_j(x)` by `T_{i+1} = 2x·T_i − T_{i−1}`; valid for every real `x`.
pub fn chebyshev_t_recurrence(j: usize, x: f64) -> f64 {
    if j == 0 {
        return 1.0;
    }
    let (mut prev, mut cur) = (1.0, x);
    for _ in 1..j {
        let next = 2.0 * x * cur - prev;
        prev = cur;
        cur = next;
    }
    cur
}

/// `T_j(x) = ½((x + √(x² − 1))^j + (x − √(x² − 1))^j)` for `x ≥ 1`.
pub fn chebyshev_t_closed_form(j: usize, x: f64) -> f64 {
    debug_assert!(x >= 1.0);
    let root = ((x - 1.0) * (x + 1.0)).sqrt();
    let t = x + root;
    let tj = t.powi(j as i32);
    0.5 * (tj + 1.0 / tj)
}

/// The odd certificate `x² · T_{k−4}(x / scale)` used in the broad-spectrum
/// argument, with `scale = |λₙ|`.
pub fn scaled_chebyshev_certificate(k: usize, scale: f64, x: f64) -> f64 {
    x * x * chebyshev_t(k - 4, x / scale)
}

/// Counts of eigenvalues at or beyond `±λ₁/2`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ThresholdPartition {
    pub mu: f64,
    /// `#{i : λᵢ ≥ μ}`
    pub d_plus: usize,
    /// `#{i : λᵢ ≤ −μ}`
    pub d_minus: usize,
    pub d: usize,
}

/// Partition around `μ = λ₁/2`. Exact comparisons, no tolerance: a value
/// equal to `μ` counts toward `d⁺`, one equal to `−μ` toward `d⁻`.
pub fn threshold_partition(s: &Spectrum) -> Result<ThresholdPartition> {
    let lambda1 = s.largest().unwrap_or(0.0);
    if lambda1 <= 0.0 {
        return Err(Error::InvalidArgument(
            "threshold partition needs λ₁ > 0 (graph has no edges)".into(),
        ));
    }
    let mu = lambda1 / 2.0;
    let d_plus = s.values().iter().filter(|&&l| l >= mu).count();
    let d_minus = s.values().iter().filter(|&&l| l <= -mu).count();
    Ok(ThresholdPartition {
        mu,
        d_plus,
        d_minus,
        d: d_plus + d_minus,
    })
}

/// `p(x) = x^(k − 4d⁻ − 2) · ∏ (x² − λᵢ²)²` over the `d⁻` most negative
/// eigenvalues. Degree `k − 2`, vanishing at `±λᵢ` for each of them.
///
/// Expanded for `k ≤ EXPANSION_LIMIT`, factored above that to avoid
/// coefficient blow-up.
pub fn high_lambda1_polynomial(s: &Spectrum, k: usize) -> Result<OddPolynomial> {
    require_odd_k(k, 3)?;
    let part = threshold_partition(s)?;
    let exponent = k as i64 - 4 * part.d_minus as i64 - 2;
    if exponent < 1 {
        return Err(Error::Precondition(format!(
            "exponent k - 4d⁻ - 2 = {exponent} < 1 (k = {k}, d⁻ = {}); the high-λ₁ regime λ₁ ≥ 16n/k does not hold",
            part.d_minus
        )));
    }
    let values = s.values();
    let roots = values[values.len() - part.d_minus..].to_vec();
    let factored = OddPolynomial::Factored {
        exponent: exponent as usize,
        roots,
    };
    if k <= EXPANSION_LIMIT {
        Ok(OddPolynomial::from_odd_coeffs(factored.odd_coeffs()))
    } else {
        Ok(factored)
    }
}
