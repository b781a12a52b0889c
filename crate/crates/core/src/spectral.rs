//! Adjacency spectra, exact closed-walk counts and the bipartiteness measure.

use num_bigint::BigUint;
use num_traits::{CheckedAdd, Zero};
use serde::Serialize;

use crate::error::{require_odd_k, Error, Result};
use crate::graph::Graph;
use crate::numeric::compensated_sum;

/// Sweep cap for the Jacobi eigensolver.
pub const MAX_SWEEPS: usize = 100;

/// Real eigenvalues sorted non-increasingly.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(transparent)]
pub struct Spectrum {
    values: Vec<f64>,
}

impl Spectrum {
    /// Wraps arbitrary reals, sorting them into non-increasing order.
    pub fn from_values(mut values: Vec<f64>) -> Self {
        values.sort_by(|a, b| b.total_cmp(a));
        Spectrum { values }
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Largest eigenvalue, `λ₁`.
    pub fn largest(&self) -> Option<f64> {
        self.values.first().copied()
    }

    /// Smallest eigenvalue, `λₙ`.
    pub fn smallest(&self) -> Option<f64> {
        self.values.last().copied()
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }
}

/// Eigenvalues of a dense symmetric matrix (row-major, `n × n`) by the
/// cyclic Jacobi method.
///
/// Sweeps run until the off-diagonal Frobenius norm drops below
/// `1e-12 · n`; more than [`MAX_SWEEPS`] sweeps is reported as
/// non-convergence. The result is unsorted.
pub fn jacobi_eigenvalues(mut a: Vec<f64>, n: usize) -> Result<Vec<f64>> {
    assert_eq!(a.len(), n * n, "matrix must be n x n");
    let tol = 1e-12 * n as f64;
    let off_norm = |a: &[f64]| {
        let mut s = 0.0;
        for p in 0..n {
            for q in p + 1..n {
                s += 2.0 * a[p * n + q] * a[p * n + q];
            }
        }
        s.sqrt()
    };

    let mut sweeps = 0;
    loop {
        let off = off_norm(&a);
        if off < tol || n < 2 {
            break;
        }
        if sweeps == MAX_SWEEPS {
            return Err(Error::NoConvergence {
                sweeps,
                off_norm: off,
            });
        }
        sweeps += 1;
        for p in 0..n - 1 {
            for q in p + 1..n {
                let apq = a[p * n + q];
                if apq == 0.0 {
                    continue;
                }
                let theta = (a[q * n + q] - a[p * n + p]) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + theta.hypot(1.0));
                let c = 1.0 / t.hypot(1.0);
                let s = t * c;
                for r in 0..n {
                    if r == p || r == q {
                        continue;
                    }
                    let arp = a[r * n + p];
                    let arq = a[r * n + q];
                    let new_rp = c * arp - s * arq;
                    let new_rq = s * arp + c * arq;
                    a[r * n + p] = new_rp;
                    a[p * n + r] = new_rp;
                    a[r * n + q] = new_rq;
                    a[q * n + r] = new_rq;
                }
                a[p * n + p] -= t * apq;
                a[q * n + q] += t * apq;
                a[p * n + q] = 0.0;
                a[q * n + p] = 0.0;
            }
        }
    }
    Ok((0..n).map(|i| a[i * n + i]).collect())
}

/// Adjacency spectrum of `g`.
pub fn eigenvalues(g: &Graph) -> Result<Spectrum> {
    jacobi_eigenvalues(g.adjacency_matrix(), g.n()).map(Spectrum::from_values)
}

/// Minimum eigenvalue `qₙ` of the signless Laplacian `D + A`.
pub fn signless_laplacian_min_eig(g: &Graph) -> Result<f64> {
    let n = g.n();
    if n == 0 {
        return Err(Error::InvalidArgument(
            "signless Laplacian of the graph on zero vertices has no eigenvalues".into(),
        ));
    }
    let mut m = g.adjacency_matrix();
    for v in 0..n {
        m[v * n + v] = g.degree(v) as f64;
    }
    let values = jacobi_eigenvalues(m, n)?;
    Ok(values.into_iter().fold(f64::INFINITY, f64::min))
}

/// `(λ₁ + λₙ) / n`.
pub fn bipartiteness_measure(s: &Spectrum) -> Result<f64> {
    match (s.largest(), s.smallest()) {
        (Some(first), Some(last)) => Ok((first + last) / s.len() as f64),
        _ => Err(Error::InvalidArgument(
            "bipartiteness measure is undefined for zero vertices".into(),
        )),
    }
}

/// `∑ λᵢ^j` with compensated summation.
pub fn power_sum(s: &Spectrum, j: u32) -> f64 {
    compensated_sum(s.values().iter().map(|&x| x.powi(j as i32)))
}

/// Counter type for closed-walk enumeration; `checked_add` returning
/// `None` signals overflow.
trait WalkCount: Clone + Zero + CheckedAdd {
    fn one() -> Self;
}

impl WalkCount for u128 {
    fn one() -> Self {
        1
    }
}

impl WalkCount for BigUint {
    fn one() -> Self {
        BigUint::from(1u8)
    }
}

/// Walks `W ← W·A` for `max_len` steps, reporting `Tr(W)` after each step to
/// `visit(length, trace)`. Stops early when `visit` returns `false`.
fn closed_walks<T, F>(g: &Graph, max_len: usize, mut visit: F) -> Result<()>
where
    T: WalkCount,
    F: FnMut(usize, &T) -> bool,
{
    let n = g.n();
    let adj = g.adjacency_lists();
    // walks[i * n + v]: number of walks of the current length from i to v
    let mut walks = vec![T::zero(); n * n];
    for i in 0..n {
        walks[i * n + i] = T::one();
    }
    let mut next = vec![T::zero(); n * n];
    for length in 1..=max_len {
        for i in 0..n {
            for v in 0..n {
                let mut acc = T::zero();
                for &w in &adj[v] {
                    acc = acc
                        .checked_add(&walks[i * n + w])
                        .ok_or(Error::Overflow { length })?;
                }
                next[i * n + v] = acc;
            }
        }
        std::mem::swap(&mut walks, &mut next);
        let mut trace = T::zero();
        for i in 0..n {
            trace = trace
                .checked_add(&walks[i * n + i])
                .ok_or(Error::Overflow { length })?;
        }
        if !visit(length, &trace) {
            break;
        }
    }
    Ok(())
}

/// Exact `Tr(A^j)`, the number of closed walks of length `j`.
///
/// Counts are kept in `u128`; exceeding it is reported as
/// [`Error::Overflow`] rather than wrapping.
pub fn trace_power(g: &Graph, j: usize) -> Result<u128> {
    if j == 0 {
        return Err(Error::InvalidArgument("trace power needs j >= 1".into()));
    }
    let mut out = 0;
    closed_walks::<u128, _>(g, j, |length, trace| {
        if length == j {
            out = *trace;
        }
        true
    })?;
    Ok(out)
}

/// True iff `Tr(A^j) = 0` exactly for every odd `j ≤ k − 2`.
///
/// Uses arbitrary-precision counts, so this never overflows; it is
/// equivalent to `odd_girth(g) ≥ k`.
pub fn check_trace_identities(g: &Graph, k: usize) -> Result<bool> {
    Ok(first_nonzero_odd_trace(g, k)?.is_none())
}

/// Smallest odd `j ≤ k − 2` with `Tr(A^j) ≠ 0`, if any.
pub fn first_nonzero_odd_trace(g: &Graph, k: usize) -> Result<Option<usize>> {
    require_odd_k(k, 3)?;
    let mut found = None;
    closed_walks::<BigUint, _>(g, k - 2, |length, trace| {
        if length % 2 == 1 && !trace.is_zero() {
            found = Some(length);
        }
        found.is_none()
    })?;
    Ok(found)
}
