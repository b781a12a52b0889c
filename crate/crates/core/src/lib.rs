//! Spectral bipartiteness `(λ₁ + λₙ)/n` versus odd girth.
//!
//! * [`graph`] and [`graph6`]: graphs, generators, blow-ups, odd girth,
//!   graph6 I/O and exhaustive enumeration of small labeled graphs.
//! * [`spectral`]: Jacobi eigenvalues, exact closed-walk traces, the
//!   bipartiteness measure and the signless Laplacian minimum eigenvalue.
//! * [`odd_poly`]: odd polynomials, Chebyshev polynomials and the
//!   certificate polynomials used by the bounds.
//! * [`bounds`]: every closed-form bound plus per-graph certificates.
//! * [`gamma5prime`]: the relaxed triangle-free supremum and its extremal
//!   construction.
//! * [`scan`]: deterministic parallel scans over graph corpora.

// `!(x >= 0.0)` guards deliberately reject NaN along with out-of-range values.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bounds;
pub mod error;
pub mod gamma5prime;
pub mod graph;
pub mod graph6;
pub mod numeric;
pub mod odd_poly;
pub mod scan;
pub mod spectral;

pub use error::{Error, Result};
pub use graph::{Graph, OddGirth};
pub use spectral::Spectrum;
