//! Exact evaluation and verification of generalized Fibonacci sequences.
//!
//! A sequence `{G_n : (u, v | a, b)}` starts from `G_0 = u`, `G_1 = v` and
//! follows `G_n = a G_{n-1} + b G_{n-2}`. The companion sequence `F_n` uses
//! the same `(a, b)` with seeds `(0, 1)`.
//!
//! The crate is organized by the kind of question being asked:
//!
//! * [`sequence`]: parameters, linear-time and logarithmic-time evaluation.
//! * [`quadfield`]: exact arithmetic in `Q(ω)`, `ω² = aω + b`, and Binet forms.
//! * [`identities`]: the addition formula and the determinant identity.
//! * [`divisibility`]: coprimality lemmas and divisibility-sequence scans.
//! * [`diophantine`]: `5x² + 4y² = z²`, sums of two squares, bisquable sequences.
//! * [`divisors`]: factorization, `τ`, `Ω`, ranks of apparition, primitive divisors.
//!
//! Everything is exact; there is no floating point anywhere in the crate.

pub mod diophantine;
pub mod divisibility;
pub mod divisors;
pub mod error;
pub mod identities;
pub mod quadfield;
pub mod sequence;

pub use error::{Error, Result};
pub use sequence::{f_fast, g_fast, g_iter, g_matrix, PairState, SequenceParams};

pub use num_bigint::BigInt;
pub use num_rational::BigRational;
