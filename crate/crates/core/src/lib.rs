//! Pell equations and polygonal numbers.
//!
//! * [`pell`]: fundamental solutions of `x² − m·y² = ±1` via continued
//!   fractions, and the group law on solutions.
//! * [`congruence`]: the cyclic group of Pell solutions modulo `q` and the
//!   congruence conditions that make a Pell solution produce polygonal
//!   multiples.
//! * [`gonal`]: `P(ℓ, r) = m·P(ℓ, s)` by unit composition and by brute
//!   force, plus triangular ratios `a·Δ = b·Δ'`.
//! * [`simultaneous`]: `P = m·P' = n·P''` via integer points on
//!   `Y² = X(X − A)(X − B)`.
//! * [`cli`]: the `polypell` command-line front end.

pub mod arith;
pub mod cli;
pub mod congruence;
pub mod error;
pub mod gonal;
pub mod pell;
pub mod simultaneous;

pub use error::{Error, Result};
