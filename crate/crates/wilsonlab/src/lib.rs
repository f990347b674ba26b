//! Factorial-family residues modulo n, two ways.
//!
//! For each member of the factorial family (factorial, double factorial,
//! hyperfactorial, superfactorial, subfactorial, Gauss factorial, unit
//! product) this crate provides
//!
//! * an **oracle**: the definitional O(n) modular product, and
//! * a **closed form**: the Wilson-style congruence that predicts the same
//!   residue from the arithmetic shape of n alone (primality, residue class,
//!   two-adic valuation), usually in O(log n).
//!
//! The [`verify`] module cross-checks the two over ranges and reports
//! agreement; the `wilsonlab` binary exposes the same machinery on the
//! command line.
//!
//! ```
//! use wilsonlab::{closedform, oracles};
//!
//! // 11!! = 10395 and 10395 = 12 * 866 + 3
//! assert_eq!(oracles::double_factorial_mod(11, 12), 3);
//! assert_eq!(closedform::df_closed(12).unwrap(), 3);
//! ```

// Parity tests like `((p - 1) / 2) % 2 == 0` transcribe the exponents of
// the congruences they implement; rewriting them via div_ceil or
// is_multiple_of would hide the formula.
#![allow(clippy::manual_div_ceil, clippy::manual_is_multiple_of)]

pub mod closedform;
mod error;
pub mod matrix;
pub mod modmath;
pub mod oracles;
pub mod verify;

pub use error::{Error, Result};
