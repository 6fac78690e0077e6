//! Exponential sums over arithmetic sequences, their Fejér-type kernels,
//! large-sieve point sets and L¹/L² quadrature on the circle.
//!
//! The crate is `no_std` and only needs `alloc`. Everything here is a pure
//! function of its inputs; the sieve tables are built once and shared
//! read-only by every evaluation. The optional `parallel` feature spreads
//! the heavier grid and point-set sums over a rayon pool without changing
//! any result bit: partial sums are always reduced by the same fixed tree.
//!
//! Modules:
//! - [`arith`]: linear sieve tables (μ, Λ, φ, smallest prime factor),
//!   Ramanujan sums and the coefficient sequences used everywhere else.
//! - [`expsum`]: `F_N`, the Fejér kernel `T_N`, the approximating kernels
//!   `G*_N`, `H_N`, `H_{N,P}`, `K_{N,Q}`, and FFT batch evaluation.
//! - [`quadrature`]: L¹ and L² norms with convergence evidence.
//! - [`largesieve`]: δ-spaced Farey point sets with exact spacing
//!   certificates and the sharp large-sieve inequality.
#![no_std]
#![warn(missing_debug_implementations)]

extern crate alloc;
#[cfg(any(test, feature = "parallel"))]
extern crate std;

pub mod arith;
mod error;
pub mod expsum;
pub mod fft;
pub mod largesieve;
pub mod quadrature;
pub mod sum;

pub use error::{Error, Result};
pub use num_complex::Complex64;

pub use arith::{ArithmeticTables, CoeffKind};
pub use expsum::{CoefficientSequence, GridEvaluation, KernelKind, KernelSpec, Support};
pub use largesieve::{PointSetKind, SieveCheck, SpacedPointSet};
pub use quadrature::{L1Estimate, L1Options};
