//! Linear response of the quantum vacuum to moving corrugated plates.
//!
//! A scalar field obeying Dirichlet conditions on one or two parallel
//! plates reacts to small lateral deformations of the plates. To second
//! order in the deformation amplitude the reaction is captured by two
//! kernels, `A_+` (self-interaction of one plate) and `A_-` (cross
//! interaction between plates), both functions of the in-plane wave vector
//! `q`, the frequency `omega` and the plate separation `H`.
//!
//! Everything in this crate is computed in natural units (`c = hbar = 1`,
//! lengths measured in a chosen reference length) except the [`response`]
//! layer, which accepts and returns SI quantities.
//!
//! The crate is `no_std` with `alloc`; disable the default `std` feature to
//! build it for bare targets.

#![cfg_attr(not(feature = "std"), no_std)]
#![forbid(unsafe_code)]
// Quadrature constants keep their published digits; negated comparisons
// reject NaN; component loops walk parallel arrays.
#![allow(
    clippy::excessive_precision,
    clippy::neg_cmp_op_on_partial_ord,
    clippy::needless_range_loop
)]

extern crate alloc;

mod error;
pub mod kernels;
pub mod oracle;
pub mod quadrature;
pub mod response;
pub mod units;

pub use error::{Error, Result};
pub use kernels::{KernelEvaluator, KernelPair, KernelPoint, KernelValue, Region, Separation};
pub use quadrature::{QuadratureResult, QuadratureSpec};
