//! A numerical laboratory for rough Fourier integral operators.
//!
//! Operators of the form
//!
//! ```text
//! T_a u(x) = (2π)^{-n} ∫ e^{iφ(x,ξ)} a(x,ξ) û(ξ) dξ
//! ```
//!
//! and their bilinear and multilinear relatives are evaluated on periodized
//! grids in one and two dimensions. The crate provides
//!
//! - [`field`]: grids, sampled functions, the Fourier transform pair, `L^p`
//!   and Lorentz quasinorms, and seeded probe functions;
//! - [`symbols`]: amplitudes, phases, seminorm estimation, phase-class and
//!   non-degeneracy checks, and a catalog of standard examples;
//! - [`thresholds`]: exact rational evaluation of the admissible-order
//!   formulas for linear, bilinear and multilinear boundedness;
//! - [`decomp`]: Littlewood–Paley shells, second dyadic cone covers,
//!   cone-localized amplitudes, phase reduction and Fourier-series
//!   expansion of frequency-compact amplitudes;
//! - [`operators`]: direct quadrature of linear, bilinear and multilinear
//!   operators, the bilinear iteration and the separated multilinear
//!   evaluation, and low-frequency kernels;
//! - [`lab`]: norm estimation, decay fits, configurable experiments with
//!   CSV/JSON output, and the self-test suite behind the `fio-lab` binary.

// `!(x > 0.0)` guards also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod decomp;
pub mod error;
pub mod field;
pub mod lab;
pub mod operators;
pub mod symbols;
pub mod thresholds;

pub use error::{FioError, Result};
pub use num_complex::Complex64;
