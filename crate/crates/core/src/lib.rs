//! Verification library for the complex "square root" of a Wiener process.
//!
//! * [`ito_algebra`]: exact formal Itô products on `{1, dt, dW, |dW|, sign(dW), sign(dW)·dt}`
//!   and the coefficient conditions that make `[dX]² = dW` modulo null-measure terms.
//! * [`paths`]: reproducible Wiener paths and variation statistics.
//! * [`regularization`]: the zeta/Abel assignments and the `∫|dW|` mean-square example.
//! * [`sqrt_process`]: Monte Carlo sampling of the complex square-root process.
//! * [`pde`]: Crank–Nicolson solver for the complex forward (Schrödinger-type) equation.
//! * [`binomial_map`]: the square-root-of-binomial discrete wavefunction.

// `!(x > 0.0)` is used on purpose so that NaN is rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod binomial_map;
pub mod error;
pub mod ito_algebra;
pub mod paths;
pub mod pde;
pub mod regularization;
pub mod sqrt_process;
pub mod stats;

pub use error::{Error, Result};
pub use num_complex::Complex64;

pub use binomial_map::DiscreteWave;
pub use ito_algebra::{BasisMonomial, CRational, ItoExpr, Poly, SqrtAnsatzCoefficients};
pub use paths::{IncrementDecomposition, WienerPath};
pub use pde::{EvolutionCoefficients, GridSpec, Moments, WaveGrid};
pub use regularization::RegularizedSum;
pub use sqrt_process::{ComplexProcessPath, PhasePath};
pub use stats::MeanEstimate;
