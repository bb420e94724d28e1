//! Minimal complex-matrix kernel: Kronecker and Hadamard products, Hermitian
//! eigendecomposition, PSD square root, empirical CDFs, and the adaptive
//! quadrature backing the correlation oracles.

mod cdf;
mod eig;
mod matrix;
pub mod quad;

pub use cdf::{empirical_cdf, mean, median};
pub use eig::{hermitian_eig, psd_sqrt, EigenDecomposition, DEFAULT_CLIP_TOL, HERMITIAN_INPUT_TOL};
pub use matrix::{hadamard, kronecker, ComplexMatrix};
