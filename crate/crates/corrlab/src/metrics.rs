//! Convergence metrics on the normalized Gram matrix `W = H^T H* / M` and
//! its deviation `E = W - I`.

use num_complex::Complex64;

use crate::error::Result;
use crate::numkit::{hermitian_eig, ComplexMatrix};

/// The metric bundle for one channel realization. `diag_dominance` is
/// `f64::INFINITY` when the off-diagonal mass is exactly zero (the ideal
/// limit, not a fault).
#[derive(Debug, Clone)]
pub struct GramStats {
    pub w: ComplexMatrix,
    pub e: ComplexMatrix,
    pub lambda_range: f64,
    pub mad: f64,
    pub diag_dominance: f64,
}

/// `K x K` normalized Gram matrix `(1/M) H^T H*`; Hermitian PSD.
pub fn gram(h: &ComplexMatrix, m_antennas: usize) -> ComplexMatrix {
    assert_eq!(h.rows(), m_antennas, "gram: row count must equal the antenna count");
    let k = h.cols();
    let inv_m = 1.0 / m_antennas as f64;
    let mut w = ComplexMatrix::zeros(k, k);
    for i in 0..k {
        for j in i..k {
            let mut acc = Complex64::ZERO;
            for m in 0..m_antennas {
                acc += h[(m, i)] * h[(m, j)].conj();
            }
            let v = acc * inv_m;
            w[(i, j)] = v;
            if i != j {
                w[(j, i)] = v.conj();
            } else {
                w[(i, i)] = Complex64::new(v.re, 0.0);
            }
        }
    }
    w
}

/// Spread between the extreme eigenvalues of a Hermitian matrix.
pub fn lambda_range(w: &ComplexMatrix) -> Result<f64> {
    let eig = hermitian_eig(w)?;
    Ok(eig.eigenvalues.first().unwrap_or(&0.0) - eig.eigenvalues.last().unwrap_or(&0.0))
}

/// Mean absolute deviation: mean entrywise modulus of `E`.
pub fn mad(e: &ComplexMatrix) -> f64 {
    let k2 = (e.rows() * e.cols()) as f64;
    e.data().iter().map(|z| z.norm()).sum::<f64>() / k2
}

/// Ratio of the diagonal sum to the total off-diagonal modulus mass;
/// `f64::INFINITY` when the off-diagonal mass is zero.
pub fn diagonal_dominance(w: &ComplexMatrix) -> f64 {
    assert!(w.is_square(), "diagonal_dominance: non-square matrix");
    let k = w.rows();
    let mut diag = 0.0;
    let mut off = 0.0;
    for i in 0..k {
        for j in 0..k {
            if i == j {
                diag += w[(i, i)].re;
            } else {
                off += w[(i, j)].norm();
            }
        }
    }
    if off == 0.0 {
        f64::INFINITY
    } else {
        diag / off
    }
}

/// Computes all metrics for one realization.
pub fn gram_stats(h: &ComplexMatrix, m_antennas: usize) -> Result<GramStats> {
    let w = gram(h, m_antennas);
    let e = w.sub(&ComplexMatrix::identity(w.rows()));
    let lambda_range = lambda_range(&w)?;
    let mad = mad(&e);
    let diag_dominance = diagonal_dominance(&w);
    Ok(GramStats { w, e, lambda_range, mad, diag_dominance })
}
