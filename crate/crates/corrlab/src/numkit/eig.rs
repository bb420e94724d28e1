//! Hermitian eigendecomposition via cyclic complex Jacobi rotations, and the
//! positive-semidefinite square root built on top of it.
//!
//! Jacobi is slower than Householder tridiagonalization but numerically very
//! accurate and simple enough to trust at the matrix sizes used here
//! (up to ~1000 x 1000).

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::numkit::matrix::ComplexMatrix;

/// Absolute-ish tolerance for accepting an input as Hermitian, scaled by the
/// largest entry modulus.
pub const HERMITIAN_INPUT_TOL: f64 = 1e-9;

/// Default clipping tolerance for [`psd_sqrt`]: eigenvalues in
/// `[-clip_tol * lambda_max, 0)` are clipped to zero, anything lower is an
/// error signalling a broken correlation approximation.
pub const DEFAULT_CLIP_TOL: f64 = 1e-8;

/// Eigendecomposition of a Hermitian matrix.
///
/// `eigenvalues` are real and sorted in descending order; column `i` of
/// `eigenvectors` is the unit eigenvector for `eigenvalues[i]`.
#[derive(Debug, Clone)]
pub struct EigenDecomposition {
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: ComplexMatrix,
}

impl EigenDecomposition {
    /// Rebuilds `V diag(lambda) V^H`.
    pub fn reconstruct(&self) -> ComplexMatrix {
        let n = self.eigenvalues.len();
        let v = &self.eigenvectors;
        ComplexMatrix::from_fn(n, n, |r, c| {
            (0..n)
                .map(|k| v[(r, k)] * self.eigenvalues[k] * v[(c, k)].conj())
                .sum()
        })
    }
}

/// Eigendecomposition of a Hermitian matrix.
///
/// The input must be Hermitian within [`HERMITIAN_INPUT_TOL`]; it is
/// symmetrized before the rotations start, so roundoff-level asymmetry is
/// harmless.
pub fn hermitian_eig(m: &ComplexMatrix) -> Result<EigenDecomposition> {
    m.check_hermitian(HERMITIAN_INPUT_TOL)?;
    let n = m.rows();
    let mut a = m.hermitize();
    let mut v = ComplexMatrix::identity(n);

    if n <= 1 {
        return Ok(EigenDecomposition {
            eigenvalues: (0..n).map(|i| a[(i, i)].re).collect(),
            eigenvectors: v,
        });
    }

    let fro = a.frobenius_norm().max(f64::MIN_POSITIVE);
    let target = 1e-14 * fro;
    const MAX_SWEEPS: usize = 60;

    for _sweep in 0..MAX_SWEEPS {
        let mut off_sq = 0.0;
        for i in 0..n {
            for j in (i + 1)..n {
                off_sq += a[(i, j)].norm_sqr();
            }
        }
        if (2.0 * off_sq).sqrt() <= target {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                rotate(&mut a, &mut v, p, q);
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    let diag: Vec<f64> = (0..n).map(|i| a[(i, i)].re).collect();
    order.sort_by(|&x, &y| diag[y].total_cmp(&diag[x]));

    let eigenvalues: Vec<f64> = order.iter().map(|&i| diag[i]).collect();
    let eigenvectors = ComplexMatrix::from_fn(n, n, |r, c| v[(r, order[c])]);
    Ok(EigenDecomposition { eigenvalues, eigenvectors })
}

/// One complex Jacobi rotation zeroing `a[p][q]`.
fn rotate(a: &mut ComplexMatrix, v: &mut ComplexMatrix, p: usize, q: usize) {
    let apq = a[(p, q)];
    let mag = apq.norm();
    if mag == 0.0 {
        return;
    }
    let app = a[(p, p)].re;
    let aqq = a[(q, q)].re;
    let phase = apq / mag;

    // Small-angle root of t^2 - 2*theta*t - 1 = 0 zeroes the rotated
    // off-diagonal entry.
    let theta = (aqq - app) / (2.0 * mag);
    let t = if theta == 0.0 {
        1.0
    } else {
        -theta.signum() / (theta.abs() + (1.0 + theta * theta).sqrt())
    };
    let c = 1.0 / (1.0 + t * t).sqrt();
    let s = t * c;

    // Unitary plane rotation: u_pp = u_qq = c, u_qp = sigma, u_pq = -conj(sigma).
    let sigma = s * phase.conj();

    let n = a.rows();
    // A <- A U (columns p, q)
    for k in 0..n {
        let akp = a[(k, p)];
        let akq = a[(k, q)];
        a[(k, p)] = c * akp + sigma * akq;
        a[(k, q)] = -sigma.conj() * akp + c * akq;
    }
    // A <- U^H A (rows p, q)
    for k in 0..n {
        let apk = a[(p, k)];
        let aqk = a[(q, k)];
        a[(p, k)] = c * apk + sigma.conj() * aqk;
        a[(q, k)] = -sigma * apk + c * aqk;
    }
    // Pin the analytically known entries.
    a[(p, q)] = Complex64::ZERO;
    a[(q, p)] = Complex64::ZERO;
    a[(p, p)] = Complex64::new(a[(p, p)].re, 0.0);
    a[(q, q)] = Complex64::new(a[(q, q)].re, 0.0);

    // V <- V U
    for k in 0..v.rows() {
        let vkp = v[(k, p)];
        let vkq = v[(k, q)];
        v[(k, p)] = c * vkp + sigma * vkq;
        v[(k, q)] = -sigma.conj() * vkp + c * vkq;
    }
}

/// Hermitian PSD square root `V diag(sqrt(max(lambda, 0))) V^H`.
///
/// Eigenvalues below `-clip_tol * lambda_max` yield [`Error::NotPsd`]; the
/// tiny negatives the closed-form correlation approximations can produce are
/// clipped to zero.
pub fn psd_sqrt(m: &ComplexMatrix, clip_tol: f64) -> Result<ComplexMatrix> {
    let eig = hermitian_eig(m)?;
    let lambda_max = eig.eigenvalues.first().copied().unwrap_or(0.0).max(0.0);
    let floor = -clip_tol * lambda_max;
    for &l in &eig.eigenvalues {
        if l < floor {
            return Err(Error::NotPsd { min_eigenvalue: l, lambda_max });
        }
    }
    let roots: Vec<f64> = eig.eigenvalues.iter().map(|&l| l.max(0.0).sqrt()).collect();
    let n = m.rows();
    let v = &eig.eigenvectors;
    Ok(ComplexMatrix::from_fn(n, n, |r, c| {
        (0..n).map(|k| v[(r, k)] * roots[k] * v[(c, k)].conj()).sum()
    }))
}
