//! Transmit-correlation construction: closed-form engines for both array
//! topologies, two independent oracles (quadrature and Monte Carlo), the
//! cross-polarization overlay, and assembly of the full transmit matrix.

pub mod closed_form;
pub mod monte_carlo;
pub mod quadrature;

pub use closed_form::{
    azimuth_summand_params, cyl_azimuth_corr_closed, ura_azimuth_corr_closed, zenith_corr_closed,
    AzimuthSummandParams, BranchMode, ClosedFormConfig, ThetaBranch,
};
pub use monte_carlo::{corr_empirical_mc, EmpiricalCorrelation};
pub use quadrature::{azimuth_corr_quadrature, zenith_corr_quadrature};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::numkit::{hadamard, kronecker, psd_sqrt, ComplexMatrix, HERMITIAN_INPUT_TOL};

/// Correlation factors and the assembled transmit correlation.
#[derive(Debug, Clone)]
pub struct CorrelationSet {
    /// Zenith factor, `A x A`.
    pub r_theta: ComplexMatrix,
    /// Azimuth factor, `B x B`.
    pub r_phi: ComplexMatrix,
    /// Co-polarized correlation `r_phi (x) r_theta`, `M x M`.
    pub r_copol: ComplexMatrix,
    /// Cross-polarization overlay, `M x M`.
    pub xpol: ComplexMatrix,
    /// Transmit correlation `xpol (.) r_copol`, `M x M`.
    pub r_t: ComplexMatrix,
    /// Cross-polarization power coupling, in `[0, 1]`.
    pub delta: f64,
}

impl CorrelationSet {
    pub fn antenna_count(&self) -> usize {
        self.r_t.rows()
    }
}

/// Cross-polarization overlay: ones tiled with the 2x2 coupling block, so
/// every entry is either 1 (same polarization) or `sqrt(delta)`.
pub fn xpol_matrix(m_dim: usize, delta: f64) -> Result<ComplexMatrix> {
    if m_dim == 0 || m_dim % 2 != 0 {
        return Err(Error::InvalidParameter {
            name: "m_dim",
            reason: format!("x-pol pairing needs an even positive antenna count, got {m_dim}"),
        });
    }
    if !(0.0..=1.0).contains(&delta) {
        return Err(Error::InvalidParameter {
            name: "delta",
            reason: format!("cross-correlation must lie in [0, 1], got {delta}"),
        });
    }
    let root = delta.sqrt();
    let block = ComplexMatrix::from_fn(2, 2, |r, c| {
        if r == c {
            Complex64::ONE
        } else {
            Complex64::new(root, 0.0)
        }
    });
    kronecker(&ComplexMatrix::ones(m_dim / 2, m_dim / 2), &block)
}

/// Builds the full [`CorrelationSet`] from the two factors.
pub fn assemble(r_phi: &ComplexMatrix, r_theta: &ComplexMatrix, delta: f64) -> Result<CorrelationSet> {
    r_phi.check_hermitian(HERMITIAN_INPUT_TOL)?;
    r_theta.check_hermitian(HERMITIAN_INPUT_TOL)?;
    let r_copol = kronecker(r_phi, r_theta)?;
    let m = r_copol.rows();
    let xpol = xpol_matrix(m, delta)?;
    let r_t = hadamard(&xpol, &r_copol)?;
    Ok(CorrelationSet {
        r_theta: r_theta.clone(),
        r_phi: r_phi.clone(),
        r_copol,
        xpol,
        r_t,
        delta,
    })
}

/// PSD square root of the transmit correlation, kept in factored form when
/// the structure allows it.
///
/// The x-pol overlay is 2-periodic in the antenna index. With the Kronecker
/// index split `i = p * A + q`, an even zenith count `A` makes the overlay
/// depend on the zenith indices alone, so
/// `X (.) (R_phi (x) R_theta) = R_phi (x) (X_A (.) R_theta)` and the root
/// factors into two small roots. That turns the per-realization `M x M`
/// multiply into two thin ones and keeps eigendecompositions at factor size.
#[derive(Debug, Clone)]
pub enum CorrelationRoot {
    Full(ComplexMatrix),
    Factored {
        /// `B x B` root of the azimuth factor.
        phi_root: ComplexMatrix,
        /// `A x A` root of the zenith factor with the x-pol overlay folded in.
        zenith_root: ComplexMatrix,
    },
}

impl CorrelationRoot {
    /// Builds the root, factoring when the zenith count is even.
    pub fn from_set(set: &CorrelationSet, clip_tol: f64) -> Result<Self> {
        let a = set.r_theta.rows();
        if a % 2 == 0 {
            let folded = hadamard(&xpol_matrix(a, set.delta)?, &set.r_theta)?;
            Ok(CorrelationRoot::Factored {
                phi_root: psd_sqrt(&set.r_phi, clip_tol)?,
                zenith_root: psd_sqrt(&folded, clip_tol)?,
            })
        } else {
            Ok(CorrelationRoot::Full(psd_sqrt(&set.r_t, clip_tol)?))
        }
    }

    pub fn antenna_count(&self) -> usize {
        match self {
            CorrelationRoot::Full(m) => m.rows(),
            CorrelationRoot::Factored { phi_root, zenith_root } => {
                phi_root.rows() * zenith_root.rows()
            }
        }
    }

    /// `root * h` for an `M x K` realization.
    pub fn apply(&self, h: &ComplexMatrix) -> ComplexMatrix {
        match self {
            CorrelationRoot::Full(m) => m.mul(h),
            CorrelationRoot::Factored { phi_root, zenith_root } => {
                let a = zenith_root.rows();
                let b = phi_root.rows();
                let m = a * b;
                assert_eq!(h.rows(), m, "apply: row count mismatch");
                let k_users = h.cols();
                let mut out = ComplexMatrix::zeros(m, k_users);
                // (P (x) Z) h per column: reshape to A x B, apply Z on the
                // left and P^T on the right
                let mut zc = vec![Complex64::ZERO; a * b];
                for k in 0..k_users {
                    for (p, chunk) in zc.chunks_mut(a).enumerate() {
                        for (q, slot) in chunk.iter_mut().enumerate() {
                            let mut acc = Complex64::ZERO;
                            for qp in 0..a {
                                acc += zenith_root[(q, qp)] * h[(p * a + qp, k)];
                            }
                            *slot = acc;
                        }
                    }
                    for p in 0..b {
                        for q in 0..a {
                            let mut acc = Complex64::ZERO;
                            for pp in 0..b {
                                acc += phi_root[(p, pp)] * zc[pp * a + q];
                            }
                            out[(p * a + q, k)] = acc;
                        }
                    }
                }
                out
            }
        }
    }
}
