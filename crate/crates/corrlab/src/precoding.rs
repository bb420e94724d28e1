//! Matched-filter downlink SINR per user and its Monte-Carlo expectation.

use num_complex::Complex64;
use rayon::prelude::*;

use crate::channel::{derive_seed, iid_channel, ChannelDims};
use crate::correlation::CorrelationSet;
use crate::error::{Error, Result};
use crate::numkit::{psd_sqrt, ComplexMatrix, DEFAULT_CLIP_TOL};

/// Scenario for the SINR expectation sweep.
#[derive(Debug, Clone, Copy)]
pub struct SinrScenario {
    /// Downlink transmit SNR, linear.
    pub rho_d: f64,
    pub dims: ChannelDims,
    pub correlated: bool,
}

/// Monte-Carlo SINR estimate, linear and in dB.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SinrEstimate {
    pub linear: f64,
    pub db: f64,
}

/// Per-realization transmit power normalization `trace(H^T H*) / K`.
pub fn power_normalization(h: &ComplexMatrix) -> f64 {
    let k = h.cols() as f64;
    h.data().iter().map(|z| z.norm_sqr()).sum::<f64>() / k
}

/// Matched-filter SINR of each user for one channel realization.
///
/// Column inner products are taken in the transpose-conjugate convention of
/// the Gram matrix `H^T H*`; the interference kernel
/// `h_i^T h_j* h_j^T h_i*` is then the squared modulus of one entry.
pub fn mf_sinr_per_user(h: &ComplexMatrix, rho_d: f64) -> Result<Vec<f64>> {
    if !(rho_d > 0.0) || !rho_d.is_finite() {
        return Err(Error::InvalidParameter {
            name: "rho_d",
            reason: format!("transmit SNR must be positive and finite, got {rho_d}"),
        });
    }
    let k = h.cols();
    let m = h.rows();
    let gamma = power_normalization(h);
    if gamma == 0.0 {
        return Err(Error::DegenerateInput("mf_sinr_per_user: all-zero channel"));
    }
    let c = rho_d / (k as f64 * gamma);

    // G = H^T H*
    let mut g = vec![Complex64::ZERO; k * k];
    for i in 0..k {
        for j in i..k {
            let mut acc = Complex64::ZERO;
            for row in 0..m {
                acc += h[(row, i)] * h[(row, j)].conj();
            }
            g[i * k + j] = acc;
            g[j * k + i] = acc.conj();
        }
    }

    Ok((0..k)
        .map(|i| {
            let signal = c * g[i * k + i].norm_sqr();
            let interference: f64 = (0..k)
                .filter(|&j| j != i)
                .map(|j| g[i * k + j].norm_sqr())
                .sum();
            signal / (1.0 + c * interference)
        })
        .collect())
}

/// Monte-Carlo expectation of the per-user matched-filter SINR, averaged over
/// users and trials with per-trial derived seeds; deterministic per seed.
///
/// `corr` must be provided exactly when `scenario.correlated` is set.
pub fn expected_sinr(
    scenario: &SinrScenario,
    corr: Option<&CorrelationSet>,
    n_trials: usize,
    seed: u64,
) -> Result<SinrEstimate> {
    if n_trials < 100 {
        return Err(Error::InvalidParameter {
            name: "n_trials",
            reason: format!("need at least 100 trials, got {n_trials}"),
        });
    }
    let root = match (scenario.correlated, corr) {
        (true, Some(set)) => Some(psd_sqrt(&set.r_t, DEFAULT_CLIP_TOL)?),
        (true, None) => {
            return Err(Error::InvalidParameter {
                name: "corr",
                reason: "correlated scenario requires a correlation set".into(),
            })
        }
        (false, _) => None,
    };

    let per_trial: Vec<Result<f64>> = (0..n_trials as u64)
        .into_par_iter()
        .map(|t| {
            let h_iid = iid_channel(scenario.dims, derive_seed(seed, t));
            let h = match &root {
                Some(r) => r.mul(&h_iid),
                None => h_iid,
            };
            let sinrs = mf_sinr_per_user(&h, scenario.rho_d)?;
            Ok(sinrs.iter().sum::<f64>() / sinrs.len() as f64)
        })
        .collect();

    // fixed-order accumulation for bit-reproducibility
    let mut acc = 0.0;
    for r in per_trial {
        acc += r?;
    }
    let linear = acc / n_trials as f64;
    Ok(SinrEstimate { linear, db: 10.0 * linear.log10() })
}
