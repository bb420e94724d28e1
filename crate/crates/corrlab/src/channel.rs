//! Synthesis of i.i.d. and correlated downlink channel realizations.

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{Error, Result};
use crate::numkit::{psd_sqrt, ComplexMatrix, DEFAULT_CLIP_TOL};

/// System size: `m_antennas` transmit antennas jointly serving `k_users`
/// single-antenna users.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ChannelDims {
    pub m_antennas: usize,
    pub k_users: usize,
}

impl ChannelDims {
    pub fn new(m_antennas: usize, k_users: usize) -> Result<Self> {
        if k_users < 1 || m_antennas < k_users {
            return Err(Error::InvalidParameter {
                name: "dims",
                reason: format!("need M >= K >= 1, got M={m_antennas}, K={k_users}"),
            });
        }
        Ok(Self { m_antennas, k_users })
    }

    /// Antenna-to-user ratio `alpha = M / K`.
    pub fn ratio(&self) -> f64 {
        self.m_antennas as f64 / self.k_users as f64
    }
}

/// One synthesized channel: the raw i.i.d. matrix and the (possibly
/// correlated) channel actually used.
#[derive(Debug, Clone)]
pub struct ChannelRealization {
    pub h_iid: ComplexMatrix,
    pub h: ComplexMatrix,
    pub seed: u64,
}

impl ChannelRealization {
    pub fn iid(dims: ChannelDims, seed: u64) -> Self {
        let h_iid = iid_channel(dims, seed);
        Self { h: h_iid.clone(), h_iid, seed }
    }

    /// Correlated realization `r_sqrt * h_iid` from a precomputed PSD root.
    pub fn correlated_from_sqrt(r_sqrt: &ComplexMatrix, dims: ChannelDims, seed: u64) -> Self {
        let h_iid = iid_channel(dims, seed);
        let h = r_sqrt.mul(&h_iid);
        Self { h_iid, h, seed }
    }
}

/// `M x K` matrix of unit-variance circular complex Gaussians (variance split
/// half-and-half between the real and imaginary parts), deterministic per
/// seed.
pub fn iid_channel(dims: ChannelDims, seed: u64) -> ComplexMatrix {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let scale = std::f64::consts::FRAC_1_SQRT_2;
    ComplexMatrix::from_fn(dims.m_antennas, dims.k_users, |_, _| {
        let re: f64 = StandardNormal.sample(&mut rng);
        let im: f64 = StandardNormal.sample(&mut rng);
        Complex64::new(re * scale, im * scale)
    })
}

/// Applies a transmit correlation to an i.i.d. realization: returns
/// `sqrt(r_t) * h_iid`. Column covariance converges to `r_t` over many
/// realizations.
pub fn correlated_channel(r_t: &ComplexMatrix, h_iid: &ComplexMatrix) -> Result<ComplexMatrix> {
    if r_t.rows() != h_iid.rows() {
        return Err(Error::DimensionMismatch(format!(
            "correlation is {}x{} but channel has {} rows",
            r_t.rows(),
            r_t.cols(),
            h_iid.rows()
        )));
    }
    let root = psd_sqrt(r_t, DEFAULT_CLIP_TOL)?;
    Ok(root.mul(h_iid))
}

/// Per-trial seed derivation: a fixed splitmix64 mix of the master seed and
/// the trial index, so parallel trials are schedule-independent.
pub fn derive_seed(master: u64, index: u64) -> u64 {
    let mut z = master ^ index.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}
