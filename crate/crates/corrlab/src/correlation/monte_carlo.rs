//! Empirical correlation from instantaneous array factors: draw angular
//! offsets, form the exact per-element phase vectors, and average the outer
//! products.

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::angular::{ClusterAngles, OffsetDistribution};
use crate::error::{Error, Result};
use crate::geometry::{cyl_azimuth_phase, ura_azimuth_phase, zenith_phase, ArrayGeometry};
use crate::numkit::ComplexMatrix;

/// Empirical Kronecker factors; the diagonal is exactly one and the matrices
/// are Hermitian by construction.
#[derive(Debug, Clone)]
pub struct EmpiricalCorrelation {
    pub r_theta: ComplexMatrix,
    pub r_phi: ComplexMatrix,
}

/// Monte-Carlo estimate of the zenith and azimuth correlation factors.
///
/// Draw order per trial is azimuth offset then zenith offset from one seeded
/// stream, so results are deterministic for a given seed. Entries converge
/// to the quadrature values at the usual `1/sqrt(n_draws)` rate.
pub fn corr_empirical_mc(
    geom: &ArrayGeometry,
    cluster: &ClusterAngles,
    n_draws: usize,
    seed: u64,
) -> Result<EmpiricalCorrelation> {
    if n_draws < 10_000 {
        return Err(Error::InvalidParameter {
            name: "n_draws",
            reason: format!("need at least 10_000 draws for a stable estimate, got {n_draws}"),
        });
    }

    let (a_count, b_count, d1) = match geom {
        ArrayGeometry::Ura(g) => (g.a_count, g.b_count, g.d1),
        ArrayGeometry::Cylindrical(g) => (g.a_count, g.b_count, g.d1),
    };

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut acc_theta = vec![Complex64::ZERO; a_count * a_count];
    let mut acc_phi = vec![Complex64::ZERO; b_count * b_count];
    let mut v = vec![Complex64::ZERO; a_count];
    let mut u = vec![Complex64::ZERO; b_count];

    for _ in 0..n_draws {
        let dphi = cluster.azimuth.sample_one(&mut rng);
        let dtheta = cluster.zenith.sample_one(&mut rng);
        let theta_total = cluster.theta_mean + dtheta;
        let phi_total = cluster.phi_mean + dphi;

        for (a, slot) in v.iter_mut().enumerate() {
            *slot = Complex64::new(0.0, zenith_phase(a, d1, theta_total)).exp();
        }
        match geom {
            ArrayGeometry::Ura(g) => {
                for (b, slot) in u.iter_mut().enumerate() {
                    *slot = Complex64::new(0.0, ura_azimuth_phase(b, g.d2, phi_total, theta_total)).exp();
                }
            }
            ArrayGeometry::Cylindrical(g) => {
                for (b, slot) in u.iter_mut().enumerate() {
                    *slot = Complex64::new(
                        0.0,
                        cyl_azimuth_phase(b, g.radius, g.anchor_angles[b], phi_total, theta_total),
                    )
                    .exp();
                }
            }
        }

        for p in 0..a_count {
            for q in (p + 1)..a_count {
                acc_theta[p * a_count + q] += v[p] * v[q].conj();
            }
        }
        for p in 0..b_count {
            for q in (p + 1)..b_count {
                acc_phi[p * b_count + q] += u[p] * u[q].conj();
            }
        }
    }

    let inv = 1.0 / n_draws as f64;
    let finish = |acc: &[Complex64], n: usize| {
        ComplexMatrix::from_fn(n, n, |r, c| {
            if r == c {
                // zero phase difference with itself
                Complex64::ONE
            } else if r < c {
                acc[r * n + c] * inv
            } else {
                (acc[c * n + r] * inv).conj()
            }
        })
    };

    Ok(EmpiricalCorrelation {
        r_theta: finish(&acc_theta, a_count),
        r_phi: finish(&acc_phi, b_count),
    })
}
