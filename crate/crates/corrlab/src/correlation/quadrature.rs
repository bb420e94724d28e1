//! Ground-truth correlation values by adaptive quadrature of the defining
//! integrals with exact element phases (no small-angle expansion).

use std::cell::Cell;
use std::f64::consts::{PI, TAU};

use num_complex::Complex64;

use crate::angular::{ClusterAngles, OffsetDistribution};
use crate::error::{Error, Result};
use crate::geometry::AntennaIndexPair;
use crate::numkit::quad::integrate_complex;

const MAX_SEGMENTS: usize = 40_000;

fn check_tol(tol: f64) -> Result<()> {
    if !(tol > 0.0) || !tol.is_finite() {
        return Err(Error::InvalidParameter {
            name: "tol",
            reason: format!("must be a positive finite tolerance, got {tol}"),
        });
    }
    Ok(())
}

/// Breakpoints seeding the subdivision around the density spike and the
/// Laplacian kink at zero. The geometric ladder keeps every tail octave
/// visible to the error estimator; without it the slow Laplacian tail hides
/// inside one huge segment whose quadrature nodes all see zero density.
fn spike_breakpoints(sigma: f64) -> Vec<f64> {
    [
        -32.0, -16.0, -8.0, -4.0, -2.0, -1.0, 0.0, 1.0, 2.0, 4.0, 8.0, 16.0, 32.0,
    ]
    .iter()
    .map(|k| k * sigma)
    .filter(|x| x.abs() < PI)
    .collect()
}

/// Zenith correlation by 1D quadrature of the exact-phase integrand against
/// the truncated Laplacian, to absolute tolerance `tol`.
pub fn zenith_corr_quadrature(
    pair: AntennaIndexPair,
    d1: f64,
    cluster: &ClusterAngles,
    tol: f64,
) -> Result<Complex64> {
    check_tol(tol)?;
    let kd = TAU * d1 * pair.separation() as f64;
    let theta = cluster.theta_mean;
    let zenith = cluster.zenith;
    integrate_complex(
        |dt| {
            let density = zenith.density(dt);
            if density == 0.0 {
                return Complex64::ZERO;
            }
            Complex64::new(0.0, kd * (theta + dt).cos()).exp() * density
        },
        -PI,
        PI,
        &spike_breakpoints(zenith.sigma_dtheta()),
        tol,
        MAX_SEGMENTS,
    )
}

/// Azimuth correlation by iterated 2D quadrature over both angular offsets,
/// exact phases, to absolute tolerance `tol`. `spacing` is the element
/// spacing (rectangular) or ring radius (cylindrical); `anchor` is the
/// azimuth anchor of the pair's first element (zero for a rectangular array).
pub fn azimuth_corr_quadrature(
    pair: AntennaIndexPair,
    spacing: f64,
    anchor: f64,
    cluster: &ClusterAngles,
    tol: f64,
) -> Result<Complex64> {
    check_tol(tol)?;
    let kd = TAU * spacing * pair.separation() as f64;
    let phi_eff = cluster.phi_mean - anchor;
    let theta = cluster.theta_mean;
    let azimuth = cluster.azimuth;
    let zenith = cluster.zenith;

    let inner_tol = 0.25 * tol;
    let outer_tol = 0.5 * tol;
    let inner_bp = spike_breakpoints(azimuth.sigma_dphi());
    let inner_error: Cell<Option<Error>> = Cell::new(None);

    let outer = integrate_complex(
        |dt| {
            let density = zenith.density(dt);
            if density == 0.0 {
                return Complex64::ZERO;
            }
            let s_theta = (theta + dt).sin();
            let inner = integrate_complex(
                |dp| {
                    let w = azimuth.density(dp);
                    if w == 0.0 {
                        return Complex64::ZERO;
                    }
                    Complex64::new(0.0, kd * (phi_eff + dp).cos() * s_theta).exp() * w
                },
                -PI,
                PI,
                &inner_bp,
                inner_tol,
                MAX_SEGMENTS,
            );
            match inner {
                Ok(v) => v * density,
                Err(e) => {
                    if inner_error.take().is_none() {
                        inner_error.set(Some(e));
                    }
                    Complex64::ZERO
                }
            }
        },
        -PI,
        PI,
        &spike_breakpoints(zenith.sigma_dtheta()),
        outer_tol,
        MAX_SEGMENTS,
    )?;

    if let Some(e) = inner_error.take() {
        return Err(e);
    }
    Ok(outer)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::angular::{AzimuthWrappedGaussian, ZenithLaplacian};
    use crate::correlation::closed_form::{
        ura_azimuth_corr_closed, zenith_corr_closed, ClosedFormConfig,
    };

    fn table_cluster() -> ClusterAngles {
        let mean = 10f64.powf(0.7).to_radians();
        let sd = 10f64.powf(-0.3).to_radians();
        ClusterAngles::new(
            mean,
            mean,
            AzimuthWrappedGaussian::new(sd).unwrap(),
            ZenithLaplacian::new(sd).unwrap(),
        )
        .unwrap()
    }

    #[test]
    fn zero_separation_integrates_the_density() {
        let cluster = table_cluster();
        let z = zenith_corr_quadrature(AntennaIndexPair::new(2, 2), 0.5, &cluster, 1e-9).unwrap();
        assert!((z - Complex64::ONE).norm() < 1e-8, "zenith {z}");
        let a = azimuth_corr_quadrature(AntennaIndexPair::new(1, 1), 0.5, 0.0, &cluster, 1e-7).unwrap();
        assert!((a - Complex64::ONE).norm() < 1e-6, "azimuth {a}");
    }

    #[test]
    fn conjugate_symmetry() {
        let cluster = table_cluster();
        let v = zenith_corr_quadrature(AntennaIndexPair::new(3, 1), 0.5, &cluster, 1e-9).unwrap();
        let w = zenith_corr_quadrature(AntennaIndexPair::new(1, 3), 0.5, &cluster, 1e-9).unwrap();
        assert!((v - w.conj()).norm() < 1e-8);

        let v = azimuth_corr_quadrature(AntennaIndexPair::new(2, 0), 0.5, 0.0, &cluster, 1e-6).unwrap();
        let w = azimuth_corr_quadrature(AntennaIndexPair::new(0, 2), 0.5, 0.0, &cluster, 1e-6).unwrap();
        assert!((v - w.conj()).norm() < 1e-5);
    }

    #[test]
    fn halving_tolerance_is_self_consistent() {
        let cluster = table_cluster();
        let pair = AntennaIndexPair::new(2, 0);
        let coarse = zenith_corr_quadrature(pair, 0.5, &cluster, 2e-8).unwrap();
        let fine = zenith_corr_quadrature(pair, 0.5, &cluster, 1e-8).unwrap();
        assert!((coarse - fine).norm() <= 2e-8);

        let coarse = azimuth_corr_quadrature(pair, 0.5, 0.0, &cluster, 2e-6).unwrap();
        let fine = azimuth_corr_quadrature(pair, 0.5, 0.0, &cluster, 1e-6).unwrap();
        assert!((coarse - fine).norm() <= 2e-6);
    }

    #[test]
    fn closed_form_tracks_oracle_at_narrow_spread() {
        let cluster = table_cluster();
        let cfg = ClosedFormConfig::default();
        let pair = AntennaIndexPair::new(1, 0);
        let zq = zenith_corr_quadrature(pair, 0.5, &cluster, 1e-8).unwrap();
        let zc = zenith_corr_closed(pair, 0.5, &cluster);
        assert!((zq - zc).norm() < 1e-3, "zenith gap {}", (zq - zc).norm());

        let aq = azimuth_corr_quadrature(pair, 0.5, 0.0, &cluster, 1e-6).unwrap();
        let ac = ura_azimuth_corr_closed(pair, 0.5, &cluster, &cfg);
        assert!((aq - ac).norm() < 5e-2, "azimuth gap {}", (aq - ac).norm());
    }

    #[test]
    fn rejects_bad_tolerance() {
        let cluster = table_cluster();
        assert!(zenith_corr_quadrature(AntennaIndexPair::new(1, 0), 0.5, &cluster, 0.0).is_err());
        assert!(azimuth_corr_quadrature(AntennaIndexPair::new(1, 0), 0.5, 0.0, &cluster, -1.0).is_err());
    }
}
