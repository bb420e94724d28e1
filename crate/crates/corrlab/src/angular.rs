//! Angular offset distributions of the cluster model.
//!
//! The azimuth offset follows a wrapped Gaussian and the zenith offset a
//! truncated Laplacian; both densities live on `[-pi, pi)` and vanish
//! identically outside it. All angles are radians; unit conversion from the
//! published log10-degree parameters happens in the harness.

use std::f64::consts::{PI, SQRT_2, TAU};

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

use crate::error::{Error, Result};

/// Default truncation half-width of the wrapped-Gaussian series. Wrap terms
/// decay like `exp(-2 pi^2 i^2 / sigma^2)`, so 10 is far beyond
/// double-precision relevance for any sigma <= 1 rad.
pub const DEFAULT_N_WRAP: usize = 10;

/// Normalization constant of the Laplacian truncated to `[-pi, pi)`.
pub fn kappa(sigma_dtheta: f64) -> Result<f64> {
    if !sigma_dtheta.is_finite() || sigma_dtheta <= 0.0 {
        return Err(Error::InvalidParameter {
            name: "sigma_dtheta",
            reason: format!("must be a positive angle in radians, got {sigma_dtheta}"),
        });
    }
    Ok(1.0 / (1.0 - (-SQRT_2 * PI / sigma_dtheta).exp()))
}

/// Wrapped Gaussian azimuth-offset distribution.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AzimuthWrappedGaussian {
    sigma_dphi: f64,
    n_wrap: usize,
}

impl AzimuthWrappedGaussian {
    pub fn new(sigma_dphi: f64) -> Result<Self> {
        Self::with_wrap(sigma_dphi, DEFAULT_N_WRAP)
    }

    pub fn with_wrap(sigma_dphi: f64, n_wrap: usize) -> Result<Self> {
        if !sigma_dphi.is_finite() || sigma_dphi <= 0.0 {
            return Err(Error::InvalidParameter {
                name: "sigma_dphi",
                reason: format!("must be a positive angle in radians, got {sigma_dphi}"),
            });
        }
        Ok(Self { sigma_dphi, n_wrap })
    }

    pub fn sigma_dphi(&self) -> f64 {
        self.sigma_dphi
    }

    pub fn n_wrap(&self) -> usize {
        self.n_wrap
    }
}

/// Truncated Laplacian zenith-offset distribution; `kappa` is stored so the
/// density normalizes exactly over `[-pi, pi)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ZenithLaplacian {
    sigma_dtheta: f64,
    kappa: f64,
}

impl ZenithLaplacian {
    pub fn new(sigma_dtheta: f64) -> Result<Self> {
        let kappa = kappa(sigma_dtheta)?;
        Ok(Self { sigma_dtheta, kappa })
    }

    pub fn sigma_dtheta(&self) -> f64 {
        self.sigma_dtheta
    }

    pub fn kappa(&self) -> f64 {
        self.kappa
    }
}

/// Mean departure angles plus the offset distributions of the cluster.
/// Azimuth and zenith offsets are treated as independent.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClusterAngles {
    pub phi_mean: f64,
    pub theta_mean: f64,
    pub azimuth: AzimuthWrappedGaussian,
    pub zenith: ZenithLaplacian,
}

impl ClusterAngles {
    pub fn new(
        phi_mean: f64,
        theta_mean: f64,
        azimuth: AzimuthWrappedGaussian,
        zenith: ZenithLaplacian,
    ) -> Result<Self> {
        if !phi_mean.is_finite() || !(-PI..PI).contains(&phi_mean) {
            return Err(Error::InvalidParameter {
                name: "phi_mean",
                reason: format!("must lie in [-pi, pi), got {phi_mean}"),
            });
        }
        if !theta_mean.is_finite() || theta_mean <= 0.0 || theta_mean >= PI {
            return Err(Error::InvalidParameter {
                name: "theta_mean",
                reason: format!("must lie in (0, pi), got {theta_mean}"),
            });
        }
        Ok(Self { phi_mean, theta_mean, azimuth, zenith })
    }
}

/// Wrapped-Gaussian density at `offset`; zero outside `[-pi, pi)`.
pub fn wrapped_gaussian_pdf(offset: f64, dist: &AzimuthWrappedGaussian) -> Result<f64> {
    if !offset.is_finite() {
        return Err(Error::NonFinite("wrapped_gaussian_pdf offset"));
    }
    Ok(dist.density(offset))
}

/// Truncated-Laplacian density at `offset`; zero outside `[-pi, pi)`.
pub fn laplacian_pdf(offset: f64, dist: &ZenithLaplacian) -> Result<f64> {
    if !offset.is_finite() {
        return Err(Error::NonFinite("laplacian_pdf offset"));
    }
    Ok(dist.density(offset))
}

/// Shared density/sampling surface for the two offset models, used by the
/// Monte-Carlo correlation oracle and the histogram tests.
pub trait OffsetDistribution {
    /// Density at a finite offset; zero outside `[-pi, pi)`.
    fn density(&self, offset: f64) -> f64;

    /// `n` i.i.d. draws, deterministic for a given seed.
    fn sample_offsets(&self, n: usize, seed: u64) -> Vec<f64>;

    /// One draw from a caller-owned generator.
    fn sample_one(&self, rng: &mut ChaCha8Rng) -> f64;
}

impl OffsetDistribution for AzimuthWrappedGaussian {
    fn density(&self, offset: f64) -> f64 {
        if !(-PI..PI).contains(&offset) {
            return 0.0;
        }
        let s2 = 2.0 * self.sigma_dphi * self.sigma_dphi;
        let norm = self.sigma_dphi * (2.0 * PI).sqrt();
        let n = self.n_wrap as i64;
        let mut acc = 0.0;
        for i in -n..=n {
            let x = offset + TAU * i as f64;
            acc += (-x * x / s2).exp();
        }
        acc / norm
    }

    fn sample_offsets(&self, n: usize, seed: u64) -> Vec<f64> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        (0..n).map(|_| self.sample_one(&mut rng)).collect()
    }

    fn sample_one(&self, rng: &mut ChaCha8Rng) -> f64 {
        // Draw the untruncated Gaussian and wrap into [-pi, pi).
        let normal = Normal::new(0.0, self.sigma_dphi).expect("validated sigma");
        let x: f64 = normal.sample(rng);
        wrap_to_pi(x)
    }
}

impl OffsetDistribution for ZenithLaplacian {
    fn density(&self, offset: f64) -> f64 {
        if !(-PI..PI).contains(&offset) {
            return 0.0;
        }
        self.kappa / (SQRT_2 * self.sigma_dtheta)
            * (-(SQRT_2 * offset / self.sigma_dtheta).abs()).exp()
    }

    fn sample_offsets(&self, n: usize, seed: u64) -> Vec<f64> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        (0..n).map(|_| self.sample_one(&mut rng)).collect()
    }

    fn sample_one(&self, rng: &mut ChaCha8Rng) -> f64 {
        // Inverse CDF of the Laplacian restricted to [-pi, pi), so samples
        // follow exactly the density used by the oracles.
        let u: f64 = rng.random();
        let scale = self.sigma_dtheta / SQRT_2;
        let tail = (-SQRT_2 * PI / self.sigma_dtheta).exp();
        if u < 0.5 {
            scale * (2.0 * u / self.kappa + tail).ln()
        } else {
            -scale * (1.0 - (2.0 * u - 1.0) / self.kappa).ln()
        }
    }
}

/// Wraps an angle into `[-pi, pi)`.
pub fn wrap_to_pi(x: f64) -> f64 {
    let wrapped = x - TAU * ((x + PI) / TAU).floor();
    // floor rounding can land exactly on pi
    if wrapped >= PI {
        wrapped - TAU
    } else {
        wrapped
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numkit::quad::integrate_complex;
    use num_complex::Complex64;

    fn integral_over_window(density: impl Fn(f64) -> f64, sigma: f64) -> f64 {
        let bp: Vec<f64> = [-32.0, -16.0, -8.0, -4.0, -2.0, -1.0, 0.0, 1.0, 2.0, 4.0, 8.0, 16.0, 32.0]
            .iter()
            .map(|k| k * sigma)
            .filter(|x| x.abs() < PI)
            .collect();
        integrate_complex(
            |x| Complex64::new(density(x), 0.0),
            -PI,
            PI - 1e-12,
            &bp,
            1e-11,
            20_000,
        )
        .unwrap()
        .re
    }

    #[test]
    fn wrapped_gaussian_vanishes_outside_window() {
        let d = AzimuthWrappedGaussian::new(0.5).unwrap();
        assert_eq!(wrapped_gaussian_pdf(3.5, &d).unwrap(), 0.0);
        assert_eq!(wrapped_gaussian_pdf(-3.2, &d).unwrap(), 0.0);
        assert!(wrapped_gaussian_pdf(f64::NAN, &d).is_err());
    }

    #[test]
    fn wrapped_gaussian_peak_value() {
        // narrow spread: wrap terms negligible, peak is 1/(sigma sqrt(2 pi))
        let d = AzimuthWrappedGaussian::new(0.008748).unwrap();
        let v = wrapped_gaussian_pdf(0.0, &d).unwrap();
        assert!((v - 45.603827206382334).abs() < 1e-9, "got {v}");
    }

    #[test]
    fn wrapped_gaussian_normalizes() {
        for sigma in [1e-3, 0.05, 0.5, 1.0] {
            let d = AzimuthWrappedGaussian::new(sigma).unwrap();
            let total = integral_over_window(|x| d.density(x), sigma);
            assert!((total - 1.0).abs() < 1e-9, "sigma={sigma}: integral {total}");
        }
    }

    #[test]
    fn laplacian_vanishes_outside_window() {
        let d = ZenithLaplacian::new(0.3).unwrap();
        assert_eq!(laplacian_pdf(-4.0, &d).unwrap(), 0.0);
        assert!(laplacian_pdf(f64::INFINITY, &d).is_err());
    }

    #[test]
    fn laplacian_zero_offset_value() {
        let d = ZenithLaplacian::new(1.0).unwrap();
        let v = laplacian_pdf(0.0, &d).unwrap();
        // kappa / sqrt(2) with kappa = 1/(1 - exp(-sqrt(2) pi))
        assert!((v - 0.7155227457923228).abs() < 1e-12, "got {v}");
    }

    #[test]
    fn laplacian_normalizes() {
        for sigma in [1e-3, 0.05, 0.3, 1.0] {
            let d = ZenithLaplacian::new(sigma).unwrap();
            let total = integral_over_window(|x| d.density(x), sigma);
            assert!((total - 1.0).abs() < 1e-9, "sigma={sigma}: integral {total}");
        }
    }

    #[test]
    fn densities_are_even() {
        let wg = AzimuthWrappedGaussian::new(0.2).unwrap();
        let lap = ZenithLaplacian::new(0.2).unwrap();
        for x in [0.01, 0.3, 1.5, 3.0] {
            assert_eq!(wg.density(x), wg.density(-x));
            assert_eq!(lap.density(x), lap.density(-x));
        }
    }

    #[test]
    fn kappa_values() {
        // denominator -> 0+ as sigma grows
        assert!(kappa(1e6).unwrap() > 100.0);
        // underflow regime: exactly 1 in double precision
        assert!((kappa(0.008748).unwrap() - 1.0).abs() < 1e-12);
        // direct evaluation at sigma = 1
        assert!((kappa(1.0).unwrap() - 1.0119019712859394).abs() < 1e-12);
        assert!(kappa(0.0).is_err());
        assert!(kappa(-1.0).is_err());
    }

    #[test]
    fn sampling_matches_spread() {
        let sigma = 0.00875;
        let d = AzimuthWrappedGaussian::new(sigma).unwrap();
        let samples = d.sample_offsets(1_000_000, 7);
        let mean = samples.iter().sum::<f64>() / samples.len() as f64;
        let var = samples.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / samples.len() as f64;
        let sd = var.sqrt();
        assert!((sd / sigma - 1.0).abs() < 0.005, "sample sd {sd}");
    }

    #[test]
    fn sampling_degenerate_sigma() {
        let d = ZenithLaplacian::new(1e-12).unwrap();
        for x in d.sample_offsets(1000, 3) {
            assert!(x.abs() < 1e-9);
        }
        let g = AzimuthWrappedGaussian::new(1e-12).unwrap();
        for x in g.sample_offsets(1000, 3) {
            assert!(x.abs() < 1e-9);
        }
    }

    #[test]
    fn sampling_is_deterministic() {
        let d = ZenithLaplacian::new(0.3).unwrap();
        assert_eq!(d.sample_offsets(64, 11), d.sample_offsets(64, 11));
        let g = AzimuthWrappedGaussian::new(0.3).unwrap();
        assert_eq!(g.sample_offsets(64, 11), g.sample_offsets(64, 11));
    }

    #[test]
    fn samples_stay_in_window() {
        let g = AzimuthWrappedGaussian::new(1.0).unwrap();
        for x in g.sample_offsets(10_000, 5) {
            assert!((-PI..PI).contains(&x));
        }
        let l = ZenithLaplacian::new(1.0).unwrap();
        for x in l.sample_offsets(10_000, 5) {
            assert!((-PI..PI).contains(&x));
        }
    }

    #[test]
    fn histogram_converges_to_density() {
        // max-bin deviation test at n = 1e6: every bin count must sit within
        // five standard deviations of the exact bin mass (quadrature of the
        // density, so the kink and curvature are handled without bias)
        let sigma = 0.25;
        let dists: [&dyn OffsetDistribution; 2] = [
            &AzimuthWrappedGaussian::new(sigma).unwrap(),
            &ZenithLaplacian::new(sigma).unwrap(),
        ];
        for dist in dists {
            let n = 1_000_000usize;
            let samples = dist.sample_offsets(n, 99);
            let bins = 80usize;
            let lo = -4.0 * sigma;
            let hi = 4.0 * sigma;
            let width = (hi - lo) / bins as f64;
            let mut counts = vec![0usize; bins];
            for x in samples {
                if x >= lo && x < hi {
                    counts[((x - lo) / width) as usize] += 1;
                }
            }
            let mut worst_z: f64 = 0.0;
            for (b, &cnt) in counts.iter().enumerate() {
                let a = lo + b as f64 * width;
                let mass = integrate_complex(
                    |x| Complex64::new(dist.density(x), 0.0),
                    a,
                    a + width,
                    &[],
                    1e-12,
                    200,
                )
                .unwrap()
                .re;
                let got = cnt as f64 / n as f64;
                let sd = (mass * (1.0 - mass) / n as f64).sqrt();
                if sd > 0.0 {
                    worst_z = worst_z.max((got - mass).abs() / sd);
                }
            }
            assert!(worst_z < 5.0, "worst bin z-score {worst_z}");
        }
    }
}
