//! Antenna-array topologies and exact (non-approximated) phase shifts of a
//! departing wavefront per element.
//!
//! Spacings are expressed in carrier wavelengths, so the wavenumber-spacing
//! product is `2 pi * d`. Element 0 is the phase reference and phase shifts
//! are linear in the element index.

use std::f64::consts::TAU;

use crate::error::{Error, Result};

/// Phase advance per wavelength of path difference (the wavenumber-wavelength
/// product `k * lambda`).
pub const K_SPACING_UNIT: f64 = TAU;

/// Uniform rectangular array in the y,z plane: `a_count` elements along z
/// (zenith domain, spacing `d1`), `b_count` along y (azimuth domain, spacing
/// `d2`), both in wavelengths.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UraGeometry {
    pub a_count: usize,
    pub b_count: usize,
    pub d1: f64,
    pub d2: f64,
}

impl UraGeometry {
    pub fn new(a_count: usize, b_count: usize, d1: f64, d2: f64) -> Result<Self> {
        if a_count < 1 || b_count < 1 {
            return Err(Error::InvalidParameter {
                name: "a_count/b_count",
                reason: format!("element counts must be >= 1, got {a_count}x{b_count}"),
            });
        }
        if !(d1 > 0.0) || !(d2 > 0.0) {
            return Err(Error::InvalidParameter {
                name: "d1/d2",
                reason: format!("spacings must be positive wavelengths, got d1={d1}, d2={d2}"),
            });
        }
        Ok(Self { a_count, b_count, d1, d2 })
    }

    pub fn antenna_count(&self) -> usize {
        self.a_count * self.b_count
    }
}

/// Cylindrical array: `a_count` rings along z spaced `d1`, each ring holding
/// `b_count` elements at `radius` wavelengths with azimuth anchors `phi_b`.
#[derive(Debug, Clone, PartialEq)]
pub struct CylGeometry {
    pub a_count: usize,
    pub b_count: usize,
    pub d1: f64,
    pub radius: f64,
    pub anchor_angles: Vec<f64>,
}

impl CylGeometry {
    /// Uniformly spaced anchors `phi_b = 2 pi b / B`.
    pub fn uniform(a_count: usize, b_count: usize, d1: f64, radius: f64) -> Result<Self> {
        let anchors = (0..b_count).map(|b| TAU * b as f64 / b_count as f64).collect();
        Self::with_anchors(a_count, b_count, d1, radius, anchors)
    }

    pub fn with_anchors(
        a_count: usize,
        b_count: usize,
        d1: f64,
        radius: f64,
        anchor_angles: Vec<f64>,
    ) -> Result<Self> {
        if a_count < 1 || b_count < 1 {
            return Err(Error::InvalidParameter {
                name: "a_count/b_count",
                reason: format!("element counts must be >= 1, got {a_count}x{b_count}"),
            });
        }
        if !(d1 > 0.0) {
            return Err(Error::InvalidParameter {
                name: "d1",
                reason: format!("spacing must be positive wavelengths, got {d1}"),
            });
        }
        if !(radius > 0.0) {
            return Err(Error::InvalidParameter {
                name: "radius",
                reason: format!("radius must be positive wavelengths, got {radius}"),
            });
        }
        if anchor_angles.len() != b_count {
            return Err(Error::InvalidParameter {
                name: "anchor_angles",
                reason: format!("need {b_count} anchors, got {}", anchor_angles.len()),
            });
        }
        let increasing = anchor_angles.windows(2).all(|w| w[0] < w[1]);
        let in_range = anchor_angles.iter().all(|&a| (0.0..TAU).contains(&a));
        if !increasing || !in_range {
            return Err(Error::InvalidParameter {
                name: "anchor_angles",
                reason: "anchors must be strictly increasing within [0, 2 pi)".into(),
            });
        }
        Ok(Self { a_count, b_count, d1, radius, anchor_angles })
    }

    pub fn antenna_count(&self) -> usize {
        self.a_count * self.b_count
    }
}

/// Either array topology; what the Monte-Carlo correlation engine consumes.
#[derive(Debug, Clone, PartialEq)]
pub enum ArrayGeometry {
    Ura(UraGeometry),
    Cylindrical(CylGeometry),
}

/// The two element indices of a correlation entry.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AntennaIndexPair {
    pub first: usize,
    pub second: usize,
}

impl AntennaIndexPair {
    pub fn new(first: usize, second: usize) -> Self {
        Self { first, second }
    }

    /// Signed separation `first - second`.
    pub fn separation(&self) -> i64 {
        self.first as i64 - self.second as i64
    }
}

/// Zenith-domain phase shift of the wavefront departing from element `a`,
/// relative to element 0: `2 pi d1 a cos(theta_total)`.
pub fn zenith_phase(a: usize, d1: f64, theta_total: f64) -> f64 {
    K_SPACING_UNIT * d1 * a as f64 * theta_total.cos()
}

/// Azimuth-domain phase shift for a rectangular array:
/// `2 pi d2 b cos(phi_total) sin(theta_total)`.
pub fn ura_azimuth_phase(b: usize, d2: f64, phi_total: f64, theta_total: f64) -> f64 {
    K_SPACING_UNIT * d2 * b as f64 * phi_total.cos() * theta_total.sin()
}

/// Azimuth-domain phase shift for a cylindrical array; the ray azimuth is
/// taken relative to the element's anchor angle:
/// `2 pi radius b cos(phi_total - anchor) sin(theta_total)`.
pub fn cyl_azimuth_phase(b: usize, radius: f64, anchor: f64, phi_total: f64, theta_total: f64) -> f64 {
    K_SPACING_UNIT * radius * b as f64 * (phi_total - anchor).cos() * theta_total.sin()
}
