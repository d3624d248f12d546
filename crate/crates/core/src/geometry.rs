//! Ellipse geometry of the Wigner contours.
//!
//! Level sets of `Omega` are the ellipses `(xi~ - eps eta~)^2 + eta~^2 = C`
//! centered at `(xi_tau, eta0)`. The major axis makes the angle `theta` with
//! the `xi` axis, and the negative-flow condition can be restated in terms of
//! `theta_bar = pi - theta` and the angle `phi` from the packet center to the
//! detector point `(delta, 0)`.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI, TAU};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::wigner::{epsilon_tau, xi_tau, DimensionlessPacket, PhasePoint};

/// Grid used by [`verify_major_axis`].
pub const AXIS_SCAN_POINTS: usize = 100_000;
pub const AXIS_SCAN_TOLERANCE: f64 = 1e-4;

/// Major-axis angle in `(0, pi)`. Undefined for `eps = 0` (circular contours).
pub fn major_axis_angle(eps: f64) -> Result<f64> {
    if eps == 0.0 {
        return Err(Error::UndefinedAngle);
    }
    let half = 0.5 * (2.0 / eps).atan();
    Ok(if eps > 0.0 { half } else { PI + half })
}

/// Minor-axis direction `pi/2 + (1/2) arctan(2/eps)`.
pub fn minor_axis_angle(eps: f64) -> Result<f64> {
    if eps == 0.0 {
        return Err(Error::UndefinedAngle);
    }
    Ok(FRAC_PI_2 + 0.5 * (2.0 / eps).atan())
}

/// Squared polar radius of the contour at angle `theta`.
pub fn contour_radius_sq(eps: f64, contour_constant: f64, theta: f64) -> f64 {
    let s = theta.sin();
    contour_constant / (1.0 - eps * (2.0 * theta).sin() + eps * eps * s * s)
}

/// Grid angles in `[0, pi)` where the contour radius is largest and smallest.
pub fn scan_radius_extremes(eps: f64, contour_constant: f64, points: usize) -> (f64, f64) {
    let mut best = (f64::NEG_INFINITY, 0.0);
    let mut worst = (f64::INFINITY, 0.0);
    for k in 0..points {
        let theta = PI * k as f64 / points as f64;
        let r2 = contour_radius_sq(eps, contour_constant, theta);
        if r2 > best.0 {
            best = (r2, theta);
        }
        if r2 < worst.0 {
            worst = (r2, theta);
        }
    }
    (best.1, worst.1)
}

/// Distance between two directions, modulo `pi`.
pub fn axis_distance(a: f64, b: f64) -> f64 {
    let d = (a - b).rem_euclid(PI);
    d.min(PI - d)
}

/// Brute-force check of the major-axis formula: the grid maximum of the
/// contour radius must fall within [`AXIS_SCAN_TOLERANCE`] of it.
pub fn verify_major_axis(eps: f64, contour_constant: f64) -> Result<bool> {
    let expected = major_axis_angle(eps)?;
    let (argmax, _) = scan_radius_extremes(eps, contour_constant, AXIS_SCAN_POINTS);
    Ok(axis_distance(argmax, expected) <= AXIS_SCAN_TOLERANCE)
}

/// `tan(2 theta_bar)/2 + 2/tan(2 theta_bar) < 1/tan(phi)`.
pub fn angle_condition(theta_bar: f64, phi: f64) -> Result<bool> {
    if !(theta_bar > 0.0 && theta_bar < FRAC_PI_4) {
        return Err(Error::OutOfDomain {
            name: "theta_bar",
            value: theta_bar,
            domain: "(0, pi/4)",
        });
    }
    if !(phi > 0.0 && phi < FRAC_PI_2) {
        return Err(Error::OutOfDomain {
            name: "phi",
            value: phi,
            domain: "(0, pi/2)",
        });
    }
    let t = (2.0 * theta_bar).tan();
    Ok(0.5 * t + 2.0 / t < 1.0 / phi.tan())
}

/// Contour angles of the packet at one instant.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AngleGeometry {
    pub theta: f64,
    pub theta_bar: f64,
    pub phi: f64,
}

impl AngleGeometry {
    /// `phi` is measured from the center `(xi_tau, eta0)` to `(delta, 0)`, so
    /// `tan(phi) = eta0 / (delta - xi_tau)`.
    pub fn at(packet: &DimensionlessPacket, tau: f64) -> Result<Self> {
        let theta = major_axis_angle(epsilon_tau(packet, tau))?;
        Ok(Self {
            theta,
            theta_bar: PI - theta,
            phi: packet.eta0.atan2(packet.delta - xi_tau(packet, tau)),
        })
    }

    pub fn negative_flow(&self) -> Result<bool> {
        angle_condition(self.theta_bar, self.phi)
    }
}

/// Boolean map of [`angle_condition`] on interior uniform grids over
/// `theta_bar in (0, pi/4)` and `phi in (0, pi/2)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RegionGrid {
    pub theta_bar: Vec<f64>,
    pub phi: Vec<f64>,
    /// `flags[i][j]` is the condition at `(theta_bar[i], phi[j])`.
    pub flags: Vec<Vec<bool>>,
}

impl RegionGrid {
    pub fn true_fraction(&self) -> f64 {
        let total = self.theta_bar.len() * self.phi.len();
        let hits: usize = self.flags.iter().map(|row| row.iter().filter(|&&f| f).count()).sum();
        hits as f64 / total as f64
    }
}

fn open_grid(upper: f64, n: usize) -> Vec<f64> {
    (1..=n).map(|k| upper * k as f64 / (n + 1) as f64).collect()
}

pub fn region_sample(grid_theta: usize, grid_phi: usize) -> Result<RegionGrid> {
    if grid_theta < 2 || grid_phi < 2 {
        return Err(Error::config("region grid sizes must be at least 2"));
    }
    let theta_bar = open_grid(FRAC_PI_4, grid_theta);
    let phi = open_grid(FRAC_PI_2, grid_phi);
    let flags = theta_bar
        .iter()
        .map(|&tb| {
            phi.iter()
                .map(|&ph| angle_condition(tb, ph).expect("interior grid point"))
                .collect()
        })
        .collect();
    Ok(RegionGrid { theta_bar, phi, flags })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ContourPoint {
    pub s: f64,
    pub point: PhasePoint,
}

/// Points on the level set `(xi~ - eps eta~)^2 + eta~^2 = C`, using
/// `xi~ = sqrt(C)(cos s + eps sin s)`, `eta~ = sqrt(C) sin s` with `s`
/// uniform on `[0, 2 pi)`.
pub fn contour_points(
    packet: &DimensionlessPacket,
    tau: f64,
    contour_constant: f64,
    point_count: usize,
) -> Result<Vec<ContourPoint>> {
    if !(contour_constant > 0.0 && contour_constant.is_finite()) {
        return Err(Error::config("contour constant must be positive"));
    }
    if point_count < 8 {
        return Err(Error::config("contour needs at least 8 points"));
    }
    let eps = epsilon_tau(packet, tau);
    let (xc, yc) = (xi_tau(packet, tau), packet.eta0);
    let r = contour_constant.sqrt();
    Ok((0..point_count)
        .map(|k| {
            let s = TAU * k as f64 / point_count as f64;
            let (sn, cs) = s.sin_cos();
            ContourPoint {
                s,
                point: PhasePoint::new(xc + r * (cs + eps * sn), yc + r * sn),
            }
        })
        .collect())
}

/// End points of the major axis of the level set through `C`.
pub fn major_axis_segment(packet: &DimensionlessPacket, tau: f64, contour_constant: f64) -> Result<[PhasePoint; 2]> {
    let eps = epsilon_tau(packet, tau);
    let theta = major_axis_angle(eps)?;
    let r = contour_radius_sq(eps, contour_constant, theta).sqrt();
    let (sn, cs) = theta.sin_cos();
    let (xc, yc) = (xi_tau(packet, tau), packet.eta0);
    Ok([
        PhasePoint::new(xc - r * cs, yc - r * sn),
        PhasePoint::new(xc + r * cs, yc + r * sn),
    ])
}
