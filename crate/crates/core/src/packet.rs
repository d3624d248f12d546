//! Free Gaussian wave packet in physical units.
//!
//! The packet is
//!
//! ```text
//! psi(x, t) = exp( (i/hbar) [ alpha_t (x - x_t)^2 + p0 (x - x_t) + gamma_t ] )
//! ```
//!
//! with `x_t = x0 + p0 t / m` and `1/alpha_t = 1/alpha0 + 2t/m`. Only the
//! imaginary part of `gamma_t` is fixed by normalization; the real part is
//! chosen so that `psi` solves the free Schrödinger equation, with
//! `Re gamma_0 = 0`.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::{central_difference_complex, second_difference_complex, ComplexValue};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PacketParams {
    pub hbar: f64,
    pub mass: f64,
    pub x0: f64,
    pub p0: f64,
    pub alpha0: ComplexValue,
    /// Detector position.
    pub q: f64,
}

impl PacketParams {
    pub fn new(hbar: f64, mass: f64, x0: f64, p0: f64, alpha0: ComplexValue, q: f64) -> Result<Self> {
        let params = Self {
            hbar,
            mass,
            x0,
            p0,
            alpha0,
            q,
        };
        params.validate()?;
        Ok(params)
    }

    pub fn validate(&self) -> Result<()> {
        let all_finite = [
            self.hbar,
            self.mass,
            self.x0,
            self.p0,
            self.alpha0.re,
            self.alpha0.im,
            self.q,
        ]
        .iter()
        .all(|v| v.is_finite());
        if !all_finite {
            return Err(Error::config("packet parameters must be finite"));
        }
        if self.hbar <= 0.0 {
            return Err(Error::config(format!("hbar must be positive, got {}", self.hbar)));
        }
        if self.mass <= 0.0 {
            return Err(Error::config(format!("mass must be positive, got {}", self.mass)));
        }
        if self.alpha0.im <= 0.0 {
            return Err(Error::config(format!(
                "Im alpha0 must be positive for a normalizable packet, got {}",
                self.alpha0.im
            )));
        }
        Ok(())
    }

    /// Packet center `x_t`.
    pub fn center(&self, t: f64) -> f64 {
        self.x0 + self.p0 * t / self.mass
    }

    pub fn state(&self, t: f64) -> PacketState {
        let alpha_t = evolve_alpha(self, t);
        PacketState {
            t,
            x_t: self.center(t),
            alpha_t,
            gamma_t: evolve_gamma(self, t),
            spread: 0.5 * (self.hbar / alpha_t.im).sqrt(),
        }
    }
}

/// Snapshot of the time-dependent packet quantities.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PacketState {
    pub t: f64,
    pub x_t: f64,
    pub alpha_t: ComplexValue,
    pub gamma_t: ComplexValue,
    pub spread: f64,
}

/// `alpha_t` from `1/alpha_t = 1/alpha0 + 2t/m`.
pub fn evolve_alpha(params: &PacketParams, t: f64) -> ComplexValue {
    (params.alpha0.inv() + 2.0 * t / params.mass).inv()
}

/// `Im gamma_0` fixed by the normalization identity at `t = 0`.
pub fn initial_gamma(params: &PacketParams) -> ComplexValue {
    let im = -0.25 * params.hbar * (2.0 * params.alpha0.im / (PI * params.hbar)).ln();
    ComplexValue::new(0.0, im)
}

/// `gamma_t = gamma_0 + p0^2 t / 2m + (i hbar / 2) ln(1 + 2 alpha0 t / m)`.
///
/// `1 + 2 alpha0 t / m` has imaginary part `2 Im(alpha0) t / m`, which keeps
/// one sign for each sign of `t`, so the principal logarithm is continuous in `t`.
pub fn evolve_gamma(params: &PacketParams, t: f64) -> ComplexValue {
    let growth = ComplexValue::new(1.0, 0.0) + params.alpha0 * (2.0 * t / params.mass);
    initial_gamma(params)
        + params.p0 * params.p0 * t / (2.0 * params.mass)
        + ComplexValue::i() * (0.5 * params.hbar) * growth.ln()
}

/// Evaluates the Gaussian form for given `alpha_t` and `gamma_t`.
pub fn psi_from_parts(
    params: &PacketParams,
    x: f64,
    x_t: f64,
    alpha_t: ComplexValue,
    gamma_t: ComplexValue,
) -> ComplexValue {
    let dx = x - x_t;
    let phase = alpha_t * (dx * dx) + params.p0 * dx + gamma_t;
    (ComplexValue::i() * phase / params.hbar).exp()
}

pub fn psi(params: &PacketParams, x: f64, t: f64) -> ComplexValue {
    psi_from_parts(
        params,
        x,
        params.center(t),
        evolve_alpha(params, t),
        evolve_gamma(params, t),
    )
}

/// Position uncertainty `(1/2) sqrt(hbar / Im alpha_t)`.
pub fn spread(params: &PacketParams, t: f64) -> f64 {
    0.5 * (params.hbar / evolve_alpha(params, t).im).sqrt()
}

/// Time at which the classical center `x0 + p0 t / m` reaches the detector.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Arrival {
    pub time: f64,
    /// The center moves away from the detector (`time < 0`).
    pub moving_away: bool,
}

/// `t_cl = m (q - x0) / p0`.
pub fn classical_arrival_time(params: &PacketParams) -> Result<Arrival> {
    if params.p0 == 0.0 {
        return Err(Error::UndefinedArrival);
    }
    let time = params.mass * (params.q - params.x0) / params.p0;
    Ok(Arrival {
        time,
        moving_away: time < 0.0,
    })
}

/// Normalized free Schrödinger residual `|i hbar psi_t + (hbar^2/2m) psi_xx| / |psi|`
/// of an arbitrary wave function, by central differences.
pub fn tdse_residual_for<F>(hbar: f64, mass: f64, wave: F, x: f64, t: f64, h_x: f64, h_t: f64) -> f64
where
    F: Fn(f64, f64) -> ComplexValue,
{
    let dt = central_difference_complex(|s| wave(x, s), t, h_t);
    let dxx = second_difference_complex(|y| wave(y, t), x, h_x);
    let residual = ComplexValue::i() * hbar * dt + dxx * (hbar * hbar / (2.0 * mass));
    residual.norm() / wave(x, t).norm()
}

pub fn tdse_residual(params: &PacketParams, x: f64, t: f64, h_x: f64, h_t: f64) -> f64 {
    tdse_residual_for(params.hbar, params.mass, |y, s| psi(params, y, s), x, t, h_x, h_t)
}
