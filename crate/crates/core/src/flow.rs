//! Probability beyond the detector and its rate of change, split into a
//! rigid-shift part and a shear part.
//!
//! With `d = delta - xi_tau` and `a = 1 + eps_tau^2`:
//!
//! ```text
//! Pi(tau)     = erfc(d / sqrt(a)) / 2
//! shift rate  = eta0 / sqrt(pi a) * exp(-d^2 / a)
//! shear rate  = eps_tau d / sqrt(pi a^3) * exp(-d^2 / a)
//! ```
//!
//! and the total rate `dPi/dtau` is their sum.

use std::f64::consts::PI;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::numerics::{central_difference, erfc, GaussLegendre};
use crate::packet::{evolve_alpha, psi, spread, PacketParams};
use crate::wigner::{epsilon_tau, length_scale, xi_tau, DimensionlessPacket};

/// Half-width of the boundary band of the negative-flow inequality.
pub const BOUNDARY_BAND: f64 = 1e-12;

/// Minimum detector distance, in initial spreads, required by strict scenarios.
pub const STRICT_SEPARATION: f64 = 3.0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FlowRates {
    pub shift_rate: f64,
    pub shear_rate: f64,
    pub total_rate: f64,
}

/// Outcome of the negative-flow inequality.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum FlowCondition {
    /// Probability beyond the detector is decreasing.
    Negative,
    NonNegative,
    /// Within [`BOUNDARY_BAND`] of equality, or the detector sits on the center.
    Boundary,
}

impl FlowCondition {
    pub fn is_negative(self) -> bool {
        self == FlowCondition::Negative
    }

    /// CSV label: `1`, `0` or `boundary`.
    pub fn label(self) -> &'static str {
        match self {
            FlowCondition::Negative => "1",
            FlowCondition::NonNegative => "0",
            FlowCondition::Boundary => "boundary",
        }
    }
}

/// Closed-form probability of finding the particle at `xi > delta`.
pub fn probability_beyond(packet: &DimensionlessPacket, tau: f64) -> f64 {
    let eps = epsilon_tau(packet, tau);
    let d = packet.delta - xi_tau(packet, tau);
    0.5 * erfc(d / (1.0 + eps * eps).sqrt())
}

/// Complement `1 - Pi(tau)`, accurate when `Pi` is close to one.
pub fn probability_behind(packet: &DimensionlessPacket, tau: f64) -> f64 {
    let eps = epsilon_tau(packet, tau);
    let d = packet.delta - xi_tau(packet, tau);
    0.5 * erfc(-d / (1.0 + eps * eps).sqrt())
}

/// Central-difference estimate of `dPi/dtau` with step `h`.
///
/// Differentiates whichever of `Pi` and `1 - Pi` is smaller, so the estimate
/// keeps its relative accuracy in both tails.
pub fn probability_rate_fd(packet: &DimensionlessPacket, tau: f64, h: f64) -> f64 {
    if probability_beyond(packet, tau) <= 0.5 {
        central_difference(|s| probability_beyond(packet, s), tau, h)
    } else {
        -central_difference(|s| probability_behind(packet, s), tau, h)
    }
}

/// Probability beyond `q` from direct quadrature of `|psi(x, t)|^2`.
///
/// The integrand is truncated at 12 spreads from the packet center.
pub fn probability_beyond_quadrature(params: &PacketParams, t: f64, node_count: usize) -> f64 {
    let center = params.center(t);
    let s = spread(params, t);
    let upper = center + 12.0 * s;
    let lower = params.q.max(center - 12.0 * s);
    if lower >= upper {
        return 0.0;
    }
    GaussLegendre::new(node_count).integrate(|x| psi(params, x, t).norm_sqr(), lower, upper)
}

/// `exp(-d^2/a) / sqrt(pi a)`: the position density of the marginal at the detector.
fn detector_density(packet: &DimensionlessPacket, tau: f64) -> (f64, f64, f64) {
    let eps = epsilon_tau(packet, tau);
    let a = 1.0 + eps * eps;
    let d = packet.delta - xi_tau(packet, tau);
    ((-d * d / a).exp() / (PI * a).sqrt(), a, d)
}

pub fn flow_rates(packet: &DimensionlessPacket, tau: f64) -> FlowRates {
    let (density, a, d) = detector_density(packet, tau);
    let eps = epsilon_tau(packet, tau);
    let shift_rate = packet.eta0 * density;
    let shear_rate = eps * d / a * density;
    FlowRates {
        shift_rate,
        shear_rate,
        total_rate: shift_rate + shear_rate,
    }
}

/// Gaussian momentum-integral coefficients at the detector, writing
/// `Omega(delta, eta, tau) = (1/pi) exp(-a eta^2 + 2 b eta - c)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MomentumCoefficients {
    pub a: f64,
    pub b: f64,
    pub c: f64,
}

pub fn momentum_coefficients(packet: &DimensionlessPacket, tau: f64) -> MomentumCoefficients {
    let eps = epsilon_tau(packet, tau);
    let d = packet.delta - xi_tau(packet, tau);
    let a = 1.0 + eps * eps;
    MomentumCoefficients {
        a,
        b: a * packet.eta0 + eps * d,
        c: (d + eps * packet.eta0).powi(2) + packet.eta0 * packet.eta0,
    }
}

/// `(int Omega(delta, eta) d eta, int (eta - eta0) Omega(delta, eta) d eta)`.
pub fn momentum_integrals(packet: &DimensionlessPacket, tau: f64) -> (f64, f64) {
    let MomentumCoefficients { a, b, c } = momentum_coefficients(packet, tau);
    let zeroth = (b * b / a - c).exp() / (PI * a).sqrt();
    let centered_first = (b - a * packet.eta0) / a * zeroth;
    (zeroth, centered_first)
}

/// Margin `eps/(1+eps^2) + eta0/(delta - xi_tau)`; the flow is negative when
/// the margin and `delta - xi_tau` have opposite signs.
pub fn dimensionless_margin(packet: &DimensionlessPacket, tau: f64) -> Result<f64> {
    let d = packet.delta - xi_tau(packet, tau);
    if d == 0.0 {
        return Err(Error::DetectorAtCenter);
    }
    let eps = epsilon_tau(packet, tau);
    Ok(eps / (1.0 + eps * eps) + packet.eta0 / d)
}

fn classify(margin: f64, detector_ahead: bool, band: f64) -> FlowCondition {
    if margin.abs() <= band {
        FlowCondition::Boundary
    } else if (margin < 0.0) == detector_ahead {
        FlowCondition::Negative
    } else {
        FlowCondition::NonNegative
    }
}

/// Negative-flow test `eps_tau/(1+eps_tau^2) < -eta0/(delta - xi_tau)`.
///
/// The inequality is stated for a detector ahead of the center
/// (`delta > xi_tau`); behind the center it is reversed so that the result
/// always tracks the sign of `dPi/dtau`.
pub fn negative_flow_condition_dimensionless(packet: &DimensionlessPacket, tau: f64) -> Result<FlowCondition> {
    let margin = dimensionless_margin(packet, tau)?;
    let ahead = packet.delta > xi_tau(packet, tau);
    Ok(classify(margin, ahead, BOUNDARY_BAND))
}

/// Physical form `Re alpha_t < -p0 / (2 (q - x_t))`, with the same
/// orientation convention as [`negative_flow_condition_dimensionless`].
///
/// The boundary band is scaled by `|alpha0|^2 / Im alpha0 = hbar / 2L^2`, the
/// factor relating the physical and dimensionless margins.
pub fn negative_flow_condition_physical(params: &PacketParams, t: f64) -> Result<FlowCondition> {
    let gap = params.q - params.center(t);
    if gap == 0.0 {
        return Err(Error::DetectorAtCenter);
    }
    let alpha = evolve_alpha(params, t);
    let margin = alpha.re + params.p0 / (2.0 * gap);
    let l = length_scale(params);
    let scale = params.hbar / (2.0 * l * l);
    Ok(classify(margin, gap > 0.0, BOUNDARY_BAND * scale))
}

/// Packet plus the dimensionless times to scan.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FlowScenario {
    pub packet: DimensionlessPacket,
    pub tau_grid: Vec<f64>,
}

impl FlowScenario {
    pub fn new(packet: DimensionlessPacket, tau_grid: Vec<f64>) -> Result<Self> {
        packet.validate()?;
        if tau_grid.is_empty() {
            return Err(Error::config("time grid is empty"));
        }
        if tau_grid.iter().any(|t| !t.is_finite()) {
            return Err(Error::config("time grid contains non-finite values"));
        }
        if tau_grid.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::config("time grid must be strictly increasing"));
        }
        Ok(Self { packet, tau_grid })
    }

    /// Deviations from the textbook setup (detector well to the right of a
    /// right-moving packet). These are reported, not enforced.
    pub fn warnings(&self) -> Vec<String> {
        let p = &self.packet;
        let mut out = Vec::new();
        if p.eta0 <= 0.0 {
            out.push(format!(
                "eta0 = {} is not positive: packet is not moving toward the detector",
                p.eta0
            ));
        }
        if p.delta <= p.xi0 {
            out.push(format!(
                "detector delta = {} is not to the right of xi0 = {}",
                p.delta, p.xi0
            ));
        }
        let spread0 = p.position_spread(0.0);
        if p.delta - p.xi0 < STRICT_SEPARATION * spread0 {
            out.push(format!(
                "detector is {:.6} from the initial center, less than {} initial spreads ({:.6})",
                p.delta - p.xi0,
                STRICT_SEPARATION,
                STRICT_SEPARATION * spread0
            ));
        }
        out
    }

    /// Fails when the detector is closer than [`STRICT_SEPARATION`] initial spreads.
    pub fn check_strict(&self) -> Result<()> {
        let p = &self.packet;
        let spread0 = p.position_spread(0.0);
        if p.delta - p.xi0 < STRICT_SEPARATION * spread0 {
            return Err(Error::config(format!(
                "strict scenario: delta - xi0 = {} is below {} initial spreads ({})",
                p.delta - p.xi0,
                STRICT_SEPARATION,
                STRICT_SEPARATION * spread0
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FlowRow {
    pub tau: f64,
    pub pi: f64,
    pub rates: FlowRates,
    pub condition: FlowCondition,
}

/// Maximal run of consecutive grid points flagged negative.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct NegativeInterval {
    pub start: f64,
    pub end: f64,
    pub min_total_rate: f64,
    pub points: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FlowScan {
    pub rows: Vec<FlowRow>,
    pub negative_intervals: Vec<NegativeInterval>,
}

pub fn flow_row(packet: &DimensionlessPacket, tau: f64) -> FlowRow {
    FlowRow {
        tau,
        pi: probability_beyond(packet, tau),
        rates: flow_rates(packet, tau),
        condition: negative_flow_condition_dimensionless(packet, tau).unwrap_or(FlowCondition::Boundary),
    }
}

pub fn scan_flow(scenario: &FlowScenario) -> FlowScan {
    let rows: Vec<FlowRow> = scenario
        .tau_grid
        .iter()
        .map(|&tau| flow_row(&scenario.packet, tau))
        .collect();
    let negative_intervals = negative_intervals(&rows);
    FlowScan {
        rows,
        negative_intervals,
    }
}

pub fn negative_intervals(rows: &[FlowRow]) -> Vec<NegativeInterval> {
    let mut out = Vec::new();
    let mut current: Option<NegativeInterval> = None;
    for row in rows {
        if row.condition.is_negative() {
            let run = current.get_or_insert(NegativeInterval {
                start: row.tau,
                end: row.tau,
                min_total_rate: row.rates.total_rate,
                points: 0,
            });
            run.end = row.tau;
            run.min_total_rate = run.min_total_rate.min(row.rates.total_rate);
            run.points += 1;
        } else if let Some(run) = current.take() {
            out.push(run);
        }
    }
    out.extend(current);
    out
}
