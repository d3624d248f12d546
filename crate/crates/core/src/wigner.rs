//! Wigner function of the Gaussian packet, in physical units and in the
//! dimensionless variables
//!
//! ```text
//! xi = x / L,  eta = p L / hbar,  tau = t hbar / (m L^2),  Omega = hbar W
//! ```
//!
//! where `L^2 = (hbar/2) Im(alpha0) / |alpha0|^2` is time-invariant. In these
//! variables the packet is fully described by `xi_tau = xi0 + eta0 tau`,
//! `eta0` and `eps_tau = eps0 + tau`.

use std::f64::consts::{FRAC_1_PI, PI};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::{ComplexValue, GaussLegendre, QuadratureSpec};
use crate::packet::{evolve_alpha, psi, spread, PacketParams};

/// Absolute tolerance used by [`shear_evolve_check`].
pub const SHEAR_CHECK_TOLERANCE: f64 = 1e-12;

/// Packet in dimensionless variables, together with the length scale `L`
/// that maps it back to physical units.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DimensionlessPacket {
    pub xi0: f64,
    pub eta0: f64,
    pub eps0: f64,
    /// Detector position `q / L`.
    pub delta: f64,
    pub length_scale: f64,
}

impl DimensionlessPacket {
    /// Packet with unit length scale.
    pub fn new(xi0: f64, eta0: f64, eps0: f64, delta: f64) -> Result<Self> {
        let packet = Self {
            xi0,
            eta0,
            eps0,
            delta,
            length_scale: 1.0,
        };
        packet.validate()?;
        Ok(packet)
    }

    pub fn validate(&self) -> Result<()> {
        if ![self.xi0, self.eta0, self.eps0, self.delta, self.length_scale]
            .iter()
            .all(|v| v.is_finite())
        {
            return Err(Error::config("dimensionless packet parameters must be finite"));
        }
        if self.length_scale <= 0.0 {
            return Err(Error::config("length scale L must be positive"));
        }
        Ok(())
    }

    pub fn xi_tau(&self, tau: f64) -> f64 {
        xi_tau(self, tau)
    }

    pub fn eps_tau(&self, tau: f64) -> f64 {
        epsilon_tau(self, tau)
    }

    /// Standard deviation of the position marginal, `sqrt((1 + eps_tau^2) / 2)`.
    pub fn position_spread(&self, tau: f64) -> f64 {
        let eps = self.eps_tau(tau);
        (0.5 * (1.0 + eps * eps)).sqrt()
    }

    pub fn center(&self, tau: f64) -> PhasePoint {
        PhasePoint::new(self.xi_tau(tau), self.eta0)
    }
}

/// Point in dimensionless phase space.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhasePoint {
    pub xi: f64,
    pub eta: f64,
}

impl PhasePoint {
    pub const fn new(xi: f64, eta: f64) -> Self {
        Self { xi, eta }
    }
}

/// Length scale `L = sqrt((hbar/2) Im(alpha0) / |alpha0|^2)`.
pub fn length_scale(params: &PacketParams) -> f64 {
    (0.5 * params.hbar * params.alpha0.im / params.alpha0.norm_sqr()).sqrt()
}

pub fn rescale(params: &PacketParams) -> DimensionlessPacket {
    let l = length_scale(params);
    DimensionlessPacket {
        xi0: params.x0 / l,
        eta0: params.p0 * l / params.hbar,
        eps0: params.alpha0.re / params.alpha0.im,
        delta: params.q / l,
        length_scale: l,
    }
}

/// Inverse of [`rescale`] for the given `hbar` and `mass`.
pub fn to_physical(packet: &DimensionlessPacket, hbar: f64, mass: f64) -> Result<PacketParams> {
    let l = packet.length_scale;
    let im = hbar / (2.0 * l * l * (1.0 + packet.eps0 * packet.eps0));
    PacketParams::new(
        hbar,
        mass,
        packet.xi0 * l,
        packet.eta0 * hbar / l,
        ComplexValue::new(packet.eps0 * im, im),
        packet.delta * l,
    )
}

/// Dimensionless time `t hbar / (m L^2)`.
pub fn tau_of(params: &PacketParams, t: f64) -> f64 {
    let l = length_scale(params);
    t * params.hbar / (params.mass * l * l)
}

/// Physical time `m L^2 tau / hbar`.
pub fn time_of(params: &PacketParams, tau: f64) -> f64 {
    let l = length_scale(params);
    tau * params.mass * l * l / params.hbar
}

pub fn epsilon_tau(packet: &DimensionlessPacket, tau: f64) -> f64 {
    packet.eps0 + tau
}

pub fn xi_tau(packet: &DimensionlessPacket, tau: f64) -> f64 {
    packet.xi0 + packet.eta0 * tau
}

/// `Omega = (1/pi) exp(-(xi~ - eps_tau eta~)^2 - eta~^2)`.
pub fn omega(packet: &DimensionlessPacket, point: PhasePoint, tau: f64) -> f64 {
    let dxi = point.xi - xi_tau(packet, tau);
    let deta = point.eta - packet.eta0;
    let u = dxi - epsilon_tau(packet, tau) * deta;
    FRAC_1_PI * (-u * u - deta * deta).exp()
}

/// Closed-form Wigner function in physical units.
pub fn wigner_physical(params: &PacketParams, x: f64, p: f64, t: f64) -> f64 {
    let alpha = evolve_alpha(params, t);
    let dx = x - params.center(t);
    let dp = p - params.p0;
    let corr = dp - 2.0 * dx * alpha.re;
    let exponent = -2.0 * dx * dx * alpha.im / params.hbar - corr * corr / (2.0 * params.hbar * alpha.im);
    exponent.exp() / (PI * params.hbar)
}

/// Default oracle rule: +-10 spreads in `y`, 400 nodes.
pub fn default_oracle_spec(params: &PacketParams, t: f64) -> QuadratureSpec {
    let s = spread(params, t);
    QuadratureSpec {
        lower: -10.0 * s,
        upper: 10.0 * s,
        node_count: 400,
    }
}

/// Evaluates `(1/(pi hbar)) int dy exp(-2ipy/hbar) psi(x+y) psi*(x-y)` by
/// quadrature. The real part is the Wigner function; the imaginary part
/// should vanish and is returned for inspection.
pub fn wigner_quadrature_oracle(
    params: &PacketParams,
    x: f64,
    p: f64,
    t: f64,
    spec: &QuadratureSpec,
) -> Result<ComplexValue> {
    spec.validate()?;
    let rule = GaussLegendre::new(spec.node_count);
    wigner_quadrature_oracle_with(params, x, p, t, spec, &rule)
}

/// [`wigner_quadrature_oracle`] with a prebuilt rule, for evaluating many
/// points. The rule's node count takes precedence over `spec.node_count`.
pub fn wigner_quadrature_oracle_with(
    params: &PacketParams,
    x: f64,
    p: f64,
    t: f64,
    spec: &QuadratureSpec,
    rule: &GaussLegendre,
) -> Result<ComplexValue> {
    spec.validate()?;
    let s = spread(params, t);
    if spec.lower > -8.0 * s || spec.upper < 8.0 * s {
        return Err(Error::config(format!(
            "wigner quadrature range [{}, {}] must cover +-8 spreads ({})",
            spec.lower,
            spec.upper,
            8.0 * s
        )));
    }
    let hbar = params.hbar;
    let integral: ComplexValue = rule.integrate(
        |y| {
            let kernel = ComplexValue::from_polar(1.0, -2.0 * p * y / hbar);
            kernel * psi(params, x + y, t) * psi(params, x - y, t).conj()
        },
        spec.lower,
        spec.upper,
    );
    Ok(integral / (PI * hbar))
}

/// Warning text when the oscillatory kernel is likely under-resolved:
/// `|p - p0| * range / hbar > node_count / 4`.
pub fn oracle_resolution_warning(params: &PacketParams, p: f64, spec: &QuadratureSpec) -> Option<String> {
    let cycles = (p - params.p0).abs() * (spec.upper - spec.lower) / params.hbar;
    let budget = spec.node_count as f64 / 4.0;
    (cycles > budget).then(|| {
        format!(
            "wigner oracle may be under-resolved at p = {p}: |p - p0| * range / hbar = {cycles:.3} exceeds node_count / 4 = {budget}"
        )
    })
}

/// Checks `Omega(xi, eta, tau + tau') == Omega(xi - eta tau', eta, tau)`.
pub fn shear_evolve_check(packet: &DimensionlessPacket, point: PhasePoint, tau: f64, tau_prime: f64) -> bool {
    shear_evolve_check_with(packet, point, tau, tau_prime, |pt, dt| {
        PhasePoint::new(pt.xi - pt.eta * dt, pt.eta)
    })
}

/// [`shear_evolve_check`] with a caller-supplied backward map
/// `(point, tau') -> point at tau`.
pub fn shear_evolve_check_with<M>(
    packet: &DimensionlessPacket,
    point: PhasePoint,
    tau: f64,
    tau_prime: f64,
    backward: M,
) -> bool
where
    M: Fn(PhasePoint, f64) -> PhasePoint,
{
    let evolved = omega(packet, point, tau + tau_prime);
    let pulled_back = omega(packet, backward(point, tau_prime), tau);
    (evolved - pulled_back).abs() <= SHEAR_CHECK_TOLERANCE
}

#[cfg(test)]
#[allow(clippy::excessive_precision)]
mod tests {
    use super::*;
    use crate::numerics::integrate_1d;
    use proptest::prelude::*;

    fn half_i() -> PacketParams {
        PacketParams::new(1.0, 1.0, 0.0, 1.0, ComplexValue::new(0.0, 0.5), 5.0).unwrap()
    }

    #[test]
    fn rescale_examples() {
        let d = rescale(&half_i());
        assert!((d.length_scale - 1.0).abs() < 1e-15);
        assert_eq!(d.eps0, 0.0);
        let p = PacketParams::new(1.0, 1.0, 0.0, 0.0, ComplexValue::new(0.5, 0.5), 0.0).unwrap();
        let d = rescale(&p);
        assert!((d.eps0 - 1.0).abs() < 1e-15);
        assert!((d.length_scale.powi(2) - 0.5).abs() < 1e-15);
        let scaled = PacketParams {
            alpha0: p.alpha0 * 3.7,
            ..p
        };
        assert!((rescale(&scaled).eps0 - d.eps0).abs() < 1e-15);
    }

    #[test]
    fn eps_and_xi_evolution() {
        let d = DimensionlessPacket::new(0.0, 2.0, -1.5, 3.0).unwrap();
        assert_eq!(epsilon_tau(&d, 0.0), -1.5);
        assert_eq!(epsilon_tau(&d, 1.5), 0.0);
        assert_eq!(xi_tau(&d, 1.5), 3.0);
        let still = DimensionlessPacket::new(0.4, 0.0, 0.0, 0.0).unwrap();
        assert_eq!(xi_tau(&still, 17.0), 0.4);
    }

    #[test]
    fn eps_matches_alpha_ratio() {
        let p = half_i();
        let d = rescale(&p);
        let a = evolve_alpha(&p, time_of(&p, 1.0));
        assert!((a.re / a.im - epsilon_tau(&d, 1.0)).abs() < 1e-12);
        let p = PacketParams::new(0.7, 2.3, 1.0, -0.4, ComplexValue::new(-1.2, 0.35), 3.0).unwrap();
        let d = rescale(&p);
        for tau in [-3.0, -0.2, 0.0, 0.9, 4.4] {
            let a = evolve_alpha(&p, time_of(&p, tau));
            assert!((a.re / a.im - epsilon_tau(&d, tau)).abs() < 1e-12);
        }
    }

    #[test]
    fn omega_values() {
        let d = DimensionlessPacket::new(0.3, -0.2, 0.0, 1.0).unwrap();
        assert_eq!(omega(&d, d.center(0.0), 0.0), FRAC_1_PI);
        let v = omega(&d, PhasePoint::new(1.3, 0.8), 0.0);
        assert!((v - 0.0430785586036973).abs() < 1e-15);
    }

    #[test]
    fn omega_is_normalized() {
        let d = DimensionlessPacket::new(0.5, 0.2, -1.3, 1.0).unwrap();
        let tau = 0.4;
        let eps = d.eps_tau(tau);
        let c = d.center(tau);
        let sx = d.position_spread(tau);
        let rule = GaussLegendre::new(200);
        let total: f64 = rule.integrate(
            |xi| rule.integrate(|eta| omega(&d, PhasePoint::new(xi, eta), tau), c.eta - 8.0, c.eta + 8.0),
            c.xi - 8.0 * 2f64.sqrt() * sx,
            c.xi + 8.0 * 2f64.sqrt() * sx,
        );
        assert!((total - 1.0).abs() < 1e-10, "{total} (eps {eps})");
    }

    #[test]
    fn physical_peak_and_worked_value() {
        let p = half_i();
        assert!((wigner_physical(&p, p.center(0.7), p.p0, 0.7) - 1.0 / PI).abs() < 1e-15);
        let t = 1.0;
        let w = wigner_physical(&p, p.center(t) + 1.0, p.p0, t);
        assert!((w - 0.117099663048638).abs() < 1e-14);
    }

    #[test]
    fn oracle_matches_closed_form() {
        let p = PacketParams::new(1.0, 1.0, -0.5, 0.8, ComplexValue::new(-0.6, 0.4), 2.0).unwrap();
        let t = 0.6;
        let spec = default_oracle_spec(&p, t);
        let center = wigner_quadrature_oracle(&p, p.center(t), p.p0, t, &spec).unwrap();
        assert!((center.re - 1.0 / (PI * p.hbar)).abs() < 1e-8);
        let s = spread(&p, t);
        let (x, pm) = (p.center(t) + 2.0 * s, p.p0 - 0.5);
        let got = wigner_quadrature_oracle(&p, x, pm, t, &spec).unwrap();
        assert!((got.re - wigner_physical(&p, x, pm, t)).abs() < 1e-8);
        assert!(got.im.abs() < 1e-10);
    }

    #[test]
    fn oracle_rejects_short_range() {
        let p = half_i();
        let s = spread(&p, 0.0);
        let spec = QuadratureSpec::new(-5.0 * s, 5.0 * s, 100).unwrap();
        assert!(matches!(
            wigner_quadrature_oracle(&p, 0.0, 0.0, 0.0, &spec),
            Err(Error::Config(_))
        ));
    }

    #[test]
    fn resolution_warning_threshold() {
        let p = half_i();
        let spec = QuadratureSpec::new(-10.0, 10.0, 400).unwrap();
        assert!(oracle_resolution_warning(&p, p.p0 + 1.0, &spec).is_none());
        assert!(oracle_resolution_warning(&p, p.p0 + 6.0, &spec).is_some());
    }

    #[test]
    fn shear_check_cases() {
        let d = DimensionlessPacket::new(0.0, 0.3, -2.0, 2.0).unwrap();
        let pt = PhasePoint::new(0.4, 1.1);
        assert!(shear_evolve_check(&d, pt, 0.7, 0.0));
        assert!(shear_evolve_check(&d, pt, 0.7, 0.5));
        let corrupted = |q: PhasePoint, dt: f64| PhasePoint::new(q.xi - d.eta0 * dt, q.eta);
        assert!(!shear_evolve_check_with(&d, pt, 0.7, 0.5, corrupted));
    }

    #[test]
    fn marginal_matches_position_density() {
        let p = PacketParams::new(1.0, 1.0, 0.2, 0.9, ComplexValue::new(-0.7, 0.6), 1.0).unwrap();
        let d = rescale(&p);
        let l = d.length_scale;
        let rule = GaussLegendre::new(200);
        for (xi_off, tau) in [(0.0, 0.0), (0.5, 0.3), (-1.2, 1.1), (2.0, 2.5), (-0.3, -0.8)] {
            let xi = d.xi_tau(tau) + xi_off;
            let marginal: f64 = rule.integrate(
                |eta| omega(&d, PhasePoint::new(xi, eta), tau),
                d.eta0 - 10.0,
                d.eta0 + 10.0,
            );
            let density = l * psi(&p, xi * l, time_of(&p, tau)).norm_sqr();
            assert!((marginal - density).abs() < 1e-10);
            let var = 0.5 * (1.0 + d.eps_tau(tau).powi(2));
            let gauss = (-(xi_off * xi_off) / (2.0 * var)).exp() / (2.0 * PI * var).sqrt();
            assert!((marginal - gauss).abs() < 1e-10);
        }
    }

    #[test]
    fn integrate_1d_drives_marginal_too() {
        let d = DimensionlessPacket::new(0.0, 0.0, 0.0, 0.0).unwrap();
        let spec = QuadratureSpec::new(-10.0, 10.0, 200).unwrap();
        let m = integrate_1d(|eta| omega(&d, PhasePoint::new(0.0, eta), 0.0), &spec).unwrap();
        assert!((m - 1.0 / PI.sqrt()).abs() < 1e-13);
    }

    proptest! {
        #[test]
        fn omega_positive_and_bounded(
            xi0 in -5.0f64..5.0, eta0 in -3.0f64..3.0, eps0 in -5.0f64..5.0,
            xi in -8.0f64..8.0, eta in -5.0f64..5.0, tau in -4.0f64..4.0,
        ) {
            let d = DimensionlessPacket::new(xi0, eta0, eps0, 0.0).unwrap();
            let v = omega(&d, PhasePoint::new(xi, eta), tau);
            prop_assert!((0.0..=FRAC_1_PI).contains(&v));
        }

        #[test]
        fn physical_matches_dimensionless_and_shears(
            hbar in 0.3f64..3.0, m in 0.3f64..3.0, re in -2.0f64..2.0, im in 0.1f64..2.0,
            x0 in -2.0f64..2.0, p0 in -2.0f64..2.0, dx in -1.5f64..1.5, dp in -1.5f64..1.5, t in -2.0f64..2.0,
        ) {
            let p = PacketParams::new(hbar, m, x0, p0, ComplexValue::new(re, im), 1.0).unwrap();
            let d = rescale(&p);
            let l = d.length_scale;
            let s = spread(&p, t);
            let ps = hbar / (2.0 * s);
            let (x, mom) = (p.center(t) + dx * s, p0 + dp * ps);
            let w = wigner_physical(&p, x, mom, t);
            let om = omega(&d, PhasePoint::new(x / l, mom * l / hbar), tau_of(&p, t));
            prop_assert!((w - om / hbar).abs() <= 1e-12 * (w.abs() + 1e-300).max(1e-12));
            let sheared = wigner_physical(&p, x - mom * t / m, mom, 0.0);
            prop_assert!((w - sheared).abs() <= 1e-12 * w.max(1e-3));
        }

        #[test]
        fn rescale_round_trip(
            hbar in 0.1f64..5.0, m in 0.1f64..5.0, re in -3.0f64..3.0, im in 0.05f64..3.0,
            x0 in -10.0f64..10.0, p0 in -5.0f64..5.0, q in -10.0f64..10.0,
        ) {
            let p = PacketParams::new(hbar, m, x0, p0, ComplexValue::new(re, im), q).unwrap();
            let back = to_physical(&rescale(&p), hbar, m).unwrap();
            let close = |a: f64, b: f64| (a - b).abs() <= 1e-12 * a.abs().max(b.abs()).max(1e-300);
            prop_assert!(close(back.x0, p.x0) && close(back.p0, p.p0) && close(back.q, p.q));
            prop_assert!(close(back.alpha0.re, p.alpha0.re) && close(back.alpha0.im, p.alpha0.im));
        }

        #[test]
        fn shear_law_holds(
            eps0 in -4.0f64..4.0, eta0 in -2.0f64..2.0, xi in -4.0f64..4.0, eta in -3.0f64..3.0,
            tau in -2.0f64..2.0, dt in -2.0f64..2.0,
        ) {
            let d = DimensionlessPacket::new(0.1, eta0, eps0, 0.0).unwrap();
            prop_assert!(shear_evolve_check(&d, PhasePoint::new(xi, eta), tau, dt));
        }
    }
}
