//! Closed-form Wigner function against direct quadrature of its defining
//! integral, plus the shear law of free evolution.

use wigner_backflow::numerics::{linspace, ComplexValue};
use wigner_backflow::packet::PacketParams;
use wigner_backflow::wigner::{
    default_oracle_spec, omega, rescale, shear_evolve_check, tau_of, wigner_physical, wigner_quadrature_oracle,
    PhasePoint,
};

fn main() -> wigner_backflow::Result<()> {
    let params = PacketParams::new(1.0, 2.0, -1.0, 0.7, ComplexValue::new(0.2, 0.9), 1.0)?;
    let t = 1.25;
    let spec = default_oracle_spec(&params, t);
    let xc = params.center(t);

    println!(
        "{:>8} {:>8} {:>14} {:>14} {:>10}",
        "x", "p", "closed form", "quadrature", "|imag|"
    );
    for x in linspace(xc - 1.0, xc + 1.0, 3) {
        for p in linspace(params.p0 - 0.8, params.p0 + 0.8, 3) {
            let exact = wigner_physical(&params, x, p, t);
            let w = wigner_quadrature_oracle(&params, x, p, t, &spec)?;
            println!("{x:8.3} {p:8.3} {exact:14.10} {:14.10} {:10.2e}", w.re, w.im.abs());
        }
    }

    let packet = rescale(&params);
    let tau = tau_of(&params, t);
    let point = PhasePoint::new(0.4, 0.9);
    println!(
        "Omega at ({}, {}) = {:.10}; shear law holds: {}",
        point.xi,
        point.eta,
        omega(&packet, point, tau),
        shear_evolve_check(&packet, point, tau, 0.75)
    );
    Ok(())
}
