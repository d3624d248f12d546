//! Free evolution of a Gaussian packet: center, complex width, spread, and
//! the dimensionless description of the same state.
//!
//! cargo run --example packet_evolution

use wigner_backflow::numerics::ComplexValue;
use wigner_backflow::packet::{classical_arrival_time, psi, spread, tdse_residual, PacketParams};
use wigner_backflow::wigner::{rescale, tau_of};

fn main() -> wigner_backflow::Result<()> {
    // hbar = m = 1, packet at the origin moving right, slightly converging
    let params = PacketParams::new(1.0, 1.0, 0.0, 1.5, ComplexValue::new(-0.3, 0.4), 6.0)?;
    let packet = rescale(&params);
    println!(
        "L = {:.6}, xi0 = {:.4}, eta0 = {:.4}, eps0 = {:.4}, delta = {:.4}",
        packet.length_scale, packet.xi0, packet.eta0, packet.eps0, packet.delta
    );
    let arrival = classical_arrival_time(&params)?;
    println!("classical arrival at the detector: t = {:.4}", arrival.time);

    println!(
        "{:>6} {:>9} {:>22} {:>9} {:>9} {:>11}",
        "t", "x_t", "alpha_t", "spread", "eps_tau", "residual"
    );
    for k in 0..=8 {
        let t = 0.5 * k as f64;
        let s = params.state(t);
        let tau = tau_of(&params, t);
        println!(
            "{t:6.2} {:9.4} {:10.5}{:+10.5}i {:9.5} {:9.4} {:11.3e}",
            s.x_t,
            s.alpha_t.re,
            s.alpha_t.im,
            spread(&params, t),
            packet.eps_tau(tau),
            tdse_residual(&params, s.x_t + 0.5, t, 1e-4, 1e-4),
        );
    }
    // the packet narrows until eps_tau = 0, then spreads
    let waist = -packet.eps0 * packet.length_scale.powi(2) * params.mass / params.hbar;
    println!(
        "narrowest at t = {waist:.4}; |psi(x_t)|^2 there = {:.6}",
        psi(&params, params.center(waist), waist).norm_sqr()
    );
    Ok(())
}
