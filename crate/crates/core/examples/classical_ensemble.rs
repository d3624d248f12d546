//! Samples the initial Wigner function as a classical ensemble, moves every
//! point freely, and compares the fraction beyond the detector with the
//! quantum probability.
//!
//! The result does not depend on the number of worker threads.

use wigner_backflow::ensemble::{quantum_classical_compare, run_ensemble};
use wigner_backflow::numerics::linspace;
use wigner_backflow::wigner::DimensionlessPacket;

fn main() -> wigner_backflow::Result<()> {
    let packet = DimensionlessPacket::new(0.0, 0.1, -2.0, 2.0)?;
    let cmp = quantum_classical_compare(&packet, packet.delta, &linspace(0.0, 4.0, 9), 1_000_000, 2024)?;
    println!(
        "{:>6} {:>10} {:>10} {:>10} {:>6}",
        "tau", "classical", "stderr", "quantum", "z"
    );
    for row in &cmp.rows {
        println!(
            "{:6.2} {:10.6} {:10.2e} {:10.6} {:6.2}",
            row.run.tau, row.run.pi_estimate, row.run.standard_error, row.pi_quantum, row.z_score
        );
    }
    println!("max z = {:.3}, passes: {}", cmp.max_z_score, cmp.passes());

    let backflow = DimensionlessPacket::new(0.0, 0.1, -4.0, 2.0)?;
    let runs = run_ensemble(&backflow, backflow.delta, &[0.0, 1.0], 1_000_000, 7)?;
    println!(
        "converging packet: fraction beyond drops from {:.5} to {:.5}",
        runs[0].pi_estimate, runs[1].pi_estimate
    );
    Ok(())
}
