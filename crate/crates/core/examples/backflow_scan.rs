//! Scans a converging packet over time and reports the intervals in which the
//! probability beyond the detector decreases although the packet moves toward it.

use wigner_backflow::flow::{negative_flow_condition_dimensionless, scan_flow, FlowScenario};
use wigner_backflow::numerics::linspace;
use wigner_backflow::wigner::DimensionlessPacket;

fn main() -> wigner_backflow::Result<()> {
    for eps0 in [-4.0, -2.0, 1.0] {
        let packet = DimensionlessPacket::new(-3.0, 0.1, eps0, 2.0)?;
        let scenario = FlowScenario::new(packet, linspace(0.0, 10.0, 2001))?;
        for w in scenario.warnings() {
            eprintln!("warning: {w}");
        }
        let scan = scan_flow(&scenario);
        println!("eps0 = {eps0}: {} negative interval(s)", scan.negative_intervals.len());
        for iv in &scan.negative_intervals {
            println!(
                "  tau in [{:.3}, {:.3}], steepest decrease {:.3e} over {} grid points",
                iv.start, iv.end, iv.min_total_rate, iv.points
            );
        }
    }

    let packet = DimensionlessPacket::new(-3.0, 0.1, -4.0, 2.0)?;
    println!(
        "condition at tau = 0: {:?}",
        negative_flow_condition_dimensionless(&packet, 0.0)?
    );
    Ok(())
}
