//! Splits the rate of change of the probability beyond a detector into the
//! rigid shift and the shear contributions.

use wigner_backflow::flow::{flow_rates, probability_beyond, probability_rate_fd};
use wigner_backflow::wigner::DimensionlessPacket;

fn main() -> wigner_backflow::Result<()> {
    // eps = -3, eta0 = 0.1, detector 2 length units ahead of the center
    let packet = DimensionlessPacket::new(0.0, 0.1, -3.0, 2.0)?;
    let rates = flow_rates(&packet, 0.0);
    println!("probability beyond = {:.15}", probability_beyond(&packet, 0.0));
    println!("shift rate         = {:+.15}", rates.shift_rate);
    println!("shear rate         = {:+.15}", rates.shear_rate);
    println!("total rate         = {:+.15}", rates.total_rate);
    println!("finite difference  = {:+.15}", probability_rate_fd(&packet, 0.0, 1e-5));
    Ok(())
}
