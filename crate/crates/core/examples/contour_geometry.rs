//! Wigner contour geometry: major axis, brute-force check, and the angle form
//! of the negative-flow condition.

use std::f64::consts::PI;

use wigner_backflow::geometry::{
    angle_condition, contour_points, major_axis_angle, major_axis_segment, region_sample, verify_major_axis,
    AngleGeometry,
};
use wigner_backflow::wigner::DimensionlessPacket;

fn main() -> wigner_backflow::Result<()> {
    for eps in [-3.0, -1.0, -0.2, 0.5, 2.0] {
        println!(
            "eps = {eps:5.1}: major axis at {:7.4} rad ({:6.2} deg), scan agrees: {}",
            major_axis_angle(eps)?,
            major_axis_angle(eps)? * 180.0 / PI,
            verify_major_axis(eps, 1.0)?
        );
    }

    let packet = DimensionlessPacket::new(0.0, 0.1, -2.0, 2.0)?;
    let contour = contour_points(&packet, 0.0, 1.0, 8)?;
    let [a, b] = major_axis_segment(&packet, 0.0, 1.0)?;
    println!(
        "contour sample: {:?}",
        contour.iter().map(|c| (c.point.xi, c.point.eta)).collect::<Vec<_>>()
    );
    println!(
        "major axis from ({:.4}, {:.4}) to ({:.4}, {:.4})",
        a.xi, a.eta, b.xi, b.eta
    );

    let g = AngleGeometry::at(&packet, 0.0)?;
    println!(
        "theta_bar = {:.4}, phi = {:.4}, negative flow: {}",
        g.theta_bar,
        g.phi,
        g.negative_flow()?
    );
    println!(
        "small angles: {} {}",
        angle_condition(0.01, 0.005)?,
        angle_condition(0.01, 0.02)?
    );
    println!(
        "fraction of the angle domain with negative flow: {:.4}",
        region_sample(200, 200)?.true_fraction()
    );
    Ok(())
}
