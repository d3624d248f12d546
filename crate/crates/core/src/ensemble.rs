//! Classical ensemble oracle.
//!
//! Free classical particles are drawn from the (positive) Gaussian Wigner
//! density at `tau = 0`, moved by `(xi, eta) -> (xi + eta tau, eta)`, and
//! counted beyond the detector. The counts estimate the same `Pi(tau)` as
//! the quantum closed form.
//!
//! Particle `i` always uses counter block `[2i, 2i + 2)` of the seed's
//! stream, so counts do not depend on how particles are split across
//! workers.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::flow::probability_beyond;
use crate::numerics::{sample_standard_normal_pair, RngState};
use crate::wigner::{DimensionlessPacket, PhasePoint};

/// Particles per parallel work item. Fixed so the reduction order never
/// depends on the pool size.
const CHUNK: usize = 1 << 16;

/// Hard acceptance bound on the largest z-score of a comparison.
pub const Z_SCORE_LIMIT: f64 = 6.0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EnsembleRun {
    pub sample_count: usize,
    pub seed: u64,
    pub tau: f64,
    pub pi_estimate: f64,
    pub standard_error: f64,
}

impl EnsembleRun {
    fn from_count(count: u64, sample_count: usize, seed: u64, tau: f64) -> Self {
        let p = count as f64 / sample_count as f64;
        Self {
            sample_count,
            seed,
            tau,
            pi_estimate: p,
            standard_error: binomial_standard_error(p, sample_count),
        }
    }
}

pub fn binomial_standard_error(p: f64, n: usize) -> f64 {
    (p * (1.0 - p) / n as f64).sqrt()
}

/// Initial phase point of particle `index`.
///
/// `eta~ = v`, `xi~ = u + eps0 v` with `u, v ~ N(0, 1/2)` independent, which
/// has exactly the covariance of the `tau = 0` Wigner density.
pub fn initial_point(packet: &DimensionlessPacket, seed: u64, index: u64) -> PhasePoint {
    let (z1, z2, _) = sample_standard_normal_pair(RngState::at(seed, 2 * index));
    let u = z1 * std::f64::consts::FRAC_1_SQRT_2;
    let v = z2 * std::f64::consts::FRAC_1_SQRT_2;
    PhasePoint::new(packet.xi0 + u + packet.eps0 * v, packet.eta0 + v)
}

pub fn sample_initial(packet: &DimensionlessPacket, n: usize, seed: u64) -> Result<Vec<PhasePoint>> {
    if n == 0 {
        return Err(Error::config("ensemble size must be positive"));
    }
    Ok((0..n as u64).map(|i| initial_point(packet, seed, i)).collect())
}

/// Free classical motion over `tau`; momentum is untouched.
pub fn evolve_point(point: PhasePoint, tau: f64) -> PhasePoint {
    PhasePoint::new(point.xi + point.eta * tau, point.eta)
}

pub fn evolve_free(points: &[PhasePoint], tau: f64) -> Vec<PhasePoint> {
    points.iter().map(|&p| evolve_point(p, tau)).collect()
}

/// Fraction of points with `xi > delta` and its binomial standard error.
pub fn estimate_pi_cl(points: &[PhasePoint], delta: f64) -> Result<(f64, f64)> {
    if points.is_empty() {
        return Err(Error::config("cannot estimate a probability from an empty sample"));
    }
    let count = points.iter().filter(|p| p.xi > delta).count();
    let p = count as f64 / points.len() as f64;
    Ok((p, binomial_standard_error(p, points.len())))
}

/// Streams `n` particles through every `tau` and counts those beyond `delta`,
/// without materializing the sample. Runs on the current rayon pool.
pub fn count_beyond(packet: &DimensionlessPacket, delta: f64, taus: &[f64], n: usize, seed: u64) -> Result<Vec<u64>> {
    if n == 0 {
        return Err(Error::config("ensemble size must be positive"));
    }
    let chunks = n.div_ceil(CHUNK);
    let partials: Vec<Vec<u64>> = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut counts = vec![0u64; taus.len()];
            let end = ((c + 1) * CHUNK).min(n);
            for i in c * CHUNK..end {
                let p0 = initial_point(packet, seed, i as u64);
                for (slot, &tau) in counts.iter_mut().zip(taus) {
                    if evolve_point(p0, tau).xi > delta {
                        *slot += 1;
                    }
                }
            }
            counts
        })
        .collect();
    let mut total = vec![0u64; taus.len()];
    for part in &partials {
        for (t, c) in total.iter_mut().zip(part) {
            *t += c;
        }
    }
    Ok(total)
}

/// Ensemble estimates of `Pi_cl` on a time grid.
pub fn run_ensemble(
    packet: &DimensionlessPacket,
    delta: f64,
    taus: &[f64],
    n: usize,
    seed: u64,
) -> Result<Vec<EnsembleRun>> {
    let counts = count_beyond(packet, delta, taus, n, seed)?;
    Ok(counts
        .iter()
        .zip(taus)
        .map(|(&c, &tau)| EnsembleRun::from_count(c, n, seed, tau))
        .collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ComparisonRow {
    pub run: EnsembleRun,
    pub pi_quantum: f64,
    /// `|pi_cl - pi_quantum| / stderr`; zero when both agree exactly with a
    /// degenerate (zero) standard error, infinite when they disagree.
    pub z_score: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Comparison {
    pub rows: Vec<ComparisonRow>,
    pub max_z_score: f64,
}

impl Comparison {
    pub fn passes(&self) -> bool {
        self.max_z_score < Z_SCORE_LIMIT
    }
}

fn z_score(estimate: f64, exact: f64, stderr: f64) -> f64 {
    let diff = (estimate - exact).abs();
    if stderr > 0.0 {
        diff / stderr
    } else {
        // All particles on one side: use the standard error the exact
        // probability would give, so a correct degenerate sample is not flagged.
        let fallback = (exact * (1.0 - exact)).sqrt();
        if diff == 0.0 {
            0.0
        } else if fallback > 0.0 {
            diff / fallback
        } else {
            f64::INFINITY
        }
    }
}

/// Compares ensemble estimates with the closed-form quantum probability.
pub fn quantum_classical_compare(
    packet: &DimensionlessPacket,
    delta: f64,
    tau_grid: &[f64],
    n: usize,
    seed: u64,
) -> Result<Comparison> {
    if tau_grid.is_empty() {
        return Err(Error::config("time grid is empty"));
    }
    let target = DimensionlessPacket { delta, ..*packet };
    let runs = run_ensemble(packet, delta, tau_grid, n, seed)?;
    let rows: Vec<ComparisonRow> = runs
        .into_iter()
        .map(|run| {
            let pi_quantum = probability_beyond(&target, run.tau);
            ComparisonRow {
                run,
                pi_quantum,
                z_score: z_score(run.pi_estimate, pi_quantum, run.standard_error),
            }
        })
        .collect();
    let max_z_score = rows.iter().map(|r| r.z_score).fold(0.0, f64::max);
    Ok(Comparison { rows, max_z_score })
}

#[cfg(test)]
#[allow(clippy::excessive_precision)]
mod tests {
    use super::*;
    use crate::wigner::shear_evolve_check_with;
    use proptest::prelude::*;

    fn moments(points: &[PhasePoint], packet: &DimensionlessPacket) -> (f64, f64, f64) {
        let n = points.len() as f64;
        let (mut vx, mut vy, mut cxy) = (0.0, 0.0, 0.0);
        for p in points {
            let (x, y) = (p.xi - packet.xi0, p.eta - packet.eta0);
            vx += x * x;
            vy += y * y;
            cxy += x * y;
        }
        (vx / n, vy / n, cxy / n)
    }

    #[test]
    fn uncorrelated_sample_at_zero_eps() {
        let d = DimensionlessPacket::new(0.0, 0.0, 0.0, 1.0).unwrap();
        let n = 1_000_000;
        let pts = sample_initial(&d, n, 11).unwrap();
        let (_, _, cov) = moments(&pts, &d);
        assert!(cov.abs() < 3.0 / (n as f64).sqrt() * 0.5, "cov {cov}");
    }

    #[test]
    fn correlated_sample_matches_wigner_moments() {
        let d = DimensionlessPacket::new(1.0, -0.5, 1.0, 1.0).unwrap();
        let pts = sample_initial(&d, 1_000_000, 5).unwrap();
        let (vx, vy, cxy) = moments(&pts, &d);
        assert!((vx - 1.0).abs() < 0.01, "var xi {vx}");
        assert!((vy - 0.5).abs() < 0.005, "var eta {vy}");
        assert!((cxy - 0.5).abs() < 0.005, "cov {cxy}");
    }

    #[test]
    fn sampling_is_seeded() {
        let d = DimensionlessPacket::new(0.0, 0.1, -2.0, 2.0).unwrap();
        assert_eq!(sample_initial(&d, 100, 3).unwrap(), sample_initial(&d, 100, 3).unwrap());
        assert_ne!(sample_initial(&d, 100, 3).unwrap(), sample_initial(&d, 100, 4).unwrap());
        assert!(matches!(sample_initial(&d, 0, 3), Err(Error::Config(_))));
    }

    #[test]
    fn free_evolution_properties() {
        let d = DimensionlessPacket::new(0.0, 0.3, -1.0, 2.0).unwrap();
        let pts = sample_initial(&d, 1000, 9).unwrap();
        assert_eq!(evolve_free(&pts, 0.0), pts);
        let back = evolve_free(&evolve_free(&pts, 1.7), -1.7);
        let composed = evolve_free(&evolve_free(&pts, 0.6), 1.1);
        let direct = evolve_free(&pts, 1.7);
        for ((p, b), (c, e)) in pts.iter().zip(&back).zip(composed.iter().zip(&direct)) {
            assert!((p.xi - b.xi).abs() <= 1e-15 * (1.0 + p.xi.abs()));
            assert_eq!(p.eta, b.eta);
            assert!((c.xi - e.xi).abs() <= 1e-15 * (1.0 + e.xi.abs()) * 2.0);
        }
    }

    #[test]
    fn estimate_edge_cases() {
        let pts = vec![PhasePoint::new(-1.0, 0.0), PhasePoint::new(-2.0, 0.0)];
        assert_eq!(estimate_pi_cl(&pts, 0.0).unwrap(), (0.0, 0.0));
        assert_eq!(estimate_pi_cl(&pts, f64::NEG_INFINITY).unwrap(), (1.0, 0.0));
        assert!(estimate_pi_cl(&[], 0.0).is_err());
    }

    #[test]
    fn estimate_matches_closed_form() {
        let d = DimensionlessPacket::new(0.0, 1.0, 0.0, 1.0).unwrap();
        let pts = sample_initial(&d, 1_000_000, 77).unwrap();
        let (p, se) = estimate_pi_cl(&pts, 1.0).unwrap();
        assert!((p - 0.078649603525142565).abs() < 3.0 * se, "{p} +- {se}");
    }

    #[test]
    fn streaming_counts_match_materialized_sample() {
        let d = DimensionlessPacket::new(0.0, 0.4, -1.5, 1.0).unwrap();
        let taus = [0.0, 0.5, 2.0];
        let n = CHUNK + 1234;
        let counts = count_beyond(&d, d.delta, &taus, n, 21).unwrap();
        let pts = sample_initial(&d, n, 21).unwrap();
        for (&tau, &c) in taus.iter().zip(&counts) {
            let direct = evolve_free(&pts, tau).iter().filter(|p| p.xi > d.delta).count() as u64;
            assert_eq!(c, direct);
        }
    }

    #[test]
    fn small_ensembles_are_consistent() {
        let d = DimensionlessPacket::new(0.0, 0.1, -2.0, 0.5).unwrap();
        let cmp = quantum_classical_compare(&d, d.delta, &[0.0, 1.0], 100, 1).unwrap();
        for row in &cmp.rows {
            assert!(row.run.standard_error > 0.02 && row.run.standard_error < 0.06);
        }
        assert!(cmp.passes());
        assert!(quantum_classical_compare(&d, d.delta, &[], 100, 1).is_err());
    }

    #[test]
    fn degenerate_z_score() {
        assert_eq!(z_score(0.0, 0.0, 0.0), 0.0);
        assert!(z_score(0.0, 0.01, 0.0) < 0.2);
        assert_eq!(z_score(0.0, 1.0, 0.0), f64::INFINITY);
    }

    proptest! {
        #[test]
        fn classical_and_quantum_shear_coincide(
            eps0 in -4.0f64..4.0, eta0 in -2.0f64..2.0, xi in -4.0f64..4.0, eta in -3.0f64..3.0,
            tau in -2.0f64..2.0, dt in -2.0f64..2.0,
        ) {
            let d = DimensionlessPacket::new(0.0, eta0, eps0, 0.0).unwrap();
            let backward = |p: PhasePoint, s: f64| evolve_point(p, -s);
            prop_assert!(shear_evolve_check_with(&d, PhasePoint::new(xi, eta), tau, dt, backward));
            prop_assert_eq!(evolve_point(PhasePoint::new(xi, eta), dt).eta, eta);
        }
    }
}
