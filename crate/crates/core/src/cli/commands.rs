use std::f64::consts::FRAC_1_SQRT_2;
use std::path::Path;

use rayon::prelude::*;
use serde_json::{json, Map, Value};

use super::config::{Format, PacketSource, ResolvedPacket, RunConfig};
use super::output::{num_value, Cell, Emitter, Table};
use crate::ensemble::{quantum_classical_compare, Z_SCORE_LIMIT};
use crate::error::Result;
use crate::flow::{scan_flow, FlowScenario};
use crate::geometry::{contour_points, major_axis_segment, region_sample, AngleGeometry, ContourPoint};
use crate::numerics::{linspace, GaussLegendre};
use crate::packet::{classical_arrival_time, evolve_alpha, evolve_gamma, spread};
use crate::wigner::{
    default_oracle_spec, omega, oracle_resolution_warning, rescale, to_physical, wigner_quadrature_oracle_with,
    DimensionlessPacket, PhasePoint,
};

/// Default number of time points per command when the config gives none.
pub const PACKET_TIME_POINTS: usize = 5;
pub const FLOW_TIME_POINTS: usize = 2001;
pub const MONTECARLO_TIME_POINTS: usize = 20;

const DEFAULT_CONTOUR_CONSTANT: f64 = 1.0;
const DEFAULT_CONTOUR_POINTS: usize = 256;
const DEFAULT_FIG3_DTAU: f64 = 1.0;
const DEFAULT_REGION_POINTS: usize = 200;
const DEFAULT_GRID_POINTS: usize = 81;
const ROUND_TRIP_TOLERANCE: f64 = 1e-12;
/// Oracle vs closed form, in physical Wigner units.
const ORACLE_TOLERANCE: f64 = 1e-8;
const ORACLE_IMAG_TOLERANCE: f64 = 1e-10;

/// Result of a subcommand.
#[derive(Debug, Default)]
pub struct Outcome {
    pub stdout: String,
    pub warnings: Vec<String>,
    /// An internal acceptance check failed (exit code 1).
    pub check_failed: bool,
}

/// Materializes the defaults a command uses so the provenance header is complete.
fn effective(config: &RunConfig, default_points: usize) -> RunConfig {
    let mut c = config.clone();
    c.hbar.get_or_insert(1.0);
    c.mass.get_or_insert(1.0);
    c.format.get_or_insert(Format::Csv);
    c.strict_scenario.get_or_insert(false);
    if c.times.is_none() {
        c.time_start.get_or_insert(super::config::DEFAULT_TIME_START);
        c.time_end.get_or_insert(super::config::DEFAULT_TIME_END);
        c.time_points.get_or_insert(default_points);
    }
    c
}

fn source_label(r: &ResolvedPacket) -> &'static str {
    match r.source {
        PacketSource::Physical(_) => "physical",
        PacketSource::Dimensionless(_) => "dimensionless",
    }
}

fn packet_comment(p: &DimensionlessPacket) -> (&'static str, String) {
    (
        "packet",
        format!(
            "xi0={} eta0={} eps0={} delta={} L={}",
            p.xi0, p.eta0, p.eps0, p.delta, p.length_scale
        ),
    )
}

pub fn cmd_packet(config: &RunConfig, out: &Path) -> Result<Outcome> {
    let cfg = effective(config, PACKET_TIME_POINTS);
    let r = cfg.resolve(PACKET_TIME_POINTS)?;
    let params = r.params;
    let mut outcome = Outcome::default();

    let mut table = Table::new(&[
        "time", "tau", "x_t", "xi_tau", "alpha_re", "alpha_im", "eps_tau", "spread", "gamma_re", "gamma_im",
    ]);
    for (&time, &tau) in r.times.iter().zip(&r.taus) {
        let t = crate::wigner::time_of(&params, tau);
        let alpha = evolve_alpha(&params, t);
        let gamma = evolve_gamma(&params, t);
        table.push(vec![
            time.into(),
            tau.into(),
            params.center(t).into(),
            r.packet.xi_tau(tau).into(),
            alpha.re.into(),
            alpha.im.into(),
            r.packet.eps_tau(tau).into(),
            spread(&params, t).into(),
            gamma.re.into(),
            gamma.im.into(),
        ]);
    }

    // round trip physical -> dimensionless -> physical
    let back = to_physical(&rescale(&params), params.hbar, params.mass)?;
    let rel = |a: f64, b: f64| {
        if a == b {
            0.0
        } else {
            (a - b).abs() / a.abs().max(b.abs())
        }
    };
    let round_trip = [
        rel(back.x0, params.x0),
        rel(back.p0, params.p0),
        rel(back.q, params.q),
        rel(back.alpha0.re, params.alpha0.re),
        rel(back.alpha0.im, params.alpha0.im),
    ]
    .into_iter()
    .fold(0.0, f64::max);
    if round_trip > ROUND_TRIP_TOLERANCE {
        outcome.check_failed = true;
    }

    let arrival = classical_arrival_time(&params);
    let arrival_text = match &arrival {
        Ok(a) if a.moving_away => format!("{} (moving away)", a.time),
        Ok(a) => a.time.to_string(),
        Err(_) => "undefined (p0 = 0)".to_string(),
    };
    let extra = vec![
        ("source", source_label(&r).to_string()),
        ("L", r.packet.length_scale.to_string()),
        ("eps0", r.packet.eps0.to_string()),
        ("t_cl", arrival_text.clone()),
        ("rescale_round_trip_max_rel_error", round_trip.to_string()),
        packet_comment(&r.packet),
    ];

    let mut em = Emitter::new(out, cfg.provenance())?;
    let path = em.table("packet", &table, cfg.format(), &extra, None)?;
    outcome.stdout = std::fs::read_to_string(&path).unwrap_or_default();
    Ok(outcome)
}

pub fn cmd_flow(config: &RunConfig, out: &Path) -> Result<Outcome> {
    let cfg = effective(config, FLOW_TIME_POINTS);
    let r = cfg.resolve(FLOW_TIME_POINTS)?;
    let scenario = FlowScenario::new(r.packet, r.taus.clone())?;
    if cfg.strict() {
        scenario.check_strict()?;
    }
    let warnings = scenario.warnings();
    let scan = scan_flow(&scenario);

    let mut table = Table::new(&["tau", "pi", "shift_rate", "shear_rate", "total_rate", "negative_flag"]);
    for row in &scan.rows {
        table.push(vec![
            row.tau.into(),
            row.pi.into(),
            row.rates.shift_rate.into(),
            row.rates.shear_rate.into(),
            row.rates.total_rate.into(),
            row.condition.label().into(),
        ]);
    }
    let mut em = Emitter::new(out, cfg.provenance())?;
    em.table("flow", &table, cfg.format(), &[packet_comment(&r.packet)], None)?;

    let intervals: Vec<Value> = scan
        .negative_intervals
        .iter()
        .map(|iv| {
            json!({
                "start": num_value(iv.start),
                "end": num_value(iv.end),
                "min_total_rate": num_value(iv.min_total_rate),
                "points": iv.points,
            })
        })
        .collect();
    let mut summary = Map::new();
    summary.insert("packet".into(), serde_json::to_value(r.packet)?);
    summary.insert("rows".into(), json!(scan.rows.len()));
    summary.insert("negative_intervals".into(), Value::Array(intervals));
    summary.insert("warnings".into(), json!(warnings));
    em.json("flow_summary.json", summary)?;

    Ok(Outcome {
        stdout: format!(
            "flow: {} rows, {} negative interval(s)\n",
            scan.rows.len(),
            scan.negative_intervals.len()
        ),
        warnings,
        check_failed: false,
    })
}

fn contour_table(points: &[ContourPoint]) -> Table {
    let mut t = Table::new(&["s", "xi", "eta"]);
    for c in points {
        t.push(vec![c.s.into(), c.point.xi.into(), c.point.eta.into()]);
    }
    t
}

fn shifted(points: &[ContourPoint], by: f64) -> Vec<ContourPoint> {
    points
        .iter()
        .map(|c| ContourPoint {
            s: c.s,
            point: PhasePoint::new(c.point.xi + by, c.point.eta),
        })
        .collect()
}

pub fn cmd_figures(config: &RunConfig, out: &Path) -> Result<Outcome> {
    let cfg = effective(&config.clone().with_default_packet(), FLOW_TIME_POINTS);
    let r = cfg.resolve(FLOW_TIME_POINTS)?;
    let packet = r.packet;
    let fmt = cfg.format();
    let c = cfg.contour_constant.unwrap_or(DEFAULT_CONTOUR_CONSTANT);
    let npts = cfg.contour_points.unwrap_or(DEFAULT_CONTOUR_POINTS);
    let fig_tau = cfg.fig_tau.unwrap_or(r.taus[0]);
    let dtau = cfg.fig3_dtau.unwrap_or(DEFAULT_FIG3_DTAU);
    let mut em = Emitter::new(out, cfg.provenance())?;
    let pc = packet_comment(&packet);

    // fig1: one contour and its major axis
    let contour = contour_points(&packet, fig_tau, c, npts)?;
    let tau_note = ("tau", fig_tau.to_string());
    em.table(
        "fig1_contour",
        &contour_table(&contour),
        fmt,
        &[pc.clone(), tau_note.clone()],
        None,
    )?;
    let mut axis = Table::new(&["xi_start", "eta_start", "xi_end", "eta_end"]);
    if let Ok([a, b]) = major_axis_segment(&packet, fig_tau, c) {
        axis.push(vec![a.xi.into(), a.eta.into(), b.xi.into(), b.eta.into()]);
    }
    em.table("fig1_axis", &axis, fmt, &[pc.clone(), tau_note], None)?;

    // fig2: theta(tau), skipping the minimal-uncertainty instant
    let mut fig2 = Table::new(&["tau", "theta"]);
    for &tau in &r.taus {
        if let Ok(g) = AngleGeometry::at(&packet, tau) {
            fig2.push(vec![tau.into(), g.theta.into()]);
        }
    }
    em.table(
        "fig2_theta",
        &fig2,
        fmt,
        &[pc.clone(), ("undefined_at_tau", (-packet.eps0).to_string())],
        None,
    )?;

    // fig3: current, rigidly shifted, then sheared contour
    let current = contour_points(&packet, fig_tau, c, npts)?;
    let moved = shifted(&current, packet.eta0 * dtau);
    let sheared = contour_points(&packet, fig_tau + dtau, c, npts)?;
    let note = [pc.clone(), ("tau", fig_tau.to_string()), ("dtau", dtau.to_string())];
    em.table("fig3_current", &contour_table(&current), fmt, &note, None)?;
    em.table("fig3_shifted", &contour_table(&moved), fmt, &note, None)?;
    em.table("fig3_sheared", &contour_table(&sheared), fmt, &note, None)?;
    let mut axes = Table::new(&["snapshot", "xi_start", "eta_start", "xi_end", "eta_end"]);
    let shift = packet.eta0 * dtau;
    for (label, tau, offset) in [
        ("current", fig_tau, 0.0),
        ("shifted", fig_tau, shift),
        ("sheared", fig_tau + dtau, 0.0),
    ] {
        if let Ok([a, b]) = major_axis_segment(&packet, tau, c) {
            axes.push(vec![
                label.into(),
                (a.xi + offset).into(),
                a.eta.into(),
                (b.xi + offset).into(),
                b.eta.into(),
            ]);
        }
    }
    em.table("fig3_axes", &axes, fmt, &note, None)?;

    // fig4: angle annotation data over the time grid
    let mut fig4 = Table::new(&["tau", "theta", "theta_bar", "phi", "angle_condition"]);
    for &tau in &r.taus {
        if let Ok(g) = AngleGeometry::at(&packet, tau) {
            let cond = match g.negative_flow() {
                Ok(b) => Cell::from(b),
                Err(_) => Cell::from("out_of_domain"),
            };
            fig4.push(vec![tau.into(), g.theta.into(), g.theta_bar.into(), g.phi.into(), cond]);
        }
    }
    em.table("fig4_angles", &fig4, fmt, std::slice::from_ref(&pc), None)?;

    // fig5: region of the angle-form condition
    let nt = cfg.region_theta_points.unwrap_or(DEFAULT_REGION_POINTS);
    let np = cfg.region_phi_points.unwrap_or(DEFAULT_REGION_POINTS);
    let region = region_sample(nt, np)?;
    let mut fig5 = Table::new(&["theta_bar", "phi", "flag"]);
    for (tb, row) in region.theta_bar.iter().zip(&region.flags) {
        for (ph, &flag) in region.phi.iter().zip(row) {
            fig5.push(vec![(*tb).into(), (*ph).into(), flag.into()]);
        }
    }
    let fraction = region.true_fraction();
    em.table(
        "fig5_region",
        &fig5,
        fmt,
        &[("true_fraction", fraction.to_string())],
        None,
    )?;

    let mut summary = Map::new();
    summary.insert("packet".into(), serde_json::to_value(packet)?);
    summary.insert("fig_tau".into(), num_value(fig_tau));
    summary.insert("fig3_dtau".into(), num_value(dtau));
    summary.insert("fig5_true_fraction".into(), num_value(fraction));
    summary.insert(
        "files".into(),
        json!(em
            .written()
            .iter()
            .filter_map(|p| p.file_name().map(|n| n.to_string_lossy().into_owned()))
            .collect::<Vec<_>>()),
    );
    em.json("figures_summary.json", summary)?;
    Ok(Outcome {
        stdout: format!("figures: {} files written\n", em.written().len()),
        ..Default::default()
    })
}

pub fn cmd_montecarlo(config: &RunConfig, out: &Path) -> Result<Outcome> {
    let mut cfg = effective(&config.clone().with_default_packet(), MONTECARLO_TIME_POINTS);
    cfg.n.get_or_insert(super::config::DEFAULT_N);
    cfg.seed.get_or_insert(super::config::DEFAULT_SEED);
    let r = cfg.resolve(MONTECARLO_TIME_POINTS)?;
    let cmp = quantum_classical_compare(&r.packet, r.packet.delta, &r.taus, cfg.n(), cfg.seed())?;

    let mut table = Table::new(&["tau", "pi_cl", "stderr", "pi_quantum", "zscore"]);
    for row in &cmp.rows {
        table.push(vec![
            row.run.tau.into(),
            row.run.pi_estimate.into(),
            row.run.standard_error.into(),
            row.pi_quantum.into(),
            row.z_score.into(),
        ]);
    }
    let mut em = Emitter::new(out, cfg.provenance())?;
    em.table(
        "montecarlo",
        &table,
        cfg.format(),
        &[packet_comment(&r.packet), ("max_zscore", cmp.max_z_score.to_string())],
        None,
    )?;
    let mut summary = Map::new();
    summary.insert("n".into(), json!(cfg.n()));
    summary.insert("seed".into(), json!(cfg.seed()));
    summary.insert("max_zscore".into(), num_value(cmp.max_z_score));
    summary.insert("zscore_limit".into(), num_value(Z_SCORE_LIMIT));
    summary.insert("passes".into(), json!(cmp.passes()));
    em.json("montecarlo_summary.json", summary)?;

    Ok(Outcome {
        stdout: format!(
            "montecarlo: N = {}, {} times, max z-score = {:.4} ({})\n",
            cfg.n(),
            cmp.rows.len(),
            cmp.max_z_score,
            if cmp.passes() { "pass" } else { "FAIL" }
        ),
        warnings: Vec::new(),
        check_failed: !cmp.passes(),
    })
}

pub fn cmd_wigner_grid(config: &RunConfig, out: &Path) -> Result<Outcome> {
    let cfg = effective(config, PACKET_TIME_POINTS);
    let r = cfg.resolve(PACKET_TIME_POINTS)?;
    let packet = r.packet;
    let tau = cfg.grid_tau.unwrap_or(0.0);
    let center = packet.center(tau);
    let sx = packet.position_spread(tau);
    let xi = linspace(
        cfg.xi_min.unwrap_or(center.xi - 4.0 * sx),
        cfg.xi_max.unwrap_or(center.xi + 4.0 * sx),
        cfg.xi_points.unwrap_or(DEFAULT_GRID_POINTS),
    );
    let eta = linspace(
        cfg.eta_min.unwrap_or(center.eta - 4.0 * FRAC_1_SQRT_2),
        cfg.eta_max.unwrap_or(center.eta + 4.0 * FRAC_1_SQRT_2),
        cfg.eta_points.unwrap_or(DEFAULT_GRID_POINTS),
    );
    if xi.len() < 2 || eta.len() < 2 {
        return Err(crate::Error::config("wigner grid needs at least 2 points per axis"));
    }

    let mut table = Table::new(&["xi", "eta", "omega"]);
    for &x in &xi {
        for &e in &eta {
            table.push(vec![
                x.into(),
                e.into(),
                omega(&packet, PhasePoint::new(x, e), tau).into(),
            ]);
        }
    }
    let header = format!(
        "xi,eta,omega tau={} eps0={} xi0={} eta0={}",
        tau, packet.eps0, packet.xi0, packet.eta0
    );
    let convention = (
        "convention",
        "omega = hbar * W (dimensionless Wigner density); xi = x/L, eta = p L/hbar".to_string(),
    );
    let mut em = Emitter::new(out, cfg.provenance())?;
    let fmt = cfg.format();
    match fmt {
        Format::Csv => em.table("wigner_grid", &table, fmt, &[convention], Some(&header))?,
        Format::Json => em.table(
            "wigner_grid",
            &table,
            fmt,
            &[convention, ("header", header.clone())],
            None,
        )?,
    };

    let mut outcome = Outcome {
        stdout: format!("wigner-grid: {} x {} points at tau = {}\n", xi.len(), eta.len(), tau),
        ..Default::default()
    };

    if cfg.oracle_check.unwrap_or(false) {
        let params = r.params;
        let l = packet.length_scale;
        let t = crate::wigner::time_of(&params, tau);
        let spec = default_oracle_spec(&params, t);
        let rule = GaussLegendre::new(spec.node_count);
        for &e in &eta {
            if let Some(w) = oracle_resolution_warning(&params, e * params.hbar / l, &spec) {
                outcome.warnings.push(w);
            }
        }
        let points: Vec<(f64, f64)> = xi.iter().flat_map(|&x| eta.iter().map(move |&e| (x, e))).collect();
        let deviations: Vec<(f64, f64)> = points
            .par_iter()
            .map(|&(x, e)| {
                let w = wigner_quadrature_oracle_with(&params, x * l, e * params.hbar / l, t, &spec, &rule)?;
                let analytic = omega(&packet, PhasePoint::new(x, e), tau);
                Ok(((w.re - analytic / params.hbar).abs(), w.im.abs()))
            })
            .collect::<Result<_>>()?;
        let max_dev = deviations.iter().map(|d| d.0).fold(0.0, f64::max);
        let max_im = deviations.iter().map(|d| d.1).fold(0.0, f64::max);
        let passes = max_dev <= ORACLE_TOLERANCE && max_im <= ORACLE_IMAG_TOLERANCE;
        let mut summary = Map::new();
        summary.insert("oracle_max_abs_deviation".into(), num_value(max_dev));
        summary.insert("oracle_max_abs_imaginary".into(), num_value(max_im));
        summary.insert("oracle_nodes".into(), json!(spec.node_count));
        summary.insert("passes".into(), json!(passes));
        em.json("wigner_oracle.json", summary)?;
        outcome.check_failed = !passes;
        outcome.stdout.push_str(&format!(
            "oracle: max |dev| = {max_dev:.3e}, max |imag| = {max_im:.3e}\n"
        ));
    }
    Ok(outcome)
}
