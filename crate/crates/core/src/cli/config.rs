use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::{linspace, ComplexValue};
use crate::packet::PacketParams;
use crate::wigner::{rescale, tau_of, to_physical, DimensionlessPacket};

/// Output encoding for tabular datasets.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Csv,
    Json,
}

impl Format {
    pub fn extension(self) -> &'static str {
        match self {
            Format::Csv => "csv",
            Format::Json => "json",
        }
    }
}

/// Figure-reproduction defaults used when no packet block is given.
pub const DEFAULT_EPS0: f64 = -2.0;
pub const DEFAULT_XI0: f64 = 0.0;
pub const DEFAULT_ETA0: f64 = 0.1;
pub const DEFAULT_DELTA: f64 = 2.0;
pub const DEFAULT_TIME_START: f64 = 0.0;
pub const DEFAULT_TIME_END: f64 = 4.0;
pub const DEFAULT_N: usize = 1_000_000;
pub const DEFAULT_SEED: u64 = 20_200_325;

/// Flat run configuration, read from JSON and overridden by flags.
///
/// Packet parameters come in two mutually exclusive blocks:
/// physical (`x0`, `p0`, `alpha0_re`, `alpha0_im`, `q`) or dimensionless
/// (`xi0`, `eta0`, `eps0`, `delta`). `hbar` and `mass` default to 1 and
/// apply to both. Times are in the units of the chosen block.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub hbar: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mass: Option<f64>,

    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub x0: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p0: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alpha0_re: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alpha0_im: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub q: Option<f64>,

    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub xi0: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub eta0: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub eps0: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub delta: Option<f64>,

    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub time_start: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub time_end: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub time_points: Option<usize>,
    /// Explicit time list; takes precedence over start/end/points.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub times: Option<Vec<f64>>,

    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub format: Option<Format>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub strict_scenario: Option<bool>,

    // figures
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub contour_constant: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub contour_points: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fig_tau: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fig3_dtau: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub region_theta_points: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub region_phi_points: Option<usize>,

    // wigner grid
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub grid_tau: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub xi_min: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub xi_max: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub xi_points: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub eta_min: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub eta_max: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub eta_points: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub oracle_check: Option<bool>,
}

/// Where the packet parameters came from.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PacketSource {
    Physical(PacketParams),
    Dimensionless(DimensionlessPacket),
}

/// Packet in both representations plus the scanned time grid.
#[derive(Debug, Clone, PartialEq)]
pub struct ResolvedPacket {
    pub source: PacketSource,
    pub params: PacketParams,
    pub packet: DimensionlessPacket,
    /// Times in the block's native units.
    pub times: Vec<f64>,
    /// The same times, dimensionless.
    pub taus: Vec<f64>,
}

impl RunConfig {
    pub fn from_path(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_json(&text)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::config(format!("invalid config: {e}")))
    }

    pub fn hbar(&self) -> f64 {
        self.hbar.unwrap_or(1.0)
    }

    pub fn mass(&self) -> f64 {
        self.mass.unwrap_or(1.0)
    }

    fn has_physical(&self) -> bool {
        [self.x0, self.p0, self.alpha0_re, self.alpha0_im, self.q]
            .iter()
            .any(Option::is_some)
    }

    fn has_dimensionless(&self) -> bool {
        [self.xi0, self.eta0, self.eps0, self.delta].iter().any(Option::is_some)
    }

    /// Fills in the figure-reproduction packet when no block is present.
    pub fn with_default_packet(mut self) -> Self {
        if !self.has_physical() && !self.has_dimensionless() {
            self.xi0 = Some(DEFAULT_XI0);
            self.eta0 = Some(DEFAULT_ETA0);
            self.eps0 = Some(DEFAULT_EPS0);
            self.delta = Some(DEFAULT_DELTA);
        }
        self
    }

    pub fn packet_source(&self) -> Result<PacketSource> {
        match (self.has_physical(), self.has_dimensionless()) {
            (true, true) => Err(Error::config(
                "config mixes physical (x0, p0, alpha0_re, alpha0_im, q) and dimensionless (xi0, eta0, eps0, delta) keys",
            )),
            (false, false) => Err(Error::config(
                "config has no packet block: give either x0, p0, alpha0_re, alpha0_im, q or xi0, eta0, eps0, delta",
            )),
            (true, false) => {
                let need = |v: Option<f64>, k: &str| v.ok_or_else(|| Error::config(format!("physical block is missing `{k}`")));
                let params = PacketParams::new(
                    self.hbar(),
                    self.mass(),
                    need(self.x0, "x0")?,
                    need(self.p0, "p0")?,
                    ComplexValue::new(need(self.alpha0_re, "alpha0_re")?, need(self.alpha0_im, "alpha0_im")?),
                    need(self.q, "q")?,
                )?;
                Ok(PacketSource::Physical(params))
            }
            (false, true) => {
                let need = |v: Option<f64>, k: &str| {
                    v.ok_or_else(|| Error::config(format!("dimensionless block is missing `{k}`")))
                };
                let packet = DimensionlessPacket::new(
                    need(self.xi0, "xi0")?,
                    need(self.eta0, "eta0")?,
                    need(self.eps0, "eps0")?,
                    need(self.delta, "delta")?,
                )?;
                Ok(PacketSource::Dimensionless(packet))
            }
        }
    }

    /// Time grid in native units; `default_points` applies when neither
    /// `times` nor `time_points` is set.
    pub fn time_grid(&self, default_points: usize) -> Result<Vec<f64>> {
        let grid = match &self.times {
            Some(t) => t.clone(),
            None => linspace(
                self.time_start.unwrap_or(DEFAULT_TIME_START),
                self.time_end.unwrap_or(DEFAULT_TIME_END),
                self.time_points.unwrap_or(default_points),
            ),
        };
        if grid.is_empty() {
            return Err(Error::config("time grid is empty"));
        }
        if grid.iter().any(|t| !t.is_finite()) {
            return Err(Error::config("time grid contains non-finite values"));
        }
        if grid.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::config("time grid must be strictly increasing"));
        }
        Ok(grid)
    }

    pub fn resolve(&self, default_points: usize) -> Result<ResolvedPacket> {
        let hbar = self.hbar();
        let mass = self.mass();
        if !(hbar > 0.0 && mass > 0.0) {
            return Err(Error::config("hbar and mass must be positive"));
        }
        let source = self.packet_source()?;
        let times = self.time_grid(default_points)?;
        let (params, packet, taus) = match source {
            PacketSource::Physical(params) => {
                let taus = times.iter().map(|&t| tau_of(&params, t)).collect();
                (params, rescale(&params), taus)
            }
            PacketSource::Dimensionless(packet) => (to_physical(&packet, hbar, mass)?, packet, times.clone()),
        };
        Ok(ResolvedPacket {
            source,
            params,
            packet,
            times,
            taus,
        })
    }

    pub fn n(&self) -> usize {
        self.n.unwrap_or(DEFAULT_N)
    }

    pub fn seed(&self) -> u64 {
        self.seed.unwrap_or(DEFAULT_SEED)
    }

    pub fn format(&self) -> Format {
        self.format.unwrap_or_default()
    }

    pub fn strict(&self) -> bool {
        self.strict_scenario.unwrap_or(false)
    }

    /// Compact JSON used as the provenance header of every emitted file.
    pub fn provenance(&self) -> String {
        serde_json::to_string(self).expect("config serializes")
    }
}
