//! TOML experiment configuration.
//!
//! Every section and field is optional; missing values take the reference
//! simulation defaults. dB-valued fields stay in dB here and are converted
//! once, inside the core crate.

use std::path::Path;
use std::str::FromStr;

use bdris_core::channel::{ChannelModel, PathLossModel, Scenario};
use bdris_core::eval::{
    AberBudget, ArchitectureSpec, ExperimentConfig, GeometryConfig, PrecodingCase, ScatteringLevel,
};
use bdris_core::ris_config::GroupingStrategy;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A power grid: either an explicit list or a `"start:step:stop"` range.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Grid {
    List(Vec<f64>),
    Range(String),
}

impl Grid {
    pub fn values(&self, field: &str) -> Result<Vec<f64>> {
        match self {
            Grid::List(v) => Ok(v.clone()),
            Grid::Range(s) => parse_range(s).ok_or_else(|| {
                Error::config(
                    field,
                    format!("'{s}' is not a list or a start:step:stop range"),
                )
            }),
        }
    }
}

/// `"0:5:30"` (brackets optional) to `[0, 5, ..., 30]`.
fn parse_range(s: &str) -> Option<Vec<f64>> {
    let s = s.trim().trim_start_matches('[').trim_end_matches(']');
    let parts: Vec<f64> = s
        .split(':')
        .map(|p| p.trim().parse().ok())
        .collect::<Option<_>>()?;
    let [start, step, stop] = parts[..] else {
        return None;
    };
    if !(step.is_finite() && step > 0.0 && start.is_finite() && stop.is_finite() && stop >= start) {
        return None;
    }
    let n = ((stop - start) / step + 1e-9).floor() as usize;
    Some((0..=n).map(|i| start + step * i as f64).collect())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SystemSection {
    pub carrier_ghz: f64,
    pub bandwidth_mhz: f64,
    pub noise_psd_dbm_per_hz: f64,
    /// Operating point of non-power sweeps.
    pub transmit_power_dbm: f64,
    pub power_grid_dbm: Grid,
}

impl Default for SystemSection {
    fn default() -> Self {
        Self {
            carrier_ghz: 28.0,
            bandwidth_mhz: 100.0,
            noise_psd_dbm_per_hz: -174.0,
            transmit_power_dbm: 20.0,
            power_grid_dbm: Grid::Range("-20:5:20".into()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GeometrySection {
    pub m_x: usize,
    pub m_y: usize,
    pub spacing_wavelengths: f64,
    pub separation_wavelengths: f64,
    pub element_area_m2: Option<f64>,
}

impl Default for GeometrySection {
    fn default() -> Self {
        let g = GeometryConfig::default();
        Self {
            m_x: g.m_x,
            m_y: g.m_y,
            spacing_wavelengths: g.spacing_wavelengths,
            separation_wavelengths: g.separation_wavelengths,
            element_area_m2: g.element_area_m2,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ScenarioName {
    #[serde(alias = "scenario-1")]
    LosPresent,
    #[serde(alias = "scenario-2")]
    LosBlocked,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PathLossSection {
    pub a_los_db: f64,
    pub a_nlos_db: f64,
    pub b_los: f64,
    pub b_nlos: f64,
    pub shadowing_los_db: f64,
    pub shadowing_nlos_db: f64,
}

impl Default for PathLossSection {
    fn default() -> Self {
        let p = PathLossModel::default();
        Self {
            a_los_db: p.a_los_db,
            a_nlos_db: p.a_nlos_db,
            b_los: p.b_los,
            b_nlos: p.b_nlos,
            shadowing_los_db: p.shadowing_los_db,
            shadowing_nlos_db: p.shadowing_nlos_db,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ChannelSection {
    pub scenario: ScenarioName,
    pub clusters: usize,
    pub paths_per_cluster: usize,
    pub angular_spread_deg: f64,
    pub distance_m: f64,
    pub path_loss: PathLossSection,
}

impl Default for ChannelSection {
    fn default() -> Self {
        let c = ChannelModel::default();
        Self {
            scenario: ScenarioName::LosPresent,
            clusters: c.clusters,
            paths_per_cluster: c.paths_per_cluster,
            angular_spread_deg: c.angular_spread.to_degrees(),
            distance_m: c.distance_m,
            path_loss: PathLossSection::default(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CaseName {
    #[serde(alias = "case-1")]
    FullCsi,
    #[serde(alias = "case-2")]
    Codebook,
    #[serde(alias = "case-3")]
    PartialCsi,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct LinkSection {
    pub case: CaseName,
    /// Architecture labels: `active`, `dris`, `bd_g<G>`, `bd_rows_g<G>`,
    /// `bd_sym_g<G>`.
    pub architectures: Vec<String>,
    pub constellation_order: usize,
}

impl Default for LinkSection {
    fn default() -> Self {
        Self {
            case: CaseName::PartialCsi,
            architectures: vec!["active".into(), "bd_g1".into(), "dris".into()],
            constellation_order: 2,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct MonteCarloSection {
    pub trials: usize,
    pub seed: u64,
    pub aber_max_bits: u64,
    pub aber_min_errors: u64,
    pub aber_symbols_per_channel: usize,
}

impl Default for MonteCarloSection {
    fn default() -> Self {
        let b = AberBudget::default();
        Self {
            trials: 10_000,
            seed: 2025,
            aber_max_bits: b.max_bits,
            aber_min_errors: b.min_errors,
            aber_symbols_per_channel: b.symbols_per_channel,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct BeampatternSection {
    pub steer_azimuth_deg: f64,
    pub steer_elevation_deg: f64,
    pub azimuth_step_deg: f64,
    pub elevation_step_deg: f64,
    /// Feed separations to evaluate, in wavelengths.
    pub separations_wavelengths: Vec<f64>,
    /// Also write the full directivity grid of every pattern.
    pub write_grids: bool,
}

impl Default for BeampatternSection {
    fn default() -> Self {
        Self {
            steer_azimuth_deg: 0.0,
            steer_elevation_deg: 0.0,
            azimuth_step_deg: 1.0,
            elevation_step_deg: 1.0,
            separations_wavelengths: vec![0.5, 1.0, 1.5],
            write_grids: true,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum AxisName {
    Power,
    ArraySize,
    Separation,
    GroupCount,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum StrategyName {
    Linear,
    Rows,
    MirrorSymmetric,
}

impl From<StrategyName> for GroupingStrategy {
    fn from(s: StrategyName) -> Self {
        match s {
            StrategyName::Linear => GroupingStrategy::Linear,
            StrategyName::Rows => GroupingStrategy::Rows,
            StrategyName::MirrorSymmetric => GroupingStrategy::MirrorSymmetric,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SweepSection {
    pub axis: AxisName,
    pub sizes: Vec<usize>,
    pub separations_wavelengths: Vec<f64>,
    pub group_counts: Vec<usize>,
    pub strategy: StrategyName,
}

impl Default for SweepSection {
    fn default() -> Self {
        Self {
            axis: AxisName::ArraySize,
            sizes: vec![2, 4, 6, 8, 10],
            separations_wavelengths: vec![0.5, 1.0, 1.5, 2.0, 2.5, 3.0],
            group_counts: vec![1, 2, 4, 5, 10, 20],
            strategy: StrategyName::Linear,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SnrGainSection {
    pub clusters: Vec<usize>,
    pub rayleigh: bool,
}

impl Default for SnrGainSection {
    fn default() -> Self {
        Self {
            clusters: vec![1, 2, 4, 8, 16, 32],
            rayleigh: true,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CavSurfaceSection {
    pub sizes: Vec<usize>,
    pub separations_wavelengths: Vec<f64>,
}

impl Default for CavSurfaceSection {
    fn default() -> Self {
        Self {
            sizes: vec![2, 4, 6, 8, 10],
            separations_wavelengths: vec![0.5, 1.0, 1.5, 2.0],
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ComplexitySection {
    pub cells: usize,
    pub group_counts: Vec<usize>,
}

impl Default for ComplexitySection {
    fn default() -> Self {
        Self {
            cells: 100,
            group_counts: vec![1, 2, 4, 5, 10, 20, 25, 50, 100],
        }
    }
}

/// The whole configuration file.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub system: SystemSection,
    pub geometry: GeometrySection,
    pub channel: ChannelSection,
    pub link: LinkSection,
    pub monte_carlo: MonteCarloSection,
    pub beampattern: BeampatternSection,
    pub sweep: SweepSection,
    pub snr_gain: SnrGainSection,
    pub cav_surface: CavSurfaceSection,
    pub complexity: ComplexitySection,
}

impl FromStr for RunConfig {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let config: RunConfig =
            toml::from_str(s).map_err(|e| Error::Parse(e.message().to_string()))?;
        config.validate()?;
        Ok(config)
    }
}

impl RunConfig {
    /// Reads, parses and validates a configuration file. An unreadable file
    /// is a configuration error, not an output error.
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::config("config", format!("cannot read {}: {e}", path.display())))?;
        text.parse().map_err(|e| match e {
            Error::Parse(msg) => Error::Parse(format!("{}: {msg}", path.display())),
            other => other,
        })
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("configuration is always serializable")
    }

    /// Builds the core experiment configuration and checks every cross-field
    /// constraint.
    pub fn experiment(&self) -> Result<ExperimentConfig> {
        let architectures = self
            .link
            .architectures
            .iter()
            .enumerate()
            .map(|(i, a)| {
                a.parse::<ArchitectureSpec>().map_err(|_| {
                    Error::config(
                        format!("link.architectures[{i}]"),
                        format!("unknown architecture '{a}'"),
                    )
                })
            })
            .collect::<Result<Vec<_>>>()?;
        let pl = &self.channel.path_loss;
        let config = ExperimentConfig {
            carrier_hz: self.system.carrier_ghz * 1e9,
            bandwidth_hz: self.system.bandwidth_mhz * 1e6,
            noise_psd_dbm_per_hz: self.system.noise_psd_dbm_per_hz,
            geometry: GeometryConfig {
                m_x: self.geometry.m_x,
                m_y: self.geometry.m_y,
                spacing_wavelengths: self.geometry.spacing_wavelengths,
                separation_wavelengths: self.geometry.separation_wavelengths,
                element_area_m2: self.geometry.element_area_m2,
            },
            channel: ChannelModel {
                clusters: self.channel.clusters,
                paths_per_cluster: self.channel.paths_per_cluster,
                angular_spread: self.channel.angular_spread_deg.to_radians(),
                distance_m: self.channel.distance_m,
                path_loss: PathLossModel {
                    a_los_db: pl.a_los_db,
                    a_nlos_db: pl.a_nlos_db,
                    b_los: pl.b_los,
                    b_nlos: pl.b_nlos,
                    shadowing_los_db: pl.shadowing_los_db,
                    shadowing_nlos_db: pl.shadowing_nlos_db,
                },
                scenario: match self.channel.scenario {
                    ScenarioName::LosPresent => Scenario::LosPresent,
                    ScenarioName::LosBlocked => Scenario::LosBlocked,
                },
            },
            case: match self.link.case {
                CaseName::FullCsi => PrecodingCase::FullCsi,
                CaseName::Codebook => PrecodingCase::Codebook,
                CaseName::PartialCsi => PrecodingCase::PartialCsi,
            },
            architectures,
            constellation_order: self.link.constellation_order,
            transmit_power_dbm: self.system.transmit_power_dbm,
            power_grid_dbm: self.system.power_grid_dbm.values("system.power_grid_dbm")?,
            trials: self.monte_carlo.trials,
            seed: self.monte_carlo.seed,
            aber: AberBudget {
                max_bits: self.monte_carlo.aber_max_bits,
                min_errors: self.monte_carlo.aber_min_errors,
                symbols_per_channel: self.monte_carlo.aber_symbols_per_channel,
            },
        };
        config.validate().map_err(|e| match e {
            bdris_core::Error::InvalidParameter { field, reason } => {
                Error::config(core_field(field), reason)
            }
            other => Error::Core(other),
        })?;
        Ok(config)
    }

    /// Scattering levels of the SNR-gain experiment, Rayleigh last.
    pub fn scattering_levels(&self) -> Vec<ScatteringLevel> {
        let mut levels: Vec<_> = self
            .snr_gain
            .clusters
            .iter()
            .map(|&c| ScatteringLevel::Clusters(c))
            .collect();
        if self.snr_gain.rayleigh {
            levels.push(ScatteringLevel::Rayleigh);
        }
        levels
    }

    pub fn validate(&self) -> Result<()> {
        self.experiment()?;
        let b = &self.beampattern;
        for (field, v) in [
            ("beampattern.azimuth_step_deg", b.azimuth_step_deg),
            ("beampattern.elevation_step_deg", b.elevation_step_deg),
        ] {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::config(field, "must be positive"));
            }
        }
        if !(0.0..=90.0).contains(&b.steer_elevation_deg) {
            return Err(Error::config(
                "beampattern.steer_elevation_deg",
                "must lie in [0, 90]",
            ));
        }
        positive_list(
            "beampattern.separations_wavelengths",
            &b.separations_wavelengths,
        )?;
        positive_list(
            "sweep.separations_wavelengths",
            &self.sweep.separations_wavelengths,
        )?;
        positive_list(
            "cav_surface.separations_wavelengths",
            &self.cav_surface.separations_wavelengths,
        )?;
        nonzero_list("sweep.sizes", &self.sweep.sizes)?;
        nonzero_list("sweep.group_counts", &self.sweep.group_counts)?;
        nonzero_list("cav_surface.sizes", &self.cav_surface.sizes)?;
        nonzero_list("complexity.group_counts", &self.complexity.group_counts)?;
        if self.snr_gain.clusters.contains(&0) {
            return Err(Error::config(
                "snr_gain.clusters",
                "cluster counts must be at least 1",
            ));
        }
        if self.snr_gain.clusters.is_empty() && !self.snr_gain.rayleigh {
            return Err(Error::config("snr_gain", "no scattering level selected"));
        }
        if self.complexity.cells == 0 {
            return Err(Error::config("complexity.cells", "must be at least 1"));
        }
        if let Some(g) = self
            .complexity
            .group_counts
            .iter()
            .find(|&&g| self.complexity.cells % g != 0)
        {
            return Err(Error::config(
                "complexity.group_counts",
                format!("G = {g} does not divide M = {}", self.complexity.cells),
            ));
        }
        Ok(())
    }
}

/// Maps core field names onto configuration-file paths.
fn core_field(field: &str) -> String {
    let mapped = match field {
        "carrier_hz" => "system.carrier_ghz",
        "bandwidth_hz" => "system.bandwidth_mhz",
        "noise_psd_dbm_per_hz" => "system.noise_psd_dbm_per_hz",
        "transmit_power_dbm" => "system.transmit_power_dbm",
        "power_grid_dbm" => "system.power_grid_dbm",
        "trials" => "monte_carlo.trials",
        "constellation_order" => "link.constellation_order",
        "architectures" | "architectures.groups" => "link.architectures",
        "aber.max_bits" => "monte_carlo.aber_max_bits",
        "aber.min_errors" => "monte_carlo.aber_min_errors",
        "aber.symbols_per_channel" => "monte_carlo.aber_symbols_per_channel",
        f => f,
    };
    mapped.to_string()
}

fn positive_list(field: &str, v: &[f64]) -> Result<()> {
    if v.is_empty() {
        return Err(Error::config(field, "must not be empty"));
    }
    if v.iter().any(|x| !(x.is_finite() && *x > 0.0)) {
        return Err(Error::config(field, "entries must be positive"));
    }
    Ok(())
}

fn nonzero_list(field: &str, v: &[usize]) -> Result<()> {
    if v.is_empty() {
        return Err(Error::config(field, "must not be empty"));
    }
    if v.contains(&0) {
        return Err(Error::config(field, "entries must be at least 1"));
    }
    Ok(())
}
