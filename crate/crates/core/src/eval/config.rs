use alloc::format;
use alloc::vec;
use alloc::vec::Vec;
#[allow(unused_imports)] // inherent float methods need std
use num_traits::Float;

use crate::channel::{noise_power_dbm, ChannelModel};
use crate::geometry::ArrayGeometry;
use crate::ris_config::{make_grouping, GroupingStrategy};
use crate::{units, Error, Result};

/// Which CSI regime produces the beamforming vector.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PrecodingCase {
    /// Full CSI at the base station.
    FullCsi,
    /// Full CSI at the user, codebook feedback.
    Codebook,
    /// Partial angular CSI.
    PartialCsi,
}

/// A transmitter architecture under comparison.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ArchitectureSpec {
    /// Active phase-only array with unit total power.
    Active,
    /// Diagonal RIS.
    Dris,
    /// BD-RIS with `groups` groups.
    Bd {
        groups: usize,
        strategy: GroupingStrategy,
    },
}

impl ArchitectureSpec {
    /// Short column-friendly name: `active`, `dris`, `bd_g4`, `bd_rows_g10`,
    /// `bd_sym_g20`.
    pub fn label(&self) -> alloc::string::String {
        match self {
            ArchitectureSpec::Active => "active".into(),
            ArchitectureSpec::Dris => "dris".into(),
            ArchitectureSpec::Bd { groups, strategy } => match strategy {
                GroupingStrategy::Linear => format!("bd_g{groups}"),
                GroupingStrategy::Rows => format!("bd_rows_g{groups}"),
                GroupingStrategy::MirrorSymmetric => format!("bd_sym_g{groups}"),
            },
        }
    }
}

impl core::str::FromStr for ArchitectureSpec {
    type Err = Error;

    /// Inverse of [`ArchitectureSpec::label`].
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::invalid("architectures", format!("unknown architecture '{s}'"));
        match s {
            "active" => return Ok(ArchitectureSpec::Active),
            "dris" => return Ok(ArchitectureSpec::Dris),
            _ => {}
        }
        let (strategy, count) = if let Some(n) = s.strip_prefix("bd_rows_g") {
            (GroupingStrategy::Rows, n)
        } else if let Some(n) = s.strip_prefix("bd_sym_g") {
            (GroupingStrategy::MirrorSymmetric, n)
        } else if let Some(n) = s.strip_prefix("bd_g") {
            (GroupingStrategy::Linear, n)
        } else {
            return Err(bad());
        };
        let groups = count.parse().map_err(|_| bad())?;
        Ok(ArchitectureSpec::Bd { groups, strategy })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GeometryConfig {
    pub m_x: usize,
    pub m_y: usize,
    /// Element spacing in wavelengths (both axes).
    pub spacing_wavelengths: f64,
    /// Feed-to-surface separation in wavelengths.
    pub separation_wavelengths: f64,
    /// Element area in m^2; `None` means `(lambda/2)^2`.
    pub element_area_m2: Option<f64>,
}

impl Default for GeometryConfig {
    fn default() -> Self {
        Self {
            m_x: 10,
            m_y: 10,
            spacing_wavelengths: 0.5,
            separation_wavelengths: 0.5,
            element_area_m2: None,
        }
    }
}

impl GeometryConfig {
    pub fn build(&self, wavelength: f64) -> Result<ArrayGeometry> {
        let s = self.spacing_wavelengths * wavelength;
        ArrayGeometry::new(
            self.m_x,
            self.m_y,
            s,
            s,
            self.separation_wavelengths * wavelength,
            wavelength,
            self.element_area_m2.unwrap_or((wavelength / 2.0).powi(2)),
        )
    }
}

/// Monte-Carlo budget of an error-rate point: stop once `min_errors` bit
/// errors were seen, or at `max_bits` bits, whichever comes first.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AberBudget {
    pub max_bits: u64,
    pub min_errors: u64,
    /// Symbols sent over each channel realization.
    pub symbols_per_channel: usize,
}

impl Default for AberBudget {
    fn default() -> Self {
        Self {
            max_bits: 10_000_000,
            min_errors: 100,
            symbols_per_channel: 100,
        }
    }
}

/// Everything a Monte-Carlo experiment needs.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub carrier_hz: f64,
    pub bandwidth_hz: f64,
    pub noise_psd_dbm_per_hz: f64,
    pub geometry: GeometryConfig,
    pub channel: ChannelModel,
    pub case: PrecodingCase,
    pub architectures: Vec<ArchitectureSpec>,
    pub constellation_order: usize,
    /// Operating point for sweeps over anything but power.
    pub transmit_power_dbm: f64,
    pub power_grid_dbm: Vec<f64>,
    pub trials: usize,
    pub seed: u64,
    pub aber: AberBudget,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            carrier_hz: 28e9,
            bandwidth_hz: 100e6,
            noise_psd_dbm_per_hz: -174.0,
            geometry: GeometryConfig::default(),
            channel: ChannelModel::default(),
            case: PrecodingCase::PartialCsi,
            architectures: vec![
                ArchitectureSpec::Active,
                ArchitectureSpec::Bd {
                    groups: 1,
                    strategy: GroupingStrategy::Linear,
                },
                ArchitectureSpec::Dris,
            ],
            constellation_order: 2,
            transmit_power_dbm: 20.0,
            power_grid_dbm: (0..9).map(|i| -20.0 + 5.0 * i as f64).collect(),
            trials: 10_000,
            seed: 2025,
            aber: AberBudget::default(),
        }
    }
}

impl ExperimentConfig {
    pub fn wavelength(&self) -> f64 {
        units::wavelength(self.carrier_hz)
    }

    pub fn noise_power_dbm(&self) -> f64 {
        noise_power_dbm(self.noise_psd_dbm_per_hz, self.bandwidth_hz)
    }

    pub fn build_geometry(&self) -> Result<ArrayGeometry> {
        self.geometry.build(self.wavelength())
    }

    /// Checks every cross-field constraint; the error names the field path.
    pub fn validate(&self) -> Result<()> {
        if !(self.carrier_hz.is_finite() && self.carrier_hz > 0.0) {
            return Err(Error::invalid("carrier_hz", "must be positive"));
        }
        if !(self.bandwidth_hz.is_finite() && self.bandwidth_hz > 0.0) {
            return Err(Error::invalid("bandwidth_hz", "must be positive"));
        }
        if !self.noise_psd_dbm_per_hz.is_finite() {
            return Err(Error::invalid("noise_psd_dbm_per_hz", "must be finite"));
        }
        if self.geometry.m_x == 0 {
            return Err(Error::invalid("geometry.m_x", "must be at least 1"));
        }
        if self.geometry.m_y == 0 {
            return Err(Error::invalid("geometry.m_y", "must be at least 1"));
        }
        if !(self.geometry.spacing_wavelengths > 0.0) {
            return Err(Error::invalid(
                "geometry.spacing_wavelengths",
                "must be positive",
            ));
        }
        if !(self.geometry.separation_wavelengths > 0.0) {
            return Err(Error::invalid(
                "geometry.separation_wavelengths",
                "must be positive",
            ));
        }
        if let Some(a) = self.geometry.element_area_m2 {
            if !(a > 0.0) {
                return Err(Error::invalid(
                    "geometry.element_area_m2",
                    "must be positive",
                ));
            }
        }
        let geometry = self.build_geometry()?;
        self.channel.validate().map_err(|e| match e {
            Error::InvalidParameter { field, reason } => Error::InvalidParameter {
                field: channel_field(field),
                reason,
            },
            other => other,
        })?;
        if self.architectures.is_empty() {
            return Err(Error::invalid(
                "architectures",
                "need at least one architecture",
            ));
        }
        for arch in &self.architectures {
            if let ArchitectureSpec::Bd { groups, strategy } = *arch {
                make_grouping(&geometry, groups, strategy).map_err(|e| match e {
                    Error::InvalidParameter { reason, .. } => {
                        Error::invalid("architectures.groups", reason)
                    }
                    other => other,
                })?;
            }
        }
        let order = self.constellation_order;
        if order < 2 || !order.is_power_of_two() {
            return Err(Error::invalid(
                "constellation_order",
                "must be a power of two, at least 2",
            ));
        }
        if !self.transmit_power_dbm.is_finite() {
            return Err(Error::invalid("transmit_power_dbm", "must be finite"));
        }
        if self.power_grid_dbm.is_empty() {
            return Err(Error::invalid("power_grid_dbm", "must be non-empty"));
        }
        if self.power_grid_dbm.iter().any(|p| !p.is_finite()) {
            return Err(Error::invalid("power_grid_dbm", "values must be finite"));
        }
        if self.trials == 0 {
            return Err(Error::invalid("trials", "must be at least 1"));
        }
        if self.aber.max_bits == 0 {
            return Err(Error::invalid("aber.max_bits", "must be at least 1"));
        }
        if self.aber.symbols_per_channel == 0 {
            return Err(Error::invalid(
                "aber.symbols_per_channel",
                "must be at least 1",
            ));
        }
        Ok(())
    }
}

fn channel_field(field: &'static str) -> &'static str {
    match field {
        "clusters" => "channel.clusters",
        "paths_per_cluster" => "channel.paths_per_cluster",
        "angular_spread" => "channel.angular_spread_deg",
        "distance_m" => "channel.distance_m",
        "a_los_db" => "channel.path_loss.a_los_db",
        "a_nlos_db" => "channel.path_loss.a_nlos_db",
        "b_los" => "channel.path_loss.b_los",
        "b_nlos" => "channel.path_loss.b_nlos",
        "shadowing_los_db" => "channel.path_loss.shadowing_los_db",
        "shadowing_nlos_db" => "channel.path_loss.shadowing_nlos_db",
        other => other,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn labels_round_trip() {
        for a in [
            ArchitectureSpec::Active,
            ArchitectureSpec::Dris,
            ArchitectureSpec::Bd {
                groups: 4,
                strategy: GroupingStrategy::Linear,
            },
            ArchitectureSpec::Bd {
                groups: 10,
                strategy: GroupingStrategy::Rows,
            },
            ArchitectureSpec::Bd {
                groups: 20,
                strategy: GroupingStrategy::MirrorSymmetric,
            },
        ] {
            assert_eq!(a.label().parse::<ArchitectureSpec>().unwrap(), a);
        }
        for bad in ["", "bd", "bd_gx", "bd_sym_", "passive"] {
            assert!(bad.parse::<ArchitectureSpec>().is_err());
        }
    }

    #[test]
    fn defaults_are_valid() {
        let c = ExperimentConfig::default();
        c.validate().unwrap();
        assert!((c.noise_power_dbm() + 94.0).abs() < 1e-9);
        assert_eq!(c.build_geometry().unwrap().len(), 100);
        assert_eq!(c.power_grid_dbm.len(), 9);
    }

    #[test]
    fn field_paths_in_errors() {
        let mut c = ExperimentConfig::default();
        c.architectures = vec![ArchitectureSpec::Bd {
            groups: 7,
            strategy: GroupingStrategy::Linear,
        }];
        assert!(matches!(
            c.validate(),
            Err(Error::InvalidParameter {
                field: "architectures.groups",
                ..
            })
        ));

        let mut c = ExperimentConfig::default();
        c.channel.clusters = 0;
        assert!(matches!(
            c.validate(),
            Err(Error::InvalidParameter {
                field: "channel.clusters",
                ..
            })
        ));

        let mut c = ExperimentConfig::default();
        c.power_grid_dbm.clear();
        assert!(matches!(
            c.validate(),
            Err(Error::InvalidParameter {
                field: "power_grid_dbm",
                ..
            })
        ));

        let mut c = ExperimentConfig::default();
        c.constellation_order = 3;
        assert!(c.validate().is_err());
    }

    #[test]
    fn labels() {
        assert_eq!(ArchitectureSpec::Active.label(), "active");
        assert_eq!(
            ArchitectureSpec::Bd {
                groups: 20,
                strategy: GroupingStrategy::MirrorSymmetric
            }
            .label(),
            "bd_sym_g20"
        );
    }
}
