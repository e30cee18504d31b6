//! Feed-to-surface and surface-to-user channels.
//!
//! The feed channel `g` is deterministic: every cell sees the feed antenna in
//! its near field, modeled with Rayleigh-Sommerfeld diffraction. The user
//! channel `h` is a clustered geometric mmWave channel: an optional LOS path
//! plus `C` clusters of `L` Laplace-spread paths, with complex Gaussian gains
//! whose variances follow a log-distance path loss with log-normal shadowing.
//!
//! `h` is stored so that the received sample is `h^T Omega g`.

use alloc::vec::Vec;
use core::f64::consts::PI;

#[allow(unused_imports)] // inherent float methods need std
use num_traits::Float;
use rand::Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::geometry::ArrayGeometry;
use crate::{units, CVector, Error, Result, C64};

/// Feed-to-surface channel vector.
#[derive(Debug, Clone, PartialEq)]
pub struct BsRisChannel {
    pub g: CVector,
}

/// Near-field feed channel
/// `g_m = (A d_c / d_m^2) (1/(2 pi d_m) - j/lambda) exp(j 2 pi d_m / lambda)`.
pub fn bs_ris_channel(geometry: &ArrayGeometry) -> BsRisChannel {
    let lambda = geometry.wavelength();
    let area = geometry.element_area();
    let dc = geometry.separation();
    let g = CVector::from_iterator(
        geometry.len(),
        geometry.distances().iter().map(|&d| {
            let obliquity = C64::new(1.0 / (2.0 * PI * d), -1.0 / lambda);
            obliquity * C64::from_polar(area * dc / (d * d), 2.0 * PI * d / lambda)
        }),
    );
    BsRisChannel { g }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum LinkType {
    Los,
    Nlos,
}

/// Log-distance path loss `a + 10 b log10(d) + xi` with per-link-type
/// parameters; shadowing `xi ~ N(0, sigma^2)` in dB.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PathLossModel {
    pub a_los_db: f64,
    pub a_nlos_db: f64,
    pub b_los: f64,
    pub b_nlos: f64,
    pub shadowing_los_db: f64,
    pub shadowing_nlos_db: f64,
}

impl Default for PathLossModel {
    /// 28 GHz dense-urban street-canyon fit.
    fn default() -> Self {
        Self {
            a_los_db: 61.4,
            a_nlos_db: 72.0,
            b_los: 2.0,
            b_nlos: 2.92,
            shadowing_los_db: 5.8,
            shadowing_nlos_db: 8.7,
        }
    }
}

impl PathLossModel {
    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("a_los_db", self.a_los_db),
            ("a_nlos_db", self.a_nlos_db),
            ("shadowing_los_db", self.shadowing_los_db),
            ("shadowing_nlos_db", self.shadowing_nlos_db),
        ] {
            if !(v.is_finite() && v >= 0.0) {
                return Err(Error::invalid(name, "must be non-negative"));
            }
        }
        for (name, v) in [("b_los", self.b_los), ("b_nlos", self.b_nlos)] {
            if !(v.is_finite() && v >= 1.0) {
                return Err(Error::invalid(
                    name,
                    "path loss exponent must be at least 1",
                ));
            }
        }
        Ok(())
    }

    /// Path loss in dB at distance `d` meters with the given shadowing draw.
    pub fn path_loss_db(&self, d: f64, link: LinkType, shadowing_db: f64) -> f64 {
        let (a, b) = match link {
            LinkType::Los => (self.a_los_db, self.b_los),
            LinkType::Nlos => (self.a_nlos_db, self.b_nlos),
        };
        a + 10.0 * b * d.log10() + shadowing_db
    }

    pub fn shadowing_std_db(&self, link: LinkType) -> f64 {
        match link {
            LinkType::Los => self.shadowing_los_db,
            LinkType::Nlos => self.shadowing_nlos_db,
        }
    }

    /// Path gain variance `10^(-PL/10)` with a fresh shadowing draw.
    pub fn sample_gain_variance<R: Rng + ?Sized>(
        &self,
        d: f64,
        link: LinkType,
        rng: &mut R,
    ) -> f64 {
        let n: f64 = StandardNormal.sample(rng);
        let pl = self.path_loss_db(d, link, n * self.shadowing_std_db(link));
        units::db_to_linear(-pl)
    }
}

/// Noise power in dBm from a PSD in dBm/Hz and a bandwidth in Hz.
pub fn noise_power_dbm(psd_dbm_per_hz: f64, bandwidth_hz: f64) -> f64 {
    psd_dbm_per_hz + 10.0 * bandwidth_hz.log10()
}

/// Draws from a Laplace distribution by inverse transform,
/// `location - scale sign(U) ln(1 - 2|U|)` with `U` uniform on `(-1/2, 1/2)`.
pub fn sample_laplace<R: Rng + ?Sized>(location: f64, scale: f64, rng: &mut R) -> Result<f64> {
    if !(scale.is_finite() && scale > 0.0) {
        return Err(Error::invalid("scale", "Laplace scale must be positive"));
    }
    let u = loop {
        let r: f64 = rng.random();
        if r > 0.0 {
            break r - 0.5;
        }
    };
    Ok(location - scale * u.signum() * (1.0 - 2.0 * u.abs()).ln())
}

/// Circularly symmetric complex Gaussian `CN(0, variance)`.
pub fn sample_complex_gaussian<R: Rng + ?Sized>(variance: f64, rng: &mut R) -> C64 {
    let s = (variance / 2.0).sqrt();
    let re: f64 = StandardNormal.sample(rng);
    let im: f64 = StandardNormal.sample(rng);
    C64::new(re * s, im * s)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Scenario {
    /// A dominant LOS path plus NLOS clusters.
    LosPresent,
    /// LOS blocked; NLOS clusters only.
    LosBlocked,
}

/// Statistical parameters of the surface-to-user channel.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChannelModel {
    pub clusters: usize,
    pub paths_per_cluster: usize,
    /// Laplace scale of the per-path angles around the cluster mean, radians.
    pub angular_spread: f64,
    pub distance_m: f64,
    pub path_loss: PathLossModel,
    pub scenario: Scenario,
}

impl Default for ChannelModel {
    fn default() -> Self {
        Self {
            clusters: 8,
            paths_per_cluster: 10,
            angular_spread: 7.5f64.to_radians(),
            distance_m: 20.0,
            path_loss: PathLossModel::default(),
            scenario: Scenario::LosPresent,
        }
    }
}

impl ChannelModel {
    pub fn validate(&self) -> Result<()> {
        if self.clusters == 0 {
            return Err(Error::invalid("clusters", "need at least one cluster"));
        }
        if self.paths_per_cluster == 0 {
            return Err(Error::invalid(
                "paths_per_cluster",
                "need at least one path",
            ));
        }
        if !(self.angular_spread.is_finite() && self.angular_spread > 0.0) {
            return Err(Error::invalid("angular_spread", "must be positive"));
        }
        if !(self.distance_m.is_finite() && self.distance_m > 0.0) {
            return Err(Error::invalid("distance_m", "must be positive"));
        }
        self.path_loss.validate()
    }

    /// Prefactor of the path superposition: `sqrt(M / (C L + 1))` with LOS,
    /// `sqrt(M / (C L))` when the LOS is blocked.
    pub fn prefactor(&self, cells: usize) -> f64 {
        let paths = self.clusters * self.paths_per_cluster;
        let active = match self.scenario {
            Scenario::LosPresent => paths + 1,
            Scenario::LosBlocked => paths,
        };
        (cells as f64 / active as f64).sqrt()
    }
}

/// One NLOS cluster of a channel draw.
#[derive(Debug, Clone, PartialEq)]
pub struct ClusterParams {
    pub mean_azimuth: f64,
    pub mean_elevation: f64,
    pub angular_spread: f64,
    pub path_gains: Vec<C64>,
    /// `(azimuth, elevation)` of each path.
    pub path_angles: Vec<(f64, f64)>,
}

/// The LOS path of a channel draw. `gain` is zero when blocked.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LosPath {
    pub gain: C64,
    pub azimuth: f64,
    pub elevation: f64,
}

/// A surface-to-user channel realization with its path decomposition.
#[derive(Debug, Clone, PartialEq)]
pub struct RisUeChannel {
    /// Full channel, `prefactor * (los + sum(cluster_channels))`.
    pub h: CVector,
    /// LOS sub-channel `h_0 = alpha conj(a(phi_0, theta_0))`.
    pub los: CVector,
    /// Cluster sub-channels `h_c = sum_l beta_cl conj(a(phi_cl, theta_cl))`.
    pub cluster_channels: Vec<CVector>,
    pub los_path: LosPath,
    pub clusters: Vec<ClusterParams>,
    pub prefactor: f64,
    pub scenario: Scenario,
}

impl RisUeChannel {
    /// Builds the channel from explicit path parameters.
    pub fn assemble(
        geometry: &ArrayGeometry,
        los_path: LosPath,
        clusters: Vec<ClusterParams>,
        prefactor: f64,
        scenario: Scenario,
    ) -> Self {
        let los = match scenario {
            Scenario::LosPresent => {
                geometry
                    .response(los_path.azimuth, los_path.elevation)
                    .conjugate()
                    * los_path.gain
            }
            Scenario::LosBlocked => CVector::zeros(geometry.len()),
        };
        let cluster_channels: Vec<CVector> = clusters
            .iter()
            .map(|c| {
                let mut hc = CVector::zeros(geometry.len());
                for (&beta, &(az, el)) in c.path_gains.iter().zip(&c.path_angles) {
                    if beta != C64::new(0.0, 0.0) {
                        hc.axpy(
                            beta,
                            &geometry.response(az, el).conjugate(),
                            C64::new(1.0, 0.0),
                        );
                    }
                }
                hc
            })
            .collect();
        let mut h = los.clone();
        for hc in &cluster_channels {
            h += hc;
        }
        h *= C64::new(prefactor, 0.0);
        let los_path = match scenario {
            Scenario::LosPresent => los_path,
            Scenario::LosBlocked => LosPath {
                gain: C64::new(0.0, 0.0),
                ..los_path
            },
        };
        Self {
            h,
            los,
            cluster_channels,
            los_path,
            clusters,
            prefactor,
            scenario,
        }
    }

    /// Sub-channel `c` (0 is the LOS) and the direction associated with it:
    /// the LOS angles, or a cluster's mean angles.
    pub fn sub_channel(&self, c: usize) -> (&CVector, f64, f64) {
        if c == 0 {
            (&self.los, self.los_path.azimuth, self.los_path.elevation)
        } else {
            let p = &self.clusters[c - 1];
            (
                &self.cluster_channels[c - 1],
                p.mean_azimuth,
                p.mean_elevation,
            )
        }
    }

    pub fn sub_channel_count(&self) -> usize {
        self.cluster_channels.len() + 1
    }
}

/// Draws a clustered geometric channel realization.
///
/// One shadowing value per link type is drawn for the realization and
/// shared by every path of that type.
pub fn sample_ris_ue_channel<R: Rng + ?Sized>(
    geometry: &ArrayGeometry,
    model: &ChannelModel,
    rng: &mut R,
) -> Result<RisUeChannel> {
    model.validate()?;
    let los_var = model
        .path_loss
        .sample_gain_variance(model.distance_m, LinkType::Los, rng);
    let nlos_var = model
        .path_loss
        .sample_gain_variance(model.distance_m, LinkType::Nlos, rng);

    let mut alpha = sample_complex_gaussian(los_var, rng);
    if model.scenario == Scenario::LosBlocked {
        alpha = C64::new(0.0, 0.0);
    }
    let los_path = LosPath {
        gain: alpha,
        azimuth: rng.random_range(-PI..=PI),
        elevation: rng.random_range(0.0..=PI / 2.0),
    };

    let mut clusters = Vec::with_capacity(model.clusters);
    for _ in 0..model.clusters {
        let mean_azimuth = rng.random_range(-PI..=PI);
        let mean_elevation = rng.random_range(0.0..=PI / 2.0);
        let mut path_gains = Vec::with_capacity(model.paths_per_cluster);
        let mut path_angles = Vec::with_capacity(model.paths_per_cluster);
        for _ in 0..model.paths_per_cluster {
            let az = sample_laplace(mean_azimuth, model.angular_spread, rng)?;
            let el = sample_laplace(mean_elevation, model.angular_spread, rng)?;
            path_angles.push((az, el));
            path_gains.push(sample_complex_gaussian(nlos_var, rng));
        }
        clusters.push(ClusterParams {
            mean_azimuth,
            mean_elevation,
            angular_spread: model.angular_spread,
            path_gains,
            path_angles,
        });
    }

    Ok(RisUeChannel::assemble(
        geometry,
        los_path,
        clusters,
        model.prefactor(geometry.len()),
        model.scenario,
    ))
}

/// Rich-scattering surrogate: i.i.d. `CN(0, variance)` entries.
pub fn sample_rayleigh_channel<R: Rng + ?Sized>(
    cells: usize,
    variance: f64,
    rng: &mut R,
) -> CVector {
    CVector::from_fn(cells, |_, _| sample_complex_gaussian(variance, rng))
}
