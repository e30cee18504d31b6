use alloc::vec::Vec;
use core::f64::consts::PI;
#[allow(unused_imports)] // inherent float methods need std
use num_traits::Float;

use crate::geometry::ArrayGeometry;
use crate::{CVector, Error, Result, C64};

/// Half power relative to the peak, in dB.
const HALF_POWER_DB: f64 = -3.010_299_956_639_812;
/// Quadrature step for the directivity normalizer, degrees.
const QUADRATURE_STEP_DEG: f64 = 0.5;
/// Grid step of the cut used for beamwidth figures, degrees.
const CUT_STEP_DEG: f64 = 1.0;

/// `sqrt(M) a(phi, theta)^T zeta = sum_m zeta_m exp(j k^T p_m)`.
pub fn array_factor(zeta: &CVector, geometry: &ArrayGeometry, azimuth: f64, elevation: f64) -> C64 {
    let k = 2.0 * PI / geometry.wavelength();
    let (s, c) = (
        elevation.sin() * azimuth.cos(),
        elevation.sin() * azimuth.sin(),
    );
    let (mx, my) = (geometry.m_x_count(), geometry.m_y_count());
    let (px, py) = (k * s * geometry.dx(), k * c * geometry.dy());
    let mut total = C64::new(0.0, 0.0);
    for row in 0..my {
        let mut acc = C64::new(0.0, 0.0);
        for col in 0..mx {
            acc += zeta[row * mx + col] * C64::from_polar(1.0, px * col as f64);
        }
        total += acc * C64::from_polar(1.0, py * row as f64);
    }
    total
}

/// Mean radiated power over the sphere, `(1/4pi) * 2 * integral over the
/// front hemisphere of |AF|^2 sin(theta)`. A planar array radiates
/// symmetrically into both half-spaces, so directivity `D = |AF|^2 / this`.
pub fn directivity_normalizer(zeta: &CVector, geometry: &ArrayGeometry) -> Result<f64> {
    Error::check_len(geometry.len(), zeta.len())?;
    if zeta.iter().all(|z| *z == C64::new(0.0, 0.0)) {
        return Err(Error::Degenerate("effective vector is zero".into()));
    }
    let step = QUADRATURE_STEP_DEG.to_radians();
    let n_az = (360.0 / QUADRATURE_STEP_DEG).round() as usize;
    let n_el = (90.0 / QUADRATURE_STEP_DEG).round() as usize;
    let mut integral = 0.0;
    // periodic in azimuth: the trapezoid rule reduces to equal weights
    for i in 0..n_az {
        let az = -PI + step * i as f64;
        for j in 0..=n_el {
            let el = step * j as f64;
            let w = if j == 0 || j == n_el { 0.5 } else { 1.0 };
            integral += w * array_factor(zeta, geometry, az, el).norm_sqr() * el.sin();
        }
    }
    integral *= step * step;
    Ok(2.0 * integral / (4.0 * PI))
}

/// `start..=stop` in `step` increments, degrees in, radians out.
pub fn degree_grid(start_deg: f64, stop_deg: f64, step_deg: f64) -> Vec<f64> {
    let n = ((stop_deg - start_deg) / step_deg + 1e-9).floor() as usize;
    (0..=n)
        .map(|i| (start_deg + step_deg * i as f64).to_radians())
        .collect()
}

/// Elevation cut through the pattern peak. Negative angles lie in the
/// opposite azimuth half-plane.
#[derive(Debug, Clone, PartialEq)]
pub struct PatternCut {
    pub azimuth: f64,
    pub angles_deg: Vec<f64>,
    pub directivity_dbi: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BeamPattern {
    pub azimuths: Vec<f64>,
    pub elevations: Vec<f64>,
    /// `|AF|^2`, row-major over `(azimuth, elevation)`.
    pub power: Vec<f64>,
    /// Linear directivity, same layout as `power`.
    pub directivity: Vec<f64>,
    /// Peak point directivity, dBi.
    pub ppd_dbi: f64,
    /// Directivity at the cut point nearest to the half-power level, dBi.
    pub hppd_dbi: f64,
    /// Half-power beamwidth on the cut, degrees.
    pub hpbw_deg: f64,
    /// `(azimuth, elevation)` of the peak.
    pub peak: (f64, f64),
    pub cut: PatternCut,
}

impl BeamPattern {
    /// Largest pointwise relative difference between two patterns on the
    /// same grid. Points more than 120 dB below the larger peak count as
    /// exact nulls: there both patterns hold rounding noise only.
    pub fn mismatch(&self, other: &BeamPattern) -> Result<f64> {
        Error::check_len(self.directivity.len(), other.directivity.len())?;
        let peak = self
            .directivity
            .iter()
            .chain(&other.directivity)
            .fold(0.0f64, |m, &d| m.max(d));
        let floor = 1e-12 * peak;
        Ok(self
            .directivity
            .iter()
            .zip(&other.directivity)
            .map(|(a, b)| (a - b).abs() / a.max(*b).max(floor))
            .fold(0.0, f64::max))
    }

    pub fn directivity_dbi(&self, i: usize, j: usize) -> f64 {
        10.0 * self.directivity[i * self.elevations.len() + j].log10()
    }
}

/// Beam pattern of an effective vector over an azimuth/elevation grid.
pub fn beam_pattern(
    zeta: &CVector,
    geometry: &ArrayGeometry,
    azimuths: &[f64],
    elevations: &[f64],
) -> Result<BeamPattern> {
    if azimuths.is_empty() || elevations.is_empty() {
        return Err(Error::invalid("grid", "angle grids must be non-empty"));
    }
    if azimuths.windows(2).any(|w| w[1] <= w[0]) || elevations.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::invalid(
            "grid",
            "angle grids must be strictly increasing",
        ));
    }
    let norm = directivity_normalizer(zeta, geometry)?;
    let mut power = Vec::with_capacity(azimuths.len() * elevations.len());
    for &az in azimuths {
        for &el in elevations {
            power.push(array_factor(zeta, geometry, az, el).norm_sqr());
        }
    }
    let directivity: Vec<f64> = power.iter().map(|p| p / norm).collect();
    let mut best = 0;
    for (k, &d) in directivity.iter().enumerate() {
        if d > directivity[best] {
            best = k;
        }
    }
    let peak = (
        azimuths[best / elevations.len()],
        elevations[best % elevations.len()],
    );
    let ppd_dbi = 10.0 * directivity[best].log10();

    let peak_deg = peak.1.to_degrees();
    let lo = ((-90.0 - peak_deg) / CUT_STEP_DEG - 1e-9).ceil() as i64;
    let hi = ((90.0 - peak_deg) / CUT_STEP_DEG + 1e-9).floor() as i64;
    let angles_deg: Vec<f64> = (lo..=hi)
        .map(|k| peak_deg + CUT_STEP_DEG * k as f64)
        .collect();
    let directivity_dbi: Vec<f64> = angles_deg
        .iter()
        .map(|&t| {
            let (az, el) = if t >= 0.0 {
                (peak.0, t.to_radians())
            } else {
                (peak.0 + PI, (-t).to_radians())
            };
            10.0 * (array_factor(zeta, geometry, az, el).norm_sqr() / norm).log10()
        })
        .collect();
    let i0 = (-lo) as usize;
    let level = ppd_dbi + HALF_POWER_DB;
    let (right, right_pair) = half_power_edge(&angles_deg, &directivity_dbi, i0, level, true);
    let (left, left_pair) = half_power_edge(&angles_deg, &directivity_dbi, i0, level, false);
    let hpbw_deg = right - left;
    let hppd_dbi = [left_pair, right_pair]
        .into_iter()
        .flatten()
        .flat_map(|(a, b)| [directivity_dbi[a], directivity_dbi[b]])
        .min_by(|a, b| (a - level).abs().total_cmp(&(b - level).abs()))
        .unwrap_or(ppd_dbi);

    Ok(BeamPattern {
        azimuths: azimuths.to_vec(),
        elevations: elevations.to_vec(),
        power,
        directivity,
        ppd_dbi,
        hppd_dbi,
        hpbw_deg,
        peak,
        cut: PatternCut {
            azimuth: peak.0,
            angles_deg,
            directivity_dbi,
        },
    })
}

/// Walks from the peak until the cut drops below `level`; returns the
/// interpolated crossing angle and the straddling grid indices, or the cut
/// edge if it never drops.
fn half_power_edge(
    angles: &[f64],
    dbi: &[f64],
    start: usize,
    level: f64,
    forward: bool,
) -> (f64, Option<(usize, usize)>) {
    let mut prev = start;
    loop {
        let next = if forward {
            if prev + 1 >= angles.len() {
                return (angles[prev], None);
            }
            prev + 1
        } else {
            if prev == 0 {
                return (angles[0], None);
            }
            prev - 1
        };
        if dbi[next] < level {
            let frac = (level - dbi[prev]) / (dbi[next] - dbi[prev]);
            return (
                angles[prev] + frac * (angles[next] - angles[prev]),
                Some((prev, next)),
            );
        }
        prev = next;
    }
}
