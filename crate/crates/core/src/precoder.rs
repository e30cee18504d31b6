//! Beamforming vectors under the three CSI regimes.
//!
//! - Full CSI at the base station: the dominant right singular vector of the
//!   row channel `h^T`.
//! - Full CSI at the user with limited feedback: the codebook beam most
//!   correlated with that singular vector.
//! - Partial angular CSI: the steering vector toward the sub-channel
//!   (LOS or cluster) with the least leakage into the others.

use alloc::vec::Vec;
use core::f64::consts::PI;

use crate::channel::RisUeChannel;
use crate::geometry::ArrayGeometry;
use crate::{CVector, Error, Result, C64};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PrecoderOrigin {
    /// Dominant singular vector of the channel.
    FullCsi,
    /// Codebook feedback.
    Codebook,
    /// Cluster-direction selection.
    PartialCsi,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BeamformingVector {
    pub b: CVector,
    pub origin: PrecoderOrigin,
    /// Grid indices `(azimuth, elevation)` for codebook beams; sub-channel
    /// index for partial-CSI beams is reported as `(c, 0)`.
    pub codeword_index: Option<(usize, usize)>,
}

/// Dominant right singular vector of `h^T`.
///
/// For a single-row channel this is `conj(h) / ||h||`; the global phase is
/// fixed so that `h^T b` is real and positive.
pub fn dominant_eigenmode(h: &CVector) -> Result<BeamformingVector> {
    let norm = h.norm();
    if !(norm > 0.0) || !norm.is_finite() {
        return Err(Error::Degenerate("channel vector is zero".into()));
    }
    Ok(BeamformingVector {
        b: h.conjugate() / C64::new(norm, 0.0),
        origin: PrecoderOrigin::FullCsi,
        codeword_index: None,
    })
}

/// Steering-vector codebook on a regular azimuth/elevation grid.
#[derive(Debug, Clone)]
pub struct Codebook {
    azimuths: Vec<f64>,
    elevations: Vec<f64>,
    /// Row-major over `(azimuth, elevation)`.
    beams: Vec<CVector>,
}

/// Codebook on `[-pi : pi/36 : pi] x [0 : pi/36 : pi/2]` (73 x 19 beams).
pub fn build_codebook(geometry: &ArrayGeometry) -> Codebook {
    Codebook::with_steps(geometry, 72, 18)
}

impl Codebook {
    /// Grid with `az_steps` intervals over `[-pi, pi]` and `el_steps`
    /// intervals over `[0, pi/2]`, both endpoints included.
    pub fn with_steps(geometry: &ArrayGeometry, az_steps: usize, el_steps: usize) -> Self {
        let az_steps = az_steps.max(1);
        let el_steps = el_steps.max(1);
        let azimuths: Vec<f64> = (0..=az_steps)
            .map(|i| -PI + 2.0 * PI * i as f64 / az_steps as f64)
            .collect();
        let elevations: Vec<f64> = (0..=el_steps)
            .map(|j| 0.5 * PI * j as f64 / el_steps as f64)
            .collect();
        let mut beams = Vec::with_capacity(azimuths.len() * elevations.len());
        for &az in &azimuths {
            for &el in &elevations {
                beams.push(geometry.response(az, el));
            }
        }
        Self {
            azimuths,
            elevations,
            beams,
        }
    }

    pub fn len(&self) -> usize {
        self.beams.len()
    }

    pub fn is_empty(&self) -> bool {
        self.beams.is_empty()
    }

    pub fn azimuths(&self) -> &[f64] {
        &self.azimuths
    }

    pub fn elevations(&self) -> &[f64] {
        &self.elevations
    }

    pub fn beam(&self, i: usize, j: usize) -> &CVector {
        &self.beams[i * self.elevations.len() + j]
    }

    /// `|a(phi_i, theta_j)^H v|`.
    pub fn correlation(&self, i: usize, j: usize, v: &CVector) -> f64 {
        self.beam(i, j).dotc(v).norm()
    }

    /// Best beam `(i, j, correlation)`; ties go to the smallest `(i, j)`.
    pub fn best(&self, v: &CVector) -> (usize, usize, f64) {
        let ne = self.elevations.len();
        let mut best = (0, 0, f64::NEG_INFINITY);
        for (k, beam) in self.beams.iter().enumerate() {
            let c = beam.dotc(v).norm();
            if c > best.2 {
                best = (k / ne, k % ne, c);
            }
        }
        best
    }
}

/// Codebook feedback: the beam maximizing `|a^H v1|`.
pub fn select_codeword(v1: &CVector, codebook: &Codebook) -> Result<BeamformingVector> {
    if codebook.is_empty() {
        return Err(Error::invalid("codebook", "codebook is empty"));
    }
    Error::check_len(codebook.beams[0].len(), v1.len())?;
    let (i, j, _) = codebook.best(v1);
    Ok(BeamformingVector {
        b: codebook.beam(i, j).clone(),
        origin: PrecoderOrigin::Codebook,
        codeword_index: Some((i, j)),
    })
}

/// Isolation ratio of every sub-channel `c = 0..=C` (0 is the LOS):
/// `|h_c^T a_c| / |(sum_{i != c} h_i)^T a_c|` with `a_c` the steering vector
/// toward the sub-channel's direction. A zero denominator with a non-zero
/// numerator is `+inf`; `0/0` counts as zero.
pub fn leakage_ratios(channel: &RisUeChannel, geometry: &ArrayGeometry) -> Result<Vec<f64>> {
    Error::check_len(geometry.len(), channel.h.len())?;
    let n = channel.sub_channel_count();
    let mut ratios = Vec::with_capacity(n);
    for c in 0..n {
        let (hc, az, el) = channel.sub_channel(c);
        let a = geometry.response(az, el);
        let num = hc.dot(&a).norm();
        let mut others = CVector::zeros(geometry.len());
        for i in (0..n).filter(|&i| i != c) {
            others += channel.sub_channel(i).0;
        }
        let den = others.dot(&a).norm();
        ratios.push(if num == 0.0 {
            0.0
        } else if den == 0.0 {
            f64::INFINITY
        } else {
            num / den
        });
    }
    Ok(ratios)
}

/// Partial-CSI beam: steer toward the sub-channel with the largest
/// isolation ratio (lowest index on ties), using cluster mean angles.
pub fn partial_csi_direction(
    channel: &RisUeChannel,
    geometry: &ArrayGeometry,
) -> Result<BeamformingVector> {
    let ratios = leakage_ratios(channel, geometry)?;
    let mut best = 0;
    for (c, &r) in ratios.iter().enumerate() {
        if r > ratios[best] {
            best = c;
        }
    }
    let (_, az, el) = channel.sub_channel(best);
    Ok(BeamformingVector {
        b: geometry.response(az, el),
        origin: PrecoderOrigin::PartialCsi,
        codeword_index: Some((best, 0)),
    })
}
