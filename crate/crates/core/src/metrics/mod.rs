//! Channel amplitude variation, SNR expressions, gain bounds and beam
//! pattern figures.

mod pattern;

pub use pattern::{
    array_factor, beam_pattern, degree_grid, directivity_normalizer, BeamPattern, PatternCut,
};

use core::f64::consts::PI;
#[allow(unused_imports)] // inherent float methods need std
use num_traits::Float;

use crate::ris_config::ScatteringMatrix;
use crate::{CVector, Error, Result, C64};

/// Amplitude statistics of the feed channel.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CavReport {
    pub mean: f64,
    /// Population standard deviation.
    pub std: f64,
    /// `std / mean`.
    pub cav: f64,
}

/// Channel amplitude variation of `|g|`.
pub fn cav(g: &CVector) -> Result<CavReport> {
    let amps: alloc::vec::Vec<f64> = g.iter().map(|z| z.norm()).collect();
    cav_of_amplitudes(&amps)
}

/// Channel amplitude variation of a list of amplitudes.
pub fn cav_of_amplitudes(amps: &[f64]) -> Result<CavReport> {
    if amps.is_empty() {
        return Err(Error::invalid("g", "need at least one amplitude"));
    }
    let n = amps.len() as f64;
    let mean = amps.iter().sum::<f64>() / n;
    if !(mean > 0.0) {
        return Err(Error::Degenerate("mean amplitude is zero".into()));
    }
    let var = amps.iter().map(|a| (a - mean) * (a - mean)).sum::<f64>() / n;
    let std = var.sqrt();
    Ok(CavReport {
        mean,
        std,
        cav: std / mean,
    })
}

/// Effective SISO channel `h^T Omega g`.
pub fn effective_channel(h: &CVector, omega: &ScatteringMatrix, g: &CVector) -> Result<C64> {
    Error::check_len(h.len(), g.len())?;
    Ok(h.dot(&omega.apply(g)?))
}

/// `P |h_eff|^2 / noise` with linear powers.
pub fn snr_linear(h_eff: C64, power: f64, noise_power: f64) -> f64 {
    power * h_eff.norm_sqr() / noise_power
}

/// Guaranteed single-path SNR gain of BD-RIS over D-RIS, `10 log10(1 + cav^2)`.
pub fn gain_floor_db(cav: f64) -> f64 {
    10.0 * (1.0 + cav * cav).log10()
}

/// Rich-scattering asymptote: the floor plus `10 log10(4 / pi)`.
pub fn gain_ceiling_db(cav: f64) -> f64 {
    gain_floor_db(cav) + 10.0 * (4.0 / PI).log10()
}

/// Phase-aligned D-RIS SNR up to a common constant, `(sum |h_m| |g_m|)^2`.
pub fn snr_drris_closed_form(h: &CVector, g: &CVector) -> Result<f64> {
    Error::check_len(h.len(), g.len())?;
    let s: f64 = h
        .iter()
        .zip(g.iter())
        .map(|(a, b)| a.norm() * b.norm())
        .sum();
    Ok(s * s)
}

/// Matched BD-RIS SNR up to the same constant, `||h||^2 ||g||^2`.
pub fn snr_bdris_closed_form(h: &CVector, g: &CVector) -> Result<f64> {
    Error::check_len(h.len(), g.len())?;
    Ok(h.norm_squared() * g.norm_squared())
}
