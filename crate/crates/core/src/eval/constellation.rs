use alloc::vec::Vec;
use core::f64::consts::PI;

use crate::{Error, Result, C64};

/// Gray-labeled `M`-PSK with unit-energy points `exp(j 2 pi k / M)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Constellation {
    points: Vec<C64>,
    labels: Vec<u32>,
    bits: u32,
}

impl Constellation {
    pub fn psk(order: usize) -> Result<Self> {
        if order < 2 || !order.is_power_of_two() {
            return Err(Error::invalid(
                "constellation_order",
                "must be a power of two, at least 2",
            ));
        }
        let points = (0..order)
            .map(|k| C64::from_polar(1.0, 2.0 * PI * k as f64 / order as f64))
            .collect();
        let labels = (0..order as u32).map(|k| k ^ (k >> 1)).collect();
        Ok(Self {
            points,
            labels,
            bits: order.trailing_zeros(),
        })
    }

    pub fn order(&self) -> usize {
        self.points.len()
    }

    pub fn bits_per_symbol(&self) -> u32 {
        self.bits
    }

    pub fn points(&self) -> &[C64] {
        &self.points
    }

    pub fn point(&self, k: usize) -> C64 {
        self.points[k]
    }

    pub fn label(&self, k: usize) -> u32 {
        self.labels[k]
    }

    /// Hamming distance between the bit labels of two symbols.
    pub fn hamming(&self, a: usize, b: usize) -> u32 {
        (self.labels[a] ^ self.labels[b]).count_ones()
    }
}

/// Maximum-likelihood symbol index `argmin |y - sqrt(P) h s|^2`; ties go to
/// the lowest index.
pub fn ml_detect(y: C64, h_eff: C64, sqrt_power: f64, constellation: &Constellation) -> usize {
    let scale = h_eff * sqrt_power;
    let mut best = 0;
    let mut best_d = f64::INFINITY;
    for (k, &s) in constellation.points().iter().enumerate() {
        let d = (y - scale * s).norm_sqr();
        if d < best_d {
            best_d = d;
            best = k;
        }
    }
    best
}

/// Gaussian tail probability `Q(x) = erfc(x / sqrt 2) / 2`.
pub fn q_function(x: f64) -> f64 {
    0.5 * libm::erfc(x / core::f64::consts::SQRT_2)
}
