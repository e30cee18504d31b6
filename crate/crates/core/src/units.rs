//! Physical constants and the single dB/linear conversion boundary.

/// Speed of light in vacuum, m/s.
pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;

/// Wavelength in meters for a carrier frequency in Hz.
pub fn wavelength(carrier_hz: f64) -> f64 {
    SPEED_OF_LIGHT / carrier_hz
}

/// Power ratio in dB to linear.
pub fn db_to_linear(db: f64) -> f64 {
    libm::pow(10.0, db / 10.0)
}

/// Linear power ratio to dB.
pub fn linear_to_db(linear: f64) -> f64 {
    10.0 * libm::log10(linear)
}

/// Ratio of two powers expressed in dBm, as a linear factor.
pub fn dbm_ratio(numerator_dbm: f64, denominator_dbm: f64) -> f64 {
    db_to_linear(numerator_dbm - denominator_dbm)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn conversions_round_trip() {
        assert!((db_to_linear(30.0) - 1000.0).abs() < 1e-9);
        assert!((linear_to_db(0.5) + 3.010_299_956_639_812).abs() < 1e-12);
        assert!((dbm_ratio(20.0, -94.0) - 10f64.powf(11.4)).abs() / 10f64.powf(11.4) < 1e-12);
        assert!((wavelength(28e9) - 0.010_706_873_5).abs() < 1e-9);
    }
}
