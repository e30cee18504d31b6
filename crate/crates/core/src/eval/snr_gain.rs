use alloc::vec;
use alloc::vec::Vec;
#[allow(unused_imports)] // inherent float methods need std
use num_traits::Float;

use crate::channel::{
    bs_ris_channel, sample_rayleigh_channel, sample_ris_ue_channel, ChannelModel, Scenario,
};
use crate::metrics::{cav, gain_ceiling_db, gain_floor_db};
use crate::precoder::dominant_eigenmode;
use crate::ris_config::{configure_bdris, configure_dris, Grouping};
use crate::{CVector, Error, Result};

use super::{derive_seed, map_trials, trial_rng, ExperimentConfig, MeanAccumulator, ResultTable};

/// Richness of the surface-to-user scattering.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ScatteringLevel {
    /// LOS-blocked geometric channel with this many single-path clusters.
    Clusters(usize),
    /// I.i.d. Rayleigh fading.
    Rayleigh,
}

impl ScatteringLevel {
    fn tag(self) -> u64 {
        match self {
            ScatteringLevel::Clusters(c) => c as u64,
            ScatteringLevel::Rayleigh => u64::MAX,
        }
    }
}

/// Mean SNR gain in dB of a fully connected BD-RIS over a D-RIS with full
/// CSI, per scattering level, next to the CAV floor and ceiling of the
/// configured geometry. The gain of each trial is `10 log10(SNR_BD / SNR_D)`.
pub fn snr_gain_sweep(
    levels: &[ScatteringLevel],
    config: &ExperimentConfig,
) -> Result<ResultTable> {
    config.validate()?;
    let geometry = config.build_geometry()?;
    let g = bs_ris_channel(&geometry).g;
    let grouping = Grouping::linear(geometry.len(), 1)?;
    let c = cav(&g)?.cav;
    let cols = [
        "clusters",
        "gain_db",
        "gain_db_se",
        "floor_db",
        "ceiling_db",
        "cav",
    ]
    .iter()
    .map(|s| (*s).into())
    .collect();
    let mut table = ResultTable::new("snr_gain", cols);
    for (i, &level) in levels.iter().enumerate() {
        let model = match level {
            ScatteringLevel::Clusters(0) => {
                return Err(Error::invalid("levels", "cluster count must be at least 1"));
            }
            ScatteringLevel::Clusters(clusters) => Some(ChannelModel {
                clusters,
                paths_per_cluster: 1,
                scenario: Scenario::LosBlocked,
                ..config.channel
            }),
            ScatteringLevel::Rayleigh => None,
        };
        let seed = derive_seed(config.seed, &[0x5ca7, i as u64, level.tag()]);
        let gains = map_trials(0..config.trials as u64, |t| {
            let mut rng = trial_rng(seed, t);
            let h: CVector = match &model {
                Some(m) => sample_ris_ue_channel(&geometry, m, &mut rng)?.h,
                None => sample_rayleigh_channel(geometry.len(), 1.0, &mut rng),
            };
            let b = dominant_eigenmode(&h)?.b;
            let bd = h
                .dot(&configure_bdris(&g, &b, &grouping)?.apply(&g)?)
                .norm_sqr();
            let d = h.dot(&configure_dris(&g, &b)?.apply(&g)?).norm_sqr();
            Ok(10.0 * (bd / d).log10())
        })?;
        let mut acc = MeanAccumulator::default();
        gains.iter().for_each(|&x| acc.push(x));
        let axis = match level {
            ScatteringLevel::Clusters(n) => n as f64,
            ScatteringLevel::Rayleigh => f64::INFINITY,
        };
        table.push_row(vec![
            axis,
            acc.mean(),
            acc.std_error(),
            gain_floor_db(c),
            gain_ceiling_db(c),
            c,
        ])?;
    }
    Ok(table)
}

/// The cluster counts conventionally swept, followed by the Rayleigh limit.
pub fn default_levels() -> Vec<ScatteringLevel> {
    let mut v: Vec<_> = [1, 2, 4, 8, 16, 32]
        .into_iter()
        .map(ScatteringLevel::Clusters)
        .collect();
    v.push(ScatteringLevel::Rayleigh);
    v
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_path_sits_on_the_floor_and_rayleigh_near_the_ceiling() {
        let config = ExperimentConfig {
            trials: 400,
            ..Default::default()
        };
        let t = snr_gain_sweep(
            &[ScatteringLevel::Clusters(1), ScatteringLevel::Rayleigh],
            &config,
        )
        .unwrap();
        let floor = t.get(0, "floor_db").unwrap();
        let one = t.get(0, "gain_db").unwrap();
        // a single path has unit-modulus entries, so the gain is exactly the floor
        assert!((one - floor).abs() < 1e-9, "{one} vs {floor}");
        let ray = t.get(1, "gain_db").unwrap();
        let se = t.get(1, "gain_db_se").unwrap();
        let ceil = t.get(1, "ceiling_db").unwrap();
        assert!(ray > floor + 0.5);
        assert!((ray - ceil).abs() < 5.0 * se + 0.1, "{ray} vs {ceil}");
        assert!(t.get(1, "clusters").unwrap().is_infinite());
    }

    #[test]
    fn gain_grows_with_scattering() {
        let config = ExperimentConfig {
            trials: 300,
            ..Default::default()
        };
        let t = snr_gain_sweep(&default_levels(), &config).unwrap();
        let g = t.column("gain_db").unwrap();
        assert!(g.first().unwrap() < g.last().unwrap());
        assert!(snr_gain_sweep(&[ScatteringLevel::Clusters(0)], &config).is_err());
    }
}
