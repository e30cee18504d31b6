use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
#[allow(unused_imports)] // inherent float methods need std
use num_traits::Float;

use crate::metrics::cav;
use crate::ris_config::GroupingStrategy;
use crate::{units, Result, C64};

use super::{map_trials, ArchitectureSpec, ExperimentConfig, Link, MeanAccumulator, ResultTable};

/// Parameter swept by [`sweep`].
#[derive(Debug, Clone, PartialEq)]
pub enum SweepAxis {
    /// The configured power grid.
    Power,
    /// Square `n x n` arrays.
    ArraySize(Vec<usize>),
    /// Feed separations in wavelengths.
    Separation(Vec<f64>),
    /// BD-RIS group counts under one grouping strategy.
    GroupCount {
        counts: Vec<usize>,
        strategy: GroupingStrategy,
    },
}

fn spectral_efficiency(h: C64, snr_scale: f64) -> f64 {
    (1.0 + snr_scale * h.norm_sqr()).log2()
}

/// `P / noise` for a power in dBm.
fn snr_scale(config: &ExperimentConfig, power_dbm: f64) -> f64 {
    units::dbm_ratio(power_dbm, config.noise_power_dbm())
}

fn rate_columns(prefix: &str, labels: &[String]) -> Vec<String> {
    let mut cols = vec![String::from(prefix)];
    for l in labels {
        cols.push(format!("rate_{l}"));
        cols.push(format!("rate_{l}_se"));
    }
    cols
}

fn rates_at(hs: &[Vec<C64>], arch_count: usize, scale: f64) -> Vec<f64> {
    let mut out = Vec::with_capacity(2 * arch_count);
    for k in 0..arch_count {
        let mut acc = MeanAccumulator::default();
        for h in hs {
            acc.push(spectral_efficiency(h[k], scale));
        }
        out.push(acc.mean());
        out.push(acc.std_error());
    }
    out
}

/// Ergodic rate `E[log2(1 + P |h^T zeta|^2 / noise)]` with a unit-energy
/// symbol, over `config.trials` channel realizations at every power point.
pub fn achievable_rate(config: &ExperimentConfig) -> Result<ResultTable> {
    let link = Link::new(config)?;
    let labels: Vec<String> = link.architectures().map(|a| a.label()).collect();
    let hs = map_trials(0..config.trials as u64, |t| link.realize(t))?;
    let mut table = ResultTable::new("rate", rate_columns("power_dbm", &labels));
    for &p in &config.power_grid_dbm {
        let mut row = vec![p];
        row.extend(rates_at(&hs, labels.len(), snr_scale(config, p)));
        table.push_row(row)?;
    }
    Ok(table)
}

/// Re-runs the rate evaluation along one axis with everything else fixed,
/// at `config.transmit_power_dbm` (the power axis uses the power grid).
/// Points that make the configuration invalid are skipped with a warning.
pub fn sweep(axis: &SweepAxis, config: &ExperimentConfig) -> Result<ResultTable> {
    match axis {
        SweepAxis::Power => {
            let mut t = achievable_rate(config)?;
            t.name = "sweep_power".into();
            Ok(t)
        }
        SweepAxis::ArraySize(sizes) => geometry_sweep(
            "sweep_array_size",
            "size",
            config,
            sizes.iter().map(|&n| n as f64),
            |c, n| {
                c.geometry.m_x = n as usize;
                c.geometry.m_y = n as usize;
            },
        ),
        SweepAxis::Separation(seps) => geometry_sweep(
            "sweep_separation",
            "separation_wavelengths",
            config,
            seps.iter().copied(),
            |c, s| c.geometry.separation_wavelengths = s,
        ),
        SweepAxis::GroupCount { counts, strategy } => group_sweep(config, counts, *strategy),
    }
}

fn geometry_sweep(
    name: &str,
    axis: &str,
    config: &ExperimentConfig,
    points: impl Iterator<Item = f64>,
    apply: impl Fn(&mut ExperimentConfig, f64),
) -> Result<ResultTable> {
    let labels: Vec<String> = config.architectures.iter().map(|a| a.label()).collect();
    let mut cols = rate_columns(axis, &labels);
    cols.insert(1, "cav".into());
    let mut table = ResultTable::new(name, cols);
    for x in points {
        let mut c = config.clone();
        apply(&mut c, x);
        let link = match c.validate().and_then(|_| Link::new(&c)) {
            Ok(l) => l,
            Err(e) => {
                table.warnings.push(format!("{axis} = {x}: skipped: {e}"));
                continue;
            }
        };
        let hs = map_trials(0..c.trials as u64, |t| link.realize(t))?;
        let mut row = vec![x, cav(link.feed_channel())?.cav];
        row.extend(rates_at(
            &hs,
            labels.len(),
            snr_scale(&c, c.transmit_power_dbm),
        ));
        table.push_row(row)?;
    }
    Ok(table)
}

fn group_sweep(
    config: &ExperimentConfig,
    counts: &[usize],
    strategy: GroupingStrategy,
) -> Result<ResultTable> {
    let cols = ["groups", "rate", "rate_se", "delta_prev", "delta_prev_se"]
        .iter()
        .map(|s| String::from(*s))
        .collect();
    let mut table = ResultTable::new("sweep_group_count", cols);
    let scale = snr_scale(config, config.transmit_power_dbm);
    let mut prev: Option<Vec<f64>> = None;
    for &groups in counts {
        let mut c = config.clone();
        c.architectures = vec![ArchitectureSpec::Bd { groups, strategy }];
        let link = match c.validate().and_then(|_| Link::new(&c)) {
            Ok(l) => l,
            Err(e) => {
                table
                    .warnings
                    .push(format!("groups = {groups}: skipped: {e}"));
                continue;
            }
        };
        let rates: Vec<f64> = map_trials(0..c.trials as u64, |t| {
            Ok(spectral_efficiency(link.realize(t)?[0], scale))
        })?;
        let mut acc = MeanAccumulator::default();
        rates.iter().for_each(|&r| acc.push(r));
        // paired against the previous point: same channels, same beamformers
        let (delta, delta_se) = match &prev {
            Some(p) => {
                let mut d = MeanAccumulator::default();
                rates.iter().zip(p).for_each(|(a, b)| d.push(a - b));
                (d.mean(), d.std_error())
            }
            None => (f64::NAN, f64::NAN),
        };
        table.push_row(vec![
            groups as f64,
            acc.mean(),
            acc.std_error(),
            delta,
            delta_se,
        ])?;
        prev = Some(rates);
    }
    Ok(table)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small() -> ExperimentConfig {
        ExperimentConfig {
            trials: 200,
            power_grid_dbm: vec![-100.0, 0.0, 20.0],
            ..Default::default()
        }
    }

    #[test]
    fn rate_limits_and_ordering() {
        let t = achievable_rate(&small()).unwrap();
        for label in ["active", "bd_g1", "dris"] {
            let r = t.column(&format!("rate_{label}")).unwrap();
            assert!(r[0] < 1e-3);
            assert!(r[1] < r[2]);
        }
        let a = t.get(2, "rate_active").unwrap();
        let b = t.get(2, "rate_bd_g1").unwrap();
        let d = t.get(2, "rate_dris").unwrap();
        assert!(a >= b && b >= d);
        assert_eq!(achievable_rate(&small()).unwrap(), t);
    }

    #[test]
    fn invalid_points_are_skipped() {
        let mut c = small();
        c.architectures = vec![ArchitectureSpec::Bd {
            groups: 4,
            strategy: GroupingStrategy::Linear,
        }];
        let t = sweep(&SweepAxis::ArraySize(vec![2, 3, 4]), &c).unwrap();
        assert_eq!(t.rows.len(), 2);
        assert_eq!(t.warnings.len(), 1);
        let g = sweep(
            &SweepAxis::GroupCount {
                counts: vec![1, 7, 2],
                strategy: GroupingStrategy::Linear,
            },
            &small(),
        )
        .unwrap();
        assert_eq!(g.rows.len(), 2);
        assert_eq!(g.warnings.len(), 1);
    }
}
