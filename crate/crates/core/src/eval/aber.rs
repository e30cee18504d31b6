use alloc::format;
use alloc::vec::Vec;
#[allow(unused_imports)] // inherent float methods need std
use num_traits::Float;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::channel::sample_complex_gaussian;
use crate::{units, Result, C64};

use super::{
    derive_seed, map_trials, q_function, Constellation, ExperimentConfig, Link, MeanAccumulator,
    ResultTable,
};

/// Trials realized per parallel batch.
const BATCH: u64 = 512;

/// Bit errors of `symbols` uniformly drawn symbols over one effective
/// channel; returns `(bit_errors, bits)`.
fn transmit<R: Rng + ?Sized>(
    h_eff: C64,
    sqrt_power: f64,
    noise: f64,
    constellation: &Constellation,
    symbols: usize,
    rng: &mut R,
) -> (u64, u64) {
    let mut errors = 0u64;
    for _ in 0..symbols {
        let k = rng.random_range(0..constellation.order());
        let y = h_eff * sqrt_power * constellation.point(k) + sample_complex_gaussian(noise, rng);
        let k_hat = super::ml_detect(y, h_eff, sqrt_power, constellation);
        errors += constellation.hamming(k, k_hat) as u64;
    }
    (
        errors,
        symbols as u64 * constellation.bits_per_symbol() as u64,
    )
}

/// Bit error rate and its binomial standard error over a fixed effective
/// channel; `power` and `noise` are linear.
pub fn fixed_channel_ber(
    h_eff: C64,
    power: f64,
    noise: f64,
    constellation: &Constellation,
    symbols: usize,
    seed: u64,
) -> (f64, f64) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (e, n) = transmit(h_eff, power.sqrt(), noise, constellation, symbols, &mut rng);
    let p = e as f64 / n as f64;
    (p, (p * (1.0 - p) / n as f64).sqrt())
}

/// Union-bound value for one effective channel:
/// `(1/(eta M)) sum_{s, s'} d_H(s, s') Q(|sqrt(P) h (s - s')| / sqrt(2 noise))`.
pub fn union_bound_term(h_eff: C64, power: f64, noise: f64, constellation: &Constellation) -> f64 {
    let m = constellation.order();
    let scale = h_eff.norm() * power.sqrt() / (2.0 * noise).sqrt();
    let mut total = 0.0;
    for a in 0..m {
        for b in (0..m).filter(|&b| b != a) {
            let d = (constellation.point(a) - constellation.point(b)).norm();
            total += constellation.hamming(a, b) as f64 * q_function(scale * d);
        }
    }
    total / (constellation.bits_per_symbol() as f64 * m as f64)
}

/// Lazily grown cache of per-trial effective channels, shared by every
/// power point so all points see the same channel set.
struct ChannelCache<'a> {
    link: &'a Link,
    h: Vec<Vec<C64>>,
}

impl<'a> ChannelCache<'a> {
    fn get(&mut self, trial: usize) -> Result<&[C64]> {
        while self.h.len() <= trial {
            let start = self.h.len() as u64;
            let batch = map_trials(start..start + BATCH, |t| self.link.realize(t))?;
            self.h.extend(batch);
        }
        Ok(&self.h[trial])
    }

    fn ensure(&mut self, trials: usize) -> Result<()> {
        if trials > 0 {
            self.get(trials - 1)?;
        }
        Ok(())
    }
}

struct SimPoint {
    aber: MeanAccumulator,
    bound: MeanAccumulator,
    bits: u64,
    channels: u64,
}

fn simulate_point(
    cache: &mut ChannelCache,
    config: &ExperimentConfig,
    constellation: &Constellation,
    power_index: usize,
    arch: usize,
) -> Result<SimPoint> {
    let power = units::db_to_linear(config.power_grid_dbm[power_index] - 30.0);
    let noise = units::db_to_linear(config.noise_power_dbm() - 30.0);
    let sqrt_power = power.sqrt();
    let seed = derive_seed(config.seed, &[0xabe7, power_index as u64, arch as u64]);
    let budget = config.aber;
    let mut point = SimPoint {
        aber: MeanAccumulator::default(),
        bound: MeanAccumulator::default(),
        bits: 0,
        channels: 0,
    };
    let mut errors = 0u64;
    let mut start = 0u64;
    'outer: loop {
        cache.ensure((start + BATCH) as usize)?;
        let hs: Vec<C64> = (start..start + BATCH)
            .map(|t| cache.h[t as usize][arch])
            .collect();
        let outcomes = map_trials(start..start + BATCH, |t| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(t);
            let h = hs[(t - start) as usize];
            Ok((
                transmit(
                    h,
                    sqrt_power,
                    noise,
                    constellation,
                    budget.symbols_per_channel,
                    &mut rng,
                ),
                union_bound_term(h, power, noise, constellation),
            ))
        })?;
        for ((e, n), bound) in outcomes {
            errors += e;
            point.bits += n;
            point.channels += 1;
            point.aber.push(e as f64 / n as f64);
            point.bound.push(bound);
            if errors >= budget.min_errors || point.bits >= budget.max_bits {
                break 'outer;
            }
        }
        start += BATCH;
    }
    Ok(point)
}

fn columns(link: &Link, with_sim: bool, with_bound: bool) -> Vec<alloc::string::String> {
    let mut cols = alloc::vec!["power_dbm".into()];
    for arch in link.architectures() {
        let l = arch.label();
        if with_sim {
            cols.push(format!("aber_{l}"));
            cols.push(format!("aber_{l}_se"));
        }
        if with_bound {
            cols.push(format!("bound_{l}"));
            cols.push(format!("bound_{l}_se"));
        }
        if with_sim {
            cols.push(format!("bits_{l}"));
            cols.push(format!("channels_{l}"));
        }
    }
    cols
}

fn run_simulation(config: &ExperimentConfig, with_bound: bool) -> Result<ResultTable> {
    let link = Link::new(config)?;
    let constellation = Constellation::psk(config.constellation_order)?;
    let mut table = ResultTable::new("aber", columns(&link, true, with_bound));
    let mut cache = ChannelCache {
        link: &link,
        h: Vec::new(),
    };
    for (pi, &p) in config.power_grid_dbm.iter().enumerate() {
        let mut row = alloc::vec![p];
        for arch in 0..link.architecture_count() {
            let pt = simulate_point(&mut cache, config, &constellation, pi, arch)?;
            row.push(pt.aber.mean());
            row.push(pt.aber.std_error());
            if with_bound {
                row.push(pt.bound.mean());
                row.push(pt.bound.std_error());
            }
            row.push(pt.bits as f64);
            row.push(pt.channels as f64);
        }
        table.push_row(row)?;
    }
    Ok(table)
}

/// Simulated ABER with ML detection over the configured power grid.
///
/// Each point draws channel realizations in trial order and sends
/// `symbols_per_channel` symbols over each, stopping once the error or bit
/// budget is met. The standard error treats channels as the sampling unit.
pub fn simulate_aber(config: &ExperimentConfig) -> Result<ResultTable> {
    run_simulation(config, false)
}

/// Simulated ABER together with the union bound evaluated on exactly the
/// channel set each simulated point used.
pub fn aber_with_bound(config: &ExperimentConfig) -> Result<ResultTable> {
    run_simulation(config, true)
}

/// Union bound averaged over the first `config.trials` channel realizations.
pub fn theoretical_aber(config: &ExperimentConfig) -> Result<ResultTable> {
    let link = Link::new(config)?;
    let constellation = Constellation::psk(config.constellation_order)?;
    let noise = units::db_to_linear(config.noise_power_dbm() - 30.0);
    let hs = map_trials(0..config.trials as u64, |t| link.realize(t))?;
    let mut table = ResultTable::new("aber_bound", columns(&link, false, true));
    for &p in &config.power_grid_dbm {
        let power = units::db_to_linear(p - 30.0);
        let mut row = alloc::vec![p];
        for arch in 0..link.architecture_count() {
            let mut acc = MeanAccumulator::default();
            for h in &hs {
                acc.push(union_bound_term(h[arch], power, noise, &constellation));
            }
            row.push(acc.mean());
            row.push(acc.std_error());
        }
        table.push_row(row)?;
    }
    Ok(table)
}
