//! Monte-Carlo engines.
//!
//! Every trial draws from its own ChaCha8 stream (`stream = trial index`)
//! under a master seed, trials are collected in index order, and all
//! reductions run sequentially over that order, so results are bit-identical
//! with or without the `parallel` feature.

mod aber;
mod config;
mod constellation;
mod link;
mod rate;
mod snr_gain;

pub use aber::{
    aber_with_bound, fixed_channel_ber, simulate_aber, theoretical_aber, union_bound_term,
};
pub use config::{AberBudget, ArchitectureSpec, ExperimentConfig, GeometryConfig, PrecodingCase};
pub use constellation::{ml_detect, q_function, Constellation};
pub use link::Link;
pub use rate::{achievable_rate, sweep, SweepAxis};
pub use snr_gain::{default_levels, snr_gain_sweep, ScatteringLevel};

use alloc::string::String;
use alloc::vec::Vec;
#[allow(unused_imports)] // inherent float methods need std
use num_traits::Float;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::{Error, Result};

/// RNG for trial `trial` under `seed`.
pub fn trial_rng(seed: u64, trial: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    rng
}

/// Derives an independent seed from a master seed and a list of tags.
pub fn derive_seed(seed: u64, tags: &[u64]) -> u64 {
    let mut x = seed;
    for &t in tags {
        x = splitmix64(x ^ splitmix64(t.wrapping_add(0x9e37_79b9_7f4a_7c15)));
    }
    x
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Maps `f` over `range`, in parallel when the `parallel` feature is on.
/// Output order always follows the range.
pub fn map_trials<T, F>(range: core::ops::Range<u64>, f: F) -> Result<Vec<T>>
where
    T: Send,
    F: Fn(u64) -> Result<T> + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        range.into_par_iter().map(f).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        range.map(f).collect()
    }
}

/// Running mean and standard error with compensated summation.
#[derive(Debug, Clone, Copy, Default)]
pub struct MeanAccumulator {
    n: u64,
    sum: f64,
    sum_c: f64,
    sq: f64,
    sq_c: f64,
}

impl MeanAccumulator {
    pub fn push(&mut self, x: f64) {
        self.n += 1;
        neumaier(&mut self.sum, &mut self.sum_c, x);
        neumaier(&mut self.sq, &mut self.sq_c, x * x);
    }

    pub fn count(&self) -> u64 {
        self.n
    }

    pub fn mean(&self) -> f64 {
        (self.sum + self.sum_c) / self.n as f64
    }

    /// Standard error of the mean (sample variance, `n - 1`).
    pub fn std_error(&self) -> f64 {
        if self.n < 2 {
            return 0.0;
        }
        let n = self.n as f64;
        let mean = self.mean();
        let var = ((self.sq + self.sq_c) - n * mean * mean).max(0.0) / (n - 1.0);
        (var / n).sqrt()
    }
}

fn neumaier(sum: &mut f64, c: &mut f64, x: f64) {
    let t = *sum + x;
    if sum.abs() >= x.abs() {
        *c += (*sum - t) + x;
    } else {
        *c += (x - t) + *sum;
    }
    *sum = t;
}

/// A table of numbers with named columns; the first column is the axis.
#[derive(Debug, Clone, PartialEq)]
pub struct ResultTable {
    pub name: String,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<f64>>,
    pub warnings: Vec<String>,
    pub metadata: Vec<(String, String)>,
}

impl ResultTable {
    pub fn new(name: impl Into<String>, columns: Vec<String>) -> Self {
        Self {
            name: name.into(),
            columns,
            rows: Vec::new(),
            warnings: Vec::new(),
            metadata: Vec::new(),
        }
    }

    pub fn push_row(&mut self, row: Vec<f64>) -> Result<()> {
        Error::check_len(self.columns.len(), row.len())?;
        self.rows.push(row);
        Ok(())
    }

    pub fn column_index(&self, name: &str) -> Option<usize> {
        self.columns.iter().position(|c| c == name)
    }

    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let k = self.column_index(name)?;
        Some(self.rows.iter().map(|r| r[k]).collect())
    }

    pub fn get(&self, row: usize, name: &str) -> Option<f64> {
        Some(self.rows.get(row)?[self.column_index(name)?])
    }
}
