//! Wiener path sampling, sign/magnitude factorization and variation
//! statistics.
//!
//! Each path owns an independent ChaCha20 stream keyed by the run seed and
//! selected by the path index, so a path depends only on
//! `(seed, path_index, n, dt)` and never on how many paths are drawn or on
//! which thread draws them.

use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WienerPath {
    pub t0: f64,
    pub dt: f64,
    pub increments: Vec<f64>,
    pub seed: u64,
    pub path_index: u64,
}

impl WienerPath {
    /// Wraps explicit increments (injected or degenerate paths).
    pub fn from_increments(t0: f64, dt: f64, increments: Vec<f64>) -> Result<Self> {
        if increments.is_empty() {
            return Err(Error::invalid("a path needs at least one increment"));
        }
        if !(dt > 0.0) {
            return Err(Error::invalid(format!("dt must be positive, got {dt}")));
        }
        Ok(Self {
            t0,
            dt,
            increments,
            seed: 0,
            path_index: 0,
        })
    }

    pub fn len(&self) -> usize {
        self.increments.len()
    }

    pub fn is_empty(&self) -> bool {
        self.increments.is_empty()
    }

    /// Elapsed time `n·dt`.
    pub fn horizon(&self) -> f64 {
        self.len() as f64 * self.dt
    }

    /// `t_k = t0 + k·dt`.
    pub fn time(&self, k: usize) -> f64 {
        self.t0 + k as f64 * self.dt
    }

    /// `W(t_k) - W(t0)` for `k = 1..=n`, summed left to right.
    pub fn cumulative(&self) -> Vec<f64> {
        self.increments
            .iter()
            .scan(0.0, |acc, dw| {
                *acc += dw;
                Some(*acc)
            })
            .collect()
    }

    /// `W(T) - W(t0)`.
    pub fn total(&self) -> f64 {
        self.increments.iter().sum()
    }
}

/// The RNG stream of one path.
pub fn path_rng(seed: u64, path_index: u64) -> ChaCha20Rng {
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    rng.set_stream(path_index);
    rng
}

pub fn generate_wiener(n: usize, dt: f64, seed: u64, path_index: u64) -> Result<WienerPath> {
    if n == 0 {
        return Err(Error::invalid("n must be at least 1"));
    }
    if !(dt > 0.0) {
        return Err(Error::invalid(format!("dt must be positive, got {dt}")));
    }
    let mut rng = path_rng(seed, path_index);
    let scale = dt.sqrt();
    let increments = (0..n)
        .map(|_| {
            let z: f64 = StandardNormal.sample(&mut rng);
            scale * z
        })
        .collect();
    Ok(WienerPath {
        t0: 0.0,
        dt,
        increments,
        seed,
        path_index,
    })
}

/// Sign/magnitude factorization `ΔW = sign·|ΔW|`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct IncrementDecomposition {
    /// Each entry is `+1.0` or `-1.0`; `sign(0) = +1`.
    pub signs: Vec<f64>,
    pub magnitudes: Vec<f64>,
}

impl IncrementDecomposition {
    pub fn recombine(&self) -> Vec<f64> {
        self.signs.iter().zip(&self.magnitudes).map(|(s, m)| s * m).collect()
    }
}

pub fn sign_of(dw: f64) -> f64 {
    if dw < 0.0 {
        -1.0
    } else {
        1.0
    }
}

pub fn decompose(p: &WienerPath) -> IncrementDecomposition {
    let signs = p.increments.iter().map(|&dw| sign_of(dw)).collect();
    let magnitudes = p.increments.iter().map(|dw| dw.abs()).collect();
    IncrementDecomposition { signs, magnitudes }
}

/// `Σ |ΔW_i|^α`.
pub fn power_variation(p: &WienerPath, alpha: f64) -> Result<f64> {
    if !(alpha > 0.0) {
        return Err(Error::invalid(format!("alpha must be positive, got {alpha}")));
    }
    Ok(if alpha == 2.0 {
        p.increments.iter().map(|dw| dw * dw).sum()
    } else {
        p.increments.iter().map(|dw| dw.abs().powf(alpha)).sum()
    })
}

/// `(1/n) Σ |ΔW_i|`, whose expectation is `sqrt(2·dt/π)`.
pub fn abs_increment_mean(p: &WienerPath) -> f64 {
    p.increments.iter().map(|dw| dw.abs()).sum::<f64>() / p.len() as f64
}

/// Applies `f` to path indices `0..count` on a pool of `workers` threads and
/// returns the results in index order.
pub fn ensemble_map<T, F>(count: u64, workers: usize, f: F) -> Result<Vec<T>>
where
    T: Send,
    F: Fn(u64) -> Result<T> + Send + Sync,
{
    if workers == 0 {
        return Err(Error::invalid("workers must be at least 1"));
    }
    if workers == 1 {
        return (0..count).map(f).collect();
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| Error::invalid(format!("cannot build worker pool: {e}")))?;
    pool.install(|| (0..count).into_par_iter().map(f).collect())
}
