//! Discrete wavefunction `ψ(n,k) = 2^{-n/2}·C(n,k)^{1/2}·e^{iθ(n,k)}`,
//! whose squared modulus is the symmetric binomial law of `k` heads in `n`
//! coin tosses.

use std::f64::consts::PI;

use num_bigint::BigUint;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest `n` for which binomials are formed in exact integer arithmetic
/// before conversion; larger `n` use a floating-point ratio recurrence.
pub const EXACT_LIMIT: u64 = 64;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DiscreteWave {
    pub n: u64,
    pub values: Vec<Complex64>,
    pub thetas: Vec<f64>,
}

impl DiscreteWave {
    pub fn probabilities(&self) -> Vec<f64> {
        self.values.iter().map(|z| z.norm_sqr()).collect()
    }
}

/// Row `n` of Pascal's triangle.
pub fn binomial_row(n: u64) -> Vec<BigUint> {
    let mut row = Vec::with_capacity(n as usize + 1);
    let mut c = BigUint::one();
    row.push(c.clone());
    for k in 1..=n {
        c = c * BigUint::from(n - k + 1) / BigUint::from(k);
        row.push(c.clone());
    }
    row
}

/// `C(n,k)/2ⁿ` for `k = 0..=n`, exactly.
pub fn binom_pmf(n: u64) -> Vec<BigRational> {
    let denom = num_bigint::BigInt::one() << n as usize;
    binomial_row(n)
        .into_iter()
        .map(|c| BigRational::new(c.into(), denom.clone()))
        .collect()
}

/// `C(n,k)/2ⁿ` in floating point.
pub fn binom_pmf_f64(n: u64) -> Vec<f64> {
    if n <= EXACT_LIMIT {
        let scale = 0.5f64.powi(n as i32);
        binomial_row(n)
            .iter()
            .map(|c| c.to_f64().unwrap_or(f64::NAN) * scale)
            .collect()
    } else {
        // C(n,k)/C(n,mode) by ratio recurrence outward from the mode; the
        // row total is 2ⁿ/C(n,mode), so dividing by the sum normalizes.
        let mode = n / 2;
        let mut out = vec![0.0; n as usize + 1];
        out[mode as usize] = 1.0;
        for k in mode + 1..=n {
            out[k as usize] = out[k as usize - 1] * (n - k + 1) as f64 / k as f64;
        }
        for k in (0..mode).rev() {
            out[k as usize] = out[k as usize + 1] * (k + 1) as f64 / (n - k) as f64;
        }
        let total: f64 = out.iter().sum();
        out.iter_mut().for_each(|p| *p /= total);
        out
    }
}

/// The canonical map with `θ ≡ 0`.
pub fn discrete_wave_real(n: u64) -> DiscreteWave {
    discrete_wave(n, |_| 0.0)
}

pub fn discrete_wave(n: u64, theta: impl Fn(u64) -> f64) -> DiscreteWave {
    let thetas: Vec<f64> = (0..=n).map(theta).collect();
    let values = binom_pmf_f64(n)
        .into_iter()
        .zip(&thetas)
        .map(|(p, &th)| Complex64::from_polar(p.sqrt(), th))
        .collect();
    DiscreteWave { n, values, thetas }
}

/// `⟨a, b⟩ = Σ_k conj(a_k)·b_k`.
pub fn inner(a: &DiscreteWave, b: &DiscreteWave) -> Result<Complex64> {
    if a.n != b.n || a.values.len() != b.values.len() {
        return Err(Error::LengthMismatch {
            expected: a.values.len(),
            actual: b.values.len(),
        });
    }
    Ok(a.values.iter().zip(&b.values).map(|(x, y)| x.conj() * y).sum())
}

/// Normal(n/2, n/4) density at `k`.
pub fn local_limit_density(n: u64, k: f64) -> f64 {
    let mean = n as f64 / 2.0;
    let var = n as f64 / 4.0;
    (-(k - mean).powi(2) / (2.0 * var)).exp() / (2.0 * PI * var).sqrt()
}

/// `sup_k |C(n,k)/2ⁿ - g(k)|` with `g` the Normal(n/2, n/4) density.
pub fn gaussian_local_limit_error(n: u64) -> Result<f64> {
    if n == 0 {
        return Err(Error::invalid("n must be at least 1"));
    }
    Ok(binom_pmf_f64(n)
        .iter()
        .enumerate()
        .map(|(k, p)| (p - local_limit_density(n, k as f64)).abs())
        .fold(0.0, f64::max))
}
