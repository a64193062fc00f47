//! Value assignments for the two licensed divergent series and the
//! mean-square evaluation of `∫|dW|` and `∫sign(dW)` on the grid
//! `t_i = i/n`, `i = 1..n`, over `[0, 1]`.
//!
//! Regularization is symbolic substitution into closed forms. Monte Carlo
//! estimates live in separate functions and are only compared against the
//! unregularized formula.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::paths::{self, WienerPath};
use crate::stats::MeanEstimate;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RegularizationMethod {
    Zeta,
    Abel,
    None,
}

impl fmt::Display for RegularizationMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            RegularizationMethod::Zeta => "zeta",
            RegularizationMethod::Abel => "abel",
            RegularizationMethod::None => "none",
        })
    }
}

/// Divergent series `Σ_{i≥1} a_i` by term pattern.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DivergentSeries {
    /// `1 + 1 + 1 + ...`
    AllOnes,
    /// `Σ (-1)^i = -1 + 1 - 1 + ...`
    AlternatingUnits,
    /// `Σ i^k` for `k ≥ 1`.
    Powers(u32),
    /// `Σ 1/i`.
    Harmonic,
}

impl FromStr for DivergentSeries {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "ones" | "all-ones" => Ok(DivergentSeries::AllOnes),
            "alternating" => Ok(DivergentSeries::AlternatingUnits),
            "harmonic" => Ok(DivergentSeries::Harmonic),
            _ => match s.strip_prefix("powers:").map(str::parse) {
                Some(Ok(k)) => Ok(DivergentSeries::Powers(k)),
                _ => Err(Error::UnsupportedSeries(s.to_string())),
            },
        }
    }
}

/// Assigned value and the method that licenses it.
pub fn assign_divergent(kind: DivergentSeries) -> Result<(BigRational, RegularizationMethod)> {
    let minus_half = BigRational::new(BigInt::from(-1), BigInt::from(2));
    match kind {
        DivergentSeries::AllOnes | DivergentSeries::Powers(0) => Ok((minus_half, RegularizationMethod::Zeta)),
        DivergentSeries::AlternatingUnits => Ok((minus_half, RegularizationMethod::Abel)),
        other => Err(Error::UnsupportedSeries(format!("{other:?}"))),
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RegularizedSum {
    pub n: u64,
    /// Unregularized analytic value `(2/π)·n`.
    pub raw_value: f64,
    pub regularized_value: f64,
    pub method: RegularizationMethod,
    /// Exact rational multiplier of `2/π` in `raw_value`.
    #[serde(skip)]
    pub raw_factor: BigRational,
    /// Exact rational multiplier of `2/π` in `regularized_value`.
    #[serde(skip)]
    pub regularized_factor: BigRational,
}

/// `⟨S_n²⟩ = (2/π)(1/n)(Σ_{i=1}^n 1)²` for `S_n = Σ|W(t_i) - W(t_{i-1})|`.
///
/// Unregularized, `Σ = n` and the value is `(2/π)·n`, which diverges.
/// Regularized, the sum is replaced by `ζ(0) = -1/2`, giving `(2/π)/(4n)`.
pub fn abs_integral_mean_square(n: u64, regularize: bool) -> Result<RegularizedSum> {
    if n == 0 {
        return Err(Error::invalid("partition size must be at least 1"));
    }
    let n_rat = BigRational::from_integer(BigInt::from(n));
    let raw_factor = &n_rat * &n_rat / &n_rat;
    let (regularized_factor, method) = if regularize {
        let (sum, method) = assign_divergent(DivergentSeries::AllOnes)?;
        (&sum * &sum / &n_rat, method)
    } else {
        (raw_factor.clone(), RegularizationMethod::None)
    };
    let two_over_pi = 2.0 / PI;
    let to_f64 = |r: &BigRational| r.to_f64().unwrap_or(f64::NAN) * two_over_pi;
    Ok(RegularizedSum {
        n,
        raw_value: to_f64(&raw_factor),
        regularized_value: to_f64(&regularized_factor),
        method,
        raw_factor,
        regularized_factor,
    })
}

/// `E[S_n²]` including the diagonal terms `E|ΔW_i|² = 1/n` that the
/// product-of-means formula omits: `1 + (2/π)(n-1)`.
pub fn abs_integral_mean_square_with_diagonal(n: u64) -> f64 {
    1.0 + 2.0 / PI * (n as f64 - 1.0)
}

/// `S_n = Σ|ΔW_i|` for a path on the `t_i = i/n` grid.
pub fn abs_sum(p: &WienerPath) -> f64 {
    p.increments.iter().map(|dw| dw.abs()).sum()
}

/// `S_n = Σ sign(ΔW_i)`.
pub fn sign_sum(p: &WienerPath) -> f64 {
    p.increments.iter().map(|&dw| paths::sign_of(dw)).sum()
}

/// Monte Carlo estimate of `⟨S_n²⟩` for the `|dW|` sums over `paths`
/// independent paths on `t_i = i/n`.
pub fn abs_integral_mean_square_mc(n: usize, paths: u64, seed: u64, workers: usize) -> Result<MeanEstimate> {
    let dt = 1.0 / n as f64;
    let squares = paths::ensemble_map(paths, workers, |i| {
        let s = abs_sum(&paths::generate_wiener(n, dt, seed, i)?);
        Ok(s * s)
    })?;
    Ok(MeanEstimate::from_samples(&squares))
}

/// Ensemble mean and standard error of `S_n = Σ sign(ΔW_i)`.
pub fn sign_integral_stats(ensemble: &[WienerPath]) -> Result<(f64, f64)> {
    let Some(first) = ensemble.first() else {
        return Err(Error::invalid("ensemble must be nonempty"));
    };
    if let Some(p) = ensemble.iter().find(|p| p.len() != first.len()) {
        return Err(Error::LengthMismatch {
            expected: first.len(),
            actual: p.len(),
        });
    }
    let sums: Vec<f64> = ensemble.iter().map(sign_sum).collect();
    let est = MeanEstimate::from_samples(&sums);
    Ok((est.mean, est.stderr))
}

/// [`sign_integral_stats`] over generated paths without materializing them.
pub fn sign_integral_stats_mc(n: usize, paths: u64, seed: u64, workers: usize) -> Result<MeanEstimate> {
    if paths == 0 {
        return Err(Error::invalid("ensemble must be nonempty"));
    }
    let dt = 1.0 / n as f64;
    let sums = paths::ensemble_map(paths, workers, |i| {
        Ok(sign_sum(&paths::generate_wiener(n, dt, seed, i)?))
    })?;
    Ok(MeanEstimate::from_samples(&sums))
}
