use std::path::PathBuf;
use std::sync::Arc;

use anyhow::{bail, Context};
use clap::{Args, ValueEnum};
use num_complex::Complex64;
use serde::Serialize;
use sqrtwiener_core::pde::{self, CoefficientConvention, PotentialFn};

/// Seed used when `--seed` is not given.
pub const DEFAULT_SEED: u64 = 20_110_627;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

/// Settings shared by every subcommand.
#[derive(Clone, Debug, Serialize)]
pub struct RunConfig {
    pub seed: u64,
    #[serde(skip)]
    pub workers: usize,
    pub output_dir: PathBuf,
    pub format: Format,
}

#[derive(Args, Clone, Debug, Serialize)]
pub struct ItoParams {
    /// Leading coefficient μ₀ as "p/q" or "re,im" rationals
    #[arg(long, default_value = "1/2", allow_hyphen_values = true)]
    pub mu0: String,
    /// Random nonzero μ₀ values checked in addition to --mu0
    #[arg(long, default_value_t = 20)]
    pub samples: usize,
}

#[derive(Args, Clone, Debug, Serialize)]
pub struct PhaseParams {
    /// Number of increments
    #[arg(long, default_value_t = 1_000_000)]
    pub n: usize,
}

#[derive(Args, Clone, Debug, Serialize)]
pub struct VariationParams {
    /// Partition size for the quadratic variation and E|dW| checks on [0, 1]
    #[arg(long, default_value_t = 1_000_000)]
    pub n: usize,
    /// Paths per residual ensemble
    #[arg(long, default_value_t = 10_000)]
    pub paths: u64,
    /// Coarse step count for the residual; the suite also runs 4x and 10x this
    #[arg(long, default_value_t = 1_000)]
    pub residual_n: usize,
}

#[derive(Args, Clone, Debug, Serialize)]
pub struct RegularizeParams {
    /// Partition size for the Monte Carlo comparisons
    #[arg(long, default_value_t = 1_000)]
    pub n: usize,
    /// Ensemble size
    #[arg(long, default_value_t = 10_000)]
    pub paths: u64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Convention {
    /// A = -(1+i)/4 + β(1-i)/2, D = -i/4
    Printed,
    /// A = -(1+i)/2 + β(1-i)/2, D = -i/8
    MomentDerived,
}

impl From<Convention> for CoefficientConvention {
    fn from(c: Convention) -> Self {
        match c {
            Convention::Printed => CoefficientConvention::Printed,
            Convention::MomentDerived => CoefficientConvention::MomentDerived,
        }
    }
}

#[derive(Args, Clone, Debug, Serialize)]
pub struct PdeParams {
    /// Drift parameter β as "re,im", or "schrodinger" for the drift-free value
    #[arg(long, default_value = "schrodinger", allow_hyphen_values = true)]
    pub beta: String,
    /// Coefficient pair of the free equation
    #[arg(long, value_enum, default_value_t = Convention::Printed)]
    pub convention: Convention,
    /// Potential: none, const:<c>, linear:<g> or harmonic:<k>
    #[arg(long, default_value = "none")]
    pub potential: String,
    #[arg(long, default_value_t = 1.0)]
    pub delta_x: f64,
    #[arg(long, default_value_t = -20.0, allow_hyphen_values = true)]
    pub x_min: f64,
    #[arg(long, default_value_t = 20.0, allow_hyphen_values = true)]
    pub x_max: f64,
    #[arg(long, default_value_t = 0.05)]
    pub dx: f64,
    #[arg(long, default_value_t = 1e-3)]
    pub dt: f64,
    /// Final time of the moment series
    #[arg(long, default_value_t = 2.0)]
    pub t_end: f64,
    /// Spacing of the moment samples
    #[arg(long, default_value_t = 0.5)]
    pub sample_every: f64,
}

#[derive(Args, Clone, Debug, Serialize)]
pub struct MapParams {
    /// Largest n for the exact normalization checks
    #[arg(long, default_value_t = 64)]
    pub n_max: u64,
    /// Comma-separated n values for the local-limit table
    #[arg(long, default_value = "16,64,256,1024", value_delimiter = ',')]
    pub ladder: Vec<u64>,
}

pub fn parse_beta(s: &str, convention: CoefficientConvention) -> anyhow::Result<Complex64> {
    if s.trim().eq_ignore_ascii_case("schrodinger") {
        return Ok(pde::schrodinger_beta_for(convention));
    }
    let (re, im) = s.split_once(',').unwrap_or((s, "0"));
    let re: f64 = re
        .trim()
        .parse()
        .with_context(|| format!("bad real part in beta {s:?}"))?;
    let im: f64 = im
        .trim()
        .parse()
        .with_context(|| format!("bad imaginary part in beta {s:?}"))?;
    if !re.is_finite() || !im.is_finite() {
        bail!("beta must be finite, got {s:?}");
    }
    Ok(Complex64::new(re, im))
}

pub fn parse_potential(s: &str) -> anyhow::Result<Option<PotentialFn>> {
    if s == "none" {
        return Ok(None);
    }
    let (kind, value) = s.split_once(':').with_context(|| format!("bad potential {s:?}"))?;
    let v: f64 = value
        .parse()
        .with_context(|| format!("bad potential parameter in {s:?}"))?;
    let f: PotentialFn = match kind {
        "const" => Arc::new(move |_, _| v),
        "linear" => Arc::new(move |x, _| v * x),
        "harmonic" => Arc::new(move |x, _| 0.5 * v * x * x),
        _ => bail!("unknown potential kind {kind:?}"),
    };
    Ok(Some(f))
}

fn positive(name: &str, v: f64) -> anyhow::Result<()> {
    if !(v > 0.0 && v.is_finite()) {
        bail!("--{name} must be positive, got {v}");
    }
    Ok(())
}

fn nonzero(name: &str, v: u64) -> anyhow::Result<()> {
    if v == 0 {
        bail!("--{name} must be at least 1");
    }
    Ok(())
}

impl ItoParams {
    pub fn validate(&self) -> anyhow::Result<()> {
        let mu0 = sqrtwiener_core::ito_algebra::parse_crational(&self.mu0)?;
        sqrtwiener_core::ito_algebra::solve_sqrt_coefficients(&mu0)?;
        Ok(())
    }
}

impl PhaseParams {
    pub fn validate(&self) -> anyhow::Result<()> {
        nonzero("n", self.n as u64)
    }
}

impl VariationParams {
    pub fn validate(&self) -> anyhow::Result<()> {
        nonzero("n", self.n as u64)?;
        nonzero("paths", self.paths)?;
        nonzero("residual-n", self.residual_n as u64)?;
        if self.paths < 2 {
            bail!("--paths must be at least 2 for a standard error");
        }
        Ok(())
    }
}

impl RegularizeParams {
    pub fn validate(&self) -> anyhow::Result<()> {
        nonzero("n", self.n as u64)?;
        if self.paths < 2 {
            bail!("--paths must be at least 2 for a standard error");
        }
        Ok(())
    }
}

impl PdeParams {
    pub fn validate(&self) -> anyhow::Result<()> {
        parse_beta(&self.beta, self.convention.into())?;
        parse_potential(&self.potential)?;
        positive("delta-x", self.delta_x)?;
        positive("dx", self.dx)?;
        positive("dt", self.dt)?;
        positive("t-end", self.t_end)?;
        positive("sample-every", self.sample_every)?;
        pde::GridSpec::new(self.x_min, self.x_max, self.dx)?;
        Ok(())
    }
}

impl MapParams {
    pub fn validate(&self) -> anyhow::Result<()> {
        if self.ladder.len() < 2 {
            bail!("--ladder needs at least two values");
        }
        if self.ladder.contains(&0) {
            bail!("--ladder values must be at least 1");
        }
        Ok(())
    }
}
