//! Sampling of the complex square-root process
//!
//! ```text
//! dX = [1/2 + |dW| + (-1 + β·sign(dW))·dt]·Φ,   Φ = (1-i)/2·sign(dW) + (1+i)/2
//! ```
//!
//! and of its interacting form where `β` is replaced by `V(X, t)`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::paths::{self, IncrementDecomposition, WienerPath};
use crate::stats::{complex_mean, MeanEstimate};

/// Values of the Bernoulli phase process, each exactly `1` or `i`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PhasePath {
    pub phases: Vec<Complex64>,
}

/// `(1-i)/2·s + (1+i)/2`.
pub fn phase_of_sign(sign: f64) -> Complex64 {
    Complex64::new(0.5, -0.5) * sign + Complex64::new(0.5, 0.5)
}

pub fn phase_path(d: &IncrementDecomposition) -> PhasePath {
    PhasePath {
        phases: d.signs.iter().map(|&s| phase_of_sign(s)).collect(),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PhaseMoments {
    pub mean: Complex64,
    /// Unconjugated second central moment `(1/N)Σ(Φ - mean)²`.
    pub variance: Complex64,
    /// Standard error of the mean, `sqrt(E|Φ - mean|² / N)`.
    pub mean_stderr: f64,
    /// Standard error of the variance estimate: plug-in spread of
    /// `(Φ_k - mean)²` plus the `|variance|/N` bias of the `1/N` estimator.
    pub variance_stderr: f64,
}

pub fn phase_moments(p: &PhasePath) -> Result<PhaseMoments> {
    if p.phases.is_empty() {
        return Err(Error::invalid("phase path is empty"));
    }
    let n = p.phases.len() as f64;
    let mean = complex_mean(&p.phases);
    let centered_sq: Vec<Complex64> = p.phases.iter().map(|z| (z - mean) * (z - mean)).collect();
    let variance = complex_mean(&centered_sq);
    let abs_sq = p.phases.iter().map(|z| (z - mean).norm_sqr()).sum::<f64>() / n;
    let spread = centered_sq.iter().map(|z| (z - variance).norm_sqr()).sum::<f64>() / n;
    Ok(PhaseMoments {
        mean,
        variance,
        mean_stderr: (abs_sq / n).sqrt(),
        variance_stderr: (spread / n + variance.norm_sqr() / (n * n)).sqrt(),
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub enum DriftSource {
    Constant(Complex64),
    /// Sampled with a position- and time-dependent potential.
    Potential,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ComplexProcessPath {
    pub t0: f64,
    pub dt: f64,
    pub increments: Vec<Complex64>,
    pub drift: DriftSource,
}

impl ComplexProcessPath {
    /// `X_k = X_0 + Σ_{j<k} ΔX_j` for `k = 0..=n`.
    pub fn positions(&self, x0: Complex64) -> Vec<Complex64> {
        let mut out = Vec::with_capacity(self.increments.len() + 1);
        out.push(x0);
        let mut x = x0;
        for dx in &self.increments {
            x += dx;
            out.push(x);
        }
        out
    }
}

#[inline]
fn increment(dw: f64, dt: f64, beta: Complex64) -> Complex64 {
    let s = paths::sign_of(dw);
    let bracket = (beta * s - 1.0) * dt + (0.5 + dw.abs());
    bracket * phase_of_sign(s)
}

pub fn sample_free(w: &WienerPath, beta: Complex64) -> ComplexProcessPath {
    ComplexProcessPath {
        t0: w.t0,
        dt: w.dt,
        increments: w.increments.iter().map(|&dw| increment(dw, w.dt, beta)).collect(),
        drift: DriftSource::Constant(beta),
    }
}

/// A real potential `V(X, t)` evaluated at the complex process position.
pub trait Potential {
    fn eval(&self, x: Complex64, t: f64) -> std::result::Result<f64, String>;
}

impl<F> Potential for F
where
    F: Fn(Complex64, f64) -> std::result::Result<f64, String>,
{
    fn eval(&self, x: Complex64, t: f64) -> std::result::Result<f64, String> {
        self(x, t)
    }
}

/// Interacting sampler starting from `X_0 = 0`; see [`sample_potential_from`].
pub fn sample_potential<P: Potential + ?Sized>(w: &WienerPath, v: &P) -> Result<ComplexProcessPath> {
    sample_potential_from(w, v, Complex64::new(0.0, 0.0))
}

/// Each step uses `β = V(X_k, t_k)` evaluated before the step.
pub fn sample_potential_from<P: Potential + ?Sized>(
    w: &WienerPath,
    v: &P,
    x0: Complex64,
) -> Result<ComplexProcessPath> {
    let mut x = x0;
    let mut increments = Vec::with_capacity(w.len());
    for (k, &dw) in w.increments.iter().enumerate() {
        let t = w.time(k);
        let value = v.eval(x, t).map_err(|reason| Error::Potential {
            x: x.to_string(),
            t,
            reason,
        })?;
        let dx = increment(dw, w.dt, Complex64::new(value, 0.0));
        increments.push(dx);
        x += dx;
    }
    Ok(ComplexProcessPath {
        t0: w.t0,
        dt: w.dt,
        increments,
        drift: DriftSource::Potential,
    })
}

/// `R = Σ(ΔX_k)² - [1/4·Σ sign_k + (W(T) - W(t0)) + β·T]`.
///
/// For `β = 0` the expectation is exactly zero and `Var R ≈ 2T·dt`. For
/// `β ≠ 0` the cross term `2β|ΔW|dt` leaves a bias of order `sqrt(dt)`.
pub fn square_variation_residual(x: &ComplexProcessPath, w: &WienerPath, beta: Complex64) -> Result<Complex64> {
    if x.increments.len() != w.len() {
        return Err(Error::LengthMismatch {
            expected: w.len(),
            actual: x.increments.len(),
        });
    }
    let squares: Complex64 = x.increments.iter().map(|dx| dx * dx).sum();
    let signs: f64 = w.increments.iter().map(|&dw| paths::sign_of(dw)).sum();
    Ok(squares - (0.25 * signs + w.total() + beta * w.horizon()))
}

/// Residual statistics over `paths` generated paths with `n` steps on `[0, horizon]`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ResidualEnsemble {
    pub n: usize,
    pub paths: u64,
    /// Statistics of `Re R` (`Im R` vanishes identically for real `β`).
    pub real: MeanEstimate,
    pub imag: MeanEstimate,
    pub rms: f64,
}

pub fn residual_ensemble(
    n: usize,
    horizon: f64,
    beta: Complex64,
    paths: u64,
    seed: u64,
    workers: usize,
) -> Result<ResidualEnsemble> {
    let dt = horizon / n as f64;
    let rs = paths::ensemble_map(paths, workers, |i| {
        let w = paths::generate_wiener(n, dt, seed, i)?;
        square_variation_residual(&sample_free(&w, beta), &w, beta)
    })?;
    let re: Vec<f64> = rs.iter().map(|r| r.re).collect();
    let im: Vec<f64> = rs.iter().map(|r| r.im).collect();
    let rms = (rs.iter().map(|r| r.norm_sqr()).sum::<f64>() / rs.len() as f64).sqrt();
    Ok(ResidualEnsemble {
        n,
        paths,
        real: MeanEstimate::from_samples(&re),
        imag: MeanEstimate::from_samples(&im),
        rms,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    const I: Complex64 = Complex64::new(0.0, 1.0);
    const ONE: Complex64 = Complex64::new(1.0, 0.0);
    const ZERO: Complex64 = Complex64::new(0.0, 0.0);

    fn path(incs: Vec<f64>, dt: f64) -> WienerPath {
        WienerPath::from_increments(0.0, dt, incs).unwrap()
    }

    #[test]
    fn phase_values_are_exact() {
        assert_eq!(phase_of_sign(1.0), ONE);
        assert_eq!(phase_of_sign(-1.0), I);
        let d = IncrementDecomposition {
            signs: vec![1.0, -1.0, 1.0],
            magnitudes: vec![0.0; 3],
        };
        assert_eq!(phase_path(&d).phases, vec![ONE, I, ONE]);
        for s in [1.0, -1.0] {
            let phi = phase_of_sign(s);
            assert_eq!(phi * phi, Complex64::new(s, 0.0));
        }
    }

    #[test]
    fn degenerate_moments() {
        let m = phase_moments(&PhasePath { phases: vec![ONE; 8] }).unwrap();
        assert_eq!(m.mean, ONE);
        assert_eq!(m.variance, ZERO);
        assert!(phase_moments(&PhasePath { phases: vec![] }).is_err());
    }

    #[test]
    fn balanced_moments_are_exact() {
        let m = phase_moments(&PhasePath {
            phases: vec![ONE, I, I, ONE],
        })
        .unwrap();
        assert_eq!(m.mean, Complex64::new(0.5, 0.5));
        assert_eq!(m.variance, Complex64::new(0.0, -0.5));
    }

    #[test]
    fn free_increment_examples() {
        let x = sample_free(&path(vec![0.2, -0.2], 0.01), ZERO);
        assert!((x.increments[0] - Complex64::new(0.69, 0.0)).norm() < 1e-15);
        assert!((x.increments[1] - Complex64::new(0.0, 0.69)).norm() < 1e-15);
        let flat = sample_free(&path(vec![0.0], 1e-12), ZERO);
        assert!((flat.increments[0] - Complex64::new(0.5, 0.0)).norm() < 1e-11);
    }

    #[test]
    fn potential_reductions_are_bitwise() {
        let w = paths::generate_wiener(500, 0.002, 3, 0).unwrap();
        let zero = |_: Complex64, _: f64| Ok(0.0);
        assert_eq!(
            sample_potential(&w, &zero).unwrap().increments,
            sample_free(&w, ZERO).increments
        );
        let c = 0.731;
        let constant = move |_: Complex64, _: f64| Ok(c);
        assert_eq!(
            sample_potential(&w, &constant).unwrap().increments,
            sample_free(&w, Complex64::new(c, 0.0)).increments
        );
    }

    #[test]
    fn potential_is_evaluated_before_the_step() {
        let w = path(vec![0.1], 0.01);
        let linear = |x: Complex64, _: f64| Ok(x.re);
        let x = sample_potential(&w, &linear).unwrap();
        assert_eq!(x.increments, sample_free(&w, ZERO).increments);

        let w2 = path(vec![0.1, 0.1], 0.01);
        let x2 = sample_potential(&w2, &linear).unwrap();
        let x_after_first = x2.increments[0];
        let expected = sample_free(&path(vec![0.1], 0.01), Complex64::new(x_after_first.re, 0.0)).increments[0];
        assert_eq!(x2.increments[1], expected);
    }

    #[test]
    fn potential_failure_propagates() {
        let w = path(vec![0.1, 0.1], 0.01);
        let failing = |_: Complex64, t: f64| {
            if t > 0.0 {
                Err("out of domain".to_string())
            } else {
                Ok(1.0)
            }
        };
        assert!(matches!(sample_potential(&w, &failing), Err(Error::Potential { .. })));
    }

    #[test]
    fn single_step_residual_closed_form() {
        let w = path(vec![0.0], 0.01);
        let r = square_variation_residual(&sample_free(&w, ZERO), &w, ZERO).unwrap();
        // ΔX = 0.49; R = 0.49² - 0.25
        assert!((r - Complex64::new(-0.0099, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn residual_length_mismatch() {
        let w = path(vec![0.1, 0.2], 0.01);
        let x = sample_free(&path(vec![0.1], 0.01), ZERO);
        assert!(matches!(
            square_variation_residual(&x, &w, ZERO),
            Err(Error::LengthMismatch { .. })
        ));
    }

    #[test]
    fn positions_accumulate() {
        let x = sample_free(&path(vec![0.2, -0.2], 0.01), ZERO);
        let pos = x.positions(ZERO);
        assert_eq!(pos.len(), 3);
        assert!((pos[2] - Complex64::new(0.69, 0.69)).norm() < 1e-15);
    }
}
