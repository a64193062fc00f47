//! Complex-coefficient forward equation
//!
//! ```text
//! ∂ψ/∂t = A·∂ψ/∂x + (1-i)/4·∂/∂x[V(x,t)ψ] + D·∂²ψ/∂x²
//! ```
//!
//! on a uniform 1-D grid with zero Dirichlet boundaries, advanced by the
//! trapezoidal (Crank–Nicolson) rule with centered differences in space.
//! With `A = 0` and `D = -i/4` the operator is anti-Hermitian and each step
//! is unitary in the discrete norm `dx·Σ|ψ_j|²`.

mod tridiag;

use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest `|ψ|` tolerated at either end of a freshly sampled grid.
pub const BOUNDARY_AMPLITUDE_LIMIT: f64 = 1e-12;

/// Uniform grid on `[x_min, x_max]` with spacing `dx`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub x_min: f64,
    pub x_max: f64,
    pub dx: f64,
}

impl GridSpec {
    pub fn new(x_min: f64, x_max: f64, dx: f64) -> Result<Self> {
        let g = Self { x_min, x_max, dx };
        g.points()?;
        Ok(g)
    }

    pub fn points(&self) -> Result<usize> {
        if !(self.dx > 0.0) || !(self.x_max > self.x_min) {
            return Err(Error::invalid(format!("bad grid {self:?}")));
        }
        let n = ((self.x_max - self.x_min) / self.dx).round() as usize + 1;
        if n < 3 {
            return Err(Error::invalid("a grid needs at least 3 points"));
        }
        Ok(n)
    }

    fn coords(&self) -> Result<Vec<f64>> {
        Ok((0..self.points()?).map(|j| self.x_min + j as f64 * self.dx).collect())
    }
}

/// Snapshot of `ψ` on a uniform grid.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WaveGrid {
    pub x_min: f64,
    pub dx: f64,
    pub values: Vec<Complex64>,
    pub time: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Moments {
    pub norm: f64,
    pub mean: f64,
    pub variance: f64,
}

impl WaveGrid {
    pub fn new(x_min: f64, dx: f64, values: Vec<Complex64>, time: f64) -> Result<Self> {
        if values.len() < 3 {
            return Err(Error::invalid("a grid needs at least 3 points"));
        }
        if !(dx > 0.0) {
            return Err(Error::invalid(format!("dx must be positive, got {dx}")));
        }
        Ok(Self {
            x_min,
            dx,
            values,
            time,
        })
    }

    pub fn x(&self, j: usize) -> f64 {
        self.x_min + j as f64 * self.dx
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// `dx·Σ|ψ_j|²`.
    pub fn norm_sqr(&self) -> f64 {
        self.dx * self.values.iter().map(|z| z.norm_sqr()).sum::<f64>()
    }

    /// Discrete L² distance `sqrt(dx·Σ|ψ_j - φ_j|²)`.
    pub fn l2_distance(&self, other: &WaveGrid) -> Result<f64> {
        if self.len() != other.len() {
            return Err(Error::LengthMismatch {
                expected: self.len(),
                actual: other.len(),
            });
        }
        let ss: f64 = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| (a - b).norm_sqr())
            .sum();
        Ok((self.dx * ss).sqrt())
    }

    pub fn max_abs_difference(&self, other: &WaveGrid) -> Result<f64> {
        if self.len() != other.len() {
            return Err(Error::LengthMismatch {
                expected: self.len(),
                actual: other.len(),
            });
        }
        Ok(self
            .values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max))
    }

    pub fn boundary_amplitude(&self) -> f64 {
        self.values[0].norm().max(self.values[self.len() - 1].norm())
    }
}

/// Norm, mean and variance of `|ψ|²`. Mean and variance are those of the
/// normalized density `|ψ|²/norm`.
pub fn moments(psi: &WaveGrid) -> Result<Moments> {
    let norm = psi.norm_sqr();
    if !(norm > 0.0) {
        return Err(Error::invalid("wavefunction has zero norm"));
    }
    let weights: Vec<f64> = psi.values.iter().map(|z| z.norm_sqr() * psi.dx / norm).collect();
    let mean: f64 = weights.iter().enumerate().map(|(j, w)| w * psi.x(j)).sum();
    let variance: f64 = weights
        .iter()
        .enumerate()
        .map(|(j, w)| {
            let d = psi.x(j) - mean;
            w * d * d
        })
        .sum();
    Ok(Moments { norm, mean, variance })
}

/// `ψ(x, 0) = exp(-x²/(2Δx²)) / (πΔx²)^{1/4}` sampled on `grid`.
pub fn gaussian_packet(delta_x: f64, grid: &GridSpec) -> Result<WaveGrid> {
    analytic_free(delta_x, 0.0, grid)
}

/// Exact solution of `∂ψ/∂t = -(i/4)∂²ψ/∂x²` from [`gaussian_packet`] data.
///
/// For `∂ψ/∂t = c·∂²ψ/∂x²` a Gaussian `exp(-x²/(2s))` stays Gaussian with
/// complex width `s(t) = s₀ + 2ct`; here `s(t) = Δx² - i·t/2` and
/// `ψ(x,t) = (πΔx²)^{-1/4}·sqrt(Δx²/s(t))·exp(-x²/(2s(t)))`. Hence
/// `|ψ|²` is Normal with variance `Δx²/2 + t²/(8Δx²)`.
pub fn analytic_free(delta_x: f64, t: f64, grid: &GridSpec) -> Result<WaveGrid> {
    if !(delta_x > 0.0) {
        return Err(Error::invalid(format!("delta_x must be positive, got {delta_x}")));
    }
    let s0 = delta_x * delta_x;
    let width = Complex64::new(s0, -0.5 * t);
    let amplitude = (Complex64::new(s0, 0.0) / width).sqrt() * (PI * s0).powf(-0.25);
    let values: Vec<Complex64> = grid
        .coords()?
        .into_iter()
        .map(|x| amplitude * (-(x * x) / (2.0 * width)).exp())
        .collect();
    let psi = WaveGrid::new(grid.x_min, grid.dx, values, t)?;
    let amplitude = psi.boundary_amplitude();
    if amplitude >= BOUNDARY_AMPLITUDE_LIMIT {
        return Err(Error::GridTooNarrow {
            amplitude,
            limit: BOUNDARY_AMPLITUDE_LIMIT,
        });
    }
    Ok(psi)
}

/// Position variance of `|ψ|²` for [`analytic_free`].
pub fn analytic_free_variance(delta_x: f64, t: f64) -> f64 {
    let s0 = delta_x * delta_x;
    s0 / 2.0 + t * t / (8.0 * s0)
}

/// Which pair of constant coefficients is used for the free equation.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CoefficientConvention {
    /// `A = -(1+i)/4 + β(1-i)/2`, `D = -i/4`, as the equation is printed.
    #[default]
    Printed,
    /// `A = μ = -(1+i)/2 + β(1-i)/2`, `D = σ²/2 = -i/8`, read off the
    /// stated process moments.
    MomentDerived,
}

impl CoefficientConvention {
    fn base_drift(self) -> Complex64 {
        match self {
            CoefficientConvention::Printed => Complex64::new(-0.25, -0.25),
            CoefficientConvention::MomentDerived => Complex64::new(-0.5, -0.5),
        }
    }

    fn diffusion(self) -> Complex64 {
        match self {
            CoefficientConvention::Printed => Complex64::new(0.0, -0.25),
            CoefficientConvention::MomentDerived => Complex64::new(0.0, -0.125),
        }
    }
}

/// Coefficient of `β` in the drift, `(1-i)/2`.
const BETA_WEIGHT: Complex64 = Complex64::new(0.5, -0.5);
/// Coefficient of the divergence-form potential term, `(1-i)/4`.
pub const POTENTIAL_WEIGHT: Complex64 = Complex64::new(0.25, -0.25);

/// `β` that cancels the drift of the printed free equation, `i/2`.
pub fn schrodinger_beta() -> Complex64 {
    schrodinger_beta_for(CoefficientConvention::Printed)
}

pub fn schrodinger_beta_for(convention: CoefficientConvention) -> Complex64 {
    -convention.base_drift() / BETA_WEIGHT
}

pub type PotentialFn = Arc<dyn Fn(f64, f64) -> f64 + Send + Sync>;

#[derive(Clone)]
pub struct EvolutionCoefficients {
    /// First-derivative coefficient `A`.
    pub drift: Complex64,
    /// Second-derivative coefficient `D`.
    pub diffusion: Complex64,
    /// `V(x, t)` of the divergence-form term, if any.
    pub potential: Option<PotentialFn>,
}

impl fmt::Debug for EvolutionCoefficients {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("EvolutionCoefficients")
            .field("drift", &self.drift)
            .field("diffusion", &self.diffusion)
            .field("potential", &self.potential.as_ref().map(|_| "<fn>"))
            .finish()
    }
}

impl EvolutionCoefficients {
    pub fn free(beta: Complex64) -> Self {
        Self::free_with(beta, CoefficientConvention::Printed)
    }

    pub fn free_with(beta: Complex64, convention: CoefficientConvention) -> Self {
        Self {
            drift: convention.base_drift() + beta * BETA_WEIGHT,
            diffusion: convention.diffusion(),
            potential: None,
        }
    }

    /// `A = -(1+i)/4`, `D = -i/4` with the potential term switched on.
    pub fn interacting(potential: PotentialFn) -> Self {
        Self {
            drift: CoefficientConvention::Printed.base_drift(),
            diffusion: CoefficientConvention::Printed.diffusion(),
            potential: Some(potential),
        }
    }

    fn potential_on(&self, xs: &[f64], t: f64, out: &mut [f64]) {
        match &self.potential {
            Some(v) => xs.iter().zip(out.iter_mut()).for_each(|(x, o)| *o = v(*x, t)),
            None => out.fill(0.0),
        }
    }
}

/// Interior rows of the discretized operator: `(lower, diag, upper)` such that
/// `(Lψ)_j = lower_j·ψ_{j-1} + diag_j·ψ_j + upper_j·ψ_{j+1}`.
struct Stencil {
    lower: Vec<Complex64>,
    diag: Vec<Complex64>,
    upper: Vec<Complex64>,
}

impl Stencil {
    fn new(interior: usize) -> Self {
        let zero = Complex64::new(0.0, 0.0);
        Self {
            lower: vec![zero; interior],
            diag: vec![zero; interior],
            upper: vec![zero; interior],
        }
    }

    fn fill(&mut self, c: &EvolutionCoefficients, dx: f64, potential: &[f64]) {
        let second = c.diffusion / (dx * dx);
        let first = c.drift / (2.0 * dx);
        let pot = POTENTIAL_WEIGHT / (2.0 * dx);
        for i in 0..self.diag.len() {
            // grid index j = i + 1
            self.lower[i] = second - first - pot * potential[i];
            self.diag[i] = second * -2.0;
            self.upper[i] = second + first + pot * potential[i + 2];
        }
    }
}

/// Advances `psi` by `steps` trapezoidal steps of size `dt`.
pub fn evolve(psi: &WaveGrid, c: &EvolutionCoefficients, dt: f64, steps: usize) -> Result<WaveGrid> {
    if !(dt > 0.0) {
        return Err(Error::invalid(format!("dt must be positive, got {dt}")));
    }
    let n = psi.len();
    if n < 3 {
        return Err(Error::invalid("a grid needs at least 3 points"));
    }
    let interior = n - 2;
    let xs: Vec<f64> = (0..n).map(|j| psi.x(j)).collect();
    let half = 0.5 * dt;
    let one = Complex64::new(1.0, 0.0);

    let mut values = psi.values.clone();
    values[0] = Complex64::new(0.0, 0.0);
    values[n - 1] = Complex64::new(0.0, 0.0);

    let mut pot = vec![0.0; n];
    let mut explicit = Stencil::new(interior);
    let mut implicit = Stencil::new(interior);
    let mut lhs_lower = vec![one; interior];
    let mut lhs_diag = vec![one; interior];
    let mut lhs_upper = vec![one; interior];
    let mut rhs = vec![Complex64::new(0.0, 0.0); interior];
    let mut scratch = Vec::with_capacity(interior);

    c.potential_on(&xs, psi.time, &mut pot);
    implicit.fill(c, psi.dx, &pot);

    for step in 0..steps {
        let t = psi.time + step as f64 * dt;
        std::mem::swap(&mut explicit, &mut implicit);
        if c.potential.is_some() {
            c.potential_on(&xs, t + dt, &mut pot);
        }
        implicit.fill(c, psi.dx, &pot);

        for i in 0..interior {
            let j = i + 1;
            let l_psi =
                explicit.lower[i] * values[j - 1] + explicit.diag[i] * values[j] + explicit.upper[i] * values[j + 1];
            rhs[i] = values[j] + l_psi * half;
            lhs_lower[i] = -implicit.lower[i] * half;
            lhs_diag[i] = one - implicit.diag[i] * half;
            lhs_upper[i] = -implicit.upper[i] * half;
        }
        tridiag::solve_in_place(&lhs_lower, &lhs_diag, &lhs_upper, &mut rhs, &mut scratch);
        if rhs.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NumericalBlowup { step: step + 1 });
        }
        values[1..n - 1].copy_from_slice(&rhs);
    }

    Ok(WaveGrid {
        x_min: psi.x_min,
        dx: psi.dx,
        values,
        time: psi.time + steps as f64 * dt,
    })
}

/// Least-squares quadratic `a + b·t + c·t²` through `(t, y)` samples.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct QuadraticFit {
    pub coefficients: [f64; 3],
    /// `‖y - fit‖ / ‖y‖`.
    pub relative_residual: f64,
}

pub fn fit_quadratic(ts: &[f64], ys: &[f64]) -> Result<QuadraticFit> {
    if ts.len() != ys.len() {
        return Err(Error::LengthMismatch {
            expected: ts.len(),
            actual: ys.len(),
        });
    }
    if ts.len() < 3 {
        return Err(Error::invalid("a quadratic fit needs at least 3 samples"));
    }
    let design = DMatrix::from_fn(ts.len(), 3, |r, c| ts[r].powi(c as i32));
    let y = DVector::from_column_slice(ys);
    let coef = design
        .clone()
        .svd(true, true)
        .solve(&y, 1e-14)
        .map_err(|e| Error::invalid(format!("quadratic fit failed: {e}")))?;
    let residual = (&design * &coef - &y).norm() / y.norm();
    Ok(QuadraticFit {
        coefficients: [coef[0], coef[1], coef[2]],
        relative_residual: residual,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grid() -> GridSpec {
        GridSpec::new(-20.0, 20.0, 0.05).unwrap()
    }

    #[test]
    fn packet_normalization_and_peak() {
        let psi = gaussian_packet(1.0, &grid()).unwrap();
        assert_eq!(psi.len(), 801);
        let m = moments(&psi).unwrap();
        assert!((m.norm - 1.0).abs() < 1e-8);
        assert!(m.mean.abs() < 1e-12);
        assert!((m.variance - 0.5).abs() < 1e-8);
        let centre = psi.values[400];
        assert!((centre.re - PI.powf(-0.25)).abs() < 1e-15 && centre.im == 0.0);

        let narrow = gaussian_packet(0.5, &grid()).unwrap();
        assert!((narrow.values[400].re - (PI * 0.25).powf(-0.25)).abs() < 1e-15);
        assert!((moments(&narrow).unwrap().variance - 0.125).abs() < 1e-8);
    }

    #[test]
    fn narrow_grid_is_rejected() {
        let g = GridSpec::new(-3.0, 3.0, 0.05).unwrap();
        assert!(matches!(gaussian_packet(1.0, &g), Err(Error::GridTooNarrow { .. })));
        assert!(gaussian_packet(0.0, &grid()).is_err());
        assert!(GridSpec::new(0.0, 0.05, 0.05).is_err());
    }

    #[test]
    fn beta_cancels_printed_drift() {
        let beta = schrodinger_beta();
        assert_eq!(beta, Complex64::new(0.0, 0.5));
        assert_eq!(EvolutionCoefficients::free(beta).drift, Complex64::new(0.0, 0.0));
        assert_eq!(
            EvolutionCoefficients::free(Complex64::new(0.0, 0.0)).drift,
            Complex64::new(-0.25, -0.25)
        );
        let alt = schrodinger_beta_for(CoefficientConvention::MomentDerived);
        assert!((alt - Complex64::new(0.0, 1.0)).norm() < 1e-15);
        assert_eq!(EvolutionCoefficients::free(beta).diffusion, Complex64::new(0.0, -0.25));
    }

    #[test]
    fn translation_shifts_mean_by_dx() {
        let psi = gaussian_packet(1.0, &grid()).unwrap();
        let mut shifted = psi.clone();
        shifted.values.rotate_right(1);
        let (a, b) = (moments(&psi).unwrap(), moments(&shifted).unwrap());
        assert!((b.mean - a.mean - psi.dx).abs() < 1e-12);
        let zero = WaveGrid::new(0.0, 0.1, vec![Complex64::new(0.0, 0.0); 5], 0.0).unwrap();
        assert!(moments(&zero).is_err());
    }

    #[test]
    fn analytic_variance_matches_formula() {
        for t in [0.0, 0.5, 1.0, 2.0] {
            let psi = analytic_free(1.0, t, &grid()).unwrap();
            let m = moments(&psi).unwrap();
            assert!((m.norm - 1.0).abs() < 1e-8, "t={t}");
            assert!((m.variance - analytic_free_variance(1.0, t)).abs() < 1e-8, "t={t}");
        }
        assert_eq!(
            analytic_free(1.0, 0.0, &grid()).unwrap(),
            gaussian_packet(1.0, &grid()).unwrap()
        );
    }

    #[test]
    fn zero_potential_matches_free_bitwise() {
        let psi = gaussian_packet(1.0, &grid()).unwrap();
        let free = evolve(&psi, &EvolutionCoefficients::free(Complex64::new(0.0, 0.0)), 1e-3, 50).unwrap();
        let zero: PotentialFn = Arc::new(|_, _| 0.0);
        let inter = evolve(&psi, &EvolutionCoefficients::interacting(zero), 1e-3, 50).unwrap();
        assert_eq!(free.values, inter.values);
    }

    #[test]
    fn blowup_is_reported() {
        let psi = gaussian_packet(1.0, &grid()).unwrap();
        let bad: PotentialFn = Arc::new(|x, _| if x > 0.0 { f64::NAN } else { 0.0 });
        let err = evolve(&psi, &EvolutionCoefficients::interacting(bad), 1e-3, 5).unwrap_err();
        assert_eq!(err, Error::NumericalBlowup { step: 1 });
    }

    #[test]
    fn quadratic_fit_recovers_exact_polynomial() {
        let ts = [0.0, 0.5, 1.0, 1.5, 2.0];
        let ys: Vec<f64> = ts.iter().map(|t| 0.5 + 0.1 * t + 0.125 * t * t).collect();
        let fit = fit_quadratic(&ts, &ys).unwrap();
        assert!(fit.relative_residual < 1e-14);
        assert!((fit.coefficients[2] - 0.125).abs() < 1e-12);
        let cubic: Vec<f64> = ts.iter().map(|t| t * t * t).collect();
        assert!(fit_quadratic(&ts, &cubic).unwrap().relative_residual > 1e-3);
    }
}
