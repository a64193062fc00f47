//! Acceptance suite. Each criterion recomputes its reference values here and
//! prints one PASS/FAIL line with its runtime; the process exits nonzero if
//! any criterion fails.

use std::f64::consts::PI;
use std::path::Path;
use std::process::Command;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use rand::Rng;
use serde_json::Value;
use sqrtwiener_core::binomial_map::{binom_pmf, discrete_wave_real, gaussian_local_limit_error, inner};
use sqrtwiener_core::ito_algebra::{
    reduce_ansatz_square, BasisMonomial, CRational, ItoExpr, Poly, SqrtAnsatzCoefficients,
};
use sqrtwiener_core::paths::{ensemble_map, generate_wiener, path_rng, power_variation};
use sqrtwiener_core::pde::{
    evolve, fit_quadratic, gaussian_packet, moments, schrodinger_beta, EvolutionCoefficients, GridSpec, WaveGrid,
};
use sqrtwiener_core::regularization::{abs_integral_mean_square, abs_integral_mean_square_mc, sign_integral_stats_mc};
use sqrtwiener_core::stats::{log_log_slope, MeanEstimate};
use sqrtwiener_core::Complex64;

const SEED: u64 = 42;
const WORKERS: usize = 4;

type Outcome = Result<String, String>;
type Criterion = (u32, &'static str, Duration, fn() -> Outcome);

fn ensure(ok: bool, msg: String) -> Outcome {
    if ok {
        Ok(msg)
    } else {
        Err(msg)
    }
}

fn q(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

fn c(re: BigRational, im: BigRational) -> CRational {
    CRational::new(re, im)
}

fn criterion_1() -> Outcome {
    let mut rng = path_rng(SEED, 0);
    let mut checked = 0;
    while checked < 20 {
        let mu0 = c(
            q(rng.random_range(-30..=30), rng.random_range(1..=15)),
            q(rng.random_range(-30..=30), rng.random_range(1..=15)),
        );
        if mu0.is_zero() {
            continue;
        }
        let coeffs = SqrtAnsatzCoefficients::solved(mu0.clone()).map_err(|e| e.to_string())?;
        let two = c(q(2, 1), q(0, 1));
        let eight = c(q(8, 1), q(0, 1));
        let mu1 = CRational::one() / (&two * &mu0);
        let mu2 = -(CRational::one() / (&eight * &mu0 * &mu0 * &mu0));
        if coeffs.mu1 != mu1 || coeffs.mu2 != mu2 {
            return Err(format!("solver disagrees at mu0 = {mu0}"));
        }
        let want =
            ItoExpr::term(BasisMonomial::SignDW, Poly::constant(&mu0 * &mu0)) + ItoExpr::basis(BasisMonomial::DW);
        let got = reduce_ansatz_square(&coeffs);
        if got != want {
            return Err(format!("mu0 = {mu0}: got {got}, want {want}"));
        }
        if got.monomials().count() != 2 {
            return Err(format!("residual monomials in {got}"));
        }
        checked += 1;
    }
    Ok(format!("{checked} random mu0, zero residual"))
}

fn criterion_2() -> Outcome {
    let got = reduce_ansatz_square(&SqrtAnsatzCoefficients::interacting());
    let want = ItoExpr::term(BasisMonomial::SignDW, Poly::constant(c(q(1, 4), q(0, 1))))
        + ItoExpr::basis(BasisMonomial::DW)
        + ItoExpr::term(BasisMonomial::Dt, Poly::var());
    ensure(got == want, format!("{got}"))
}

fn criterion_3() -> Outcome {
    let n = 1_000_000;
    let w = generate_wiener(n, 1.0 / n as f64, SEED, 0).map_err(|e| e.to_string())?;
    let i = Complex64::new(0.0, 1.0);
    let phases: Vec<Complex64> = w
        .increments
        .iter()
        .map(|&dw| if dw >= 0.0 { Complex64::new(1.0, 0.0) } else { i })
        .collect();
    let nf = n as f64;
    let mean = phases.iter().sum::<Complex64>() / nf;
    let sq: Vec<Complex64> = phases.iter().map(|z| (z - mean) * (z - mean)).collect();
    let var = sq.iter().sum::<Complex64>() / nf;
    let se = (sq.iter().map(|z| (z - var).norm_sqr()).sum::<f64>() / nf / nf).sqrt();
    let mean_tol = 4.0 * (2f64.sqrt() / 2.0) / nf.sqrt();
    let mean_err = (mean - Complex64::new(0.5, 0.5)).norm();
    // (Φ - mean)² is nearly the same for both outcomes, so its spread is
    // tiny and the 1/N bias of the estimator has to be counted as well.
    let var_se = (se * se + var.norm_sqr() / (nf * nf)).sqrt();
    let var_err = (var - Complex64::new(0.0, -0.5)).norm();
    ensure(
        mean_err < mean_tol && var_err < 4.0 * var_se,
        format!(
            "|mean-(1+i)/2| = {mean_err:.3e} < {mean_tol:.3e}; |var+i/2| = {var_err:.3e} < {:.3e}",
            4.0 * var_se
        ),
    )
}

fn criterion_4() -> Outcome {
    let n = 1_000_000;
    let w = generate_wiener(n, 1.0 / n as f64, SEED, 1).map_err(|e| e.to_string())?;
    let qv: f64 = w.increments.iter().map(|x| x * x).sum();
    let qv_tol = 3.0 * (2e-6f64).sqrt();
    let ladder = [1_000usize, 10_000, 100_000, 1_000_000];
    let mut v3 = Vec::new();
    for (k, &m) in ladder.iter().enumerate() {
        let p = generate_wiener(m, 1.0 / m as f64, SEED, 10 + k as u64).map_err(|e| e.to_string())?;
        v3.push(power_variation(&p, 3.0).map_err(|e| e.to_string())?);
    }
    let slope = log_log_slope(&ladder.map(|m| m as f64), &v3);
    let abs: Vec<f64> = w.increments.iter().map(|x| x.abs()).collect();
    let est = MeanEstimate::from_samples(&abs);
    let expected = (2.0 * w.dt / PI).sqrt();
    ensure(
        (qv - 1.0).abs() < qv_tol && (slope + 0.5).abs() < 0.1 && est.within(expected, 4.0),
        format!(
            "QV = {qv:.6} (tol {qv_tol:.2e}); alpha=3 slope = {slope:.4}; E|dW| = {:.4e} vs {expected:.4e} (4 SE = {:.1e})",
            est.mean,
            4.0 * est.stderr
        ),
    )
}

fn criterion_5() -> Outcome {
    let mut prev = f64::INFINITY;
    for n in [1u64, 10, 100, 1_000, 10_000] {
        let raw = abs_integral_mean_square(n, false).map_err(|e| e.to_string())?;
        let reg = abs_integral_mean_square(n, true).map_err(|e| e.to_string())?;
        if raw.raw_factor != q(n as i64, 1) {
            return Err(format!("raw factor at n={n} is {}", raw.raw_factor));
        }
        if reg.regularized_factor != q(1, 4 * n as i64) {
            return Err(format!("regularized factor at n={n} is {}", reg.regularized_factor));
        }
        let want = 2.0 / PI / (4.0 * n as f64);
        if (reg.regularized_value - want).abs() > 1e-15 * want || reg.regularized_value >= prev {
            return Err(format!("regularized value at n={n} is {}", reg.regularized_value));
        }
        prev = reg.regularized_value;
    }
    let n = 1_000;
    let mc = abs_integral_mean_square_mc(n, 10_000, SEED, WORKERS).map_err(|e| e.to_string())?;
    let formula = 2.0 / PI * n as f64;
    let sign = sign_integral_stats_mc(n, 10_000, SEED + 1, WORKERS).map_err(|e| e.to_string())?;
    ensure(
        mc.within(formula, 4.0) && sign.within(0.0, 4.0),
        format!(
            "MC <S^2> = {:.3} vs {formula:.3} (4 SE = {:.3}); sign mean = {:.4} (4 SE = {:.3})",
            mc.mean,
            4.0 * mc.stderr,
            sign.mean,
            4.0 * sign.stderr
        ),
    )
}

/// `R` for `β = 0`, recomputed from the increments.
fn residual(n: usize, seed: u64, index: u64) -> sqrtwiener_core::Result<f64> {
    let dt = 1.0 / n as f64;
    let w = generate_wiener(n, dt, seed, index)?;
    let mut squares = 0.0;
    let mut signs = 0.0;
    for &dw in &w.increments {
        let b = 0.5 + dw.abs() - dt;
        // Φ² = ±1 for Φ ∈ {1, i}
        let s = if dw >= 0.0 { 1.0 } else { -1.0 };
        squares += b * b * s;
        signs += s;
    }
    Ok(squares - (0.25 * signs + w.total()))
}

fn criterion_6() -> Outcome {
    let paths = 10_000;
    let mut rms = Vec::new();
    let mut lines = Vec::new();
    let mut ok = true;
    for (k, n) in [1_000usize, 4_000, 10_000].into_iter().enumerate() {
        let seed = SEED + 100 + k as u64;
        let rs = ensemble_map(paths, WORKERS, |i| residual(n, seed, i)).map_err(|e| e.to_string())?;
        let est = MeanEstimate::from_samples(&rs);
        rms.push(MeanEstimate::rms(&rs));
        if n != 4_000 {
            ok &= est.within(0.0, 4.0);
            lines.push(format!("n={n}: mean {:.2e} (4 SE {:.2e})", est.mean, 4.0 * est.stderr));
        }
    }
    let ratio = rms[1] / rms[0];
    ok &= (ratio - 0.5).abs() <= 0.3 * 0.5;
    lines.push(format!("RMS ratio {ratio:.4}"));
    ensure(ok, lines.join("; "))
}

/// Free Gaussian packet with complex width `Δx² - i·t/2`.
fn gaussian_oracle(grid: &GridSpec, delta_x: f64, t: f64) -> Vec<Complex64> {
    let d2 = delta_x * delta_x;
    let s = Complex64::new(d2, -t / 2.0);
    let pref = (Complex64::new(d2, 0.0) / s).sqrt() / (PI * d2).powf(0.25);
    let n = grid.points().unwrap();
    (0..n)
        .map(|j| {
            let x = grid.x_min + j as f64 * grid.dx;
            pref * (-(x * x) / (2.0 * s)).exp()
        })
        .collect()
}

fn l2(a: &WaveGrid, b: &[Complex64]) -> f64 {
    (a.values.iter().zip(b).map(|(x, y)| (x - y).norm_sqr()).sum::<f64>() * a.dx).sqrt()
}

fn cn_error(dx: f64, dt: f64) -> sqrtwiener_core::Result<(f64, f64)> {
    let grid = GridSpec::new(-20.0, 20.0, dx)?;
    let psi0 = gaussian_packet(1.0, &grid)?;
    let steps = (1.0 / dt).round() as usize;
    let psi = evolve(&psi0, &EvolutionCoefficients::free(schrodinger_beta()), dt, steps)?;
    Ok((
        l2(&psi, &gaussian_oracle(&grid, 1.0, 1.0)),
        (psi.norm_sqr() - psi0.norm_sqr()).abs(),
    ))
}

fn criterion_7() -> Outcome {
    let beta = schrodinger_beta();
    if beta != Complex64::new(0.0, 0.5) {
        return Err(format!("beta = {beta}"));
    }
    let (e1, drift) = cn_error(0.05, 1e-3).map_err(|e| e.to_string())?;
    let (e2, _) = cn_error(0.025, 5e-4).map_err(|e| e.to_string())?;
    let ratio = e1 / e2;
    ensure(
        e1 <= 1e-3 && drift <= 1e-8 && (ratio - 4.0).abs() < 0.4,
        format!("L2 error {e1:.3e}; norm drift {drift:.1e}; halving ratio {ratio:.3}"),
    )
}

fn criterion_8() -> Outcome {
    let grid = GridSpec::new(-20.0, 20.0, 0.05).map_err(|e| e.to_string())?;
    let c = EvolutionCoefficients::free(schrodinger_beta());
    let mut psi = gaussian_packet(1.0, &grid).map_err(|e| e.to_string())?;
    let ts = [0.0, 0.5, 1.0, 1.5, 2.0];
    let mut vs = vec![moments(&psi).map_err(|e| e.to_string())?.variance];
    for _ in 1..ts.len() {
        psi = evolve(&psi, &c, 1e-3, 500).map_err(|e| e.to_string())?;
        vs.push(moments(&psi).map_err(|e| e.to_string())?.variance);
    }
    let fit = fit_quadratic(&ts, &vs).map_err(|e| e.to_string())?;
    // Δx²/2 + t²/(8Δx²)
    let c2 = fit.coefficients[2];
    ensure(
        fit.relative_residual < 1e-4 && (c2 - 0.125).abs() < 1e-3,
        format!(
            "relative residual {:.2e}; t^2 coefficient {c2:.5} (1/8 expected)",
            fit.relative_residual
        ),
    )
}

fn criterion_9() -> Outcome {
    let (mut worst_norm, mut worst_pmf) = (0.0f64, 0.0f64);
    for n in 0..=64u64 {
        let wave = discrete_wave_real(n);
        let norm = inner(&wave, &wave).map_err(|e| e.to_string())?;
        worst_norm = worst_norm.max((norm - 1.0).norm());
        let total = binom_pmf(n).into_iter().fold(BigRational::zero(), |a, b| a + b);
        if !total.is_one() {
            return Err(format!("exact pmf at n={n} sums to {total}"));
        }
        // C(n,k)/2ⁿ via the multiplicative formula in f64; exact for n ≤ 64
        // up to the final rounding of each quotient.
        let mut binom = BigInt::one();
        for (k, z) in wave.values.iter().enumerate() {
            if k > 0 {
                binom = binom * BigInt::from(n - k as u64 + 1) / BigInt::from(k as u64);
            }
            let pmf = BigRational::new(binom.clone(), BigInt::one() << n as usize)
                .to_f64()
                .unwrap();
            worst_pmf = worst_pmf.max((z.norm_sqr() - pmf).abs());
        }
    }
    let errs: Vec<f64> = [16u64, 64, 256]
        .iter()
        .map(|&n| gaussian_local_limit_error(n).unwrap())
        .collect();
    ensure(
        worst_norm <= 1e-12 && worst_pmf <= 1e-15 && errs.windows(2).all(|w| w[1] < w[0]),
        format!("max norm error {worst_norm:.1e}; max pmf error {worst_pmf:.1e}; sup errors {errs:?}"),
    )
}

fn run_all(dir: &Path, workers: u32) -> Result<(), String> {
    let status = Command::new(env!("CARGO_BIN_EXE_sqrtwiener"))
        .args(["all", "--seed", "42", "--workers", &workers.to_string(), "--output-dir"])
        .arg(dir)
        .stdout(std::process::Stdio::null())
        .status()
        .map_err(|e| e.to_string())?;
    if status.code() != Some(0) {
        return Err(format!("`all --workers {workers}` exited with {status}"));
    }
    Ok(())
}

fn report_without_timing(dir: &Path) -> Result<String, String> {
    let text = std::fs::read_to_string(dir.join("all.json")).map_err(|e| e.to_string())?;
    let mut v: Value = serde_json::from_str(&text).map_err(|e| e.to_string())?;
    v.as_object_mut()
        .and_then(|m| m.remove("timing"))
        .ok_or("report has no timing block")?;
    Ok(serde_json::to_string_pretty(&v).unwrap())
}

fn tables(dir: &Path) -> Result<Vec<(String, Vec<u8>)>, String> {
    let mut out = Vec::new();
    for entry in std::fs::read_dir(dir).map_err(|e| e.to_string())? {
        let path = entry.map_err(|e| e.to_string())?.path();
        if path.extension().is_some_and(|e| e == "csv") {
            out.push((
                path.file_name().unwrap().to_string_lossy().into_owned(),
                std::fs::read(&path).unwrap(),
            ));
        }
    }
    out.sort();
    Ok(out)
}

fn criterion_10() -> Outcome {
    let root = std::env::temp_dir().join(format!("sqrtwiener-acceptance-{}", std::process::id()));
    let dir = root.join("out");
    std::fs::create_dir_all(&dir).map_err(|e| e.to_string())?;
    let result = (|| {
        run_all(&dir, 1)?;
        let (r1, t1) = (report_without_timing(&dir)?, tables(&dir)?);
        run_all(&dir, 1)?;
        let (r2, t2) = (report_without_timing(&dir)?, tables(&dir)?);
        run_all(&dir, 8)?;
        let (r3, t3) = (report_without_timing(&dir)?, tables(&dir)?);
        ensure(
            r1 == r2 && r1 == r3 && t1 == t2 && t1 == t3 && !t1.is_empty(),
            format!(
                "reports and {} tables identical over 2 runs x 1 worker and 1 run x 8 workers",
                t1.len()
            ),
        )
    })();
    let _ = std::fs::remove_dir_all(&root);
    result
}

fn main() {
    let criteria: [Criterion; 10] = [
        (1, "symbolic theorem", Duration::from_secs(1), criterion_1),
        (2, "symbolic corollary", Duration::from_secs(1), criterion_2),
        (3, "phase moments", Duration::from_secs(10), criterion_3),
        (4, "variation suite", Duration::from_secs(60), criterion_4),
        (5, "regularization", Duration::from_secs(60), criterion_5),
        (6, "square-root residual", Duration::from_secs(120), criterion_6),
        (7, "pde vs oracle", Duration::from_secs(120), criterion_7),
        (8, "quadratic spreading", Duration::from_secs(120), criterion_8),
        (9, "binomial map", Duration::from_secs(5), criterion_9),
        (10, "determinism", Duration::from_secs(300), criterion_10),
    ];
    let mut failures = 0;
    for (id, name, budget, f) in criteria {
        let start = Instant::now();
        let outcome = f();
        let elapsed = start.elapsed();
        let (ok, detail) = match outcome {
            Ok(d) if elapsed < budget => (true, d),
            Ok(d) => (false, format!("{d}; over the {budget:?} budget")),
            Err(d) => (false, d),
        };
        failures += usize::from(!ok);
        println!(
            "{} criterion {id:>2} {name} [{:.2}s < {:?}]: {detail}",
            if ok { "PASS" } else { "FAIL" },
            elapsed.as_secs_f64(),
            budget
        );
    }
    if failures > 0 {
        println!("{failures} acceptance criteria failed");
        std::process::exit(1);
    }
    println!("all 10 acceptance criteria passed");
}
