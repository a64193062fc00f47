use std::f64::consts::PI;

use serde_json::json;
use sqrtwiener_core::paths::{generate_wiener, power_variation};
use sqrtwiener_core::sqrt_process::residual_ensemble;
use sqrtwiener_core::stats::{log_log_slope, MeanEstimate};
use sqrtwiener_core::Complex64;

use super::{params_map, stream_seed};
use crate::config::{RunConfig, VariationParams};
use crate::report::{Check, SuiteOutput, Table};

const SLOPE_LADDER: [usize; 4] = [1_000, 10_000, 100_000, 1_000_000];

pub fn run(p: &VariationParams, cfg: &RunConfig) -> anyhow::Result<SuiteOutput> {
    let mut out = SuiteOutput {
        params: params_map(p),
        ..Default::default()
    };
    let seed = stream_seed(cfg.seed, 3);

    let w = generate_wiener(p.n, 1.0 / p.n as f64, seed, 0)?;
    let qv = power_variation(&w, 2.0)?;
    out.checks.push(Check::close(
        "quadratic_variation",
        qv,
        1.0,
        3.0 * (2.0 / p.n as f64).sqrt(),
    ));

    let mut table = Table::new("power_variation", &["n", "alpha1", "alpha2", "alpha3"]);
    let (mut v1, mut v3) = (Vec::new(), Vec::new());
    for (i, &n) in SLOPE_LADDER.iter().enumerate() {
        let w = generate_wiener(n, 1.0 / n as f64, seed, 1 + i as u64)?;
        let row = [
            power_variation(&w, 1.0)?,
            power_variation(&w, 2.0)?,
            power_variation(&w, 3.0)?,
        ];
        v1.push(row[0]);
        v3.push(row[2]);
        table.push(vec![json!(n), json!(row[0]), json!(row[1]), json!(row[2])]);
    }
    let ns = SLOPE_LADDER.map(|n| n as f64);
    out.checks.push(Check::close(
        "power_variation_alpha3_slope",
        log_log_slope(&ns, &v3),
        -0.5,
        0.1,
    ));
    out.checks.push(Check::close(
        "power_variation_alpha1_slope",
        log_log_slope(&ns, &v1),
        0.5,
        0.1,
    ));
    out.tables.push(table);

    for (i, dt) in [1.0 / p.n as f64, 0.01, 1.0].into_iter().enumerate() {
        let abs: Vec<f64> = if i == 0 {
            w.increments.iter().map(|x| x.abs()).collect()
        } else {
            generate_wiener(p.n, dt, seed, 10 + i as u64)?
                .increments
                .iter()
                .map(|x| x.abs())
                .collect()
        };
        let est = MeanEstimate::from_samples(&abs);
        let expected = (2.0 * dt / PI).sqrt();
        out.checks.push(Check::new(
            format!("abs_increment_mean_dt{dt:e}"),
            est.within(expected, 4.0),
            est.mean,
            expected,
            4.0 * est.stderr,
        ));
    }

    let zero = Complex64::new(0.0, 0.0);
    let mut table = Table::new("residual", &["n", "mean", "stderr", "rms", "expected_rms"]);
    let mut rms = Vec::new();
    for (i, n) in [p.residual_n, 4 * p.residual_n, 10 * p.residual_n]
        .into_iter()
        .enumerate()
    {
        let ens = residual_ensemble(n, 1.0, zero, p.paths, stream_seed(cfg.seed, 4 + i as u64), cfg.workers)?;
        let expected_rms = (2.0 / n as f64).sqrt();
        out.checks.push(Check::new(
            format!("residual_mean_n{n}"),
            ens.real.within(0.0, 4.0) && ens.imag.mean == 0.0,
            ens.real.mean,
            0.0,
            4.0 * ens.real.stderr,
        ));
        out.checks.push(Check::close(
            format!("residual_rms_n{n}"),
            ens.rms,
            expected_rms,
            0.1 * expected_rms,
        ));
        table.push(vec![
            json!(n),
            json!(ens.real.mean),
            json!(ens.real.stderr),
            json!(ens.rms),
            json!(expected_rms),
        ]);
        rms.push(ens.rms);
    }
    out.checks
        .push(Check::close("residual_rms_ratio_4x", rms[1] / rms[0], 0.5, 0.15));
    out.tables.push(table);
    Ok(out)
}
