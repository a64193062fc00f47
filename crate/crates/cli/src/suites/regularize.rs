use std::f64::consts::PI;

use num_bigint::BigInt;
use num_rational::BigRational;
use serde_json::json;
use sqrtwiener_core::regularization::{
    abs_integral_mean_square, abs_integral_mean_square_mc, abs_integral_mean_square_with_diagonal, assign_divergent,
    sign_integral_stats_mc, DivergentSeries, RegularizationMethod,
};

use super::{params_map, stream_seed};
use crate::config::{RegularizeParams, RunConfig};
use crate::report::{Check, SuiteOutput, Table};

const TABLE_NS: [u64; 5] = [1, 10, 100, 1_000, 10_000];

pub fn run(p: &RegularizeParams, cfg: &RunConfig) -> anyhow::Result<SuiteOutput> {
    let mut out = SuiteOutput {
        params: params_map(p),
        ..Default::default()
    };

    let mut table = Table::new("table", &["n", "raw_value", "regularized_value", "method"]);
    let (mut raw_ok, mut reg_ok) = (0, 0);
    let mut regs = Vec::new();
    for n in TABLE_NS {
        let raw = abs_integral_mean_square(n, false)?;
        let reg = abs_integral_mean_square(n, true)?;
        let n_rat = BigRational::from_integer(BigInt::from(n));
        if raw.raw_factor == n_rat && raw.method == RegularizationMethod::None {
            raw_ok += 1;
        }
        if reg.regularized_factor == BigRational::new(1.into(), 4.into()) / &n_rat {
            reg_ok += 1;
        }
        regs.push(reg.regularized_value);
        table.push(vec![
            json!(n),
            json!(raw.raw_value),
            json!(reg.regularized_value),
            json!(reg.method.to_string()),
        ]);
    }
    out.checks.push(Check::exact("raw_formula", raw_ok, TABLE_NS.len()));
    out.checks
        .push(Check::exact("regularized_formula", reg_ok, TABLE_NS.len()));
    out.checks.push(Check::exact(
        "regularized_decreasing",
        regs.windows(2).all(|w| w[1] < w[0]),
        true,
    ));
    out.tables.push(table);

    let minus_half = BigRational::new((-1).into(), 2.into());
    for (label, series, method) in [
        ("assign_ones", DivergentSeries::AllOnes, RegularizationMethod::Zeta),
        (
            "assign_alternating",
            DivergentSeries::AlternatingUnits,
            RegularizationMethod::Abel,
        ),
    ] {
        let (v, m) = assign_divergent(series)?;
        out.checks.push(Check::new(
            label,
            v == minus_half && m == method,
            format!("{v} ({m})"),
            format!("-1/2 ({method})"),
            "exact",
        ));
    }
    out.checks.push(Check::exact(
        "harmonic_rejected",
        assign_divergent(DivergentSeries::Harmonic).is_err(),
        true,
    ));

    let est = abs_integral_mean_square_mc(p.n, p.paths, stream_seed(cfg.seed, 7), cfg.workers)?;
    let formula = 2.0 / PI * p.n as f64;
    out.checks.push(Check::new(
        "mc_matches_formula",
        est.within(formula, 4.0),
        est.mean,
        formula,
        4.0 * est.stderr,
    ));
    let exact = abs_integral_mean_square_with_diagonal(p.n as u64);
    out.checks.push(Check::new(
        "mc_matches_exact_second_moment",
        est.within(exact, 4.0),
        est.mean,
        exact,
        4.0 * est.stderr,
    ));

    let sign = sign_integral_stats_mc(p.n, p.paths, stream_seed(cfg.seed, 8), cfg.workers)?;
    out.checks.push(Check::new(
        "sign_integral_mean",
        sign.within(0.0, 4.0),
        sign.mean,
        0.0,
        4.0 * sign.stderr,
    ));
    let big_n = 10 * p.n;
    let big = sign_integral_stats_mc(big_n, p.paths, stream_seed(cfg.seed, 9), cfg.workers)?;
    let scaled = big.mean.abs() / big_n as f64;
    out.checks.push(Check::new(
        format!("sign_integral_mean_over_n_n{big_n}"),
        scaled < 1e-2,
        scaled,
        0.0,
        1e-2,
    ));
    Ok(out)
}
