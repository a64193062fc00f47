use std::f64::consts::PI;

use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde_json::json;
use sqrtwiener_core::binomial_map::{binom_pmf, discrete_wave_real, gaussian_local_limit_error, inner};
use sqrtwiener_core::stats::log_log_slope;

use super::params_map;
use crate::config::{MapParams, RunConfig};
use crate::report::{Check, SuiteOutput, Table};

pub fn run(p: &MapParams, _cfg: &RunConfig) -> anyhow::Result<SuiteOutput> {
    let mut out = SuiteOutput {
        params: params_map(p),
        ..Default::default()
    };

    let (mut worst_pmf, mut worst_norm) = (0.0f64, 0.0f64);
    let mut exact_sums = true;
    let mut table = Table::new("table", &["k", "pmf", "abs_psi_sq"]);
    for n in 0..=p.n_max {
        let exact = binom_pmf(n);
        exact_sums &= exact.iter().fold(BigRational::zero(), |a, b| a + b).is_one();
        let wave = discrete_wave_real(n);
        for (k, (q, z)) in exact.iter().zip(&wave.values).enumerate() {
            let pmf = q.to_f64().unwrap_or(f64::NAN);
            worst_pmf = worst_pmf.max((z.norm_sqr() - pmf).abs());
            if n == p.n_max {
                table.push(vec![json!(k), json!(pmf), json!(z.norm_sqr())]);
            }
        }
        worst_norm = worst_norm.max((inner(&wave, &wave)? - 1.0).norm());
    }
    out.checks.push(Check::new(
        "abs_psi_sq_equals_pmf",
        worst_pmf <= 1e-15,
        worst_pmf,
        0.0,
        1e-15,
    ));
    out.checks
        .push(Check::new("normalization", worst_norm <= 1e-12, worst_norm, 0.0, 1e-12));
    out.checks.push(Check::exact("exact_pmf_sums_to_one", exact_sums, true));
    out.tables.push(table);

    let mut ladder = Table::new("local_limit", &["n", "sup_error", "edgeworth_leading"]);
    let mut errs = Vec::new();
    for &n in &p.ladder {
        let e = gaussian_local_limit_error(n)?;
        let leading = (2.0 / (PI * n as f64)).sqrt() / (4.0 * n as f64);
        ladder.push(vec![json!(n), json!(e), json!(leading)]);
        errs.push(e);
    }
    out.checks.push(Check::new(
        "local_limit_decreasing",
        errs.windows(2).all(|w| w[1] < w[0]),
        &errs,
        "strictly decreasing",
        "exact",
    ));
    let ns: Vec<f64> = p.ladder.iter().map(|&n| n as f64).collect();
    out.checks
        .push(Check::close("local_limit_slope", log_log_slope(&ns, &errs), -1.5, 0.05));
    out.tables.push(ladder);
    Ok(out)
}
