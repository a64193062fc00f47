use serde_json::json;
use sqrtwiener_core::paths::{decompose, generate_wiener};
use sqrtwiener_core::sqrt_process::{phase_moments, phase_path};

use super::{params_map, stream_seed};
use crate::config::{PhaseParams, RunConfig};
use crate::report::{Check, SuiteOutput};

pub fn run(p: &PhaseParams, cfg: &RunConfig) -> anyhow::Result<SuiteOutput> {
    let mut out = SuiteOutput {
        params: params_map(p),
        ..Default::default()
    };
    let w = generate_wiener(p.n, 1.0 / p.n as f64, stream_seed(cfg.seed, 2), 0)?;
    let d = decompose(&w);
    let phases = phase_path(&d);
    let m = phase_moments(&phases)?;

    let mean_err = (m.mean - num_complex::Complex64::new(0.5, 0.5)).norm();
    out.checks.push(Check::new(
        "phase_mean",
        mean_err < 4.0 * m.mean_stderr,
        [m.mean.re, m.mean.im],
        [0.5, 0.5],
        4.0 * m.mean_stderr,
    ));
    let var_err = (m.variance - num_complex::Complex64::new(0.0, -0.5)).norm();
    out.checks.push(Check::new(
        "phase_variance",
        var_err < 4.0 * m.variance_stderr,
        [m.variance.re, m.variance.im],
        [0.0, -0.5],
        4.0 * m.variance_stderr,
    ));
    let squares_ok = phases
        .phases
        .iter()
        .zip(&d.signs)
        .filter(|(z, s)| **z * **z == num_complex::Complex64::new(**s, 0.0))
        .count();
    out.checks.push(Check::new(
        "phase_square_is_sign",
        squares_ok == p.n,
        json!(squares_ok),
        json!(p.n),
        "exact",
    ));
    Ok(out)
}
