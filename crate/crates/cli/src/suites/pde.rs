use serde_json::json;
use sqrtwiener_core::pde::{
    analytic_free, analytic_free_variance, evolve, fit_quadratic, gaussian_packet, moments, CoefficientConvention,
    EvolutionCoefficients, GridSpec, WaveGrid,
};
use sqrtwiener_core::Error;

use super::params_map;
use crate::config::{parse_beta, parse_potential, PdeParams, RunConfig};
use crate::report::{Check, SuiteOutput, Table};

/// Time at which the free solution is compared with the closed form.
const COMPARE_AT: f64 = 1.0;

fn snapshot(name: &str, psi: &WaveGrid) -> Table {
    let mut t = Table::new(name, &["x", "re_psi", "im_psi"]);
    for (j, z) in psi.values.iter().enumerate() {
        t.push(vec![json!(psi.x(j)), json!(z.re), json!(z.im)]);
    }
    t
}

fn steps_for(span: f64, dt: f64) -> usize {
    (span / dt).round().max(1.0) as usize
}

fn blowup_check(step: usize) -> Check {
    Check::new(
        "evolution_finite",
        false,
        format!("non-finite at step {step}"),
        "finite",
        "exact",
    )
}

pub fn run(p: &PdeParams, _cfg: &RunConfig) -> anyhow::Result<SuiteOutput> {
    let mut out = SuiteOutput {
        params: params_map(p),
        ..Default::default()
    };
    let convention: CoefficientConvention = p.convention.into();
    let beta = parse_beta(&p.beta, convention)?;
    let mut coeffs = EvolutionCoefficients::free_with(beta, convention);
    coeffs.potential = parse_potential(&p.potential)?;
    let grid = GridSpec::new(p.x_min, p.x_max, p.dx)?;
    let psi0 = gaussian_packet(p.delta_x, &grid)?;

    let mut series = Table::new("moments", &["t", "norm", "mean", "variance"]);
    let mut push = |psi: &WaveGrid, ts: &mut Vec<f64>, vs: &mut Vec<f64>| -> anyhow::Result<()> {
        let m = moments(psi)?;
        series.push(vec![json!(psi.time), json!(m.norm), json!(m.mean), json!(m.variance)]);
        ts.push(psi.time);
        vs.push(m.variance);
        Ok(())
    };
    let (mut ts, mut vs) = (Vec::new(), Vec::new());
    push(&psi0, &mut ts, &mut vs)?;
    let per_sample = steps_for(p.sample_every, p.dt);
    let samples = steps_for(p.t_end, p.dt * per_sample as f64);
    let mut psi = psi0.clone();
    for _ in 0..samples {
        psi = match evolve(&psi, &coeffs, p.dt, per_sample) {
            Ok(next) => next,
            Err(Error::NumericalBlowup { step }) => {
                out.checks.push(blowup_check(step));
                out.tables.push(series);
                return Ok(out);
            }
            Err(e) => return Err(e.into()),
        };
        push(&psi, &mut ts, &mut vs)?;
    }
    out.tables.push(series);
    out.tables.push(snapshot("psi_initial", &psi0));
    out.tables.push(snapshot("psi_final", &psi));
    out.checks.push(Check::exact("evolution_finite", true, true));

    let schrodinger =
        coeffs.drift.norm() < 1e-15 && coeffs.potential.is_none() && convention == CoefficientConvention::Printed;
    if !schrodinger {
        return Ok(out);
    }

    let steps = steps_for(COMPARE_AT, p.dt);
    let at_one = evolve(&psi0, &coeffs, p.dt, steps)?;
    let exact = analytic_free(p.delta_x, at_one.time, &grid)?;
    let err = at_one.l2_distance(&exact)?;
    out.checks
        .push(Check::new("l2_error_vs_analytic", err <= 1e-3, err, 0.0, 1e-3));
    let drift = (at_one.norm_sqr() - psi0.norm_sqr()).abs();
    out.checks
        .push(Check::new("norm_drift", drift <= 1e-8, drift, 0.0, 1e-8));

    let fine_grid = GridSpec::new(p.x_min, p.x_max, p.dx / 2.0)?;
    let fine0 = gaussian_packet(p.delta_x, &fine_grid)?;
    let fine = evolve(&fine0, &coeffs, p.dt / 2.0, 2 * steps)?;
    let fine_err = fine.l2_distance(&analytic_free(p.delta_x, fine.time, &fine_grid)?)?;
    out.checks
        .push(Check::close("convergence_ratio", err / fine_err, 4.0, 0.4));

    if ts.len() >= 3 {
        let fit = fit_quadratic(&ts, &vs)?;
        let c2 = fit.coefficients[2];
        out.checks.push(Check::new(
            "variance_quadratic_fit",
            fit.relative_residual < 1e-4 && c2 > 0.0,
            json!({"relative_residual": fit.relative_residual, "c2": c2}),
            json!({"relative_residual": 0.0, "c2": 1.0 / (8.0 * p.delta_x * p.delta_x)}),
            1e-4,
        ));
    }
    let (t_last, v_last) = (ts[ts.len() - 1], vs[vs.len() - 1]);
    let v_exact = analytic_free_variance(p.delta_x, t_last);
    let rel = (v_last / v_exact - 1.0).abs();
    out.checks.push(Check::new(
        "variance_vs_analytic",
        rel < 1e-3,
        v_last,
        v_exact,
        "relative 1e-3",
    ));
    Ok(out)
}
