use num_traits::Zero;
use rand::Rng;
use serde_json::json;
use sqrtwiener_core::ito_algebra::{
    corollary_target, fmt_crational, parse_crational, reduce_ansatz_square, theorem_target, BasisMonomial, CRational,
    SqrtAnsatzCoefficients,
};
use sqrtwiener_core::paths::path_rng;

use super::{params_map, stream_seed};
use crate::config::{ItoParams, RunConfig};
use crate::report::{Check, SuiteOutput, Table};

fn random_mu0(rng: &mut impl Rng) -> CRational {
    loop {
        let re = sqrtwiener_core::ito_algebra::rational(rng.random_range(-20..=20), rng.random_range(1..=12));
        let im = sqrtwiener_core::ito_algebra::rational(rng.random_range(-20..=20), rng.random_range(1..=12));
        let z = CRational::new(re, im);
        if !z.is_zero() {
            return z;
        }
    }
}

pub fn run(p: &ItoParams, cfg: &RunConfig) -> anyhow::Result<SuiteOutput> {
    let mu0 = parse_crational(&p.mu0)?;
    let mut out = SuiteOutput {
        params: params_map(p),
        ..Default::default()
    };
    let mut table = Table::new("coefficients", &["mu0", "mu1", "mu2", "reduced_square"]);

    let c = SqrtAnsatzCoefficients::solved(mu0.clone())?;
    let reduced = reduce_ansatz_square(&c);
    let target = theorem_target(&mu0);
    out.checks.push(Check::new(
        "theorem",
        reduced == target,
        reduced.to_string(),
        target.to_string(),
        "exact",
    ));
    out.checks.push(Check::new(
        "coefficients",
        true,
        json!({"mu1": fmt_crational(&c.mu1), "mu2": fmt_crational(&c.mu2)}),
        json!({"mu1": "1/(2mu0)", "mu2": "-1/(8mu0^3)"}),
        "exact",
    ));
    table.push(vec![
        json!(fmt_crational(&mu0)),
        json!(fmt_crational(&c.mu1)),
        json!(fmt_crational(&c.mu2)),
        json!(reduced.to_string()),
    ]);

    let mut rng = path_rng(stream_seed(cfg.seed, 1), 0);
    let mut matched = 0;
    for _ in 0..p.samples {
        let m = random_mu0(&mut rng);
        let c = SqrtAnsatzCoefficients::solved(m.clone())?;
        let r = reduce_ansatz_square(&c);
        if r == theorem_target(&m) {
            matched += 1;
        }
        table.push(vec![
            json!(fmt_crational(&m)),
            json!(fmt_crational(&c.mu1)),
            json!(fmt_crational(&c.mu2)),
            json!(r.to_string()),
        ]);
    }
    out.checks.push(Check::exact("theorem_random_mu0", matched, p.samples));

    let inter = reduce_ansatz_square(&SqrtAnsatzCoefficients::interacting());
    let want = corollary_target();
    out.checks.push(Check::new(
        "corollary",
        inter == want,
        inter.to_string(),
        want.to_string(),
        "exact",
    ));
    let null = inter.coeff(BasisMonomial::SignDt).is_zero() && reduced.coeff(BasisMonomial::SignDt).is_zero();
    out.checks
        .push(Check::exact("sign_dt_coefficient_vanishes", null, true));

    out.tables.push(table);
    Ok(out)
}
