use std::fs;
use std::io::Write;
use std::path::Path;

use rayon::prelude::*;
use serde_json::{json, Value};

use cfl_core::certificates::{
    check_complex_condition, check_real_condition, check_relation, generate_cb_config, generate_cb_config_complex,
    main_theorem_pipeline, verify_holder, verify_nonsos_example, CayleyBacharachConfig, ConditionCheck, ConfigKind,
};
use cfl_core::cones::{convexity_scan, is_sos_convex_with, is_sos_with, random_convex_form, Verdict};
use cfl_core::form::{laplacian_integral_sides, qp_integral_sides, random_integer_form};
use cfl_core::gcs::{
    build_p_d_even, build_q_d, catalan, compute, compute_a_star, verify_a4_minpoly, verify_exact_decompositions,
    verify_prop_complex_cs, verify_q_d, Which,
};
use cfl_core::report::{Check, Report};
use cfl_core::{tolerances, AnyForm, Error};

use crate::report::{file_digest, RunReport};
use crate::CliError;

/// Published values of `A_d*`, `d = 1..8`, to three decimals.
pub const TABLE1: [f64; 8] = [1.000, 1.000, 1.000, 1.011, 1.000, 1.061, 1.000, 1.048];
const TABLE1_TOL: f64 = 1e-3;

pub struct Ctx {
    pub sdp_tol: f64,
    pub grid: usize,
    pub seed: u64,
}

impl Ctx {
    fn inputs(&self, extra: Value) -> Value {
        json!({ "sdpTol": self.sdp_tol, "grid": self.grid, "seed": self.seed, "args": extra })
    }
}

fn read(path: &Path) -> Result<Vec<u8>, CliError> {
    fs::read(path).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))
}

fn load_form(path: &Path) -> Result<(AnyForm, String), CliError> {
    let bytes = read(path)?;
    let text = String::from_utf8(bytes.clone()).map_err(|e| CliError::Usage(e.to_string()))?;
    Ok((AnyForm::from_json_str(&text)?, file_digest(&bytes)))
}

fn gcs_report(r: &mut RunReport, ctx: &Ctx, d: u32, which: Which) -> Result<Value, CliError> {
    let g = compute(d, which, ctx.sdp_tol)?;
    r.extend(Report { checks: g.cross_checks.clone() });
    Ok(serde_json::to_value(&g).expect("serializes"))
}

pub fn gcs_constant(ctx: &Ctx, d: u32, which: Which) -> Result<RunReport, CliError> {
    let mut r = RunReport::new("gcs-constant", &ctx.inputs(json!({ "d": d, "which": which })));
    r.data = gcs_report(&mut r, ctx, d, which)?;
    Ok(r)
}

pub fn reproduce_table1(ctx: &Ctx, max_d: u32) -> Result<RunReport, CliError> {
    if !(1..=8).contains(&max_d) {
        return Err(CliError::Usage(format!("--max-d must be in 1..=8, got {max_d}")));
    }
    let mut r = RunReport::new("reproduce-table1", &ctx.inputs(json!({ "maxD": max_d })));
    let results: Vec<_> = (1..=max_d).into_par_iter().map(|d| compute_a_star(d, ctx.sdp_tol)).collect();
    let mut rows = Vec::new();
    for (d, g) in (1..=max_d).zip(results) {
        let g = g?;
        let table = TABLE1[d as usize - 1];
        r.push(Check::within(format!("d={d}: matches table"), (g.value - table).abs(), TABLE1_TOL));
        r.extend_prefixed(&format!("d={d}: "), Report { checks: g.cross_checks.clone() });
        rows.push(json!({ "d": d, "value": g.value, "table": table, "sdpGap": g.sdp_gap }));
    }
    r.data = json!({ "rows": rows });
    Ok(r)
}

/// The identity battery, one group per entry; groups run in parallel.
fn identity_groups(ctx: &Ctx) -> Result<Vec<(String, Report)>, CliError> {
    type Group<'a> = Box<dyn Fn() -> Result<Report, Error> + Send + Sync + 'a>;
    let seed = ctx.seed;
    let grid = ctx.grid;
    let tol = ctx.sdp_tol;
    let mut groups: Vec<(String, Group)> = vec![
        ("decompositions: ".into(), Box::new(|| Ok(verify_exact_decompositions()))),
        ("holder: ".into(), Box::new(move || Ok(verify_holder(500, seed)))),
        ("a4: ".into(), Box::new(move || {
            let g = compute_a_star(4, tol)?;
            let c = verify_a4_minpoly(g.value);
            let mut rep = Report::new();
            rep.push(Check::within("minimal polynomial at A_4*", c.residual, 1e-6));
            rep.push(Check::within("closed form vs root", c.closed_form_vs_root, 1e-8));
            rep.push(Check::within("closed form imaginary part", c.closed_form_imag.abs(), 1e-10));
            Ok(rep)
        })),
        ("disk identities: ".into(), Box::new(move || Ok(disk_identities(100, seed)))),
    ];
    for d in 1..=6u32 {
        groups.push((String::new(), Box::new(move || Ok(verify_prop_complex_cs(d, 1000, seed + d as u64)))));
        groups.push((String::new(), Box::new(move || verify_q_d(d))));
    }
    for d in [4u32, 6, 8] {
        groups.push((String::new(), Box::new(move || Ok(witness(d, grid)))));
    }
    groups
        .par_iter()
        .map(|(name, f)| Ok((name.clone(), f()?)))
        .collect::<Result<Vec<_>, Error>>()
        .map_err(CliError::from)
}

fn witness(d: u32, grid: usize) -> Report {
    let mut rep = Report::new();
    match build_p_d_even(d, grid) {
        Ok(w) => {
            let excess = w.biform_e1e2 - 1.0;
            rep.push(Check::new(format!("p_{d} convex"), true, w.certificate.residual));
            rep.push(Check::new(format!("p_{d} excess above 1e-6"), excess > 1e-6, excess));
            rep.push(Check::new(format!("p_{d} ratio above 1"), w.ratio() > 1.0, w.ratio()));
        }
        Err(e) => rep.push(Check::new(format!("p_{d} convex ({e})"), false, f64::INFINITY)),
    }
    rep
}

/// Exact checks of the two disk-integral identities on random integer forms.
pub fn disk_identities(count: usize, seed: u64) -> Report {
    let mut qp_ok = true;
    let mut lap_ok = true;
    for i in 0..count as u64 {
        let k = 2 * (1 + (i % 4) as u32);
        let p = random_integer_form(2, k, 9, seed.wrapping_add(i));
        let (l, r) = qp_integral_sides(&p).expect("bivariate even degree");
        qp_ok &= l == r;
        let p = random_integer_form(2, 1 + (i % 8) as u32, 9, seed.wrapping_add(1000 + i));
        let (l, r) = laplacian_integral_sides(&p).expect("bivariate");
        lap_ok &= l == r;
    }
    let mut rep = Report::new();
    rep.push(Check::new("hermitian biform equals disk integral", qp_ok, 0.0));
    rep.push(Check::new("laplacian scales disk integral by k(k+2)", lap_ok, 0.0));
    rep
}

pub fn verify_identities(ctx: &Ctx) -> Result<RunReport, CliError> {
    let mut r = RunReport::new("verify-identities", &ctx.inputs(Value::Null));
    for (prefix, rep) in identity_groups(ctx)? {
        r.extend_prefixed(&prefix, rep);
    }
    Ok(r)
}

fn verdict_json(v: &Verdict, certificate_path: Option<&Path>) -> Value {
    match v {
        Verdict::Certified(c) => json!({
            "verdict": "certified",
            "minEig": c.min_eigenvalue,
            "margin": c.margin,
            "residual": c.residual,
            "certificatePath": certificate_path.map(|p| p.display().to_string()),
        }),
        Verdict::Refuted(w) => json!({
            "verdict": "refuted (numerical)",
            "minEig": Value::Null,
            "margin": w.margin,
            "certificatePath": Value::Null,
        }),
    }
}

fn write_certificate(v: &Verdict, out: Option<&Path>) -> Result<Option<&'static str>, CliError> {
    if let (Some(path), Some(cert)) = (out, v.certificate()) {
        let text = serde_json::to_string_pretty(cert).expect("serializes");
        fs::write(path, text).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?;
        return Ok(Some("written"));
    }
    Ok(None)
}

pub fn check_sos(ctx: &Ctx, form: &Path, out: Option<&Path>) -> Result<RunReport, CliError> {
    let (p, digest) = load_form(form)?;
    let mut r = RunReport::new("check-sos", &ctx.inputs(json!({ "form": digest })));
    let v = match &p {
        AnyForm::Rational(f) => is_sos_with(f, ctx.sdp_tol)?,
        AnyForm::Float(f) => is_sos_with(f, ctx.sdp_tol)?,
    };
    let written = write_certificate(&v, out)?;
    let residual = v.certificate().map_or(f64::INFINITY, |c| c.residual);
    r.push(Check::new("gram certificate", v.is_certified() && residual <= tolerances::GRAM_RESIDUAL, residual));
    r.data = verdict_json(&v, written.and(out));
    Ok(r)
}

pub fn check_convex(ctx: &Ctx, form: &Path, out: Option<&Path>) -> Result<RunReport, CliError> {
    let (p, digest) = load_form(form)?;
    let mut r = RunReport::new("check-convex", &ctx.inputs(json!({ "form": digest })));
    let (v, scan) = match &p {
        AnyForm::Rational(f) => (is_sos_convex_with(f, ctx.sdp_tol)?, convexity_scan(f, ctx.grid)),
        AnyForm::Float(f) => (is_sos_convex_with(f, ctx.sdp_tol)?, convexity_scan(f, ctx.grid)),
    };
    let written = write_certificate(&v, out)?;
    r.push(Check::new("sos-convexity certificate", v.is_certified(), v.margin()));
    r.push(Check::new("sphere scan nonnegative", scan.min_eig >= tolerances::SCAN_NEGATIVE, scan.min_eig));
    let mut data = verdict_json(&v, written.and(out));
    data["minEig"] = json!(scan.min_eig);
    data["scanArgmin"] = json!(scan.argmin);
    r.data = data;
    Ok(r)
}

fn condition_json(c: &ConditionCheck) -> Value {
    json!({ "lhs": c.lhs, "rhs": c.rhs, "pass": c.pass })
}

pub fn cb_example(ctx: &Ctx) -> Result<RunReport, CliError> {
    let mut r = RunReport::new("cb-example", &ctx.inputs(Value::Null));
    let (rep, cond) = verify_nonsos_example()?;
    r.extend(rep);
    r.push(Check::new("first requirement", cond.pass, cond.lhs - cond.rhs));
    r.data = json!({ "verdict": if cond.pass { "no certificate" } else { "not sos" }, "condition": condition_json(&cond) });
    Ok(r)
}

pub fn cb_check(ctx: &Ctx, form: &Path, config: &Path) -> Result<RunReport, CliError> {
    let (p, form_digest) = load_form(form)?;
    let bytes = read(config)?;
    let text = String::from_utf8(bytes.clone()).map_err(|e| CliError::Usage(e.to_string()))?;
    let cfg = CayleyBacharachConfig::from_json_str(&text)?;
    let inputs = ctx.inputs(json!({ "form": form_digest, "config": file_digest(&bytes) }));
    let mut r = RunReport::new("cb-check", &inputs);
    r.push(Check::within("relation residual", check_relation(&cfg)?, tolerances::RELATION));
    let name = match cfg.kind {
        ConfigKind::Real => "first requirement",
        ConfigKind::ComplexPair => "second requirement",
    };
    let cond = match (&p, cfg.kind) {
        (AnyForm::Rational(f), ConfigKind::Real) => check_real_condition(f, &cfg),
        (AnyForm::Float(f), ConfigKind::Real) => check_real_condition(f, &cfg),
        (AnyForm::Rational(f), ConfigKind::ComplexPair) => check_complex_condition(f, &cfg),
        (AnyForm::Float(f), ConfigKind::ComplexPair) => check_complex_condition(f, &cfg),
    };
    match cond {
        Ok(c) => {
            r.push(Check::new(name, c.pass, c.lhs - c.rhs));
            r.data = condition_json(&c);
        }
        Err(Error::NegativeEvaluation { index, value }) => {
            r.push(Check::new(format!("nonnegative at point {index}"), false, value));
        }
        Err(e) => return Err(e.into()),
    }
    Ok(r)
}

/// `r(θ) = (2d − 1 + cos 2dθ)^{−1/(2d)}`, the 1-level set of `q_d`.
pub fn levelset_radius(d: u32, theta: f64) -> f64 {
    let k = 2.0 * d as f64;
    (k - 1.0 + (k * theta).cos()).powf(-1.0 / k)
}

pub fn levelset_data(ctx: &Ctx, d: u32, samples: usize, sink: &mut dyn Write) -> Result<RunReport, CliError> {
    if !(1..=10).contains(&d) || samples == 0 {
        return Err(CliError::Usage(format!("need 1 ≤ d ≤ 10 and samples > 0, got d = {d}, samples = {samples}")));
    }
    let mut r = RunReport::new("levelset-data", &ctx.inputs(json!({ "d": d, "samples": samples })));
    let q = build_q_d(d).to_f64();
    let mut csv = csv::Writer::from_writer(sink);
    csv.write_record(["theta", "r", "d"]).map_err(io_error)?;
    let mut worst = 0.0f64;
    for i in 0..samples {
        let theta = 2.0 * std::f64::consts::PI * i as f64 / samples as f64;
        let rad = levelset_radius(d, theta);
        worst = worst.max((q.evaluate(&[rad * theta.cos(), rad * theta.sin()])? - 1.0).abs());
        csv.write_record([theta.to_string(), rad.to_string(), d.to_string()]).map_err(io_error)?;
    }
    csv.flush().map_err(|e| CliError::Usage(e.to_string()))?;
    r.push(Check::within("samples on the 1-level set", worst, tolerances::IDENTITY_F64));
    r.data = json!({ "d": d, "samples": samples, "bStar": catalan(d) });
    Ok(r)
}

fn io_error(e: csv::Error) -> CliError {
    CliError::Usage(e.to_string())
}

/// Every library invariant that runs in a few seconds.
pub fn selftest(ctx: &Ctx) -> Result<RunReport, CliError> {
    let mut r = RunReport::new("selftest", &ctx.inputs(Value::Null));
    for (prefix, rep) in identity_groups(ctx)? {
        r.extend_prefixed(&prefix, rep);
    }
    for d in 1..=4 {
        r.extend_prefixed(&format!("A_{d}: "), Report { checks: compute(d, Which::A, ctx.sdp_tol)?.cross_checks });
        r.extend_prefixed(&format!("B_{d}: "), Report { checks: compute(d, Which::B, ctx.sdp_tol)?.cross_checks });
    }
    let (rep, cond) = verify_nonsos_example()?;
    r.extend_prefixed("example: ", rep);
    r.push(Check::new("example: condition fails as expected", !cond.pass, cond.lhs - cond.rhs));

    let configs = (0..4u64)
        .into_par_iter()
        .flat_map(|s| vec![generate_cb_config(ctx.seed + s), generate_cb_config_complex(ctx.seed + s)])
        .collect::<Result<Vec<_>, Error>>()?;
    let worst = configs.iter().map(check_relation).collect::<Result<Vec<f64>, Error>>()?.into_iter().fold(0.0, f64::max);
    r.push(Check::within("generated configs satisfy the relation", worst, tolerances::RELATION));
    for k in 0..3u64 {
        let p = random_convex_form(4, 2, 6, ctx.seed + k);
        let out = main_theorem_pipeline(&p, 200, &configs, ctx.seed + k)?;
        r.push(Check::new(format!("pipeline on random convex quartic {k}"), out.all_pass(), out.report.worst_residual()));
    }
    Ok(r)
}
