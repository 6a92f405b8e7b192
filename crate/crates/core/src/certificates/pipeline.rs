use num_complex::Complex;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{check_complex_condition, check_real_condition, CayleyBacharachConfig, ConfigKind};
use crate::cones::{is_sos, GramCertificate};
use crate::error::{Error, Result};
use crate::form::Form;
use crate::gcs::gcs_property_check;
use crate::report::{Check, Report};
use crate::tolerances;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PipelineReport {
    pub report: Report,
    pub certificate: Option<GramCertificate>,
}

impl PipelineReport {
    pub fn all_pass(&self) -> bool {
        self.report.all_pass()
    }
}

/// Derives the hyperplane condition of one configuration from pointwise
/// Cauchy-Schwarz bounds.
///
/// Squaring the relation and pairing with `Q_p` gives
/// `Σ α_i α_j Q_p(v_i, v_j) = p(v1)` (or `2 Re p(z) + 2Q_p(z, z̄)`). The
/// checks are that identity, `|Q_p(v_i, v_j)| ≤ √(p(v_i) p(v_j))` for every
/// pair, `|p(z)| ≤ Q_p(z, z̄)`, and the resulting condition itself.
pub fn replay_config(p: &Form<f64>, cfg: &CayleyBacharachConfig) -> Result<Report> {
    cfg.validate()?;
    if cfg.tensor_order != 2 {
        return Err(Error::ShapeMismatch("replay covers quartic configurations".into()));
    }
    let rhs: Vec<(&[f64], f64)> = cfg.rhs().map(|(v, s)| (v, f64::from(s))).collect();
    let values = rhs.iter().map(|(v, _)| p.evaluate(v)).collect::<Result<Vec<f64>>>()?;
    let mut sum = 0.0;
    let mut scale = 1.0;
    let mut pair_excess = f64::NEG_INFINITY;
    for (i, (vi, ai)) in rhs.iter().enumerate() {
        for (j, (vj, aj)) in rhs.iter().enumerate() {
            let q = p.biform(vi, vj)?;
            sum += ai * aj * q;
            scale += q.abs();
            pair_excess = pair_excess.max(q.abs() - (values[i].max(0.0) * values[j].max(0.0)).sqrt());
        }
    }

    let mut report = Report::new();
    match cfg.kind {
        ConfigKind::Real => {
            let lhs = p.evaluate(&cfg.real_points[0])?;
            report.push(Check::within("squared relation identity", (sum - lhs).abs(), tolerances::RELATION * scale));
            report.push(Check::within("pairwise cauchy-schwarz", pair_excess.max(0.0), tolerances::SLACK));
            let cond = check_real_condition(p, cfg)?;
            report.push(Check::new("first requirement", cond.pass, (cond.lhs - cond.rhs).max(0.0)));
        }
        ConfigKind::ComplexPair => {
            let z: &[Complex<f64>] = cfg.complex_point.as_deref().expect("validated");
            let pz = p.evaluate_complex(z)?;
            let herm = p.hermitian_biform(z)?;
            let lhs = 2.0 * pz.re + 2.0 * herm;
            report.push(Check::within("squared relation identity", (sum - lhs).abs(), tolerances::RELATION * scale));
            report.push(Check::within("pairwise cauchy-schwarz", pair_excess.max(0.0), tolerances::SLACK));
            report.push(Check::within("complex cauchy-schwarz at z", (pz.norm() - herm).max(0.0), tolerances::SLACK));
            let cond = check_complex_condition(p, cfg)?;
            report.push(Check::new("second requirement", cond.pass, (cond.lhs - cond.rhs).max(0.0)));
        }
    }
    Ok(report)
}

/// Convex quaternary quartic to sos, step by step: sampled Cauchy-Schwarz
/// with unit constants, the replay on each configuration, and a Gram
/// certificate from the solver.
pub fn main_theorem_pipeline(
    p: &Form<f64>,
    samples: usize,
    configs: &[CayleyBacharachConfig],
    seed: u64,
) -> Result<PipelineReport> {
    if p.n() != 4 {
        return Err(Error::DimensionMismatch { expected: 4, got: p.n() });
    }
    if p.degree() != 4 {
        return Err(Error::DegreeMismatch { left: p.degree(), right: 4 });
    }
    let mut report = Report::new();
    for c in gcs_property_check(p, samples, 1.0, 1.0, seed)?.checks {
        report.push(Check { name: format!("gcs {}", c.name), ..c });
    }
    let replays = configs.par_iter().map(|cfg| replay_config(p, cfg)).collect::<Result<Vec<_>>>()?;
    for (k, r) in replays.into_iter().enumerate() {
        for c in r.checks {
            report.push(Check { name: format!("config {k}: {}", c.name), ..c });
        }
    }
    let certificate = is_sos(p)?.certificate().cloned();
    let (ok, residual) = match &certificate {
        Some(c) => (c.residual <= tolerances::GRAM_RESIDUAL, c.residual),
        None => (false, f64::INFINITY),
    };
    report.push(Check::new("sos certificate", ok, residual));
    Ok(PipelineReport { report, certificate })
}
