//! Cone membership: sums of squares, sos-convexity and sampled convexity.

mod gram;
mod random;
mod scan;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::form::{Form, Monomial};
use crate::linalg;
use crate::scalar::Scalar;
use crate::sdp::{self, SdpStatus};
use crate::tolerances;

pub use gram::{GramCertificate, GramLayout, GramSystem};
pub use random::random_convex_form;
pub use scan::{convexity_scan, sphere_points, ScanResult};

/// Heuristic evidence against membership, taken from the solver.
///
/// Always numerical: the margin `t*` of `G − tI ⪰ 0` came out clearly
/// negative. `moment` is the dual matrix of the Gram block.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NumericalWitness {
    pub margin: f64,
    pub moment: Vec<Vec<f64>>,
    pub numerical: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum Verdict {
    Certified(GramCertificate),
    Refuted(NumericalWitness),
}

impl Verdict {
    pub fn is_certified(&self) -> bool {
        matches!(self, Verdict::Certified(_))
    }

    pub fn certificate(&self) -> Option<&GramCertificate> {
        match self {
            Verdict::Certified(c) => Some(c),
            Verdict::Refuted(_) => None,
        }
    }

    pub fn margin(&self) -> f64 {
        match self {
            Verdict::Certified(c) => c.margin,
            Verdict::Refuted(w) => w.margin,
        }
    }
}

/// Maximizes the margin of the Gram matrix and turns the answer into a
/// verdict. `scale` is the coefficient size the margin is compared against.
pub(crate) fn decide<S: Scalar>(sys: &GramSystem<S>, scale: f64, tol: f64) -> Result<Verdict> {
    let (prob, layout) = sys.to_problem(true);
    let sol = sdp::solve(&prob, tol)?;
    // A broken-down run still carries its best iterate; it may certify,
    // since the certificate is checked on its own, but never refutes.
    let trusted = match sol.status {
        SdpStatus::Optimal | SdpStatus::MaxIterations => true,
        SdpStatus::NumericalFailure => false,
        other => return Err(Error::SolverFailure(format!("Gram margin problem ended with {other:?}"))),
    };
    let margin = sys.margin_from(&layout, &sol).expect("margin requested");
    if margin.is_finite() && margin >= -tolerances::MARGIN * scale {
        let gram = sys.clipped_gram_from(&layout, &sol.y);
        let cert = GramCertificate::new(sys, gram, &sys.extras_from(&layout, &sol.y), margin)?;
        if cert.residual <= tolerances::GRAM_RESIDUAL * scale.max(1.0) {
            return Ok(Verdict::Certified(cert));
        }
    }
    if !trusted {
        return Err(Error::SolverFailure(format!("Gram margin problem ended with NumericalFailure (t = {margin:e})")));
    }
    Ok(Verdict::Refuted(NumericalWitness {
        margin,
        moment: linalg::to_rows(&sol.dual_blocks[0]),
        numerical: true,
    }))
}

/// Sum-of-squares test over the full degree-`d` monomial basis.
pub fn is_sos<S: Scalar>(p: &Form<S>) -> Result<Verdict> {
    is_sos_with(p, tolerances::SDP_TOL)
}

pub fn is_sos_with<S: Scalar>(p: &Form<S>, tol: f64) -> Result<Verdict> {
    if !p.degree().is_multiple_of(2) {
        return Err(Error::OddDegree(p.degree()));
    }
    let basis = Monomial::all_of_degree(p.n(), p.degree() / 2);
    let mut sys = GramSystem::new(basis, 0);
    sys.add_target(p)?;
    decide(&sys, p.max_abs_coeff().max(f64::MIN_POSITIVE), tol)
}

/// Monomial vector `u_a x^β`, `|β| = d − 1`, in the variables `(x, u)`.
pub fn sos_convex_basis(n: usize, degree: u32) -> Vec<Monomial> {
    let d = degree / 2;
    let mut out = Vec::new();
    for beta in Monomial::all_of_degree(n, d.saturating_sub(1)) {
        for a in 0..n {
            let mut e = beta.exponents().to_vec();
            e.extend(std::iter::repeat_n(0, n));
            e[n + a] = 1;
            out.push(Monomial::new(e));
        }
    }
    out
}

/// Gram system for `uᵀ∇²p(x)u = zᵀQz` with the `u_a x^β` basis.
pub fn sos_convex_system<S: Scalar>(p: &Form<S>) -> Result<GramSystem<S>> {
    if !p.degree().is_multiple_of(2) {
        return Err(Error::OddDegree(p.degree()));
    }
    let mut sys = GramSystem::new(sos_convex_basis(p.n(), p.degree()), 0);
    sys.add_target(&p.hessian_form())?;
    Ok(sys)
}

/// sos-convexity test. Sufficient for convexity in any dimension.
pub fn is_sos_convex<S: Scalar>(p: &Form<S>) -> Result<Verdict> {
    is_sos_convex_with(p, tolerances::SDP_TOL)
}

pub fn is_sos_convex_with<S: Scalar>(p: &Form<S>, tol: f64) -> Result<Verdict> {
    let sys = sos_convex_system(p)?;
    decide(&sys, p.max_abs_coeff().max(f64::MIN_POSITIVE), tol)
}

/// Convexity of a bivariate form, decided through sos-convexity (the two
/// coincide for `n = 2`).
pub fn is_convex_bivariate<S: Scalar>(q: &Form<S>) -> Result<Verdict> {
    is_convex_bivariate_with(q, tolerances::SDP_TOL)
}

pub fn is_convex_bivariate_with<S: Scalar>(q: &Form<S>, tol: f64) -> Result<Verdict> {
    if q.n() != 2 {
        return Err(Error::NotBivariate(q.n()));
    }
    is_sos_convex_with(q, tol)
}

/// Both convexity signals for forms where sos-convexity is only sufficient.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConvexityPair {
    pub sos_convex: Verdict,
    pub scan: ScanResult,
}

pub fn convexity_pair<S: Scalar>(p: &Form<S>, grid: usize) -> Result<ConvexityPair> {
    Ok(ConvexityPair { sos_convex: is_sos_convex(p)?, scan: convexity_scan(p, grid) })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f(n: usize, d: u32, terms: &[(&[i64], f64)]) -> Form<f64> {
        Form::make(n, d, terms.iter().map(|(e, c)| (e.to_vec(), *c))).unwrap()
    }

    #[test]
    fn sos_examples() {
        let r4 = f(2, 4, &[(&[4, 0], 1.0), (&[2, 2], 2.0), (&[0, 4], 1.0)]);
        let v = is_sos(&r4).unwrap();
        let cert = v.certificate().expect("(x²+y²)² is sos");
        assert!(cert.residual < 1e-9);
        assert!(cert.min_eigenvalue > -1e-8);
        let x2y2 = f(2, 4, &[(&[2, 2], 1.0)]);
        assert!(is_sos(&x2y2).unwrap().is_certified());
        let neg = f(2, 2, &[(&[2, 0], 1.0), (&[0, 2], -1.0)]);
        assert!(!is_sos(&neg).unwrap().is_certified());
        assert!(matches!(is_sos(&f(1, 3, &[(&[3], 1.0)])), Err(Error::OddDegree(3))));
    }

    #[test]
    fn convex_examples() {
        assert!(is_convex_bivariate(&f(2, 4, &[(&[4, 0], 1.0), (&[0, 4], 1.0)])).unwrap().is_certified());
        assert!(!is_convex_bivariate(&f(2, 4, &[(&[2, 2], 1.0)])).unwrap().is_certified());
        let q3 = f(2, 6, &[(&[6, 0], 6.0), (&[2, 4], 30.0), (&[0, 6], 4.0)]);
        assert!(is_convex_bivariate(&q3).unwrap().is_certified());
        let tri = f(3, 2, &[(&[2, 0, 0], 1.0)]);
        assert!(matches!(is_convex_bivariate(&tri), Err(Error::NotBivariate(3))));
    }

    #[test]
    fn certificate_reconstructs() {
        let p = f(2, 4, &[(&[4, 0], 2.0), (&[3, 1], 1.0), (&[2, 2], 3.0), (&[0, 4], 1.0)]);
        let cert = is_sos(&p).unwrap().certificate().cloned().unwrap();
        let back = cert.reconstruct();
        let diff = &back - &p;
        assert!(diff.max_abs_coeff() < 1e-7);
        let sum: Form<f64> = cert
            .squares()
            .iter()
            .map(|v| {
                let mut lin = Form::zero(2, 2);
                for (c, b) in v.iter().zip(&cert.basis) {
                    lin = &lin + &Form::monomial(b, *c);
                }
                lin.pow(2)
            })
            .fold(Form::zero(2, 4), |a, b| &a + &b);
        assert!((&sum - &p).max_abs_coeff() < 1e-7);
    }
}
