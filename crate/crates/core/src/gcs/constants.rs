//! SDP computation of the optimal constants.
//!
//! Both problems range over bivariate sos-convex forms
//! `q = Σ_i C(2d,i) s_i x^i y^{2d−i}`; the `s_i` are the entries of the
//! symmetric tensor of `q`, so `q(e1) = s_{2d}`, `q(e2) = s_0` and
//! `Q_q(e1, e2) = s_d`. The `s_i` enter the Gram system as free extras.

use num_complex::Complex;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::cones::{sos_convex_basis, GramSystem};
use crate::error::{Error, Result};
use crate::form::{Form, FormFile};
use crate::report::Check;
use crate::scalar::{binomial, factorial, Scalar};
use crate::sdp::{self, SdpStatus};
use crate::Rational;

use super::catalan;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Which {
    A,
    B,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct GcsReport {
    pub d: u32,
    pub which: Which,
    pub value: f64,
    /// `|primal − dual| / (1 + |primal| + |dual|)` at the final iterate.
    pub sdp_gap: f64,
    pub extremal_form: Option<FormFile>,
    pub cross_checks: Vec<Check>,
}

impl GcsReport {
    pub fn all_pass(&self) -> bool {
        self.cross_checks.iter().all(|c| c.pass)
    }
}

/// `(x^i y^{2d−i}, i = 0..=2d)` as rational forms.
fn monomials(d: u32) -> Vec<Form<Rational>> {
    (0..=2 * d).map(|i| Form::monomial(&[i, 2 * d - i], Rational::one())).collect()
}

/// Gram system for `uᵀ∇²q u` with the tensor entries of `q` as extras.
fn tensor_system(d: u32) -> Result<GramSystem<Rational>> {
    let mut sys = GramSystem::new(sos_convex_basis(2, 2 * d), (2 * d + 1) as usize);
    for (i, m) in monomials(d).iter().enumerate() {
        let c: Rational = binomial(2 * d, i as u32);
        sys.add_extra(i, &m.scale(&c).hessian_form())?;
    }
    Ok(sys)
}

struct Solved {
    value: f64,
    gap: f64,
    tensor: Vec<f64>,
}

fn solve_tensor_problem(d: u32, tol: f64, objective: &[f64], equality: &[f64]) -> Result<Solved> {
    let sys = tensor_system(d)?;
    let (mut prob, layout) = sys.to_problem(false);
    for (i, c) in objective.iter().enumerate() {
        prob.objective[layout.extra_index(i)] = -c;
    }
    let mut row = vec![0.0; layout.num_vars()];
    for (i, c) in equality.iter().enumerate() {
        row[layout.extra_index(i)] = *c;
    }
    prob.push_equality(&row, 1.0);
    let sol = sdp::solve(&prob, tol)?;
    if !matches!(sol.status, SdpStatus::Optimal | SdpStatus::MaxIterations) {
        return Err(Error::SolverFailure(format!("d = {d}: solver ended with {:?}", sol.status)));
    }
    let value = -sol.objective_value;
    let gap = (sol.objective_value - sol.dual_objective).abs() / (1.0 + sol.objective_value.abs() + sol.dual_objective.abs());
    Ok(Solved { value, gap, tensor: sys.extras_from(&layout, &sol.y) })
}

fn extremal(d: u32, tensor: &[f64]) -> Form<f64> {
    let terms = tensor
        .iter()
        .enumerate()
        .map(|(i, s)| (vec![i as i64, (2 * d) as i64 - i as i64], binomial::<f64>(2 * d, i as u32) * s));
    Form::make(2, 2 * d, terms).expect("valid exponents")
}

fn check_range(d: u32, max: u32) -> Result<()> {
    if d == 0 || d > max {
        return Err(Error::OutOfRange(format!("d = {d} outside 1..={max}")));
    }
    Ok(())
}

/// `A_d*`: the largest `2Q_q(e1, e2)` over sos-convex `q` with
/// `q(e1) + q(e2) = 1`.
pub fn compute_a_star(d: u32, tol: f64) -> Result<GcsReport> {
    check_range(d, 10)?;
    let n = (2 * d + 1) as usize;
    let mut objective = vec![0.0; n];
    objective[d as usize] = 2.0;
    let mut equality = vec![0.0; n];
    equality[0] = 1.0;
    equality[n - 1] = 1.0;
    let s = solve_tensor_problem(d, tol, &objective, &equality)?;
    let q = extremal(d, &s.tensor);
    let mut checks = vec![
        Check::within("value >= 1", (1.0 - s.value).max(0.0), 1e-7),
        Check::within("sdp gap", s.gap, tol),
    ];
    let saturation = (2.0 * s.tensor[d as usize] - s.value).abs();
    checks.push(Check::within("extremal form attains value", saturation, 1e-6));
    if d <= 3 {
        checks.push(Check::within("matches exact value 1", (s.value - 1.0).abs(), 1e-6));
    }
    if d == 4 {
        let a4 = super::a4_closed_form();
        checks.push(Check::within("matches closed form", (s.value - a4).abs(), 1e-6));
    }
    Ok(GcsReport {
        d,
        which: Which::A,
        value: s.value,
        sdp_gap: s.gap,
        extremal_form: Some(q.to_file()),
        cross_checks: checks,
    })
}

/// `Re (x+iy)^{2d}` coefficients and `Δ^d/(2d)!` of each monomial, exact.
fn b_line(d: u32) -> (Vec<Rational>, Vec<Rational>) {
    let z = [Complex::new(Rational::one(), Rational::zero()), Complex::new(Rational::zero(), Rational::one())];
    let mut re = Vec::new();
    let mut herm = Vec::new();
    for (i, m) in monomials(d).iter().enumerate() {
        let c: Rational = binomial(2 * d, i as u32);
        let scaled = m.scale(&c);
        re.push(scaled.evaluate_complex(&z).expect("bivariate").re);
        let lap = scaled.laplacian_power(d).expect("degree 2d");
        herm.push(lap / factorial::<Rational>(2 * d));
    }
    (re, herm)
}

/// `B_d*`: the largest `Re q(e1+ie2)` over sos-convex `q` with
/// `Q_q(e1+ie2, e1−ie2) = 1`.
pub fn compute_b_star(d: u32, tol: f64) -> Result<GcsReport> {
    check_range(d, 8)?;
    let (re, herm) = b_line(d);
    let objective: Vec<f64> = re.iter().map(Scalar::as_f64).collect();
    let equality: Vec<f64> = herm.iter().map(Scalar::as_f64).collect();
    let s = solve_tensor_problem(d, tol, &objective, &equality)?;
    let q = extremal(d, &s.tensor);
    let cat = catalan(d) as f64;
    let z = [Complex::new(1.0, 0.0), Complex::new(0.0, 1.0)];
    let re_q = q.evaluate_complex(&z)?.re;
    let herm_q = q.hermitian_biform(&z)?;
    let checks = vec![
        Check::within("value >= 1", (1.0 - s.value).max(0.0), 1e-7),
        Check::within("sdp gap", s.gap, tol),
        Check::within("catalan", (s.value - cat).abs(), 1e-6),
        Check::within("extremal saturation", (re_q - cat * herm_q).abs(), 1e-6),
    ];
    Ok(GcsReport {
        d,
        which: Which::B,
        value: s.value,
        sdp_gap: s.gap,
        extremal_form: Some(q.to_file()),
        cross_checks: checks,
    })
}

pub fn compute(d: u32, which: Which, tol: f64) -> Result<GcsReport> {
    match which {
        Which::A => compute_a_star(d, tol),
        Which::B => compute_b_star(d, tol),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn b_line_is_exact() {
        // Re (x+iy)^2 = x² − y², and Δ(x²)/2! = 1.
        let (re, herm) = b_line(1);
        let v: Vec<f64> = re.iter().map(Scalar::as_f64).collect();
        assert_eq!(v, vec![-1.0, 0.0, 1.0]);
        let h: Vec<f64> = herm.iter().map(Scalar::as_f64).collect();
        assert_eq!(h, vec![1.0, 0.0, 1.0]);
    }

    #[test]
    fn small_constants() {
        for d in 1..=3 {
            let a = compute_a_star(d, 1e-9).unwrap();
            assert!((a.value - 1.0).abs() < 1e-6, "A_{d} = {}", a.value);
            let b = compute_b_star(d, 1e-9).unwrap();
            assert!((b.value - catalan(d) as f64).abs() < 1e-6, "B_{d} = {}", b.value);
            assert!(a.all_pass() && b.all_pass(), "{a:?}\n{b:?}");
        }
    }

    #[test]
    fn out_of_range() {
        assert!(matches!(compute_a_star(0, 1e-8), Err(Error::OutOfRange(_))));
        assert!(matches!(compute_b_star(9, 1e-8), Err(Error::OutOfRange(_))));
    }
}
