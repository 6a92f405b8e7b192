//! Linear functionals on bivariate forms, written as constant-coefficient
//! differential operators.
//!
//! `∂x`, `∂y` commute, so an operator of order `2d` is just a bivariate form
//! in the symbols `(∂x, ∂y)` and acts on a form `q` of the same degree
//! through the Fischer pairing. The dual of the cone of convex bivariate
//! forms is the conic hull of `(u·∂)²(v·∂)^{2d−2}`; an operator written as a
//! nonnegative combination of those is nonnegative on every convex form.

use num_complex::Complex;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::form::{Form, Monomial};
use crate::report::{Check, Report};
use crate::scalar::Scalar;
use crate::Rational;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum DualKind<S> {
    /// `A(∂x^{2d} + ∂y^{2d}) − 2∂x^d ∂y^d`
    EllA(S),
    /// `B(∂x² + ∂y²)^d − Re(∂x + i∂y)^{2d}`
    SB(S),
}

#[derive(Debug, Clone, PartialEq)]
pub struct DualElement<S: Scalar> {
    pub d: u32,
    pub kind: DualKind<S>,
    pub expansion: Form<S>,
}

/// `Re(x + iy)^{2d}` with exact coefficients.
pub(crate) fn re_power<S: Scalar>(d: u32) -> Form<S> {
    let z = Form::linear(&[Complex::new(S::one(), S::zero()), Complex::new(S::zero(), S::one())]);
    z.pow(2 * d).map(|c| c.re.clone())
}

/// `(x² + y²)^d`
pub(crate) fn radial<S: Scalar>(d: u32) -> Form<S> {
    Form::make(2, 2, [(vec![2, 0], S::one()), (vec![0, 2], S::one())])
        .expect("valid")
        .pow(d)
}

impl<S: Scalar> DualElement<S> {
    pub fn ell_a(d: u32, a: S) -> Self {
        let k = 2 * d;
        let expansion = Form::make(
            2,
            k,
            [
                (vec![k as i64, 0], a.clone()),
                (vec![0, k as i64], a.clone()),
                (vec![d as i64, d as i64], -(S::one() + S::one())),
            ],
        )
        .expect("valid");
        DualElement { d, kind: DualKind::EllA(a), expansion }
    }

    pub fn s_b(d: u32, b: S) -> Self {
        let expansion = &radial::<S>(d).scale(&b) - &re_power::<S>(d);
        DualElement { d, kind: DualKind::SB(b), expansion }
    }

    /// The operator applied to `q`, a scalar since degrees match.
    ///
    /// For `ℓ_A` this is `(2d)!(A(q(e1) + q(e2)) − 2Q_q(e1, e2))`, for `s_B`
    /// it is `(2d)!(B Q_q(z, z̄) − Re q(z))` with `z = e1 + i e2`.
    pub fn apply(&self, q: &Form<S>) -> Result<S> {
        self.expansion.fischer_inner(q)
    }
}

/// `weight · (u·∂)² (v·∂)^{2d−2}`, an extreme ray of the dual cone.
#[derive(Debug, Clone, PartialEq)]
pub struct Generator {
    pub weight: Rational,
    pub u: [i64; 2],
    pub v: [i64; 2],
}

impl Generator {
    pub fn new(weight: Rational, u: [i64; 2], v: [i64; 2]) -> Self {
        Generator { weight, u, v }
    }

    pub fn expand(&self, d: u32) -> Form<Rational> {
        let lin = |w: [i64; 2]| Form::linear(&[Rational::from_i64(w[0]), Rational::from_i64(w[1])]);
        let sq = lin(self.u).pow(2);
        let rest = if d >= 1 { lin(self.v).pow(2 * d - 2) } else { Form::constant(2, Rational::one()) };
        (&sq * &rest).scale(&self.weight)
    }
}

/// A claimed identity `lhs = Σ generators`.
#[derive(Debug, Clone, PartialEq)]
pub struct OperatorDecomposition {
    pub d: u32,
    pub lhs: Form<Rational>,
    pub generators: Vec<Generator>,
}

impl OperatorDecomposition {
    pub fn rhs(&self) -> Form<Rational> {
        self.generators
            .iter()
            .fold(Form::zero(2, 2 * self.d), |acc, g| &acc + &g.expand(self.d))
    }

    /// Largest coefficient of `lhs − rhs`; zero iff the identity holds.
    pub fn mismatch(&self) -> Rational {
        (&self.lhs - &self.rhs())
            .terms()
            .map(|(_, c)| c.abs())
            .fold(Rational::zero(), |a, b| if b > a { b } else { a })
    }

    pub fn holds(&self) -> bool {
        (&self.lhs - &self.rhs()).is_zero()
    }

    /// `ℓ_1` written as nonnegative combinations of dual generators, for
    /// `d = 1, 2, 3`.
    pub fn known() -> Vec<OperatorDecomposition> {
        let r = |n: i64, d: i64| Rational::from_ratio(n, d);
        let minus = [1, -1];
        let mk = |d: u32, generators| OperatorDecomposition {
            d,
            lhs: DualElement::ell_a(d, Rational::one()).expansion,
            generators,
        };
        vec![
            mk(1, vec![Generator::new(r(1, 1), minus, [1, 0])]),
            mk(2, vec![Generator::new(r(1, 1), minus, [1, 1])]),
            mk(
                3,
                vec![
                    Generator::new(r(1, 2), minus, [1, 0]),
                    Generator::new(r(1, 2), minus, [0, 1]),
                    Generator::new(r(1, 2), minus, [1, 1]),
                ],
            ),
        ]
    }
}

/// Exact check of the three decompositions, plus negative controls that
/// bump every coefficient of the left side by one and expect a mismatch.
pub fn verify_exact_decompositions() -> Report {
    let mut report = Report::new();
    for dec in OperatorDecomposition::known() {
        let d = dec.d;
        let nonneg = dec.generators.iter().all(|g| !g.weight.is_negative());
        report.push(Check::new(format!("d={d} weights nonnegative"), nonneg, 0.0));
        report.push(Check::new(format!("d={d} identity"), dec.holds(), dec.mismatch().as_f64()));
        let mut caught = 0;
        let all = Monomial::all_of_degree(2, 2 * d);
        for m in &all {
            let mut bumped = dec.clone();
            bumped.lhs = &bumped.lhs + &Form::monomial(m.exponents(), Rational::one());
            if !bumped.holds() {
                caught += 1;
            }
        }
        let missed = (all.len() - caught) as f64;
        report.push(Check::new(format!("d={d} perturbations detected"), caught == all.len(), missed));
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::factorial;

    #[test]
    fn expansions() {
        let e = DualElement::ell_a(2, 3.0f64).expansion;
        assert_eq!(e.coeff_of(&[4, 0]), 3.0);
        assert_eq!(e.coeff_of(&[2, 2]), -2.0);
        // s_B for d = 1: B(x²+y²) − (x² − y²).
        let s = DualElement::s_b(1, Rational::from_i64(5)).expansion;
        assert_eq!(s.coeff_of(&[2, 0]), Rational::from_i64(4));
        assert_eq!(s.coeff_of(&[0, 2]), Rational::from_i64(6));
    }

    #[test]
    fn apply_matches_biform() {
        let q = Form::make(2, 4, [(vec![4, 0], 2.0), (vec![2, 2], 3.0), (vec![1, 3], 1.0), (vec![0, 4], 1.5)]).unwrap();
        let ell = DualElement::ell_a(2, 1.25).apply(&q).unwrap();
        let biform = q.biform(&[1.0, 0.0], &[0.0, 1.0]).unwrap();
        let expected = 24.0 * (1.25 * (2.0 + 1.5) - 2.0 * biform);
        assert!((ell - expected).abs() < 1e-12);
        let z = [Complex::new(1.0, 0.0), Complex::new(0.0, 1.0)];
        let s = DualElement::s_b(2, 2.0).apply(&q).unwrap();
        let expected = factorial::<f64>(4) * (2.0 * q.hermitian_biform(&z).unwrap() - q.evaluate_complex(&z).unwrap().re);
        assert!((s - expected).abs() < 1e-12);
    }

    #[test]
    fn decompositions_hold() {
        let r = verify_exact_decompositions();
        assert!(r.all_pass(), "{r:?}");
        assert_eq!(r.checks.len(), 9);
    }

    #[test]
    fn wrong_weight_is_caught() {
        let mut dec = OperatorDecomposition::known().remove(2);
        dec.generators[0].weight = Rational::from_i64(1);
        assert!(!dec.holds());
        assert!(dec.mismatch() > Rational::zero());
    }
}
