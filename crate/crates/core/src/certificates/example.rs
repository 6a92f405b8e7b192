use num_traits::Zero;

use super::{check_relation, check_relation_exact, check_real_condition, CayleyBacharachConfig, ConfigKind, ConditionCheck};
use crate::cones::{is_sos, Verdict};
use crate::error::Result;
use crate::form::{Form, Monomial};
use crate::report::{Check, Report};
use crate::scalar::Scalar;
use crate::Rational;

/// The non-sos quaternary quartic with its certificate.
#[derive(Debug, Clone, PartialEq)]
pub struct NonsosExample {
    pub form: Form<Rational>,
    pub config: CayleyBacharachConfig,
}

/// `Σ x_i⁴ + Σ_{i,j,k distinct} x_i² x_j x_k + 4x₁x₂x₃x₄` on
/// `V = {±1}³ × {1}` split by the parity of the number of `−1` entries.
///
/// Every entry sum here is even, so the split that carries the relation is
/// by the sign of the product of entries. `v1 = (1,1,1,1)`; the other points
/// with product `+1` get sign `−1`, those with product `−1` get `+1`.
pub fn example_nonsos_quartic() -> NonsosExample {
    let mut terms = Vec::new();
    for m in Monomial::all_of_degree(4, 4) {
        let e = m.exponents();
        let c = if e.contains(&4) {
            1
        } else if e.contains(&2) && e.iter().filter(|&&x| x == 1).count() == 2 {
            // Ordered pairs (j, k) count each monomial twice.
            2
        } else if e.iter().all(|&x| x == 1) {
            4
        } else {
            0
        };
        if c != 0 {
            terms.push((m, Rational::from_i64(c)));
        }
    }
    let form = Form::from_monomials(4, 4, terms);

    let mut real_points = vec![vec![1.0; 4]];
    let mut signs = Vec::new();
    for bits in 0..8u32 {
        let v: Vec<f64> = (0..3).map(|i| if bits >> i & 1 == 1 { -1.0 } else { 1.0 }).chain([1.0]).collect();
        if v.iter().all(|&x| x == 1.0) {
            continue;
        }
        let even = v.iter().product::<f64>() > 0.0;
        signs.push(if even { -1 } else { 1 });
        real_points.push(v);
    }
    let config = CayleyBacharachConfig { n: 4, kind: ConfigKind::Real, real_points, complex_point: None, signs, tensor_order: 2 };
    NonsosExample { form, config }
}

/// Exact values, the relation, the failing hyperplane condition and the
/// solver's sos verdict. Every check passes when the example behaves as a
/// non-sos certificate should.
pub fn verify_nonsos_example() -> Result<(Report, ConditionCheck)> {
    let NonsosExample { form, config } = example_nonsos_quartic();
    let mut report = Report::new();

    let at = |v: &[f64]| form.evaluate(&v.iter().map(|&x| Rational::from_i64(x as i64)).collect::<Vec<_>>());
    let v1 = at(&config.real_points[0])?;
    report.push(Check::new("p(v1) = 32", v1 == Rational::from_i64(32), (v1.as_f64() - 32.0).abs()));
    let mut worst = 0.0f64;
    let mut all_zero = true;
    for v in &config.real_points[1..] {
        let x = at(v)?;
        all_zero &= x.is_zero();
        worst = worst.max(x.as_f64().abs());
    }
    report.push(Check::new("p(v_i) = 0", all_zero, worst));

    let exact = check_relation_exact(&config)?;
    report.push(Check::new("relation exact", exact.is_zero(), check_relation(&config)?));

    let cond = check_real_condition(&form, &config)?;
    report.push(Check::new("real condition violated", !cond.pass, cond.lhs - cond.rhs));

    let verdict = is_sos(&form)?;
    let refuted = matches!(verdict, Verdict::Refuted(_));
    report.push(Check::new("sos infeasible", refuted, verdict.margin().max(0.0)));
    Ok((report, cond))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::certificates::check_relation;

    #[test]
    fn values() {
        let ex = example_nonsos_quartic();
        let r = |v: [i64; 4]| ex.form.evaluate(&v.map(Rational::from_i64)).unwrap();
        assert_eq!(r([1, 1, 1, 1]), Rational::from_i64(32));
        assert_eq!(r([1, 1, -1, 1]), Rational::zero());
        assert_eq!(ex.form.num_terms(), 4 + 12 + 1);
        assert_eq!(ex.config.signs.iter().filter(|&&s| s == 1).count(), 4);
        assert_eq!(check_relation(&ex.config).unwrap(), 0.0);
    }

    #[test]
    fn verified() {
        let (report, cond) = verify_nonsos_example().unwrap();
        assert!(report.all_pass(), "{report:?}");
        assert_eq!((cond.lhs, cond.rhs), (32.0, 0.0));
    }
}
