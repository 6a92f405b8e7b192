//! Separating-hyperplane certificates for non-sos quartics and sextics.
//!
//! A configuration is a rank-one relation `v1^{⊗k} = Σ α_i v_i^{⊗k}` with
//! signs `α_i = ±1` (or `z^{⊗k} + z̄^{⊗k}` on the left). Every sos form
//! satisfies `p(v1) ≤ (Σ √p(v_i))²` on such a configuration, and the complex
//! analogue `2(|p(z)| + Re p(z)) ≤ (Σ √p(v_i))²`. The weights of the
//! hyperplane never show up: their optimum is in closed form, see [`holder`].

mod example;
mod generate;
pub mod holder;
mod pipeline;

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::form::{Form, Monomial};
use crate::scalar::{multinomial, Scalar};
use crate::tolerances;
use crate::Rational;

pub use example::{example_nonsos_quartic, verify_nonsos_example, NonsosExample};
pub use generate::{generate_cb_config, generate_cb_config_complex};
pub use holder::{holder_closed_forms, holder_complex, verify_holder};
pub use pipeline::{main_theorem_pipeline, replay_config, PipelineReport};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub enum ConfigKind {
    Real,
    ComplexPair,
}

/// Points and signs of a relation.
///
/// `Real`: `realPoints = [v1, v2, …]` and one sign per point after `v1`.
/// `ComplexPair`: `complexPoint = z`, `realPoints` are the right-hand side
/// points and carry one sign each. Complex entries serialize as `[re, im]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct CayleyBacharachConfig {
    pub n: usize,
    pub kind: ConfigKind,
    pub real_points: Vec<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub complex_point: Option<Vec<Complex<f64>>>,
    pub signs: Vec<i8>,
    /// 2 for quaternary quartics, 3 for ternary sextics.
    pub tensor_order: u32,
}

impl CayleyBacharachConfig {
    /// Number of right-hand side points the relation needs.
    fn expected_rhs(&self) -> Result<usize> {
        match (self.tensor_order, self.n, self.kind) {
            (2, 4, ConfigKind::Real) => Ok(7),
            (2, 4, ConfigKind::ComplexPair) => Ok(6),
            (3, 3, ConfigKind::Real) => Ok(8),
            (3, 3, ConfigKind::ComplexPair) => Ok(7),
            (k, n, _) => Err(Error::ShapeMismatch(format!("tensor order {k} with n = {n}"))),
        }
    }

    pub fn validate(&self) -> Result<()> {
        let rhs = self.expected_rhs()?;
        let points = rhs + usize::from(self.kind == ConfigKind::Real);
        if self.real_points.len() != points {
            return Err(Error::ShapeMismatch(format!("expected {points} real points, got {}", self.real_points.len())));
        }
        if self.signs.len() != rhs {
            return Err(Error::ShapeMismatch(format!("expected {rhs} signs, got {}", self.signs.len())));
        }
        if let Some(bad) = self.signs.iter().find(|s| s.abs() != 1) {
            return Err(Error::ShapeMismatch(format!("sign {bad} is not ±1")));
        }
        match (&self.complex_point, self.kind) {
            (None, ConfigKind::ComplexPair) => return Err(Error::ShapeMismatch("complexPair needs a complex point".into())),
            (Some(_), ConfigKind::Real) => return Err(Error::ShapeMismatch("real kind takes no complex point".into())),
            (Some(z), _) if z.len() != self.n => return Err(Error::DimensionMismatch { expected: self.n, got: z.len() }),
            _ => {}
        }
        for v in &self.real_points {
            if v.len() != self.n {
                return Err(Error::DimensionMismatch { expected: self.n, got: v.len() });
            }
            if v.iter().any(|x| !x.is_finite()) {
                return Err(Error::NonFinite);
            }
        }
        Ok(())
    }

    /// Right-hand side points paired with their signs.
    pub fn rhs(&self) -> impl Iterator<Item = (&[f64], i8)> {
        let skip = usize::from(self.kind == ConfigKind::Real);
        self.real_points[skip..].iter().map(Vec::as_slice).zip(self.signs.iter().copied())
    }

    pub fn from_json_str(s: &str) -> Result<Self> {
        let cfg: Self = serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serializes")
    }
}

fn exact<S: Scalar>(v: &[f64]) -> Result<Vec<S>> {
    v.iter().map(|&x| S::from_f64_exact(x).ok_or(Error::NonFinite)).collect()
}

fn exact_complex<S: Scalar>(z: &[Complex<f64>]) -> Result<Vec<Complex<S>>> {
    z.iter()
        .map(|c| Ok(Complex::new(S::from_f64_exact(c.re).ok_or(Error::NonFinite)?, S::from_f64_exact(c.im).ok_or(Error::NonFinite)?)))
        .collect()
}

/// All `n^k` entries of `v^{⊗k}`, row-major.
fn tensor_power<T: Clone + std::ops::Mul<Output = T>>(v: &[T], k: u32) -> Vec<T> {
    let mut out: Vec<T> = v.to_vec();
    for _ in 1..k {
        out = out.iter().flat_map(|a| v.iter().map(move |b| a.clone() * b.clone())).collect();
    }
    out
}

/// Squared Frobenius norm of `lhs − Σ α_i v_i^{⊗k}`, computed in `S`.
pub fn relation_residual_sq<S: Scalar>(cfg: &CayleyBacharachConfig) -> Result<S> {
    cfg.validate()?;
    let k = cfg.tensor_order;
    let mut diff: Vec<S> = match (&cfg.complex_point, cfg.kind) {
        (Some(z), ConfigKind::ComplexPair) => {
            let two = S::one() + S::one();
            tensor_power(&exact_complex::<S>(z)?, k).into_iter().map(|c| c.re * two.clone()).collect()
        }
        _ => tensor_power(&exact::<S>(&cfg.real_points[0])?, k),
    };
    for (v, sign) in cfg.rhs() {
        let t = tensor_power(&exact::<S>(v)?, k);
        for (d, x) in diff.iter_mut().zip(t) {
            *d = if sign > 0 { d.clone() - x } else { d.clone() + x };
        }
    }
    Ok(diff.into_iter().fold(S::zero(), |acc, d| acc + d.clone() * d))
}

/// Frobenius-norm residual of the relation.
pub fn check_relation(cfg: &CayleyBacharachConfig) -> Result<f64> {
    Ok(relation_residual_sq::<f64>(cfg)?.sqrt())
}

/// Squared residual in exact arithmetic; zero iff the relation holds exactly
/// for the stored `f64` entries.
pub fn check_relation_exact(cfg: &CayleyBacharachConfig) -> Result<Rational> {
    relation_residual_sq::<Rational>(cfg)
}

/// Same residual through the monomial coordinates of the symmetric tensor:
/// `v ↦ (√(k!/β!) v^β)_β`, an isometry onto the symmetric part.
pub fn check_relation_flat(cfg: &CayleyBacharachConfig) -> Result<f64> {
    cfg.validate()?;
    let k = cfg.tensor_order;
    let monomials = Monomial::all_of_degree(cfg.n, k);
    let weights: Vec<f64> = monomials.iter().map(|m| multinomial::<f64>(m.exponents()).sqrt()).collect();
    let flat = |v: &[Complex<f64>]| -> Vec<Complex<f64>> {
        monomials
            .iter()
            .zip(&weights)
            .map(|(m, w)| {
                m.exponents().iter().zip(v).fold(Complex::new(*w, 0.0), |acc, (&e, x)| acc * x.powu(e))
            })
            .collect()
    };
    let real = |v: &[f64]| -> Vec<Complex<f64>> { v.iter().map(|&x| Complex::new(x, 0.0)).collect() };
    let mut diff: Vec<f64> = match (&cfg.complex_point, cfg.kind) {
        (Some(z), ConfigKind::ComplexPair) => flat(z).into_iter().map(|c| 2.0 * c.re).collect(),
        _ => flat(&real(&cfg.real_points[0])).into_iter().map(|c| c.re).collect(),
    };
    for (v, sign) in cfg.rhs() {
        for (d, x) in diff.iter_mut().zip(flat(&real(v))) {
            *d -= f64::from(sign) * x.re;
        }
    }
    Ok(diff.iter().map(|d| d * d).sum::<f64>().sqrt())
}

/// Both sides of a hyperplane condition; `pass` is `lhs ≤ rhs + 1e−9`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConditionCheck {
    pub lhs: f64,
    pub rhs: f64,
    pub pass: bool,
}

impl ConditionCheck {
    fn new(lhs: f64, rhs: f64) -> Self {
        ConditionCheck { lhs, rhs, pass: lhs <= rhs + tolerances::SLACK }
    }
}

fn check_form<S: Scalar>(p: &Form<S>, cfg: &CayleyBacharachConfig, kind: ConfigKind) -> Result<()> {
    cfg.validate()?;
    if cfg.kind != kind {
        return Err(Error::ShapeMismatch(format!("expected a {kind:?} configuration, got {:?}", cfg.kind)));
    }
    if p.n() != cfg.n {
        return Err(Error::DimensionMismatch { expected: cfg.n, got: p.n() });
    }
    if p.degree() != 2 * cfg.tensor_order {
        return Err(Error::DegreeMismatch { left: p.degree(), right: 2 * cfg.tensor_order });
    }
    Ok(())
}

/// `(Σ √p(v_i))²` over the right-hand side points, after checking that `p`
/// is nonnegative at every real point of the configuration.
fn sqrt_sum_sq<S: Scalar>(p: &Form<S>, cfg: &CayleyBacharachConfig) -> Result<(Vec<f64>, f64)> {
    let values = cfg
        .real_points
        .iter()
        .map(|v| Ok(p.evaluate(&exact::<S>(v)?)?.as_f64()))
        .collect::<Result<Vec<f64>>>()?;
    if let Some((index, &value)) = values.iter().enumerate().find(|(_, &x)| x < tolerances::NEGATIVITY) {
        return Err(Error::NegativeEvaluation { index, value });
    }
    let skip = usize::from(cfg.kind == ConfigKind::Real);
    let s: f64 = values[skip..].iter().map(|x| x.max(0.0).sqrt()).sum();
    Ok((values, s * s))
}

/// `p(v1) ≤ (Σ_{i≥2} √p(v_i))²`
pub fn check_real_condition<S: Scalar>(p: &Form<S>, cfg: &CayleyBacharachConfig) -> Result<ConditionCheck> {
    check_form(p, cfg, ConfigKind::Real)?;
    let (values, rhs) = sqrt_sum_sq(p, cfg)?;
    Ok(ConditionCheck::new(values[0], rhs))
}

/// `2(|p(z)| + Re p(z)) ≤ (Σ √p(v_i))²`
pub fn check_complex_condition<S: Scalar>(p: &Form<S>, cfg: &CayleyBacharachConfig) -> Result<ConditionCheck> {
    check_form(p, cfg, ConfigKind::ComplexPair)?;
    let (_, rhs) = sqrt_sum_sq(p, cfg)?;
    let z = exact_complex::<S>(cfg.complex_point.as_deref().expect("validated"))?;
    let pz = p.evaluate_complex(&z)?;
    let pz = Complex::new(pz.re.as_f64(), pz.im.as_f64());
    Ok(ConditionCheck::new(2.0 * (pz.norm() + pz.re), rhs))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn padded(v1: Vec<f64>, v: Vec<f64>) -> CayleyBacharachConfig {
        // v1 = v with v listed once, then three cancelling pairs.
        let mut pts = vec![v1, v.clone()];
        let mut signs = vec![1];
        for w in [[1.0, 2.0, 0.0, -1.0], [0.5, 0.0, 3.0, 1.0], [2.0, -1.0, 1.0, 0.0]] {
            pts.push(w.to_vec());
            pts.push(w.to_vec());
            signs.extend([1, -1]);
        }
        CayleyBacharachConfig { n: 4, kind: ConfigKind::Real, real_points: pts, complex_point: None, signs, tensor_order: 2 }
    }

    #[test]
    fn trivial_relation() {
        let v = vec![1.0, -2.0, 0.5, 3.0];
        let cfg = padded(v.clone(), v);
        assert_eq!(check_relation(&cfg).unwrap(), 0.0);
        assert!(check_relation_flat(&cfg).unwrap() < 1e-12);
        let bad = padded(vec![1.0, 0.0, 0.0, 0.0], vec![0.0, 1.0, 0.0, 0.0]);
        assert!((check_relation(&bad).unwrap() - 2f64.sqrt()).abs() < 1e-12);
        assert!((check_relation_flat(&bad).unwrap() - 2f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn shape_errors() {
        let mut cfg = padded(vec![1.0; 4], vec![1.0; 4]);
        cfg.signs.pop();
        assert!(matches!(check_relation(&cfg), Err(Error::ShapeMismatch(_))));
        let mut cfg = padded(vec![1.0; 4], vec![1.0; 4]);
        cfg.signs[0] = 2;
        assert!(matches!(check_relation(&cfg), Err(Error::ShapeMismatch(_))));
        let mut cfg = padded(vec![1.0; 4], vec![1.0; 4]);
        cfg.tensor_order = 3;
        assert!(matches!(check_relation(&cfg), Err(Error::ShapeMismatch(_))));
        let mut cfg = padded(vec![1.0; 4], vec![1.0; 4]);
        cfg.real_points[3].pop();
        assert!(matches!(check_relation(&cfg), Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn json_round_trip_uses_pairs() {
        let cfg = CayleyBacharachConfig {
            n: 4,
            kind: ConfigKind::ComplexPair,
            real_points: vec![vec![0.0; 4]; 6],
            complex_point: Some(vec![Complex::new(1.0, 0.5); 4]),
            signs: vec![1; 6],
            tensor_order: 2,
        };
        let s = cfg.to_json_string();
        assert!(s.contains("\"complexPair\"") && s.contains("\"tensorOrder\""));
        let v: serde_json::Value = serde_json::from_str(&s).unwrap();
        assert_eq!(v["complexPoint"][0], serde_json::json!([1.0, 0.5]));
        assert_eq!(CayleyBacharachConfig::from_json_str(&s).unwrap(), cfg);
    }

    #[test]
    fn conditions_on_trivial_forms() {
        let v = vec![1.0, -2.0, 0.5, 3.0];
        let cfg = padded(v.clone(), v);
        let zero = Form::<f64>::zero(4, 4);
        let c = check_real_condition(&zero, &cfg).unwrap();
        assert_eq!((c.lhs, c.rhs, c.pass), (0.0, 0.0, true));
        let neg = Form::monomial(&[4, 0, 0, 0], -1.0);
        assert!(matches!(check_real_condition(&neg, &cfg), Err(Error::NegativeEvaluation { index: 0, .. })));
        assert!(matches!(check_complex_condition(&zero, &cfg), Err(Error::ShapeMismatch(_))));
    }

    #[test]
    fn isotropic_and_real_complex_points() {
        let r = Form::make(4, 2, (0..4).map(|i| {
            let mut e = vec![0; 4];
            e[i] = 2;
            (e, 1.0)
        }))
        .unwrap()
        .pow(2);
        let mut cfg = CayleyBacharachConfig {
            n: 4,
            kind: ConfigKind::ComplexPair,
            real_points: vec![vec![1.0, 0.0, 0.0, 0.0]; 6],
            complex_point: Some(vec![Complex::new(1.0, 0.0), Complex::new(0.0, 1.0), Complex::new(0.0, 0.0), Complex::new(0.0, 0.0)]),
            signs: vec![1; 6],
            tensor_order: 2,
        };
        let c = check_complex_condition(&r, &cfg).unwrap();
        assert_eq!(c.lhs, 0.0);
        assert!(c.pass);
        // A real z makes the left side 4p(z).
        cfg.complex_point = Some(vec![Complex::new(0.5, 0.0); 4]);
        let c = check_complex_condition(&r, &cfg).unwrap();
        assert!((c.lhs - 4.0 * r.evaluate(&[0.5; 4]).unwrap()).abs() < 1e-15);
    }
}
