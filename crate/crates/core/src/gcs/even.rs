//! Convex forms with `2Q_p(e1, e2) > p(e1) + p(e2)` for even `d ≥ 4`.
//!
//! `p_d = s + α q` with `s = ((x+y)^{2d} + (x−y)^{2d})/2` and
//! `q = Σ_{0<k<d} x^{2k} y^{2d−2k}`. The Hessian of `s` degenerates only on
//! the diagonals, where the Hessian of `q` is positive definite, so a small
//! enough `α > 0` keeps `p_d` convex.

use std::f64::consts::PI;

use num_traits::One;

use crate::cones::{is_convex_bivariate, GramCertificate, Verdict};
use crate::error::{Error, Result};
use crate::form::Form;
use crate::scalar::{binomial, Scalar};
use crate::Rational;

const GOLDEN_ITERATIONS: usize = 60;
const SAFETY: f64 = 0.99;

#[derive(Debug, Clone, PartialEq)]
pub struct EvenWitness {
    pub d: u32,
    pub form: Form<f64>,
    /// The `α` actually used: `0.99 · bounds.negative`.
    pub alpha: f64,
    pub bounds: AlphaBounds,
    /// `Q_{p_d}(e1, e2)`
    pub biform_e1e2: f64,
    pub certificate: GramCertificate,
}

impl EvenWitness {
    /// `2Q_p(e1, e2) / (p(e1) + p(e2))`
    pub fn ratio(&self) -> f64 {
        let p1 = self.form.evaluate(&[1.0, 0.0]).expect("bivariate");
        let p2 = self.form.evaluate(&[0.0, 1.0]).expect("bivariate");
        2.0 * self.biform_e1e2 / (p1 + p2)
    }
}

pub fn even_s(d: u32) -> Form<Rational> {
    let one = Rational::one();
    let plus = Form::linear(&[one.clone(), one.clone()]).pow(2 * d);
    let minus = Form::linear(&[one.clone(), -one]).pow(2 * d);
    (&plus + &minus).scale(&Rational::from_ratio(1, 2))
}

pub fn even_q(d: u32) -> Form<Rational> {
    Form::from_monomials(
        2,
        2 * d,
        (1..d).map(|k| (crate::form::Monomial::new(vec![2 * k, 2 * d - 2 * k]), Rational::one())),
    )
}

type Hess = [[Form<f64>; 2]; 2];

fn hess(f: &Form<Rational>) -> Hess {
    let h = f.to_f64().hessian_forms();
    [[h[0][0].clone(), h[0][1].clone()], [h[1][0].clone(), h[1][1].clone()]]
}

fn at(h: &Hess, x: &[f64]) -> [[f64; 2]; 2] {
    let e = |f: &Form<f64>| f.evaluate(x).expect("bivariate");
    [[e(&h[0][0]), e(&h[0][1])], [e(&h[1][0]), e(&h[1][1])]]
}

fn point(theta: f64) -> [f64; 2] {
    let r = 2f64.sqrt();
    [r * theta.cos(), r * theta.sin()]
}

fn min_eig(m: [[f64; 2]; 2]) -> f64 {
    let tr = m[0][0] + m[1][1];
    let diff = m[0][0] - m[1][1];
    0.5 * (tr - (diff * diff + 4.0 * m[0][1] * m[0][1]).sqrt())
}

/// Real eigenvalues of `S⁻¹Q` for `S ≻ 0`, `Q` symmetric.
fn pencil_eigs(s: [[f64; 2]; 2], q: [[f64; 2]; 2]) -> (f64, f64) {
    let det_s = s[0][0] * s[1][1] - s[0][1] * s[1][0];
    let m00 = (s[1][1] * q[0][0] - s[0][1] * q[1][0]) / det_s;
    let m01 = (s[1][1] * q[0][1] - s[0][1] * q[1][1]) / det_s;
    let m10 = (-s[1][0] * q[0][0] + s[0][0] * q[1][0]) / det_s;
    let m11 = (-s[1][0] * q[0][1] + s[0][0] * q[1][1]) / det_s;
    let tr = m00 + m11;
    let det = m00 * m11 - m01 * m10;
    let disc = (tr * tr - 4.0 * det).max(0.0).sqrt();
    (0.5 * (tr - disc), 0.5 * (tr + disc))
}

/// `min_u uᵀSu / |uᵀQu|`: the reciprocal of the spectral radius of `S⁻¹Q`.
fn pencil_ratio(s: [[f64; 2]; 2], q: [[f64; 2]; 2]) -> f64 {
    let (lo, hi) = pencil_eigs(s, q);
    let rho = lo.abs().max(hi.abs());
    if rho == 0.0 {
        f64::INFINITY
    } else {
        1.0 / rho
    }
}

/// `min uᵀSu / (−uᵀQu)` over directions with `uᵀQu < 0`; the only
/// directions along which `S + αQ` can lose definiteness.
fn pencil_ratio_negative(s: [[f64; 2]; 2], q: [[f64; 2]; 2]) -> f64 {
    let (lo, _) = pencil_eigs(s, q);
    if lo >= 0.0 {
        f64::INFINITY
    } else {
        -1.0 / lo
    }
}

fn golden_min(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64) -> f64 {
    let g = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - g * (b - a);
    let mut d = a + g * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    for _ in 0..GOLDEN_ITERATIONS {
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - g * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + g * (b - a);
            fd = f(d);
        }
    }
    f(a).min(f(b)).min(fc).min(fd)
}

/// Lower bounds for `α` on the circle of radius `√2` minus the arcs `U`
/// around `(±1, ±1)` where `∇²q ≻ 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AlphaBounds {
    /// `min uᵀ∇²s u / |uᵀ∇²q u|` over all unit `u`.
    pub absolute: f64,
    /// The same minimum restricted to `uᵀ∇²q u < 0`; never smaller.
    pub negative: f64,
}

pub fn alpha_bounds(d: u32, grid: usize) -> Result<AlphaBounds> {
    if d < 4 || !d.is_multiple_of(2) {
        return Err(Error::DOdd(d));
    }
    if grid < 16 {
        return Err(Error::OutOfRange(format!("grid size {grid} below 16")));
    }
    let hs = hess(&even_s(d));
    let hq = hess(&even_q(d));
    let theta = |i: usize| 2.0 * PI * i as f64 / grid as f64;
    let pd: Vec<bool> = (0..grid).map(|i| min_eig(at(&hq, &point(theta(i)))) > 0.0).collect();

    let mut in_u = vec![false; grid];
    for k in 0..4 {
        let centre = ((grid as f64) * (0.125 + 0.25 * k as f64)).round() as usize % grid;
        if !pd[centre] {
            return Err(Error::ConvexityRefutation(min_eig(at(&hq, &point(theta(centre))))));
        }
        let mut i = centre;
        while pd[i] && !in_u[i] {
            in_u[i] = true;
            i = (i + 1) % grid;
        }
        let mut i = (centre + grid - 1) % grid;
        while pd[i] && !in_u[i] {
            in_u[i] = true;
            i = (i + grid - 1) % grid;
        }
    }

    let minimize = |pencil: fn([[f64; 2]; 2], [[f64; 2]; 2]) -> f64| {
        let ratio = |t: f64| {
            let x = point(t);
            pencil(at(&hs, &x), at(&hq, &x))
        };
        let values: Vec<f64> = (0..grid).map(|i| if in_u[i] { f64::INFINITY } else { ratio(theta(i)) }).collect();
        let step = 2.0 * PI / grid as f64;
        let mut best = f64::INFINITY;
        for i in (0..grid).filter(|&i| !in_u[i]) {
            let prev = (i + grid - 1) % grid;
            let next = (i + 1) % grid;
            if values[i] > values[prev] || values[i] > values[next] || !values[i].is_finite() {
                continue;
            }
            let lo = if in_u[prev] { theta(i) } else { theta(i) - step };
            let hi = if in_u[next] { theta(i) } else { theta(i) + step };
            best = best.min(golden_min(ratio, lo, hi)).min(values[i]);
        }
        best
    };
    let absolute = minimize(pencil_ratio);
    let negative = minimize(pencil_ratio_negative);
    if !(absolute.is_finite() && absolute > 0.0 && negative.is_finite() && negative > 0.0) {
        return Err(Error::SolverFailure(format!("no positive ratio found for d = {d}")));
    }
    Ok(AlphaBounds { absolute, negative })
}

/// Builds `p_d` and confirms its convexity with the SDP.
///
/// `α` comes from the negative-curvature bound: the absolute-value bound is
/// also valid but shrinks like `(x−y)^{2d−2}` near the edge of `U` and is
/// far too small for `d ≥ 6`.
pub fn build_p_d_even(d: u32, grid: usize) -> Result<EvenWitness> {
    let bounds = alpha_bounds(d, grid)?;
    let alpha = SAFETY * bounds.negative;
    let form = &even_s(d).to_f64() + &even_q(d).to_f64().scale(&alpha);
    let certificate = match is_convex_bivariate(&form)? {
        Verdict::Certified(c) => c,
        Verdict::Refuted(w) => return Err(Error::ConvexityRefutation(w.margin)),
    };
    let biform_e1e2 = form.biform(&[1.0, 0.0], &[0.0, 1.0])?;
    debug_assert!((biform_e1e2 - 1.0 - alpha / binomial::<f64>(2 * d, d)).abs() < 1e-9);
    Ok(EvenWitness { d, form, alpha, bounds, biform_e1e2, certificate })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hessian_of_q_on_diagonal() {
        let q = even_q(4);
        let one = Rational::one();
        let h = q.hessian(&[one.clone(), one]).unwrap();
        let e = |v: i64| Rational::from_i64(v);
        assert_eq!(h, vec![vec![e(44), e(40)], vec![e(40), e(44)]]);
        for d in [4u32, 6, 8] {
            let k = Rational::from_ratio((d * (d - 1)) as i64, 3);
            let h = even_q(d).hessian(&[Rational::one(), -Rational::one()]).unwrap();
            assert_eq!(h[0][0], &k * e(4 * d as i64 - 5));
            assert_eq!(h[0][1], &k * e(-2 * d as i64 - 2));
        }
    }

    #[test]
    fn rejects_bad_d() {
        assert!(matches!(build_p_d_even(3, 4096), Err(Error::DOdd(3))));
        assert!(matches!(build_p_d_even(2, 4096), Err(Error::DOdd(2))));
    }

    #[test]
    fn pencil_ratio_identity() {
        let s = [[2.0, 0.0], [0.0, 1.0]];
        let q = [[1.0, 0.0], [0.0, -3.0]];
        assert!((pencil_ratio(s, q) - 1.0 / 3.0).abs() < 1e-15);
        assert!((pencil_ratio_negative(s, q) - 1.0 / 3.0).abs() < 1e-15);
        let q = [[1.0, 0.0], [0.0, 3.0]];
        assert_eq!(pencil_ratio_negative(s, q), f64::INFINITY);
    }

    #[test]
    fn witness_d4() {
        let w = build_p_d_even(4, 4096).unwrap();
        assert!(w.alpha > 0.0);
        assert!((w.form.evaluate(&[1.0, 0.0]).unwrap() - 1.0).abs() < 1e-12);
        assert!((w.form.evaluate(&[0.0, 1.0]).unwrap() - 1.0).abs() < 1e-12);
        assert!((w.biform_e1e2 - 1.0 - w.alpha / 70.0).abs() < 1e-12);
        assert!(w.ratio() > 1.0);
        // Both bounds agree for d = 4 and sit at the convexity limit ≈ 0.7817.
        assert!((w.bounds.absolute - w.bounds.negative).abs() < 1e-9);
        assert!((w.bounds.negative - 0.7817).abs() < 1e-4);
    }
}
