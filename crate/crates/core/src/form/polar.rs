//! Polar-coordinate calculus for bivariate forms: `p(r cosθ, r sinθ) = r^k f(θ)`.

use num_complex::Complex;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use super::Form;
use crate::error::{Error, Result};
use crate::scalar::{binomial, Scalar};

/// Angular profile `f(θ) = Σ_j a_j cos(jθ) + b_j sin(jθ)`, `0 ≤ j ≤ k`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PolarProfile<S> {
    pub degree: u32,
    pub cos_coeffs: Vec<S>,
    pub sin_coeffs: Vec<S>,
}

impl<S: Scalar> Form<S> {
    /// Trigonometric expansion of the restriction to the unit circle.
    ///
    /// Works through `w = e^{iθ}`: `cos^a sin^b` becomes a Laurent
    /// polynomial in `w` with exact coefficients, which is then folded back
    /// into the cosine/sine basis.
    pub fn polar_profile(&self) -> Result<PolarProfile<S>> {
        if self.n != 2 {
            return Err(Error::NotBivariate(self.n));
        }
        let k = self.degree as usize;
        let mut laurent = vec![Complex::<S>::zero(); 2 * k + 1];
        let two = S::one() + S::one();
        for (m, c) in &self.terms {
            let (a, b) = (m.exponents()[0], m.exponents()[1]);
            // 1 / (2^{a+b} i^b)
            let mut scale = c.clone();
            for _ in 0..a + b {
                scale = scale / two.clone();
            }
            let unit = match b % 4 {
                0 => Complex::new(scale, S::zero()),
                1 => Complex::new(S::zero(), -scale),
                2 => Complex::new(-scale, S::zero()),
                _ => Complex::new(S::zero(), scale),
            };
            for s in 0..=a {
                let cs: S = binomial(a, s);
                for t in 0..=b {
                    let mut ct: S = binomial(b, t);
                    if t % 2 == 1 {
                        ct = -ct;
                    }
                    let power = (a as i64 - 2 * s as i64) + (b as i64 - 2 * t as i64);
                    let idx = (power + k as i64) as usize;
                    let w = cs.clone() * ct;
                    laurent[idx] = laurent[idx].clone() + Complex::new(unit.re.clone() * w.clone(), unit.im.clone() * w);
                }
            }
        }
        let mut cos_coeffs = vec![S::zero(); k + 1];
        let mut sin_coeffs = vec![S::zero(); k + 1];
        cos_coeffs[0] = laurent[k].re.clone();
        for j in 1..=k {
            let (pos, neg) = (&laurent[k + j], &laurent[k - j]);
            cos_coeffs[j] = pos.re.clone() + neg.re.clone();
            sin_coeffs[j] = neg.im.clone() - pos.im.clone();
        }
        Ok(PolarProfile { degree: self.degree, cos_coeffs, sin_coeffs })
    }
}

impl<S: Scalar> PolarProfile<S> {
    fn series(&self, theta: f64, order: u32) -> f64 {
        let mut acc = 0.0;
        for j in 0..self.cos_coeffs.len() {
            let (a, b) = (self.cos_coeffs[j].as_f64(), self.sin_coeffs[j].as_f64());
            let jf = j as f64;
            let (s, c) = (jf * theta).sin_cos();
            acc += match order % 4 {
                0 => a * c + b * s,
                1 => -a * s + b * c,
                2 => -a * c - b * s,
                _ => a * s - b * c,
            } * jf.powi(order as i32);
        }
        acc
    }

    /// `f(θ)`
    pub fn f(&self, theta: f64) -> f64 {
        self.series(theta, 0)
    }

    /// `f′(θ)`
    pub fn df(&self, theta: f64) -> f64 {
        self.series(theta, 1)
    }

    /// `f″(θ)`
    pub fn d2f(&self, theta: f64) -> f64 {
        self.series(theta, 2)
    }

    /// `r^k f(θ)`
    pub fn reconstruct(&self, r: f64, theta: f64) -> f64 {
        r.powi(self.degree as i32) * self.f(theta)
    }

    /// True when every nonzero frequency has the parity of the degree.
    pub fn parity_ok(&self) -> bool {
        (0..self.cos_coeffs.len())
            .filter(|j| (j + self.degree as usize) % 2 == 1)
            .all(|j| self.cos_coeffs[j].is_zero() && self.sin_coeffs[j].is_zero())
    }

    /// Hessian at polar point `(r, θ)`:
    /// `r^{k−2}(k(k−1)f e_rr + (k−1)f′ e_rθ + (k+f″) e_θθ)` with
    /// `e_rr = e_r e_rᵀ`, `e_rθ = e_r e_θᵀ + e_θ e_rᵀ`, `e_θθ = e_θ e_θᵀ`.
    pub fn hessian(&self, r: f64, theta: f64) -> [[f64; 2]; 2] {
        let k = self.degree as f64;
        let (f, df, d2f) = (self.f(theta), self.df(theta), self.d2f(theta));
        let (s, c) = theta.sin_cos();
        let er = [c, s];
        let et = [-s, c];
        let a = k * (k - 1.0) * f;
        let b = (k - 1.0) * df;
        let g = k * f + d2f;
        let scale = r.powi(self.degree as i32 - 2);
        let mut h = [[0.0; 2]; 2];
        for i in 0..2 {
            for j in 0..2 {
                h[i][j] = scale * (a * er[i] * er[j] + b * (er[i] * et[j] + et[i] * er[j]) + g * et[i] * et[j]);
            }
        }
        h
    }

    /// `Δp = r^{k−2}(k² f + f″)`
    pub fn laplacian(&self, r: f64, theta: f64) -> f64 {
        let k = self.degree as f64;
        r.powi(self.degree as i32 - 2) * (k * k * self.f(theta) + self.d2f(theta))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;

    fn q(n: i64) -> BigRational {
        BigRational::from_integer(n.into())
    }

    #[test]
    fn profile_of_radial_power_is_constant() {
        let r2 = Form::make(2, 2, [(vec![2, 0], q(1)), (vec![0, 2], q(1))]).unwrap();
        let pp = r2.pow(3).polar_profile().unwrap();
        assert_eq!(pp.cos_coeffs[0], q(1));
        assert!(pp.cos_coeffs[1..].iter().all(|c| c.is_zero()));
        assert!(pp.sin_coeffs.iter().all(|c| c.is_zero()));
    }

    #[test]
    fn profile_of_harmonic_is_single_frequency() {
        // Re (x+iy)^4 = cos 4θ, Im (x+iy)^4 = sin 4θ
        let z = Form::linear(&[Complex::new(q(1), q(0)), Complex::new(q(0), q(1))]).pow(4);
        let re = z.map(|w| w.re.clone()).polar_profile().unwrap();
        let im = z.map(|w| w.im.clone()).polar_profile().unwrap();
        for j in 0..=4 {
            assert_eq!(re.cos_coeffs[j], if j == 4 { q(1) } else { q(0) });
            assert_eq!(im.sin_coeffs[j], if j == 4 { q(1) } else { q(0) });
            assert!(re.sin_coeffs[j].is_zero());
            assert!(im.cos_coeffs[j].is_zero());
        }
    }

    #[test]
    fn polar_hessian_of_radial_power() {
        let d = 3u32;
        let r2 = Form::make(2, 2, [(vec![2, 0], 1.0), (vec![0, 2], 1.0)]).unwrap();
        let pp = r2.pow(d).polar_profile().unwrap();
        let (r, t) = (1.7f64, 0.4f64);
        let h = pp.hessian(r, t);
        let (s, c) = t.sin_cos();
        let k = 2.0 * d as f64;
        let scale = r.powi(2 * d as i32 - 2);
        let expect = [
            [scale * (k * (k - 1.0) * c * c + k * s * s), scale * (k * (k - 1.0) - k) * c * s],
            [scale * (k * (k - 1.0) - k) * c * s, scale * (k * (k - 1.0) * s * s + k * c * c)],
        ];
        for i in 0..2 {
            for j in 0..2 {
                assert!((h[i][j] - expect[i][j]).abs() < 1e-9 * scale);
            }
        }
    }

    #[test]
    fn odd_degree_parity_and_reconstruction() {
        let p = Form::make(2, 3, [(vec![3, 0], 2.0), (vec![1, 2], -1.0), (vec![0, 3], 0.5)]).unwrap();
        let pp = p.polar_profile().unwrap();
        assert!(pp.parity_ok());
        let (r, t) = (0.8, 2.1f64);
        let direct = p.evaluate(&[r * t.cos(), r * t.sin()]).unwrap();
        assert!((pp.reconstruct(r, t) - direct).abs() < 1e-12);
        assert!(Form::monomial(&[2, 0, 0], 1.0).polar_profile().is_err());
    }
}
