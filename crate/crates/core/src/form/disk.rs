use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::Form;
use crate::error::{Error, Result};
use crate::scalar::{factorial, Scalar};

/// An integral over the unit disk, held exactly as a multiple of `π`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiskIntegral<S> {
    pub over_pi: S,
}

impl<S: Scalar> DiskIntegral<S> {
    pub fn value(&self) -> f64 {
        self.over_pi.as_f64() * PI
    }
}

/// `(2m − 1)!!` with `(−1)!! = 1`.
fn double_factorial_odd<S: Scalar>(m: u32) -> S {
    (1..=m).fold(S::one(), |acc, j| acc * S::from_i64(2 * j as i64 - 1))
}

/// `∬_{x²+y²≤1} x^{2i} y^{2j} dx dy / π = (2i−1)!!(2j−1)!! / (2^{i+j} (i+j+1)!)`
pub fn disk_moment_over_pi<S: Scalar>(a: u32, b: u32) -> S {
    if a % 2 == 1 || b % 2 == 1 {
        return S::zero();
    }
    let (i, j) = (a / 2, b / 2);
    let mut den: S = factorial(i + j + 1);
    for _ in 0..i + j {
        den = den * S::from_i64(2);
    }
    double_factorial_odd::<S>(i) * double_factorial_odd::<S>(j) / den
}

impl<S: Scalar> Form<S> {
    /// Integral of a bivariate form over the unit disk, from exact monomial
    /// moments.
    pub fn disk_average(&self) -> Result<DiskIntegral<S>> {
        if self.n != 2 {
            return Err(Error::NotBivariate(self.n));
        }
        let mut acc = S::zero();
        for (m, c) in &self.terms {
            let e = m.exponents();
            acc = acc + c.clone() * disk_moment_over_pi::<S>(e[0], e[1]);
        }
        Ok(DiskIntegral { over_pi: acc })
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
    fn radial_powers() {
        let r2 = Form::make(2, 2, [(vec![2, 0], q(1)), (vec![0, 2], q(1))]).unwrap();
        for d in 0..6u32 {
            let got = r2.pow(d).disk_average().unwrap().over_pi;
            assert_eq!(got, q(1) / q(d as i64 + 1));
        }
    }

    #[test]
    fn odd_monomials_vanish() {
        let p = Form::make(2, 4, [(vec![3, 1], q(5)), (vec![1, 3], q(-2))]).unwrap();
        assert_eq!(p.disk_average().unwrap().over_pi, q(0));
    }

    #[test]
    fn moment_matches_quadrature() {
        // polar midpoint rule on x^4 y^2
        let (nr, nt) = (400, 400);
        let mut acc = 0.0;
        for a in 0..nr {
            let r = (a as f64 + 0.5) / nr as f64;
            for b in 0..nt {
                let t = 2.0 * PI * (b as f64 + 0.5) / nt as f64;
                acc += r * (r * t.cos()).powi(4) * (r * t.sin()).powi(2);
            }
        }
        acc *= 2.0 * PI / (nr * nt) as f64;
        let exact = disk_moment_over_pi::<f64>(4, 2) * PI;
        assert!((acc - exact).abs() < 1e-5);
    }
}
