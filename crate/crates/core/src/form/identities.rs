//! Disk-integral identities for bivariate forms, and a seeded generator of
//! integer forms to exercise them.

use num_complex::Complex;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{Form, Monomial};
use crate::error::Result;
use crate::scalar::{binomial, Scalar};
use crate::Rational;

/// Dense form with integer coefficients drawn from `[−bound, bound]`.
pub fn random_integer_form(n: usize, degree: u32, bound: i64, seed: u64) -> Form<Rational> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Form::from_monomials(
        n,
        degree,
        Monomial::all_of_degree(n, degree).into_iter().map(|m| (m, Rational::from_i64(rng.random_range(-bound..=bound)))),
    )
}

/// Both sides of `Q_p(z, z̄) = 4^d (d+1) C(2d, d)^{-1} ∬p / π` at
/// `z = e1 + ie2`, for a bivariate form of degree `2d`.
pub fn qp_integral_sides<S: Scalar>(p: &Form<S>) -> Result<(S, S)> {
    let d = p.degree() / 2;
    let z = [Complex::new(S::one(), S::zero()), Complex::new(S::zero(), S::one())];
    let lhs = p.hermitian_biform(&z)?;
    let four_d = (0..d).fold(S::one(), |acc, _| acc * S::from_i64(4));
    let rhs = four_d * S::from_i64(d as i64 + 1) / binomial::<S>(2 * d, d) * p.disk_average()?.over_pi;
    Ok((lhs, rhs))
}

/// Both sides of `∬Δp = k(k+2) ∬p` for a bivariate form of degree `k`,
/// divided by `π`.
pub fn laplacian_integral_sides<S: Scalar>(p: &Form<S>) -> Result<(S, S)> {
    let k = S::from_i64(p.degree() as i64);
    let rhs = k.clone() * (k + S::from_i64(2)) * p.disk_average()?.over_pi;
    let lhs = if p.degree() < 2 { S::zero() } else { p.laplacian().disk_average()?.over_pi };
    Ok((lhs, rhs))
}
