//! Homogeneous polynomials (forms) with dense, exponent-keyed storage.

mod calculus;
mod disk;
mod identities;
mod io;
mod polar;

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::scalar::{Coeff, Scalar};

pub use disk::DiskIntegral;
pub use identities::{laplacian_integral_sides, qp_integral_sides, random_integer_form};
pub use io::{AnyForm, FormFile, TermFile};
pub use polar::PolarProfile;

/// Exponent vector `(i_1, …, i_n)` of a monomial `x_1^{i_1} ⋯ x_n^{i_n}`.
///
/// Ordered graded-lexicographically with `x_1` largest, so iteration over a
/// form visits `x_1^k` first.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Monomial(Vec<u32>);

impl Monomial {
    pub fn new(exponents: Vec<u32>) -> Self {
        Monomial(exponents)
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn n(&self) -> usize {
        self.0.len()
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    /// All exponent vectors of `n` variables with total degree `degree`, in
    /// graded-lexicographic order.
    pub fn all_of_degree(n: usize, degree: u32) -> Vec<Monomial> {
        fn rec(n: usize, left: u32, prefix: &mut Vec<u32>, out: &mut Vec<Monomial>) {
            if prefix.len() + 1 == n {
                prefix.push(left);
                out.push(Monomial(prefix.clone()));
                prefix.pop();
                return;
            }
            for e in (0..=left).rev() {
                prefix.push(e);
                rec(n, left - e, prefix, out);
                prefix.pop();
            }
        }
        let mut out = Vec::new();
        if n == 0 {
            if degree == 0 {
                out.push(Monomial(Vec::new()));
            }
            return out;
        }
        rec(n, degree, &mut Vec::with_capacity(n), &mut out);
        out
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        other
            .degree()
            .cmp(&self.degree())
            .then_with(|| other.0.cmp(&self.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// A form of degree `degree` in `n` variables.
///
/// Zero coefficients are never stored, so structural equality is value
/// equality.
#[derive(Debug, Clone, PartialEq)]
pub struct Form<T: Coeff> {
    n: usize,
    degree: u32,
    terms: BTreeMap<Monomial, T>,
}

impl<S: Scalar> Form<S> {
    /// Builds a form from signed exponent vectors, summing duplicates.
    pub fn make(n: usize, degree: u32, terms: impl IntoIterator<Item = (Vec<i64>, S)>) -> Result<Self> {
        if n == 0 {
            return Err(Error::DimensionMismatch { expected: 1, got: 0 });
        }
        let mut form = Form::zero(n, degree);
        for (exp, c) in terms {
            let ok = exp.len() == n
                && exp.iter().all(|&e| e >= 0)
                && exp.iter().sum::<i64>() == degree as i64;
            if !ok {
                return Err(Error::BadExponent { exponent: exp, n, degree });
            }
            if !c.is_finite_value() {
                return Err(Error::NonFinite);
            }
            let mono = Monomial(exp.iter().map(|&e| e as u32).collect());
            form.accumulate(mono, c);
        }
        Ok(form)
    }

    pub fn to_f64(&self) -> Form<f64> {
        self.map(|c| c.as_f64())
    }

    pub fn to_complex(&self) -> Form<Complex<S>> {
        self.map(|c| Complex::new(c.clone(), S::zero()))
    }

    /// Largest absolute coefficient.
    pub fn max_abs_coeff(&self) -> f64 {
        self.terms.values().map(|c| c.as_f64().abs()).fold(0.0, f64::max)
    }

    /// Complex point evaluation.
    pub fn evaluate_complex(&self, z: &[Complex<S>]) -> Result<Complex<S>> {
        self.to_complex().evaluate(z)
    }
}

impl Form<f64> {
    /// Exact lift of a float form into rationals.
    pub fn to_rational(&self) -> Form<num_rational::BigRational> {
        self.map(|c| <num_rational::BigRational as Scalar>::from_f64_exact(*c).expect("finite coefficients"))
    }
}

impl<T: Coeff> Form<T> {
    pub fn zero(n: usize, degree: u32) -> Self {
        Form { n, degree, terms: BTreeMap::new() }
    }

    /// Builds from already validated monomials, summing duplicates.
    pub fn from_monomials(n: usize, degree: u32, terms: impl IntoIterator<Item = (Monomial, T)>) -> Self {
        let mut form = Form::zero(n, degree);
        for (m, c) in terms {
            debug_assert!(m.n() == n && m.degree() == degree);
            form.accumulate(m, c);
        }
        form
    }

    pub fn monomial(exponents: &[u32], c: T) -> Self {
        let m = Monomial(exponents.to_vec());
        Form::from_monomials(m.n(), m.degree(), [(m, c)])
    }

    pub fn constant(n: usize, c: T) -> Self {
        Form::from_monomials(n, 0, [(Monomial(vec![0; n]), c)])
    }

    /// `Σ a_i x_i`
    pub fn linear(coeffs: &[T]) -> Self {
        let n = coeffs.len();
        Form::from_monomials(
            n,
            1,
            coeffs.iter().enumerate().map(|(i, c)| {
                let mut e = vec![0; n];
                e[i] = 1;
                (Monomial(e), c.clone())
            }),
        )
    }

    /// The `i`-th coordinate `x_i`.
    pub fn variable(n: usize, i: usize) -> Self {
        let mut e = vec![0; n];
        e[i] = 1;
        Form::monomial(&e, T::one())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &T)> {
        self.terms.iter()
    }

    pub fn coeff(&self, m: &Monomial) -> T {
        self.terms.get(m).cloned().unwrap_or_else(T::zero)
    }

    pub fn coeff_of(&self, exponents: &[u32]) -> T {
        self.coeff(&Monomial(exponents.to_vec()))
    }

    /// Value of a degree-0 form.
    pub fn constant_value(&self) -> Option<T> {
        (self.degree == 0).then(|| self.coeff(&Monomial(vec![0; self.n])))
    }

    fn accumulate(&mut self, m: Monomial, c: T) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(slot) => {
                let sum = slot.clone() + c;
                if sum.is_zero() {
                    self.terms.remove(&m);
                } else {
                    *slot = sum;
                }
            }
            None => {
                self.terms.insert(m, c);
            }
        }
    }

    pub fn map<U: Coeff>(&self, mut f: impl FnMut(&T) -> U) -> Form<U> {
        Form::from_monomials(self.n, self.degree, self.terms.iter().map(|(m, c)| (m.clone(), f(c))))
    }

    pub fn scale(&self, s: &T) -> Self {
        self.map(|c| c.clone() * s.clone())
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = Form::constant(self.n, T::one());
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }

    /// Re-indexes variables: variable `i` of `self` becomes variable
    /// `positions[i]` of an `n_new`-variate form.
    pub fn embed(&self, n_new: usize, positions: &[usize]) -> Result<Self> {
        if positions.len() != self.n {
            return Err(Error::DimensionMismatch { expected: self.n, got: positions.len() });
        }
        if positions.iter().any(|&p| p >= n_new) {
            return Err(Error::ShapeMismatch(format!("embedding position out of range for n = {n_new}")));
        }
        Ok(Form::from_monomials(
            n_new,
            self.degree,
            self.terms.iter().map(|(m, c)| {
                let mut e = vec![0; n_new];
                for (i, &p) in positions.iter().enumerate() {
                    e[p] += m.0[i];
                }
                (Monomial(e), c.clone())
            }),
        ))
    }

    /// `∂p/∂x_i`
    pub fn partial(&self, i: usize) -> Self {
        assert!(i < self.n, "variable index out of range");
        let degree = self.degree.saturating_sub(1);
        let mut out = Form::zero(self.n, degree);
        if self.degree == 0 {
            return out;
        }
        for (m, c) in &self.terms {
            let e = m.0[i];
            if e == 0 {
                continue;
            }
            let mut exps = m.0.clone();
            exps[i] -= 1;
            out.accumulate(Monomial(exps), c.clone() * from_count::<T>(e));
        }
        out
    }

    /// Directional derivative `∂_u p = Σ u_i ∂p/∂x_i`.
    pub fn directional(&self, u: &[T]) -> Result<Self> {
        self.check_len(u.len())?;
        let mut out = Form::zero(self.n, self.degree.saturating_sub(1));
        if self.degree == 0 {
            return Ok(out);
        }
        for (m, c) in &self.terms {
            for (i, ui) in u.iter().enumerate() {
                let e = m.0[i];
                if e == 0 || ui.is_zero() {
                    continue;
                }
                let mut exps = m.0.clone();
                exps[i] -= 1;
                out.accumulate(Monomial(exps), c.clone() * ui.clone() * from_count::<T>(e));
            }
        }
        Ok(out)
    }

    /// Point evaluation `Σ p_I x^I`.
    pub fn evaluate(&self, x: &[T]) -> Result<T> {
        self.check_len(x.len())?;
        let powers: Vec<Vec<T>> = x
            .iter()
            .map(|xi| {
                let mut p = Vec::with_capacity(self.degree as usize + 1);
                p.push(T::one());
                for k in 1..=self.degree as usize {
                    let next = p[k - 1].clone() * xi.clone();
                    p.push(next);
                }
                p
            })
            .collect();
        let mut acc = T::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (i, &e) in m.0.iter().enumerate() {
                if e > 0 {
                    t = t * powers[i][e as usize].clone();
                }
            }
            acc = acc + t;
        }
        Ok(acc)
    }

    /// Substitutes `x_i ↦ L_i` where every `L_i` is a linear form in `m`
    /// variables.
    pub fn compose_linear(&self, subs: &[Form<T>]) -> Result<Self> {
        self.check_len(subs.len())?;
        let m = subs.first().map(|l| l.n).unwrap_or(0);
        if subs.iter().any(|l| l.degree != 1 || l.n != m) {
            return Err(Error::ShapeMismatch("substitution must be linear forms in a common variable count".into()));
        }
        let powers: Vec<Vec<Form<T>>> = subs
            .iter()
            .map(|l| {
                let mut p = vec![Form::constant(m, T::one())];
                for k in 1..=self.degree as usize {
                    let next = &p[k - 1] * l;
                    p.push(next);
                }
                p
            })
            .collect();
        let mut out = Form::zero(m, self.degree);
        for (mono, c) in &self.terms {
            let mut t = Form::constant(m, c.clone());
            for (i, &e) in mono.0.iter().enumerate() {
                if e > 0 {
                    t = &t * &powers[i][e as usize];
                }
            }
            for (mm, cc) in t.terms {
                out.accumulate(mm, cc);
            }
        }
        Ok(out)
    }

    fn check_len(&self, len: usize) -> Result<()> {
        if len != self.n {
            return Err(Error::DimensionMismatch { expected: self.n, got: len });
        }
        Ok(())
    }

    fn check_compatible(&self, other: &Self, same_degree: bool) {
        assert_eq!(self.n, other.n, "forms live in different variable counts");
        if same_degree {
            assert_eq!(self.degree, other.degree, "forms have different degrees");
        }
    }
}

/// `k` as an element of the coefficient ring.
pub(crate) fn from_count<T: Coeff>(k: u32) -> T {
    let mut acc = T::zero();
    let mut base = T::one();
    let mut k = k;
    while k > 0 {
        if k & 1 == 1 {
            acc = acc + base.clone();
        }
        base = base.clone() + base;
        k >>= 1;
    }
    acc
}

impl<'a, T: Coeff> Add<&'a Form<T>> for &'a Form<T> {
    type Output = Form<T>;

    /// Panics when degrees or variable counts differ.
    fn add(self, rhs: &'a Form<T>) -> Form<T> {
        self.check_compatible(rhs, true);
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.accumulate(m.clone(), c.clone());
        }
        out
    }
}

impl<'a, T: Coeff> Sub<&'a Form<T>> for &'a Form<T> {
    type Output = Form<T>;

    fn sub(self, rhs: &'a Form<T>) -> Form<T> {
        self.check_compatible(rhs, true);
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.accumulate(m.clone(), T::zero() - c.clone());
        }
        out
    }
}

impl<T: Coeff> Neg for &Form<T> {
    type Output = Form<T>;

    fn neg(self) -> Form<T> {
        self.map(|c| T::zero() - c.clone())
    }
}

impl<'a, T: Coeff> Mul<&'a Form<T>> for &'a Form<T> {
    type Output = Form<T>;

    fn mul(self, rhs: &'a Form<T>) -> Form<T> {
        self.check_compatible(rhs, false);
        let mut out = Form::zero(self.n, self.degree + rhs.degree);
        for (a, ca) in &self.terms {
            for (b, cb) in &rhs.terms {
                out.accumulate(a.mul(b), ca.clone() * cb.clone());
            }
        }
        out
    }
}

impl<T: Coeff + fmt::Display> fmt::Display for Form<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (m, c) in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "({c})")?;
            for (i, &e) in m.0.iter().enumerate() {
                match e {
                    0 => {}
                    1 => write!(f, "*x{}", i + 1)?,
                    _ => write!(f, "*x{}^{}", i + 1, e)?,
                }
            }
        }
        Ok(())
    }
}
