//! Differential calculus on forms. Every derivative is exact exponent
//! bookkeeping; nothing here is numerical differentiation.

use num_complex::Complex;
use num_traits::Zero;

use super::Form;
use crate::error::{Error, Result};
use crate::scalar::{factorial, Coeff, Scalar};

impl<T: Coeff> Form<T> {
    /// `Σ_i ∂²p/∂x_i²`
    pub fn laplacian(&self) -> Self {
        let mut out = Form::zero(self.n, self.degree.saturating_sub(2));
        for i in 0..self.n {
            out = &out + &self.partial(i).partial(i);
        }
        out
    }

    /// `Δ^times p` as a form.
    pub fn laplacian_iterate(&self, times: u32) -> Self {
        (0..times).fold(self.clone(), |acc, _| acc.laplacian())
    }

    /// Applies `self(∂_1, …, ∂_n)` to `p`.
    ///
    /// When degrees agree the result is a constant form equal to the Fischer
    /// pairing `⟨self, p⟩`.
    pub fn apply_diff_op(&self, p: &Form<T>) -> Result<Form<T>> {
        if self.n != p.n {
            return Err(Error::DimensionMismatch { expected: p.n, got: self.n });
        }
        if self.degree > p.degree {
            return Err(Error::DegreeExceeds { op: self.degree, form: p.degree });
        }
        let mut out = Form::zero(p.n, p.degree - self.degree);
        for (m, c) in &self.terms {
            let mut d = p.clone();
            for (i, &e) in m.exponents().iter().enumerate() {
                for _ in 0..e {
                    d = d.partial(i);
                }
            }
            out = &out + &d.scale(c);
        }
        Ok(out)
    }

    /// `uᵀ∇²p(x)u` as a form in `(x_1, …, x_n, u_1, …, u_n)`.
    pub fn hessian_form(&self) -> Form<T> {
        let n = self.n;
        let positions: Vec<usize> = (0..n).collect();
        let mut out = Form::zero(2 * n, self.degree.saturating_sub(2) + 2);
        if self.degree < 2 {
            return out;
        }
        for a in 0..n {
            let da = self.partial(a);
            for b in 0..n {
                let dab = da.partial(b).embed(2 * n, &positions).expect("positions in range");
                let mut e = vec![0; 2 * n];
                e[n + a] += 1;
                e[n + b] += 1;
                out = &out + &(&dab * &Form::monomial(&e, T::one()));
            }
        }
        out
    }
}

impl<S: Scalar> Form<S> {
    /// Symmetric tensor value `T_p(x_1, …, x_k)`, i.e.
    /// `(1/k!) ∂_{x_1} ⋯ ∂_{x_k} p`.
    pub fn polarize(&self, points: &[Vec<Complex<S>>]) -> Result<Complex<S>> {
        if points.len() != self.degree as usize {
            return Err(Error::WrongArity { degree: self.degree, got: points.len() });
        }
        let mut d = self.to_complex();
        for u in points {
            d = d.directional(u)?;
        }
        let value = d.constant_value().unwrap_or_else(Complex::zero);
        let k: S = factorial(self.degree);
        Ok(Complex::new(value.re / k.clone(), value.im / k))
    }

    /// Real-argument polarization.
    pub fn polarize_real(&self, points: &[Vec<S>]) -> Result<S> {
        if points.len() != self.degree as usize {
            return Err(Error::WrongArity { degree: self.degree, got: points.len() });
        }
        let mut d = self.clone();
        for u in points {
            d = d.directional(u)?;
        }
        let value = d.constant_value().unwrap_or_else(S::zero);
        Ok(value / factorial::<S>(self.degree))
    }

    fn half_degree(&self) -> Result<u32> {
        if !self.degree.is_multiple_of(2) {
            return Err(Error::OddDegree(self.degree));
        }
        Ok(self.degree / 2)
    }

    /// Biform `Q_p(x, y) = T_p(x, …, x, y, …, y)` with `d` copies of each.
    pub fn biform(&self, x: &[S], y: &[S]) -> Result<S> {
        let d = self.half_degree()? as usize;
        let mut points = vec![x.to_vec(); d];
        points.extend(std::iter::repeat_n(y.to_vec(), d));
        self.polarize_real(&points)
    }

    /// Biform at complex arguments.
    pub fn biform_complex(&self, x: &[Complex<S>], y: &[Complex<S>]) -> Result<Complex<S>> {
        let d = self.half_degree()? as usize;
        let mut points = vec![x.to_vec(); d];
        points.extend(std::iter::repeat_n(y.to_vec(), d));
        self.polarize(&points)
    }

    /// `Q_p(z, z̄)`, a real number for every complex `z`.
    ///
    /// Evaluated as `(1/(2d)!) Δ^d q` where `q` is the restriction of `p` to
    /// the plane spanned by `Re z` and `Im z`, so no imaginary part ever
    /// appears.
    pub fn hermitian_biform(&self, z: &[Complex<S>]) -> Result<S> {
        let d = self.half_degree()?;
        if z.len() != self.n {
            return Err(Error::DimensionMismatch { expected: self.n, got: z.len() });
        }
        let re: Vec<S> = z.iter().map(|c| c.re.clone()).collect();
        let im: Vec<S> = z.iter().map(|c| c.im.clone()).collect();
        let q = self.restrict_to_plane(&re, &im)?;
        Ok(q.laplacian_power(d)? / factorial::<S>(2 * d))
    }

    /// `∇p(x)`
    pub fn gradient(&self, x: &[S]) -> Result<Vec<S>> {
        self.check_len(x.len())?;
        (0..self.n).map(|i| self.partial(i).evaluate(x)).collect()
    }

    /// `∇²p(x)`, row-major.
    #[allow(clippy::needless_range_loop)]
    pub fn hessian(&self, x: &[S]) -> Result<Vec<Vec<S>>> {
        self.check_len(x.len())?;
        let mut h = vec![vec![S::zero(); self.n]; self.n];
        for i in 0..self.n {
            let di = self.partial(i);
            for j in i..self.n {
                let v = di.partial(j).evaluate(x)?;
                h[j][i] = v.clone();
                h[i][j] = v;
            }
        }
        Ok(h)
    }

    /// Hessian forms `∂²p/∂x_i∂x_j` (upper triangle mirrored).
    #[allow(clippy::needless_range_loop)]
    pub fn hessian_forms(&self) -> Vec<Vec<Form<S>>> {
        let mut h = vec![vec![Form::zero(self.n, self.degree.saturating_sub(2)); self.n]; self.n];
        for i in 0..self.n {
            let di = self.partial(i);
            for j in i..self.n {
                let f = di.partial(j);
                h[j][i] = f.clone();
                h[i][j] = f;
            }
        }
        h
    }

    /// Fischer inner product
    /// `⟨p, q⟩ = k! Σ_I multinomial(k; I)^{-1} p_I q_I = Σ_I (Π_j i_j!) p_I q_I`.
    pub fn fischer_inner(&self, other: &Form<S>) -> Result<S> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch { expected: self.n, got: other.n });
        }
        if self.degree != other.degree {
            return Err(Error::DegreeMismatch { left: self.degree, right: other.degree });
        }
        let mut acc = S::zero();
        for (m, c) in &self.terms {
            if let Some(oc) = other.terms.get(m) {
                let weight = m
                    .exponents()
                    .iter()
                    .fold(S::one(), |w, &e| w * factorial::<S>(e));
                acc = acc + weight * c.clone() * oc.clone();
            }
        }
        Ok(acc)
    }

    /// `q(s, t) = p(s x + t y)`.
    pub fn restrict_to_plane(&self, x: &[S], y: &[S]) -> Result<Form<S>> {
        self.check_len(x.len())?;
        self.check_len(y.len())?;
        let subs: Vec<Form<S>> = x
            .iter()
            .zip(y)
            .map(|(a, b)| Form::linear(&[a.clone(), b.clone()]))
            .collect();
        self.compose_linear(&subs)
    }

    /// `Δ^times p` for a bivariate form of degree `2·times`, as a scalar.
    pub fn laplacian_power(&self, times: u32) -> Result<S> {
        if self.n != 2 {
            return Err(Error::NotBivariate(self.n));
        }
        if self.degree != 2 * times {
            return Err(Error::DegreeMismatch { left: self.degree, right: 2 * times });
        }
        Ok(self
            .laplacian_iterate(times)
            .constant_value()
            .unwrap_or_else(S::zero))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;

    fn q(n: i64) -> BigRational {
        BigRational::from_integer(n.into())
    }

    fn qr(a: i64, b: i64) -> BigRational {
        BigRational::new(a.into(), b.into())
    }

    fn r4() -> Form<BigRational> {
        Form::make(2, 4, [(vec![4, 0], q(1)), (vec![2, 2], q(2)), (vec![0, 4], q(1))]).unwrap()
    }

    fn c(re: i64, im: i64) -> Complex<BigRational> {
        Complex::new(q(re), q(im))
    }

    #[test]
    fn polarize_examples() {
        let e1 = vec![c(1, 0), c(0, 0)];
        let e2 = vec![c(0, 0), c(1, 0)];
        let p = r4();
        let v = p.polarize(&[e1.clone(), e1.clone(), e2.clone(), e2.clone()]).unwrap();
        assert_eq!(v, Complex::new(qr(1, 3), q(0)));
        let x4 = Form::monomial(&[4, 0], q(1));
        let v = x4.polarize(&[e1.clone(), e1.clone(), e2.clone(), e2.clone()]).unwrap();
        assert!(v.is_zero());
        assert!(matches!(p.polarize(std::slice::from_ref(&e1)), Err(Error::WrongArity { .. })));
        let x = vec![c(2, -1), c(3, 5)];
        assert_eq!(p.polarize(&vec![x.clone(); 4]).unwrap(), p.evaluate_complex(&x).unwrap());
    }

    #[test]
    fn biform_examples() {
        let p = r4();
        assert_eq!(p.biform(&[q(1), q(0)], &[q(0), q(1)]).unwrap(), qr(1, 3));
        // x^T M y for a quadratic
        let quad = Form::make(2, 2, [(vec![2, 0], q(3)), (vec![1, 1], q(4)), (vec![0, 2], q(-1))]).unwrap();
        let (x, y) = ([q(2), q(-1)], [q(1), q(5)]);
        // M = [[3, 2], [2, -1]]
        let expect = q(2) * q(3) * q(1) + q(2) * q(2) * q(5) + q(-1) * q(2) * q(1) + q(-1) * q(-1) * q(5);
        assert_eq!(quad.biform(&x, &y).unwrap(), expect);
        assert_eq!(quad.biform(&x, &y).unwrap(), quad.biform(&y, &x).unwrap());
        let cubic = Form::monomial(&[3, 0], q(1));
        assert_eq!(cubic.biform(&x, &y), Err(Error::OddDegree(3)));
    }

    #[test]
    fn hermitian_biform_examples() {
        // q_2 = 4x^4 + 4y^4 at e1 + i e2
        let q2 = Form::make(2, 4, [(vec![4, 0], q(4)), (vec![0, 4], q(4))]).unwrap();
        let z = [c(1, 0), c(0, 1)];
        assert_eq!(q2.hermitian_biform(&z).unwrap(), q(8));
        // (x²+y²)^d → 4^d / C(2d, d)
        let r2 = Form::make(2, 2, [(vec![2, 0], q(1)), (vec![0, 2], q(1))]).unwrap();
        for d in 1..=4u32 {
            let expect = q(4i64.pow(d)) / crate::scalar::binomial::<BigRational>(2 * d, d);
            assert_eq!(r2.pow(d).hermitian_biform(&z).unwrap(), expect);
        }
        // real z reduces to evaluation
        let p = r4();
        let zr = [c(3, 0), c(-2, 0)];
        assert_eq!(p.hermitian_biform(&zr).unwrap(), p.evaluate(&[q(3), q(-2)]).unwrap());
        // agrees with complex polarization and has no imaginary part
        let z = [c(1, 2), c(-3, 1)];
        let zbar: Vec<_> = z.iter().map(|w| w.conj()).collect();
        let via_polar = p.biform_complex(&z, &zbar).unwrap();
        assert!(via_polar.im.is_zero());
        assert_eq!(via_polar.re, p.hermitian_biform(&z).unwrap());
    }

    #[test]
    fn hessian_examples() {
        let p = r4();
        let h = p.hessian(&[q(1), q(0)]).unwrap();
        assert_eq!(h, vec![vec![q(12), q(0)], vec![q(0), q(4)]]);
        let x2y2 = Form::monomial(&[2, 2], q(1));
        let h = x2y2.hessian(&[q(1), q(1)]).unwrap();
        assert_eq!(h, vec![vec![q(2), q(4)], vec![q(4), q(2)]]);
        assert!(matches!(p.gradient(&[q(1)]), Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn hessian_form_matches_matrix() {
        let p = Form::make(2, 4, [(vec![2, 2], q(1)), (vec![3, 1], q(-2))]).unwrap();
        let hf = p.hessian_form();
        let (x, u) = ([q(2), q(-1)], [q(3), q(5)]);
        let h = p.hessian(&x).unwrap();
        let mut expect = q(0);
        for a in 0..2 {
            for b in 0..2 {
                expect += u[a].clone() * u[b].clone() * h[a][b].clone();
            }
        }
        let point = [x[0].clone(), x[1].clone(), u[0].clone(), u[1].clone()];
        assert_eq!(hf.evaluate(&point).unwrap(), expect);
    }

    #[test]
    fn fischer_examples() {
        let x2 = Form::monomial(&[2], q(1));
        assert_eq!(x2.fischer_inner(&x2).unwrap(), q(2));
        let x2b = Form::monomial(&[2, 0], q(1));
        let xy = Form::monomial(&[1, 1], q(1));
        assert_eq!(x2b.fischer_inner(&xy).unwrap(), q(0));
        assert_eq!(xy.fischer_inner(&xy).unwrap(), q(1));
        let cubic = Form::monomial(&[3, 0], q(1));
        assert!(matches!(xy.fischer_inner(&cubic), Err(Error::DegreeMismatch { .. })));
    }

    #[test]
    fn diff_op_examples() {
        let lap = Form::make(2, 2, [(vec![2, 0], q(1)), (vec![0, 2], q(1))]).unwrap();
        let out = lap.apply_diff_op(&r4()).unwrap();
        assert_eq!(out, lap.scale(&q(16)));
        assert_eq!(out, r4().laplacian());
        let p = r4();
        let full = p.apply_diff_op(&p).unwrap();
        assert_eq!(full.constant_value().unwrap(), p.fischer_inner(&p).unwrap());
        let x = Form::monomial(&[1], q(1));
        let x2 = Form::monomial(&[2], q(1));
        assert_eq!(x.apply_diff_op(&x2).unwrap(), Form::monomial(&[1], q(2)));
        assert!(matches!(x2.apply_diff_op(&x), Err(Error::DegreeExceeds { .. })));
    }

    #[test]
    fn restriction_examples() {
        let quartic_sum = Form::make(
            4,
            4,
            (0..4).map(|i| {
                let mut e = vec![0i64; 4];
                e[i] = 4;
                (e, q(1))
            }),
        )
        .unwrap();
        let e1 = [q(1), q(0), q(0), q(0)];
        let e2 = [q(0), q(1), q(0), q(0)];
        let r = quartic_sum.restrict_to_plane(&e1, &e2).unwrap();
        assert_eq!(r, Form::make(2, 4, [(vec![4, 0], q(1)), (vec![0, 4], q(1))]).unwrap());
        // degenerate plane
        let x = [q(1), q(2), q(-1), q(3)];
        let r = quartic_sum.restrict_to_plane(&x, &x).unwrap();
        let s_plus_t = Form::linear(&[q(1), q(1)]);
        assert_eq!(r, s_plus_t.pow(4).scale(&quartic_sum.evaluate(&x).unwrap()));
    }

    #[test]
    fn laplacian_power_examples() {
        assert_eq!(r4().laplacian_power(2).unwrap(), q(64));
        // Re (x + iy)^{2d} is harmonic
        for d in 1..=5u32 {
            let z = Form::linear(&[c(1, 0), c(0, 1)]).pow(2 * d);
            let re = z.map(|w| w.re.clone());
            assert_eq!(re.laplacian_power(d).unwrap(), q(0));
        }
        assert!(matches!(r4().laplacian_power(1), Err(Error::DegreeMismatch { .. })));
    }
}
