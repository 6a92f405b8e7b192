//! Sampled check of the Cauchy-Schwarz inequalities for a given form.

use num_complex::Complex;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::error::Result;
use crate::form::Form;
use crate::report::{Check, Report};
use crate::tolerances;

/// The quantities entering the inequalities at one sample.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GcsSample {
    pub biform_xy: f64,
    pub p_x: f64,
    pub p_y: f64,
    pub p_z: Complex<f64>,
    /// `Q_p(z, z̄)`
    pub hermitian: f64,
}

impl GcsSample {
    /// `Q_p(x, y) − A √(p(x) p(y))`
    pub fn real_excess(&self, a: f64) -> f64 {
        self.biform_xy - a * (self.p_x.max(0.0) * self.p_y.max(0.0)).sqrt()
    }

    /// `2Q_p(x, y) − A (p(x) + p(y))`
    pub fn real_linear_excess(&self, a: f64) -> f64 {
        2.0 * self.biform_xy - a * (self.p_x + self.p_y)
    }

    /// `|p(z)| − B Q_p(z, z̄)`
    pub fn complex_excess(&self, b: f64) -> f64 {
        self.p_z.norm() - b * self.hermitian
    }

    /// `Re p(z) − B Q_p(z, z̄)`
    pub fn complex_linear_excess(&self, b: f64) -> f64 {
        self.p_z.re - b * self.hermitian
    }
}

pub fn gcs_at(p: &Form<f64>, x: &[f64], y: &[f64], z: &[Complex<f64>]) -> Result<GcsSample> {
    Ok(GcsSample {
        biform_xy: p.biform(x, y)?,
        p_x: p.evaluate(x)?,
        p_y: p.evaluate(y)?,
        p_z: p.evaluate_complex(z)?,
        hermitian: p.hermitian_biform(z)?,
    })
}

fn unit(rng: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
    loop {
        let v: Vec<f64> = (0..n).map(|_| rng.sample(StandardNormal)).collect();
        let norm = v.iter().map(|a| a * a).sum::<f64>().sqrt();
        if norm > 1e-12 {
            return v.into_iter().map(|a| a / norm).collect();
        }
    }
}

/// Worst excess of each of the four inequalities over `samples` random
/// unit `x`, `y` and `z = (a + ib)/√2` with unit `a`, `b`. Passing means
/// every excess stays below `1e−9`.
pub fn gcs_property_check(p: &Form<f64>, samples: usize, a: f64, b: f64, seed: u64) -> Result<Report> {
    let n = p.n();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst = [f64::NEG_INFINITY; 4];
    let s = std::f64::consts::FRAC_1_SQRT_2;
    for _ in 0..samples {
        let x = unit(&mut rng, n);
        let y = unit(&mut rng, n);
        let re = unit(&mut rng, n);
        let im = unit(&mut rng, n);
        let z: Vec<Complex<f64>> = re.iter().zip(&im).map(|(r, i)| Complex::new(r * s, i * s)).collect();
        let g = gcs_at(p, &x, &y, &z)?;
        let e = [g.real_excess(a), g.complex_excess(b), g.real_linear_excess(a), g.complex_linear_excess(b)];
        for (w, v) in worst.iter_mut().zip(e) {
            *w = w.max(v);
        }
    }
    let names = ["real", "complex", "real linearized", "complex linearized"];
    let mut report = Report::new();
    for (name, w) in names.iter().zip(worst) {
        let w = if samples == 0 { 0.0 } else { w };
        report.push(Check::within(*name, w.max(0.0), tolerances::SLACK));
    }
    Ok(report)
}
