//! Random quartic configurations from nets of quadrics.
//!
//! Seven points of `P³` in general position cut out a net of quadrics whose
//! base locus has exactly one more point. The squares of all eight points
//! span only seven dimensions, and the unique linear dependence between them
//! is the relation we want. The eighth point is found by Newton's method on
//! the three quadrics; the relation comes from a null vector.

use nalgebra::{DMatrix, DVector, Matrix4, Vector4};
use num_complex::Complex;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use super::{check_relation, CayleyBacharachConfig, ConfigKind};
use crate::error::{Error, Result};
use crate::tolerances;

const ATTEMPTS: usize = 20;
const NEWTON_STARTS: usize = 200;
const NEWTON_STEPS: usize = 60;
/// Points closer than this (in `1 − |cos|`) to a known point are rejected.
const DISTINCT: f64 = 1e-6;
/// Smallest relation weight, relative to the largest, still accepted.
const WEIGHT_FLOOR: f64 = 1e-6;

fn pairs() -> impl Iterator<Item = (usize, usize)> {
    (0..4).flat_map(|j| (j..4).map(move |k| (j, k)))
}

/// Upper-triangular entries of `v vᵀ`.
fn square(v: &[f64]) -> [f64; 10] {
    let mut out = [0.0; 10];
    for (slot, (j, k)) in out.iter_mut().zip(pairs()) {
        *slot = v[j] * v[k];
    }
    out
}

fn square_complex(z: &[Complex<f64>]) -> [Complex<f64>; 10] {
    let mut out = [Complex::new(0.0, 0.0); 10];
    for (slot, (j, k)) in out.iter_mut().zip(pairs()) {
        *slot = z[j] * z[k];
    }
    out
}

/// Right singular vectors of the `dim` smallest singular values.
fn null_space(rows: &[[f64; 10]], dim: usize) -> Vec<DVector<f64>> {
    let mut a = DMatrix::zeros(10, 10);
    for (i, r) in rows.iter().enumerate() {
        for (j, &x) in r.iter().enumerate() {
            a[(i, j)] = x;
        }
    }
    let svd = a.svd(false, true);
    let vt = svd.v_t.expect("requested");
    let mut order: Vec<usize> = (0..10).collect();
    order.sort_by(|&i, &j| svd.singular_values[i].total_cmp(&svd.singular_values[j]));
    order[..dim].iter().map(|&i| vt.row(i).transpose()).collect()
}

/// Quadric matrices whose forms vanish on the given squared points.
fn net(rows: &[[f64; 10]]) -> Vec<Matrix4<f64>> {
    null_space(rows, 3)
        .into_iter()
        .map(|a| {
            let mut q = Matrix4::zeros();
            for (idx, (j, k)) in pairs().enumerate() {
                if j == k {
                    q[(j, j)] = a[idx];
                } else {
                    q[(j, k)] = a[idx] / 2.0;
                    q[(k, j)] = a[idx] / 2.0;
                }
            }
            q
        })
        .collect()
}

fn unit(rng: &mut ChaCha8Rng) -> Vector4<f64> {
    let v: Vector4<f64> = Vector4::from_fn(|_, _| rng.sample(StandardNormal));
    v / v.norm()
}

/// Newton on `vᵀQ_k v = 0`, `|v|² = 1`.
fn newton(quads: &[Matrix4<f64>], mut v: Vector4<f64>) -> Option<Vector4<f64>> {
    for _ in 0..NEWTON_STEPS {
        let mut f = Vector4::zeros();
        let mut jac = Matrix4::zeros();
        for (k, q) in quads.iter().enumerate() {
            let qv = q * v;
            f[k] = v.dot(&qv);
            jac.set_row(k, &(2.0 * qv).transpose());
        }
        f[3] = v.dot(&v) - 1.0;
        jac.set_row(3, &(2.0 * v).transpose());
        if f.norm() < 1e-15 {
            return Some(v);
        }
        v -= jac.lu().solve(&f)?;
        if !v.iter().all(|x| x.is_finite()) {
            return None;
        }
    }
    let residual = quads.iter().map(|q| v.dot(&(q * v)).abs()).fold(0.0, f64::max);
    (residual < 1e-13).then_some(v / v.norm())
}

/// The base point of the net not among `known`.
fn missing_point(rng: &mut ChaCha8Rng, quads: &[Matrix4<f64>], known: &[Vector4<f64>]) -> Option<Vector4<f64>> {
    (0..NEWTON_STARTS).find_map(|_| {
        let v = newton(quads, unit(rng))?;
        let fresh = known.iter().all(|k| 1.0 - v.dot(k).abs() / k.norm() > DISTINCT);
        fresh.then_some(v)
    })
}

/// Weights that are all nonzero and not wildly unbalanced.
fn balanced(w: &[f64]) -> bool {
    let max = w.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    max > 0.0 && w.iter().all(|x| x.abs() > WEIGHT_FLOOR * max)
}

fn try_real(rng: &mut ChaCha8Rng) -> Option<CayleyBacharachConfig> {
    let known: Vec<Vector4<f64>> = (0..7).map(|_| unit(rng)).collect();
    let rows: Vec<[f64; 10]> = known.iter().map(|v| square(v.as_slice())).collect();
    let v1 = missing_point(rng, &net(&rows), &known)?;

    // μ_1 v1v1ᵀ + Σ μ_i v_iv_iᵀ = 0, then v1v1ᵀ = Σ (−μ_i/μ_1) v_iv_iᵀ.
    let mut all = vec![square(v1.as_slice())];
    all.extend(rows);
    let mu = relation(&all)?;
    if !balanced(&mu) {
        return None;
    }
    let c: Vec<f64> = mu[1..].iter().map(|m| -m / mu[0]).collect();
    let mut real_points = vec![v1.iter().copied().collect::<Vec<f64>>()];
    real_points.extend(known.iter().zip(&c).map(|(v, c)| v.iter().map(|x| x * c.abs().sqrt()).collect()));
    let signs = c.iter().map(|c| if *c > 0.0 { 1 } else { -1 }).collect();
    Some(CayleyBacharachConfig { n: 4, kind: ConfigKind::Real, real_points, complex_point: None, signs, tensor_order: 2 })
}

fn try_complex(rng: &mut ChaCha8Rng) -> Option<CayleyBacharachConfig> {
    let mut known: Vec<Vector4<f64>> = (0..5).map(|_| unit(rng)).collect();
    let (re, im) = (unit(rng), unit(rng));
    let z: Vec<Complex<f64>> = re.iter().zip(im.iter()).map(|(a, b)| Complex::new(*a, *b)).collect();
    let zz = square_complex(&z);
    let mut rows: Vec<[f64; 10]> = known.iter().map(|v| square(v.as_slice())).collect();
    rows.push(zz.map(|c| c.re));
    rows.push(zz.map(|c| c.im));
    let w = missing_point(rng, &net(&rows), &known)?;
    known.push(w);

    // 2 Re(μ zzᵀ) + Σ μ_i v_iv_iᵀ = 0 with real μ_i; columns (Re μ, Im μ, μ_i).
    let mut cols = vec![zz.map(|c| 2.0 * c.re), zz.map(|c| -2.0 * c.im)];
    cols.extend(known.iter().map(|v| square(v.as_slice())));
    let x = relation(&cols)?;
    if !balanced(&x[2..]) || Complex::new(x[0], x[1]).norm() == 0.0 {
        return None;
    }
    let root = Complex::new(x[0], x[1]).sqrt();
    let mut zs: Vec<Complex<f64>> = z.iter().map(|c| c * root).collect();
    let c: Vec<f64> = x[2..].iter().map(|m| -m).collect();
    let mut real_points: Vec<Vec<f64>> =
        known.iter().zip(&c).map(|(v, c)| v.iter().map(|x| x * c.abs().sqrt()).collect()).collect();
    let scale = zs.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
    zs.iter_mut().for_each(|c| *c /= scale);
    real_points.iter_mut().flatten().for_each(|x| *x /= scale);
    let signs = c.iter().map(|c| if *c > 0.0 { 1 } else { -1 }).collect();
    Some(CayleyBacharachConfig { n: 4, kind: ConfigKind::ComplexPair, real_points, complex_point: Some(zs), signs, tensor_order: 2 })
}

/// Null vector of the 10 × 8 matrix with the given columns, if it is a
/// clean one-dimensional kernel.
fn relation(cols: &[[f64; 10]]) -> Option<Vec<f64>> {
    let a = DMatrix::from_fn(10, cols.len(), |i, j| cols[j][i]);
    let svd = a.svd(false, true);
    let vt = svd.v_t?;
    let s = &svd.singular_values;
    let (imin, _) = s.iter().enumerate().min_by(|a, b| a.1.total_cmp(b.1))?;
    let second = s.iter().enumerate().filter(|(i, _)| *i != imin).map(|(_, x)| *x).fold(f64::INFINITY, f64::min);
    (s[imin] < 1e-10 * second).then(|| vt.row(imin).iter().copied().collect())
}

fn generate(seed: u64, attempt: fn(&mut ChaCha8Rng) -> Option<CayleyBacharachConfig>) -> Result<CayleyBacharachConfig> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..ATTEMPTS {
        if let Some(cfg) = attempt(&mut rng) {
            if check_relation(&cfg)? <= tolerances::RELATION {
                return Ok(cfg);
            }
        }
    }
    Err(Error::GenerationFailed(ATTEMPTS))
}

/// A real quartic configuration with relation residual at most `1e−8`.
pub fn generate_cb_config(seed: u64) -> Result<CayleyBacharachConfig> {
    generate(seed, try_real)
}

/// A quartic configuration with a complex conjugate pair on the left.
pub fn generate_cb_config_complex(seed: u64) -> Result<CayleyBacharachConfig> {
    generate(seed, try_complex)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn real_configs() {
        for seed in 0..10 {
            let cfg = generate_cb_config(seed).unwrap();
            cfg.validate().unwrap();
            let r = check_relation(&cfg).unwrap();
            assert!(r <= 1e-10, "seed {seed}: {r:e}");
        }
        assert_eq!(generate_cb_config(3).unwrap(), generate_cb_config(3).unwrap());
    }

    #[test]
    fn complex_configs() {
        for seed in 0..10 {
            let cfg = generate_cb_config_complex(seed).unwrap();
            cfg.validate().unwrap();
            let r = check_relation(&cfg).unwrap();
            assert!(r <= 1e-10, "seed {seed}: {r:e}");
            assert!(cfg.complex_point.as_ref().unwrap().iter().any(|c| c.im.abs() > 1e-3));
        }
    }
}
