//! Infeasible-start path following with Nesterov-Todd scaling and a Mehrotra
//! predictor-corrector step.
//!
//! After equality elimination the problem is put in standard form
//!
//! ```text
//! (P) min ⟨C, X⟩  s.t. ⟨A_k, X⟩ = b_k, X ⪰ 0
//! (D) max bᵀy     s.t. Z = C − Σ y_k A_k ⪰ 0
//! ```
//!
//! where `(D)` is the LMI with its variables negated.

use log::debug;
use nalgebra::{DMatrix, DVector};

use super::{SdpProblem, SdpSolution, SdpStatus};
use crate::error::Result;
use crate::linalg;

#[derive(Debug, Clone, PartialEq)]
pub struct Settings {
    pub tol: f64,
    pub max_iter: usize,
    /// Fraction of the distance to the cone boundary taken per step.
    pub step_fraction: f64,
}

impl Default for Settings {
    fn default() -> Self {
        Settings { tol: crate::tolerances::SDP_TOL, max_iter: 200, step_fraction: 0.98 }
    }
}

/// Singular values below this fraction of the largest count as zero.
const RANK_TOL: f64 = 1e-10;

pub(super) fn run(prob: &SdpProblem, settings: &Settings) -> Result<SdpSolution> {
    let m = prob.num_vars();
    let Some((y0, null)) = eliminate_equalities(prob) else {
        return Ok(trivial(prob, vec![0.0; m], SdpStatus::Infeasible));
    };
    let reduced = Reduced::new(prob, &y0, &null);

    // Directions invisible to every block: the objective must vanish there.
    let (basis, lost_cost) = reduced.injective_basis();
    let c_red = &reduced.cost;
    let mut std = reduced.standard_form(&basis);
    if lost_cost > RANK_TOL.sqrt() * (1.0 + c_red.norm()) {
        // Feasible ⇒ unbounded; otherwise infeasible.
        std.b.fill(0.0);
        let feasible = if basis.ncols() == 0 {
            psd_within(&std.c, settings.tol)
        } else {
            std.solve(settings).0 == SdpStatus::Optimal
        };
        let status = if feasible { SdpStatus::Unbounded } else { SdpStatus::Infeasible };
        return Ok(trivial(prob, y0.as_slice().to_vec(), status));
    }
    if basis.ncols() == 0 {
        let status = if psd_within(&std.c, settings.tol) { SdpStatus::Optimal } else { SdpStatus::Infeasible };
        return Ok(finish(prob, &reduced, &null, &basis, &y0, &DVector::zeros(0), &DMatrix::zeros(std.dim(), std.dim()), status, 0));
    }
    let (status, x, y_std, iterations) = std.solve(settings);
    // LMI variables in the reduced basis are w = −y (standard-form sign).
    Ok(finish(prob, &reduced, &null, &basis, &y0, &(-y_std), &x, status, iterations))
}

fn psd_within(c: &DMatrix<f64>, tol: f64) -> bool {
    c.nrows() == 0 || linalg::min_eigenvalue(&linalg::symmetrize(c)).is_ok_and(|lam| lam >= -tol * (1.0 + c.norm()))
}

/// Particular solution and nullspace basis of `A y = b`; `None` when inconsistent.
fn eliminate_equalities(prob: &SdpProblem) -> Option<(DVector<f64>, DMatrix<f64>)> {
    let m = prob.num_vars();
    let p = prob.eq_matrix.nrows();
    if p == 0 {
        return Some((DVector::zeros(m), DMatrix::identity(m, m)));
    }
    let rows = p.max(m);
    let a = prob.eq_matrix.clone().resize(rows, m, 0.0);
    let mut b = DVector::zeros(rows);
    for (i, &v) in prob.eq_rhs.iter().enumerate() {
        b[i] = v;
    }
    let svd = a.svd(true, true);
    let u = svd.u.as_ref().expect("requested U");
    let vt = svd.v_t.as_ref().expect("requested V");
    let smax = svd.singular_values.max();
    let thr = RANK_TOL * smax.max(f64::MIN_POSITIVE);
    let mut y0 = DVector::zeros(m);
    let mut null_cols = Vec::new();
    for (i, &s) in svd.singular_values.iter().enumerate() {
        let v = vt.row(i).transpose();
        if s > thr {
            y0 += &v * (u.column(i).dot(&b) / s);
        } else {
            null_cols.push(v);
        }
    }
    let resid = (&prob.eq_matrix * &y0 - DVector::from_column_slice(&prob.eq_rhs)).norm();
    let bnorm = DVector::from_column_slice(&prob.eq_rhs).norm();
    if resid > 1e-8 * (1.0 + bnorm) {
        return None;
    }
    let null = if null_cols.is_empty() { DMatrix::zeros(m, 0) } else { DMatrix::from_columns(&null_cols) };
    Some((y0, null))
}

/// Block data after substituting `y = y0 + N w`, assembled densely.
struct Reduced {
    offsets: Vec<usize>,
    c0: DMatrix<f64>,
    coeffs: Vec<DMatrix<f64>>,
    cost: DVector<f64>,
}

impl Reduced {
    fn new(prob: &SdpProblem, y0: &DVector<f64>, null: &DMatrix<f64>) -> Self {
        let mut offsets = vec![0];
        for b in &prob.blocks {
            offsets.push(offsets.last().unwrap() + b.size());
        }
        let total = *offsets.last().unwrap();
        let k = null.ncols();
        let mut c0 = DMatrix::zeros(total, total);
        let mut coeffs = vec![DMatrix::zeros(total, total); k];
        for (j, b) in prob.blocks.iter().enumerate() {
            let (o, s) = (offsets[j], b.size());
            c0.view_mut((o, o), (s, s)).copy_from(&b.slack(y0.as_slice()));
            for (i, fi) in b.coeffs.iter().enumerate() {
                if fi.iter().all(|v| *v == 0.0) {
                    continue;
                }
                for l in 0..k {
                    let w = null[(i, l)];
                    if w != 0.0 {
                        let mut view = coeffs[l].view_mut((o, o), (s, s));
                        view += fi * w;
                    }
                }
            }
        }
        let c = DVector::from_column_slice(&prob.objective);
        let cost = null.transpose() * c;
        Reduced { offsets, c0, coeffs, cost }
    }

    /// Orthonormal basis `R` of directions on which `w ↦ Σ w_l F_l` is
    /// injective, plus the size of the cost living on its complement.
    fn injective_basis(&self) -> (DMatrix<f64>, f64) {
        let k = self.coeffs.len();
        if k == 0 {
            return (DMatrix::zeros(0, 0), 0.0);
        }
        let n = self.c0.nrows();
        let len = n * (n + 1) / 2;
        let rows = len.max(k);
        let mut mat = DMatrix::zeros(rows, k);
        for (l, f) in self.coeffs.iter().enumerate() {
            for (r, v) in svec(f).iter().enumerate() {
                mat[(r, l)] = *v;
            }
        }
        let svd = mat.svd(false, true);
        let vt = svd.v_t.expect("requested V");
        let smax = svd.singular_values.max();
        let thr = RANK_TOL * smax.max(f64::MIN_POSITIVE);
        let mut keep = Vec::new();
        let mut lost: f64 = 0.0;
        for (i, &s) in svd.singular_values.iter().enumerate() {
            let v = vt.row(i).transpose();
            if s > thr && smax > 0.0 {
                keep.push(v);
            } else {
                lost = lost.max(v.dot(&self.cost).abs());
            }
        }
        let basis = if keep.is_empty() { DMatrix::zeros(k, 0) } else { DMatrix::from_columns(&keep) };
        (basis, lost)
    }

    fn standard_form(&self, basis: &DMatrix<f64>) -> Standard {
        let n = self.c0.nrows();
        let a: Vec<DMatrix<f64>> = (0..basis.ncols())
            .map(|j| {
                let mut acc = DMatrix::zeros(n, n);
                for (l, f) in self.coeffs.iter().enumerate() {
                    let w = basis[(l, j)];
                    if w != 0.0 {
                        acc += f * w;
                    }
                }
                acc
            })
            .collect();
        let b = if basis.ncols() == 0 { DVector::zeros(0) } else { basis.transpose() * &self.cost };
        Standard { c: self.c0.clone(), a, b }
    }
}

/// Symmetric vectorization with `√2` on off-diagonal entries.
fn svec(m: &DMatrix<f64>) -> Vec<f64> {
    let n = m.nrows();
    let mut out = Vec::with_capacity(n * (n + 1) / 2);
    for j in 0..n {
        for i in 0..=j {
            out.push(if i == j { m[(i, j)] } else { m[(i, j)] * std::f64::consts::SQRT_2 });
        }
    }
    out
}

struct Standard {
    c: DMatrix<f64>,
    a: Vec<DMatrix<f64>>,
    b: DVector<f64>,
}

fn inner(a: &DMatrix<f64>, b: &DMatrix<f64>) -> f64 {
    a.dot(b)
}

/// Largest `α` with `X + α ΔX ⪰ 0` given `L = chol(X)`; `∞` when unlimited.
fn max_step(l: &DMatrix<f64>, dx: &DMatrix<f64>) -> f64 {
    let Some(t1) = l.solve_lower_triangular(dx) else { return 0.0 };
    let Some(t2) = l.solve_lower_triangular(&t1.transpose()) else { return 0.0 };
    let t = linalg::symmetrize(&t2);
    let lam = nalgebra::SymmetricEigen::new(t).eigenvalues.min();
    if lam >= 0.0 {
        f64::INFINITY
    } else {
        -1.0 / lam
    }
}

fn chol(m: &DMatrix<f64>) -> Option<DMatrix<f64>> {
    m.clone().cholesky().map(|c| c.l())
}

/// Iterations without improving the best merit before giving up.
const STALL_ITERATIONS: usize = 8;

struct Best {
    merit: f64,
    iterate: Option<Iterate>,
    since: usize,
}

#[derive(Clone)]
struct Iterate {
    x: DMatrix<f64>,
    y: DVector<f64>,
    z: DMatrix<f64>,
}

impl Standard {
    fn dim(&self) -> usize {
        self.c.nrows()
    }

    fn op(&self, x: &DMatrix<f64>) -> DVector<f64> {
        DVector::from_iterator(self.a.len(), self.a.iter().map(|ak| inner(ak, x)))
    }

    fn adj(&self, y: &DVector<f64>) -> DMatrix<f64> {
        let n = self.dim();
        let mut out = DMatrix::zeros(n, n);
        for (ak, &yk) in self.a.iter().zip(y.iter()) {
            out += ak * yk;
        }
        out
    }

    /// Returns `(status, X, y, iterations)` in unscaled standard-form units.
    fn solve(&self, settings: &Settings) -> (SdpStatus, DMatrix<f64>, DVector<f64>, usize) {
        let n = self.dim();
        let k = self.a.len();
        let sc = self.c.norm().max(1.0);
        let sb = self.b.norm().max(1.0);
        let c = &self.c / sc;
        let b = &self.b / sb;
        let scaled = Standard { c, a: self.a.clone(), b };
        let nf = n as f64;
        let anorm = self.a.iter().map(|a| a.norm()).fold(0.0, f64::max);
        let xi = (10.0f64)
            .max(nf.sqrt())
            .max(nf.sqrt() * scaled.b.iter().zip(&self.a).map(|(bk, ak)| (1.0 + bk.abs()) / (1.0 + ak.norm())).fold(0.0, f64::max));
        let eta = (10.0f64).max(nf.sqrt()).max(anorm).max(scaled.c.norm());
        let mut it = Iterate { x: DMatrix::identity(n, n) * xi, y: DVector::zeros(k), z: DMatrix::identity(n, n) * eta };
        let (status, iters) = scaled.iterate(&mut it, settings, sb, sc);
        (status, it.x * sb, it.y * sc, iters)
    }

    /// Runs the iteration; on breakdown the best iterate seen (by the largest
    /// of the three stopping measures) is restored.
    fn iterate(&self, it: &mut Iterate, settings: &Settings, sb: f64, sc: f64) -> (SdpStatus, usize) {
        let mut best = Best { merit: f64::INFINITY, iterate: None, since: 0 };
        let (status, iters) = self.iterate_inner(it, settings, sb, sc, &mut best);
        if matches!(status, SdpStatus::NumericalFailure | SdpStatus::MaxIterations) {
            if let Some(b) = best.iterate {
                debug!("restoring best iterate, merit {:.2e}", best.merit);
                *it = b;
            }
        }
        (status, iters)
    }

    /// Stopping tests are measured in the units of the unscaled data, where
    /// `b` and `C` are `sb` and `sc` times larger.
    fn iterate_inner(&self, it: &mut Iterate, settings: &Settings, sb: f64, sc: f64, best: &mut Best) -> (SdpStatus, usize) {
        let n = self.dim();
        let tol = settings.tol;
        let bnorm = self.b.norm() * sb;
        let cnorm = self.c.norm() * sc;
        let s = sb * sc;
        for iter in 0..settings.max_iter {
            let rp = &self.b - self.op(&it.x);
            let rd = &self.c - &it.z - self.adj(&it.y);
            let pobj = inner(&self.c, &it.x);
            let dobj = self.b.dot(&it.y);
            let xz = inner(&it.x, &it.z);
            let mu = xz / n as f64;
            let relgap = s * (pobj - dobj).abs().max(xz.abs()) / (1.0 + s * (pobj.abs() + dobj.abs()));
            let pinf = sb * rp.norm() / (1.0 + bnorm);
            let dinf = sc * rd.norm() / (1.0 + cnorm);
            debug!("iter {iter}: pobj {pobj:.10e} dobj {dobj:.10e} gap {relgap:.2e} pinf {pinf:.2e} dinf {dinf:.2e}");
            if relgap <= tol && pinf <= tol && dinf <= tol {
                return (SdpStatus::Optimal, iter);
            }
            let merit = relgap.max(pinf).max(dinf);
            if merit < best.merit {
                best.merit = merit;
                best.iterate = Some(it.clone());
                best.since = 0;
            } else {
                best.since += 1;
                if best.since >= STALL_ITERATIONS {
                    return (SdpStatus::NumericalFailure, iter);
                }
            }
            // Farkas-type rays.
            if pobj < 0.0 && self.op(&it.x).norm() <= tol * -pobj && it.x.norm() > 1.0 / tol.sqrt() {
                return (SdpStatus::Infeasible, iter);
            }
            if dobj > 0.0 && it.y.norm() > 1.0 / tol.sqrt() {
                let ray = self.adj(&it.y) / -dobj;
                if let Ok(lam) = linalg::min_eigenvalue(&linalg::symmetrize(&ray)) {
                    if lam >= -tol * (1.0 + ray.norm()) {
                        return (SdpStatus::Unbounded, iter);
                    }
                }
            }

            let (Some(lx), Some(lz)) = (chol(&it.x), chol(&it.z)) else {
                return (SdpStatus::NumericalFailure, iter);
            };
            let svd = (lz.transpose() * &lx).svd(false, true);
            let q = svd.v_t.expect("requested V").transpose();
            let lam = svd.singular_values.clone();
            if lam.iter().any(|&v| v <= 0.0 || !v.is_finite()) {
                return (SdpStatus::NumericalFailure, iter);
            }
            let g = &lx * &q * DMatrix::from_diagonal(&lam.map(|v| 1.0 / v.sqrt()));
            let Some(ginv) = g.clone().try_inverse() else {
                return (SdpStatus::NumericalFailure, iter);
            };
            let w = &g * g.transpose();
            let waw: Vec<DMatrix<f64>> = self.a.iter().map(|ak| &w * ak * &w).collect();
            let kk = self.a.len();
            let mut schur = DMatrix::zeros(kk, kk);
            for i in 0..kk {
                for j in 0..=i {
                    let v = inner(&self.a[i], &waw[j]);
                    schur[(i, j)] = v;
                    schur[(j, i)] = v;
                }
            }
            let Some(solver) = SchurSolver::new(schur) else {
                return (SdpStatus::NumericalFailure, iter);
            };
            let wrdw = &w * &rd * &w;
            let direction = |rc: &DMatrix<f64>| {
                let h = &rp - self.op(&(rc - &wrdw));
                let dy = solver.solve(&h);
                let dz = linalg::symmetrize(&(&rd - self.adj(&dy)));
                let dx = linalg::symmetrize(&(rc - &w * &dz * &w));
                (dx, dy, dz)
            };

            // Predictor.
            let (dxa, _, dza) = direction(&(-&it.x));
            let ap = max_step(&lx, &dxa).min(1.0);
            let ad = max_step(&lz, &dza).min(1.0);
            let xz_aff = inner(&(&it.x + &dxa * ap), &(&it.z + &dza * ad));
            let sigma = if xz > 0.0 { (xz_aff / xz).clamp(0.0, 1.0).powi(3) } else { 0.0 };

            // Corrector in the scaled space where X̃ = Z̃ = diag(λ).
            let dxt = &ginv * &dxa * ginv.transpose();
            let dzt = g.transpose() * &dza * &g;
            let prod = &dxt * &dzt;
            let mut d = DMatrix::zeros(n, n);
            for i in 0..n {
                for j in 0..n {
                    let mut r = -0.5 * (prod[(i, j)] + prod[(j, i)]);
                    if i == j {
                        r += sigma * mu - lam[i] * lam[i];
                    }
                    d[(i, j)] = 2.0 * r / (lam[i] + lam[j]);
                }
            }
            let rc = &g * d * g.transpose();
            let (dx, dy, dz) = direction(&rc);
            let ap = (settings.step_fraction * max_step(&lx, &dx)).min(1.0);
            let ad = (settings.step_fraction * max_step(&lz, &dz)).min(1.0);
            if !(ap.is_finite() && ad.is_finite()) || (ap < 1e-12 && ad < 1e-12) {
                return (SdpStatus::NumericalFailure, iter);
            }
            it.x = linalg::symmetrize(&(&it.x + dx * ap));
            it.y += dy * ad;
            it.z = linalg::symmetrize(&(&it.z + dz * ad));
        }
        (SdpStatus::MaxIterations, settings.max_iter)
    }
}

enum Factor {
    Chol(nalgebra::Cholesky<f64, nalgebra::Dyn>),
    Lu(nalgebra::LU<f64, nalgebra::Dyn, nalgebra::Dyn>),
}

/// Factored Schur complement; solves are polished by iterative refinement
/// against the unfactored matrix.
struct SchurSolver {
    m: DMatrix<f64>,
    factor: Factor,
}

const REFINE_STEPS: usize = 3;

impl SchurSolver {
    fn new(m: DMatrix<f64>) -> Option<Self> {
        if let Some(c) = m.clone().cholesky() {
            return Some(SchurSolver { m, factor: Factor::Chol(c) });
        }
        let scale = m.diagonal().amax().max(f64::MIN_POSITIVE);
        let reg = &m + DMatrix::identity(m.nrows(), m.nrows()) * (1e-13 * scale);
        if let Some(c) = reg.cholesky() {
            return Some(SchurSolver { m, factor: Factor::Chol(c) });
        }
        let lu = m.clone().lu();
        lu.is_invertible().then_some(SchurSolver { m, factor: Factor::Lu(lu) })
    }

    fn solve_once(&self, h: &DVector<f64>) -> DVector<f64> {
        match &self.factor {
            Factor::Chol(c) => c.solve(h),
            Factor::Lu(l) => l.solve(h).unwrap_or_else(|| DVector::zeros(h.len())),
        }
    }

    fn solve(&self, h: &DVector<f64>) -> DVector<f64> {
        let mut x = self.solve_once(h);
        let mut err = (h - &self.m * &x).norm();
        for _ in 0..REFINE_STEPS {
            if err <= f64::EPSILON * h.norm() {
                break;
            }
            let cand = &x + self.solve_once(&(h - &self.m * &x));
            let cand_err = (h - &self.m * &cand).norm();
            if cand_err >= err {
                break;
            }
            x = cand;
            err = cand_err;
        }
        x
    }
}

fn trivial(prob: &SdpProblem, y: Vec<f64>, status: SdpStatus) -> SdpSolution {
    let value = match status {
        SdpStatus::Unbounded => f64::NEG_INFINITY,
        _ => f64::INFINITY,
    };
    SdpSolution {
        status,
        slack_blocks: prob.blocks.iter().map(|b| b.slack(&y)).collect(),
        dual_blocks: prob.blocks.iter().map(|b| DMatrix::zeros(b.size(), b.size())).collect(),
        eq_multipliers: vec![0.0; prob.eq_rhs.len()],
        y,
        objective_value: value,
        dual_objective: value,
        gap: f64::INFINITY,
        iterations: 0,
    }
}

#[allow(clippy::too_many_arguments)]
fn finish(
    prob: &SdpProblem,
    reduced: &Reduced,
    null: &DMatrix<f64>,
    basis: &DMatrix<f64>,
    y0: &DVector<f64>,
    w: &DVector<f64>,
    x: &DMatrix<f64>,
    status: SdpStatus,
    iterations: usize,
) -> SdpSolution {
    let y = if basis.ncols() == 0 { y0.clone() } else { y0 + null * (basis * w) };
    let yv: Vec<f64> = y.iter().copied().collect();
    let c = DVector::from_column_slice(&prob.objective);
    let objective_value = c.dot(&y);
    let dual_objective = c.dot(y0) - inner(&reduced.c0, x);
    let dual_blocks: Vec<DMatrix<f64>> = prob
        .blocks
        .iter()
        .enumerate()
        .map(|(j, b)| {
            let o = reduced.offsets[j];
            x.view((o, o), (b.size(), b.size())).into_owned()
        })
        .collect();
    // c − F*(X) = Aᵀλ
    let mut resid = c.clone();
    for (b, xj) in prob.blocks.iter().zip(&dual_blocks) {
        for (i, fi) in b.coeffs.iter().enumerate() {
            resid[i] -= inner(fi, xj);
        }
    }
    let eq_multipliers = if prob.eq_rhs.is_empty() {
        Vec::new()
    } else {
        prob.eq_matrix
            .transpose()
            .svd(true, true)
            .solve(&resid, RANK_TOL)
            .map(|l| l.iter().copied().collect())
            .unwrap_or_else(|_| vec![0.0; prob.eq_rhs.len()])
    };
    SdpSolution {
        status,
        slack_blocks: prob.blocks.iter().map(|b| b.slack(&yv)).collect(),
        dual_blocks,
        eq_multipliers,
        y: yv,
        objective_value,
        dual_objective,
        gap: (objective_value - dual_objective).abs(),
        iterations,
    }
}
