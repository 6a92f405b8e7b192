//! Dense primal-dual interior-point solver for small block-diagonal SDPs.
//!
//! Problems are stated in LMI form
//!
//! ```text
//! minimize  cᵀy  subject to  F0_j + Σ_i y_i F_ij ⪰ 0 (every block j),  A y = b.
//! ```
//!
//! Equalities are eliminated through a nullspace basis before the
//! interior-point iterations start, so the core loop only sees the
//! inequality part.

mod ipm;

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg;
use crate::tolerances;

pub use ipm::Settings;

/// One LMI block `F0 + Σ_i y_i F_i ⪰ 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct SdpBlock {
    pub f0: DMatrix<f64>,
    pub coeffs: Vec<DMatrix<f64>>,
}

impl SdpBlock {
    /// A zero block of the given size for `m` variables.
    pub fn zeros(size: usize, m: usize) -> Self {
        SdpBlock {
            f0: DMatrix::zeros(size, size),
            coeffs: vec![DMatrix::zeros(size, size); m],
        }
    }

    pub fn size(&self) -> usize {
        self.f0.nrows()
    }

    /// Adds `v` at `(r, c)` and `(c, r)` of `F_var`; `var = None` targets `F0`.
    pub fn add_sym(&mut self, var: Option<usize>, r: usize, c: usize, v: f64) {
        let m = match var {
            Some(i) => &mut self.coeffs[i],
            None => &mut self.f0,
        };
        m[(r, c)] += v;
        if r != c {
            m[(c, r)] += v;
        }
    }

    /// `F0 + Σ y_i F_i`
    pub fn slack(&self, y: &[f64]) -> DMatrix<f64> {
        let mut s = self.f0.clone();
        for (fi, &yi) in self.coeffs.iter().zip(y) {
            if yi != 0.0 {
                s += fi * yi;
            }
        }
        s
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SdpProblem {
    pub objective: Vec<f64>,
    pub blocks: Vec<SdpBlock>,
    pub eq_matrix: DMatrix<f64>,
    pub eq_rhs: Vec<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SdpStatus {
    Optimal,
    Infeasible,
    Unbounded,
    MaxIterations,
    NumericalFailure,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SdpSolution {
    pub status: SdpStatus,
    pub y: Vec<f64>,
    /// `F0_j + Σ y_i F_ij` at the returned `y`.
    pub slack_blocks: Vec<DMatrix<f64>>,
    /// Dual matrices `X_j ⪰ 0`.
    pub dual_blocks: Vec<DMatrix<f64>>,
    /// Multipliers of `A y = b`.
    pub eq_multipliers: Vec<f64>,
    /// `cᵀy`
    pub objective_value: f64,
    /// Lower bound `−Σ⟨F0_j, X_j⟩ + bᵀλ` from the dual iterate.
    pub dual_objective: f64,
    pub gap: f64,
    pub iterations: usize,
}

impl SdpSolution {
    pub fn is_optimal(&self) -> bool {
        self.status == SdpStatus::Optimal
    }
}

impl SdpProblem {
    /// An unconstrained problem in `m` variables; add blocks and equalities.
    pub fn new(objective: Vec<f64>) -> Self {
        let m = objective.len();
        SdpProblem {
            objective,
            blocks: Vec::new(),
            eq_matrix: DMatrix::zeros(0, m),
            eq_rhs: Vec::new(),
        }
    }

    pub fn num_vars(&self) -> usize {
        self.objective.len()
    }

    pub fn push_block(&mut self, block: SdpBlock) {
        self.blocks.push(block);
    }

    /// Appends the equality `Σ_i row_i y_i = rhs`.
    pub fn push_equality(&mut self, row: &[f64], rhs: f64) {
        let m = self.num_vars();
        assert_eq!(row.len(), m, "equality row has the wrong length");
        let p = self.eq_matrix.nrows();
        let mut a = self.eq_matrix.clone().resize(p + 1, m, 0.0);
        for (j, &v) in row.iter().enumerate() {
            a[(p, j)] = v;
        }
        self.eq_matrix = a;
        self.eq_rhs.push(rhs);
    }

    /// Bulk equality setter.
    pub fn set_equalities(&mut self, a: DMatrix<f64>, b: Vec<f64>) {
        self.eq_matrix = a;
        self.eq_rhs = b;
    }

    pub fn validate(&self) -> Result<()> {
        let m = self.num_vars();
        if m == 0 {
            return Err(Error::ShapeMismatch("an SDP needs at least one variable".into()));
        }
        if self.objective.iter().any(|c| !c.is_finite()) {
            return Err(Error::NonFinite);
        }
        for (j, b) in self.blocks.iter().enumerate() {
            let s = b.size();
            if s == 0 {
                return Err(Error::ShapeMismatch(format!("block {j} is empty")));
            }
            if b.coeffs.len() != m {
                return Err(Error::ShapeMismatch(format!(
                    "block {j} has {} coefficient matrices for {m} variables",
                    b.coeffs.len()
                )));
            }
            for mat in std::iter::once(&b.f0).chain(&b.coeffs) {
                if mat.nrows() != s || mat.ncols() != s {
                    return Err(Error::ShapeMismatch(format!("block {j} mixes matrix sizes")));
                }
                if mat.iter().any(|v| !v.is_finite()) {
                    return Err(Error::NonFinite);
                }
                let a = linalg::asymmetry(mat);
                if a > tolerances::SYMMETRY * mat.amax().max(1.0) {
                    return Err(Error::NotSymmetric(a));
                }
            }
        }
        if self.eq_matrix.ncols() != m || self.eq_matrix.nrows() != self.eq_rhs.len() {
            return Err(Error::ShapeMismatch(format!(
                "equality system is {}x{} with {} right-hand sides",
                self.eq_matrix.nrows(),
                self.eq_matrix.ncols(),
                self.eq_rhs.len()
            )));
        }
        Ok(())
    }

    /// Solves with default settings and the given tolerance.
    pub fn solve(&self, tol: f64) -> Result<SdpSolution> {
        solve(self, tol)
    }

    /// Debug dump.
    pub fn to_json(&self) -> serde_json::Value {
        let file = ProblemFile {
            objective: self.objective.clone(),
            blocks: self
                .blocks
                .iter()
                .map(|b| BlockFile {
                    size: b.size(),
                    f0: linalg::to_rows(&b.f0),
                    coeffs: b.coeffs.iter().map(linalg::to_rows).collect(),
                })
                .collect(),
            eq_matrix: (0..self.eq_matrix.nrows())
                .map(|i| self.eq_matrix.row(i).iter().copied().collect())
                .collect(),
            eq_rhs: self.eq_rhs.clone(),
        };
        serde_json::to_value(file).expect("problem dump serializes")
    }

    pub fn from_json(v: &serde_json::Value) -> Result<Self> {
        let file: ProblemFile = serde_json::from_value(v.clone()).map_err(|e| Error::Parse(e.to_string()))?;
        let m = file.objective.len();
        let mut prob = SdpProblem::new(file.objective);
        for b in file.blocks {
            let f0 = rows_to_matrix(&b.f0, b.size)?;
            let coeffs = b
                .coeffs
                .iter()
                .map(|c| rows_to_matrix(c, b.size))
                .collect::<Result<Vec<_>>>()?;
            prob.push_block(SdpBlock { f0, coeffs });
        }
        let p = file.eq_matrix.len();
        if file.eq_matrix.iter().any(|r| r.len() != m) {
            return Err(Error::ShapeMismatch("equality row length".into()));
        }
        prob.eq_matrix = DMatrix::from_fn(p, m, |i, j| file.eq_matrix[i][j]);
        prob.eq_rhs = file.eq_rhs;
        prob.validate()?;
        Ok(prob)
    }
}

fn rows_to_matrix(rows: &[Vec<f64>], size: usize) -> Result<DMatrix<f64>> {
    if rows.len() != size {
        return Err(Error::ShapeMismatch(format!("expected {size} rows, got {}", rows.len())));
    }
    linalg::from_rows(rows)
}

#[derive(Serialize, Deserialize)]
struct BlockFile {
    size: usize,
    f0: Vec<Vec<f64>>,
    coeffs: Vec<Vec<Vec<f64>>>,
}

#[derive(Serialize, Deserialize)]
struct ProblemFile {
    objective: Vec<f64>,
    blocks: Vec<BlockFile>,
    eq_matrix: Vec<Vec<f64>>,
    eq_rhs: Vec<f64>,
}

/// Solves `prob` to relative tolerance `tol` (within `[1e-12, 1e-2]`).
pub fn solve(prob: &SdpProblem, tol: f64) -> Result<SdpSolution> {
    solve_with(prob, &Settings { tol, ..Settings::default() })
}

pub fn solve_with(prob: &SdpProblem, settings: &Settings) -> Result<SdpSolution> {
    let (lo, hi) = tolerances::SDP_TOL_RANGE;
    if !(lo..=hi).contains(&settings.tol) {
        return Err(Error::OutOfRange(format!("tolerance {} outside [{lo:e}, {hi:e}]", settings.tol)));
    }
    prob.validate()?;
    ipm::run(prob, settings)
}

/// `‖A y − b‖₂`
pub fn equality_residual(prob: &SdpProblem, y: &[f64]) -> f64 {
    let yv = DVector::from_column_slice(y);
    let r = &prob.eq_matrix * yv - DVector::from_column_slice(&prob.eq_rhs);
    r.norm()
}
