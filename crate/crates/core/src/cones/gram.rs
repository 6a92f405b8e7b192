//! Gram-matrix parametrizations of polynomial identities.
//!
//! A [`GramSystem`] encodes `zᵀ G z = rhs + Σ_e v_e · f_e` coefficient by
//! coefficient, where `z` is a monomial vector, `G` a symmetric matrix and
//! `v_e` free scalars. Assembly is exact in the scalar type; the conversion
//! to an [`SdpProblem`] rescales Gram entries by `√multinomial` of each basis
//! monomial and normalizes rows, which keeps high-degree problems well
//! conditioned.

use std::collections::BTreeMap;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::form::{Form, Monomial};
use crate::linalg;
use crate::scalar::{multinomial, Scalar};
use crate::sdp::{SdpBlock, SdpProblem, SdpSolution};

#[derive(Debug, Clone)]
struct Row<S> {
    /// Gram pairs `(j, k)`, `j ≤ k`, whose product lands on this monomial.
    pairs: Vec<(usize, usize)>,
    extra: BTreeMap<usize, S>,
    rhs: S,
}

#[derive(Debug, Clone)]
pub struct GramSystem<S: Scalar> {
    basis: Vec<Monomial>,
    nvars: usize,
    extras: usize,
    rows: BTreeMap<Monomial, Row<S>>,
    weights: Vec<f64>,
}

/// Where each SDP variable lives.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GramLayout {
    pub size: usize,
    pub gram_vars: usize,
    pub extras: usize,
    /// Index of the margin variable `t` in `G − tI ⪰ 0`, when present.
    pub margin: Option<usize>,
}

impl GramLayout {
    pub fn gram_index(&self, j: usize, k: usize) -> usize {
        let (j, k) = if j <= k { (j, k) } else { (k, j) };
        k * (k + 1) / 2 + j
    }

    pub fn extra_index(&self, e: usize) -> usize {
        self.gram_vars + e
    }

    pub fn num_vars(&self) -> usize {
        self.gram_vars + self.extras + usize::from(self.margin.is_some())
    }
}

impl<S: Scalar> GramSystem<S> {
    pub fn new(basis: Vec<Monomial>, extras: usize) -> Self {
        let nvars = basis.first().map(|m| m.n()).unwrap_or(0);
        let mut rows: BTreeMap<Monomial, Row<S>> = BTreeMap::new();
        for k in 0..basis.len() {
            for j in 0..=k {
                rows.entry(basis[j].mul(&basis[k]))
                    .or_insert_with(|| Row { pairs: Vec::new(), extra: BTreeMap::new(), rhs: S::zero() })
                    .pairs
                    .push((j, k));
            }
        }
        let weights = basis
            .iter()
            .map(|m| multinomial::<f64>(m.exponents()).sqrt())
            .collect();
        GramSystem { basis, nvars, extras, rows, weights }
    }

    pub fn basis(&self) -> &[Monomial] {
        &self.basis
    }

    fn row_mut(&mut self, m: &Monomial) -> &mut Row<S> {
        self.rows
            .entry(m.clone())
            .or_insert_with(|| Row { pairs: Vec::new(), extra: BTreeMap::new(), rhs: S::zero() })
    }

    fn check_form(&self, f: &Form<S>) -> Result<()> {
        if f.n() != self.nvars {
            return Err(Error::DimensionMismatch { expected: self.nvars, got: f.n() });
        }
        let degree = 2 * self.basis.first().map(|m| m.degree()).unwrap_or(0);
        if f.degree() != degree && !f.is_zero() {
            return Err(Error::DegreeMismatch { left: degree, right: f.degree() });
        }
        Ok(())
    }

    /// `rhs += f`
    pub fn add_target(&mut self, f: &Form<S>) -> Result<()> {
        self.check_form(f)?;
        for (m, c) in f.terms() {
            let row = self.row_mut(m);
            row.rhs = row.rhs.clone() + c.clone();
        }
        Ok(())
    }

    /// Adds `v_e · f` on the right-hand side.
    pub fn add_extra(&mut self, e: usize, f: &Form<S>) -> Result<()> {
        assert!(e < self.extras, "extra variable out of range");
        self.check_form(f)?;
        for (m, c) in f.terms() {
            let row = self.row_mut(m);
            let slot = row.extra.entry(e).or_insert_with(S::zero);
            *slot = slot.clone() + c.clone();
        }
        Ok(())
    }

    /// Rows whose right-hand side cannot be matched by any Gram entry are
    /// constraints on the extras alone; they stay in the system.
    pub fn num_rows(&self) -> usize {
        self.rows.len()
    }

    /// SDP with variables `[Gram upper triangle, extras, (t)]`, the Gram LMI
    /// (as `G − tI ⪰ 0` plus `t ≤ 1` when `margin`), and one equality per
    /// monomial. The objective is zero except `−t` with a margin.
    pub fn to_problem(&self, margin: bool) -> (SdpProblem, GramLayout) {
        let size = self.basis.len();
        let gram_vars = size * (size + 1) / 2;
        let layout = GramLayout {
            size,
            gram_vars,
            extras: self.extras,
            margin: margin.then_some(gram_vars + self.extras),
        };
        let m = layout.num_vars();
        let mut objective = vec![0.0; m];
        if let Some(t) = layout.margin {
            objective[t] = -1.0;
        }
        let mut prob = SdpProblem::new(objective);
        let mut block = SdpBlock::zeros(size, m);
        for k in 0..size {
            for j in 0..=k {
                block.add_sym(Some(layout.gram_index(j, k)), j, k, 1.0);
            }
        }
        if let Some(t) = layout.margin {
            for j in 0..size {
                block.add_sym(Some(t), j, j, -1.0);
            }
            prob.push_block(block);
            let mut bound = SdpBlock::zeros(1, m);
            bound.add_sym(None, 0, 0, 1.0);
            bound.add_sym(Some(t), 0, 0, -1.0);
            prob.push_block(bound);
        } else {
            prob.push_block(block);
        }

        let mut a = DMatrix::zeros(self.rows.len(), m);
        let mut b = vec![0.0; self.rows.len()];
        for (r, row) in self.rows.values().enumerate() {
            for &(j, k) in &row.pairs {
                let mult = if j == k { 1.0 } else { 2.0 };
                a[(r, layout.gram_index(j, k))] += mult * self.weights[j] * self.weights[k];
            }
            for (&e, c) in &row.extra {
                a[(r, layout.extra_index(e))] -= c.as_f64();
            }
            b[r] = row.rhs.as_f64();
            let scale = a.row(r).amax();
            if scale > 0.0 {
                a.row_mut(r).scale_mut(1.0 / scale);
                b[r] /= scale;
            }
        }
        prob.set_equalities(a, b);
        (prob, layout)
    }

    /// Gram matrix in the original (unscaled) monomial basis.
    pub fn gram_from(&self, layout: &GramLayout, y: &[f64]) -> DMatrix<f64> {
        DMatrix::from_fn(layout.size, layout.size, |j, k| {
            y[layout.gram_index(j, k)] * self.weights[j] * self.weights[k]
        })
    }

    /// Same matrix after discarding negative eigenvalues of the scaled Gram.
    pub fn clipped_gram_from(&self, layout: &GramLayout, y: &[f64]) -> DMatrix<f64> {
        let scaled = DMatrix::from_fn(layout.size, layout.size, |j, k| y[layout.gram_index(j, k)]);
        let clipped = linalg::clip_psd(&scaled);
        DMatrix::from_fn(layout.size, layout.size, |j, k| clipped[(j, k)] * self.weights[j] * self.weights[k])
    }

    /// Largest coefficient mismatch of `zᵀGz = rhs + Σ v_e f_e`.
    pub fn residual(&self, gram: &DMatrix<f64>, extras: &[f64]) -> f64 {
        let mut worst: f64 = 0.0;
        for row in self.rows.values() {
            let mut lhs = 0.0;
            for &(j, k) in &row.pairs {
                lhs += if j == k { gram[(j, j)] } else { gram[(j, k)] + gram[(k, j)] };
            }
            let mut rhs = row.rhs.as_f64();
            for (&e, c) in &row.extra {
                rhs += c.as_f64() * extras[e];
            }
            worst = worst.max((lhs - rhs).abs());
        }
        worst
    }

    pub fn extras_from(&self, layout: &GramLayout, y: &[f64]) -> Vec<f64> {
        (0..self.extras).map(|e| y[layout.extra_index(e)]).collect()
    }

    pub fn margin_from(&self, layout: &GramLayout, sol: &SdpSolution) -> Option<f64> {
        layout.margin.map(|t| sol.y[t])
    }
}

/// PSD Gram matrix with its monomial basis.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GramCertificate {
    /// Exponent vectors of the monomials in `z`.
    pub basis: Vec<Vec<u32>>,
    pub gram: Vec<Vec<f64>>,
    /// Largest coefficient mismatch of the reconstructed identity.
    pub residual: f64,
    pub min_eigenvalue: f64,
    /// Optimal margin `t*` of `G − tI ⪰ 0` before clipping.
    pub margin: f64,
}

impl GramCertificate {
    pub(crate) fn new<S: Scalar>(sys: &GramSystem<S>, gram: DMatrix<f64>, extras: &[f64], margin: f64) -> Result<Self> {
        let residual = sys.residual(&gram, extras);
        let min_eigenvalue = linalg::min_eigenvalue(&linalg::symmetrize(&gram))?;
        Ok(GramCertificate {
            basis: sys.basis.iter().map(|m| m.exponents().to_vec()).collect(),
            gram: linalg::to_rows(&gram),
            residual,
            min_eigenvalue,
            margin,
        })
    }

    /// `zᵀ G z`
    pub fn reconstruct(&self) -> Form<f64> {
        let nvars = self.basis.first().map(|b| b.len()).unwrap_or(1);
        let degree = 2 * self.basis.first().map(|b| b.iter().sum()).unwrap_or(0);
        let mut out = Form::zero(nvars, degree);
        for (j, bj) in self.basis.iter().enumerate() {
            for (k, bk) in self.basis.iter().enumerate() {
                let e: Vec<u32> = bj.iter().zip(bk).map(|(a, b)| a + b).collect();
                out = &out + &Form::monomial(&e, self.gram[j][k]);
            }
        }
        out
    }

    /// Factor vectors `√λ_i v_i`; `p = Σ_i (v_i · z)²`.
    pub fn squares(&self) -> Vec<Vec<f64>> {
        let g = linalg::from_rows(&self.gram).expect("square gram");
        let eig = nalgebra::SymmetricEigen::new(linalg::symmetrize(&g));
        let mut out = Vec::new();
        for (i, &lam) in eig.eigenvalues.iter().enumerate() {
            if lam > 0.0 {
                out.push(eig.eigenvectors.column(i).iter().map(|v| v * lam.sqrt()).collect());
            }
        }
        out
    }
}
