//! Small dense symmetric helpers on top of nalgebra.

use nalgebra::{DMatrix, SymmetricEigen};

use crate::error::{Error, Result};
use crate::tolerances;

/// Largest `|M_ij − M_ji|`.
pub fn asymmetry(m: &DMatrix<f64>) -> f64 {
    let mut worst: f64 = 0.0;
    for i in 0..m.nrows() {
        for j in 0..i {
            worst = worst.max((m[(i, j)] - m[(j, i)]).abs());
        }
    }
    worst
}

fn check_symmetric(m: &DMatrix<f64>) -> Result<()> {
    if !m.is_square() {
        return Err(Error::ShapeMismatch(format!("{}x{} matrix is not square", m.nrows(), m.ncols())));
    }
    let scale = m.amax().max(1.0);
    let a = asymmetry(m);
    if a > tolerances::SYMMETRY * scale {
        return Err(Error::NotSymmetric(a));
    }
    Ok(())
}

/// Eigenvalues in ascending order.
pub fn eigenvalues(m: &DMatrix<f64>) -> Result<Vec<f64>> {
    check_symmetric(m)?;
    if m.nrows() == 0 {
        return Ok(Vec::new());
    }
    let mut ev: Vec<f64> = SymmetricEigen::new(m.clone()).eigenvalues.iter().copied().collect();
    ev.sort_by(f64::total_cmp);
    Ok(ev)
}

pub fn min_eigenvalue(m: &DMatrix<f64>) -> Result<f64> {
    Ok(eigenvalues(m)?.first().copied().unwrap_or(f64::INFINITY))
}

/// Row-major convenience wrapper.
pub fn min_eigenvalue_rows(rows: &[Vec<f64>]) -> Result<f64> {
    min_eigenvalue(&from_rows(rows)?)
}

pub fn from_rows(rows: &[Vec<f64>]) -> Result<DMatrix<f64>> {
    let n = rows.len();
    if rows.iter().any(|r| r.len() != n) {
        return Err(Error::ShapeMismatch("rows of unequal length".into()));
    }
    Ok(DMatrix::from_fn(n, n, |i, j| rows[i][j]))
}

pub fn to_rows(m: &DMatrix<f64>) -> Vec<Vec<f64>> {
    (0..m.nrows()).map(|i| m.row(i).iter().copied().collect()).collect()
}

/// `(M + Mᵀ)/2`
pub fn symmetrize(m: &DMatrix<f64>) -> DMatrix<f64> {
    (m + m.transpose()) * 0.5
}

/// Nearest PSD matrix in Frobenius norm: negative eigenvalues set to zero.
pub fn clip_psd(m: &DMatrix<f64>) -> DMatrix<f64> {
    let eig = SymmetricEigen::new(symmetrize(m));
    let vals = eig.eigenvalues.map(|v| v.max(0.0));
    &eig.eigenvectors * DMatrix::from_diagonal(&vals) * eig.eigenvectors.transpose()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn min_eigenvalue_examples() {
        let d = DMatrix::from_row_slice(2, 2, &[3.0, 0.0, 0.0, -2.0]);
        assert!((min_eigenvalue(&d).unwrap() + 2.0).abs() < 1e-12);
        let m = DMatrix::from_row_slice(2, 2, &[2.0, 1.0, 1.0, 2.0]);
        assert!((min_eigenvalue(&m).unwrap() - 1.0).abs() < 1e-12);
        let h = DMatrix::from_row_slice(2, 2, &[2.0, 4.0, 4.0, 2.0]);
        assert!((min_eigenvalue(&h).unwrap() + 2.0).abs() < 1e-12);
    }

    #[test]
    fn rejects_asymmetric() {
        let m = DMatrix::from_row_slice(2, 2, &[1.0, 2.0, 0.0, 1.0]);
        assert!(matches!(min_eigenvalue(&m), Err(Error::NotSymmetric(_))));
    }

    #[test]
    fn clipping_removes_negative_part() {
        let h = DMatrix::from_row_slice(2, 2, &[2.0, 4.0, 4.0, 2.0]);
        let c = clip_psd(&h);
        assert!(min_eigenvalue(&symmetrize(&c)).unwrap() > -1e-12);
        // eigenvalues 6 and −2 along (1,1) and (1,−1): keeps 3·[[1,1],[1,1]]
        assert!((c[(0, 1)] - 3.0).abs() < 1e-12);
    }
}
