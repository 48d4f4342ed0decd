//! Small dense linear-algebra helpers shared by the geometry modules.

use nalgebra::{DMatrix, DVector, SymmetricEigen};

use crate::error::{Error, Result};

/// Condition number above which a metric is treated as singular.
pub const METRIC_CONDITION_LIMIT: f64 = 1e12;

/// `aᵀ g b`.
pub fn inner(g: &DMatrix<f64>, a: &DVector<f64>, b: &DVector<f64>) -> f64 {
    (a.transpose() * g * b)[(0, 0)]
}

pub fn norm(g: &DMatrix<f64>, a: &DVector<f64>) -> f64 {
    inner(g, a, a).max(0.0).sqrt()
}

/// Eigenvalues of a symmetric matrix, ascending.
pub fn sym_eigenvalues(m: &DMatrix<f64>) -> Vec<f64> {
    let mut ev: Vec<f64> = SymmetricEigen::new(m.clone()).eigenvalues.iter().copied().collect();
    ev.sort_by(|a, b| a.total_cmp(b));
    ev
}

/// Inverts a metric by LU with partial pivoting after checking its
/// conditioning.
pub fn invert_metric(g: &DMatrix<f64>) -> Result<DMatrix<f64>> {
    let ev = sym_eigenvalues(g);
    let (lo, hi) = (ev[0], ev[ev.len() - 1]);
    if lo <= 0.0 {
        if lo.abs() <= hi / METRIC_CONDITION_LIMIT {
            return Err(Error::SingularMetric { condition: f64::INFINITY });
        }
        return Err(Error::NotPositiveDefinite { min_eigenvalue: lo });
    }
    let condition = hi / lo;
    if condition > METRIC_CONDITION_LIMIT {
        return Err(Error::SingularMetric { condition });
    }
    g.clone()
        .lu()
        .try_inverse()
        .ok_or(Error::SingularMetric { condition: f64::INFINITY })
}

/// Least-squares solution of `a x ≈ b` via SVD.
///
/// Returns the solution, the residual norm `‖a x − b‖` and the condition
/// number of `a`; fails when the condition number exceeds `max_condition`.
pub fn lstsq(a: &DMatrix<f64>, b: &DVector<f64>, max_condition: f64) -> Result<(DVector<f64>, f64, f64)> {
    let svd = a.clone().svd(true, true);
    let smax = svd.singular_values.max();
    let smin = svd.singular_values.min();
    let condition = if smin > 0.0 { smax / smin } else { f64::INFINITY };
    if !(condition <= max_condition) {
        return Err(Error::DegenerateFit { condition });
    }
    let x = svd
        .solve(b, 0.0)
        .map_err(|e| Error::Invalid(format!("least squares failed: {e}")))?;
    let residual = (a * &x - b).norm();
    Ok((x, residual, condition))
}

/// Lower Cholesky factor of a symmetric positive-definite matrix.
pub fn cholesky(g: &DMatrix<f64>) -> Result<DMatrix<f64>> {
    g.clone()
        .cholesky()
        .map(|c| c.l())
        .ok_or_else(|| Error::NotPositiveDefinite { min_eigenvalue: sym_eigenvalues(g)[0] })
}

/// Stacks vectors as the columns of a matrix with `rows` rows.
pub fn columns(vectors: &[DVector<f64>], rows: usize) -> DMatrix<f64> {
    let mut m = DMatrix::zeros(rows, vectors.len());
    for (j, v) in vectors.iter().enumerate() {
        m.set_column(j, v);
    }
    m
}
