//! Metric Gram–Schmidt and subspace utilities at a single point.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::linalg::{cholesky, inner, norm};

/// Relative squared-norm threshold below which a Gram–Schmidt residual
/// counts as linearly dependent.
pub const DEPENDENCE_THRESHOLD: f64 = 1e-10;

/// Gram–Schmidt in the metric `g`, keeping the direction of each leading
/// vector. Every vector is orthogonalized twice against its predecessors.
pub fn orthonormalize(frame: &[DVector<f64>], g: &DMatrix<f64>) -> Result<Vec<DVector<f64>>> {
    let mut out: Vec<DVector<f64>> = Vec::with_capacity(frame.len());
    for (index, v) in frame.iter().enumerate() {
        let scale = inner(g, v, v);
        let mut r = v.clone();
        for _ in 0..2 {
            for q in &out {
                let c = inner(g, q, &r);
                r.axpy(-c, q, 1.0);
            }
        }
        let rr = inner(g, &r, &r);
        if !(scale > 0.0) || rr <= DEPENDENCE_THRESHOLD * scale {
            return Err(Error::RankDeficient { index });
        }
        out.push(r / rr.sqrt());
    }
    Ok(out)
}

/// `G[(i, j)] = g(fᵢ, fⱼ)`.
pub fn gram(frame: &[DVector<f64>], g: &DMatrix<f64>) -> DMatrix<f64> {
    let k = frame.len();
    DMatrix::from_fn(k, k, |i, j| inner(g, &frame[i], &frame[j]))
}

/// Orthogonal projection onto the span of a `g`-orthonormal frame.
pub fn project(v: &DVector<f64>, orthonormal: &[DVector<f64>], g: &DMatrix<f64>) -> DVector<f64> {
    let mut out = DVector::zeros(v.len());
    for q in orthonormal {
        out.axpy(inner(g, q, v), q, 1.0);
    }
    out
}

/// `g`-orthonormal basis of the orthogonal complement of the span of a
/// `g`-orthonormal frame, built greedily from coordinate directions.
pub fn orthogonal_complement(orthonormal: &[DVector<f64>], g: &DMatrix<f64>) -> Vec<DVector<f64>> {
    let n = g.nrows();
    let mut basis: Vec<DVector<f64>> = orthonormal.to_vec();
    let mut out = Vec::new();
    while basis.len() < n {
        let mut best: Option<(f64, DVector<f64>)> = None;
        for i in 0..n {
            let mut r = DVector::zeros(n);
            r[i] = 1.0;
            let scale = norm(g, &r);
            for _ in 0..2 {
                for q in &basis {
                    let c = inner(g, q, &r);
                    r.axpy(-c, q, 1.0);
                }
            }
            let rel = norm(g, &r) / scale;
            if best.as_ref().map_or(true, |(b, _)| rel > *b) {
                best = Some((rel, r));
            }
        }
        let (rel, r) = best.expect("n > 0");
        if rel < 1e-6 {
            break;
        }
        let q = &r / norm(g, &r);
        basis.push(q.clone());
        out.push(q);
    }
    out
}

/// Principal angles (ascending) between the spans of two frames of equal
/// size, computed from sines so that tiny angles keep full precision.
pub fn principal_angles(a: &[DVector<f64>], b: &[DVector<f64>], g: &DMatrix<f64>) -> Result<Vec<f64>> {
    if a.len() != b.len() {
        return Err(Error::DimensionMismatch { context: "principal angles".into(), expected: a.len(), found: b.len() });
    }
    if a.is_empty() {
        return Ok(Vec::new());
    }
    let qa = orthonormalize(a, g)?;
    let qb = orthonormalize(b, g)?;
    let lt = cholesky(g)?.transpose();
    let n = g.nrows();
    let mut residual = DMatrix::zeros(n, qb.len());
    for (j, v) in qb.iter().enumerate() {
        residual.set_column(j, &(&lt * (v - project(v, &qa, g))));
    }
    let mut sines: Vec<f64> = residual.svd(false, false).singular_values.iter().map(|s| s.min(1.0)).collect();
    sines.sort_by(|x, y| x.total_cmp(y));
    Ok(sines.into_iter().map(f64::asin).collect())
}
