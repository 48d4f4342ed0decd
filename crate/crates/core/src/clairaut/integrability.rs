//! Frobenius test for a distribution spanned by closed-form fields.

use nalgebra::DVector;

use crate::error::Result;
use crate::geometry::{lie_bracket, orthonormalize, project, ChartManifold, VectorFieldSpec};
use crate::linalg::{inner, norm};

#[derive(Clone, Debug, PartialEq)]
pub struct IntegrabilityReport {
    /// `max |g([X, Y], N)|` per point.
    pub per_point: Vec<f64>,
    pub max_residual: f64,
    pub integrable: bool,
}

/// Pairs every bracket `[X, Y]` of `frames` with a unit basis of the
/// directions of `complement` orthogonal to the distribution.
///
/// Fails with [`crate::Error::RankDeficient`] when the frames do not span
/// a distribution of full rank at some point.
pub fn integrability_check(
    manifold: &ChartManifold,
    frames: &[VectorFieldSpec],
    complement: &[VectorFieldSpec],
    points: &[DVector<f64>],
    tol: f64,
) -> Result<IntegrabilityReport> {
    let mut per_point = Vec::with_capacity(points.len());
    for p in points {
        let x = p.as_slice();
        let g = manifold.metric_at(x)?;
        let values = frames.iter().map(|f| f.eval(x)).collect::<Result<Vec<_>>>()?;
        let basis = orthonormalize(&values, &g)?;
        let normals: Vec<DVector<f64>> = complement
            .iter()
            .map(|f| f.eval(x).map(|v| &v - project(&v, &basis, &g)))
            .collect::<Result<_>>()?;
        let normals = orthonormalize(&normals, &g)?;
        let mut worst: f64 = 0.0;
        for (i, a) in frames.iter().enumerate() {
            for b in &frames[i + 1..] {
                let bracket = lie_bracket(manifold, a, b, x)?;
                for n in &normals {
                    worst = worst.max(inner(&g, &bracket, n).abs());
                }
            }
        }
        debug_assert!(normals.iter().all(|n| (norm(&g, n) - 1.0).abs() < 1e-9));
        per_point.push(worst);
    }
    let max_residual = per_point.iter().copied().fold(0.0, f64::max);
    Ok(IntegrabilityReport { per_point, max_residual, integrable: max_residual < tol })
}
