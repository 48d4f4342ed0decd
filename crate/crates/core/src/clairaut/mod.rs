//! Anti-invariance, the `B`/`C` split, Clairaut checks along geodesics
//! and residual evaluators for the geodesic and Clairaut conditions.

mod geodesics;
mod integrability;
mod theorems;

pub use geodesics::{
    clairaut_geodesic_check, clairaut_trace, START_FRACTION, ClairautGeodesicTrace, ClairautParams, ClairautReport, Def22Sample, FrameSource, Start,
    VariantReport, IMAGE_TOLERANCE,
};
pub use integrability::{integrability_check, IntegrabilityReport};
pub use theorems::{
    thm31_residuals, thm32_residual, thm33_thm34_checks, Param, Term, Thm31Sample, Thm32Report, Thm32Sample, Thm33Report,
    TypeClass,
};

use nalgebra::{DMatrix, DVector};

use crate::contact::{estimate_type, ContactStructure};
use crate::error::{Error, Result};
use crate::expr::ScalarFieldExpr;
use crate::geometry::{gram, orthonormalize, principal_angles, project, ChartManifold, VectorFieldSpec};
use crate::linalg::{inner, invert_metric, norm};
use crate::rmap::{MapAt, SmoothMapSpec};

/// Reeb components below this fraction of `‖ξ‖` count as zero.
pub const REEB_RATIO: f64 = 1e-6;

/// Residual above which `π*Z = BU` is considered unsolvable.
pub const LIFT_TOLERANCE: f64 = 1e-8;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ReebPosition {
    /// `ξ ∈ range π*`
    Vertical,
    /// `ξ ∈ (range π*)⊥`
    Horizontal,
    Mixed,
}

impl ReebPosition {
    pub fn as_str(self) -> &'static str {
        match self {
            ReebPosition::Vertical => "vertical",
            ReebPosition::Horizontal => "horizontal",
            ReebPosition::Mixed => "mixed",
        }
    }
}

/// `g₂`-orthonormal bases of `range π*` and `(range π*)⊥` at a codomain
/// point.
#[derive(Clone, Debug, PartialEq)]
pub struct PointFrames {
    pub range: Vec<DVector<f64>>,
    pub rperp: Vec<DVector<f64>>,
}

impl PointFrames {
    pub fn range_part(&self, g: &DMatrix<f64>, v: &DVector<f64>) -> DVector<f64> {
        project(v, &self.range, g)
    }

    pub fn perp_part(&self, g: &DMatrix<f64>, v: &DVector<f64>) -> DVector<f64> {
        v - project(v, &self.range, g)
    }
}

/// Gram–Schmidt that drops vectors depending on their predecessors.
fn orthonormal_span(vectors: &[DVector<f64>], g: &DMatrix<f64>, rel: f64) -> Vec<DVector<f64>> {
    let mut out: Vec<DVector<f64>> = Vec::new();
    for v in vectors {
        let scale = norm(g, v);
        if scale == 0.0 {
            continue;
        }
        let mut r = v.clone();
        for _ in 0..2 {
            for q in &out {
                let c = inner(g, q, &r);
                r.axpy(-c, q, 1.0);
            }
        }
        let n = norm(g, &r);
        if n > rel * scale {
            out.push(r / n);
        }
    }
    out
}

/// `ψ(range π*)`, its complement `μ` in `(range π*)⊥` and the position of
/// the Reeb field.
#[derive(Clone, Debug, PartialEq)]
pub struct AntiInvariantSplit {
    /// `max ‖range part of ψR‖` over the range frame.
    pub residual: f64,
    pub is_anti_invariant: bool,
    pub frames: PointFrames,
    pub psi_range_frame: Vec<DVector<f64>>,
    pub mu_frame: Vec<DVector<f64>>,
    pub reeb_position: ReebPosition,
    pub xi_range_norm: f64,
    pub xi_perp_norm: f64,
    pub xi_mu_norm: f64,
    pub metric: DMatrix<f64>,
    pub psi: DMatrix<f64>,
}

impl AntiInvariantSplit {
    /// Builds the split from orthonormal frames at a codomain point.
    pub fn from_frames(
        metric: &DMatrix<f64>,
        psi: &DMatrix<f64>,
        xi: &DVector<f64>,
        frames: PointFrames,
        tol: f64,
    ) -> Self {
        let g = metric;
        let psi_r: Vec<DVector<f64>> = frames.range.iter().map(|r| psi * r).collect();
        let residual = psi_r.iter().map(|v| norm(g, &frames.range_part(g, v))).fold(0.0, f64::max);
        let psi_range_frame = orthonormal_span(&psi_r.iter().map(|v| frames.perp_part(g, v)).collect::<Vec<_>>(), g, 1e-8);
        let candidates: Vec<DVector<f64>> =
            frames.rperp.iter().map(|v| v - project(v, &psi_range_frame, g)).collect();
        let mut mu_frame = Vec::new();
        {
            // greedy: keep the largest residuals first so the basis is well conditioned
            let mut remaining = candidates;
            let target = frames.rperp.len().saturating_sub(psi_range_frame.len());
            let mut basis = psi_range_frame.clone();
            while mu_frame.len() < target {
                let best = remaining
                    .iter()
                    .enumerate()
                    .map(|(i, v)| (i, norm(g, &(v - project(v, &basis, g)))))
                    .max_by(|a, b| a.1.total_cmp(&b.1));
                let Some((i, n)) = best else { break };
                if n < 1e-8 {
                    break;
                }
                let v = remaining.swap_remove(i);
                let q = (&v - project(&v, &basis, g)) / n;
                basis.push(q.clone());
                mu_frame.push(q);
            }
        }
        let xi_norm = norm(g, xi);
        let xi_range_norm = norm(g, &frames.range_part(g, xi));
        let xi_perp_norm = norm(g, &frames.perp_part(g, xi));
        let xi_mu_norm = norm(g, &project(xi, &mu_frame, g));
        let reeb_position = if xi_range_norm <= REEB_RATIO * xi_norm {
            ReebPosition::Horizontal
        } else if xi_perp_norm <= REEB_RATIO * xi_norm {
            ReebPosition::Vertical
        } else {
            ReebPosition::Mixed
        };
        Self {
            residual,
            is_anti_invariant: residual < tol && !frames.range.is_empty(),
            frames,
            psi_range_frame,
            mu_frame,
            reeb_position,
            xi_range_norm,
            xi_perp_norm,
            xi_mu_norm,
            metric: metric.clone(),
            psi: psi.clone(),
        }
    }

    /// `det` of the Gram matrix of `ψ(range π*) ∪ μ`.
    pub fn gram_determinant(&self) -> f64 {
        let all: Vec<DVector<f64>> = self.psi_range_frame.iter().chain(&self.mu_frame).cloned().collect();
        gram(&all, &self.metric).determinant()
    }
}

pub(crate) fn require_codomain(map: &SmoothMapSpec, structure: &ContactStructure) -> Result<()> {
    if map.codomain.name() != structure.manifold.name() || map.codomain.dim() != structure.manifold.dim() {
        return Err(Error::StructureMismatch {
            structure: structure.manifold.name().to_string(),
            codomain: map.codomain.name().to_string(),
        });
    }
    Ok(())
}

/// Checks `ψ(range π*ₚ) ⊂ (range π*ₚ)⊥` at a domain point.
pub fn anti_invariance_check(
    map: &SmoothMapSpec,
    structure: &ContactStructure,
    p: &[f64],
    tol: f64,
) -> Result<AntiInvariantSplit> {
    require_codomain(map, structure)?;
    let at = MapAt::new(map, p)?;
    let image = at.jet.image.as_slice();
    let psi = structure.psi.eval(image)?;
    let xi = structure.xi.eval(image)?;
    let frames = PointFrames { range: at.frames.range_frame.clone(), rperp: at.frames.rperp_frame.clone() };
    Ok(AntiInvariantSplit::from_frames(at.g2(), &psi, &xi, frames, tol))
}

/// `ψV = BV + CV` with `BV ∈ range π*`, `CV ∈ (range π*)⊥`.
pub fn bc_split(split: &AntiInvariantSplit, v: &DVector<f64>) -> Result<(DVector<f64>, DVector<f64>)> {
    let g = &split.metric;
    let residual = norm(g, &split.frames.range_part(g, v));
    if residual > 1e-9 * (1.0 + norm(g, v)) {
        return Err(Error::NotOrthogonal { residual });
    }
    let psi_v = &split.psi * v;
    let b = split.frames.range_part(g, &psi_v);
    let c = &psi_v - &b;
    Ok((b, c))
}

/// Closed-form frame fields on the codomain declaring `range π*` and
/// `(range π*)⊥` away from the image of the map.
#[derive(Clone, Debug)]
pub struct DeclaredFrames {
    pub name: String,
    pub range: Vec<VectorFieldSpec>,
    pub rperp: Vec<VectorFieldSpec>,
}

/// How far declared frame fields are from being orthonormal.
#[derive(Clone, Debug, PartialEq)]
pub struct FrameQuality {
    /// `max |G − I|` over all declared fields.
    pub orthonormality: f64,
    /// `max |g₂(R, N)| / (‖R‖‖N‖)` between range and complement fields.
    pub cross: f64,
}

impl DeclaredFrames {
    pub fn raw(&self, p: &[f64]) -> Result<(Vec<DVector<f64>>, Vec<DVector<f64>>)> {
        let r = self.range.iter().map(|f| f.eval(p)).collect::<Result<Vec<_>>>()?;
        let n = self.rperp.iter().map(|f| f.eval(p)).collect::<Result<Vec<_>>>()?;
        Ok((r, n))
    }

    /// Orthonormalized frames at `p`; the complement is first projected off
    /// the declared range.
    pub fn at(&self, manifold: &ChartManifold, p: &[f64]) -> Result<PointFrames> {
        let g = manifold.metric_at(p)?;
        let (r, n) = self.raw(p)?;
        let range = orthonormalize(&r, &g)?;
        let projected: Vec<DVector<f64>> = n.iter().map(|v| v - project(v, &range, &g)).collect();
        let rperp = orthonormalize(&projected, &g)?;
        Ok(PointFrames { range, rperp })
    }

    pub fn quality(&self, manifold: &ChartManifold, p: &[f64]) -> Result<FrameQuality> {
        let g = manifold.metric_at(p)?;
        let (r, n) = self.raw(p)?;
        let all: Vec<DVector<f64>> = r.iter().chain(&n).cloned().collect();
        let k = all.len();
        let orthonormality = (gram(&all, &g) - DMatrix::identity(k, k)).amax();
        let mut cross: f64 = 0.0;
        for a in &r {
            for b in &n {
                cross = cross.max(inner(&g, a, b).abs() / (norm(&g, a) * norm(&g, b)));
            }
        }
        Ok(FrameQuality { orthonormality, cross })
    }

    /// Largest principal angle between the declared and computed spans at
    /// `π(p)`; fails with [`Error::FrameMismatch`] above `tol`.
    pub fn validate_against(&self, map: &SmoothMapSpec, p: &[f64], tol: f64) -> Result<f64> {
        let at = MapAt::new(map, p)?;
        let declared = self.at(&map.codomain, at.jet.image.as_slice())?;
        if declared.range.len() != at.frames.range_frame.len() || declared.rperp.len() != at.frames.rperp_frame.len() {
            return Err(Error::FrameMismatch { residual: f64::INFINITY });
        }
        let a = principal_angles(&declared.range, &at.frames.range_frame, at.g2())?;
        let b = principal_angles(&declared.rperp, &at.frames.rperp_frame, at.g2())?;
        let residual = a.iter().chain(&b).copied().fold(0.0, f64::max);
        if residual > tol {
            return Err(Error::FrameMismatch { residual });
        }
        Ok(residual)
    }
}

/// The function `h` of `r = e^h`.
#[derive(Clone, Debug)]
pub enum HSpec {
    Expr(ScalarFieldExpr),
    /// `h` is an unknown constant; the Clairaut invariant reduces to `sin θ`.
    FitConstant,
}

impl HSpec {
    pub fn value(&self, p: &[f64]) -> Result<f64> {
        match self {
            HSpec::Expr(e) => e.eval(p),
            HSpec::FitConstant => Ok(0.0),
        }
    }

    /// `∇^B h`, the `g₂`-raised differential.
    pub fn gradient(&self, manifold: &ChartManifold, p: &[f64]) -> Result<DVector<f64>> {
        match self {
            HSpec::Expr(e) => {
                let (_, dh) = e.eval_grad(p)?;
                Ok(invert_metric(&manifold.metric_at(p)?)? * dh)
            }
            HSpec::FitConstant => Ok(DVector::zeros(manifold.dim())),
        }
    }
}

/// `(α, β)` at a codomain point: the declared functions if present,
/// otherwise the pointwise fit.
pub fn structure_type_at(structure: &ContactStructure, p: &[f64]) -> Result<(f64, f64)> {
    match structure.declared_type_at(p)? {
        Some(t) => Ok(t),
        None => {
            let t = estimate_type(structure, p)?;
            Ok((t.alpha, t.beta))
        }
    }
}

/// Centered differences of equally spaced samples, second-order one-sided
/// at both ends.
pub(crate) fn derivative_along(values: &[DVector<f64>], h: f64) -> Result<Vec<DVector<f64>>> {
    let n = values.len();
    if n < 3 {
        return Err(Error::Invalid(format!("differentiating along a trace needs at least 3 samples, got {n}")));
    }
    Ok((0..n)
        .map(|i| {
            if i == 0 {
                (&values[1] * 4.0 - &values[0] * 3.0 - &values[2]) / (2.0 * h)
            } else if i == n - 1 {
                (&values[n - 1] * 3.0 - &values[n - 2] * 4.0 + &values[n - 3]) / (2.0 * h)
            } else {
                (&values[i + 1] - &values[i - 1]) / (2.0 * h)
            }
        })
        .collect())
}

pub(crate) fn scalar_derivative_along(values: &[f64], h: f64) -> Result<Vec<f64>> {
    let v: Vec<DVector<f64>> = values.iter().map(|x| DVector::from_element(1, *x)).collect();
    Ok(derivative_along(&v, h)?.into_iter().map(|d| d[0]).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::Interval;
    use std::sync::Arc;

    pub(crate) fn v(x: &[f64]) -> DVector<f64> {
        DVector::from_column_slice(x)
    }

    pub(crate) fn example_31() -> (SmoothMapSpec, ContactStructure) {
        let m = ChartManifold::new(
            "M",
            &["x", "y", "z"],
            vec![Interval::new(-10.0, 10.0); 3],
            &["x = 0", "y = 0", "z = 0"],
            &[vec!["3/8", "1/8", "0"], vec!["1/8", "3/8", "0"], vec!["0", "0", "1/4"]],
        )
        .unwrap();
        let b = Arc::new(
            ChartManifold::new(
                "B",
                &["u", "v", "w"],
                vec![Interval::new(-50.0, 50.0); 3],
                &["w = 0"],
                &[vec!["(1+v^2)/4", "0", "-v/4"], vec!["0", "1/4", "0"], vec!["-v/4", "0", "1/4"]],
            )
            .unwrap(),
        );
        let s = ContactStructure::new(
            "S",
            b.clone(),
            &[vec!["0", "1", "0"], vec!["-1", "0", "0"], vec!["0", "v", "0"]],
            &["0", "0", "2"],
            &["-v/2", "0", "1/2"],
            Some(("1", "0")),
        )
        .unwrap();
        (SmoothMapSpec::new("pi", Arc::new(m), b, &["0", "x+y", "0"]).unwrap(), s)
    }

    #[test]
    fn example_31_is_anti_invariant_with_horizontal_reeb() {
        let (map, s) = example_31();
        let split = anti_invariance_check(&map, &s, &[0.3, 0.4, 0.5], 1e-10).unwrap();
        assert!(split.is_anti_invariant && split.residual < 1e-14);
        assert_eq!(split.reeb_position, ReebPosition::Horizontal);
        assert_eq!((split.psi_range_frame.len(), split.mu_frame.len()), (1, 1));
        assert!((split.xi_mu_norm - 1.0).abs() < 1e-12);
        assert!(split.gram_determinant() > 1e-10);
        // ψE1 = E2 at v = 0.7
        let e2 = v(&[2.0, 0.0, 1.4]);
        assert!((&split.psi_range_frame[0] - &e2).amax() < 1e-12);
        // B/C split of E2: ψE2 = -E1 lies in range π*
        let (bv, cv) = bc_split(&split, &e2).unwrap();
        assert!((bv + v(&[0.0, 2.0, 0.0])).amax() < 1e-12 && cv.amax() < 1e-12);
        let xi = v(&[0.0, 0.0, 2.0]);
        let (bv, cv) = bc_split(&split, &xi).unwrap();
        assert!(bv.amax() == 0.0 && cv.amax() == 0.0);
        assert!(bc_split(&split, &v(&[0.0, 1.0, 0.0])).is_err());
    }

    #[test]
    fn identity_onto_b_is_not_anti_invariant() {
        let (map, s) = example_31();
        let id = SmoothMapSpec::new("id", map.codomain.clone(), map.codomain.clone(), &["u", "v", "w"]).unwrap();
        let split = anti_invariance_check(&id, &s, &[0.1, 0.2, 0.3], 1e-10).unwrap();
        assert!(!split.is_anti_invariant && split.residual > 0.5);
        assert_eq!(split.reeb_position, ReebPosition::Vertical);
    }

    #[test]
    fn structure_on_another_chart_is_rejected() {
        let (map, s) = example_31();
        let other = SmoothMapSpec::new("into_m", map.domain.clone(), map.domain.clone(), &["x", "y", "z"]).unwrap();
        assert!(matches!(anti_invariance_check(&other, &s, &[0.3, 0.4, 0.5], 1e-10), Err(Error::StructureMismatch { .. })));
    }

    #[test]
    fn derivative_of_quadratic_is_exact() {
        let h = 0.1;
        let vals: Vec<f64> = (0..6).map(|i| (i as f64 * h).powi(2)).collect();
        let d = scalar_derivative_along(&vals, h).unwrap();
        for (i, x) in d.iter().enumerate() {
            assert!((x - 2.0 * i as f64 * h).abs() < 1e-12);
        }
    }
}
