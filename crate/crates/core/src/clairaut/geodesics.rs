//! Conservation of `e^{h∘Ω} sin θ` along codomain geodesics, and the
//! umbilical characterization `H₂ = −∇^B h`.

use nalgebra::DVector;
use rand::Rng;

use super::{DeclaredFrames, FrameQuality, HSpec, PointFrames};
use crate::contact::ContactStructure;
use crate::error::{Error, Result};
use crate::geometry::{integrate_geodesic, GeodesicTrace};
use crate::linalg::{columns, lstsq, norm};
use crate::rmap::{MapAt, SmoothMapSpec};

/// Relative distance between `π∘γ` and `Ω` beyond which computed frames
/// cannot be used.
pub const IMAGE_TOLERANCE: f64 = 1e-6;

/// Random starts are drawn from the central half of the chart box.
pub const START_FRACTION: f64 = 0.5;

/// Initial data of one Clairaut trace.
#[derive(Clone, Debug, PartialEq)]
pub enum Start {
    /// `(Ω(0), Ω̇(0))` on the codomain.
    Codomain { point: DVector<f64>, velocity: DVector<f64> },
    /// `(p, v)` on the domain; `Ω(0) = π(p)` and `Ω̇(0) = π*v`.
    Lifted { point: DVector<f64>, velocity: DVector<f64> },
}

impl Start {
    /// Random codomain points with unit velocities.
    pub fn random_codomain<R: Rng>(map: &SmoothMapSpec, n: usize, rng: &mut R) -> Result<Vec<Start>> {
        let b = &map.codomain;
        let points = b.sample_points_inset(n, START_FRACTION, rng)?;
        points
            .into_iter()
            .map(|point| {
                let g = b.metric_at(point.as_slice())?;
                let raw = DVector::from_fn(b.dim(), |_, _| rng.gen_range(-1.0..1.0));
                let velocity = &raw / norm(&g, &raw);
                Ok(Start::Codomain { point, velocity })
            })
            .collect()
    }

    /// Random domain points with unit horizontal velocities, so that
    /// `π*v` is a unit vector of `range π*`.
    pub fn random_lifted<R: Rng>(map: &SmoothMapSpec, n: usize, rng: &mut R) -> Result<Vec<Start>> {
        let points = map.domain.sample_points_inset(n, START_FRACTION, rng)?;
        points
            .into_iter()
            .map(|point| {
                let at = MapAt::new(map, point.as_slice())?;
                let h = &at.frames.hker_frame;
                if h.is_empty() {
                    return Err(Error::EmptyDistribution { which: "(ker π*)⊥".into() });
                }
                let mut raw = DVector::zeros(map.domain.dim());
                for e in h {
                    raw.axpy(rng.gen_range(-1.0..1.0), e, 1.0);
                }
                let velocity = &raw / norm(at.g1(), &raw);
                Ok(Start::Lifted { point, velocity })
            })
            .collect()
    }
}

/// How `range π*` is known along a trace.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FrameSource {
    Declared,
    /// Pointwise decomposition at `γ(s)`, valid while `Ω = π∘γ`.
    Computed,
}

/// One sampled codomain geodesic with its Clairaut angle and invariant.
#[derive(Clone, Debug, PartialEq)]
pub struct ClairautGeodesicTrace {
    pub start: Start,
    pub base: GeodesicTrace,
    /// The domain geodesic for lifted starts.
    pub lifted: Option<GeodesicTrace>,
    pub frame_source: FrameSource,
    pub theta: Vec<f64>,
    pub invariant: Vec<f64>,
    /// `max |I(s) − I(0)| / |I(0)|`, absolute when `I(0) = 0`.
    pub drift: f64,
    /// `drift` divided by the arclength of the trace.
    pub drift_per_length: f64,
}

/// The umbilical characterization at one domain point.
#[derive(Clone, Debug, PartialEq)]
pub struct Def22Sample {
    pub point: DVector<f64>,
    pub image: DVector<f64>,
    pub umbilical_residual: f64,
    pub h2: DVector<f64>,
    pub grad_h: DVector<f64>,
    /// `‖H₂ + ∇^B h‖` in `g₂`.
    pub residual: f64,
    /// `(variant, H₂ components, ∇^B h components)` in each declared frame.
    pub components: Vec<(String, Vec<f64>, Vec<f64>)>,
}

/// Validity of one declared frame variant and whether it certifies
/// `H₂ = −∇^B h`.
#[derive(Clone, Debug, PartialEq)]
pub struct VariantReport {
    pub name: String,
    /// Largest principal angle to the computed spans, or the failure.
    pub validation: std::result::Result<f64, String>,
    pub quality: FrameQuality,
    pub satisfied: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ClairautReport {
    pub traces: Vec<ClairautGeodesicTrace>,
    pub max_drift_per_length: f64,
    pub invariant_passed: bool,
    pub def22: Vec<Def22Sample>,
    pub max_umbilical_residual: f64,
    pub max_def22_residual: f64,
    pub def22_passed: bool,
    pub variants: Vec<VariantReport>,
    pub passed: bool,
}

impl ClairautReport {
    pub fn def22_satisfied_by(&self) -> Vec<&str> {
        self.variants.iter().filter(|v| v.satisfied).map(|v| v.name.as_str()).collect()
    }
}

/// Integration and decision parameters of [`clairaut_geodesic_check`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ClairautParams {
    pub length: f64,
    pub step: f64,
    pub tol: f64,
}

fn angle(frames: &PointFrames, g: &nalgebra::DMatrix<f64>, v: &DVector<f64>, s: f64) -> Result<f64> {
    let r = frames.range_part(g, v);
    let u = v - &r;
    if norm(g, v) == 0.0 {
        return Err(Error::DegenerateVelocity { s });
    }
    Ok(norm(g, &r).atan2(norm(g, &u)))
}

/// Integrates one start and records θ and the Clairaut invariant along it.
/// Declared frames, when given, supply (range π*)⊥ along the trace.
pub fn clairaut_trace(
    map: &SmoothMapSpec,
    h: &HSpec,
    declared: Option<&DeclaredFrames>,
    start: &Start,
    params: ClairautParams,
) -> Result<ClairautGeodesicTrace> {
    let b = &map.codomain;
    let (omega0, omega_dot0, lifted) = match start {
        Start::Codomain { point, velocity } => {
            if declared.is_none() {
                return Err(Error::Invalid(
                    "codomain starts need declared range frames: range π* is unknown off the image".into(),
                ));
            }
            (point.clone(), velocity.clone(), None)
        }
        Start::Lifted { point, velocity } => {
            let at = MapAt::new(map, point.as_slice())?;
            let gamma = integrate_geodesic(&map.domain, point, velocity, params.length, params.step)?;
            (at.jet.image.clone(), at.push(velocity), Some(gamma))
        }
    };
    let base = integrate_geodesic(b, &omega0, &omega_dot0, params.length, params.step)?;
    let frame_source = if declared.is_some() { FrameSource::Declared } else { FrameSource::Computed };
    let mut theta = Vec::with_capacity(base.samples.len());
    let mut invariant = Vec::with_capacity(base.samples.len());
    for (i, sample) in base.samples.iter().enumerate() {
        let x = sample.point.as_slice();
        let g = b.metric_at(x)?;
        let frames = match declared {
            Some(d) => d.at(b, x)?,
            None => {
                let gamma = lifted.as_ref().expect("computed frames come with a lifted trace");
                let p = &gamma.samples[i].point;
                let at = MapAt::new(map, p.as_slice())?;
                let distance = (&at.jet.image - &sample.point).norm();
                if distance > IMAGE_TOLERANCE * (1.0 + sample.point.norm()) {
                    return Err(Error::OffImage { s: sample.s, distance });
                }
                PointFrames { range: at.frames.range_frame.clone(), rperp: at.frames.rperp_frame.clone() }
            }
        };
        let t = angle(&frames, &g, &sample.velocity, sample.s)?;
        theta.push(t);
        invariant.push(h.value(x)?.exp() * t.sin());
    }
    let i0 = invariant[0];
    let drift = invariant
        .iter()
        .map(|x| if i0 == 0.0 { (x - i0).abs() } else { (x - i0).abs() / i0.abs() })
        .fold(0.0, f64::max);
    let arclength = params.length * base.first().metric_norm;
    let drift_per_length = if arclength > 0.0 { drift / arclength } else { drift };
    Ok(ClairautGeodesicTrace { start: start.clone(), base, lifted, frame_source, theta, invariant, drift, drift_per_length })
}

fn frame_components(frames: &DeclaredFrames, p: &[f64], v: &DVector<f64>) -> Result<Vec<f64>> {
    let (r, n) = frames.raw(p)?;
    let all: Vec<DVector<f64>> = r.into_iter().chain(n).collect();
    let (x, _, _) = lstsq(&columns(&all, v.len()), v, f64::INFINITY)?;
    Ok(x.iter().copied().collect())
}

fn def22_at(map: &SmoothMapSpec, h: &HSpec, variants: &[DeclaredFrames], p: &DVector<f64>) -> Result<Def22Sample> {
    let at = MapAt::new(map, p.as_slice())?;
    let image = at.jet.image.clone();
    let fit = at.umbilical_fit();
    let grad_h = h.gradient(&map.codomain, image.as_slice())?;
    let residual = norm(at.g2(), &(&fit.h2 + &grad_h));
    let components = variants
        .iter()
        .map(|f| {
            Ok((
                f.name.clone(),
                frame_components(f, image.as_slice(), &fit.h2)?,
                frame_components(f, image.as_slice(), &grad_h)?,
            ))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Def22Sample {
        point: p.clone(),
        image,
        umbilical_residual: fit.residual,
        h2: fit.h2,
        grad_h,
        residual,
        components,
    })
}

/// Traces every start, measures the drift of `e^{h∘Ω} sin θ`, and checks
/// `H₂ = −∇^B h` at `def22_points` of the domain.
///
/// The first declared variant supplies `range π*` along the traces; with no
/// declared frames only lifted starts are possible.
pub fn clairaut_geodesic_check(
    map: &SmoothMapSpec,
    structure: &ContactStructure,
    h: &HSpec,
    variants: &[DeclaredFrames],
    starts: &[Start],
    def22_points: &[DVector<f64>],
    params: ClairautParams,
) -> Result<ClairautReport> {
    super::require_codomain(map, structure)?;
    let traces = starts
        .iter()
        .map(|s| clairaut_trace(map, h, variants.first(), s, params))
        .collect::<Result<Vec<_>>>()?;
    let max_drift_per_length = traces.iter().map(|t| t.drift_per_length).fold(0.0, f64::max);
    let invariant_passed = max_drift_per_length < params.tol;
    let def22 = def22_points.iter().map(|p| def22_at(map, h, variants, p)).collect::<Result<Vec<_>>>()?;
    let max_umbilical_residual = def22.iter().map(|d| d.umbilical_residual).fold(0.0, f64::max);
    let max_def22_residual = def22.iter().map(|d| d.residual).fold(0.0, f64::max);
    let def22_passed = max_umbilical_residual < params.tol && max_def22_residual < params.tol;
    let mut reports = Vec::with_capacity(variants.len());
    for f in variants {
        let mut validation = Ok(0.0);
        let mut quality = FrameQuality { orthonormality: 0.0, cross: 0.0 };
        for p in def22_points {
            match f.validate_against(map, p.as_slice(), params.tol) {
                Ok(a) => {
                    if let Ok(w) = validation.as_mut() {
                        *w = f64::max(*w, a);
                    }
                }
                Err(e) => {
                    validation = Err(e.to_string());
                    break;
                }
            }
            let image = map.eval(p.as_slice())?;
            let q = f.quality(&map.codomain, image.as_slice())?;
            quality.orthonormality = quality.orthonormality.max(q.orthonormality);
            quality.cross = quality.cross.max(q.cross);
        }
        let satisfied = validation.is_ok() && def22_passed && !def22_points.is_empty();
        reports.push(VariantReport { name: f.name.clone(), validation, quality, satisfied });
    }
    let passed = invariant_passed && def22_passed;
    Ok(ClairautReport {
        traces,
        max_drift_per_length,
        invariant_passed,
        def22,
        max_umbilical_residual,
        max_def22_residual,
        def22_passed,
        variants: reports,
        passed,
    })
}
