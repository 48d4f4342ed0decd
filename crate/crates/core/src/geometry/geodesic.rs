//! Fixed-step RK4 integration of the geodesic equation.

use nalgebra::DVector;

use super::{ChartManifold, ConnectionAt};
use crate::error::{Error, Result};
use crate::linalg::norm;

/// Relative speed drift beyond which a run is rejected as under-resolved.
pub const MAX_SPEED_DRIFT: f64 = 1e-3;

#[derive(Clone, Debug, PartialEq)]
pub struct GeodesicSample {
    pub s: f64,
    pub point: DVector<f64>,
    pub velocity: DVector<f64>,
    pub metric_norm: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct GeodesicTrace {
    pub samples: Vec<GeodesicSample>,
    pub step: f64,
}

impl GeodesicTrace {
    pub fn first(&self) -> &GeodesicSample {
        &self.samples[0]
    }

    pub fn last(&self) -> &GeodesicSample {
        self.samples.last().expect("traces are never empty")
    }

    pub fn length(&self) -> f64 {
        self.last().s - self.first().s
    }

    /// `max |‖γ̇‖ − ‖γ̇(0)‖| / ‖γ̇(0)‖`, zero for a constant curve.
    pub fn speed_drift(&self) -> f64 {
        let n0 = self.first().metric_norm;
        if n0 == 0.0 {
            return 0.0;
        }
        self.samples.iter().map(|x| (x.metric_norm - n0).abs() / n0).fold(0.0, f64::max)
    }
}

fn acceleration(m: &ChartManifold, x: &DVector<f64>, v: &DVector<f64>) -> Result<DVector<f64>> {
    let conn = ConnectionAt::new(m, x.as_slice())?;
    Ok(-conn.gamma.contract(v, v))
}

fn speed(m: &ChartManifold, x: &DVector<f64>, v: &DVector<f64>) -> Result<f64> {
    Ok(norm(&m.metric_at(x.as_slice())?, v))
}

/// Integrates `ẋ = v, v̇ᵏ = −Γᵏ_ij vⁱ vʲ` from `(p0, v0)` over `length`,
/// using `round(length/step)` equal steps and recording every step.
pub fn integrate_geodesic(
    manifold: &ChartManifold,
    p0: &DVector<f64>,
    v0: &DVector<f64>,
    length: f64,
    step: f64,
) -> Result<GeodesicTrace> {
    manifold.require_contains(p0.as_slice())?;
    if v0.len() != manifold.dim() {
        return Err(Error::DimensionMismatch { context: "initial velocity".into(), expected: manifold.dim(), found: v0.len() });
    }
    if !(step > 0.0) || !(length >= 0.0) || !step.is_finite() || !length.is_finite() {
        return Err(Error::Invalid(format!("geodesic needs step > 0 and length >= 0, got step {step}, length {length}")));
    }
    let n = (length / step).round().max(if length > 0.0 { 1.0 } else { 0.0 }) as usize;
    let h = if n == 0 { step } else { length / n as f64 };
    let n0 = speed(manifold, p0, v0)?;
    let mut samples = Vec::with_capacity(n + 1);
    samples.push(GeodesicSample { s: 0.0, point: p0.clone(), velocity: v0.clone(), metric_norm: n0 });
    let (mut x, mut v) = (p0.clone(), v0.clone());
    for i in 1..=n {
        let s = i as f64 * h;
        let exit = |x: &DVector<f64>| Error::DomainExit { s: s - h, point: x.as_slice().to_vec() };
        let stage = |xs: &DVector<f64>, vs: &DVector<f64>| -> Result<DVector<f64>> {
            if !manifold.contains(xs.as_slice()) {
                return Err(exit(&x));
            }
            acceleration(manifold, xs, vs)
        };
        let k1v = stage(&x, &v)?;
        let k1x = v.clone();
        let x2 = &x + &k1x * (h / 2.0);
        let v2 = &v + &k1v * (h / 2.0);
        let k2v = stage(&x2, &v2)?;
        let k2x = v2;
        let x3 = &x + &k2x * (h / 2.0);
        let v3 = &v + &k2v * (h / 2.0);
        let k3v = stage(&x3, &v3)?;
        let k3x = v3;
        let x4 = &x + &k3x * h;
        let v4 = &v + &k3v * h;
        let k4v = stage(&x4, &v4)?;
        let k4x = v4;
        let xn = &x + (k1x + &k2x * 2.0 + &k3x * 2.0 + k4x) * (h / 6.0);
        let vn = &v + (k1v + &k2v * 2.0 + &k3v * 2.0 + k4v) * (h / 6.0);
        if !manifold.contains(xn.as_slice()) {
            return Err(exit(&x));
        }
        let metric_norm = speed(manifold, &xn, &vn)?;
        if n0 > 0.0 {
            let drift = (metric_norm - n0).abs() / n0;
            if drift > MAX_SPEED_DRIFT {
                return Err(Error::StepTooLarge { drift });
            }
        }
        x = xn;
        v = vn;
        samples.push(GeodesicSample { s, point: x.clone(), velocity: v.clone(), metric_norm });
    }
    Ok(GeodesicTrace { samples, step: h })
}
