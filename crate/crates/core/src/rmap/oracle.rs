//! Finite-difference reconstruction of `(∇π*)(W, Z)` that shares no code
//! with the jet-based evaluation.

use nalgebra::{DMatrix, DVector};

use super::SmoothMapSpec;
use crate::error::Result;
use crate::geometry::ChartManifold;

fn fd_gamma(m: &ChartManifold, p: &DVector<f64>, a: &DVector<f64>, b: &DVector<f64>, h: f64) -> Result<DVector<f64>> {
    let n = p.len();
    let g = m.metric_at(p.as_slice())?;
    let gi = g.try_inverse().unwrap_or_else(|| DMatrix::from_element(n, n, f64::NAN));
    let mut dg = Vec::with_capacity(n);
    for l in 0..n {
        let mut plus = p.clone();
        let mut minus = p.clone();
        plus[l] += h;
        minus[l] -= h;
        dg.push((m.metric_at(plus.as_slice())? - m.metric_at(minus.as_slice())?) / (2.0 * h));
    }
    let lowered = DVector::from_fn(n, |l, _| {
        let mut s = 0.0;
        for i in 0..n {
            for j in 0..n {
                s += 0.5 * (dg[i][(l, j)] + dg[j][(l, i)] - dg[l][(i, j)]) * a[i] * b[j];
            }
        }
        s
    });
    Ok(gi * lowered)
}

/// `(∇π*)(W, Z)` from central differences of the map components and of
/// both metrics, with step `h`.
pub fn sff_finite_difference(
    map: &SmoothMapSpec,
    p: &[f64],
    w: &DVector<f64>,
    z: &DVector<f64>,
    h: f64,
) -> Result<DVector<f64>> {
    let p = DVector::from_column_slice(p);
    let f = |d: DVector<f64>| map.eval((&p + d).as_slice());
    let hess = (f((w + z) * h)? - f((w - z) * h)? - f((z - w) * h)? + f(-(w + z) * h)?) / (4.0 * h * h);
    let push = |x: &DVector<f64>| -> Result<DVector<f64>> { Ok((f(x * h)? - f(x * -h)?) / (2.0 * h)) };
    let gamma_m = fd_gamma(&map.domain, &p, w, z, h)?;
    let image = map.eval(p.as_slice())?;
    let gamma_b = fd_gamma(&map.codomain, &image, &push(w)?, &push(z)?, h)?;
    Ok(hess - push(&gamma_m)? + gamma_b)
}
