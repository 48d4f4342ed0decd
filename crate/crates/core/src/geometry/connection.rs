//! Levi-Civita connection of a chart metric.

use nalgebra::{DMatrix, DVector};

use super::{ChartManifold, CovectorField, TensorField11, VectorFieldSpec};
use crate::error::Result;
use crate::linalg::invert_metric;

/// `Γᵏ_ij`, stored densely and symmetric in `i, j`.
#[derive(Clone, Debug, PartialEq)]
pub struct Christoffel {
    dim: usize,
    data: Vec<f64>,
}

impl Christoffel {
    pub fn zeros(dim: usize) -> Self {
        Self { dim, data: vec![0.0; dim * dim * dim] }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn get(&self, k: usize, i: usize, j: usize) -> f64 {
        self.data[(k * self.dim + i) * self.dim + j]
    }

    #[inline]
    fn set(&mut self, k: usize, i: usize, j: usize, v: f64) {
        self.data[(k * self.dim + i) * self.dim + j] = v;
    }

    /// `Γᵏ_ij aⁱ bʲ`.
    pub fn contract(&self, a: &DVector<f64>, b: &DVector<f64>) -> DVector<f64> {
        let n = self.dim;
        DVector::from_fn(n, |k, _| {
            let mut s = 0.0;
            for i in 0..n {
                if a[i] == 0.0 {
                    continue;
                }
                for j in 0..n {
                    s += self.get(k, i, j) * a[i] * b[j];
                }
            }
            s
        })
    }

    /// Matrix `M[(k, j)] = Γᵏ_ij wⁱ`, the connection one-form along `w`.
    pub fn along(&self, w: &DVector<f64>) -> DMatrix<f64> {
        let n = self.dim;
        DMatrix::from_fn(n, n, |k, j| (0..n).map(|i| self.get(k, i, j) * w[i]).sum())
    }
}

/// Metric, inverse and Christoffel symbols at a point.
#[derive(Clone, Debug)]
pub struct ConnectionAt {
    pub metric: DMatrix<f64>,
    pub inverse: DMatrix<f64>,
    pub gamma: Christoffel,
}

impl ConnectionAt {
    pub fn new(manifold: &ChartManifold, p: &[f64]) -> Result<Self> {
        let (g, dg) = manifold.metric_with_derivatives(p)?;
        let inverse = invert_metric(&g)?;
        let n = g.nrows();
        let mut gamma = Christoffel::zeros(n);
        if dg.iter().any(|d| d.iter().any(|x| *x != 0.0)) {
            // lowered symbols Γ_lij = ½(∂ᵢ g_jl + ∂ⱼ g_il − ∂ₗ g_ij)
            let mut lowered = vec![0.0; n * n * n];
            for l in 0..n {
                for i in 0..n {
                    for j in 0..n {
                        lowered[(l * n + i) * n + j] = 0.5 * (dg[i][(j, l)] + dg[j][(i, l)] - dg[l][(i, j)]);
                    }
                }
            }
            for k in 0..n {
                for i in 0..n {
                    for j in i..n {
                        let v: f64 = (0..n).map(|l| inverse[(k, l)] * lowered[(l * n + i) * n + j]).sum();
                        gamma.set(k, i, j, v);
                        gamma.set(k, j, i, v);
                    }
                }
            }
        }
        Ok(Self { metric: g, inverse, gamma })
    }
}

/// Christoffel symbols of the Levi-Civita connection at `p`.
pub fn christoffel(manifold: &ChartManifold, p: &[f64]) -> Result<Christoffel> {
    manifold.require_contains(p)?;
    Ok(ConnectionAt::new(manifold, p)?.gamma)
}

/// `(∇_W V)ᵏ = Wⁱ ∂ᵢVᵏ + Γᵏ_ij Wⁱ Vʲ`.
pub fn covariant_derivative_vector(
    manifold: &ChartManifold,
    field: &VectorFieldSpec,
    direction: &DVector<f64>,
    p: &[f64],
) -> Result<DVector<f64>> {
    manifold.require_contains(p)?;
    let conn = ConnectionAt::new(manifold, p)?;
    let (v, dv) = field.eval_with_jacobian(p)?;
    Ok(&dv * direction + conn.gamma.contract(direction, &v))
}

/// `(∇_W T)ᵏ_j = Wⁱ(∂ᵢTᵏ_j + Γᵏ_il Tˡ_j − Γˡ_ij Tᵏ_l)`.
pub fn covariant_derivative_tensor11(
    manifold: &ChartManifold,
    tensor: &TensorField11,
    direction: &DVector<f64>,
    p: &[f64],
) -> Result<DMatrix<f64>> {
    manifold.require_contains(p)?;
    let conn = ConnectionAt::new(manifold, p)?;
    let (t, dt) = tensor.eval_with_derivatives(p)?;
    Ok(tensor11_derivative(&conn, &t, &dt, direction))
}

pub(crate) fn tensor11_derivative(
    conn: &ConnectionAt,
    t: &DMatrix<f64>,
    dt: &[DMatrix<f64>],
    w: &DVector<f64>,
) -> DMatrix<f64> {
    let mut out = DMatrix::zeros(t.nrows(), t.ncols());
    for (i, d) in dt.iter().enumerate() {
        if w[i] != 0.0 {
            out += d * w[i];
        }
    }
    let omega = conn.gamma.along(w);
    out + &omega * t - t * &omega
}

/// `(∇_W ω)_j = Wⁱ(∂ᵢω_j − Γˡ_ij ω_l)`.
pub fn covariant_derivative_covector(
    manifold: &ChartManifold,
    form: &CovectorField,
    direction: &DVector<f64>,
    p: &[f64],
) -> Result<DVector<f64>> {
    manifold.require_contains(p)?;
    let conn = ConnectionAt::new(manifold, p)?;
    let (w, dw) = form.eval_with_jacobian(p)?;
    Ok(covector_derivative(&conn, &w, &dw, direction))
}

pub(crate) fn covector_derivative(
    conn: &ConnectionAt,
    form: &DVector<f64>,
    jac: &DMatrix<f64>,
    w: &DVector<f64>,
) -> DVector<f64> {
    let omega = conn.gamma.along(w);
    jac * w - omega.transpose() * form
}

/// `[X, Y]ᵏ = Xⁱ ∂ᵢYᵏ − Yⁱ ∂ᵢXᵏ`.
pub fn lie_bracket(
    manifold: &ChartManifold,
    x: &VectorFieldSpec,
    y: &VectorFieldSpec,
    p: &[f64],
) -> Result<DVector<f64>> {
    manifold.require_contains(p)?;
    let (xv, dx) = x.eval_with_jacobian(p)?;
    let (yv, dy) = y.eval_with_jacobian(p)?;
    Ok(&dy * &xv - &dx * &yv)
}
