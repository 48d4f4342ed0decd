use nalgebra::{DMatrix, DVector};

use super::ChartManifold;
use crate::error::{Error, Result};
use crate::expr::ScalarFieldExpr;

fn parse_list<S: AsRef<str>>(m: &ChartManifold, texts: &[S], what: &str, expected: usize) -> Result<Vec<ScalarFieldExpr>> {
    if texts.len() != expected {
        return Err(Error::DimensionMismatch { context: format!("{what} on `{}`", m.name()), expected, found: texts.len() });
    }
    texts.iter().map(|t| m.parse(t.as_ref())).collect()
}

/// Contravariant vector field given by coordinate components.
#[derive(Clone, Debug)]
pub struct VectorFieldSpec {
    pub components: Vec<ScalarFieldExpr>,
}

impl VectorFieldSpec {
    pub fn new<S: AsRef<str>>(manifold: &ChartManifold, components: &[S]) -> Result<Self> {
        Ok(Self { components: parse_list(manifold, components, "vector field", manifold.dim())? })
    }

    pub fn dim(&self) -> usize {
        self.components.len()
    }

    pub fn eval(&self, p: &[f64]) -> Result<DVector<f64>> {
        let v: Result<Vec<f64>> = self.components.iter().map(|c| c.eval(p)).collect();
        Ok(DVector::from_vec(v?))
    }

    /// Values and `d[(k, i)] = ∂ᵢ Vᵏ`.
    pub fn eval_with_jacobian(&self, p: &[f64]) -> Result<(DVector<f64>, DMatrix<f64>)> {
        let n = self.dim();
        let mut v = DVector::zeros(n);
        let mut d = DMatrix::zeros(n, p.len());
        for (k, c) in self.components.iter().enumerate() {
            let (val, grad) = c.eval_grad(p)?;
            v[k] = val;
            d.set_row(k, &grad.transpose());
        }
        Ok((v, d))
    }
}

/// One-form given by covariant components.
#[derive(Clone, Debug)]
pub struct CovectorField {
    pub components: Vec<ScalarFieldExpr>,
}

impl CovectorField {
    pub fn new<S: AsRef<str>>(manifold: &ChartManifold, components: &[S]) -> Result<Self> {
        Ok(Self { components: parse_list(manifold, components, "one-form", manifold.dim())? })
    }

    pub fn eval(&self, p: &[f64]) -> Result<DVector<f64>> {
        let v: Result<Vec<f64>> = self.components.iter().map(|c| c.eval(p)).collect();
        Ok(DVector::from_vec(v?))
    }

    /// Values and `d[(j, i)] = ∂ᵢ ω_j`.
    pub fn eval_with_jacobian(&self, p: &[f64]) -> Result<(DVector<f64>, DMatrix<f64>)> {
        let spec = VectorFieldSpec { components: self.components.clone() };
        spec.eval_with_jacobian(p)
    }
}

/// (1,1)-tensor field; entry `(k, j)` is `Tᵏ_j`, so `T` acts on column
/// vectors by matrix multiplication.
#[derive(Clone, Debug)]
pub struct TensorField11 {
    dim: usize,
    entries: Vec<ScalarFieldExpr>,
}

impl TensorField11 {
    pub fn new<S: AsRef<str>>(manifold: &ChartManifold, rows: &[Vec<S>]) -> Result<Self> {
        let n = manifold.dim();
        if rows.len() != n {
            return Err(Error::DimensionMismatch { context: format!("(1,1)-tensor on `{}`", manifold.name()), expected: n, found: rows.len() });
        }
        let mut entries = Vec::with_capacity(n * n);
        for row in rows {
            entries.extend(parse_list(manifold, row, "(1,1)-tensor row", n)?);
        }
        Ok(Self { dim: n, entries })
    }

    pub fn identity(manifold: &ChartManifold) -> Self {
        let n = manifold.dim();
        let entries = (0..n * n)
            .map(|idx| ScalarFieldExpr::constant(if idx / n == idx % n { 1.0 } else { 0.0 }, manifold.coords()))
            .collect();
        Self { dim: n, entries }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn eval(&self, p: &[f64]) -> Result<DMatrix<f64>> {
        let n = self.dim;
        let mut t = DMatrix::zeros(n, n);
        for (idx, e) in self.entries.iter().enumerate() {
            t[(idx / n, idx % n)] = e.eval(p)?;
        }
        Ok(t)
    }

    /// Values and `dt[i] = ∂ᵢ T`.
    pub fn eval_with_derivatives(&self, p: &[f64]) -> Result<(DMatrix<f64>, Vec<DMatrix<f64>>)> {
        let n = self.dim;
        let mut t = DMatrix::zeros(n, n);
        let mut dt = vec![DMatrix::zeros(n, n); p.len()];
        for (idx, e) in self.entries.iter().enumerate() {
            let (k, j) = (idx / n, idx % n);
            let (val, grad) = e.eval_grad(p)?;
            t[(k, j)] = val;
            for (i, d) in grad.iter().enumerate() {
                dt[i][(k, j)] = *d;
            }
        }
        Ok((t, dt))
    }
}
