//! Almost-contact metric structures and trans-Sasakian type fitting.

use std::sync::Arc;

use nalgebra::{DMatrix, DVector};
use rand::Rng;

use crate::error::{Error, Result};
use crate::expr::ScalarFieldExpr;
use crate::geometry::{
    covector_derivative, tensor11_derivative, ChartManifold, ConnectionAt, CovectorField, TensorField11,
    VectorFieldSpec,
};
use crate::linalg::{cholesky, inner, lstsq, norm};

/// Design matrices with a larger condition number are rejected by
/// [`estimate_type`].
pub const FIT_CONDITION_LIMIT: f64 = 1e10;

/// Number of random vector pairs used for "for all W, Z" clauses.
pub const RANDOM_BATCH: usize = 20;

/// `(ψ, ξ, η)` on a chart whose metric plays the role of `g`.
#[derive(Clone, Debug)]
pub struct ContactStructure {
    pub name: String,
    pub manifold: Arc<ChartManifold>,
    pub psi: TensorField11,
    pub xi: VectorFieldSpec,
    pub eta: CovectorField,
    pub declared_type: Option<(ScalarFieldExpr, ScalarFieldExpr)>,
}

/// Every tensor of a structure evaluated at one point, with first
/// derivatives and the Levi-Civita connection.
#[derive(Clone, Debug)]
pub struct StructureAt {
    pub point: DVector<f64>,
    pub conn: ConnectionAt,
    pub psi: DMatrix<f64>,
    pub dpsi: Vec<DMatrix<f64>>,
    pub xi: DVector<f64>,
    pub dxi: DMatrix<f64>,
    pub eta: DVector<f64>,
    pub deta: DMatrix<f64>,
}

impl StructureAt {
    pub fn metric(&self) -> &DMatrix<f64> {
        &self.conn.metric
    }

    pub fn eta_of(&self, w: &DVector<f64>) -> f64 {
        self.eta.dot(w)
    }

    /// `∇_W ξ`.
    pub fn nabla_xi(&self, w: &DVector<f64>) -> DVector<f64> {
        &self.dxi * w + self.conn.gamma.contract(w, &self.xi)
    }

    /// `∇_W ψ` as a matrix.
    pub fn nabla_psi(&self, w: &DVector<f64>) -> DMatrix<f64> {
        tensor11_derivative(&self.conn, &self.psi, &self.dpsi, w)
    }

    /// `∇_W η` as a row of covariant components.
    pub fn nabla_eta(&self, w: &DVector<f64>) -> DVector<f64> {
        covector_derivative(&self.conn, &self.eta, &self.deta, w)
    }
}

impl ContactStructure {
    pub fn new<S: AsRef<str>>(
        name: &str,
        manifold: Arc<ChartManifold>,
        psi: &[Vec<S>],
        xi: &[S],
        eta: &[S],
        declared_type: Option<(&str, &str)>,
    ) -> Result<Self> {
        let dim = manifold.dim();
        if dim % 2 == 0 {
            return Err(Error::DimensionParity { dim });
        }
        let psi = TensorField11::new(&manifold, psi)?;
        let xi = VectorFieldSpec::new(&manifold, xi)?;
        let eta = CovectorField::new(&manifold, eta)?;
        let declared_type = match declared_type {
            Some((a, b)) => Some((manifold.parse(a)?, manifold.parse(b)?)),
            None => None,
        };
        Ok(Self { name: name.to_string(), manifold, psi, xi, eta, declared_type })
    }

    pub fn dim(&self) -> usize {
        self.manifold.dim()
    }

    pub fn at(&self, p: &[f64]) -> Result<StructureAt> {
        self.manifold.require_contains(p)?;
        let conn = ConnectionAt::new(&self.manifold, p)?;
        let (psi, dpsi) = self.psi.eval_with_derivatives(p)?;
        let (xi, dxi) = self.xi.eval_with_jacobian(p)?;
        let (eta, deta) = self.eta.eval_with_jacobian(p)?;
        Ok(StructureAt { point: DVector::from_column_slice(p), conn, psi, dpsi, xi, dxi, eta, deta })
    }

    /// Declared `(α, β)` evaluated at `p`, if any.
    pub fn declared_type_at(&self, p: &[f64]) -> Result<Option<(f64, f64)>> {
        match &self.declared_type {
            Some((a, b)) => Ok(Some((a.eval(p)?, b.eval(p)?))),
            None => Ok(None),
        }
    }
}

/// Maximum axiom residuals over a point set.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct AxiomReport {
    /// `‖ψ² + I − η⊗ξ‖_F`
    pub psi_squared: f64,
    /// `‖ψξ‖`
    pub psi_xi: f64,
    /// `‖η∘ψ‖`
    pub eta_psi: f64,
    /// `|η(ξ) − 1|`
    pub eta_xi: f64,
    /// `|g(ψW,ψZ) − g(W,Z) + η(W)η(Z)|` over random pairs
    pub compatibility: f64,
    /// `|η(W) − g(W,ξ)|` over random vectors
    pub eta_metric_dual: f64,
    /// `|g(ψW,Z) − g(W,ψZ)|`; informational
    pub psi_symmetric: f64,
    /// `|g(ψW,Z) + g(W,ψZ)|`; informational
    pub psi_skew: f64,
    /// `|tr(ψ²) + dim − 1|`; informational
    pub trace_psi_squared: f64,
    pub points: usize,
    pub passed: bool,
}

impl AxiomReport {
    /// The residuals that decide `passed`, labelled.
    pub fn gating(&self) -> [(&'static str, f64); 6] {
        [
            ("psi_squared", self.psi_squared),
            ("psi_xi", self.psi_xi),
            ("eta_psi", self.eta_psi),
            ("eta_xi", self.eta_xi),
            ("compatibility", self.compatibility),
            ("eta_metric_dual", self.eta_metric_dual),
        ]
    }
}

fn random_vector<R: Rng>(n: usize, rng: &mut R) -> DVector<f64> {
    DVector::from_fn(n, |_, _| rng.gen_range(-1.0..1.0))
}

/// Evaluates the almost-contact axioms and metric compatibility at every
/// point, with [`RANDOM_BATCH`] random vector pairs per point.
pub fn check_almost_contact<R: Rng>(
    s: &ContactStructure,
    points: &[DVector<f64>],
    tol: f64,
    rng: &mut R,
) -> Result<AxiomReport> {
    let n = s.dim();
    if n % 2 == 0 {
        return Err(Error::DimensionParity { dim: n });
    }
    let mut r = AxiomReport { points: points.len(), ..Default::default() };
    let id = DMatrix::<f64>::identity(n, n);
    for p in points {
        let p = p.as_slice();
        s.manifold.require_contains(p)?;
        let g = s.manifold.metric_at(p)?;
        let psi = s.psi.eval(p)?;
        let xi = s.xi.eval(p)?;
        let eta = s.eta.eval(p)?;
        let psi2 = &psi * &psi;
        let max = |a: &mut f64, b: f64| *a = a.max(b);
        max(&mut r.psi_squared, (&psi2 + &id - &xi * eta.transpose()).norm());
        max(&mut r.psi_xi, (&psi * &xi).norm());
        max(&mut r.eta_psi, (psi.transpose() * &eta).norm());
        max(&mut r.eta_xi, (eta.dot(&xi) - 1.0).abs());
        max(&mut r.trace_psi_squared, (psi2.trace() + n as f64 - 1.0).abs());
        for _ in 0..RANDOM_BATCH {
            let w = random_vector(n, rng);
            let z = random_vector(n, rng);
            let (pw, pz) = (&psi * &w, &psi * &z);
            max(&mut r.compatibility, (inner(&g, &pw, &pz) - inner(&g, &w, &z) + eta.dot(&w) * eta.dot(&z)).abs());
            max(&mut r.eta_metric_dual, (eta.dot(&w) - inner(&g, &w, &xi)).abs());
            max(&mut r.psi_symmetric, (inner(&g, &pw, &z) - inner(&g, &w, &pz)).abs());
            max(&mut r.psi_skew, (inner(&g, &pw, &z) + inner(&g, &w, &pz)).abs());
        }
    }
    r.passed = r.gating().iter().all(|(_, v)| *v < tol);
    Ok(r)
}

/// Pointwise least-squares `(α, β)`.
#[derive(Clone, Debug, PartialEq)]
pub struct TypeEstimate {
    pub alpha: f64,
    pub beta: f64,
    /// RMS over test directions of the `g`-norm misfit of the `∇ξ` equation.
    pub residual: f64,
    pub condition: f64,
    pub point: DVector<f64>,
}

/// Fits `∇_W ξ = −αψW + β(W − η(W)ξ)` over the coordinate directions.
pub fn estimate_type(s: &ContactStructure, p: &[f64]) -> Result<TypeEstimate> {
    let n = s.dim();
    let dirs: Vec<DVector<f64>> = (0..n)
        .map(|i| {
            let mut e = DVector::zeros(n);
            e[i] = 1.0;
            e
        })
        .collect();
    estimate_type_with_directions(s, p, &dirs)
}

/// Same fit over caller-chosen test directions.
pub fn estimate_type_with_directions(s: &ContactStructure, p: &[f64], dirs: &[DVector<f64>]) -> Result<TypeEstimate> {
    let at = s.at(p)?;
    let n = s.dim();
    let lt = cholesky(at.metric())?.transpose();
    let mut a = DMatrix::zeros(n * dirs.len(), 2);
    let mut b = DVector::zeros(n * dirs.len());
    for (k, w) in dirs.iter().enumerate() {
        let col_alpha = -(&lt * (&at.psi * w));
        let col_beta = &lt * (w - &at.xi * at.eta_of(w));
        let rhs = &lt * at.nabla_xi(w);
        for r in 0..n {
            a[(k * n + r, 0)] = col_alpha[r];
            a[(k * n + r, 1)] = col_beta[r];
            b[k * n + r] = rhs[r];
        }
    }
    let (x, residual, condition) = lstsq(&a, &b, FIT_CONDITION_LIMIT)?;
    Ok(TypeEstimate {
        alpha: x[0],
        beta: x[1],
        residual: residual / (dirs.len() as f64).sqrt(),
        condition,
        point: at.point,
    })
}

/// RMS residuals of the three defining equations for a given `(α, β)`.
#[derive(Clone, Debug, PartialEq)]
pub struct TransSasakianResidual {
    /// `(∇_W ψ)Z = α(g(W,Z)ξ − η(Z)W) + β(g(ψW,Z)ξ − η(Z)ψW)`
    pub psi_equation: f64,
    /// `(∇_W η)Z = −α g(ψW,Z) + β g(ψW,ψZ)`
    pub eta_equation: f64,
    /// `∇_W ξ = −αψW + β(W − η(W)ξ)`
    pub xi_equation: f64,
    /// `((∇_W η)Z) ξ = −α g(ψW,Z) ξ + β g(ψW,ψZ) ξ`, the vector reading in
    /// which every scalar term is carried along `ξ`
    pub eta_equation_vector: f64,
}

impl TransSasakianResidual {
    /// Certification uses the three scalar-consistent equations.
    pub fn max(&self) -> f64 {
        self.psi_equation.max(self.eta_equation).max(self.xi_equation)
    }
}

/// Evaluates the trans-Sasakian equations at `p` over [`RANDOM_BATCH`]
/// random pairs `(W, Z)`.
pub fn trans_sasakian_residual<R: Rng>(
    s: &ContactStructure,
    p: &[f64],
    alpha: f64,
    beta: f64,
    rng: &mut R,
) -> Result<TransSasakianResidual> {
    let at = s.at(p)?;
    let n = s.dim();
    let g = at.metric();
    let (mut rp, mut re, mut rx, mut rv) = (0.0, 0.0, 0.0, 0.0);
    for _ in 0..RANDOM_BATCH {
        let w = random_vector(n, rng);
        let z = random_vector(n, rng);
        let pw = &at.psi * &w;
        let pz = &at.psi * &z;
        let lhs = at.nabla_psi(&w) * &z;
        let rhs = (&at.xi * inner(g, &w, &z) - &w * at.eta_of(&z)) * alpha
            + (&at.xi * inner(g, &pw, &z) - &pw * at.eta_of(&z)) * beta;
        rp += norm(g, &(lhs - rhs)).powi(2);

        let deta_z = at.nabla_eta(&w).dot(&z);
        let scalar = deta_z - (-alpha * inner(g, &pw, &z) + beta * inner(g, &pw, &pz));
        re += scalar * scalar;
        rv += norm(g, &(&at.xi * scalar)).powi(2);

        let lhs = at.nabla_xi(&w);
        let rhs = -&pw * alpha + (&w - &at.xi * at.eta_of(&w)) * beta;
        rx += norm(g, &(lhs - rhs)).powi(2);
    }
    let k = RANDOM_BATCH as f64;
    Ok(TransSasakianResidual {
        psi_equation: (rp / k).sqrt(),
        eta_equation: (re / k).sqrt(),
        xi_equation: (rx / k).sqrt(),
        eta_equation_vector: (rv / k).sqrt(),
    })
}
