use nalgebra::{DMatrix, DVector};
use rand::Rng;

use crate::error::{Error, Result};
use crate::expr::{is_reserved, parse_expr, ScalarFieldExpr};
use crate::linalg::sym_eigenvalues;

/// Sampled points closer than this to an excluded locus are rejected.
pub const EXCLUSION_MARGIN: f64 = 1e-3;

/// Open coordinate interval; either end may be infinite.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

impl Interval {
    pub const REAL_LINE: Interval = Interval { lo: f64::NEG_INFINITY, hi: f64::INFINITY };

    pub fn new(lo: f64, hi: f64) -> Self {
        Self { lo, hi }
    }

    pub fn contains(&self, x: f64) -> bool {
        x > self.lo && x < self.hi
    }
}

/// A coordinate box together with excluded loci `f = 0`.
#[derive(Clone, Debug)]
pub struct Domain {
    pub bounds: Vec<Interval>,
    pub excluded: Vec<ScalarFieldExpr>,
}

/// A Riemannian manifold covered by a single chart.
#[derive(Clone, Debug)]
pub struct ChartManifold {
    name: String,
    coords: Vec<String>,
    domain: Domain,
    /// Row-major `dim × dim`.
    metric: Vec<ScalarFieldExpr>,
}

impl ChartManifold {
    /// Builds a chart from expression strings.
    ///
    /// `excluded` entries are equations such as `"w = 0"` or bare expressions
    /// whose zero set is removed from the domain.
    pub fn new<S: AsRef<str>>(
        name: &str,
        coords: &[&str],
        bounds: Vec<Interval>,
        excluded: &[S],
        metric: &[Vec<S>],
    ) -> Result<Self> {
        let coords: Vec<String> = coords.iter().map(|s| s.to_string()).collect();
        let dim = coords.len();
        let invalid = |reason: String| Error::InvalidChart { chart: name.to_string(), reason };
        if dim == 0 {
            return Err(invalid("no coordinates".into()));
        }
        for (i, c) in coords.iter().enumerate() {
            if is_reserved(c) {
                return Err(invalid(format!("coordinate `{c}` is a reserved name")));
            }
            if coords[..i].contains(c) {
                return Err(invalid(format!("duplicate coordinate `{c}`")));
            }
        }
        if bounds.len() != dim {
            return Err(Error::DimensionMismatch { context: format!("domain of `{name}`"), expected: dim, found: bounds.len() });
        }
        if bounds.iter().any(|b| !(b.lo < b.hi)) {
            return Err(invalid("empty coordinate interval".into()));
        }
        if metric.len() != dim || metric.iter().any(|row| row.len() != dim) {
            return Err(Error::DimensionMismatch {
                context: format!("metric of `{name}`"),
                expected: dim,
                found: metric.len(),
            });
        }
        let mut entries = Vec::with_capacity(dim * dim);
        for row in metric {
            for text in row {
                entries.push(parse_expr(text.as_ref(), &coords)?);
            }
        }
        let excluded = excluded
            .iter()
            .map(|t| parse_locus(t.as_ref(), &coords))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { name: name.to_string(), coords, domain: Domain { bounds, excluded }, metric: entries })
    }

    /// Flat `ℝⁿ` with the identity metric on the whole coordinate space.
    pub fn euclidean(name: &str, coords: &[&str]) -> Self {
        let n = coords.len();
        let metric: Vec<Vec<&str>> =
            (0..n).map(|i| (0..n).map(|j| if i == j { "1" } else { "0" }).collect()).collect();
        Self::new(name, coords, vec![Interval::REAL_LINE; n], &[] as &[&str], &metric)
            .expect("euclidean chart is valid")
    }

    /// Same chart with a different coordinate box.
    pub fn with_bounds(mut self, bounds: Vec<Interval>) -> Result<Self> {
        if bounds.len() != self.dim() {
            return Err(Error::DimensionMismatch { context: format!("domain of `{}`", self.name), expected: self.dim(), found: bounds.len() });
        }
        self.domain.bounds = bounds;
        Ok(self)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn coords(&self) -> &[String] {
        &self.coords
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn domain(&self) -> &Domain {
        &self.domain
    }

    pub fn metric_exprs(&self) -> &[ScalarFieldExpr] {
        &self.metric
    }

    /// Parses an expression over this chart's coordinates.
    pub fn parse(&self, text: &str) -> Result<ScalarFieldExpr> {
        parse_expr(text, &self.coords)
    }

    /// Membership in the open coordinate box.
    pub fn contains(&self, p: &[f64]) -> bool {
        p.len() == self.dim() && p.iter().zip(&self.domain.bounds).all(|(x, b)| b.contains(*x))
    }

    pub fn require_contains(&self, p: &[f64]) -> Result<()> {
        if p.len() != self.dim() {
            return Err(Error::DimensionMismatch { context: format!("point on `{}`", self.name), expected: self.dim(), found: p.len() });
        }
        if !self.contains(p) {
            return Err(Error::OutsideDomain { chart: self.name.clone(), point: p.to_vec() });
        }
        Ok(())
    }

    /// True when `p` is within the sampling margin of an excluded locus
    /// (or a locus cannot be evaluated there).
    pub fn near_excluded(&self, p: &[f64]) -> bool {
        self.domain
            .excluded
            .iter()
            .any(|f| f.eval(p).map_or(true, |v| v.abs() < EXCLUSION_MARGIN))
    }

    /// Uniform samples from the box minus the excluded loci.
    pub fn sample_points<R: Rng>(&self, n: usize, rng: &mut R) -> Result<Vec<DVector<f64>>> {
        self.sample_points_inset(n, 1.0, rng)
    }

    /// Samples from the box shrunk about its centre to `fraction` of its
    /// side lengths, e.g. to leave room for geodesics started there.
    pub fn sample_points_inset<R: Rng>(&self, n: usize, fraction: f64, rng: &mut R) -> Result<Vec<DVector<f64>>> {
        if self.domain.bounds.iter().any(|b| !b.lo.is_finite() || !b.hi.is_finite()) {
            return Err(Error::InvalidChart {
                chart: self.name.clone(),
                reason: "random sampling needs a bounded domain box".into(),
            });
        }
        let mut out = Vec::with_capacity(n);
        let mut attempts = 0usize;
        while out.len() < n {
            attempts += 1;
            if attempts > 1000 * (n + 1) {
                return Err(Error::InvalidChart {
                    chart: self.name.clone(),
                    reason: "excluded loci reject almost every sample".into(),
                });
            }
            let p: Vec<f64> = self
                .domain
                .bounds
                .iter()
                .map(|b| {
                    let t: f64 = rng.gen();
                    b.lo + (b.hi - b.lo) * (0.5 * (1.0 - fraction) + fraction * t)
                })
                .collect();
            if self.contains(&p) && !self.near_excluded(&p) {
                out.push(DVector::from_vec(p));
            }
        }
        Ok(out)
    }

    pub fn metric_at(&self, p: &[f64]) -> Result<DMatrix<f64>> {
        let n = self.dim();
        let mut g = DMatrix::zeros(n, n);
        for (idx, e) in self.metric.iter().enumerate() {
            g[(idx / n, idx % n)] = e.eval(p)?;
        }
        Ok(g)
    }

    /// Metric and its coordinate derivatives: `dg[k][(i, j)] = ∂ₖ g_ij`.
    pub fn metric_with_derivatives(&self, p: &[f64]) -> Result<(DMatrix<f64>, Vec<DMatrix<f64>>)> {
        let n = self.dim();
        let mut g = DMatrix::zeros(n, n);
        let mut dg = vec![DMatrix::zeros(n, n); n];
        for (idx, e) in self.metric.iter().enumerate() {
            let (i, j) = (idx / n, idx % n);
            if e.is_constant() {
                g[(i, j)] = e.eval(p)?;
                continue;
            }
            let (v, grad) = e.eval_grad(p)?;
            g[(i, j)] = v;
            for k in 0..n {
                dg[k][(i, j)] = grad[k];
            }
        }
        Ok((g, dg))
    }

    /// Checks symmetry (< 1e-12) and positive definiteness (> 1e-10) at
    /// each point.
    pub fn validate_metric(&self, points: &[DVector<f64>]) -> Result<()> {
        for p in points {
            let g = self.metric_at(p.as_slice())?;
            let residual = (&g - g.transpose()).amax();
            if residual >= 1e-12 {
                return Err(Error::NotSymmetric { residual });
            }
            let min_eigenvalue = sym_eigenvalues(&g)[0];
            if min_eigenvalue <= 1e-10 {
                return Err(Error::NotPositiveDefinite { min_eigenvalue });
            }
        }
        Ok(())
    }
}

/// `"lhs = rhs"` becomes `lhs - rhs`; a bare expression is kept as is.
pub fn parse_locus(text: &str, coords: &[String]) -> Result<ScalarFieldExpr> {
    match text.split_once('=') {
        Some((lhs, rhs)) => parse_expr(&format!("({}) - ({})", lhs.trim(), rhs.trim()), coords),
        None => parse_expr(text, coords),
    }
}
