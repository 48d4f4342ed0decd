//! Smooth maps between charts and their Riemannian-map apparatus.
//!
//! Everything is evaluated pointwise through [`MapAt`], which caches the
//! jet of the map together with both connections and the orthogonal
//! splittings of the domain and codomain tangent spaces.

mod oracle;

pub use oracle::sff_finite_difference;

use std::sync::Arc;

use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::expr::ScalarFieldExpr;
use crate::geometry::{orthogonal_complement, orthonormalize, project, ChartManifold, ConnectionAt};
use crate::linalg::{cholesky, inner, norm};

/// Singular values below this fraction of the largest one are zero.
pub const RANK_THRESHOLD: f64 = 1e-8;

/// Seed of the random pairs used by [`umbilical_fit`].
pub const UMBILICAL_SEED: u64 = 0x756d_6269;

/// Number of random horizontal pairs added to the frame pairs.
pub const RANDOM_PAIRS: usize = 20;

/// `π: M → B` given by one expression per codomain coordinate.
#[derive(Clone, Debug)]
pub struct SmoothMapSpec {
    pub name: String,
    pub domain: Arc<ChartManifold>,
    pub codomain: Arc<ChartManifold>,
    pub components: Vec<ScalarFieldExpr>,
}

impl SmoothMapSpec {
    pub fn new<S: AsRef<str>>(
        name: &str,
        domain: Arc<ChartManifold>,
        codomain: Arc<ChartManifold>,
        components: &[S],
    ) -> Result<Self> {
        if components.len() != codomain.dim() {
            return Err(Error::DimensionMismatch {
                context: format!("components of map `{name}`"),
                expected: codomain.dim(),
                found: components.len(),
            });
        }
        let components = components.iter().map(|c| domain.parse(c.as_ref())).collect::<Result<Vec<_>>>()?;
        Ok(Self { name: name.to_string(), domain, codomain, components })
    }

    pub fn eval(&self, p: &[f64]) -> Result<DVector<f64>> {
        let v = self.components.iter().map(|c| c.eval(p)).collect::<Result<Vec<_>>>()?;
        Ok(DVector::from_vec(v))
    }
}

/// Value, Jacobian and second derivatives of a map at a point.
#[derive(Clone, Debug, PartialEq)]
pub struct MapJet {
    pub point: DVector<f64>,
    pub image: DVector<f64>,
    /// `b × m`, entry `(γ, i) = ∂ᵢπ^γ`.
    pub jacobian: DMatrix<f64>,
    /// `second[γ][(i, j)] = ∂ᵢ∂ⱼπ^γ`.
    pub second: Vec<DMatrix<f64>>,
}

pub fn map_jet(map: &SmoothMapSpec, p: &[f64]) -> Result<MapJet> {
    map.domain.require_contains(p)?;
    let m = map.domain.dim();
    let b = map.codomain.dim();
    let mut image = DVector::zeros(b);
    let mut jacobian = DMatrix::zeros(b, m);
    let mut second = Vec::with_capacity(b);
    for (gamma, c) in map.components.iter().enumerate() {
        let jet = c.eval_jet2(p)?;
        image[gamma] = jet.value;
        jacobian.set_row(gamma, &jet.grad.transpose());
        second.push(jet.hess);
    }
    if !map.codomain.contains(image.as_slice()) {
        return Err(Error::ImageOutsideDomain { chart: map.codomain.name().to_string(), image: image.as_slice().to_vec() });
    }
    Ok(MapJet { point: DVector::from_column_slice(p), image, jacobian, second })
}

/// Orthonormal bases of `ker π*`, `(ker π*)⊥`, `range π*`, `(range π*)⊥`.
#[derive(Clone, Debug, PartialEq)]
pub struct FrameDecomposition {
    pub ker_frame: Vec<DVector<f64>>,
    pub hker_frame: Vec<DVector<f64>>,
    /// `range_frame[i]` is `π*(hker_frame[i])` normalized in `g₂`.
    pub range_frame: Vec<DVector<f64>>,
    pub rperp_frame: Vec<DVector<f64>>,
    pub rank: usize,
    /// Whitened singular values, descending.
    pub singular_values: Vec<f64>,
    pub warnings: Vec<String>,
}

/// Flips `v` so that its largest-magnitude component is positive.
fn canonical_sign(v: DVector<f64>) -> DVector<f64> {
    let k = v.iamax();
    if v[k] < 0.0 {
        -v
    } else {
        v
    }
}

fn decompose_at(jac: &DMatrix<f64>, g1: &DMatrix<f64>, g2: &DMatrix<f64>) -> Result<FrameDecomposition> {
    let (b, m) = jac.shape();
    let l1 = cholesky(g1)?;
    let l2 = cholesky(g2)?;
    let l1_inv_t = l1
        .clone()
        .try_inverse()
        .ok_or(Error::SingularMetric { condition: f64::INFINITY })?
        .transpose();
    let l2_inv_t = l2
        .clone()
        .try_inverse()
        .ok_or(Error::SingularMetric { condition: f64::INFINITY })?
        .transpose();
    let whitened = l2.transpose() * jac * &l1_inv_t;
    let svd = whitened.svd(true, true);
    let u = svd.u.expect("requested");
    let v_t = svd.v_t.expect("requested");
    let mut order: Vec<usize> = (0..svd.singular_values.len()).collect();
    order.sort_by(|&i, &j| svd.singular_values[j].total_cmp(&svd.singular_values[i]).then(i.cmp(&j)));
    let singular_values: Vec<f64> = order.iter().map(|&i| svd.singular_values[i]).collect();
    let smax = singular_values.first().copied().unwrap_or(0.0);
    let cut = RANK_THRESHOLD * smax;
    let mut warnings = Vec::new();
    let mut rank = 0;
    for &s in &singular_values {
        if smax > 0.0 && s > cut {
            rank += 1;
            if s < 1e3 * cut {
                warnings.push(format!("singular value {s:.3e} is within a factor 1e3 of the rank threshold {cut:.3e}"));
            }
        } else if smax > 0.0 && s > cut * 1e-3 {
            warnings.push(format!("singular value {s:.3e} lies just below the rank threshold {cut:.3e}"));
        }
    }

    let eye_m = DMatrix::identity(m, m);
    let eye_b = DMatrix::identity(b, b);
    let hker_w: Vec<DVector<f64>> = order[..rank].iter().map(|&i| v_t.row(i).transpose()).collect();
    let ker_w = orthogonal_complement(&hker_w, &eye_m);
    let range_w: Vec<DVector<f64>> = order[..rank].iter().map(|&i| u.column(i).into_owned()).collect();
    let rperp_w = orthogonal_complement(&range_w, &eye_b);

    let back = |t: &DMatrix<f64>, vs: &[DVector<f64>]| -> Vec<DVector<f64>> {
        vs.iter().map(|v| canonical_sign(t * v)).collect()
    };
    let hker_frame = orthonormalize(&back(&l1_inv_t, &hker_w), g1)?;
    let ker_frame = orthonormalize(&back(&l1_inv_t, &ker_w), g1)?;
    let range_raw: Vec<DVector<f64>> = hker_frame.iter().map(|h| jac * h).collect();
    let range_frame = range_raw.iter().map(|r| r / norm(g2, r)).collect::<Vec<_>>();
    let mut rperp_frame = Vec::with_capacity(rperp_w.len());
    for v in back(&l2_inv_t, &rperp_w) {
        let r = &v - project(&v, &range_frame, g2);
        rperp_frame.push(r);
    }
    let rperp_frame = orthonormalize(&rperp_frame, g2)?;
    Ok(FrameDecomposition { ker_frame, hker_frame, range_frame, rperp_frame, rank, singular_values, warnings })
}

/// Everything needed for pointwise Riemannian-map checks at `p`.
#[derive(Clone, Debug)]
pub struct MapAt {
    pub jet: MapJet,
    pub domain: ConnectionAt,
    pub codomain: ConnectionAt,
    pub frames: FrameDecomposition,
}

impl MapAt {
    pub fn new(map: &SmoothMapSpec, p: &[f64]) -> Result<Self> {
        let jet = map_jet(map, p)?;
        let domain = ConnectionAt::new(&map.domain, p)?;
        let codomain = ConnectionAt::new(&map.codomain, jet.image.as_slice())?;
        let frames = decompose_at(&jet.jacobian, &domain.metric, &codomain.metric)?;
        Ok(Self { jet, domain, codomain, frames })
    }

    pub fn g1(&self) -> &DMatrix<f64> {
        &self.domain.metric
    }

    pub fn g2(&self) -> &DMatrix<f64> {
        &self.codomain.metric
    }

    pub fn push(&self, w: &DVector<f64>) -> DVector<f64> {
        &self.jet.jacobian * w
    }

    pub fn rank(&self) -> usize {
        self.frames.rank
    }

    /// `(∇π*)(W, Z)` by the coordinate formula.
    pub fn sff(&self, w: &DVector<f64>, z: &DVector<f64>) -> DVector<f64> {
        let b = self.jet.image.len();
        let gm = self.domain.gamma.contract(w, z);
        let (pw, pz) = (self.push(w), self.push(z));
        let gb = self.codomain.gamma.contract(&pw, &pz);
        let dpi = &self.jet.jacobian * gm;
        DVector::from_fn(b, |g, _| (w.transpose() * &self.jet.second[g] * z)[(0, 0)] - dpi[g] + gb[g])
    }

    /// Projection onto `range π*` in `g₂`.
    pub fn range_part(&self, v: &DVector<f64>) -> DVector<f64> {
        project(v, &self.frames.range_frame, self.g2())
    }

    /// Projection onto `(range π*)⊥` in `g₂`.
    pub fn perp_part(&self, v: &DVector<f64>) -> DVector<f64> {
        v - self.range_part(v)
    }

    /// Projection onto `(ker π*)⊥` in `g₁`.
    pub fn horizontal_part(&self, v: &DVector<f64>) -> DVector<f64> {
        project(v, &self.frames.hker_frame, self.g1())
    }

    /// Projection onto `ker π*` in `g₁`.
    pub fn vertical_part(&self, v: &DVector<f64>) -> DVector<f64> {
        project(v, &self.frames.ker_frame, self.g1())
    }

    /// Fails unless `v` is `g₂`-orthogonal to `range π*` within
    /// `1e-9 (1 + ‖v‖)`.
    pub fn require_perp(&self, v: &DVector<f64>) -> Result<()> {
        let residual = norm(self.g2(), &self.range_part(v));
        if residual > 1e-9 * (1.0 + norm(self.g2(), v)) {
            return Err(Error::NotOrthogonal { residual });
        }
        Ok(())
    }

    /// `max |g₂(π*W, π*Z) − g₁(W, Z)|` over horizontal frame pairs.
    pub fn isometry_residual(&self) -> f64 {
        let h = &self.frames.hker_frame;
        let mut worst: f64 = 0.0;
        for w in h {
            for z in h {
                let d = inner(self.g2(), &self.push(w), &self.push(z)) - inner(self.g1(), w, z);
                worst = worst.max(d.abs());
            }
        }
        worst
    }

    /// `max |g₂((∇π*)(W, Y), π*Z)|` over horizontal frame triples.
    pub fn lemma21_residual(&self) -> f64 {
        let h = &self.frames.hker_frame;
        let mut worst: f64 = 0.0;
        for w in h {
            for y in h {
                let s = self.sff(w, y);
                for z in h {
                    worst = worst.max(inner(self.g2(), &s, &self.push(z)).abs());
                }
            }
        }
        worst
    }

    /// Matrix of `A_V` on `range π*` in the range-frame basis:
    /// `(A_V)_{ij} = g₂(V, (∇π*)(H_j, H_i))`.
    pub fn shape_operator(&self, v: &DVector<f64>) -> Result<DMatrix<f64>> {
        self.require_perp(v)?;
        let h = &self.frames.hker_frame;
        let r = h.len();
        Ok(DMatrix::from_fn(r, r, |i, j| inner(self.g2(), v, &self.sff(&h[j], &h[i]))))
    }

    /// `A_V X` for `X ∈ range π*`, as a codomain vector.
    pub fn shape_operator_apply(&self, v: &DVector<f64>, x: &DVector<f64>) -> Result<DVector<f64>> {
        let a = self.shape_operator(v)?;
        let rf = &self.frames.range_frame;
        let coeffs = DVector::from_iterator(rf.len(), rf.iter().map(|r| inner(self.g2(), r, x)));
        let out = &a * coeffs;
        let mut y = DVector::zeros(x.len());
        for (c, r) in out.iter().zip(rf) {
            y.axpy(*c, r, 1.0);
        }
        Ok(y)
    }

    /// Least-squares `H₂` from `(∇π*)(Hᵢ, Hⱼ) = δᵢⱼ H₂` on frame pairs.
    pub fn umbilical_fit(&self) -> UmbilicalFit {
        let h = &self.frames.hker_frame;
        let b = self.jet.image.len();
        let r = h.len();
        if r == 0 {
            return UmbilicalFit { h2: DVector::zeros(b), residual: 0.0, pairs: 0 };
        }
        let mut h2 = DVector::zeros(b);
        for e in h {
            h2 += self.perp_part(&self.sff(e, e));
        }
        h2 /= r as f64;
        let mut sq = 0.0;
        let mut pairs = 0usize;
        for (i, w) in h.iter().enumerate() {
            for (j, z) in h.iter().enumerate() {
                let model = if i == j { h2.clone() } else { DVector::zeros(b) };
                sq += norm(self.g2(), &(self.sff(w, z) - model)).powi(2);
                pairs += 1;
            }
        }
        let mut rng = ChaCha8Rng::seed_from_u64(UMBILICAL_SEED);
        for _ in 0..RANDOM_PAIRS {
            let mut w = DVector::zeros(self.jet.point.len());
            let mut z = w.clone();
            for e in h {
                w.axpy(rng.gen_range(-1.0..1.0), e, 1.0);
                z.axpy(rng.gen_range(-1.0..1.0), e, 1.0);
            }
            let model = &h2 * inner(self.g1(), &w, &z);
            sq += norm(self.g2(), &(self.sff(&w, &z) - model)).powi(2);
            pairs += 1;
        }
        UmbilicalFit { h2, residual: (sq / pairs as f64).sqrt(), pairs }
    }

    /// Mean curvature of `ker π*` or `(ker π*)⊥`, extending frame vectors
    /// with constant coefficients so that `∇_e e = Γ(e, e)`.
    pub fn mean_curvature(&self, which: Distribution) -> Result<DVector<f64>> {
        let (frame, name) = match which {
            Distribution::Vertical => (&self.frames.ker_frame, "vertical"),
            Distribution::Horizontal => (&self.frames.hker_frame, "horizontal"),
        };
        if frame.is_empty() {
            return Err(Error::EmptyDistribution { which: name.into() });
        }
        let mut acc = DVector::zeros(self.jet.point.len());
        for e in frame {
            acc += self.domain.gamma.contract(e, e);
        }
        acc /= frame.len() as f64;
        Ok(match which {
            Distribution::Vertical => self.horizontal_part(&acc),
            Distribution::Horizontal => self.vertical_part(&acc),
        })
    }

    pub fn harmonicity(&self) -> HarmonicityAt {
        let mut tension = DVector::zeros(self.jet.image.len());
        for f in self.frames.ker_frame.iter().chain(&self.frames.hker_frame) {
            tension += self.sff(f, f);
        }
        let q = self.frames.ker_frame.len();
        let rho = self.mean_curvature(Distribution::Vertical).unwrap_or_else(|_| DVector::zeros(self.jet.point.len()));
        let push_rho = self.push(&rho);
        let g2 = self.g2();
        HarmonicityAt {
            tension_norm: norm(g2, &tension),
            pushed_mean_curvature_norm: norm(g2, &push_rho),
            trace_identity_residual: norm(g2, &(&tension + &push_rho * q as f64)),
            tension,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Distribution {
    Vertical,
    Horizontal,
}

#[derive(Clone, Debug, PartialEq)]
pub struct UmbilicalFit {
    pub h2: DVector<f64>,
    /// RMS `g₂`-norm of `(∇π*)(W, Z) − g₁(W, Z)H₂` over all pairs used.
    pub residual: f64,
    pub pairs: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub struct HarmonicityAt {
    pub tension: DVector<f64>,
    pub tension_norm: f64,
    /// `‖π*(ϱ^𝒱)‖`
    pub pushed_mean_curvature_norm: f64,
    /// `‖trace(∇π*) + q π*(ϱ^𝒱)‖`, `q = dim ker π*`
    pub trace_identity_residual: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct HarmonicityReport {
    pub points: Vec<DVector<f64>>,
    pub per_point: Vec<HarmonicityAt>,
    pub max_tension: f64,
    pub max_pushed_mean_curvature: f64,
    pub max_trace_identity_residual: f64,
    pub harmonic: bool,
}

pub fn decompose(map: &SmoothMapSpec, p: &[f64]) -> Result<FrameDecomposition> {
    Ok(MapAt::new(map, p)?.frames)
}

pub fn isometry_residual(map: &SmoothMapSpec, p: &[f64]) -> Result<f64> {
    Ok(MapAt::new(map, p)?.isometry_residual())
}

pub fn second_fundamental_form(
    map: &SmoothMapSpec,
    p: &[f64],
    w: &DVector<f64>,
    z: &DVector<f64>,
) -> Result<DVector<f64>> {
    Ok(MapAt::new(map, p)?.sff(w, z))
}

pub fn lemma21_residual(map: &SmoothMapSpec, p: &[f64]) -> Result<f64> {
    Ok(MapAt::new(map, p)?.lemma21_residual())
}

pub fn shape_operator(map: &SmoothMapSpec, p: &[f64], v: &DVector<f64>) -> Result<DMatrix<f64>> {
    MapAt::new(map, p)?.shape_operator(v)
}

pub fn umbilical_fit(map: &SmoothMapSpec, p: &[f64]) -> Result<UmbilicalFit> {
    Ok(MapAt::new(map, p)?.umbilical_fit())
}

pub fn mean_curvature(map: &SmoothMapSpec, p: &[f64], which: Distribution) -> Result<DVector<f64>> {
    MapAt::new(map, p)?.mean_curvature(which)
}

pub fn harmonicity_report(map: &SmoothMapSpec, points: &[DVector<f64>], tol: f64) -> Result<HarmonicityReport> {
    let per_point = points
        .iter()
        .map(|p| Ok(MapAt::new(map, p.as_slice())?.harmonicity()))
        .collect::<Result<Vec<_>>>()?;
    let fold = |f: fn(&HarmonicityAt) -> f64| per_point.iter().map(f).fold(0.0, f64::max);
    let max_tension = fold(|h| h.tension_norm);
    Ok(HarmonicityReport {
        points: points.to_vec(),
        max_pushed_mean_curvature: fold(|h| h.pushed_mean_curvature_norm),
        max_trace_identity_residual: fold(|h| h.trace_identity_residual),
        harmonic: max_tension < tol,
        max_tension,
        per_point,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{gram, Interval};

    fn v(x: &[f64]) -> DVector<f64> {
        DVector::from_column_slice(x)
    }

    fn example_31() -> SmoothMapSpec {
        let m = ChartManifold::new(
            "M",
            &["x", "y", "z"],
            vec![Interval::new(-2.0, 2.0); 3],
            &["x = 0", "y = 0", "z = 0"],
            &[vec!["3/8", "1/8", "0"], vec!["1/8", "3/8", "0"], vec!["0", "0", "1/4"]],
        )
        .unwrap();
        let b = ChartManifold::new(
            "B",
            &["u", "v", "w"],
            vec![Interval::new(-5.0, 5.0); 3],
            &["w = 0"],
            &[vec!["(1+v^2)/4", "0", "-v/4"], vec!["0", "1/4", "0"], vec!["-v/4", "0", "1/4"]],
        )
        .unwrap();
        SmoothMapSpec::new("pi", Arc::new(m), Arc::new(b), &["0", "x+y", "0"]).unwrap()
    }

    fn identity3() -> SmoothMapSpec {
        let e = Arc::new(ChartManifold::euclidean("R3", &["x", "y", "z"]));
        SmoothMapSpec::new("id", e.clone(), e, &["x", "y", "z"]).unwrap()
    }

    #[test]
    fn jets() {
        let j = map_jet(&example_31(), &[0.3, 0.4, 0.5]).unwrap();
        assert_eq!(j.jacobian, DMatrix::from_row_slice(3, 3, &[0.0, 0.0, 0.0, 1.0, 1.0, 0.0, 0.0, 0.0, 0.0]));
        assert_eq!(j.image, v(&[0.0, 0.7, 0.0]));
        let j = map_jet(&identity3(), &[1.0, 2.0, 3.0]).unwrap();
        assert_eq!(j.jacobian, DMatrix::identity(3, 3));
        assert!(j.second.iter().all(|h| h.amax() == 0.0));
    }

    #[test]
    fn image_outside_domain() {
        let map = example_31();
        assert!(matches!(map_jet(&map, &[1.9, 1.9, 0.5]), Ok(_)));
        let map = SmoothMapSpec::new("far", map.domain.clone(), map.codomain.clone(), &["0", "10*x", "0"]).unwrap();
        assert!(matches!(map_jet(&map, &[1.0, 1.0, 1.0]), Err(Error::ImageOutsideDomain { .. })));
    }

    #[test]
    fn example_31_decomposition() {
        let at = MapAt::new(&example_31(), &[0.3, 0.4, 0.5]).unwrap();
        let f = &at.frames;
        assert_eq!(f.rank, 1);
        assert_eq!((f.ker_frame.len(), f.hker_frame.len(), f.range_frame.len(), f.rperp_frame.len()), (2, 1, 1, 2));
        // Z = e1 + e2 is g1-unit
        assert!((&f.hker_frame[0] - v(&[1.0, 1.0, 0.0])).amax() < 1e-12);
        assert!((&f.range_frame[0] - v(&[0.0, 2.0, 0.0])).amax() < 1e-12);
        let all_m: Vec<_> = f.ker_frame.iter().chain(&f.hker_frame).cloned().collect();
        assert!((gram(&all_m, at.g1()) - DMatrix::identity(3, 3)).amax() < 1e-12);
        let all_b: Vec<_> = f.range_frame.iter().chain(&f.rperp_frame).cloned().collect();
        assert!((gram(&all_b, at.g2()) - DMatrix::identity(3, 3)).amax() < 1e-12);
        assert!(at.isometry_residual() < 1e-14);
        assert!(at.sff(&f.hker_frame[0], &f.hker_frame[0]).amax() < 1e-14);
        assert!(at.lemma21_residual() < 1e-14);
        let fit = at.umbilical_fit();
        assert!(fit.h2.amax() < 1e-14 && fit.residual < 1e-14);
        assert!(at.mean_curvature(Distribution::Vertical).unwrap().amax() == 0.0);
        let e2 = v(&[2.0, 0.0, 0.0 + 2.0 * 0.7]);
        assert!(at.shape_operator(&e2).unwrap().amax() < 1e-14);
        assert!(at.shape_operator(&v(&[0.0, 1.0, 0.0])).is_err());
        assert!(at.harmonicity().tension_norm < 1e-14);
    }

    #[test]
    fn identity_is_full_rank() {
        let at = MapAt::new(&identity3(), &[0.1, 0.2, 0.3]).unwrap();
        assert_eq!(at.rank(), 3);
        assert!(at.frames.ker_frame.is_empty() && at.frames.rperp_frame.is_empty());
        assert!(matches!(at.mean_curvature(Distribution::Vertical), Err(Error::EmptyDistribution { .. })));
        assert_eq!(at.umbilical_fit().h2, DVector::zeros(3));
        assert_eq!(at.lemma21_residual(), 0.0);
    }

    #[test]
    fn scaling_breaks_isometry() {
        let r2 = Arc::new(ChartManifold::euclidean("R2", &["x", "y"]));
        let r1 = Arc::new(ChartManifold::euclidean("R1", &["t"]));
        let map = SmoothMapSpec::new("double", r2, r1, &["2*x"]).unwrap();
        assert!((isometry_residual(&map, &[0.5, 0.5]).unwrap() - 3.0).abs() < 1e-14);
    }

    #[test]
    fn zero_rank_is_reported() {
        let r2 = Arc::new(ChartManifold::euclidean("R2", &["x", "y"]));
        let map = SmoothMapSpec::new("const", r2.clone(), r2, &["1", "2"]).unwrap();
        let f = decompose(&map, &[0.0, 0.0]).unwrap();
        assert_eq!(f.rank, 0);
        assert_eq!((f.ker_frame.len(), f.rperp_frame.len()), (2, 2));
    }
}
