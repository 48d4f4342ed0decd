//! Residual evaluators for the geodesic condition on `Ω = π∘γ`, the
//! Clairaut relation for `d(h∘Ω)/ds`, and the rank dichotomy for `h`.
//!
//! Every equation is returned as a list of labelled terms so that sign
//! conventions stay observable and the corollary forms are the same list
//! with the `α` or `β` terms removed.

use nalgebra::{DMatrix, DVector};

use super::{derivative_along, require_codomain, scalar_derivative_along, structure_type_at, ClairautGeodesicTrace, HSpec, LIFT_TOLERANCE};
use crate::contact::ContactStructure;
use crate::error::{Error, Result};
use crate::geometry::GeodesicTrace;
use crate::linalg::{columns, inner, lstsq, norm};
use crate::rmap::{MapAt, SmoothMapSpec};

/// Which structure parameters an evaluation keeps.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TypeClass {
    TransSasakian,
    /// `β = 0`
    AlphaSasakian,
    /// `α = 0`
    BetaKenmotsu,
    /// `α = β = 0`
    Cosymplectic,
}

impl TypeClass {
    pub fn keeps_alpha(self) -> bool {
        matches!(self, TypeClass::TransSasakian | TypeClass::AlphaSasakian)
    }

    pub fn keeps_beta(self) -> bool {
        matches!(self, TypeClass::TransSasakian | TypeClass::BetaKenmotsu)
    }

    fn keeps(self, p: Param) -> bool {
        match p {
            Param::None => true,
            Param::Alpha => self.keeps_alpha(),
            Param::Beta => self.keeps_beta(),
        }
    }
}

/// The structure parameter a term is proportional to.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Param {
    None,
    Alpha,
    Beta,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Term<T> {
    pub label: &'static str,
    pub param: Param,
    pub value: T,
}

fn term<T>(label: &'static str, param: Param, value: T) -> Term<T> {
    Term { label, param, value }
}

/// Pointwise data along `γ` and `Ω = π∘γ`.
struct CurvePoint {
    s: f64,
    at: MapAt,
    gamma_dot: DVector<f64>,
    omega_dot: DVector<f64>,
    pi_w: DVector<f64>,
    u: DVector<f64>,
    w: DVector<f64>,
    v1: DVector<f64>,
    bu: DVector<f64>,
    cu: DVector<f64>,
    psi_u: DVector<f64>,
    z: DVector<f64>,
    lift_residual: f64,
    xi: DVector<f64>,
    eta_u: f64,
    alpha: f64,
    beta: f64,
}

/// `W ∈ (ker π*)⊥` with `π*W = y`, and the relative misfit.
fn lift(at: &MapAt, y: &DVector<f64>) -> Result<(DVector<f64>, f64)> {
    let h = &at.frames.hker_frame;
    let m = at.jet.point.len();
    if h.is_empty() {
        return Ok((DVector::zeros(m), norm(at.g2(), y)));
    }
    let images: Vec<DVector<f64>> = h.iter().map(|e| at.push(e)).collect();
    let (c, _, _) = lstsq(&columns(&images, y.len()), y, f64::INFINITY)?;
    let mut w = DVector::zeros(m);
    for (ci, e) in c.iter().zip(h) {
        w.axpy(*ci, e, 1.0);
    }
    let misfit = norm(at.g2(), &(at.push(&w) - y)) / (1.0 + norm(at.g2(), y));
    Ok((w, misfit))
}

fn curve_points(map: &SmoothMapSpec, structure: &ContactStructure, gamma: &GeodesicTrace) -> Result<Vec<CurvePoint>> {
    require_codomain(map, structure)?;
    gamma
        .samples
        .iter()
        .map(|sample| {
            let at = MapAt::new(map, sample.point.as_slice())?;
            let image = at.jet.image.clone();
            let x = image.as_slice();
            let psi = structure.psi.eval(x)?;
            let xi = structure.xi.eval(x)?;
            let eta = structure.eta.eval(x)?;
            let (alpha, beta) = structure_type_at(structure, x)?;
            let omega_dot = at.push(&sample.velocity);
            let pi_w = at.range_part(&omega_dot);
            let u = &omega_dot - &pi_w;
            let (w, _) = lift(&at, &pi_w)?;
            let v1 = &psi * &pi_w;
            let psi_u = &psi * &u;
            let bu = at.range_part(&psi_u);
            let cu = &psi_u - &bu;
            let (z, lift_residual) = lift(&at, &bu)?;
            if lift_residual > LIFT_TOLERANCE {
                return Err(Error::UndefinedLift { residual: lift_residual });
            }
            let eta_u = eta.dot(&u);
            Ok(CurvePoint {
                s: sample.s,
                at,
                gamma_dot: sample.velocity.clone(),
                omega_dot,
                pi_w,
                u,
                w,
                v1,
                bu,
                cu,
                psi_u,
                z,
                lift_residual,
                xi,
                eta_u,
                alpha,
                beta,
            })
        })
        .collect()
}

fn fraction(g: &DMatrix<f64>, x: &DVector<f64>, tangent: &DVector<f64>) -> f64 {
    let t2 = inner(g, tangent, tangent);
    if t2 <= 1e-24 {
        0.0
    } else {
        inner(g, x, tangent) / t2
    }
}

/// `∇^B_X F` at a curve point: the connection term plus the part of
/// `dF/ds` attributed to `X` through its share of `Ω̇`.
fn nabla_b(c: &CurvePoint, x: &DVector<f64>, f: &DVector<f64>, df: &DVector<f64>) -> DVector<f64> {
    c.at.codomain.gamma.contract(x, f) + df * fraction(c.at.g2(), x, &c.omega_dot)
}

fn nabla_m(c: &CurvePoint, x: &DVector<f64>, f: &DVector<f64>, df: &DVector<f64>) -> DVector<f64> {
    c.at.domain.gamma.contract(x, f) + df * fraction(c.at.g1(), x, &c.gamma_dot)
}

fn collect<F: Fn(&CurvePoint) -> DVector<f64>>(points: &[CurvePoint], f: F) -> Vec<DVector<f64>> {
    points.iter().map(f).collect()
}

/// Both sides of the geodesic criterion at one sample of `γ`.
#[derive(Clone, Debug, PartialEq)]
pub struct Thm31Sample {
    pub s: f64,
    pub point: DVector<f64>,
    /// `‖range π*` part of the first equation‖.
    pub res9: f64,
    /// `‖(range π*)⊥` part of the second equation‖.
    pub res10: f64,
    /// `‖∇_{Ω̇}Ω̇‖` from differences of `Ω̇`.
    pub acceleration_norm: f64,
    pub lift_residual: f64,
    pub terms9: Vec<Term<DVector<f64>>>,
    pub terms10: Vec<Term<DVector<f64>>>,
}

fn sum(terms: &[Term<DVector<f64>>], n: usize) -> DVector<f64> {
    terms.iter().fold(DVector::zeros(n), |acc, t| acc + &t.value)
}

/// Evaluates the two equations characterizing `Ω = π∘γ` as a geodesic of
/// the codomain, and `‖∇_{Ω̇}Ω̇‖`, at every sample of `gamma`.
pub fn thm31_residuals(
    map: &SmoothMapSpec,
    structure: &ContactStructure,
    gamma: &GeodesicTrace,
    class: TypeClass,
) -> Result<Vec<Thm31Sample>> {
    let pts = curve_points(map, structure, gamma)?;
    let h = gamma.step;
    let d_v1 = derivative_along(&collect(&pts, |c| c.v1.clone()), h)?;
    let d_cu = derivative_along(&collect(&pts, |c| c.cu.clone()), h)?;
    let d_bu = derivative_along(&collect(&pts, |c| c.bu.clone()), h)?;
    let d_z = derivative_along(&collect(&pts, |c| c.z.clone()), h)?;
    let d_omega = derivative_along(&collect(&pts, |c| c.omega_dot.clone()), h)?;
    let b = map.codomain.dim();
    Ok(pts
        .iter()
        .enumerate()
        .map(|(i, c)| {
            let at = &c.at;
            let a_v1 = at.shape_operator_apply(&at.perp_part(&c.v1), &c.pi_w).expect("perp part is orthogonal");
            let a_cu = at.shape_operator_apply(&at.perp_part(&c.cu), &c.pi_w).expect("perp part is orthogonal");
            let nabla_wz = nabla_m(c, &c.w, &c.z, &d_z[i]);
            let terms9: Vec<_> = vec![
                term("-A_{ψπ*W}π*W", Param::None, -a_v1),
                term("-A_{CU}π*W", Param::None, -a_cu),
                term("π*(H∇^M_W Z)", Param::None, at.push(&at.horizontal_part(&nabla_wz))),
                term("∇^B_U π*Z", Param::None, nabla_b(c, &c.u, &c.bu, &d_bu[i])),
                term("η(U)απ*W", Param::Alpha, &c.pi_w * (c.eta_u * c.alpha)),
                term("η(U)βπ*Z", Param::Beta, &c.bu * (c.eta_u * c.beta)),
            ]
            .into_iter()
            .filter(|t| class.keeps(t.param))
            .collect();
            let speed2 = inner(at.g2(), &c.omega_dot, &c.omega_dot);
            let terms10: Vec<_> = vec![
                term("∇^⊥_W ψπ*W", Param::None, at.perp_part(&nabla_b(c, &c.pi_w, &c.v1, &d_v1[i]))),
                term("∇^⊥_W CU", Param::None, at.perp_part(&nabla_b(c, &c.pi_w, &c.cu, &d_cu[i]))),
                term("∇^⊥_U ψπ*W", Param::None, at.perp_part(&nabla_b(c, &c.u, &c.v1, &d_v1[i]))),
                term("∇^⊥_U CU", Param::None, at.perp_part(&nabla_b(c, &c.u, &c.cu, &d_cu[i]))),
                term("(∇π*)(W,Z)", Param::None, at.sff(&c.w, &c.z)),
                term("-α‖Ω̇‖²ξ", Param::Alpha, &c.xi * (-c.alpha * speed2)),
                term("η(U)αU", Param::Alpha, &c.u * (c.eta_u * c.alpha)),
                term("η(U)β(ψπ*W+CU)", Param::Beta, (&c.v1 + &c.cu) * (c.eta_u * c.beta)),
            ]
            .into_iter()
            .filter(|t| class.keeps(t.param))
            .collect();
            let res9 = norm(at.g2(), &at.range_part(&sum(&terms9, b)));
            let res10 = norm(at.g2(), &at.perp_part(&sum(&terms10, b)));
            let accel = &d_omega[i] + at.codomain.gamma.contract(&c.omega_dot, &c.omega_dot);
            Thm31Sample {
                s: c.s,
                point: at.jet.point.clone(),
                res9,
                res10,
                acceleration_norm: norm(at.g2(), &accel),
                lift_residual: c.lift_residual,
                terms9,
                terms10,
            }
        })
        .collect())
}

#[derive(Clone, Debug, PartialEq)]
pub struct Thm32Sample {
    pub s: f64,
    /// `g₂(π*W, π*W) d(h∘Ω)/ds`
    pub lhs: f64,
    pub terms: Vec<Term<f64>>,
    pub rhs: f64,
    pub residual: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Thm32Report {
    pub samples: Vec<Thm32Sample>,
    pub max_residual: f64,
    /// Whether the map passed the Clairaut check the relation is compared to.
    pub certified: bool,
    /// The relation holds exactly when the map is certified.
    pub passed: bool,
}

/// Both sides of the Clairaut relation for `d(h∘Ω)/ds` along the domain
/// geodesic of a lifted trace.
pub fn thm32_residual(
    map: &SmoothMapSpec,
    structure: &ContactStructure,
    h: &HSpec,
    trace: &ClairautGeodesicTrace,
    certified: bool,
    class: TypeClass,
    tol: f64,
) -> Result<Thm32Report> {
    let gamma = trace
        .lifted
        .as_ref()
        .ok_or_else(|| Error::Invalid("the Clairaut relation needs a lifted trace with its domain geodesic".into()))?;
    let pts = curve_points(map, structure, gamma)?;
    let step = gamma.step;
    let h_values = pts.iter().map(|c| h.value(c.at.jet.image.as_slice())).collect::<Result<Vec<_>>>()?;
    let dh = scalar_derivative_along(&h_values, step)?;
    let d_v1 = derivative_along(&collect(&pts, |c| c.v1.clone()), step)?;
    let samples: Vec<Thm32Sample> = pts
        .iter()
        .enumerate()
        .map(|(i, c)| {
            let at = &c.at;
            let g2 = at.g2();
            let lhs = inner(g2, &c.pi_w, &c.pi_w) * dh[i];
            let a_v1 = at.shape_operator_apply(&at.perp_part(&c.v1), &c.pi_w).expect("perp part is orthogonal");
            let nabla_w = at.perp_part(&nabla_b(c, &c.pi_w, &c.v1, &d_v1[i]));
            let nabla_u = at.perp_part(&nabla_b(c, &c.u, &c.v1, &d_v1[i]));
            let terms: Vec<Term<f64>> = vec![
                term("g₂(A_{ψπ*W}π*W, π*Z)", Param::None, inner(g2, &a_v1, &c.bu)),
                term("-g₂(∇^⊥_W ψπ*W + ∇^⊥_U ψπ*W, CU)", Param::None, -inner(g2, &(nabla_w + nabla_u), &c.cu)),
                term("-η(U)αg₁(W,Z)", Param::Alpha, -c.eta_u * c.alpha * inner(at.g1(), &c.w, &c.z)),
                term("-η(U)β‖ψU‖²", Param::Beta, -c.eta_u * c.beta * inner(g2, &c.psi_u, &c.psi_u)),
            ]
            .into_iter()
            .filter(|t| class.keeps(t.param))
            .collect();
            let rhs: f64 = terms.iter().map(|t| t.value).sum();
            Thm32Sample { s: c.s, lhs, terms, rhs, residual: (lhs - rhs).abs() }
        })
        .collect();
    let max_residual = samples.iter().map(|x| x.residual).fold(0.0, f64::max);
    Ok(Thm32Report { samples, max_residual, certified, passed: (max_residual < tol) == certified })
}

/// The rank dichotomy for `h` and minimality of `range π*`.
#[derive(Clone, Debug, PartialEq)]
pub struct Thm33Report {
    pub max_rank: usize,
    /// Both statements are vacuous when `dim range π* = 1`.
    pub vacuous: bool,
    /// `max |g₂(∇^B h, ψπ*W)|` over range frames.
    pub max_gradient_pairing: f64,
    /// `max ‖H₂‖`
    pub max_mean_curvature: f64,
    pub passed: bool,
}

pub fn thm33_thm34_checks(
    map: &SmoothMapSpec,
    structure: &ContactStructure,
    h: &HSpec,
    points: &[DVector<f64>],
    tol: f64,
) -> Result<Thm33Report> {
    require_codomain(map, structure)?;
    let mut max_rank = 0;
    let mut pairing: f64 = 0.0;
    let mut mean: f64 = 0.0;
    for p in points {
        let at = MapAt::new(map, p.as_slice())?;
        max_rank = max_rank.max(at.rank());
        if at.rank() <= 1 {
            continue;
        }
        let x = at.jet.image.as_slice();
        let psi = structure.psi.eval(x)?;
        let grad = h.gradient(&map.codomain, x)?;
        for r in &at.frames.range_frame {
            pairing = pairing.max(inner(at.g2(), &grad, &(&psi * r)).abs());
        }
        mean = mean.max(norm(at.g2(), &at.umbilical_fit().h2));
    }
    let vacuous = max_rank <= 1;
    let passed = vacuous || (pairing < tol && mean < tol);
    Ok(Thm33Report { max_rank, vacuous, max_gradient_pairing: pairing, max_mean_curvature: mean, passed })
}

#[cfg(test)]
mod tests {
    use super::super::tests::{example_31, v};
    use super::*;
    use crate::geometry::{integrate_geodesic, ChartManifold};
    use std::sync::Arc;

    fn flat_cosymplectic() -> (SmoothMapSpec, ContactStructure) {
        let m = Arc::new(ChartManifold::euclidean("R2", &["x", "y"]));
        let b = Arc::new(ChartManifold::euclidean("R5", &["a", "b", "c", "d", "t"]));
        let z = "0";
        let s = ContactStructure::new(
            "flat",
            b.clone(),
            &[
                vec![z, z, "-1", z, z],
                vec![z, z, z, "-1", z],
                vec!["1", z, z, z, z],
                vec![z, "1", z, z, z],
                vec![z, z, z, z, z],
            ],
            &[z, z, z, z, "1"],
            &[z, z, z, z, "1"],
            None,
        )
        .unwrap();
        (SmoothMapSpec::new("inc", m, b, &["x", "y", "0", "0", "0"]).unwrap(), s)
    }

    #[test]
    fn example_31_lines_satisfy_both_equations() {
        let (map, s) = example_31();
        let gamma = integrate_geodesic(&map.domain, &v(&[0.2, 0.1, 0.3]), &v(&[0.7, 0.5, -0.4]), 1.0, 1e-2).unwrap();
        let out = thm31_residuals(&map, &s, &gamma, TypeClass::TransSasakian).unwrap();
        for x in &out {
            assert!(x.res9 < 1e-9 && x.res10 < 1e-9 && x.acceleration_norm < 1e-9, "{x:?}");
        }
        // U = 0 along π∘γ, so only the α-term of ξ survives on the perp side
        let t = &out[3].terms10;
        let xi_term = t.iter().find(|t| t.label == "-α‖Ω̇‖²ξ").unwrap();
        assert!(xi_term.value.amax() > 0.1);
    }

    #[test]
    fn corollary_forms_drop_parameter_terms() {
        let (map, s) = example_31();
        let gamma = integrate_geodesic(&map.domain, &v(&[0.2, 0.1, 0.3]), &v(&[0.7, 0.5, -0.4]), 0.5, 1e-2).unwrap();
        let full = thm31_residuals(&map, &s, &gamma, TypeClass::TransSasakian).unwrap();
        for class in [TypeClass::AlphaSasakian, TypeClass::BetaKenmotsu, TypeClass::Cosymplectic] {
            let reduced = thm31_residuals(&map, &s, &gamma, class).unwrap();
            for (f, r) in full.iter().zip(&reduced) {
                let kept: Vec<_> = f.terms10.iter().filter(|t| class.keeps(t.param)).collect();
                assert_eq!(kept.len(), r.terms10.len());
                for (a, b) in kept.iter().zip(&r.terms10) {
                    assert_eq!(a.label, b.label);
                    assert!((&a.value - &b.value).amax() == 0.0);
                }
            }
        }
        let cos = thm31_residuals(&map, &s, &gamma, TypeClass::Cosymplectic).unwrap();
        assert!(cos.iter().all(|x| x.terms10.iter().all(|t| t.param == Param::None)));
        // dropping the ξ-term breaks the Sasakian balance
        assert!(cos[0].res10 > 0.1);
    }

    #[test]
    fn flat_cosymplectic_has_trivial_terms() {
        let (map, s) = flat_cosymplectic();
        let gamma = integrate_geodesic(&map.domain, &v(&[0.1, -0.3]), &v(&[0.6, 0.8]), 1.0, 1e-2).unwrap();
        let full = thm31_residuals(&map, &s, &gamma, TypeClass::TransSasakian).unwrap();
        let cos = thm31_residuals(&map, &s, &gamma, TypeClass::Cosymplectic).unwrap();
        for (a, b) in full.iter().zip(&cos) {
            assert!((a.res9 - b.res9).abs() < 1e-12 && (a.res10 - b.res10).abs() < 1e-12);
            assert!(a.res9 < 1e-12 && a.res10 < 1e-12);
        }
        let report = thm33_thm34_checks(&map, &s, &HSpec::FitConstant, &[v(&[0.3, 0.2]), v(&[-1.0, 2.0])], 1e-9).unwrap();
        assert_eq!(report.max_rank, 2);
        assert!(!report.vacuous && report.passed);
        assert_eq!(report.max_gradient_pairing, 0.0);
    }

    #[test]
    fn rank_one_maps_pass_vacuously() {
        let (map, s) = example_31();
        let r = thm33_thm34_checks(&map, &s, &HSpec::FitConstant, &[v(&[0.3, 0.4, 0.5])], 1e-9).unwrap();
        assert!(r.vacuous && r.passed && r.max_rank == 1);
    }

    #[test]
    fn lift_recovers_preimages() {
        let (map, _) = example_31();
        let at = MapAt::new(&map, &[0.3, 0.4, 0.5]).unwrap();
        let (w, resid) = lift(&at, &v(&[0.0, 3.0, 0.0])).unwrap();
        assert!(resid < 1e-14);
        assert!((w - v(&[1.5, 1.5, 0.0])).amax() < 1e-12);
        let (_, off) = lift(&at, &v(&[1.0, 0.0, 0.0])).unwrap();
        assert!(off > 0.1);
    }
}
