//! Evaluation of one manifest check into a flat map of metrics and a
//! verdict.

use std::collections::BTreeMap;

use nalgebra::DVector;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Map, Value};
use tsmap_core::clairaut::{
    anti_invariance_check, clairaut_geodesic_check, integrability_check, thm31_residuals, thm32_residual,
    thm33_thm34_checks, ClairautParams, ClairautReport, DeclaredFrames, HSpec, Start, TypeClass,
    START_FRACTION,
};
use tsmap_core::contact::{check_almost_contact, estimate_type, trans_sasakian_residual};
use tsmap_core::geometry::{integrate_geodesic, orthonormalize, principal_angles, ChartManifold, VectorFieldSpec};
use tsmap_core::linalg::norm;
use tsmap_core::rmap::{harmonicity_report, sff_finite_difference, Distribution, MapAt, SmoothMapSpec};

use crate::manifest::{CheckKind, CheckSpec, Manifest, StartsSpec};

/// Step of the finite-difference second fundamental form oracle.
pub const ORACLE_STEP: f64 = 1e-4;

pub type Metrics = Map<String, Value>;

/// A finite float as a JSON number, anything else as a string.
pub fn num(x: f64) -> Value {
    if x.is_finite() {
        json!(x)
    } else {
        Value::String(format!("{x}"))
    }
}

pub fn vector(v: &DVector<f64>) -> Value {
    Value::Array(v.iter().map(|x| num(*x)).collect())
}

fn vectors(vs: &[DVector<f64>]) -> Value {
    Value::Array(vs.iter().map(vector).collect())
}

fn max(it: impl IntoIterator<Item = f64>) -> f64 {
    it.into_iter().fold(0.0, f64::max)
}

struct Ctx<'a> {
    manifest: &'a Manifest,
    spec: &'a CheckSpec,
    rng: ChaCha8Rng,
    tol: f64,
    metrics: Metrics,
}

type CheckResult = tsmap_core::Result<bool>;

impl<'a> Ctx<'a> {
    fn put(&mut self, key: &str, value: Value) {
        self.metrics.insert(key.to_string(), value);
    }

    fn map(&self) -> &'a SmoothMapSpec {
        &self.manifest.maps[self.spec.map.as_deref().expect("validated on load")]
    }

    fn structure(&self) -> &'a tsmap_core::contact::ContactStructure {
        &self.manifest.structures[self.spec.structure.as_deref().expect("validated on load")]
    }

    fn points_on(&mut self, chart: &ChartManifold, default_random: usize) -> tsmap_core::Result<Vec<DVector<f64>>> {
        Manifest::points(self.spec.points.as_ref(), default_random, chart, &mut self.rng)
    }

    fn h_spec(&self, chart: &ChartManifold) -> tsmap_core::Result<HSpec> {
        match self.spec.h.as_deref() {
            None | Some("constant") => Ok(HSpec::FitConstant),
            Some(text) => Ok(HSpec::Expr(chart.parse(text)?)),
        }
    }

    fn declared_frames(&self) -> Vec<DeclaredFrames> {
        self.spec
            .frames
            .iter()
            .flatten()
            .map(|f| (*self.manifest.frames[f].1).clone())
            .collect()
    }

    fn length(&self) -> f64 {
        self.spec.length.unwrap_or(1.0)
    }

    fn step(&self) -> f64 {
        self.spec.step.unwrap_or(1e-3)
    }

    fn starts(&mut self, default_lifted: usize) -> tsmap_core::Result<Vec<Start>> {
        let map = self.map();
        let v = |x: &[f64]| DVector::from_column_slice(x);
        match self.spec.starts.clone() {
            Some(StartsSpec::List(list)) => Ok(list
                .iter()
                .map(|s| {
                    if s.lifted {
                        Start::Lifted { point: v(&s.point), velocity: v(&s.velocity) }
                    } else {
                        Start::Codomain { point: v(&s.point), velocity: v(&s.velocity) }
                    }
                })
                .collect()),
            Some(StartsSpec::Lifted { lifted }) => Start::random_lifted(map, lifted, &mut self.rng),
            Some(StartsSpec::Random { random }) => Start::random_codomain(map, random, &mut self.rng),
            None => Start::random_lifted(map, default_lifted, &mut self.rng),
        }
    }

    fn def22_points(&mut self) -> tsmap_core::Result<Vec<DVector<f64>>> {
        let map = self.map();
        Manifest::points(self.spec.def22_points.as_ref(), 10, &map.domain, &mut self.rng)
    }
}

/// Runs one check; the returned bool is the raw verdict before `expect`.
pub fn evaluate(manifest: &Manifest, index: usize, rng: ChaCha8Rng) -> (tsmap_core::Result<bool>, Metrics) {
    let spec = &manifest.checks[index];
    let mut ctx = Ctx { manifest, spec, rng, tol: spec.tol.unwrap_or(manifest.tol), metrics: Map::new() };
    ctx.put("tol", num(ctx.tol));
    let verdict = match spec.kind {
        CheckKind::AlmostContact => almost_contact(&mut ctx),
        CheckKind::TransSasakian => trans_sasakian(&mut ctx),
        CheckKind::RiemannianMap => riemannian_map(&mut ctx),
        CheckKind::SecondFundamentalForm => second_fundamental_form(&mut ctx),
        CheckKind::Umbilical => umbilical(&mut ctx),
        CheckKind::AntiInvariant => anti_invariant(&mut ctx),
        CheckKind::Harmonic => harmonic(&mut ctx),
        CheckKind::MeanCurvature => mean_curvature(&mut ctx),
        CheckKind::Clairaut => clairaut(&mut ctx),
        CheckKind::GeodesicTheorem => geodesic_theorem(&mut ctx),
        CheckKind::ClairautCondition => clairaut_condition(&mut ctx),
        CheckKind::RangeDichotomy => range_dichotomy(&mut ctx),
        CheckKind::Integrability => integrability(&mut ctx),
        CheckKind::GeodesicNorm => geodesic_norm(&mut ctx),
    };
    (verdict, ctx.metrics)
}

fn almost_contact(c: &mut Ctx) -> CheckResult {
    let s = c.structure();
    let points = c.points_on(&s.manifold, 20)?;
    let r = check_almost_contact(s, &points, c.tol, &mut c.rng)?;
    for (k, v) in r.gating() {
        c.put(k, num(v));
    }
    c.put("psi_symmetric", num(r.psi_symmetric));
    c.put("psi_skew", num(r.psi_skew));
    c.put("trace_psi_squared", num(r.trace_psi_squared));
    c.put("points", json!(r.points));
    Ok(r.passed)
}

fn parse_pair(chart: &ChartManifold, pair: &[String; 2]) -> tsmap_core::Result<[tsmap_core::expr::ScalarFieldExpr; 2]> {
    Ok([chart.parse(&pair[0])?, chart.parse(&pair[1])?])
}

fn trans_sasakian(c: &mut Ctx) -> CheckResult {
    let s = c.structure();
    let points = c.points_on(&s.manifold, 20)?;
    let type_tol = c.spec.type_tol.unwrap_or(1e-6);
    let expected = c.spec.expected_type.as_ref().map(|p| parse_pair(&s.manifold, p)).transpose()?;
    let (mut alpha_err, mut beta_err, mut declared_err): (f64, f64, f64) = (0.0, 0.0, 0.0);
    let (mut rp, mut re, mut rx, mut rv, mut fit, mut cond): (f64, f64, f64, f64, f64, f64) = (0.0, 0.0, 0.0, 0.0, 0.0, 0.0);
    let mut fitted = Vec::new();
    for p in &points {
        let x = p.as_slice();
        let est = estimate_type(s, x)?;
        fit = fit.max(est.residual);
        cond = cond.max(est.condition);
        if let Some([a, b]) = &expected {
            alpha_err = alpha_err.max((est.alpha - a.eval(x)?).abs());
            beta_err = beta_err.max((est.beta - b.eval(x)?).abs());
        }
        if let Some((a, b)) = s.declared_type_at(x)? {
            declared_err = declared_err.max((est.alpha - a).abs()).max((est.beta - b).abs());
        }
        let r = trans_sasakian_residual(s, x, est.alpha, est.beta, &mut c.rng)?;
        rp = rp.max(r.psi_equation);
        re = re.max(r.eta_equation);
        rx = rx.max(r.xi_equation);
        rv = rv.max(r.eta_equation_vector);
        fitted.push(json!([num(est.alpha), num(est.beta)]));
    }
    c.put("psi_equation", num(rp));
    c.put("eta_equation", num(re));
    c.put("xi_equation", num(rx));
    c.put("eta_equation_vector", num(rv));
    c.put("fit_residual", num(fit));
    c.put("fit_condition", num(cond));
    c.put("fitted_type", Value::Array(fitted));
    c.put("points", vectors(&points));
    let mut ok = rp.max(re).max(rx) < c.tol;
    if expected.is_some() {
        c.put("alpha_error", num(alpha_err));
        c.put("beta_error", num(beta_err));
        ok &= alpha_err.max(beta_err) < type_tol;
    }
    if s.declared_type.is_some() {
        c.put("declared_type_error", num(declared_err));
        ok &= declared_err < type_tol;
    }
    Ok(ok)
}

fn riemannian_map(c: &mut Ctx) -> CheckResult {
    let map = c.map();
    let points = c.points_on(&map.domain, 20)?;
    let angle_tol = c.spec.angle_tol.unwrap_or(1e-8);
    let expected_kernel: Option<Vec<DVector<f64>>> =
        c.spec.kernel.as_ref().map(|k| k.iter().map(|v| DVector::from_column_slice(v)).collect());
    let mut ranks = std::collections::BTreeSet::new();
    let (mut iso, mut lemma, mut angle): (f64, f64, f64) = (0.0, 0.0, 0.0);
    let mut warnings = Vec::new();
    let mut first: Option<MapAt> = None;
    for p in &points {
        let at = MapAt::new(map, p.as_slice())?;
        ranks.insert(at.rank());
        iso = iso.max(at.isometry_residual());
        lemma = lemma.max(at.lemma21_residual());
        warnings.extend(at.frames.warnings.iter().cloned());
        if let Some(k) = &expected_kernel {
            let k = orthonormalize(k, at.g1())?;
            if k.len() != at.frames.ker_frame.len() {
                angle = f64::INFINITY;
            } else {
                angle = angle.max(max(principal_angles(&k, &at.frames.ker_frame, at.g1())?));
            }
        }
        first.get_or_insert(at);
    }
    c.put("ranks", json!(ranks.iter().collect::<Vec<_>>()));
    c.put("isometry_residual", num(iso));
    c.put("lemma21_residual", num(lemma));
    warnings.sort();
    warnings.dedup();
    c.put("warnings", json!(warnings));
    if let Some(at) = &first {
        c.put("point", vector(&at.jet.point));
        c.put("ker_frame", vectors(&at.frames.ker_frame));
        c.put("hker_frame", vectors(&at.frames.hker_frame));
        c.put("range_frame", vectors(&at.frames.range_frame));
        c.put("rperp_frame", vectors(&at.frames.rperp_frame));
        c.put("singular_values", json!(at.frames.singular_values.iter().map(|x| num(*x)).collect::<Vec<_>>()));
    }
    let mut ok = iso < c.tol;
    if let Some(r) = c.spec.rank {
        ok &= ranks.len() == 1 && ranks.contains(&r);
    }
    if expected_kernel.is_some() {
        c.put("kernel_angle", num(angle));
        ok &= angle < angle_tol;
    }
    Ok(ok)
}

fn domain_field(map: &SmoothMapSpec, comps: &[String]) -> tsmap_core::Result<VectorFieldSpec> {
    VectorFieldSpec::new(&map.domain, comps)
}

fn second_fundamental_form(c: &mut Ctx) -> CheckResult {
    let map = c.map();
    let points = c.points_on(&map.domain, 10)?;
    let w = domain_field(map, c.spec.w.as_ref().expect("validated on load"))?;
    let z = domain_field(map, c.spec.z.as_ref().expect("validated on load"))?;
    let expected = c.spec.expected.as_ref().map(|e| VectorFieldSpec::new(&map.codomain, e)).transpose()?;
    let oracle_tol = c.spec.oracle_tol.unwrap_or(1e-6);
    let (mut oracle, mut exp, mut sym): (f64, f64, f64) = (0.0, 0.0, 0.0);
    let mut values = Vec::new();
    for p in &points {
        let x = p.as_slice();
        let at = MapAt::new(map, x)?;
        let (wv, zv) = (w.eval(x)?, z.eval(x)?);
        let s = at.sff(&wv, &zv);
        sym = sym.max((&s - at.sff(&zv, &wv)).amax());
        oracle = oracle.max((&s - sff_finite_difference(map, x, &wv, &zv, ORACLE_STEP)?).amax());
        if let Some(e) = &expected {
            exp = exp.max((&s - e.eval(at.jet.image.as_slice())?).amax());
        }
        values.push(json!({ "point": vector(p), "image": vector(&at.jet.image), "value": vector(&s) }));
    }
    c.put("oracle_difference", num(oracle));
    c.put("symmetry", num(sym));
    c.put("samples", Value::Array(values));
    let mut ok = oracle < oracle_tol && sym < c.tol;
    if expected.is_some() {
        c.put("expected_difference", num(exp));
        ok &= exp < c.tol;
    }
    Ok(ok)
}

fn umbilical(c: &mut Ctx) -> CheckResult {
    let map = c.map();
    let points = c.points_on(&map.domain, 10)?;
    let (mut resid, mut h2): (f64, f64) = (0.0, 0.0);
    let mut samples = Vec::new();
    for p in &points {
        let at = MapAt::new(map, p.as_slice())?;
        let fit = at.umbilical_fit();
        resid = resid.max(fit.residual);
        h2 = h2.max(norm(at.g2(), &fit.h2));
        samples.push(json!({ "image": vector(&at.jet.image), "h2": vector(&fit.h2) }));
    }
    c.put("umbilical_residual", num(resid));
    c.put("max_h2_norm", num(h2));
    c.put("samples", Value::Array(samples));
    Ok(resid < c.tol)
}

fn anti_invariant(c: &mut Ctx) -> CheckResult {
    let (map, s) = (c.map(), c.structure());
    let points = c.points_on(&map.domain, 10)?;
    let (mut resid, mut gram_min, mut mu): (f64, f64, f64) = (0.0, f64::INFINITY, f64::INFINITY);
    let mut positions = std::collections::BTreeSet::new();
    let mut all = true;
    let mut first = None;
    for p in &points {
        let split = anti_invariance_check(map, s, p.as_slice(), c.tol)?;
        resid = resid.max(split.residual);
        all &= split.is_anti_invariant;
        positions.insert(split.reeb_position.as_str());
        gram_min = gram_min.min(split.gram_determinant());
        let xi_norm = (split.xi_range_norm.powi(2) + split.xi_perp_norm.powi(2)).sqrt();
        mu = mu.min(if xi_norm > 0.0 { split.xi_mu_norm / xi_norm } else { 0.0 });
        first.get_or_insert(split);
    }
    c.put("residual", num(resid));
    c.put("reeb_positions", json!(positions.iter().collect::<Vec<_>>()));
    c.put("min_gram_determinant", num(gram_min));
    c.put("min_xi_mu_fraction", num(mu));
    if let Some(f) = first {
        c.put("psi_range_frame", vectors(&f.psi_range_frame));
        c.put("mu_frame", vectors(&f.mu_frame));
    }
    let mut ok = all;
    if let Some(r) = &c.spec.reeb {
        ok &= positions.len() == 1 && positions.contains(r.as_str());
    }
    Ok(ok)
}

fn harmonic(c: &mut Ctx) -> CheckResult {
    let map = c.map();
    let points = c.points_on(&map.domain, 10)?;
    let r = harmonicity_report(map, &points, c.tol)?;
    c.put("max_tension", num(r.max_tension));
    c.put("max_pushed_mean_curvature", num(r.max_pushed_mean_curvature));
    c.put("max_trace_identity_residual", num(r.max_trace_identity_residual));
    let mut vertical: f64 = 0.0;
    for p in &points {
        let at = MapAt::new(map, p.as_slice())?;
        vertical = vertical.max(norm(at.g1(), &at.mean_curvature(Distribution::Vertical)?));
    }
    c.put("max_vertical_mean_curvature", num(vertical));
    Ok(r.harmonic)
}

fn mean_curvature(c: &mut Ctx) -> CheckResult {
    let map = c.map();
    let points = c.points_on(&map.domain, 10)?;
    let which = match c.spec.distribution.as_deref() {
        None | Some("vertical") => Distribution::Vertical,
        Some("horizontal") => Distribution::Horizontal,
        Some(other) => {
            return Err(tsmap_core::Error::Invalid(format!("distribution must be vertical or horizontal, got `{other}`")))
        }
    };
    let mut worst: f64 = 0.0;
    for p in &points {
        let at = MapAt::new(map, p.as_slice())?;
        worst = worst.max(norm(at.g1(), &at.mean_curvature(which)?));
    }
    c.put("max_norm", num(worst));
    Ok(worst < c.tol)
}

fn clairaut_run(c: &mut Ctx, default_starts: usize) -> tsmap_core::Result<(ClairautReport, HSpec)> {
    let (map, s) = (c.map(), c.structure());
    let h = c.h_spec(&map.codomain)?;
    let variants = c.declared_frames();
    let starts = c.starts(default_starts)?;
    let def22 = c.def22_points()?;
    let params = ClairautParams { length: c.length(), step: c.step(), tol: c.tol };
    Ok((clairaut_geodesic_check(map, s, &h, &variants, &starts, &def22, params)?, h))
}

fn clairaut(c: &mut Ctx) -> CheckResult {
    let (r, _) = clairaut_run(c, 5)?;
    c.put("max_drift_per_length", num(r.max_drift_per_length));
    c.put("drifts_per_length", json!(r.traces.iter().map(|t| num(t.drift_per_length)).collect::<Vec<_>>()));
    c.put("traces", json!(r.traces.len()));
    c.put("invariant_passed", json!(r.invariant_passed));
    c.put("max_umbilical_residual", num(r.max_umbilical_residual));
    c.put("max_def22_residual", num(r.max_def22_residual));
    c.put("def22_passed", json!(r.def22_passed));
    c.put("def22_satisfied_by", json!(r.def22_satisfied_by()));
    if let Some(d) = r.def22.first() {
        let mut components = BTreeMap::new();
        for (name, h2, grad) in &d.components {
            components.insert(
                name.clone(),
                json!({
                    "h2": h2.iter().map(|x| num(*x)).collect::<Vec<_>>(),
                    "grad_h": grad.iter().map(|x| num(*x)).collect::<Vec<_>>(),
                }),
            );
        }
        c.put(
            "def22_sample",
            json!({
                "point": vector(&d.point),
                "image": vector(&d.image),
                "h2": vector(&d.h2),
                "grad_h": vector(&d.grad_h),
                "residual": num(d.residual),
                "components": components,
            }),
        );
    }
    let variants: Vec<Value> = r
        .variants
        .iter()
        .map(|v| {
            json!({
                "name": v.name,
                "validation": match &v.validation { Ok(a) => num(*a), Err(e) => Value::String(e.clone()) },
                "orthonormality": num(v.quality.orthonormality),
                "cross": num(v.quality.cross),
                "satisfied": v.satisfied,
            })
        })
        .collect();
    c.put("variants", Value::Array(variants));
    Ok(r.passed)
}

fn domain_geodesics(c: &mut Ctx, default: usize) -> tsmap_core::Result<Vec<tsmap_core::geometry::GeodesicTrace>> {
    let map = c.map();
    let starts = c.starts(default)?;
    starts
        .iter()
        .map(|s| match s {
            Start::Lifted { point, velocity } => integrate_geodesic(&map.domain, point, velocity, c.length(), c.step()),
            Start::Codomain { .. } => {
                Err(tsmap_core::Error::Invalid("this check integrates domain geodesics: starts must be lifted".into()))
            }
        })
        .collect()
}

fn geodesic_theorem(c: &mut Ctx) -> CheckResult {
    let (map, s) = (c.map(), c.structure());
    let traces = domain_geodesics(c, 5)?;
    let (mut both_small, mut both_large, mut one_sided) = (0usize, 0usize, 0usize);
    let (mut r9, mut r10, mut acc): (f64, f64, f64) = (0.0, 0.0, 0.0);
    for gamma in &traces {
        for x in thm31_residuals(map, s, gamma, TypeClass::TransSasakian)? {
            r9 = r9.max(x.res9);
            r10 = r10.max(x.res10);
            acc = acc.max(x.acceleration_norm);
            match (x.res9.max(x.res10) < c.tol, x.acceleration_norm < c.tol) {
                (true, true) => both_small += 1,
                (false, false) => both_large += 1,
                _ => one_sided += 1,
            }
        }
    }
    c.put("traces", json!(traces.len()));
    c.put("both_small", json!(both_small));
    c.put("both_large", json!(both_large));
    c.put("one_sided", json!(one_sided));
    c.put("max_res9", num(r9));
    c.put("max_res10", num(r10));
    c.put("max_acceleration", num(acc));
    Ok(one_sided == 0)
}

fn clairaut_condition(c: &mut Ctx) -> CheckResult {
    let (map, s) = (c.map(), c.structure());
    let (report, h) = clairaut_run(c, 3)?;
    let certified = report.passed;
    let mut max_residual: f64 = 0.0;
    let mut passed = true;
    let mut terms: BTreeMap<&'static str, f64> = BTreeMap::new();
    let mut lhs: f64 = 0.0;
    for t in &report.traces {
        let r = thm32_residual(map, s, &h, t, certified, TypeClass::TransSasakian, c.tol)?;
        max_residual = max_residual.max(r.max_residual);
        passed &= r.passed;
        for x in &r.samples {
            lhs = lhs.max(x.lhs.abs());
            for term in &x.terms {
                let e = terms.entry(term.label).or_insert(0.0);
                *e = e.max(term.value.abs());
            }
        }
    }
    c.put("certified", json!(certified));
    c.put("max_residual", num(max_residual));
    c.put("max_abs_lhs", num(lhs));
    c.put("max_abs_terms", Value::Object(terms.into_iter().map(|(k, v)| (k.to_string(), num(v))).collect()));
    Ok(passed)
}

fn range_dichotomy(c: &mut Ctx) -> CheckResult {
    let (map, s) = (c.map(), c.structure());
    let h = c.h_spec(&map.codomain)?;
    let points = c.points_on(&map.domain, 10)?;
    let r = thm33_thm34_checks(map, s, &h, &points, c.tol)?;
    c.put("max_rank", json!(r.max_rank));
    c.put("vacuous", json!(r.vacuous));
    c.put("max_gradient_pairing", num(r.max_gradient_pairing));
    c.put("max_mean_curvature", num(r.max_mean_curvature));
    Ok(r.passed)
}

fn integrability(c: &mut Ctx) -> CheckResult {
    let (chart, fields, complement) = match (&c.spec.frames, c.spec.part.as_deref()) {
        (Some(names), Some(part)) => {
            let (owner, f) = &c.manifest.frames[&names[0]];
            let chart = c.manifest.maps[owner].codomain.clone();
            match part {
                "range" => (chart, f.range.clone(), f.rperp.clone()),
                "rperp" => (chart, f.rperp.clone(), f.range.clone()),
                other => return Err(tsmap_core::Error::Invalid(format!("part must be range or rperp, got `{other}`"))),
            }
        }
        _ => {
            let chart = c.manifest.manifolds[c.spec.manifold.as_deref().expect("validated on load")].clone();
            let parse = |rows: &Vec<Vec<String>>| -> tsmap_core::Result<Vec<VectorFieldSpec>> {
                rows.iter().map(|r| VectorFieldSpec::new(&chart, r)).collect()
            };
            let fields = parse(c.spec.fields.as_ref().expect("validated on load"))?;
            let complement = parse(c.spec.complement.as_ref().expect("validated on load"))?;
            (chart, fields, complement)
        }
    };
    let points = c.points_on(&chart, 10)?;
    let r = integrability_check(&chart, &fields, &complement, &points, c.tol)?;
    let expected = c.spec.integrable.unwrap_or(true);
    c.put("max_residual", num(r.max_residual));
    c.put("integrable", json!(r.integrable));
    c.put("expected_integrable", json!(expected));
    Ok(r.integrable == expected)
}

fn geodesic_norm(c: &mut Ctx) -> CheckResult {
    let chart = c.manifest.manifolds[c.spec.manifold.as_deref().expect("validated on load")].clone();
    let starts: Vec<(DVector<f64>, DVector<f64>)> = match c.spec.starts.clone() {
        Some(StartsSpec::List(list)) => {
            list.iter().map(|s| (DVector::from_column_slice(&s.point), DVector::from_column_slice(&s.velocity))).collect()
        }
        Some(StartsSpec::Random { random }) | Some(StartsSpec::Lifted { lifted: random }) => {
            random_unit_starts(&chart, random, &mut c.rng)?
        }
        None => random_unit_starts(&chart, 5, &mut c.rng)?,
    };
    let mut worst: f64 = 0.0;
    for (p, v) in &starts {
        let trace = integrate_geodesic(&chart, p, v, c.length(), c.step())?;
        let arclength = trace.length() * trace.first().metric_norm;
        worst = worst.max(if arclength > 0.0 { trace.speed_drift() / arclength } else { 0.0 });
    }
    c.put("starts", json!(starts.len()));
    c.put("max_drift_per_length", num(worst));
    Ok(worst < c.tol)
}

fn random_unit_starts(
    chart: &ChartManifold,
    n: usize,
    rng: &mut ChaCha8Rng,
) -> tsmap_core::Result<Vec<(DVector<f64>, DVector<f64>)>> {
    use rand::Rng;
    let points = chart.sample_points_inset(n, START_FRACTION, rng)?;
    points
        .into_iter()
        .map(|p| {
            let g = chart.metric_at(p.as_slice())?;
            let raw = DVector::from_fn(chart.dim(), |_, _| rng.gen_range(-1.0..1.0));
            let v = &raw / norm(&g, &raw);
            Ok((p, v))
        })
        .collect()
}
