//! Acceptance suite: one line per criterion, then a single assertion over
//! all of them. Run with `--nocapture` to see the lines.

#[path = "../../core/tests/common/mod.rs"]
mod common;

use std::process::Command;
use std::time::{Duration, Instant};

use common::*;
use nalgebra::{DVector, Vector3};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::Value;
use tsmap::runner::{run_manifest, RunReport, Status};
use tsmap_core::expr::parse_expr;
use tsmap_core::geometry::{integrate_geodesic, ChartManifold, Interval};
use tsmap_core::rmap::{isometry_residual, lemma21_residual, MapAt};

type Outcome = Result<String, String>;

fn run(name: &str) -> (RunReport, Duration) {
    let m = tsmap::load(&format!("builtin:{name}")).expect("bundled manifest loads");
    let started = Instant::now();
    let report = run_manifest(&m, None, None);
    (report, started.elapsed())
}

fn check<'a>(report: &'a RunReport, name: &str) -> Result<&'a serde_json::Map<String, Value>, String> {
    let c = report.checks.iter().find(|c| c.name == name).ok_or(format!("no check `{name}` in report"))?;
    if c.status == Status::Error {
        return Err(format!("`{name}` errored: {}", c.message));
    }
    Ok(&c.metrics)
}

fn status(report: &RunReport, name: &str) -> Option<Status> {
    report.checks.iter().find(|c| c.name == name).map(|c| c.status)
}

fn metric(m: &serde_json::Map<String, Value>, key: &str) -> Result<f64, String> {
    m.get(key).and_then(Value::as_f64).ok_or(format!("metric `{key}` missing or not finite"))
}

fn below(m: &serde_json::Map<String, Value>, key: &str, bound: f64) -> Result<f64, String> {
    let x = metric(m, key)?;
    if x < bound {
        Ok(x)
    } else {
        Err(format!("{key} = {x:.3e} is not below {bound:e}"))
    }
}

fn within(elapsed: Duration, limit: f64) -> Result<(), String> {
    if elapsed.as_secs_f64() < limit {
        Ok(())
    } else {
        Err(format!("took {:.2} s, limit {limit} s", elapsed.as_secs_f64()))
    }
}

fn criterion_1() -> Outcome {
    let (r, t) = run("example_2_1");
    let axioms = check(&r, "almost_contact_axioms")?;
    let mut worst: f64 = 0.0;
    for key in ["psi_squared", "psi_xi", "eta_psi", "eta_xi", "compatibility", "eta_metric_dual"] {
        worst = worst.max(below(axioms, key, 1e-10)?);
    }
    if axioms.get("points") != Some(&Value::from(20)) {
        return Err("axioms were not evaluated at 20 points".into());
    }
    let ts = check(&r, "trans_sasakian_type")?;
    let a = below(ts, "alpha_error", 1e-6)?;
    let b = below(ts, "beta_error", 1e-6)?;
    let mut eq: f64 = 0.0;
    for key in ["psi_equation", "eta_equation", "xi_equation"] {
        eq = eq.max(below(ts, key, 1e-8)?);
    }
    within(t, 1.0)?;
    Ok(format!("axioms {worst:.1e}, type error ({a:.1e}, {b:.1e}), equations {eq:.1e}, {:.3} s", t.as_secs_f64()))
}

fn criterion_2() -> Outcome {
    let (r, t) = run("example_3_1");
    let rm = check(&r, "riemannian_map")?;
    if rm.get("ranks") != Some(&Value::from(vec![1])) {
        return Err(format!("ranks {:?}", rm.get("ranks")));
    }
    let angle = below(rm, "kernel_angle", 1e-8)?;
    let iso = below(rm, "isometry_residual", 1e-10)?;
    let sff = below(check(&r, "second_fundamental_form_zz")?, "expected_difference", 1e-9)?;
    let ai = check(&r, "anti_invariant_horizontal_reeb")?;
    if status(&r, "anti_invariant_horizontal_reeb") != Some(Status::Pass)
        || ai.get("reeb_positions") != Some(&Value::from(vec!["horizontal"]))
    {
        return Err("anti-invariance with horizontal Reeb field not established".into());
    }
    let cl = check(&r, "clairaut")?;
    if cl.get("traces") != Some(&Value::from(5)) {
        return Err("Clairaut drift not measured over 5 geodesics".into());
    }
    let drift = below(cl, "max_drift_per_length", 1e-6)?;
    let hm = check(&r, "harmonic")?;
    if status(&r, "harmonic") != Some(Status::Pass) {
        return Err("not harmonic".into());
    }
    let tension = metric(hm, "max_tension")?;
    let vertical = below(hm, "max_vertical_mean_curvature", 1e-8)?;
    within(t, 10.0)?;
    Ok(format!(
        "kernel angle {angle:.1e}, isometry {iso:.1e}, sff {sff:.1e}, drift {drift:.1e}, tension {tension:.1e}, vertical mean curvature {vertical:.1e}, {:.3} s",
        t.as_secs_f64()
    ))
}

fn criterion_3() -> Outcome {
    let (r, t) = run("example_3_2");
    if status(&r, "anti_invariant") != Some(Status::Pass) {
        return Err("anti-invariance fails".into());
    }
    let ts = check(&r, "trans_sasakian_type")?;
    let a = below(ts, "alpha_error", 1e-6)?;
    let b = below(ts, "beta_error", 1e-6)?;
    let oracle = below(check(&r, "second_fundamental_form_zz")?, "oracle_difference", 1e-6)?;
    let cl = check(&r, "clairaut_frame_variants")?;
    let variants = cl.get("variants").and_then(Value::as_array).ok_or("no variant reports")?;
    let mut names = Vec::new();
    for v in variants {
        let name = v["name"].as_str().ok_or("unnamed variant")?;
        v["satisfied"].as_bool().ok_or(format!("variant `{name}` carries no flag"))?;
        names.push(name.to_string());
    }
    if names != ["with_v", "printed"] {
        return Err(format!("variants evaluated: {names:?}"));
    }
    let satisfied = cl.get("def22_satisfied_by").ok_or("no def22_satisfied_by flag")?;
    let residual = metric(cl, "max_def22_residual")?;
    within(t, 10.0)?;
    Ok(format!(
        "type error ({a:.1e}, {b:.1e}), sff vs oracle {oracle:.1e}, variants {names:?} evaluated, satisfied by {satisfied} (max |H2 + grad h| = {residual:.3}), {:.3} s",
        t.as_secs_f64()
    ))
}

fn criterion_4() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut worst: f64 = 0.0;
    for i in 0..100 {
        let (map, rank) = random_riemannian_map(&mut rng);
        let p = map.domain.sample_points(1, &mut rng).map_err(|e| e.to_string())?.remove(0);
        let at = MapAt::new(&map, p.as_slice()).map_err(|e| e.to_string())?;
        if at.rank() != rank {
            return Err(format!("fixture {i}: rank {} instead of {rank}", at.rank()));
        }
        let iso = isometry_residual(&map, p.as_slice()).map_err(|e| e.to_string())?;
        if iso >= 1e-10 {
            return Err(format!("fixture {i} is not a Riemannian map: {iso:.3e}"));
        }
        worst = worst.max(lemma21_residual(&map, p.as_slice()).map_err(|e| e.to_string())?);
    }
    if worst < 1e-8 {
        Ok(format!("max range component {worst:.2e} over 100 maps"))
    } else {
        Err(format!("max range component {worst:.3e}"))
    }
}

fn criterion_5() -> Outcome {
    let coords: Vec<String> = VARS.iter().map(|s| s.to_string()).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let h = 1e-3;
    let rel = |a: f64, b: f64| (a - b).abs() / a.abs().max(b.abs()).max(1.0);
    let mut worst: f64 = 0.0;
    for _ in 0..500 {
        let text = random_expr(&mut rng, 4);
        let e = parse_expr(&text, &coords).map_err(|err| format!("`{text}`: {err}"))?;
        let p: Vec<f64> = (0..3).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let jet = e.eval_jet2(&p).map_err(|err| format!("`{text}`: {err}"))?;
        let f = |dx: &[(usize, f64)]| {
            let mut q = p.clone();
            for (i, d) in dx {
                q[*i] += d;
            }
            e.eval(&q).unwrap()
        };
        let d1 = |i: usize, h: f64| (f(&[(i, h)]) - f(&[(i, -h)])) / (2.0 * h);
        let d2 = |i: usize, j: usize, h: f64| {
            (f(&[(i, h), (j, h)]) - f(&[(i, h), (j, -h)]) - f(&[(i, -h), (j, h)]) + f(&[(i, -h), (j, -h)])) / (4.0 * h * h)
        };
        for i in 0..3 {
            worst = worst.max(rel(jet.grad[i], (4.0 * d1(i, h / 2.0) - d1(i, h)) / 3.0));
            for j in 0..3 {
                worst = worst.max(rel(jet.hess[(i, j)], (4.0 * d2(i, j, h / 2.0) - d2(i, j, h)) / 3.0));
            }
        }
    }
    if worst < 1e-6 {
        Ok(format!("worst relative error {worst:.2e} over 500 expressions"))
    } else {
        Err(format!("worst relative error {worst:.3e}"))
    }
}

fn sphere_endpoint_error(step: f64) -> Result<f64, String> {
    let embed = |t: f64, p: f64| Vector3::new(t.sin() * p.cos(), t.sin() * p.sin(), t.cos());
    let (t0, p0): (f64, f64) = (1.1, 0.2);
    let (a, b) = (0.6, 0.8 / t0.sin());
    let length = 2.0;
    let trace = integrate_geodesic(&sphere(), &v(&[t0, p0]), &v(&[a, b]), length, step).map_err(|e| e.to_string())?;
    let et = Vector3::new(t0.cos() * p0.cos(), t0.cos() * p0.sin(), -t0.sin());
    let ep = Vector3::new(-p0.sin(), p0.cos(), 0.0);
    let exact = embed(t0, p0) * length.cos() + (et * a + ep * (b * t0.sin())) * length.sin();
    let end = trace.last();
    Ok((embed(end.point[0], end.point[1]) - exact).norm())
}

fn criterion_6() -> Outcome {
    let errors = [0.1, 0.05, 0.025].iter().map(|h| sphere_endpoint_error(*h)).collect::<Result<Vec<_>, _>>()?;
    let orders: Vec<f64> = errors.windows(2).map(|w| (w[0] / w[1]).log2()).collect();
    if let Some(o) = orders.iter().find(|o| **o < 3.5) {
        return Err(format!("observed order {o:.2}"));
    }
    let (m31, _) = example_31();
    let (m32, _) = example_32();
    let charts: Vec<ChartManifold> = vec![
        sphere().with_bounds(vec![Interval::new(0.05, 3.09), Interval::new(-10.0, 10.0)]).map_err(|e| e.to_string())?,
        polar().with_bounds(vec![Interval::new(0.1, 20.0), Interval::new(-10.0, 10.0)]).map_err(|e| e.to_string())?,
        (*sasakian_b()).clone(),
        (*kenmotsu_b()).clone(),
        (*m31.domain).clone(),
        (*m32.domain).clone(),
    ];
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut worst: f64 = 0.0;
    for m in &charts {
        for _ in 0..3 {
            let p = m.sample_points_inset(1, 0.2, &mut rng).map_err(|e| e.to_string())?.remove(0);
            let g = m.metric_at(p.as_slice()).map_err(|e| e.to_string())?;
            let raw = DVector::from_fn(m.dim(), |_, _| rng.gen_range(-1.0..1.0));
            let v0 = &raw / (raw.transpose() * &g * &raw)[(0, 0)].sqrt();
            let trace = integrate_geodesic(m, &p, &v0, 1.0, 1e-3).map_err(|e| format!("{}: {e}", m.name()))?;
            worst = worst.max(trace.speed_drift() / trace.length());
        }
    }
    if worst < 1e-6 {
        Ok(format!("orders {orders:.2?}, max speed drift {worst:.2e} per unit arclength on {} charts", charts.len()))
    } else {
        Err(format!("speed drift {worst:.3e} per unit arclength"))
    }
}

fn criterion_7() -> Outcome {
    let (r, _) = run("example_3_1");
    let m = check(&r, "geodesic_equivalence")?;
    if metric(m, "tol")? != 1e-5 || m.get("traces") != Some(&Value::from(5)) {
        return Err("equivalence not sampled over 5 geodesics at 1e-5".into());
    }
    let count = |k: &str| m.get(k).and_then(Value::as_u64).unwrap_or(u64::MAX);
    let (small, large, one) = (count("both_small"), count("both_large"), count("one_sided"));
    if one == 0 {
        Ok(format!("{small} samples both small, {large} both large, none one-sided"))
    } else {
        Err(format!("{one} one-sided samples"))
    }
}

fn criterion_8() -> Outcome {
    let (r21, _) = run("example_2_1");
    let contact = check(&r21, "contact_distribution_not_integrable")?;
    let c = metric(contact, "max_residual")?;
    if c <= 0.1 || contact.get("integrable") != Some(&Value::Bool(false)) {
        return Err(format!("contact distribution residual {c:.3e}"));
    }
    let (r32, _) = run("example_3_2");
    let rperp = check(&r32, "rperp_integrable")?;
    let p = below(rperp, "max_residual", 1e-8)?;
    Ok(format!("contact distribution residual {c:.3}, (range)⊥ residual {p:.1e}"))
}

fn criterion_9() -> Outcome {
    let bin = env!("CARGO_BIN_EXE_tsmap");
    for name in ["example_2_1", "example_3_1", "example_3_2"] {
        let once = || {
            Command::new(bin)
                .args(["check", &format!("builtin:{name}"), "--seed", "1234"])
                .output()
                .map_err(|e| e.to_string())
        };
        let (a, b) = (once()?, once()?);
        if a.stdout.is_empty() || a.stdout != b.stdout {
            return Err(format!("{name}: reports differ between runs"));
        }
    }
    Ok("byte-identical reports for all bundled manifests at seed 1234".into())
}

#[test]
fn acceptance() {
    let criteria: [(u32, fn() -> Outcome); 9] = [
        (1, criterion_1),
        (2, criterion_2),
        (3, criterion_3),
        (4, criterion_4),
        (5, criterion_5),
        (6, criterion_6),
        (7, criterion_7),
        (8, criterion_8),
        (9, criterion_9),
    ];
    let mut failed = Vec::new();
    for (n, f) in criteria {
        match f() {
            Ok(detail) => println!("criterion {n}: PASS ({detail})"),
            Err(why) => {
                println!("criterion {n}: FAIL ({why})");
                failed.push(n);
            }
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
