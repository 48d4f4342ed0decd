#![allow(dead_code)]

use std::sync::Arc;

use nalgebra::{DMatrix, DVector};
use rand::Rng;
use tsmap_core::contact::ContactStructure;
use tsmap_core::geometry::{ChartManifold, Interval};
use tsmap_core::rmap::SmoothMapSpec;

pub fn v(x: &[f64]) -> DVector<f64> {
    DVector::from_column_slice(x)
}

pub fn sasakian_b() -> Arc<ChartManifold> {
    Arc::new(
        ChartManifold::new(
            "B",
            &["u", "v", "w"],
            vec![Interval::new(-50.0, 50.0); 3],
            &["w = 0"],
            &[vec!["(1+v^2)/4", "0", "-v/4"], vec!["0", "1/4", "0"], vec!["-v/4", "0", "1/4"]],
        )
        .unwrap(),
    )
}

pub fn sasakian_structure(b: Arc<ChartManifold>) -> ContactStructure {
    ContactStructure::new(
        "sasakian",
        b,
        &[vec!["0", "1", "0"], vec!["-1", "0", "0"], vec!["0", "v", "0"]],
        &["0", "0", "2"],
        &["-v/2", "0", "1/2"],
        Some(("1", "0")),
    )
    .unwrap()
}

pub fn example_31() -> (SmoothMapSpec, ContactStructure) {
    let m = ChartManifold::new(
        "M",
        &["x", "y", "z"],
        vec![Interval::new(-10.0, 10.0); 3],
        &["x = 0", "y = 0", "z = 0"],
        &[vec!["3/8", "1/8", "0"], vec!["1/8", "3/8", "0"], vec!["0", "0", "1/4"]],
    )
    .unwrap();
    let b = sasakian_b();
    let s = sasakian_structure(b.clone());
    (SmoothMapSpec::new("pi", Arc::new(m), b, &["0", "x+y", "0"]).unwrap(), s)
}

pub fn kenmotsu_b() -> Arc<ChartManifold> {
    Arc::new(
        ChartManifold::new(
            "B",
            &["u", "v", "w"],
            vec![Interval::new(-3.0, 3.0); 3],
            &["v = 0", "w = 0"],
            &[vec!["e^(2*w)+v^2", "0", "-v"], vec!["0", "e^(2*w)", "0"], vec!["-v", "0", "1"]],
        )
        .unwrap(),
    )
}

pub fn example_32() -> (SmoothMapSpec, ContactStructure) {
    let m = ChartManifold::new(
        "M",
        &["x", "y", "z"],
        vec![Interval::new(-3.0, 3.0); 3],
        &["x - y = 0"],
        &[vec!["1", "0", "0"], vec!["0", "1", "0"], vec!["0", "0", "1"]],
    )
    .unwrap();
    let b = kenmotsu_b();
    let s = ContactStructure::new(
        "trans",
        b.clone(),
        &[vec!["0", "1", "0"], vec!["-1", "0", "0"], vec!["0", "v", "0"]],
        &["0", "0", "1"],
        &["-v", "0", "1"],
        Some(("e^(-2*w)/2", "1")),
    )
    .unwrap();
    (SmoothMapSpec::new("pi", Arc::new(m), b, &["0", "(x-y)/sqrt(2)", "0"]).unwrap(), s)
}

pub fn sphere() -> ChartManifold {
    ChartManifold::new(
        "S2",
        &["t", "p"],
        vec![Interval::new(0.05, 3.09), Interval::REAL_LINE],
        &[] as &[&str],
        &[vec!["1", "0"], vec!["0", "sin(t)^2"]],
    )
    .unwrap()
}

pub fn polar() -> ChartManifold {
    ChartManifold::new(
        "polar",
        &["r", "t"],
        vec![Interval::new(0.1, 20.0), Interval::REAL_LINE],
        &[] as &[&str],
        &[vec!["1", "0"], vec!["0", "r^2"]],
    )
    .unwrap()
}

fn lit(x: f64) -> String {
    format!("({x:e})")
}

pub fn random_orthogonal<R: Rng>(n: usize, rng: &mut R) -> DMatrix<f64> {
    let a = DMatrix::from_fn(n, n, |_, _| rng.gen_range(-1.0..1.0));
    a.qr().q()
}

/// A Riemannian map `ℝᵐ → ℝᵇ` of rank `r`: rotate the domain, keep `r`
/// coordinates, roll the first one onto a circle of radius `rho`, then
/// rotate and translate the codomain.
pub fn random_riemannian_map<R: Rng>(rng: &mut R) -> (SmoothMapSpec, usize) {
    let m = rng.gen_range(2..=4);
    let b = rng.gen_range(3..=5);
    let r = rng.gen_range(1..=m.min(b - 1));
    let coords_m: Vec<String> = (0..m).map(|i| format!("x{i}")).collect();
    let coords_b: Vec<String> = (0..b).map(|i| format!("y{i}")).collect();
    let cm: Vec<&str> = coords_m.iter().map(|s| s.as_str()).collect();
    let cb: Vec<&str> = coords_b.iter().map(|s| s.as_str()).collect();
    let dom = Arc::new(ChartManifold::euclidean("Rm", &cm).with_bounds(vec![Interval::new(-1.0, 1.0); m]).unwrap());
    let cod = Arc::new(ChartManifold::euclidean("Rb", &cb));
    let q = random_orthogonal(m, rng);
    let rot = random_orthogonal(b, rng);
    let rho = rng.gen_range(0.5..3.0);
    let y: Vec<String> = (0..r)
        .map(|i| {
            let terms: Vec<String> = (0..m).map(|j| format!("{}*{}", lit(q[(i, j)]), coords_m[j])).collect();
            format!("({})", terms.join(" + "))
        })
        .collect();
    let mut flat: Vec<String> = Vec::with_capacity(b);
    flat.push(format!("{}*cos({}/{})", lit(rho), y[0], lit(rho)));
    flat.push(format!("{}*sin({}/{})", lit(rho), y[0], lit(rho)));
    flat.extend(y[1..].iter().cloned());
    while flat.len() < b {
        flat.push("0".into());
    }
    let components: Vec<String> = (0..b)
        .map(|i| {
            let c = rng.gen_range(-1.0..1.0);
            let terms: Vec<String> = (0..b).map(|j| format!("{}*{}", lit(rot[(i, j)]), flat[j])).collect();
            format!("{} + {}", lit(c), terms.join(" + "))
        })
        .collect();
    (SmoothMapSpec::new("rand", dom, cod, &components).unwrap(), r)
}

/// Levi-Civita symbols from central differences of the metric.
pub fn fd_christoffel(m: &ChartManifold, p: &[f64], h: f64) -> Vec<f64> {
    let n = m.dim();
    let g = m.metric_at(p).unwrap();
    let gi = g.clone().try_inverse().unwrap();
    let dg: Vec<DMatrix<f64>> = (0..n)
        .map(|l| {
            let mut a = p.to_vec();
            let mut b = p.to_vec();
            a[l] += h;
            b[l] -= h;
            (m.metric_at(&a).unwrap() - m.metric_at(&b).unwrap()) / (2.0 * h)
        })
        .collect();
    let mut out = vec![0.0; n * n * n];
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                let mut s = 0.0;
                for l in 0..n {
                    s += 0.5 * gi[(k, l)] * (dg[i][(l, j)] + dg[j][(l, i)] - dg[l][(i, j)]);
                }
                out[(k * n + i) * n + j] = s;
            }
        }
    }
    out
}

pub const VARS: [&str; 3] = ["x", "y", "z"];

/// A random well-defined expression in `x, y, z` of the given depth.
pub fn random_expr<R: Rng>(rng: &mut R, depth: u32) -> String {
    if depth == 0 || rng.gen_bool(0.2) {
        return if rng.gen_bool(0.7) {
            VARS[rng.gen_range(0..3)].to_string()
        } else {
            format!("{:.3}", rng.gen_range(0.1..2.0))
        };
    }
    let a = random_expr(rng, depth - 1);
    match rng.gen_range(0..11) {
        0 => format!("({a} + {})", random_expr(rng, depth - 1)),
        1 => format!("({a} - {})", random_expr(rng, depth - 1)),
        2 | 3 => format!("({a} * {})", random_expr(rng, depth - 1)),
        4 => format!("({a} / (2 + {}^2))", random_expr(rng, depth - 1)),
        5 => format!("sin({a})"),
        6 => format!("cos({a})"),
        7 => format!("exp(sin({a}))"),
        8 => format!("log(1 + {a}^2)"),
        9 => format!("sqrt(1 + {a}^2)"),
        _ => format!("({a})^{}", rng.gen_range(2..4)),
    }
}
