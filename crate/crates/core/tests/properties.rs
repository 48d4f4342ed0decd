//! Randomized invariants across the toolkit.

mod common;

use std::sync::Arc;

use common::*;
use nalgebra::{DMatrix, DVector};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use tsmap_core::clairaut::{anti_invariance_check, bc_split, AntiInvariantSplit, PointFrames, ReebPosition};
use tsmap_core::contact::{estimate_type, estimate_type_with_directions, ContactStructure};
use tsmap_core::expr::parse_expr;
use tsmap_core::geometry::{
    christoffel, gram, lie_bracket, orthonormalize, principal_angles, ChartManifold, VectorFieldSpec,
};
use tsmap_core::linalg::{inner, norm};
use tsmap_core::rmap::{MapAt, SmoothMapSpec};

fn vec3() -> impl Strategy<Value = DVector<f64>> {
    prop::collection::vec(-1.0..1.0f64, 3).prop_map(DVector::from_vec)
}

fn image_point_31() -> impl Strategy<Value = Vec<f64>> {
    (0.1..3.0f64, 0.1..3.0f64, 0.1..3.0f64).prop_map(|(x, y, z)| vec![x, -y, z])
}

fn point_32() -> impl Strategy<Value = Vec<f64>> {
    (-2.0..2.0f64, -2.0..2.0f64, -2.0..2.0f64)
        .prop_filter("off the excluded locus", |(x, y, _)| (x - y).abs() > 1e-2)
        .prop_map(|(x, y, z)| vec![x, y, z])
}

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

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn printed_expressions_reparse_to_the_same_values(
        a in 0.1..3.0f64, b in -2.0..2.0f64, p in vec3()
    ) {
        let coords: Vec<String> = ["x", "y", "z"].iter().map(|s| s.to_string()).collect();
        let text = format!("{a}*sin(x*y) - exp({b}*z)/(1 + x^2) + sqrt(2 + y^2)^3 - -z");
        let e = parse_expr(&text, &coords).unwrap();
        let again = parse_expr(&e.to_string(), &coords).unwrap();
        prop_assert_eq!(&e, &again);
        prop_assert_eq!(e.eval(p.as_slice()).unwrap(), again.eval(p.as_slice()).unwrap());
    }

    #[test]
    fn orthonormalization_is_idempotent(a in vec3(), b in vec3(), c in vec3(), seed in 0u64..1000) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let q = random_orthogonal(3, &mut rng);
        let d = DMatrix::from_diagonal(&DVector::from_vec(vec![0.5, 1.0, 2.5]));
        let g = &q * d * q.transpose();
        let frame = [a, b, c];
        prop_assume!(gram(&frame, &g).determinant().abs() > 1e-3);
        let once = orthonormalize(&frame, &g).unwrap();
        prop_assert!((gram(&once, &g) - DMatrix::identity(3, 3)).amax() < 1e-12);
        let twice = orthonormalize(&once, &g).unwrap();
        for (x, y) in once.iter().zip(&twice) {
            prop_assert!((x - y).amax() < 1e-12);
        }
        let angles = principal_angles(&once[..2], &frame[..2], &g).unwrap();
        prop_assert!(angles.iter().all(|t| t.abs() < 1e-7));
    }

    #[test]
    fn christoffel_symmetry_and_bracket_antisymmetry(p in point_32()) {
        let b = kenmotsu_b();
        let gamma = christoffel(&b, &p).unwrap();
        for k in 0..3 { for i in 0..3 { for j in 0..3 {
            prop_assert_eq!(gamma.get(k, i, j), gamma.get(k, j, i));
        }}}
        let x = VectorFieldSpec::new(&b, &["v*w", "sin(u)", "1"]).unwrap();
        let y = VectorFieldSpec::new(&b, &["e^w", "u^2", "v"]).unwrap();
        let xy = lie_bracket(&b, &x, &y, &p).unwrap();
        let yx = lie_bracket(&b, &y, &x, &p).unwrap();
        prop_assert!((xy + yx).amax() < 1e-14);
    }

    #[test]
    fn map_invariants_for_example_32(p in point_32(), a in -1.0..1.0f64, c in vec3()) {
        let (map, s) = example_32();
        let at = MapAt::new(&map, &p).unwrap();
        let h = &at.frames.hker_frame;
        let g12 = DMatrix::from_fn(h.len(), h.len(), |i, j| inner(at.g2(), &at.push(&h[i]), &at.push(&h[j])));
        prop_assert!((g12 - DMatrix::identity(h.len(), h.len())).amax() < 1e-9);
        let w = DVector::from_vec(vec![a, 0.3, -0.2]);
        let sw = at.sff(&w, &c);
        let ws = at.sff(&c, &w);
        prop_assert!((sw - ws).amax() < 1e-9);
        for n in &at.frames.rperp_frame {
            let av = at.shape_operator(n).unwrap();
            prop_assert!((&av - av.transpose()).amax() < 1e-9);
        }
        let split = anti_invariance_check(&map, &s, &p, 1e-10).unwrap();
        prop_assert!(split.is_anti_invariant);
        prop_assert_eq!(split.reeb_position, ReebPosition::Horizontal);
        let xi = s.xi.eval(at.jet.image.as_slice()).unwrap();
        prop_assert!((split.xi_mu_norm - norm(at.g2(), &xi)).abs() < 1e-9);
        prop_assert!(split.gram_determinant() > 1e-10);
    }

    #[test]
    fn bc_split_is_an_orthogonal_resolution(p in image_point_31(), c in vec3()) {
        let (map, s) = example_31();
        let split = anti_invariance_check(&map, &s, &p, 1e-10).unwrap();
        let g = &split.metric;
        let vperp = split.frames.perp_part(g, &c);
        let (bv, cv) = bc_split(&split, &vperp).unwrap();
        let psi_v = &split.psi * &vperp;
        prop_assert!((&bv + &cv - &psi_v).amax() < 1e-10);
        prop_assert!(inner(g, &bv, &cv).abs() < 1e-10);
        prop_assert!((inner(g, &bv, &bv) + inner(g, &cv, &cv) - inner(g, &psi_v, &psi_v)).abs() < 1e-10);
        prop_assert!(split.frames.perp_part(g, &bv).amax() < 1e-10);
    }

    #[test]
    fn anti_invariance_does_not_depend_on_the_range_frame(p in prop::collection::vec(-1.0..1.0f64, 2), seed in 0u64..1000) {
        let (map, s) = flat_cosymplectic();
        let at = MapAt::new(&map, &p).unwrap();
        let x = at.jet.image.as_slice();
        let psi = s.psi.eval(x).unwrap();
        let xi = s.xi.eval(x).unwrap();
        let base = PointFrames { range: at.frames.range_frame.clone(), rperp: at.frames.rperp_frame.clone() };
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let q = random_orthogonal(2, &mut rng);
        let rotated_range: Vec<DVector<f64>> = (0..2)
            .map(|i| &base.range[0] * q[(0, i)] + &base.range[1] * q[(1, i)])
            .collect();
        let rotated = PointFrames { range: rotated_range, rperp: base.rperp.clone() };
        let a = AntiInvariantSplit::from_frames(at.g2(), &psi, &xi, base, 1e-10);
        let b = AntiInvariantSplit::from_frames(at.g2(), &psi, &xi, rotated, 1e-10);
        prop_assert!((a.residual - b.residual).abs() < 1e-9);
        prop_assert!(a.is_anti_invariant && b.is_anti_invariant);
        prop_assert_eq!(a.mu_frame.len(), 1);
        prop_assert!((a.xi_mu_norm - 1.0).abs() < 1e-12);
    }

    #[test]
    fn fitted_type_does_not_depend_on_the_test_directions(p in point_32(), seed in 0u64..1000) {
        let (_, s) = example_32();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let q = random_orthogonal(3, &mut rng);
        let dirs: Vec<DVector<f64>> = (0..3).map(|i| q.column(i).into_owned()).collect();
        let a = estimate_type(&s, &p).unwrap();
        let b = estimate_type_with_directions(&s, &p, &dirs).unwrap();
        prop_assert!((a.residual - b.residual).abs() < 1e-9);
        prop_assert!((a.alpha - b.alpha).abs() < 1e-9 && (a.beta - b.beta).abs() < 1e-9);
        prop_assert!((a.alpha - 0.5 * (-2.0 * p[2]).exp()).abs() < 1e-9 && (a.beta - 1.0).abs() < 1e-9);
    }
}
