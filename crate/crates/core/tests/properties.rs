use num_complex::Complex64;
use proptest::prelude::*;

use conestrat::classicwh::{index_theorem_check, min_truncation, LaurentSymbol};
use conestrat::conemetric::{excess, hausdorff_h, polarity_isometry_check, MetricConfig};
use conestrat::curvedcones::{lorentz_as_siegel, siegel_is_extreme, siegel_membership};
use conestrat::indexcomplex::{build_cellular_complex, homology, verify_boundary_squared, ComplexOptions};
use conestrat::polycone::fixtures::random_pointed_solid;
use conestrat::polycone::{dual_face, face_lattice, Cone};
use conestrat::ratlin::qvec;
use conestrat::strata::{all_pair_geometries, stratify, verify_decomposition};

fn planar_cone() -> impl Strategy<Value = Cone> {
    prop::collection::vec((-4i64..=4, 1i64..=4), 1..4)
        .prop_map(|gens| Cone::from_generators(2, &gens.iter().map(|&(x, y)| qvec(&[x, y])).collect::<Vec<_>>()).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn complex_is_exact_in_any_cell_order(n in 2usize..=4, seed in 0u64..10_000, shuffle in any::<u64>()) {
        let s = stratify(&random_pointed_solid(n, seed)).unwrap();
        let cx = build_cellular_complex(&s, &ComplexOptions { seed: Some(shuffle) }).unwrap();
        prop_assert!(verify_boundary_squared(&cx));
        prop_assert_eq!(cx.euler_characteristic(), 0);
        let h = homology(&cx).unwrap();
        prop_assert!(h.exact);
        prop_assert!(h.betti.iter().all(|&b| b == 0));
    }

    #[test]
    fn dual_faces_have_complementary_dimension(n in 2usize..=4, seed in 0u64..10_000) {
        let cone = random_pointed_solid(n, seed);
        let lattice = face_lattice(&cone).unwrap();
        for f in &lattice.faces {
            prop_assert_eq!(f.dim + dual_face(f, &cone).unwrap().dim, n);
        }
    }

    #[test]
    fn pair_decompositions_are_exact(n in 2usize..=4, seed in 0u64..10_000) {
        let s = stratify(&random_pointed_solid(n, seed)).unwrap();
        for g in all_pair_geometries(&s).unwrap() {
            prop_assert!(verify_decomposition(&g));
        }
    }

    #[test]
    fn toeplitz_index_is_minus_winding(k in -4i64..=4, a in -0.9f64..0.9, b in -0.9f64..0.9, im in -0.1f64..0.1) {
        // 2 dominates the two other coefficients, so the winding number is k
        let side = if k >= 0 { 1 } else { -1 };
        let s = LaurentSymbol::new([(k, Complex64::new(2.0, 0.0)), (k + side, Complex64::new(a, im)), (k + 2 * side, Complex64::new(b, 0.0))]);
        let r = index_theorem_check(&s, min_truncation(&s, k)).unwrap();
        prop_assert_eq!(r.winding, k);
        prop_assert_eq!(r.index, -k);
    }

    #[test]
    fn planar_metric_axioms(a in planar_cone(), b in planar_cone()) {
        let cfg = MetricConfig::default();
        let h = hausdorff_h(&a, &b, &cfg).unwrap();
        prop_assert!((0.0..=1.0 + 1e-12).contains(&h));
        prop_assert!((h - hausdorff_h(&b, &a, &cfg).unwrap()).abs() <= 1e-12);
        prop_assert_eq!(excess(&a, &a, &cfg).unwrap(), 0.0);
        prop_assert!(polarity_isometry_check(&a, &b, &cfg).unwrap().passes);
    }

    #[test]
    fn planar_triangle_inequality(a in planar_cone(), b in planar_cone(), c in planar_cone()) {
        let cfg = MetricConfig::default();
        let h = |x: &Cone, y: &Cone| hausdorff_h(x, y, &cfg).unwrap();
        prop_assert!(h(&a, &c) <= h(&a, &b) + h(&b, &c) + cfg.tolerance);
    }

    #[test]
    fn parabolic_siegel_membership(u in -3.0f64..3.0, v in -1.0f64..5.0, t in -1.0f64..5.0) {
        // the m = 1 cone is {t ≥ 0, v ≥ 0, tv ≥ u²}
        let margin = (t * v - u * u).abs().min(t.abs()).min(v.abs());
        prop_assume!(margin > 1e-6);
        let expected = t >= 0.0 && v >= 0.0 && t * v >= u * u;
        prop_assert_eq!(siegel_membership(&[u, v, t], &lorentz_as_siegel(1).cone, 1e-12).unwrap(), expected);
    }

    #[test]
    fn parabolic_extreme_rays(u in -3.0f64..3.0, t in 0.05f64..5.0, lift in 0.1f64..2.0, lambda in 0.01f64..100.0) {
        let cone = lorentz_as_siegel(1).cone;
        let boundary = [u, u * u / t, t];
        let interior = [u, u * u / t + lift, t];
        for scale in [1.0, lambda] {
            let p = boundary.map(|x| x * scale);
            prop_assert!(siegel_is_extreme(&p, &cone, 1e-9).unwrap());
            let q = interior.map(|x| x * scale);
            prop_assert!(!siegel_is_extreme(&q, &cone, 1e-9).unwrap());
        }
    }
}
