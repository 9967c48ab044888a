use std::f64::consts::PI;

use coherent_loops::asymptotics::{allowed_window, wigner_d_asym_ly};
use coherent_loops::coherent::{coherent_inner, coherent_state, CoherentSpec};
use coherent_loops::hopf::{find_intersections, holonomy, HopfPoint, Loop};
use coherent_loops::special::{index_to_weight, HalfInt};
use coherent_loops::su2::{
    act, evaluate_section, rep_inner, wigner_d_exact, wigner_d_matrix, RepLevel, RepVector, Su2Element,
};
use num_complex::Complex64;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn su2() -> impl Strategy<Value = Su2Element> {
    any::<u64>().prop_map(|s| Su2Element::random(&mut ChaCha8Rng::seed_from_u64(s)))
}

fn point() -> impl Strategy<Value = HopfPoint> {
    any::<u64>().prop_map(|s| HopfPoint::random(&mut ChaCha8Rng::seed_from_u64(s)))
}

fn vector(k: u32) -> impl Strategy<Value = RepVector> {
    any::<u64>().prop_map(move |s| RepVector::random(RepLevel::new(k), &mut ChaCha8Rng::seed_from_u64(s)).normalized())
}

fn dist(a: [f64; 3], b: [f64; 3]) -> f64 {
    (0..3).map(|i| (a[i] - b[i]).powi(2)).sum::<f64>().sqrt()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn action_preserves_inner_products(k in 1u32..40, g in su2(), seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let level = RepLevel::new(k);
        let (v, w) = (RepVector::random(level, &mut rng), RepVector::random(level, &mut rng));
        let before = rep_inner(&v, &w).unwrap();
        let after = rep_inner(&act(&g, &v).unwrap(), &act(&g, &w).unwrap()).unwrap();
        prop_assert!((before - after).norm() < 1e-10 * (1.0 + before.norm()));
    }

    #[test]
    fn action_is_a_homomorphism(g in su2(), h in su2(), v in (1u32..40).prop_flat_map(vector)) {
        let lhs = act(&(g * h), &v).unwrap();
        let rhs = act(&g, &act(&h, &v).unwrap()).unwrap();
        prop_assert!(lhs.distance(&rhs) < 1e-10);
    }

    #[test]
    fn projection_is_equivariant(g in su2(), p in point()) {
        let lhs = g.apply(p).project_xyz();
        let rhs = g.rotate(p.project_xyz());
        prop_assert!(dist(lhs, rhs) < 1e-12);
    }

    #[test]
    fn sections_evaluate_equivariantly(k in 1u32..40, g in su2(), p in point(), seed in any::<u64>()) {
        let v = RepVector::random(RepLevel::new(k), &mut ChaCha8Rng::seed_from_u64(seed)).normalized();
        let lhs = evaluate_section(&act(&g, &v).unwrap(), g.apply(p)).unwrap();
        let rhs = evaluate_section(&v, p).unwrap();
        prop_assert!((lhs - rhs).norm() < 1e-10 * ((k + 1) as f64).sqrt());
    }

    #[test]
    fn coherent_inner_matches_kernel(k in 1u32..60, p in point(), q in point()) {
        let level = RepLevel::new(k);
        let (a, b) = (coherent_state(&CoherentSpec { level, base: p }), coherent_state(&CoherentSpec { level, base: q }));
        let kernel = coherent_inner(level, &p, &q).unwrap();
        prop_assert!((rep_inner(&a, &b).unwrap() - kernel).norm() < 1e-10 * (k + 1) as f64);
    }

    #[test]
    fn coherent_state_is_phase_covariant(k in 1u32..30, p in point(), phase in -PI..PI) {
        let level = RepLevel::new(k);
        let shifted = p.phase_shift(Complex64::from_polar(1.0, phase));
        let a = coherent_state(&CoherentSpec { level, base: shifted });
        let b = coherent_state(&CoherentSpec { level, base: p }).scale(Complex64::from_polar(1.0, -(k as f64) * phase));
        prop_assert!(a.distance(&b) < 1e-10 * (k + 1) as f64);
    }

    #[test]
    fn wigner_columns_are_orthonormal(k in 0u32..30, beta in 0.0..PI) {
        let m = wigner_d_matrix(RepLevel::new(k), beta).unwrap();
        let n = m.len();
        for i in 0..n {
            for j in 0..n {
                let s: f64 = (0..n).map(|l| m[l][i] * m[l][j]).sum();
                let want = if i == j { 1.0 } else { 0.0 };
                prop_assert!((s - want).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn wigner_flip_symmetry(k in 1u32..40, a1 in 0usize..41, a2 in 0usize..41, beta in 0.0..PI) {
        let level = RepLevel::new(k);
        let (m1, m2) = (index_to_weight(k, a1 % (k as usize + 1)), index_to_weight(k, a2 % (k as usize + 1)));
        let sign = if ((m2.twice() - m1.twice()) / 2).rem_euclid(2) == 0 { 1.0 } else { -1.0 };
        let d = wigner_d_exact(level, m2, m1, beta).unwrap();
        let f = wigner_d_exact(level, -m2, -m1, beta).unwrap();
        prop_assert!((f - sign * d).abs() < 1e-10);
    }

    #[test]
    fn rotation_does_not_change_holonomy(theta in 0.05..PI - 0.05, g in su2()) {
        let c = Loop::circle(theta).unwrap();
        prop_assert!((holonomy(&c) - holonomy(&c.rotated(&g))).norm() < 1e-12);
    }

    #[test]
    fn intersections_lie_on_both_loops(t1 in 0.2..2.9f64, t2 in 0.2..2.9f64, beta in 0.0..PI) {
        let g = Loop::circle(t1).unwrap();
        let s = Loop::circle(t2).unwrap().rotated(&Su2Element::uy(beta));
        if let Ok(xs) = find_intersections(&g, &s) {
            prop_assert!(xs.len() % 2 == 0);
            for x in &xs {
                prop_assert!(dist(g.xyz(x.s), x.point.xyz()) < 1e-10);
                prop_assert!(dist(s.xyz(x.t), x.point.xyz()) < 1e-10);
            }
            let total: i32 = xs.iter().map(|x| x.orientation as i32).sum();
            prop_assert_eq!(total, 0);
        }
    }

    #[test]
    fn asymptotic_value_is_flip_symmetric(k in 8u32..60, a1 in 1usize..60, a2 in 1usize..60, frac in 0.1..0.9f64) {
        let level = RepLevel::new(k);
        let (m1, m2) = (index_to_weight(k, 1 + a1 % (k as usize - 1)), index_to_weight(k, 1 + a2 % (k as usize - 1)));
        if let Some((lo, hi)) = allowed_window(level, m1, m2).unwrap() {
            let beta = lo + frac * (hi - lo);
            let sign = if ((m2.twice() - m1.twice()) / 2).rem_euclid(2) == 0 { 1.0 } else { -1.0 };
            let a = wigner_d_asym_ly(level, m1, m2, beta).unwrap();
            let b = wigner_d_asym_ly(level, -m1, -m2, beta).unwrap();
            if let (Some(x), Some(y)) = (a.value, b.value) {
                prop_assert!((y - sign * x).abs() < 1e-10 * a.amplitude.unwrap().max(1.0));
            }
        }
    }

    #[test]
    fn half_integers_round_trip(twice in -1000i64..1000) {
        let h = HalfInt::from_twice(twice);
        prop_assert_eq!(h.twice(), twice);
        prop_assert!((h.value() - twice as f64 / 2.0).abs() == 0.0);
        prop_assert_eq!((-h).twice(), -twice);
    }
}
