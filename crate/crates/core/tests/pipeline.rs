use std::f64::consts::PI;

use coherent_loops::asymptotics::{
    bpu_inner_product_asym, loop_state_norm_asym, symmetric_cosine_checked, wigner_d_asym_ly, wigner_loops, Validity,
};
use coherent_loops::coherent::constant_height_coefficient;
use coherent_loops::hopf::{
    find_intersections, find_lifted_intersections, lune_area, parallelepiped_volume, standard_lift, Loop,
};
use coherent_loops::special::HalfInt;
use coherent_loops::stationary::{csp_leading_term, find_stationary_points, quadrature_oracle, LoopPairIntegrand};
use coherent_loops::su2::{wigner_d_exact, RepLevel, Su2Element};

fn h(n: i64) -> HalfInt {
    HalfInt::from_int(n)
}

#[test]
fn lune_area_matches_grid_integral() {
    let level = RepLevel::new(50);
    let (g, s) = wigner_loops(level, h(11), h(22), 1.2).unwrap();
    let xs = find_intersections(&g, &s).unwrap();
    let a = lune_area(&g, &s, &xs).unwrap();

    // right of the eastward loop at z = 0.88 is z < 0.88; left of sigma is its rotated cap
    let axis = Su2Element::uy(1.2).rotate([0.0, 0.0, 1.0]);
    let (nt, np) = (3000, 6000);
    let mut grid = 0.0;
    for i in 0..nt {
        let theta = PI * (i as f64 + 0.5) / nt as f64;
        let (st, ct) = theta.sin_cos();
        let mut hits = 0usize;
        for j in 0..np {
            let phi = 2.0 * PI * (j as f64 + 0.5) / np as f64;
            let x = [st * phi.cos(), st * phi.sin(), ct];
            let dot = x[0] * axis[0] + x[1] * axis[1] + x[2] * axis[2];
            hits += usize::from(ct < 0.88 && dot > 0.44);
        }
        grid += st * hits as f64;
    }
    grid *= PI / nt as f64 * 2.0 * PI / np as f64;
    assert!((a - grid).abs() < 2e-3 * a, "{a} vs {grid}");
}

#[test]
fn volume_law_of_sines() {
    let level = RepLevel::new(50);
    let r = wigner_d_asym_ly(level, h(11), h(22), 1.2).unwrap();
    let (t1, t2) = ((0.44f64).acos(), (0.88f64).acos());
    let v = t1.sin() * t2.sin() * r.nu.unwrap().sin();
    assert!((r.volume.unwrap() - v).abs() < 1e-10);
    let (g, s) = wigner_loops(level, h(11), h(22), 1.2).unwrap();
    for x in find_intersections(&g, &s).unwrap() {
        assert!((parallelepiped_volume(1.2, &x.point).abs() - v).abs() < 1e-10);
    }
}

#[test]
fn csp_matches_oracle_at_figure_configuration() {
    let level = RepLevel::new(50);
    let (g, s) = wigner_loops(level, h(22), h(11), 1.4).unwrap();
    let f = LoopPairIntegrand { gamma: standard_lift(&g), sigma: standard_lift(&s), k: 50 };
    let pts = find_stationary_points(&f, 128).unwrap();
    let csp = csp_leading_term(50, &pts);
    let oracle = quadrature_oracle(&f, 50, 128, 1 << 12).unwrap();
    assert!((csp - oracle.value).norm() < 0.15 * oracle.value.norm(), "{csp} vs {}", oracle.value);
}

#[test]
fn equator_pair_reproduces_warmup_numerator() {
    let eq = Loop::circle(PI / 2.0).unwrap();
    for beta in [0.4, 1.1, 2.5] {
        let (gl, sl) = (standard_lift(&eq), standard_lift(&eq.rotated(&Su2Element::uy(beta))));
        let xs = find_lifted_intersections(&gl, &sl).unwrap();
        for k in [10u32, 40] {
            let kf = k as f64;
            let want = 2.0 * (2.0 / beta.sin()).sqrt() * ((kf + 1.0) * beta / 2.0 - PI / 4.0).cos();
            let got = bpu_inner_product_asym(k, &xs).unwrap();
            assert!((got.re - want).abs() < 1e-10 && got.im.abs() < 1e-10, "{got} vs {want}");
            let (sym, nu) = symmetric_cosine_checked(k, 2.0 * beta, &xs).unwrap();
            assert!((nu - beta).abs() < 1e-10);
            assert!((sym - got.re).abs() < 1e-10);
        }
    }
}

#[test]
fn loop_state_norm_ratio_tends_to_one() {
    let mut last = f64::INFINITY;
    for k in [40u32, 80, 160] {
        let m = h(k as i64 / 8);
        let theta = (2.0 * m.value() / k as f64).acos();
        let c = constant_height_coefficient(RepLevel::new(k), m).unwrap();
        let d = (c * c / loop_state_norm_asym(k, theta).unwrap() - 1.0).abs();
        assert!(d < last);
        last = d;
    }
    assert!(last < 0.01);
}

#[test]
fn fixed_angle_sweep_over_m2() {
    let level = RepLevel::new(50);
    let mut allowed = 0;
    for m2 in -25..=25 {
        let exact = wigner_d_exact(level, h(m2), h(11), 1.2).unwrap();
        let r = wigner_d_asym_ly(level, h(11), h(m2), 1.2).unwrap();
        if r.validity == Validity::Allowed {
            allowed += 1;
            assert!((r.value.unwrap() - exact).abs() < 0.5 * r.amplitude.unwrap(), "m2 = {m2}");
        } else if m2.abs() < 25 {
            assert!(exact.abs() < 0.2, "m2 = {m2}: {exact}");
        }
    }
    assert!(allowed > 10);
}

#[test]
fn identity_rotation_is_forbidden_and_diagonal() {
    let level = RepLevel::new(50);
    for m2 in [-3, 11, 20] {
        let exact = wigner_d_exact(level, h(m2), h(11), 0.0).unwrap();
        assert!((exact - if m2 == 11 { 1.0 } else { 0.0 }).abs() < 1e-14);
        assert_ne!(wigner_d_asym_ly(level, h(11), h(m2), 0.0).unwrap().validity, Validity::Allowed);
    }
}

#[test]
fn saddles_do_not_move_with_k() {
    let level = RepLevel::new(50);
    let (g, s) = wigner_loops(level, h(22), h(11), 1.4).unwrap();
    let at = |k: u32| {
        let f = LoopPairIntegrand { gamma: standard_lift(&g), sigma: standard_lift(&s), k };
        find_stationary_points(&f, 128).unwrap().iter().map(|p| (p.s, p.t)).collect::<Vec<_>>()
    };
    let (a, b) = (at(50), at(100));
    assert_eq!(a.len(), b.len());
    for (x, y) in a.iter().zip(&b) {
        assert!((x.0 - y.0).abs() < 1e-3 && (x.1 - y.1).abs() < 1e-3);
    }
}
