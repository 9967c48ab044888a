//! A seeded, self-contained run of the library's invariants, producing a
//! machine-readable report.

use std::f64::consts::PI;
use std::time::Instant;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::asymptotics::{allowed_window, wigner_d_asym_ly};
use crate::coherent::{
    coherent_inner, coherent_state, constant_height_state, loop_pair_inner_by_double_quadrature, loop_state_quadrature,
    CoherentSpec,
};
use crate::error::Result;
use crate::hopf::{
    constant_height_loop, find_intersections, find_lifted_intersections, holonomy, lune_area, standard_lift, HopfPoint,
    LiftedLoop, Loop,
};
use crate::quadrature::gauss_legendre;
use crate::special::{index_to_weight, HalfInt};
use crate::stationary::{
    find_stationary_points, phase_hessian_fd, quadrature_oracle, FnIntegrand, LoopPairIntegrand, TorusIntegrand,
};
use crate::su2::{
    act, evaluate_section, jz_apply, rep_inner, rep_matrix, wigner_d_exact, wigner_d_matrix, RepLevel, RepVector,
    Su2Element,
};

const TWO_PI: f64 = 2.0 * PI;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerifyConfig {
    pub seed: u64,
    pub trials: usize,
    /// Multiplies every tolerance.
    pub tol_scale: f64,
    /// Replace circle lifts by their sign-flipped variants.
    pub flip_lift_sign: bool,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig { seed: 20240611, trials: 20, tol_scale: 1.0, flip_lift_sign: false }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct InvariantOutcome {
    pub name: String,
    pub passed: bool,
    pub defect: f64,
    pub tolerance: f64,
    pub runtime_ms: f64,
    pub error: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub config: VerifyConfig,
    pub passed: bool,
    pub outcomes: Vec<InvariantOutcome>,
}

struct Ctx {
    rng: ChaCha8Rng,
    cfg: VerifyConfig,
}

impl Ctx {
    fn level(&mut self, max: u32) -> RepLevel {
        RepLevel::new(self.rng.gen_range(1..=max))
    }

    fn lift(&self, l: &Loop) -> LiftedLoop {
        let s = standard_lift(l);
        if self.cfg.flip_lift_sign {
            s.circle_with_flipped_sign().unwrap_or(s)
        } else {
            s
        }
    }

    fn unit(&mut self, level: RepLevel) -> RepVector {
        RepVector::random(level, &mut self.rng).normalized()
    }
}

type Check = fn(&mut Ctx) -> Result<f64>;

fn eval_scale(level: RepLevel) -> f64 {
    ((level.k() + 1) as f64 / TWO_PI).sqrt()
}

fn act_unitarity(c: &mut Ctx) -> Result<f64> {
    let mut d: f64 = 0.0;
    for _ in 0..c.cfg.trials {
        let level = c.level(60);
        let g = Su2Element::random(&mut c.rng);
        let (v, w) = (c.unit(level), c.unit(level));
        let lhs = rep_inner(&act(&g, &v)?, &act(&g, &w)?)?;
        d = d.max((lhs - rep_inner(&v, &w)?).norm());
    }
    Ok(d)
}

fn act_homomorphism(c: &mut Ctx) -> Result<f64> {
    let mut d: f64 = 0.0;
    for _ in 0..c.cfg.trials {
        let level = c.level(60);
        let (g, h) = (Su2Element::random(&mut c.rng), Su2Element::random(&mut c.rng));
        let v = c.unit(level);
        d = d.max(act(&(g * h), &v)?.distance(&act(&g, &act(&h, &v)?)?));
    }
    Ok(d)
}

fn wigner_unitarity(c: &mut Ctx) -> Result<f64> {
    let mut d: f64 = 0.0;
    for _ in 0..c.cfg.trials.min(10) {
        let level = c.level(60);
        let m = wigner_d_matrix(level, c.rng.gen_range(0.0..TWO_PI))?;
        for col in 0..level.dim() {
            let s: f64 = m.iter().map(|row| row[col] * row[col]).sum();
            d = d.max((s - 1.0).abs());
        }
    }
    Ok(d)
}

fn wigner_composition(c: &mut Ctx) -> Result<f64> {
    let mut d: f64 = 0.0;
    for _ in 0..c.cfg.trials.min(10) {
        let level = c.level(40);
        let (b1, b2) = (c.rng.gen_range(0.0..PI), c.rng.gen_range(0.0..PI));
        let (m1, m2, m12) =
            (wigner_d_matrix(level, b1)?, wigner_d_matrix(level, b2)?, wigner_d_matrix(level, b1 + b2)?);
        let n = level.dim();
        for i in 0..n {
            for j in 0..n {
                let p: f64 = (0..n).map(|l| m1[i][l] * m2[l][j]).sum();
                d = d.max((p - m12[i][j]).abs());
            }
        }
    }
    Ok(d)
}

fn jz_generator(c: &mut Ctx) -> Result<f64> {
    let mut d: f64 = 0.0;
    let h = 1e-5;
    for _ in 0..c.cfg.trials {
        let level = c.level(30);
        let v = c.unit(level);
        let diff = &act(&Su2Element::uz(h), &v)? - &act(&Su2Element::uz(-h), &v)?;
        let fd = diff.scale(Complex64::new(1.0 / (2.0 * h), 0.0));
        d = d.max(fd.distance(&jz_apply(&v).scale(Complex64::i())));
    }
    Ok(d)
}

fn evaluation_equivariance(c: &mut Ctx) -> Result<f64> {
    let mut d: f64 = 0.0;
    for _ in 0..c.cfg.trials {
        let level = c.level(60);
        let g = Su2Element::random(&mut c.rng);
        let v = c.unit(level);
        let p = HopfPoint::random(&mut c.rng);
        let lhs = evaluate_section(&act(&g, &v)?, g.apply(p))?;
        d = d.max((lhs - evaluate_section(&v, p)?).norm() / eval_scale(level));
    }
    Ok(d)
}

fn reproducing(c: &mut Ctx) -> Result<f64> {
    let mut d: f64 = 0.0;
    for _ in 0..c.cfg.trials {
        let level = c.level(60);
        let (p, q) = (HopfPoint::random(&mut c.rng), HopfPoint::random(&mut c.rng));
        let (psi_p, psi_q) =
            (coherent_state(&CoherentSpec { level, base: p }), coherent_state(&CoherentSpec { level, base: q }));
        let closed = coherent_inner(level, &p, &q)?;
        d = d.max((rep_inner(&psi_p, &psi_q)? - closed).norm() / eval_scale(level).powi(2));
        d = d.max((evaluate_section(&psi_q, p)? - closed).norm() / eval_scale(level).powi(2));
    }
    Ok(d)
}

fn basepoint_norm(c: &mut Ctx) -> Result<f64> {
    let mut d: f64 = 0.0;
    for _ in 0..c.cfg.trials {
        let level = c.level(60);
        let p = HopfPoint::random(&mut c.rng);
        let psi = coherent_state(&CoherentSpec { level, base: p });
        let want = eval_scale(level).powi(2);
        d = d.max((psi.norm().powi(2) - want).abs() / want);
        d = d.max((evaluate_section(&psi, p)? - want).norm() / want);
    }
    Ok(d)
}

fn peakedness(c: &mut Ctx) -> Result<f64> {
    let mut d: f64 = 0.0;
    for _ in 0..c.cfg.trials {
        let level = c.level(60);
        let s = c.unit(level);
        let p = HopfPoint::random(&mut c.rng);
        let psi = coherent_state(&CoherentSpec { level, base: p }).normalized();
        let bound = evaluate_section(&psi, p)?.norm();
        d = d.max(evaluate_section(&s, p)?.norm() - bound);
    }
    Ok(d.max(0.0))
}

fn group_equivariance(c: &mut Ctx) -> Result<f64> {
    let mut d: f64 = 0.0;
    for _ in 0..c.cfg.trials {
        let level = c.level(60);
        let g = Su2Element::random(&mut c.rng);
        let p = HopfPoint::random(&mut c.rng);
        let lhs = act(&g, &coherent_state(&CoherentSpec { level, base: p }))?;
        let rhs = coherent_state(&CoherentSpec { level, base: g.apply(p) });
        d = d.max(lhs.distance(&rhs) / eval_scale(level));
    }
    Ok(d)
}

fn eigenstate(c: &mut Ctx) -> Result<f64> {
    let mut d: f64 = 0.0;
    for _ in 0..c.cfg.trials {
        let level = c.level(60);
        let a = c.rng.gen_range(0..=level.k() as usize);
        let m = index_to_weight(level.k(), a);
        let phi = c.rng.gen_range(-PI..PI);
        let v = constant_height_state(level, m)?;
        let lhs = act(&Su2Element::uz(phi), &v)?;
        let rhs = v.scale(Complex64::from_polar(1.0, m.value() * phi));
        d = d.max(lhs.distance(&rhs) / v.norm());
    }
    Ok(d)
}

fn closed_form_vs_quadrature(c: &mut Ctx) -> Result<f64> {
    let mut d: f64 = 0.0;
    for _ in 0..c.cfg.trials.min(10) {
        let level = RepLevel::new(c.rng.gen_range(2..=50));
        let a = c.rng.gen_range(1..level.k() as usize);
        let m = index_to_weight(level.k(), a);
        let lifted = c.lift(&constant_height_loop(level.k(), m)?);
        let q = loop_state_quadrature(level, &lifted)?;
        let exact = constant_height_state(level, m)?;
        d = d.max(q.state.distance(&exact) / exact.norm());
    }
    Ok(d)
}

fn loop_rotated_quadrature(c: &mut Ctx) -> Result<f64> {
    let mut d: f64 = 0.0;
    for _ in 0..c.cfg.trials.min(5) {
        let level = RepLevel::new(c.rng.gen_range(2..=40));
        let a = c.rng.gen_range(1..level.k() as usize);
        let g = Su2Element::uy(c.rng.gen_range(0.0..PI));
        let base = constant_height_loop(level.k(), index_to_weight(level.k(), a))?;
        let q = loop_state_quadrature(level, &c.lift(&base.rotated(&g)))?;
        let r = act(&g, &loop_state_quadrature(level, &c.lift(&base))?.state)?;
        d = d.max(q.state.distance(&r) / r.norm());
    }
    Ok(d)
}

fn exchange_of_integrals(c: &mut Ctx) -> Result<f64> {
    let mut d: f64 = 0.0;
    for _ in 0..c.cfg.trials.min(4) {
        let k = c.rng.gen_range(2..=20u32);
        let level = RepLevel::new(k);
        let pick = |c: &mut Ctx| index_to_weight(k, c.rng.gen_range(1..k as usize));
        let (mg, ms) = (pick(c), pick(c));
        let r = Su2Element::random(&mut c.rng);
        let g = c.lift(&constant_height_loop(k, mg)?);
        let s = c.lift(&constant_height_loop(k, ms)?.rotated(&r));
        let lhs = rep_inner(&loop_state_quadrature(level, &g)?.state, &loop_state_quadrature(level, &s)?.state)?;
        let rhs = loop_pair_inner_by_double_quadrature(level, &g, &s, 4 * k as usize + 8);
        d = d.max((lhs - rhs).norm() / (1.0 + lhs.norm()));
    }
    Ok(d)
}

fn horizontality(c: &mut Ctx) -> Result<f64> {
    let mut d: f64 = 0.0;
    let h = 1e-4;
    for _ in 0..c.cfg.trials {
        let theta = c.rng.gen_range(0.1..PI - 0.1);
        let r = Su2Element::random(&mut c.rng);
        let l = c.lift(&Loop::circle(theta)?.rotated(&r));
        let u = c.rng.gen_range(0.0..TWO_PI);
        let q = l.lift(u);
        let (a, b) = (l.lift(u - h).as_array(), l.lift(u + h).as_array());
        let dq = HopfPoint::new_unchecked((b[0] - a[0]) / (2.0 * h), (b[1] - a[1]) / (2.0 * h));
        d = d.max(q.inner(&dq).norm());
    }
    Ok(d)
}

fn uz_transport(c: &mut Ctx) -> Result<f64> {
    let mut d: f64 = 0.0;
    for _ in 0..c.cfg.trials {
        let k = c.rng.gen_range(1..=60u32);
        let m = index_to_weight(k, c.rng.gen_range(0..=k as usize));
        let l = c.lift(&constant_height_loop(k, m)?);
        let z = 2.0 * m.value() / k as f64;
        let (phi, dphi) = (c.rng.gen_range(0.0..TWO_PI), c.rng.gen_range(-PI..PI));
        let lhs = Su2Element::uz(dphi).apply(l.lift(phi));
        let rhs = l.lift(phi + dphi).phase_shift(Complex64::from_polar(1.0, -z * dphi / 2.0));
        d = d.max(lhs.max_abs_diff(&rhs));
    }
    Ok(d)
}

/// Area of `{theta < theta(phi)}` for a star loop, by 2-D Gauss-Legendre in
/// `theta` and the trapezoid rule in `phi`.
pub fn star_cap_area(theta0: f64, terms: &[(u32, f64, f64)]) -> f64 {
    let (x, w) = gauss_legendre(24);
    let n = 512;
    (0..n)
        .map(|i| {
            let phi = TWO_PI * i as f64 / n as f64;
            let top = theta0 + terms.iter().map(|&(m, a, c)| a * (m as f64 * phi + c).cos()).sum::<f64>();
            let half = top / 2.0;
            x.iter().zip(&w).map(|(xi, wi)| wi * (half * (xi + 1.0)).sin()).sum::<f64>() * half
        })
        .sum::<f64>()
        * TWO_PI
        / n as f64
}

fn holonomy_area(c: &mut Ctx) -> Result<f64> {
    let mut d: f64 = 0.0;
    for _ in 0..c.cfg.trials.min(10) {
        let theta0 = c.rng.gen_range(0.6..2.5);
        let terms = [(c.rng.gen_range(1..5), c.rng.gen_range(0.0..0.25), c.rng.gen_range(0.0..TWO_PI))];
        let l = Loop::star(theta0, &terms)?.rotated(&Su2Element::random(&mut c.rng));
        let a = star_cap_area(theta0, &terms);
        d = d.max((holonomy(&l) - Complex64::from_polar(1.0, -a / 2.0)).norm());
        let th = c.rng.gen_range(0.05..PI - 0.05);
        let circle = Loop::circle(th)?.rotated(&Su2Element::random(&mut c.rng));
        let hol = c.lift(&circle).holonomy();
        d = d.max((hol - Complex64::from_polar(1.0, -PI * (1.0 - th.cos()))).norm());
    }
    Ok(d)
}

fn intersection_symmetry(c: &mut Ctx) -> Result<f64> {
    let mut d: f64 = 0.0;
    for _ in 0..c.cfg.trials.min(10) {
        let (g, s) = random_meeting_pair(c)?;
        let (gl, sl) = (c.lift(&g), c.lift(&s));
        let a = find_lifted_intersections(&gl, &sl)?;
        let b = find_lifted_intersections(&sl, &gl)?;
        for x in &a {
            let y = b
                .iter()
                .min_by(|p, q| (p.t - x.s).abs().total_cmp(&(q.t - x.s).abs()))
                .expect("intersections come in matching sets");
            let dw = (x.relative_phase.unwrap_or_default() - y.relative_phase.unwrap_or_default().conj()).norm();
            let dor = if x.orientation == -y.orientation { 0.0 } else { 1.0 };
            d = d.max((x.angle - y.angle).abs()).max(dw).max(dor);
        }
    }
    Ok(d)
}

fn random_meeting_pair(c: &mut Ctx) -> Result<(Loop, Loop)> {
    loop {
        let (t1, t2): (f64, f64) = (c.rng.gen_range(0.3..2.8), c.rng.gen_range(0.3..2.8));
        let lo = (t1 - t2).abs();
        let hi = (t1 + t2).min(TWO_PI - t1 - t2);
        if hi - lo > 0.3 {
            let beta = c.rng.gen_range(lo + 0.1..hi - 0.1);
            return Ok((Loop::circle(t1)?, Loop::circle(t2)?.rotated(&Su2Element::uy(beta))));
        }
    }
}

fn rotation_equivariance(c: &mut Ctx) -> Result<f64> {
    let mut d: f64 = 0.0;
    for _ in 0..c.cfg.trials.min(10) {
        let (g, s) = random_meeting_pair(c)?;
        let r = Su2Element::random(&mut c.rng);
        let a = find_intersections(&g, &s)?;
        let b = find_intersections(&g.rotated(&r), &s.rotated(&r))?;
        if a.len() != b.len() {
            return Ok(f64::INFINITY);
        }
        for x in &a {
            let p = r.rotate(x.point.xyz());
            let y =
                b.iter().min_by(|u, v| dist(u.point.xyz(), p).total_cmp(&dist(v.point.xyz(), p))).expect("nonempty");
            let dor = if x.orientation == y.orientation { 0.0 } else { 1.0 };
            d = d.max(dist(y.point.xyz(), p)).max((x.angle - y.angle).abs()).max(dor);
        }
    }
    Ok(d)
}

fn dist(a: [f64; 3], b: [f64; 3]) -> f64 {
    ((a[0] - b[0]).powi(2) + (a[1] - b[1]).powi(2) + (a[2] - b[2]).powi(2)).sqrt()
}

fn equator_lune(c: &mut Ctx) -> Result<f64> {
    let mut d: f64 = 0.0;
    for _ in 0..c.cfg.trials.min(10) {
        let beta = c.rng.gen_range(0.05..PI - 0.05);
        let g = Loop::circle(PI / 2.0)?;
        let s = g.rotated(&Su2Element::uy(beta));
        let xs = find_intersections(&g, &s)?;
        d = d.max((lune_area(&g, &s, &xs)? - 2.0 * beta).abs());
    }
    Ok(d)
}

fn warmup_hessian(c: &mut Ctx) -> Result<f64> {
    let beta = 1.0;
    let eq = Loop::circle(PI / 2.0)?;
    let f = LoopPairIntegrand { gamma: c.lift(&eq), sigma: c.lift(&eq.rotated(&Su2Element::uy(beta))), k: 10 };
    let h = phase_hessian_fd(&f, PI / 2.0, PI / 2.0);
    let i4 = Complex64::new(0.0, 0.25);
    let e = Complex64::from_polar(1.0, -beta);
    let expect = [[i4, -i4 * e], [-i4 * e, i4]];
    let mut d: f64 = 0.0;
    for a in 0..2 {
        for b in 0..2 {
            d = d.max((h[a][b] - expect[a][b]).norm());
        }
    }
    Ok(d)
}

fn conjugation_symmetry(c: &mut Ctx) -> Result<f64> {
    let beta = c.rng.gen_range(0.5..2.5);
    let k = 20;
    let eq = Loop::circle(PI / 2.0)?;
    let f = LoopPairIntegrand { gamma: c.lift(&eq), sigma: c.lift(&eq.rotated(&Su2Element::uy(beta))), k };
    let conj = FnIntegrand {
        periods: f.periods(),
        origin: (0.0, 0.0),
        base: |s: f64, t: f64| f.base(s, t).conj(),
        amplitude: |s: f64, t: f64| f.amplitude(s, t).conj(),
    };
    let a = quadrature_oracle(&f, k, 64, 1 << 12)?;
    let b = quadrature_oracle(&conj, k, 64, 1 << 12)?;
    let pa = crate::stationary::csp_leading_term(k, &find_stationary_points(&f, 64)?);
    let pb = crate::stationary::csp_leading_term(k, &find_stationary_points(&conj, 64)?);
    Ok(((a.value - b.value.conj()).norm() / a.l1).max((pa - pb.conj()).norm() / pa.norm().max(1e-300)))
}

fn random_allowed(c: &mut Ctx) -> Result<(RepLevel, HalfInt, HalfInt, f64)> {
    loop {
        let level = RepLevel::new(c.rng.gen_range(4..=80));
        let k = level.k() as usize;
        let (a1, a2) = (c.rng.gen_range(1..k), c.rng.gen_range(1..k));
        let (m1, m2) = (index_to_weight(level.k(), a1), index_to_weight(level.k(), a2));
        if let Some((lo, hi)) = allowed_window(level, m1, m2)? {
            if hi - lo > 0.05 {
                let w = hi - lo;
                return Ok((level, m1, m2, c.rng.gen_range(lo + 0.05 * w..hi - 0.05 * w)));
            }
        }
    }
}

fn route_agreement(c: &mut Ctx) -> Result<f64> {
    let mut d: f64 = 0.0;
    for _ in 0..c.cfg.trials {
        let (level, m1, m2, beta) = random_allowed(c)?;
        let r = wigner_d_asym_ly(level, m1, m2, beta)?;
        let (v, rv, amp) = (r.value.unwrap_or(0.0), r.route_value.unwrap_or(0.0), r.amplitude.unwrap_or(1.0));
        d = d.max((v - rv).abs() / amp.max(1.0));
    }
    Ok(d)
}

fn phase_convention(c: &mut Ctx) -> Result<f64> {
    let mut d: f64 = 0.0;
    for _ in 0..c.cfg.trials.min(10) {
        let (level, m1, m2, beta) = random_allowed(c)?;
        d = d.max(wigner_d_asym_ly(level, m1, m2, beta)?.phase_defect.unwrap_or(f64::INFINITY));
    }
    Ok(d)
}

fn flip_symmetry(c: &mut Ctx) -> Result<f64> {
    let mut d: f64 = 0.0;
    for _ in 0..c.cfg.trials.min(10) {
        let (level, m1, m2, beta) = random_allowed(c)?;
        let sign = if (m2.twice() - m1.twice()) / 2 % 2 == 0 { 1.0 } else { -1.0 };
        let e = wigner_d_exact(level, m2, m1, beta)?;
        let ef = wigner_d_exact(level, -m2, -m1, beta)?;
        let a = wigner_d_asym_ly(level, m1, m2, beta)?.value.unwrap_or(f64::NAN);
        let af = wigner_d_asym_ly(level, -m1, -m2, beta)?.value.unwrap_or(f64::NAN);
        d = d.max((ef - sign * e).abs()).max((af - sign * a).abs());
    }
    Ok(d)
}

fn exact_d00_is_legendre(c: &mut Ctx) -> Result<f64> {
    let mut d: f64 = 0.0;
    for _ in 0..c.cfg.trials.min(10) {
        let j = c.rng.gen_range(0..=40u32);
        let beta = c.rng.gen_range(0.0..PI);
        let x = beta.cos();
        let (mut p0, mut p1) = (1.0, x);
        let p = if j == 0 {
            1.0
        } else {
            for n in 1..j {
                let nf = n as f64;
                let p2 = ((2.0 * nf + 1.0) * x * p1 - nf * p0) / (nf + 1.0);
                p0 = p1;
                p1 = p2;
            }
            p1
        };
        let z = HalfInt::from_int(0);
        d = d.max((wigner_d_exact(RepLevel::new(2 * j), z, z, beta)? - p).abs());
    }
    Ok(d)
}

fn rep_matrix_is_unitary(c: &mut Ctx) -> Result<f64> {
    let mut d: f64 = 0.0;
    for _ in 0..c.cfg.trials.min(5) {
        let level = c.level(60);
        let m = rep_matrix(&Su2Element::random(&mut c.rng), level);
        let n = level.dim();
        for i in 0..n {
            for j in 0..n {
                let s: Complex64 = (0..n).map(|l| m.get(l, i).conj() * m.get(l, j)).sum();
                d = d.max((s - if i == j { 1.0 } else { 0.0 }).norm());
            }
        }
    }
    Ok(d)
}

const SUITE: &[(&str, f64, Check)] = &[
    ("su2.act_unitarity", 1e-10, act_unitarity),
    ("su2.act_homomorphism", 1e-10, act_homomorphism),
    ("su2.rep_matrix_unitary", 1e-10, rep_matrix_is_unitary),
    ("su2.wigner_unitarity", 1e-10, wigner_unitarity),
    ("su2.wigner_composition", 1e-9, wigner_composition),
    ("su2.jz_generator", 1e-6, jz_generator),
    ("su2.evaluation_equivariance", 1e-10, evaluation_equivariance),
    ("su2.d00_legendre", 1e-10, exact_d00_is_legendre),
    ("coherent.reproducing", 1e-10, reproducing),
    ("coherent.basepoint_norm", 1e-10, basepoint_norm),
    ("coherent.peakedness", 1e-12, peakedness),
    ("coherent.group_equivariance", 1e-10, group_equivariance),
    ("coherent.eigenstate", 1e-10, eigenstate),
    ("coherent.closed_form_vs_quadrature", 1e-9, closed_form_vs_quadrature),
    ("coherent.rotated_loop_state", 1e-9, loop_rotated_quadrature),
    ("coherent.exchange_of_integrals", 1e-9, exchange_of_integrals),
    ("hopf.horizontality", 1e-7, horizontality),
    ("hopf.uz_transport", 1e-10, uz_transport),
    ("hopf.holonomy_area", 1e-8, holonomy_area),
    ("hopf.intersection_symmetry", 1e-12, intersection_symmetry),
    ("hopf.rotation_equivariance", 1e-9, rotation_equivariance),
    ("hopf.equator_lune_area", 1e-10, equator_lune),
    ("stationary.warmup_hessian", 1e-8, warmup_hessian),
    ("stationary.conjugation_symmetry", 1e-8, conjugation_symmetry),
    ("asymptotics.route_agreement", 1e-10, route_agreement),
    ("asymptotics.phase_convention", 1e-8, phase_convention),
    ("asymptotics.flip_symmetry", 1e-10, flip_symmetry),
];

/// Names of all invariants in the suite, in run order.
pub fn invariant_names() -> Vec<&'static str> {
    SUITE.iter().map(|s| s.0).collect()
}

pub fn run_suite(cfg: &VerifyConfig) -> VerifyReport {
    let mut outcomes = Vec::with_capacity(SUITE.len());
    for (i, (name, tol, check)) in SUITE.iter().enumerate() {
        let mut ctx = Ctx { rng: ChaCha8Rng::seed_from_u64(cfg.seed.wrapping_add(i as u64)), cfg: cfg.clone() };
        let tolerance = tol * cfg.tol_scale;
        let start = Instant::now();
        let res = check(&mut ctx);
        let runtime_ms = start.elapsed().as_secs_f64() * 1e3;
        let (defect, error) = match res {
            Ok(d) => (d, None),
            Err(e) => (f64::INFINITY, Some(e.to_string())),
        };
        outcomes.push(InvariantOutcome {
            name: name.to_string(),
            passed: error.is_none() && defect <= tolerance,
            defect,
            tolerance,
            runtime_ms,
            error,
        });
    }
    VerifyReport { config: cfg.clone(), passed: outcomes.iter().all(|o| o.passed), outcomes }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn star_area_of_a_circle() {
        let a = star_cap_area(1.0, &[]);
        assert!((a - TWO_PI * (1.0 - 1f64.cos())).abs() < 1e-13);
    }

    #[test]
    fn default_suite_passes() {
        let report = run_suite(&VerifyConfig { trials: 4, ..VerifyConfig::default() });
        for o in &report.outcomes {
            eprintln!("{} {:.2e} / {:.0e}", o.name, o.defect, o.tolerance);
            assert!(o.passed, "{o:?}");
        }
    }

    #[test]
    fn sign_flip_is_caught() {
        let report = run_suite(&VerifyConfig { trials: 4, flip_lift_sign: true, ..VerifyConfig::default() });
        let uz = report.outcomes.iter().find(|o| o.name == "hopf.uz_transport").unwrap();
        assert!(!uz.passed && uz.defect > 1e-3);
        assert!(!report.passed);
    }
}
