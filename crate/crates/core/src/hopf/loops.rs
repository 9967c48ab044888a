//! Closed loops on S^2 and their horizontal lifts to S^3.
//!
//! Every loop is parameterized over `u` in `[0, 2pi)`; for constant-height
//! circles `u` is the longitude. `Loop::period` is the Fubini-Study length,
//! which is the round length divided by `sqrt(2)`.

use std::f64::consts::{PI, SQRT_2};
use std::fmt;
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::Arc;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{connection_form, cross, dot, mat_vec, norm, normalize, scale, sub, HopfPoint, SpherePoint, Vec3};
use crate::error::{Error, Result};
use crate::quadrature::{gl20_integrate, integrate_adaptive};
use crate::special::HalfInt;
use crate::su2::Su2Element;

const TWO_PI: f64 = 2.0 * PI;
const LIFT_PANELS: usize = 128;

/// Point and tangent of a loop at a parameter value.
pub type LoopFn = Arc<dyn Fn(f64) -> [Vec3; 2] + Send + Sync>;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum LoopKind {
    ConstantHeight,
    RotatedConstantHeight,
    GeneralSmooth,
}

#[derive(Clone)]
enum Shape {
    Circle { theta: f64 },
    Smooth { f: LoopFn, id: u64 },
}

/// Identity of a loop for caching purposes.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LoopKey(Vec<u64>);

/// A closed loop on S^2: a base curve moved by a fixed rotation.
#[derive(Clone)]
pub struct Loop {
    shape: Shape,
    frame: Su2Element,
    rot: [[f64; 3]; 3],
    kind: LoopKind,
    period: f64,
}

impl fmt::Debug for Loop {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut d = f.debug_struct("Loop");
        d.field("kind", &self.kind).field("period", &self.period);
        if let Shape::Circle { theta } = self.shape {
            d.field("theta", &theta);
        }
        d.finish()
    }
}

static NEXT_ID: AtomicU64 = AtomicU64::new(1);

impl Loop {
    /// The circle of colatitude `theta`, traversed with increasing longitude.
    pub fn circle(theta: f64) -> Result<Loop> {
        if !(0.0..=PI).contains(&theta) {
            return Err(Error::Domain(format!("colatitude {theta} outside [0, pi]")));
        }
        let frame = Su2Element::identity();
        Ok(Loop {
            shape: Shape::Circle { theta },
            rot: frame.rotation_matrix(),
            frame,
            kind: LoopKind::ConstantHeight,
            period: TWO_PI * theta.sin().max(0.0) / SQRT_2,
        })
    }

    /// A general closed loop from a map returning `(point, tangent)` on
    /// `[0, 2pi]`. Points are renormalized onto the sphere.
    pub fn smooth(f: LoopFn) -> Result<Loop> {
        let [p0, _] = f(0.0);
        let [p1, _] = f(TWO_PI);
        if norm(sub(p0, p1)) > 1e-10 {
            return Err(Error::Domain("loop is not closed".into()));
        }
        if (norm(p0) - 1.0).abs() > 1e-10 {
            return Err(Error::Domain("loop does not lie on the unit sphere".into()));
        }
        let g = f.clone();
        let period = integrate_adaptive(&|u| norm(g(u)[1]) / SQRT_2, 0.0, TWO_PI, 1e-13);
        if period < 1e-14 {
            return Err(Error::DegenerateLoop);
        }
        let frame = Su2Element::identity();
        Ok(Loop {
            shape: Shape::Smooth { f, id: NEXT_ID.fetch_add(1, Ordering::Relaxed) },
            rot: frame.rotation_matrix(),
            frame,
            kind: LoopKind::GeneralSmooth,
            period,
        })
    }

    /// A star-shaped loop around the north pole with colatitude
    /// `theta0 + sum a cos(n u + c)` at longitude `u`.
    pub fn star(theta0: f64, terms: &[(u32, f64, f64)]) -> Result<Loop> {
        let terms: Vec<(f64, f64, f64)> = terms.iter().map(|&(n, a, c)| (n as f64, a, c)).collect();
        let bound: f64 = terms.iter().map(|t| t.1.abs()).sum();
        if theta0 - bound <= 0.0 || theta0 + bound >= PI {
            return Err(Error::Domain("star loop leaves the open colatitude range".into()));
        }
        Loop::smooth(Arc::new(move |u: f64| {
            let mut th = theta0;
            let mut dth = 0.0;
            for &(n, a, c) in &terms {
                th += a * (n * u + c).cos();
                dth -= a * n * (n * u + c).sin();
            }
            let (st, ct) = th.sin_cos();
            let (su, cu) = u.sin_cos();
            let p = [st * cu, st * su, ct];
            let t = [dth * ct * cu - st * su, dth * ct * su + st * cu, -dth * st];
            [p, t]
        }))
    }

    /// This loop moved by the rotation covered by `g`.
    pub fn rotated(&self, g: &Su2Element) -> Loop {
        let frame = *g * self.frame;
        let kind = match self.kind {
            LoopKind::GeneralSmooth => LoopKind::GeneralSmooth,
            _ if frame.max_abs_diff(&Su2Element::identity()) == 0.0 => LoopKind::ConstantHeight,
            _ => LoopKind::RotatedConstantHeight,
        };
        Loop { shape: self.shape.clone(), rot: frame.rotation_matrix(), frame, kind, period: self.period }
    }

    pub fn kind(&self) -> LoopKind {
        self.kind
    }

    /// Fubini-Study length.
    pub fn period(&self) -> f64 {
        self.period
    }

    pub fn frame(&self) -> &Su2Element {
        &self.frame
    }

    /// Colatitude of the underlying circle, for (rotated) constant-height loops.
    pub fn circle_theta(&self) -> Option<f64> {
        match self.shape {
            Shape::Circle { theta } => Some(theta),
            Shape::Smooth { .. } => None,
        }
    }

    pub fn is_degenerate(&self) -> bool {
        self.period == 0.0
    }

    fn base_jet(&self, u: f64) -> [Vec3; 2] {
        match &self.shape {
            Shape::Circle { theta } => {
                let (st, ct) = theta.sin_cos();
                let (su, cu) = u.sin_cos();
                [[st * cu, st * su, ct], [-st * su, st * cu, 0.0]]
            }
            Shape::Smooth { f, .. } => {
                let [p, t] = f(u.rem_euclid(TWO_PI));
                let n = norm(p);
                [scale(p, 1.0 / n), t]
            }
        }
    }

    /// Point and derivative with respect to the parameter.
    pub fn jet(&self, u: f64) -> [Vec3; 2] {
        let [p, t] = self.base_jet(u);
        [mat_vec(&self.rot, p), mat_vec(&self.rot, t)]
    }

    pub fn xyz(&self, u: f64) -> Vec3 {
        self.jet(u)[0]
    }

    pub fn point(&self, u: f64) -> SpherePoint {
        SpherePoint::from_xyz(self.xyz(u))
    }

    pub fn tangent(&self, u: f64) -> Vec3 {
        self.jet(u)[1]
    }

    /// Fubini-Study speed `|x'(u)| / sqrt(2)`.
    pub fn speed(&self, u: f64) -> f64 {
        norm(self.tangent(u)) / SQRT_2
    }

    pub fn cache_key(&self) -> LoopKey {
        let mut key = Vec::with_capacity(9);
        match self.shape {
            Shape::Circle { theta } => {
                key.push(0);
                key.push(theta.to_bits());
            }
            Shape::Smooth { id, .. } => {
                key.push(1);
                key.push(id);
            }
        }
        for row in self.frame.entries() {
            for z in row {
                key.push(z.re.to_bits());
                key.push(z.im.to_bits());
            }
        }
        LoopKey(key)
    }

    pub(crate) fn samples(&self, n: usize) -> Vec<Vec3> {
        (0..n).map(|i| self.xyz(TWO_PI * i as f64 / n as f64)).collect()
    }
}

/// The constant-height loop at `cos(theta) = 2m/k`.
pub fn constant_height_loop(k: u32, m: HalfInt) -> Result<Loop> {
    if k == 0 || m.twice().unsigned_abs() > k as u64 || (k as i64 - m.twice()) % 2 != 0 {
        return Err(Error::InvalidWeight { k, m: m.to_string() });
    }
    let z = m.twice() as f64 / k as f64;
    let theta = if m.twice() == k as i64 {
        0.0
    } else if m.twice() == -(k as i64) {
        PI
    } else {
        z.acos()
    };
    Loop::circle(theta)
}

/// Rotation moving `p` to the south pole, used to pick a trivializing chart.
pub(crate) fn chart_sending_to_south(p: Vec3) -> Su2Element {
    let south = [0.0, 0.0, -1.0];
    let axis = cross(p, south);
    let s = norm(axis);
    let c = dot(p, south);
    if s < 1e-14 {
        return if c > 0.0 { Su2Element::identity() } else { Su2Element::uy(PI) };
    }
    Su2Element::from_axis_angle(normalize(axis), s.atan2(c))
}

/// The point of a Fibonacci lattice farthest from every sample.
pub(crate) fn far_point(samples: &[Vec3]) -> Vec3 {
    const N: usize = 600;
    let golden = PI * (3.0 - 5f64.sqrt());
    let mut best = [0.0, 0.0, -1.0];
    let mut best_score = f64::INFINITY;
    for i in 0..N {
        let z = 1.0 - (2.0 * i as f64 + 1.0) / N as f64;
        let r = (1.0 - z * z).sqrt();
        let (s, c) = (golden * i as f64).sin_cos();
        let cand = [r * c, r * s, z];
        let closest = samples.iter().map(|x| dot(*x, cand)).fold(f64::NEG_INFINITY, f64::max);
        if closest < best_score {
            best_score = closest;
            best = cand;
        }
    }
    best
}

#[derive(Clone, Debug)]
enum LiftRepr {
    /// Closed form `e^{-i sign sin^2(theta/2) u} u(theta, u)` pushed through the frame.
    Circle {
        theta: f64,
        sign: f64,
    },
    Constant(HopfPoint),
    Numeric(Arc<NumericLift>),
}

#[derive(Debug)]
struct NumericLift {
    chart_inv: Su2Element,
    rot: [[f64; 3]; 3],
    /// Connection integral at the panel boundaries.
    cumulative: Vec<f64>,
}

impl NumericLift {
    fn build(base: &Loop) -> NumericLift {
        let p = far_point(&base.samples(512));
        let chart = chart_sending_to_south(p);
        let rot = chart.rotation_matrix();
        let h = TWO_PI / LIFT_PANELS as f64;
        let integrand = |u: f64| {
            let [x, dx] = base.jet(u);
            connection_form(mat_vec(&rot, x), mat_vec(&rot, dx))
        };
        let mut cumulative = Vec::with_capacity(LIFT_PANELS + 1);
        cumulative.push(0.0);
        let mut acc = 0.0;
        for i in 0..LIFT_PANELS {
            acc += integrate_adaptive(&integrand, i as f64 * h, (i + 1) as f64 * h, 1e-15);
            cumulative.push(acc);
        }
        NumericLift { chart_inv: chart.inverse(), rot, cumulative }
    }

    fn total(&self) -> f64 {
        self.cumulative[LIFT_PANELS]
    }

    fn phase_integral(&self, base: &Loop, u: f64) -> f64 {
        let w = (u / TWO_PI).floor();
        let r = u - w * TWO_PI;
        let h = TWO_PI / LIFT_PANELS as f64;
        let i = ((r / h) as usize).min(LIFT_PANELS - 1);
        let start = i as f64 * h;
        let part = gl20_integrate(
            &|v| {
                let [x, dx] = base.jet(v);
                connection_form(mat_vec(&self.rot, x), mat_vec(&self.rot, dx))
            },
            start,
            r,
        );
        w * self.total() + self.cumulative[i] + part
    }

    fn lift(&self, base: &Loop, u: f64) -> HopfPoint {
        let [x, _] = base.jet(u);
        let y = SpherePoint::from_xyz(mat_vec(&self.rot, x));
        let q = super::section_u_unchecked(y.theta(), y.phi());
        let phase = Complex64::from_polar(1.0, -self.phase_integral(base, u));
        self.chart_inv.apply(q.phase_shift(phase))
    }
}

/// A loop together with a parallel (horizontal) lift to S^3.
///
/// The lift is defined for every real parameter and continues past `2pi`:
/// `lift(u + 2pi) = holonomy * lift(u)`.
#[derive(Clone, Debug)]
pub struct LiftedLoop {
    base: Loop,
    phase: Complex64,
    repr: LiftRepr,
}

impl LiftedLoop {
    fn unphased(base: &Loop) -> LiftRepr {
        match base.shape {
            Shape::Circle { theta } if base.is_degenerate() => {
                let p =
                    if theta < PI / 2.0 { super::section_u_unchecked(0.0, 0.0) } else { super::section_south(PI, 0.0) };
                LiftRepr::Constant(base.frame.apply(p))
            }
            Shape::Circle { theta } => LiftRepr::Circle { theta, sign: 1.0 },
            Shape::Smooth { .. } => LiftRepr::Numeric(Arc::new(NumericLift::build(base))),
        }
    }

    fn raw(&self, u: f64) -> HopfPoint {
        match &self.repr {
            LiftRepr::Circle { theta, sign } => {
                let (s, c) = (theta / 2.0).sin_cos();
                let e = Complex64::from_polar(1.0, -sign * s * s * u);
                let q = HopfPoint::new_unchecked(Complex64::from_polar(s, u) * e, Complex64::new(c, 0.0) * e);
                self.base.frame.apply(q)
            }
            LiftRepr::Constant(p) => *p,
            LiftRepr::Numeric(n) => n.lift(&self.base, u),
        }
    }

    /// The same circle with the opposite sign in the lift phase. This curve is
    /// not horizontal; it exists to check that the invariant suite notices.
    pub fn circle_with_flipped_sign(&self) -> Result<LiftedLoop> {
        match self.repr {
            LiftRepr::Circle { theta, sign } => Ok(LiftedLoop {
                base: self.base.clone(),
                phase: self.phase,
                repr: LiftRepr::Circle { theta, sign: -sign },
            }),
            _ => Err(Error::Domain("sign flip is only defined for circle lifts".into())),
        }
    }

    pub fn base(&self) -> &Loop {
        &self.base
    }

    pub fn lift(&self, u: f64) -> HopfPoint {
        self.raw(u).phase_shift(self.phase)
    }

    /// Lift together with its first and second parameter derivatives.
    pub fn jet(&self, u: f64) -> [[Complex64; 2]; 3] {
        match &self.repr {
            LiftRepr::Circle { theta, sign } => {
                let (s, c) = (theta / 2.0).sin_cos();
                let w = sign * s * s;
                let e = Complex64::from_polar(1.0, -w * u) * self.phase;
                let top = Complex64::from_polar(s, u) * e;
                let bot = Complex64::new(c, 0.0) * e;
                let i = Complex64::i();
                let f = &self.base.frame;
                [
                    f.apply_vec([top, bot]),
                    f.apply_vec([i * (1.0 - w) * top, -i * w * bot]),
                    f.apply_vec([-(1.0 - w) * (1.0 - w) * top, -w * w * bot]),
                ]
            }
            LiftRepr::Constant(p) => {
                let z = Complex64::new(0.0, 0.0);
                [p.phase_shift(self.phase).as_array(), [z, z], [z, z]]
            }
            LiftRepr::Numeric(_) => {
                let h = 1e-3;
                let at = |v: f64| self.lift(v).as_array();
                let q = at(u);
                let (p1, m1, p2, m2) = (at(u + h), at(u - h), at(u + 2.0 * h), at(u - 2.0 * h));
                let d1 = |i: usize| (8.0 * (p1[i] - m1[i]) - (p2[i] - m2[i])) / (12.0 * h);
                let d2 = |i: usize| (16.0 * (p1[i] + m1[i]) - (p2[i] + m2[i]) - 30.0 * q[i]) / (12.0 * h * h);
                [q, [d1(0), d1(1)], [d2(0), d2(1)]]
            }
        }
    }

    pub fn holonomy(&self) -> Complex64 {
        match &self.repr {
            LiftRepr::Circle { theta, sign } => {
                Complex64::from_polar(1.0, -sign * TWO_PI * (theta / 2.0).sin().powi(2))
            }
            LiftRepr::Constant(_) => Complex64::new(1.0, 0.0),
            LiftRepr::Numeric(n) => Complex64::from_polar(1.0, -n.total()),
        }
    }
}

/// Horizontal lift of `base` starting at `start`, which must lie over `base(0)`.
pub fn parallel_lift(base: &Loop, start: HopfPoint) -> Result<LiftedLoop> {
    start.check_unit()?;
    if norm(sub(start.project_xyz(), base.xyz(0.0))) > 1e-10 {
        return Err(Error::Domain("start point does not lie over loop(0)".into()));
    }
    let mut lifted =
        LiftedLoop { base: base.clone(), phase: Complex64::new(1.0, 0.0), repr: LiftedLoop::unphased(base) };
    let z = lifted.raw(0.0).inner(&start);
    lifted.phase = z / z.norm();
    Ok(lifted)
}

/// The lift starting at `g u(theta, 0)` for a circle moved by `g`, and at the
/// canonical fibre point over `loop(0)` otherwise.
pub fn standard_lift(base: &Loop) -> LiftedLoop {
    let repr = LiftedLoop::unphased(base);
    LiftedLoop { base: base.clone(), phase: Complex64::new(1.0, 0.0), repr }
}

/// Holonomy of the connection around `base`; equals `e^{-iA/2}` for the area
/// `A` to the left of the loop.
pub fn holonomy(base: &Loop) -> Complex64 {
    standard_lift(base).holonomy()
}

pub fn is_bohr_sommerfeld(base: &Loop, k: u32, tol: f64) -> bool {
    (holonomy(base).powu(k) - 1.0).norm() < tol
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hopf::section_u;

    fn circle(theta: f64) -> Loop {
        Loop::circle(theta).unwrap()
    }

    #[test]
    fn constant_height_example() {
        let l = constant_height_loop(50, HalfInt::from_int(11)).unwrap();
        assert!((l.circle_theta().unwrap() - (22.0f64 / 50.0).acos()).abs() < 1e-15);
        let eq = constant_height_loop(8, HalfInt::from_int(0)).unwrap();
        assert!((eq.period() - TWO_PI / SQRT_2).abs() < 1e-14);
        let pole = constant_height_loop(8, HalfInt::from_int(4)).unwrap();
        assert!(pole.is_degenerate() && pole.period() == 0.0);
        assert!(constant_height_loop(8, HalfInt::from_twice(3)).is_err());
        assert!(constant_height_loop(8, HalfInt::from_int(5)).is_err());
    }

    #[test]
    fn circle_lift_matches_closed_form() {
        let th = 1.1;
        let l = standard_lift(&circle(th));
        for &u in &[0.0, 0.7, 3.0, 6.0] {
            let expect =
                section_u(th, u).unwrap().phase_shift(Complex64::from_polar(1.0, -(th / 2.0).sin().powi(2) * u));
            assert!(l.lift(u).max_abs_diff(&expect) < 1e-15);
        }
    }

    #[test]
    fn equator_lift_example() {
        let l = standard_lift(&circle(PI / 2.0));
        for &u in &[0.0, 1.0, 2.5] {
            let q = l.lift(u);
            let expect = HopfPoint::new_unchecked(
                Complex64::from_polar(1.0, u / 2.0) / SQRT_2,
                Complex64::from_polar(1.0, -u / 2.0) / SQRT_2,
            );
            assert!(q.max_abs_diff(&expect) < 1e-15);
        }
        assert!((holonomy(&circle(PI / 2.0)) + 1.0).norm() < 1e-14);
    }

    #[test]
    fn pole_loop_has_constant_lift() {
        let l = standard_lift(&circle(0.0));
        assert!(l.lift(2.0).max_abs_diff(&HopfPoint::new_unchecked(0.0.into(), 1.0.into())) < 1e-15);
        assert_eq!(holonomy(&circle(0.0)), Complex64::new(1.0, 0.0));
    }

    #[test]
    fn lift_is_horizontal_and_projects() {
        let star = Loop::star(1.0, &[(3, 0.3, 0.2), (1, 0.2, 0.0)]).unwrap().rotated(&Su2Element::uy(2.1));
        for l in [standard_lift(&circle(0.8).rotated(&Su2Element::uy(0.4))), standard_lift(&star)] {
            for i in 0..40 {
                let u = i as f64 * 0.157;
                let q = l.lift(u);
                assert!(norm(sub(q.project_xyz(), l.base().xyz(u))) < 1e-10);
                let h = 1e-5;
                let a = l.lift(u - h).as_array();
                let b = l.lift(u + h).as_array();
                let dq = [(b[0] - a[0]) / (2.0 * h), (b[1] - a[1]) / (2.0 * h)];
                let c = q.q1.conj() * dq[0] + q.q2.conj() * dq[1];
                assert!(c.norm() < 1e-8, "connection defect {c}");
            }
        }
    }

    #[test]
    fn holonomy_of_rotated_circle_is_unchanged() {
        let c = circle(0.9);
        let r = c.rotated(&Su2Element::from_axis_angle([1.0, 2.0, 0.5], 2.3));
        assert!((holonomy(&c) - holonomy(&r)).norm() < 1e-15);
        let expect = Complex64::from_polar(1.0, -PI * (1.0 - 0.9f64.cos()));
        assert!((holonomy(&c) - expect).norm() < 1e-14);
    }

    #[test]
    fn numeric_lift_agrees_with_closed_form_on_circles() {
        let th = 2.0;
        let c = circle(th);
        let smooth = Loop::smooth(Arc::new(move |u: f64| {
            let (s, co) = u.sin_cos();
            [[th.sin() * co, th.sin() * s, th.cos()], [-th.sin() * s, th.sin() * co, 0.0]]
        }))
        .unwrap();
        assert!((smooth.period() - c.period()).abs() < 1e-12);
        assert!((holonomy(&c) - holonomy(&smooth)).norm() < 1e-12);
        let a = standard_lift(&c);
        let b = parallel_lift(&smooth, a.lift(0.0)).unwrap();
        for &u in &[0.3, 2.0, 5.5, 8.0] {
            assert!(a.lift(u).max_abs_diff(&b.lift(u)) < 1e-11);
        }
    }

    #[test]
    fn jet_matches_finite_differences() {
        let l = standard_lift(&circle(0.7).rotated(&Su2Element::uy(1.3)));
        let u = 1.9;
        let [_, d1, d2] = l.jet(u);
        let h = 1e-4;
        let a = l.jet(u - h)[0];
        let b = l.jet(u + h)[0];
        let c = l.jet(u)[0];
        for i in 0..2 {
            assert!(((b[i] - a[i]) / (2.0 * h) - d1[i]).norm() < 1e-7);
            assert!(((b[i] + a[i] - 2.0 * c[i]) / (h * h) - d2[i]).norm() < 1e-5);
        }
    }

    #[test]
    fn bohr_sommerfeld_examples() {
        for k in 1..12u32 {
            for two_m in (-(k as i64)..=k as i64).step_by(2) {
                let l = constant_height_loop(k, HalfInt::from_twice(two_m)).unwrap();
                assert!(is_bohr_sommerfeld(&l, k, 1e-10));
            }
        }
        let eq = circle(PI / 2.0);
        assert!(is_bohr_sommerfeld(&eq, 4, 1e-12));
        assert!(!is_bohr_sommerfeld(&eq, 5, 1e-12));
        let r = constant_height_loop(7, HalfInt::from_twice(3)).unwrap().rotated(&Su2Element::uy(0.8));
        assert!(is_bohr_sommerfeld(&r, 7, 1e-10));
    }

    #[test]
    fn rejects_start_off_the_fibre() {
        let c = circle(1.0);
        assert!(parallel_lift(&c, HopfPoint::new_unchecked(1.0.into(), 0.0.into())).is_err());
    }
}
