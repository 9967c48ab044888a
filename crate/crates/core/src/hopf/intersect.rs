//! Transverse intersections of two loops, side tests and lune areas.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::loops::{chart_sending_to_south, far_point, standard_lift};
use super::{cross, dot, mat_vec, norm, sub, LiftedLoop, Loop, SpherePoint, Vec3};
use crate::error::{Error, Result};
use crate::quadrature::integrate_adaptive;

const TWO_PI: f64 = 2.0 * PI;
const GRID: usize = 256;
const ANGLE_TOL: f64 = 1e-6;
const WINDING_SAMPLES: usize = 4096;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct IntersectionDatum {
    /// Parameter on the first loop.
    pub s: f64,
    /// Parameter on the second loop.
    pub t: f64,
    pub point: SpherePoint,
    /// Angle from the first tangent to the second, in (0, pi).
    pub angle: f64,
    /// Sign of `(gamma' x sigma') . x`.
    pub orientation: i8,
    /// `gamma~ / sigma~` at the point, when lifts are known.
    pub relative_phase: Option<Complex64>,
}

fn periodic_gap(a: f64, b: f64) -> f64 {
    let d = (a - b).rem_euclid(TWO_PI);
    d.min(TWO_PI - d)
}

enum Refined {
    Root(f64, f64),
    /// Converged to a local minimum of the distance that is not a crossing.
    NearMiss,
    Diverged(f64),
}

fn refine(gamma: &Loop, sigma: &Loop, mut s: f64, mut t: f64) -> Refined {
    let mut res = f64::INFINITY;
    for _ in 0..200 {
        let [g, dg] = gamma.jet(s);
        let [x, dx] = sigma.jet(t);
        let f = sub(g, x);
        res = norm(f);
        if res < 1e-15 {
            break;
        }
        // Gauss-Newton on J = [dg, -dx].
        let a11 = dot(dg, dg);
        let a12 = -dot(dg, dx);
        let a22 = dot(dx, dx);
        let b1 = -dot(dg, f);
        let b2 = dot(dx, f);
        let det = a11 * a22 - a12 * a12;
        if det.abs() < 1e-300 {
            return Refined::Diverged(res);
        }
        let mut ds = (a22 * b1 - a12 * b2) / det;
        let mut dt = (a11 * b2 - a12 * b1) / det;
        // Damped near folds, where two intersections are about to merge.
        let len = ds.hypot(dt);
        if len > 0.05 {
            ds *= 0.05 / len;
            dt *= 0.05 / len;
        }
        s += ds;
        t += dt;
        if len < 1e-15 {
            break;
        }
    }
    let res = res.min(norm(sub(gamma.xyz(s), sigma.xyz(t))));
    if res <= 1e-12 {
        return Refined::Root(s.rem_euclid(TWO_PI), t.rem_euclid(TWO_PI));
    }
    // A stationary point of the distance has J^T F = 0.
    let [g, dg] = gamma.jet(s);
    let [x, dx] = sigma.jet(t);
    let f = sub(g, x);
    let grad = dot(dg, f).hypot(dot(dx, f));
    if grad <= 1e-8 * (norm(dg) + norm(dx)) * res {
        Refined::NearMiss
    } else {
        Refined::Diverged(res)
    }
}

/// All transverse intersections, sorted by the first loop's parameter.
pub fn find_intersections(gamma: &Loop, sigma: &Loop) -> Result<Vec<IntersectionDatum>> {
    if gamma.is_degenerate() || sigma.is_degenerate() {
        return Ok(Vec::new());
    }
    let gs = gamma.samples(GRID);
    let ss = sigma.samples(GRID);
    let step = |v: &[Vec3]| (0..GRID).map(|i| norm(sub(v[(i + 1) % GRID], v[i]))).fold(0.0, f64::max);
    let reach = 2.0 * (step(&gs) + step(&ss));
    let dist: Vec<f64> = gs.iter().flat_map(|g| ss.iter().map(move |x| norm(sub(*g, *x)))).collect();
    let at = |i: usize, j: usize| dist[(i % GRID) * GRID + (j % GRID)];

    let mut found: Vec<IntersectionDatum> = Vec::new();
    for i in 0..GRID {
        for j in 0..GRID {
            let d = at(i, j);
            if d > reach {
                continue;
            }
            let is_min =
                (0..3).all(|di| (0..3).all(|dj| (di == 1 && dj == 1) || d <= at(i + GRID - 1 + di, j + GRID - 1 + dj)));
            if !is_min {
                continue;
            }
            let s0 = TWO_PI * i as f64 / GRID as f64;
            let t0 = TWO_PI * j as f64 / GRID as f64;
            let mut roots = Vec::new();
            let mut worst = None;
            match refine(gamma, sigma, s0, t0) {
                Refined::Root(s, t) => roots.push((s, t)),
                other => {
                    // A symmetric seed can sit on a saddle of the distance
                    // between two nearby crossings; probe along both diagonals.
                    if let Refined::Diverged(r) = other {
                        worst = Some(r);
                    }
                    for e in [1e-2, 1e-3] {
                        for (a, b) in [(e, e), (-e, -e), (e, -e), (-e, e)] {
                            match refine(gamma, sigma, s0 + a, t0 + b) {
                                Refined::Root(s, t) => roots.push((s, t)),
                                Refined::Diverged(r) => worst = Some(r),
                                Refined::NearMiss => {}
                            }
                        }
                    }
                }
            }
            if roots.is_empty() {
                if let Some(residual) = worst {
                    return Err(Error::NewtonDivergence { s: s0, t: t0, residual });
                }
                continue;
            }
            for (s, t) in roots {
                if found.iter().any(|x| periodic_gap(x.s, s) < 1e-7 && periodic_gap(x.t, t) < 1e-7) {
                    continue;
                }
                let [x, dg] = gamma.jet(s);
                let dx = sigma.tangent(t);
                let c = cross(dg, dx);
                let angle = norm(c).atan2(dot(dg, dx));
                if angle < ANGLE_TOL || PI - angle < ANGLE_TOL {
                    return Err(Error::NonTransverse { s, t, angle });
                }
                found.push(IntersectionDatum {
                    s,
                    t,
                    point: SpherePoint::from_xyz(x),
                    angle,
                    orientation: if dot(c, x) > 0.0 { 1 } else { -1 },
                    relative_phase: None,
                });
            }
        }
    }
    found.sort_by(|a, b| a.s.total_cmp(&b.s));
    Ok(found)
}

/// Intersections of the base loops with the relative phases of the lifts.
pub fn find_lifted_intersections(gamma: &LiftedLoop, sigma: &LiftedLoop) -> Result<Vec<IntersectionDatum>> {
    let mut xs = find_intersections(gamma.base(), sigma.base())?;
    for x in &mut xs {
        let w = sigma.lift(x.t).inner(&gamma.lift(x.s));
        x.relative_phase = Some(w / w.norm());
    }
    Ok(xs)
}

/// Winding number of the loop around `p` after stereographic projection from
/// a point far from the loop.
pub fn winding_number(base: &Loop, p: Vec3) -> i32 {
    let samples = base.samples(WINDING_SAMPLES);
    let rot = chart_sending_to_south(far_point(&samples)).rotation_matrix();
    let stereo = |x: Vec3| {
        let y = mat_vec(&rot, x);
        Complex64::new(y[0], y[1]) / (1.0 + y[2])
    };
    let q = mat_vec(&rot, p);
    if 1.0 + q[2] < 1e-12 {
        return 0;
    }
    let c = stereo(p);
    let w: Vec<Complex64> = samples.iter().map(|x| stereo(*x) - c).collect();
    let total: f64 = (0..w.len()).map(|i| (w[(i + 1) % w.len()] / w[i]).arg()).sum();
    (total / TWO_PI).round() as i32
}

/// Whether `p` lies in the region to the left of the loop.
pub fn is_left_of(base: &Loop, p: Vec3) -> bool {
    let samples = base.samples(WINDING_SAMPLES);
    let rot = chart_sending_to_south(far_point(&samples)).rotation_matrix();
    let w: Vec<Complex64> = samples
        .iter()
        .map(|x| {
            let y = mat_vec(&rot, *x);
            Complex64::new(y[0], y[1]) / (1.0 + y[2])
        })
        .collect();
    let signed: f64 = (0..w.len()).map(|i| (w[i].conj() * w[(i + 1) % w.len()]).im).sum();
    let inside = if signed > 0.0 { 1 } else { 0 };
    winding_number(base, p) == inside
}

/// Area of the lune to the right of `gamma` and to the left of `sigma`, via
/// the boundary integral of `(1 - cos theta) d phi`.
///
/// The result is checked against the holonomy `e^{-iA/2}` of the standard
/// lifts around the lune boundary.
pub fn lune_area(gamma: &Loop, sigma: &Loop, xs: &[IntersectionDatum]) -> Result<f64> {
    if xs.len() != 2 {
        return Err(Error::IntersectionCount { expected: 2, found: xs.len() });
    }
    let arc = |a: f64, b: f64| (b - a).rem_euclid(TWO_PI);
    let (start, end) = {
        let mid = |a: &IntersectionDatum, b: &IntersectionDatum| sigma.xyz(a.t + 0.5 * arc(a.t, b.t));
        let right01 = !is_left_of(gamma, mid(&xs[0], &xs[1]));
        let right10 = !is_left_of(gamma, mid(&xs[1], &xs[0]));
        match (right01, right10) {
            (true, false) => (xs[0], xs[1]),
            (false, true) => (xs[1], xs[0]),
            _ => return Err(Error::LuneOrientation),
        }
    };
    let dt = arc(start.t, end.t);
    let ds = arc(start.s, end.s);
    if !is_left_of(sigma, gamma.xyz(start.s + 0.5 * ds)) {
        return Err(Error::LuneOrientation);
    }

    let mut boundary: Vec<Vec3> = (0..=256).map(|i| sigma.xyz(start.t + dt * i as f64 / 256.0)).collect();
    boundary.extend((0..=256).map(|i| gamma.xyz(start.s + ds * i as f64 / 256.0)));
    let rot = chart_sending_to_south(far_point(&boundary)).rotation_matrix();
    let form = |l: &Loop, u: f64| {
        let [x, dx] = l.jet(u);
        let (y, dy) = (mat_vec(&rot, x), mat_vec(&rot, dx));
        (y[0] * dy[1] - y[1] * dy[0]) / (1.0 + y[2])
    };
    let panels = 32;
    let along = |l: &Loop, a: f64, len: f64| -> f64 {
        let h = len / panels as f64;
        (0..panels).map(|i| integrate_adaptive(&|u| form(l, u), a + i as f64 * h, a + (i + 1) as f64 * h, 1e-15)).sum()
    };
    let area = (along(sigma, start.t, dt) - along(gamma, start.s, ds)).rem_euclid(4.0 * PI);

    let gl = standard_lift(gamma);
    let sl = standard_lift(sigma);
    let omega = |s: f64, t: f64| {
        let w = sl.lift(t).inner(&gl.lift(s));
        w / w.norm()
    };
    let hol = omega(start.s, start.t) / omega(start.s + ds, start.t + dt);
    let defect = (hol - Complex64::from_polar(1.0, -area / 2.0)).norm();
    if defect > 1e-8 {
        return Err(Error::LuneHolonomy { defect });
    }
    Ok(area)
}

/// `det[z, R_y(beta) z, p] = sin(beta) p_y`.
pub fn parallelepiped_volume(beta: f64, p: &SpherePoint) -> f64 {
    beta.sin() * p.xyz()[1]
}
