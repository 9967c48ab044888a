//! Leading-order stationary phase for `int int f e^{ikS}` over a 2-torus with
//! complex phase, and a brute-force trapezoid oracle.
//!
//! Integrands supply the base `w = e^{iS}` rather than `S` itself, so that
//! `e^{ikS} = w^k` is free of branch choices. `S = -i log w` is only formed at
//! critical points.

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hopf::LiftedLoop;

const TWO_PI: f64 = 2.0 * PI;
const GROWTH_TOL: f64 = 1e-12;
const GRAD_TOL: f64 = 1e-10;
const RIDGE_TOL: f64 = 1e-8;
const EIG_TOL: f64 = 1e-10;

/// Value, gradient and Hessian of `w` with respect to `(s, t)`.
pub type BaseJet = (Complex64, [Complex64; 2], [[Complex64; 2]; 2]);

pub trait TorusIntegrand: Sync {
    fn periods(&self) -> (f64, f64);

    /// Lower-left corner of the fundamental domain.
    fn origin(&self) -> (f64, f64) {
        (0.0, 0.0)
    }

    /// `w(s, t) = e^{iS(s, t)}`.
    fn base(&self, s: f64, t: f64) -> Complex64;

    fn amplitude(&self, s: f64, t: f64) -> Complex64;

    /// Analytic derivatives of `w`, when the integrand knows them.
    fn base_jet(&self, _s: f64, _t: f64) -> Option<BaseJet> {
        None
    }
}

/// A torus integrand built from closures.
pub struct FnIntegrand<W, F> {
    pub periods: (f64, f64),
    pub origin: (f64, f64),
    pub base: W,
    pub amplitude: F,
}

impl<W, F> TorusIntegrand for FnIntegrand<W, F>
where
    W: Fn(f64, f64) -> Complex64 + Sync,
    F: Fn(f64, f64) -> Complex64 + Sync,
{
    fn periods(&self) -> (f64, f64) {
        self.periods
    }
    fn origin(&self) -> (f64, f64) {
        self.origin
    }
    fn base(&self, s: f64, t: f64) -> Complex64 {
        (self.base)(s, t)
    }
    fn amplitude(&self, s: f64, t: f64) -> Complex64 {
        (self.amplitude)(s, t)
    }
}

/// `w(s, t) = <sigma~(t), gamma~(s)>` with amplitude
/// `(k+1)/(2pi) |gamma'(s)| |sigma'(t)| / 2`, so that the integral is the
/// inner product of the two coherent loop states at level `k`.
pub struct LoopPairIntegrand {
    pub gamma: LiftedLoop,
    pub sigma: LiftedLoop,
    pub k: u32,
}

fn herm(a: &[Complex64; 2], b: &[Complex64; 2]) -> Complex64 {
    a[0].conj() * b[0] + a[1].conj() * b[1]
}

impl TorusIntegrand for LoopPairIntegrand {
    fn periods(&self) -> (f64, f64) {
        (TWO_PI, TWO_PI)
    }
    fn base(&self, s: f64, t: f64) -> Complex64 {
        self.sigma.lift(t).inner(&self.gamma.lift(s))
    }
    fn amplitude(&self, s: f64, t: f64) -> Complex64 {
        let f = (self.k + 1) as f64 / TWO_PI * self.gamma.base().speed(s) * self.sigma.base().speed(t);
        Complex64::new(f, 0.0)
    }
    fn base_jet(&self, s: f64, t: f64) -> Option<BaseJet> {
        let g = self.gamma.jet(s);
        let x = self.sigma.jet(t);
        let w = herm(&x[0], &g[0]);
        let ws = herm(&x[0], &g[1]);
        let wt = herm(&x[1], &g[0]);
        let wss = herm(&x[0], &g[2]);
        let wtt = herm(&x[2], &g[0]);
        let wst = herm(&x[1], &g[1]);
        Some((w, [ws, wt], [[wss, wst], [wst, wtt]]))
    }
}

/// Gradient and Hessian of `w` by central differences with one Richardson
/// step, at steps proportional to the periods.
pub fn base_jet_fd<I: TorusIntegrand + ?Sized>(f: &I, s: f64, t: f64) -> BaseJet {
    let (ps, pt) = f.periods();
    let hs = 4e-3 * ps / TWO_PI;
    let ht = 4e-3 * pt / TWO_PI;
    let w = f.base(s, t);
    let level = |hs: f64, ht: f64| {
        let ps_ = f.base(s + hs, t);
        let ms = f.base(s - hs, t);
        let pt_ = f.base(s, t + ht);
        let mt = f.base(s, t - ht);
        let pp = f.base(s + hs, t + ht);
        let pm = f.base(s + hs, t - ht);
        let mp = f.base(s - hs, t + ht);
        let mm = f.base(s - hs, t - ht);
        (
            [(ps_ - ms) / (2.0 * hs), (pt_ - mt) / (2.0 * ht)],
            [
                [(ps_ + ms - 2.0 * w) / (hs * hs), (pp - pm - mp + mm) / (4.0 * hs * ht)],
                [(pp - pm - mp + mm) / (4.0 * hs * ht), (pt_ + mt - 2.0 * w) / (ht * ht)],
            ],
        )
    };
    let (g1, h1) = level(hs, ht);
    let (g2, h2) = level(hs / 2.0, ht / 2.0);
    let r = |a: Complex64, b: Complex64| (4.0 * b - a) / 3.0;
    (
        w,
        [r(g1[0], g2[0]), r(g1[1], g2[1])],
        [[r(h1[0][0], h2[0][0]), r(h1[0][1], h2[0][1])], [r(h1[1][0], h2[1][0]), r(h1[1][1], h2[1][1])]],
    )
}

fn jet<I: TorusIntegrand + ?Sized>(f: &I, s: f64, t: f64) -> BaseJet {
    f.base_jet(s, t).unwrap_or_else(|| base_jet_fd(f, s, t))
}

/// Gradient and Hessian of `S = -i log w` from the jet of `w`.
pub fn phase_derivatives(j: &BaseJet) -> ([Complex64; 2], [[Complex64; 2]; 2]) {
    let (w, dw, ddw) = j;
    let mi = Complex64::new(0.0, -1.0);
    let l = [dw[0] / w, dw[1] / w];
    let grad = [mi * l[0], mi * l[1]];
    let mut hess = [[Complex64::new(0.0, 0.0); 2]; 2];
    for a in 0..2 {
        for b in 0..2 {
            hess[a][b] = mi * (ddw[a][b] / w - l[a] * l[b]);
        }
    }
    (grad, hess)
}

/// Hessian of `S` at a point, using analytic derivatives when available.
pub fn phase_hessian<I: TorusIntegrand + ?Sized>(f: &I, s: f64, t: f64) -> [[Complex64; 2]; 2] {
    phase_derivatives(&jet(f, s, t)).1
}

/// Hessian of `S` by finite differences only.
pub fn phase_hessian_fd<I: TorusIntegrand + ?Sized>(f: &I, s: f64, t: f64) -> [[Complex64; 2]; 2] {
    phase_derivatives(&base_jet_fd(f, s, t)).1
}

/// Eigenvalues of a 2x2 complex matrix.
pub fn eigenvalues_2x2(m: &[[Complex64; 2]; 2]) -> [Complex64; 2] {
    let half_tr = (m[0][0] + m[1][1]) / 2.0;
    let det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
    let disc = (half_tr * half_tr - det).sqrt();
    [half_tr + disc, half_tr - disc]
}

/// Principal argument in `(-pi, pi]`.
pub fn principal_arg(z: Complex64) -> f64 {
    let a = z.arg();
    if a <= -PI {
        PI
    } else {
        a
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CriticalPoint {
    pub s: f64,
    pub t: f64,
    /// `S(s, t)`.
    pub phase: Complex64,
    /// `w = e^{iS}` at the point.
    pub base: Complex64,
    pub amplitude: Complex64,
    pub hessian: [[Complex64; 2]; 2],
    pub eigenvalues: [Complex64; 2],
    pub args: [f64; 2],
    pub gradient_norm: f64,
}

fn wrap(x: f64, origin: f64, period: f64) -> f64 {
    origin + (x - origin).rem_euclid(period)
}

fn gap(a: f64, b: f64, period: f64) -> f64 {
    let d = (a - b).rem_euclid(period);
    d.min(period - d)
}

/// Gauss-Newton on the real 4x2 system `[Re grad S; Im grad S] = 0`.
fn refine<I: TorusIntegrand + ?Sized>(f: &I, mut s: f64, mut t: f64) -> (f64, f64, f64) {
    let mut res = f64::INFINITY;
    for _ in 0..80 {
        let (g, h) = phase_derivatives(&jet(f, s, t));
        res = (g[0].norm_sqr() + g[1].norm_sqr()).sqrt();
        if !res.is_finite() {
            return (s, t, f64::INFINITY);
        }
        if res < 1e-14 {
            break;
        }
        // rows: Re g0, Re g1, Im g0, Im g1; columns: d/ds, d/dt
        let rows = [
            [h[0][0].re, h[0][1].re, g[0].re],
            [h[1][0].re, h[1][1].re, g[1].re],
            [h[0][0].im, h[0][1].im, g[0].im],
            [h[1][0].im, h[1][1].im, g[1].im],
        ];
        let (mut a11, mut a12, mut a22, mut b1, mut b2) = (0.0, 0.0, 0.0, 0.0, 0.0);
        for r in &rows {
            a11 += r[0] * r[0];
            a12 += r[0] * r[1];
            a22 += r[1] * r[1];
            b1 -= r[0] * r[2];
            b2 -= r[1] * r[2];
        }
        let det = a11 * a22 - a12 * a12;
        if det.abs() < 1e-300 {
            break;
        }
        let mut ds = (a22 * b1 - a12 * b2) / det;
        let mut dt = (a11 * b2 - a12 * b1) / det;
        let step = ds.hypot(dt);
        if step > 0.5 {
            ds *= 0.5 / step;
            dt *= 0.5 / step;
        }
        s += ds;
        t += dt;
        if step < 1e-15 {
            break;
        }
    }
    let (g, _) = phase_derivatives(&jet(f, s, t));
    res = res.min((g[0].norm_sqr() + g[1].norm_sqr()).sqrt());
    (s, t, res)
}

/// Critical points of `S` with `|e^{iS}| = 1`, seeded from local maxima of
/// `|w|` on a `grid x grid` scan.
pub fn find_stationary_points<I: TorusIntegrand + ?Sized>(f: &I, grid: usize) -> Result<Vec<CriticalPoint>> {
    if grid < 4 {
        return Err(Error::Domain(format!("grid {grid} is too coarse")));
    }
    let (ps, pt) = f.periods();
    let (os, ot) = f.origin();
    let coord = |i: usize, j: usize| (os + ps * i as f64 / grid as f64, ot + pt * j as f64 / grid as f64);
    let mags: Vec<f64> = (0..grid * grid)
        .into_par_iter()
        .map(|idx| {
            let (s, t) = coord(idx / grid, idx % grid);
            f.base(s, t).norm()
        })
        .collect();
    if let Some(idx) = (0..mags.len()).find(|&i| mags[i] > 1.0 + GROWTH_TOL) {
        let (s, t) = coord(idx / grid, idx % grid);
        return Err(Error::PhaseGrowth { s, t, magnitude: mags[idx] });
    }
    let at = |i: usize, j: usize| mags[(i % grid) * grid + (j % grid)];
    let mut seeds = Vec::new();
    for i in 0..grid {
        for j in 0..grid {
            let m = at(i, j);
            if m < 0.5 {
                continue;
            }
            let is_max =
                (0..3).all(|di| (0..3).all(|dj| (di == 1 && dj == 1) || m >= at(i + grid - 1 + di, j + grid - 1 + dj)));
            if is_max {
                seeds.push((coord(i, j), m));
            }
        }
    }
    let mut found: Vec<CriticalPoint> = Vec::new();
    let mut failed_near_ridge = None;
    for ((s0, t0), m0) in seeds {
        let (s, t, res) = refine(f, s0, t0);
        let (s, t) = (wrap(s, os, ps), wrap(t, ot, pt));
        let w = f.base(s, t);
        let on_ridge = -w.norm().ln() < RIDGE_TOL;
        if res > GRAD_TOL || !on_ridge {
            if m0 > 1.0 - 1e-3 && failed_near_ridge.is_none() {
                failed_near_ridge = Some((s0, t0, res));
            }
            continue;
        }
        if found.iter().any(|c| gap(c.s, s, ps) < 1e-6 && gap(c.t, t, pt) < 1e-6) {
            continue;
        }
        let j = jet(f, s, t);
        let (_, hessian) = phase_derivatives(&j);
        let eigenvalues = eigenvalues_2x2(&hessian);
        for e in &eigenvalues {
            if e.norm() < EIG_TOL {
                return Err(Error::DegenerateHessian { s, t, eigenvalue: e.norm() });
            }
        }
        let phase = Complex64::new(w.arg(), -w.norm().ln());
        found.push(CriticalPoint {
            s,
            t,
            phase,
            base: w,
            amplitude: f.amplitude(s, t),
            hessian,
            eigenvalues,
            args: [principal_arg(eigenvalues[0]), principal_arg(eigenvalues[1])],
            gradient_norm: res,
        });
    }
    if found.is_empty() {
        if let Some((s, t, residual)) = failed_near_ridge {
            return Err(Error::NewtonDivergence { s, t, residual });
        }
    }
    found.sort_by(|a, b| a.s.total_cmp(&b.s).then(a.t.total_cmp(&b.t)));
    Ok(found)
}

/// `(2pi/k) f e^{ikS} / sqrt|det H| * e^{i sum (pi/4 - alpha_j/2)}` at one point.
pub fn csp_contribution(k: u32, p: &CriticalPoint) -> Complex64 {
    let h = &p.hessian;
    let det = (h[0][0] * h[1][1] - h[0][1] * h[1][0]).norm();
    let phase = p.args.iter().map(|a| PI / 4.0 - a / 2.0).sum::<f64>();
    let wk = Complex64::from_polar(p.base.norm().powi(k as i32), k as f64 * p.base.arg());
    p.amplitude * wk * Complex64::from_polar(TWO_PI / k as f64 / det.sqrt(), phase)
}

pub fn csp_leading_term(k: u32, points: &[CriticalPoint]) -> Complex64 {
    points.iter().map(|p| csp_contribution(k, p)).sum()
}

/// The real-phase form with the signature factor `e^{i pi sigma / 4}`;
/// only meaningful when `S` is real near the point.
pub fn real_phase_contribution(k: u32, p: &CriticalPoint) -> Complex64 {
    let h = &p.hessian;
    let det = (h[0][0] * h[1][1] - h[0][1] * h[1][0]).norm();
    let signature: i32 = p.eigenvalues.iter().map(|e| if e.re > 0.0 { 1 } else { -1 }).sum();
    let wk = Complex64::from_polar(p.base.norm().powi(k as i32), k as f64 * p.base.arg());
    p.amplitude * wk * Complex64::from_polar(TWO_PI / k as f64 / det.sqrt(), PI * signature as f64 / 4.0)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct OracleValue {
    pub value: Complex64,
    /// `sum |f w^k|` times the cell area, the scale of the integrand.
    pub l1: f64,
    pub nodes: usize,
    pub change: f64,
}

fn trapezoid_2d<I: TorusIntegrand + ?Sized>(f: &I, k: u32, n: usize) -> (Complex64, f64) {
    let (ps, pt) = f.periods();
    let (os, ot) = f.origin();
    let (hs, ht) = (ps / n as f64, pt / n as f64);
    let (v, l1) = (0..n)
        .into_par_iter()
        .map(|i| {
            let s = os + i as f64 * hs;
            let mut acc = Complex64::new(0.0, 0.0);
            let mut mag = 0.0;
            for j in 0..n {
                let t = ot + j as f64 * ht;
                let term = f.amplitude(s, t) * f.base(s, t).powu(k);
                acc += term;
                mag += term.norm();
            }
            (acc, mag)
        })
        .reduce(|| (Complex64::new(0.0, 0.0), 0.0), |a, b| (a.0 + b.0, a.1 + b.1));
    (v * (hs * ht), l1 * hs * ht)
}

/// Tensor-product trapezoid of `f w^k`, doubling from `nodes` per direction
/// until successive values differ by less than `1e-9` times the L1 scale.
pub fn quadrature_oracle<I: TorusIntegrand + ?Sized>(
    f: &I,
    k: u32,
    nodes: usize,
    max_nodes: usize,
) -> Result<OracleValue> {
    let mut n = nodes.max(8);
    let (mut prev, _) = trapezoid_2d(f, k, n);
    loop {
        let next_n = 2 * n;
        if next_n > max_nodes {
            return Err(Error::QuadratureNonConvergence { nodes: n, defect: f64::NAN });
        }
        let (next, l1) = trapezoid_2d(f, k, next_n);
        let change = (next - prev).norm();
        n = next_n;
        if change <= 1e-9 * l1.max(f64::MIN_POSITIVE) {
            return Ok(OracleValue { value: next, l1, nodes: n, change });
        }
        if 2 * n > max_nodes {
            return Err(Error::QuadratureNonConvergence { nodes: n, defect: change / l1 });
        }
        prev = next;
    }
}
