//! Coherent states, the Bergman kernel and coherent loop states.

use std::collections::HashMap;
use std::f64::consts::PI;
use std::sync::{Arc, Mutex};

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hopf::{holonomy, section_south, section_u, HopfPoint, LiftedLoop, LoopKey, SpherePoint};
use crate::special::{HalfInt, LogFactorials};
use crate::su2::{evaluate_section, monomial, RepLevel, RepVector};

const TWO_PI: f64 = 2.0 * PI;
const BS_TOL: f64 = 1e-8;
const QUAD_TOL: f64 = 1e-10;
const MAX_NODES: usize = 1 << 16;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CoherentSpec {
    pub level: RepLevel,
    pub base: HopfPoint,
}

/// `psi_p = sum_a conj(N_a p1^a p2^(k-a)) e_a`.
pub fn coherent_state(spec: &CoherentSpec) -> RepVector {
    let k = spec.level.k();
    let lf = LogFactorials::new(k);
    let (p1, p2) = spec.base.components();
    let coeffs = (0..=k).map(|a| monomial(&lf, k, a, p1, p2).conj()).collect();
    RepVector::new(spec.level, coeffs).expect("dimension matches level")
}

/// `<psi_p, psi_q> = (k+1)/(2 pi) <q, p>^k`.
pub fn coherent_inner(level: RepLevel, p: &HopfPoint, q: &HopfPoint) -> Result<Complex64> {
    p.check_unit()?;
    q.check_unit()?;
    Ok(q.inner(p).powu(level.k()) * ((level.k() + 1) as f64 / TWO_PI))
}

/// `(k+1)/(2 pi) cos^k(d/2)` with `d` the great-circle distance.
pub fn bergman_magnitude(level: RepLevel, x: &SpherePoint, y: &SpherePoint) -> f64 {
    let c = (x.distance(y) / 2.0).cos().max(0.0);
    (level.k() + 1) as f64 / TWO_PI * c.powi(level.k() as i32)
}

/// A coherent loop state with the quadrature data that produced it.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LoopState {
    pub state: RepVector,
    /// Trapezoid nodes used; zero when the pole convention applied.
    pub nodes: usize,
    /// The loop was a point and the coherent state at its lift was returned.
    pub pole_substituted: bool,
}

/// `Psi = int psi_{lift(u)} |dx/du|/sqrt(2) du` over one period, by the
/// trapezoid rule with node doubling.
pub fn loop_state_quadrature(level: RepLevel, lifted: &LiftedLoop) -> Result<LoopState> {
    let k = level.k();
    let base = lifted.base();
    if base.is_degenerate() {
        let state = coherent_state(&CoherentSpec { level, base: lifted.lift(0.0) });
        return Ok(LoopState { state, nodes: 0, pole_substituted: true });
    }
    let defect = (holonomy(base).powu(k) - 1.0).norm();
    if defect > BS_TOL {
        return Err(Error::NotBohrSommerfeld { k, defect });
    }
    let lf = LogFactorials::new(k);
    let dim = level.dim();
    let sample = |n: usize| -> Vec<Complex64> {
        let h = TWO_PI / n as f64;
        (0..n)
            .into_par_iter()
            .map(|i| {
                let u = i as f64 * h;
                let (p1, p2) = lifted.lift(u).components();
                let w = base.speed(u) * h;
                (0..=k).map(|a| monomial(&lf, k, a, p1, p2).conj() * w).collect::<Vec<_>>()
            })
            .reduce(
                || vec![Complex64::new(0.0, 0.0); dim],
                |mut acc, v| {
                    acc.iter_mut().zip(v).for_each(|(a, b)| *a += b);
                    acc
                },
            )
    };
    let mut n = (4 * k as usize).max(64);
    let mut prev = sample(n);
    loop {
        let next = sample(2 * n);
        n *= 2;
        let scale = next.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt().max(1.0);
        let change = prev.iter().zip(&next).map(|(a, b)| (a - b).norm_sqr()).sum::<f64>().sqrt();
        if change <= QUAD_TOL * scale {
            let state = RepVector::new(level, next)?;
            return Ok(LoopState { state, nodes: n, pole_substituted: false });
        }
        if n >= MAX_NODES {
            return Err(Error::QuadratureNonConvergence { nodes: n, defect: change });
        }
        prev = next;
    }
}

/// The literal coefficient `c_a` of the constant-height loop state; zero at
/// the poles.
pub fn constant_height_coefficient(level: RepLevel, m: HalfInt) -> Result<f64> {
    let a = level.index_of(m)? as u32;
    let k = level.k();
    if a == 0 || a == k {
        return Ok(0.0);
    }
    let lf = LogFactorials::new(k);
    let (af, kf) = (a as f64, k as f64);
    // sin^2(theta/2) = a/k, cos^2(theta/2) = (k-a)/k, sin(theta) = 2 sqrt(a(k-a))/k
    let ln_c = 0.5 * (PI.ln() + (kf + 1.0).ln() + lf.ln_binomial(k, a))
        + 0.5 * af * (af / kf).ln()
        + 0.5 * (kf - af) * ((kf - af) / kf).ln()
        + (2.0 * (af * (kf - af)).sqrt() / kf).ln();
    Ok(ln_c.exp())
}

/// `c_a e_a` for the standard lift at height `2m/k`; at the poles the
/// coherent state at `(0, 1)` or `(1, 0)` is returned instead.
pub fn constant_height_state(level: RepLevel, m: HalfInt) -> Result<RepVector> {
    let a = level.index_of(m)?;
    let k = level.k() as usize;
    if a == 0 || a == k {
        let base = if a == 0 { section_u(0.0, 0.0)? } else { section_south(PI, 0.0) };
        return Ok(coherent_state(&CoherentSpec { level, base }));
    }
    let c = constant_height_coefficient(level, m)?;
    Ok(RepVector::basis(level, a)?.scale(Complex64::new(c, 0.0)))
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct FieldSample {
    pub theta: f64,
    pub phi: f64,
    pub norm: f64,
}

/// `|v(x)|` on an `n_theta x n_phi` grid; `theta` includes both poles and
/// `phi` runs over `[0, 2pi)`.
pub fn fibrewise_norm_field(v: &RepVector, n_theta: usize, n_phi: usize) -> Result<Vec<FieldSample>> {
    if n_theta < 2 || n_phi < 2 {
        return Err(Error::Domain(format!("grid {n_theta}x{n_phi} is smaller than 2x2")));
    }
    let rows: Vec<Result<Vec<FieldSample>>> = (0..n_theta)
        .into_par_iter()
        .map(|i| {
            let theta = PI * i as f64 / (n_theta - 1) as f64;
            (0..n_phi)
                .map(|j| {
                    let phi = TWO_PI * j as f64 / n_phi as f64;
                    let p = if i + 1 == n_theta { section_south(theta, phi) } else { section_u(theta, phi)? };
                    Ok(FieldSample { theta, phi, norm: evaluate_section(v, p)?.norm() })
                })
                .collect()
        })
        .collect();
    let mut out = Vec::with_capacity(n_theta * n_phi);
    for r in rows {
        out.extend(r?);
    }
    Ok(out)
}

type CacheKey = (u32, LoopKey, [u64; 4]);

/// Loop states keyed by level, loop identity and starting lift point.
#[derive(Default)]
pub struct LoopStateCache {
    map: Mutex<HashMap<CacheKey, Arc<LoopState>>>,
}

impl LoopStateCache {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn get_or_compute(&self, level: RepLevel, lifted: &LiftedLoop) -> Result<Arc<LoopState>> {
        let (q1, q2) = lifted.lift(0.0).components();
        let start = [q1.re.to_bits(), q1.im.to_bits(), q2.re.to_bits(), q2.im.to_bits()];
        let key = (level.k(), lifted.base().cache_key(), start);
        if let Some(hit) = self.map.lock().expect("cache lock").get(&key) {
            return Ok(hit.clone());
        }
        let state = Arc::new(loop_state_quadrature(level, lifted)?);
        self.map.lock().expect("cache lock").insert(key, state.clone());
        Ok(state)
    }

    pub fn len(&self) -> usize {
        self.map.lock().expect("cache lock").len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// Double trapezoid of `coherent_inner` over the parameter torus, weighted by
/// both speeds, with `n` nodes per direction.
pub fn loop_pair_inner_by_double_quadrature(level: RepLevel, g: &LiftedLoop, s: &LiftedLoop, n: usize) -> Complex64 {
    let nodes = |l: &LiftedLoop| -> Vec<(HopfPoint, f64)> {
        (0..n).map(|i| TWO_PI * i as f64 / n as f64).map(|u| (l.lift(u), l.base().speed(u))).collect()
    };
    let (gs, ss) = (nodes(g), nodes(s));
    let h = TWO_PI / n as f64;
    let total: Complex64 = gs
        .par_iter()
        .map(|(p, v)| ss.iter().map(|(q, w)| q.inner(p).powu(level.k()) * (v * w)).sum::<Complex64>())
        .sum();
    total * ((level.k() + 1) as f64 / TWO_PI * h * h)
}
