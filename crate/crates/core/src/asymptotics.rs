//! Closed-form semiclassical formulas: intersection sums for inner products
//! of loop states, the symmetric two-point cosine law, loop-state norms and
//! the small d-matrix asymptotics.

use std::f64::consts::{FRAC_PI_4, PI, SQRT_2};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hopf::{
    constant_height_loop, find_intersections, find_lifted_intersections, lune_area, parallelepiped_volume,
    standard_lift, IntersectionDatum, Loop,
};
use crate::special::HalfInt;
use crate::su2::{RepLevel, Su2Element};

const BOUNDARY_V: f64 = 1e-6;
const ANGLE_MATCH: f64 = 1e-8;

/// `sqrt(2) sum_x omega_x^k e^{i or_x (theta_x/2 - pi/4)} / sqrt(sin theta_x)`.
///
/// An empty list gives zero: there is no classical contribution.
pub fn bpu_inner_product_asym(k: u32, xs: &[IntersectionDatum]) -> Result<Complex64> {
    let mut total = Complex64::new(0.0, 0.0);
    for x in xs {
        let omega = x.relative_phase.ok_or_else(|| Error::Domain("intersection lacks a relative phase".into()))?;
        let or = x.orientation as f64;
        total += omega.powu(k) * Complex64::from_polar(1.0 / x.angle.sin().sqrt(), or * (x.angle / 2.0 - FRAC_PI_4));
    }
    Ok(total * SQRT_2)
}

/// `sqrt(8 / sin nu) cos(kA/4 + nu/2 - pi/4)`.
pub fn symmetric_cosine_asym(k: u32, area: f64, nu: f64) -> f64 {
    (8.0 / nu.sin()).sqrt() * (k as f64 * area / 4.0 + nu / 2.0 - FRAC_PI_4).cos()
}

/// `symmetric_cosine_asym` after checking that both intersections share the
/// same angle; returns the common angle with the value.
pub fn symmetric_cosine_checked(k: u32, area: f64, xs: &[IntersectionDatum]) -> Result<(f64, f64)> {
    if xs.len() != 2 {
        return Err(Error::IntersectionCount { expected: 2, found: xs.len() });
    }
    let (a, b) = (xs[0].angle, xs[1].angle);
    if (a - b).abs() > ANGLE_MATCH {
        return Err(Error::UnequalAngles { first: a, second: b });
    }
    let nu = 0.5 * (a + b);
    Ok((symmetric_cosine_asym(k, area, nu), nu))
}

/// `<Psi, Psi> ~ sqrt(k/pi) T` with `T = 2pi sin(theta)/sqrt(2)`.
pub fn loop_state_norm_asym(k: u32, theta: f64) -> Result<f64> {
    let s = theta.sin();
    if s < 1e-12 || !(0.0..=PI).contains(&theta) {
        return Err(Error::DegenerateLoop);
    }
    Ok((k as f64 / PI).sqrt() * 2.0 * PI * s / SQRT_2)
}

/// `d^{k/2}_{00}(beta) ~ 2 / sqrt(pi k sin beta) cos((k+1) beta/2 - pi/4)`.
pub fn wigner_d00_asym(k: u32, beta: f64) -> Result<f64> {
    if !k.is_multiple_of(2) || k == 0 {
        return Err(Error::Domain(format!("k = {k} must be positive and even")));
    }
    let s = beta.sin();
    if s < 1e-12 || !(0.0..PI).contains(&beta) {
        return Err(Error::Domain(format!("beta = {beta} is singular")));
    }
    let kf = k as f64;
    Ok(2.0 / (PI * kf * s).sqrt() * ((kf + 1.0) * beta / 2.0 - FRAC_PI_4).cos())
}

/// `gamma` is the loop of weight `m2`, `sigma = R_y(beta)` applied to the loop
/// of weight `m1`, matching `d^j_{m2 m1}(beta) = <m2| U_y(beta) |m1>`.
pub fn wigner_loops(level: RepLevel, m1: HalfInt, m2: HalfInt, beta: f64) -> Result<(Loop, Loop)> {
    let gamma = constant_height_loop(level.k(), m2)?;
    let sigma = constant_height_loop(level.k(), m1)?.rotated(&Su2Element::uy(beta));
    Ok((gamma, sigma))
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Allowed {
    pub allowed: bool,
    /// Smallest `|V|` over the intersections; zero when forbidden.
    pub margin: f64,
}

/// Whether the two loops meet transversely at `beta`.
pub fn classically_allowed(level: RepLevel, m1: HalfInt, m2: HalfInt, beta: f64) -> Result<Allowed> {
    let (gamma, sigma) = wigner_loops(level, m1, m2, beta)?;
    let xs = match find_intersections(&gamma, &sigma) {
        Ok(xs) => xs,
        Err(Error::NonTransverse { .. }) | Err(Error::NewtonDivergence { .. }) => Vec::new(),
        Err(e) => return Err(e),
    };
    if xs.is_empty() {
        return Ok(Allowed { allowed: false, margin: 0.0 });
    }
    let margin = xs.iter().map(|x| parallelepiped_volume(beta, &x.point).abs()).fold(f64::INFINITY, f64::min);
    Ok(Allowed { allowed: true, margin })
}

/// The allowed window `(|th1 - th2|, min(th1 + th2, 2pi - th1 - th2))`
/// in `beta`, from the colatitudes of the two loops.
pub fn allowed_window(level: RepLevel, m1: HalfInt, m2: HalfInt) -> Result<Option<(f64, f64)>> {
    let (g, r) = (constant_height_loop(level.k(), m2)?, constant_height_loop(level.k(), m1)?);
    let (t1, t2) = (g.circle_theta().unwrap_or(0.0), r.circle_theta().unwrap_or(0.0));
    if g.is_degenerate() || r.is_degenerate() {
        return Ok(None);
    }
    let lo = (t1 - t2).abs();
    let hi = (t1 + t2).min(2.0 * PI - t1 - t2);
    Ok(if hi > lo { Some((lo, hi)) } else { None })
}

/// Bisects the intersection predicate between an allowed and a forbidden
/// `beta` down to `tol`, returning the crossing.
pub fn bisect_allowed_boundary(
    level: RepLevel,
    m1: HalfInt,
    m2: HalfInt,
    mut inside: f64,
    mut outside: f64,
    tol: f64,
) -> Result<f64> {
    if !classically_allowed(level, m1, m2, inside)?.allowed || classically_allowed(level, m1, m2, outside)?.allowed {
        return Err(Error::Domain("bisection bracket does not straddle the boundary".into()));
    }
    while (inside - outside).abs() > tol {
        let mid = 0.5 * (inside + outside);
        if classically_allowed(level, m1, m2, mid)?.allowed {
            inside = mid;
        } else {
            outside = mid;
        }
    }
    Ok(0.5 * (inside + outside))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Validity {
    Allowed,
    /// Allowed, but `V` is so small that the amplitude is unreliable.
    Boundary,
    Forbidden,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AsymptoticResult {
    pub validity: Validity,
    /// `sqrt(2/(j pi V)) cos(jA/2 + nu/2 - pi/4)`.
    pub value: Option<f64>,
    /// `sqrt(2/(j pi V))`.
    pub amplitude: Option<f64>,
    /// The symmetric cosine law divided by the two asymptotic norms.
    pub route_value: Option<f64>,
    pub area: Option<f64>,
    pub nu: Option<f64>,
    pub volume: Option<f64>,
    pub omegas: Vec<Complex64>,
    pub orientations: Vec<i8>,
    /// `|omega_p^k - e^{ikA/4}|` at the positively oriented point.
    pub phase_defect: Option<f64>,
    /// `|V - sin th1 sin th2 sin nu|`.
    pub sine_law_defect: Option<f64>,
}

impl AsymptoticResult {
    fn forbidden() -> Self {
        AsymptoticResult {
            validity: Validity::Forbidden,
            value: None,
            amplitude: None,
            route_value: None,
            area: None,
            nu: None,
            volume: None,
            omegas: Vec::new(),
            orientations: Vec::new(),
            phase_defect: None,
            sine_law_defect: None,
        }
    }
}

/// The area approximation to `d^j_{m2 m1}(beta)`.
pub fn wigner_d_asym_ly(level: RepLevel, m1: HalfInt, m2: HalfInt, beta: f64) -> Result<AsymptoticResult> {
    let k = level.k();
    let (gamma, sigma) = wigner_loops(level, m1, m2, beta)?;
    let (gl, sl) = (standard_lift(&gamma), standard_lift(&sigma));
    let xs = match find_lifted_intersections(&gl, &sl) {
        Ok(xs) => xs,
        Err(Error::NonTransverse { .. }) | Err(Error::NewtonDivergence { .. }) => Vec::new(),
        Err(e) => return Err(e),
    };
    if xs.is_empty() {
        return Ok(AsymptoticResult::forbidden());
    }
    let area = lune_area(&gamma, &sigma, &xs)?;
    let (sym, nu) = symmetric_cosine_checked(k, area, &xs)?;
    let volumes: Vec<f64> = xs.iter().map(|x| parallelepiped_volume(beta, &x.point).abs()).collect();
    if (volumes[0] - volumes[1]).abs() > 1e-10 {
        return Err(Error::Domain(format!("volumes differ at the two points: {} vs {}", volumes[0], volumes[1])));
    }
    let volume = 0.5 * (volumes[0] + volumes[1]);
    let (t1, t2) = (gamma.circle_theta().unwrap_or(0.0), sigma.circle_theta().unwrap_or(0.0));
    let sine_law = (volume - t1.sin() * t2.sin() * nu.sin()).abs();

    let j = k as f64 / 2.0;
    let amplitude = (2.0 / (j * PI * volume)).sqrt();
    let value = amplitude * (j * area / 2.0 + nu / 2.0 - FRAC_PI_4).cos();
    let norms = loop_state_norm_asym(k, t1)? * loop_state_norm_asym(k, t2)?;
    let route_value = sym / norms.sqrt();
    if (route_value - value).abs() > 1e-10 * amplitude.max(1.0) {
        return Err(Error::Domain(format!("routes disagree: {value} vs {route_value}")));
    }
    let omegas: Vec<Complex64> = xs.iter().map(|x| x.relative_phase.unwrap_or_default()).collect();
    let positive = xs.iter().position(|x| x.orientation > 0).unwrap_or(0);
    let phase_defect = (omegas[positive].powu(k) - Complex64::from_polar(1.0, k as f64 * area / 4.0)).norm();
    let validity = if volume < BOUNDARY_V { Validity::Boundary } else { Validity::Allowed };
    Ok(AsymptoticResult {
        validity,
        value: Some(value),
        amplitude: Some(amplitude),
        route_value: Some(route_value),
        area: Some(area),
        nu: Some(nu),
        volume: Some(volume),
        omegas,
        orientations: xs.iter().map(|x| x.orientation).collect(),
        phase_defect: Some(phase_defect),
        sine_law_defect: Some(sine_law),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::su2::wigner_d_exact;

    fn h(n: i64) -> HalfInt {
        HalfInt::from_int(n)
    }

    #[test]
    fn single_trivial_intersection() {
        let x = IntersectionDatum {
            s: 0.0,
            t: 0.0,
            point: crate::hopf::SpherePoint::from_xyz([1.0, 0.0, 0.0]),
            angle: PI / 2.0,
            orientation: 1,
            relative_phase: Some(Complex64::new(1.0, 0.0)),
        };
        assert!((bpu_inner_product_asym(9, &[x]).unwrap() - SQRT_2).norm() < 1e-15);
        assert_eq!(bpu_inner_product_asym(9, &[]).unwrap(), Complex64::new(0.0, 0.0));
    }

    #[test]
    fn symmetric_cosine_peak() {
        let (k, nu) = (10, 0.8);
        let area = 4.0 * (FRAC_PI_4 - nu / 2.0) / k as f64;
        assert!((symmetric_cosine_asym(k, area, nu) - (8.0 / nu.sin()).sqrt()).abs() < 1e-12);
    }

    #[test]
    fn norm_asym_examples() {
        assert!((loop_state_norm_asym(30, PI / 2.0).unwrap() - (2.0 * PI * 30.0).sqrt()).abs() < 1e-12);
        assert!((loop_state_norm_asym(30, 0.4).unwrap() - loop_state_norm_asym(30, PI - 0.4).unwrap()).abs() < 1e-12);
        assert!(loop_state_norm_asym(30, 0.0).is_err());
    }

    #[test]
    fn d00_phase_arithmetic() {
        for k in [2u32, 6, 10] {
            let v = wigner_d00_asym(k, PI / 2.0).unwrap();
            let expect = 2.0 / (PI * k as f64).sqrt() * (k as f64 * PI / 4.0).cos();
            assert!((v - expect).abs() < 1e-12);
        }
        assert!(wigner_d00_asym(3, 1.0).is_err() && wigner_d00_asym(4, 0.0).is_err());
    }

    #[test]
    fn reduces_to_d00_for_zero_weights() {
        let level = RepLevel::new(40);
        for beta in [0.5, 1.3, 2.2] {
            let r = wigner_d_asym_ly(level, h(0), h(0), beta).unwrap();
            assert!((r.area.unwrap() - 2.0 * beta).abs() < 1e-10);
            assert!((r.nu.unwrap() - beta).abs() < 1e-12);
            assert!((r.volume.unwrap() - beta.sin()).abs() < 1e-12);
            let d00 = wigner_d00_asym(40, beta).unwrap();
            // the two differ only in the amplitude's use of nu vs beta
            assert!((r.value.unwrap() - d00).abs() < 1e-10, "{} vs {}", r.value.unwrap(), d00);
        }
    }

    #[test]
    fn reference_configuration_is_allowed() {
        let level = RepLevel::new(50);
        let a = classically_allowed(level, h(11), h(22), 1.2).unwrap();
        assert!(a.allowed && a.margin > 0.1);
        assert!(!classically_allowed(level, h(11), h(22), 0.0).unwrap().allowed);
        let (lo, hi) = allowed_window(level, h(11), h(22)).unwrap().unwrap();
        assert!((lo - 0.6203).abs() < 1e-4 && (hi - 1.6101).abs() < 1e-4);
        let b = bisect_allowed_boundary(level, h(11), h(22), 1.0, 0.3, 1e-7).unwrap();
        assert!((b - lo).abs() < 1e-6, "{b} vs {lo}");
    }

    #[test]
    fn reference_configuration_value() {
        let level = RepLevel::new(50);
        let r = wigner_d_asym_ly(level, h(11), h(22), 1.2).unwrap();
        assert_eq!(r.validity, Validity::Allowed);
        assert!(r.phase_defect.unwrap() < 1e-8);
        assert!(r.sine_law_defect.unwrap() < 1e-10);
        let exact = wigner_d_exact(level, h(22), h(11), 1.2).unwrap();
        assert!((r.value.unwrap() - exact).abs() < 0.25 * r.amplitude.unwrap());
        let f = wigner_d_asym_ly(level, h(11), h(22), 0.3).unwrap();
        assert_eq!(f.validity, Validity::Forbidden);
        assert!(f.value.is_none());
    }
}
