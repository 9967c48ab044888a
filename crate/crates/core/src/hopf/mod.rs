//! Geometry of the Hopf fibration S^3 -> S^2.
//!
//! A point of S^3 is a unit vector `(q1, q2)` of C^2. It projects to the point
//! of S^2 with `x + i y = 2 q1 conj(q2)` and `z = |q2|^2 - |q1|^2`, so that the
//! section `u(theta, phi) = (sin(theta/2) e^{i phi}, cos(theta/2))` lies over
//! the point with colatitude `theta` and longitude `phi`.

mod intersect;
mod loops;

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use intersect::{
    find_intersections, find_lifted_intersections, is_left_of, lune_area, parallelepiped_volume, winding_number,
    IntersectionDatum,
};
pub use loops::{
    constant_height_loop, holonomy, is_bohr_sommerfeld, parallel_lift, standard_lift, LiftedLoop, Loop, LoopFn,
    LoopKey, LoopKind,
};

pub type Vec3 = [f64; 3];

const UNIT_TOL: f64 = 1e-12;

pub(crate) fn dot(a: Vec3, b: Vec3) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

pub(crate) fn cross(a: Vec3, b: Vec3) -> Vec3 {
    [a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]]
}

pub(crate) fn norm(a: Vec3) -> f64 {
    dot(a, a).sqrt()
}

pub(crate) fn sub(a: Vec3, b: Vec3) -> Vec3 {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}

pub(crate) fn scale(a: Vec3, c: f64) -> Vec3 {
    [a[0] * c, a[1] * c, a[2] * c]
}

pub(crate) fn normalize(a: Vec3) -> Vec3 {
    scale(a, 1.0 / norm(a))
}

pub(crate) fn mat_vec(m: &[[f64; 3]; 3], x: Vec3) -> Vec3 {
    [dot(m[0], x), dot(m[1], x), dot(m[2], x)]
}

/// A point of S^2 in colatitude/longitude coordinates.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpherePoint {
    theta: f64,
    phi: f64,
    xyz: Vec3,
}

impl SpherePoint {
    pub fn new(theta: f64, phi: f64) -> Result<Self> {
        if !(0.0..=PI).contains(&theta) {
            return Err(Error::Domain(format!("colatitude {theta} outside [0, pi]")));
        }
        let phi = phi.rem_euclid(2.0 * PI);
        let (st, ct) = theta.sin_cos();
        Ok(SpherePoint { theta, phi, xyz: [st * phi.cos(), st * phi.sin(), ct] })
    }

    /// Normalizes `x` onto the sphere.
    pub fn from_xyz(x: Vec3) -> Self {
        let xyz = normalize(x);
        let theta = xyz[2].clamp(-1.0, 1.0).acos();
        let phi = xyz[1].atan2(xyz[0]).rem_euclid(2.0 * PI);
        SpherePoint { theta, phi, xyz }
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn phi(&self) -> f64 {
        self.phi
    }

    pub fn xyz(&self) -> Vec3 {
        self.xyz
    }

    /// Great-circle distance (round metric).
    pub fn distance(&self, other: &SpherePoint) -> f64 {
        let c = cross(self.xyz, other.xyz);
        norm(c).atan2(dot(self.xyz, other.xyz))
    }
}

/// A unit vector of C^2.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct HopfPoint {
    q1: Complex64,
    q2: Complex64,
}

impl HopfPoint {
    pub fn new(q1: Complex64, q2: Complex64) -> Result<Self> {
        let p = HopfPoint { q1, q2 };
        p.check_unit()?;
        Ok(p)
    }

    pub fn new_unchecked(q1: Complex64, q2: Complex64) -> Self {
        HopfPoint { q1, q2 }
    }

    pub fn normalized(q1: Complex64, q2: Complex64) -> Self {
        let n = (q1.norm_sqr() + q2.norm_sqr()).sqrt();
        HopfPoint { q1: q1 / n, q2: q2 / n }
    }

    pub fn random<R: Rng + ?Sized>(rng: &mut R) -> Self {
        loop {
            let v: [f64; 4] = std::array::from_fn(|_| rng.gen::<f64>() * 2.0 - 1.0);
            let n2: f64 = v.iter().map(|x| x * x).sum();
            if n2 > 1e-4 && n2 <= 1.0 {
                return Self::normalized(Complex64::new(v[0], v[1]), Complex64::new(v[2], v[3]));
            }
        }
    }

    pub fn components(&self) -> (Complex64, Complex64) {
        (self.q1, self.q2)
    }

    pub fn as_array(&self) -> [Complex64; 2] {
        [self.q1, self.q2]
    }

    pub fn norm_sqr(&self) -> f64 {
        self.q1.norm_sqr() + self.q2.norm_sqr()
    }

    pub fn check_unit(&self) -> Result<()> {
        let n = self.norm_sqr();
        if (n - 1.0).abs() > UNIT_TOL {
            return Err(Error::NotUnit { norm_sq: n });
        }
        Ok(())
    }

    /// `<self, other> = conj(self) . other`.
    pub fn inner(&self, other: &HopfPoint) -> Complex64 {
        self.q1.conj() * other.q1 + self.q2.conj() * other.q2
    }

    pub fn phase_shift(&self, c: Complex64) -> HopfPoint {
        HopfPoint { q1: self.q1 * c, q2: self.q2 * c }
    }

    pub fn project_xyz(&self) -> Vec3 {
        let w = 2.0 * self.q1 * self.q2.conj();
        [w.re, w.im, self.q2.norm_sqr() - self.q1.norm_sqr()]
    }

    pub fn project(&self) -> SpherePoint {
        SpherePoint::from_xyz(self.project_xyz())
    }

    /// Some point of the fibre over `x`, using whichever trivialization is
    /// regular there.
    pub fn lift_of(x: Vec3) -> HopfPoint {
        let p = SpherePoint::from_xyz(x);
        if p.xyz[2] > -0.5 {
            section_u_unchecked(p.theta, p.phi)
        } else {
            section_south(p.theta, p.phi)
        }
    }

    pub fn max_abs_diff(&self, other: &HopfPoint) -> f64 {
        (self.q1 - other.q1).norm().max((self.q2 - other.q2).norm())
    }
}

/// The trivialization `u(theta, phi) = (sin(theta/2) e^{i phi}, cos(theta/2))`
/// over S^2 minus the south pole.
pub fn section_u(theta: f64, phi: f64) -> Result<HopfPoint> {
    if !(0.0..=PI).contains(&theta) {
        return Err(Error::Domain(format!("colatitude {theta} outside [0, pi]")));
    }
    if PI - theta < 1e-12 {
        return Err(Error::SouthPole);
    }
    Ok(section_u_unchecked(theta, phi))
}

pub(crate) fn section_u_unchecked(theta: f64, phi: f64) -> HopfPoint {
    let (s, c) = (theta / 2.0).sin_cos();
    HopfPoint { q1: Complex64::from_polar(s, phi), q2: Complex64::new(c, 0.0) }
}

/// The trivialization `e^{-i phi} u(theta, phi)`, regular at the south pole.
pub fn section_south(theta: f64, phi: f64) -> HopfPoint {
    let (s, c) = (theta / 2.0).sin_cos();
    HopfPoint { q1: Complex64::new(s, 0.0), q2: Complex64::from_polar(c, -phi) }
}

/// The `d phi` coefficient `sin^2(theta/2)` of the connection form on the
/// section `u`.
pub fn connection_coefficient(theta: f64) -> f64 {
    (theta / 2.0).sin().powi(2)
}

/// The connection form on `u` evaluated on a tangent vector of S^2 in R^3
/// coordinates: `(x dy - y dx) / (2 (1 + z))`.
pub(crate) fn connection_form(x: Vec3, dx: Vec3) -> f64 {
    (x[0] * dx[1] - x[1] * dx[0]) / (2.0 * (1.0 + x[2]))
}
