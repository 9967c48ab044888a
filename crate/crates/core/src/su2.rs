//! The spin-k/2 irreducible representation of SU(2), realized on homogeneous
//! polynomials of degree k in two variables.
//!
//! Vectors are stored by their coordinates in the orthonormal basis
//! `e_a = sqrt((k+1)/(2 pi) C(k,a)) Q1^a Q2^(k-a)`, `a = 0..=k`. The basis
//! vector `e_a` carries the J_z weight `m = k/2 - a`.

use std::f64::consts::PI;
use std::ops::{Add, Mul, Sub};

use num_complex::Complex64;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hopf::HopfPoint;
use crate::special::{weight_to_index, HalfInt, LogFactorials};

const SU2_TOL: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct RepLevel(u32);

impl RepLevel {
    pub const fn new(k: u32) -> Self {
        RepLevel(k)
    }

    pub const fn k(self) -> u32 {
        self.0
    }

    pub const fn dim(self) -> usize {
        self.0 as usize + 1
    }

    /// The spin j = k/2.
    pub fn spin(self) -> f64 {
        self.0 as f64 / 2.0
    }

    pub fn index_of(self, m: HalfInt) -> Result<usize> {
        weight_to_index(self.0, m)
    }
}

/// The normalization `sqrt((k+1)/(2 pi) C(k,a))` of the basis vector `e_a`.
pub fn basis_norm_coeff(level: RepLevel, a: i64) -> Result<f64> {
    let k = level.k();
    if a < 0 || a > k as i64 {
        return Err(Error::IndexOutOfRange { k, index: a });
    }
    let lf = LogFactorials::new(k);
    Ok(ln_basis_norm(&lf, k, a as u32).exp())
}

pub(crate) fn ln_basis_norm(lf: &LogFactorials, k: u32, a: u32) -> f64 {
    0.5 * (((k + 1) as f64).ln() - (2.0 * PI).ln() + lf.ln_binomial(k, a))
}

/// An element of SU(2), acting on C^2 by matrix multiplication.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Su2Element {
    m: [[Complex64; 2]; 2],
}

impl Su2Element {
    pub fn new(m: [[Complex64; 2]; 2]) -> Result<Self> {
        let g = Su2Element { m };
        let (unitarity, determinant) = g.defects();
        if unitarity > SU2_TOL || determinant > SU2_TOL {
            return Err(Error::NotSpecialUnitary { unitarity, determinant });
        }
        Ok(g)
    }

    /// Builds `[[a, b], [-conj(b), conj(a)]]` after normalizing `(a, b)`.
    pub fn from_cayley_klein(a: Complex64, b: Complex64) -> Self {
        let n = (a.norm_sqr() + b.norm_sqr()).sqrt();
        let (a, b) = (a / n, b / n);
        Su2Element { m: [[a, b], [-b.conj(), a.conj()]] }
    }

    pub fn identity() -> Self {
        let one = Complex64::new(1.0, 0.0);
        let zero = Complex64::new(0.0, 0.0);
        Su2Element { m: [[one, zero], [zero, one]] }
    }

    /// `U_z(angle) = diag(e^{i angle/2}, e^{-i angle/2})`, covering the
    /// counterclockwise rotation by `angle` about the z-axis.
    pub fn uz(angle: f64) -> Self {
        let zero = Complex64::new(0.0, 0.0);
        Su2Element {
            m: [[Complex64::from_polar(1.0, angle / 2.0), zero], [zero, Complex64::from_polar(1.0, -angle / 2.0)]],
        }
    }

    /// `U_y(angle) = [[cos(angle/2), sin(angle/2)], [-sin(angle/2), cos(angle/2)]]`,
    /// covering the counterclockwise rotation by `angle` about the y-axis.
    pub fn uy(angle: f64) -> Self {
        let (s, c) = (angle / 2.0).sin_cos();
        Su2Element {
            m: [[Complex64::new(c, 0.0), Complex64::new(s, 0.0)], [Complex64::new(-s, 0.0), Complex64::new(c, 0.0)]],
        }
    }

    /// The lift of the rotation by `angle` about the unit axis `n`
    /// (right-hand rule, active).
    pub fn from_axis_angle(n: [f64; 3], angle: f64) -> Self {
        let norm = (n[0] * n[0] + n[1] * n[1] + n[2] * n[2]).sqrt();
        let (nx, ny, nz) = (n[0] / norm, n[1] / norm, n[2] / norm);
        let (s, c) = (angle / 2.0).sin_cos();
        // exp((angle/2) i (-nx sx + ny sy + nz sz)); the sign on sx comes from
        // the orientation of the Hopf map x + iy = 2 q1 conj(q2).
        let a = Complex64::new(c, s * nz);
        let b = Complex64::new(s * ny, -s * nx);
        Su2Element { m: [[a, b], [-b.conj(), a.conj()]] }
    }

    /// A Haar-random element.
    pub fn random<R: Rng + ?Sized>(rng: &mut R) -> Self {
        loop {
            let v: [f64; 4] = [
                rng.gen::<f64>() * 2.0 - 1.0,
                rng.gen::<f64>() * 2.0 - 1.0,
                rng.gen::<f64>() * 2.0 - 1.0,
                rng.gen::<f64>() * 2.0 - 1.0,
            ];
            let n2: f64 = v.iter().map(|x| x * x).sum();
            if n2 > 1e-4 && n2 <= 1.0 {
                return Su2Element::from_cayley_klein(Complex64::new(v[0], v[1]), Complex64::new(v[2], v[3]));
            }
        }
    }

    pub fn entries(&self) -> [[Complex64; 2]; 2] {
        self.m
    }

    pub fn entry(&self, row: usize, col: usize) -> Complex64 {
        self.m[row][col]
    }

    /// (max |U U^dagger - I|, |det U - 1|)
    pub fn defects(&self) -> (f64, f64) {
        let m = &self.m;
        let mut unitarity: f64 = 0.0;
        for i in 0..2 {
            for j in 0..2 {
                let acc: Complex64 = m[i].iter().zip(&m[j]).map(|(a, b)| a * b.conj()).sum();
                let target = if i == j { 1.0 } else { 0.0 };
                unitarity = unitarity.max((acc - target).norm());
            }
        }
        let det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
        (unitarity, (det - 1.0).norm())
    }

    pub fn inverse(&self) -> Self {
        let m = &self.m;
        Su2Element { m: [[m[0][0].conj(), m[1][0].conj()], [m[0][1].conj(), m[1][1].conj()]] }
    }

    pub fn apply(&self, p: HopfPoint) -> HopfPoint {
        let (q1, q2) = p.components();
        HopfPoint::new_unchecked(self.m[0][0] * q1 + self.m[0][1] * q2, self.m[1][0] * q1 + self.m[1][1] * q2)
    }

    /// Applies the matrix to an arbitrary vector of C^2.
    pub fn apply_vec(&self, v: [Complex64; 2]) -> [Complex64; 2] {
        [self.m[0][0] * v[0] + self.m[0][1] * v[1], self.m[1][0] * v[0] + self.m[1][1] * v[1]]
    }

    /// The SO(3) rotation covered by this element, acting on the Hopf base.
    pub fn rotation_matrix(&self) -> [[f64; 3]; 3] {
        let mut r = [[0.0; 3]; 3];
        // The Hopf map is quadratic; polarize on the standard lifts of the axes.
        let axes = [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]];
        for (col, axis) in axes.iter().enumerate() {
            let img = self.apply(HopfPoint::lift_of(*axis)).project_xyz();
            for row in 0..3 {
                r[row][col] = img[row];
            }
        }
        r
    }

    pub fn rotate(&self, x: [f64; 3]) -> [f64; 3] {
        let r = self.rotation_matrix();
        [
            r[0][0] * x[0] + r[0][1] * x[1] + r[0][2] * x[2],
            r[1][0] * x[0] + r[1][1] * x[1] + r[1][2] * x[2],
            r[2][0] * x[0] + r[2][1] * x[1] + r[2][2] * x[2],
        ]
    }

    pub fn max_abs_diff(&self, other: &Su2Element) -> f64 {
        let mut d: f64 = 0.0;
        for i in 0..2 {
            for j in 0..2 {
                d = d.max((self.m[i][j] - other.m[i][j]).norm());
            }
        }
        d
    }
}

impl Mul for Su2Element {
    type Output = Su2Element;
    fn mul(self, rhs: Su2Element) -> Su2Element {
        let (a, b) = (&self.m, &rhs.m);
        let mut m = [[Complex64::new(0.0, 0.0); 2]; 2];
        for i in 0..2 {
            for j in 0..2 {
                m[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
            }
        }
        Su2Element { m }
    }
}

/// A vector of V_k in the orthonormal basis `e_a`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RepVector {
    level: RepLevel,
    coeffs: Vec<Complex64>,
}

impl RepVector {
    pub fn new(level: RepLevel, coeffs: Vec<Complex64>) -> Result<Self> {
        if coeffs.len() != level.dim() {
            return Err(Error::Domain(format!(
                "expected {} coefficients at level {}, got {}",
                level.dim(),
                level.k(),
                coeffs.len()
            )));
        }
        Ok(RepVector { level, coeffs })
    }

    pub fn zeros(level: RepLevel) -> Self {
        RepVector { level, coeffs: vec![Complex64::new(0.0, 0.0); level.dim()] }
    }

    /// The basis vector `e_a`.
    pub fn basis(level: RepLevel, a: usize) -> Result<Self> {
        if a > level.k() as usize {
            return Err(Error::IndexOutOfRange { k: level.k(), index: a as i64 });
        }
        let mut v = Self::zeros(level);
        v.coeffs[a] = Complex64::new(1.0, 0.0);
        Ok(v)
    }

    /// A random vector with independent standard complex Gaussian-ish entries.
    pub fn random<R: Rng + ?Sized>(level: RepLevel, rng: &mut R) -> Self {
        let coeffs = (0..level.dim())
            .map(|_| Complex64::new(rng.gen::<f64>() * 2.0 - 1.0, rng.gen::<f64>() * 2.0 - 1.0))
            .collect();
        RepVector { level, coeffs }
    }

    pub fn level(&self) -> RepLevel {
        self.level
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn coeff(&self, a: usize) -> Complex64 {
        self.coeffs[a]
    }

    pub fn norm(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn scale(&self, c: Complex64) -> RepVector {
        RepVector { level: self.level, coeffs: self.coeffs.iter().map(|x| x * c).collect() }
    }

    pub fn normalized(&self) -> RepVector {
        self.scale(Complex64::new(1.0 / self.norm(), 0.0))
    }

    /// Largest coefficient-wise distance; levels must agree.
    pub fn max_abs_diff(&self, other: &RepVector) -> f64 {
        assert_eq!(self.level, other.level, "level mismatch");
        self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max)
    }

    /// Euclidean distance; levels must agree.
    pub fn distance(&self, other: &RepVector) -> f64 {
        assert_eq!(self.level, other.level, "level mismatch");
        self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| (a - b).norm_sqr()).sum::<f64>().sqrt()
    }
}

impl Add for &RepVector {
    type Output = RepVector;
    fn add(self, rhs: &RepVector) -> RepVector {
        assert_eq!(self.level, rhs.level, "level mismatch");
        RepVector { level: self.level, coeffs: self.coeffs.iter().zip(&rhs.coeffs).map(|(a, b)| a + b).collect() }
    }
}

impl Sub for &RepVector {
    type Output = RepVector;
    fn sub(self, rhs: &RepVector) -> RepVector {
        assert_eq!(self.level, rhs.level, "level mismatch");
        RepVector { level: self.level, coeffs: self.coeffs.iter().zip(&rhs.coeffs).map(|(a, b)| a - b).collect() }
    }
}

/// `<v, w> = sum conj(v_a) w_a`, antilinear in the first slot.
pub fn rep_inner(v: &RepVector, w: &RepVector) -> Result<Complex64> {
    if v.level != w.level {
        return Err(Error::LevelMismatch { left: v.level.k(), right: w.level.k() });
    }
    Ok(v.coeffs.iter().zip(&w.coeffs).map(|(a, b)| a.conj() * b).sum())
}

/// Evaluates the section `v` at `p`, i.e. the homogeneous polynomial
/// `sum_a v_a N_a p1^a p2^(k-a)`.
pub fn evaluate_section(v: &RepVector, p: HopfPoint) -> Result<Complex64> {
    p.check_unit()?;
    let k = v.level.k();
    let lf = LogFactorials::new(k);
    let (p1, p2) = p.components();
    Ok(v.coeffs
        .iter()
        .enumerate()
        .filter(|(_, c)| c.norm_sqr() > 0.0)
        .map(|(a, c)| c * monomial(&lf, k, a as u32, p1, p2))
        .sum())
}

/// `N_a p1^a p2^(k-a)`, evaluated in log space.
pub(crate) fn monomial(lf: &LogFactorials, k: u32, a: u32, p1: Complex64, p2: Complex64) -> Complex64 {
    let (r1, t1) = p1.to_polar();
    let (r2, t2) = p2.to_polar();
    let b = k - a;
    if (a > 0 && r1 == 0.0) || (b > 0 && r2 == 0.0) {
        return Complex64::new(0.0, 0.0);
    }
    let mut ln_mag = ln_basis_norm(lf, k, a);
    if a > 0 {
        ln_mag += a as f64 * r1.ln();
    }
    if b > 0 {
        ln_mag += b as f64 * r2.ln();
    }
    Complex64::from_polar(ln_mag.exp(), a as f64 * t1 + b as f64 * t2)
}

/// The matrix of an SU(2) element acting on V_k, in the basis `e_a`.
///
/// The action `(g s)[p] = s[g^{-1} p]` is the k-th symmetric power of
/// `conj(g)` on the monomials. The matrix is built one polynomial degree at a
/// time, which keeps every step a contraction of unitaries.
#[derive(Clone, Debug, PartialEq)]
pub struct RepMatrix {
    level: RepLevel,
    data: Vec<Complex64>,
}

impl RepMatrix {
    pub fn level(&self) -> RepLevel {
        self.level
    }

    /// Entry `<e_row, g e_col>`.
    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.data[row * self.level.dim() + col]
    }

    pub fn apply(&self, v: &RepVector) -> Result<RepVector> {
        if v.level != self.level {
            return Err(Error::LevelMismatch { left: self.level.k(), right: v.level.k() });
        }
        let n = self.level.dim();
        let coeffs = (0..n)
            .map(|row| self.data[row * n..(row + 1) * n].iter().zip(&v.coeffs).map(|(m, c)| m * c).sum())
            .collect();
        Ok(RepVector { level: self.level, coeffs })
    }

    pub fn matmul(&self, other: &RepMatrix) -> RepMatrix {
        assert_eq!(self.level, other.level, "level mismatch");
        let n = self.level.dim();
        let mut data = vec![Complex64::new(0.0, 0.0); n * n];
        for i in 0..n {
            for l in 0..n {
                let a = self.data[i * n + l];
                if a.norm_sqr() == 0.0 {
                    continue;
                }
                for j in 0..n {
                    data[i * n + j] += a * other.data[l * n + j];
                }
            }
        }
        RepMatrix { level: self.level, data }
    }

    pub fn max_abs_diff(&self, other: &RepMatrix) -> f64 {
        self.data.iter().zip(&other.data).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max)
    }
}

pub fn rep_matrix(g: &Su2Element, level: RepLevel) -> RepMatrix {
    let m = g.entries();
    // Level-one matrix in the index a (a = 1 <-> Q1, a = 0 <-> Q2):
    // entry [a'][a] = conj(g)[row(a')][row(a)] with row(1) = 0, row(0) = 1.
    let row = |a: usize| 1 - a;
    let d1 = |ap: usize, a: usize| m[row(ap)][row(a)].conj();

    let mut cur = vec![Complex64::new(1.0, 0.0)];
    for n in 1..=level.k() as usize {
        let dim = n + 1;
        let prev = n;
        let mut next = vec![Complex64::new(0.0, 0.0); dim * dim];
        let nf = n as f64;
        // |S_a^n> = sqrt(a/n) |S_{a-1}^{n-1}>|1> + sqrt((n-a)/n) |S_a^{n-1}>|0>
        let split = |a: usize| {
            let mut parts: [(usize, usize, f64); 2] = [(0, 0, 0.0); 2];
            let mut len = 0;
            if a >= 1 {
                parts[len] = (a - 1, 1, (a as f64 / nf).sqrt());
                len += 1;
            }
            if a < n {
                parts[len] = (a, 0, ((n - a) as f64 / nf).sqrt());
                len += 1;
            }
            (parts, len)
        };
        for b in 0..dim {
            let (pb, lb) = split(b);
            for a in 0..dim {
                let (pa, la) = split(a);
                let mut acc = Complex64::new(0.0, 0.0);
                for &(bp, l, wb) in &pb[..lb] {
                    for &(ap, i, wa) in &pa[..la] {
                        acc += cur[bp * prev + ap] * d1(l, i) * (wb * wa);
                    }
                }
                next[b * dim + a] = acc;
            }
        }
        cur = next;
    }
    RepMatrix { level, data: cur }
}

/// `g . v`, the action `(g s)[p] = s[g^{-1} p]`.
pub fn act(g: &Su2Element, v: &RepVector) -> Result<RepVector> {
    let (u, d) = g.defects();
    if u > SU2_TOL * 100.0 || d > SU2_TOL * 100.0 {
        return Err(Error::NotSpecialUnitary { unitarity: u, determinant: d });
    }
    rep_matrix(g, v.level).apply(v)
}

/// `J_z e_a = (k/2 - a) e_a`.
pub fn jz_apply(v: &RepVector) -> RepVector {
    let k = v.level.k() as f64;
    let coeffs = v.coeffs.iter().enumerate().map(|(a, c)| c * (k / 2.0 - a as f64)).collect();
    RepVector { level: v.level, coeffs }
}

/// The small d-matrix `d^j_{m2 m1}(beta) = <j m2| U_y(beta) |j m1>`, j = k/2.
pub fn wigner_d_exact(level: RepLevel, m2: HalfInt, m1: HalfInt, beta: f64) -> Result<f64> {
    let row = level.index_of(m2)?;
    let col = level.index_of(m1)?;
    let mat = rep_matrix(&Su2Element::uy(beta), level);
    real_part_checked(mat.get(row, col))
}

/// The whole small d-matrix at `beta`, entry `[a2][a1]`, real.
pub fn wigner_d_matrix(level: RepLevel, beta: f64) -> Result<Vec<Vec<f64>>> {
    let mat = rep_matrix(&Su2Element::uy(beta), level);
    let n = level.dim();
    (0..n).map(|r| (0..n).map(|c| real_part_checked(mat.get(r, c))).collect()).collect()
}

fn real_part_checked(z: Complex64) -> Result<f64> {
    if z.im.abs() >= 1e-10 {
        return Err(Error::Domain(format!("d-matrix entry has imaginary part {}", z.im)));
    }
    Ok(z.re)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn basis_norm_examples() {
        let v = basis_norm_coeff(RepLevel::new(0), 0).unwrap();
        assert!((v - (1.0 / (2.0 * PI)).sqrt()).abs() < 1e-15);
        assert!((v - 0.39894).abs() < 1e-5);
        let v = basis_norm_coeff(RepLevel::new(2), 1).unwrap();
        assert!((v - (3.0 / PI).sqrt()).abs() < 1e-14);
        let l = RepLevel::new(50);
        let (x, y) = (basis_norm_coeff(l, 11).unwrap(), basis_norm_coeff(l, 39).unwrap());
        assert!((x - y).abs() <= 1e-14 * x);
        assert!(basis_norm_coeff(l, 51).is_err());
        assert!(basis_norm_coeff(l, -1).is_err());
    }

    #[test]
    fn evaluate_basis_vectors() {
        let north = HopfPoint::new(c(0.0, 0.0), c(1.0, 0.0)).unwrap();
        let e0 = RepVector::basis(RepLevel::new(1), 0).unwrap();
        let val = evaluate_section(&e0, north).unwrap();
        assert!((val - (1.0 / PI).sqrt()).norm() < 1e-15);
        let ek = RepVector::basis(RepLevel::new(7), 7).unwrap();
        assert_eq!(evaluate_section(&ek, north).unwrap(), c(0.0, 0.0));
        let bad = HopfPoint::new_unchecked(c(1.0, 0.0), c(1.0, 0.0));
        assert!(evaluate_section(&e0, bad).is_err());
    }

    #[test]
    fn evaluation_is_homogeneous() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let level = RepLevel::new(9);
        let v = RepVector::random(level, &mut rng);
        let p = HopfPoint::random(&mut rng);
        let theta = 0.77;
        let phase = Complex64::from_polar(1.0, theta);
        let (p1, p2) = p.components();
        let rotated = HopfPoint::new(phase * p1, phase * p2).unwrap();
        let lhs = evaluate_section(&v, rotated).unwrap();
        let rhs = Complex64::from_polar(1.0, 9.0 * theta) * evaluate_section(&v, p).unwrap();
        assert!((lhs - rhs).norm() < 1e-12);
    }

    #[test]
    fn inner_product_examples() {
        let l = RepLevel::new(3);
        for a in 0..4 {
            for b in 0..4 {
                let ip = rep_inner(&RepVector::basis(l, a).unwrap(), &RepVector::basis(l, b).unwrap()).unwrap();
                assert_eq!(ip, c(if a == b { 1.0 } else { 0.0 }, 0.0));
            }
        }
        let v = RepVector::new(RepLevel::new(1), vec![c(3.0, 0.0), c(0.0, 4.0)]).unwrap();
        assert_eq!(rep_inner(&v, &v).unwrap(), c(25.0, 0.0));
        let w = RepVector::new(RepLevel::new(1), vec![c(1.0, 2.0), c(-0.5, 0.25)]).unwrap();
        let lhs = rep_inner(&v.scale(c(0.0, 1.0)), &w).unwrap();
        assert!((lhs - c(0.0, -1.0) * rep_inner(&v, &w).unwrap()).norm() < 1e-15);
        assert!(matches!(rep_inner(&v, &RepVector::zeros(RepLevel::new(2))), Err(Error::LevelMismatch { .. })));
    }

    #[test]
    fn uz_acts_diagonally() {
        let l = RepLevel::new(6);
        let dphi = 0.9;
        let g = Su2Element::uz(dphi);
        for a in 0..=6 {
            let out = act(&g, &RepVector::basis(l, a).unwrap()).unwrap();
            let expect = RepVector::basis(l, a).unwrap().scale(Complex64::from_polar(1.0, (3.0 - a as f64) * dphi));
            assert!(out.max_abs_diff(&expect) < 1e-14);
        }
        let v = RepVector::random(l, &mut ChaCha8Rng::seed_from_u64(1));
        assert!(act(&Su2Element::identity(), &v).unwrap().max_abs_diff(&v) < 1e-15);
    }

    #[test]
    fn spin_half_rotation() {
        let beta = 0.81;
        let out = act(&Su2Element::uy(beta), &RepVector::basis(RepLevel::new(1), 0).unwrap()).unwrap();
        assert!((out.coeff(0) - (beta / 2.0).cos()).norm() < 1e-15);
        let d = wigner_d_exact(RepLevel::new(1), HalfInt::from_twice(1), HalfInt::from_twice(1), beta).unwrap();
        assert!((d - (beta / 2.0).cos()).abs() < 1e-15);
    }

    #[test]
    fn non_unitary_rejected() {
        let m = [[c(1.0, 0.0), c(0.1, 0.0)], [c(0.0, 0.0), c(1.0, 0.0)]];
        assert!(Su2Element::new(m).is_err());
        assert!(Su2Element::new(Su2Element::uy(0.3).entries()).is_ok());
    }

    #[test]
    fn jz_examples() {
        let e0 = RepVector::basis(RepLevel::new(50), 0).unwrap();
        assert_eq!(jz_apply(&e0), e0.scale(c(25.0, 0.0)));
        let mid = RepVector::basis(RepLevel::new(50), 25).unwrap();
        assert!(jz_apply(&mid).norm() == 0.0);
    }

    #[test]
    fn wigner_identity_and_errors() {
        let l = RepLevel::new(5);
        for a in 0..=5 {
            let m = crate::special::index_to_weight(5, a);
            assert!((wigner_d_exact(l, m, m, 0.0).unwrap() - 1.0).abs() < 1e-14);
        }
        assert!(wigner_d_exact(l, HalfInt::from_int(1), HalfInt::from_twice(1), 0.3).is_err());
        assert!(wigner_d_exact(l, HalfInt::from_twice(7), HalfInt::from_twice(1), 0.3).is_err());
    }

    #[test]
    fn rotation_matrix_of_uy() {
        let beta = 0.4;
        let r = Su2Element::uy(beta).rotation_matrix();
        let expect = [[beta.cos(), 0.0, beta.sin()], [0.0, 1.0, 0.0], [-beta.sin(), 0.0, beta.cos()]];
        for i in 0..3 {
            for j in 0..3 {
                assert!((r[i][j] - expect[i][j]).abs() < 1e-14, "{i}{j}");
            }
        }
    }

    #[test]
    fn axis_angle_matches_named_rotations() {
        assert!(Su2Element::from_axis_angle([0.0, 1.0, 0.0], 0.7).max_abs_diff(&Su2Element::uy(0.7)) < 1e-15);
        assert!(Su2Element::from_axis_angle([0.0, 0.0, 1.0], 0.7).max_abs_diff(&Su2Element::uz(0.7)) < 1e-15);
        let r = Su2Element::from_axis_angle([1.0, 0.0, 0.0], PI / 2.0).rotate([0.0, 1.0, 0.0]);
        assert!((r[2] - 1.0).abs() < 1e-14);
    }
}
