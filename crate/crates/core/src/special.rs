//! Small numeric helpers: half-integer weights and log-space binomials.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A half-integer stored as twice its value, so `HalfInt::from_twice(3)` is 3/2.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct HalfInt(i64);

impl HalfInt {
    pub const fn from_twice(twice: i64) -> Self {
        HalfInt(twice)
    }

    pub const fn from_int(n: i64) -> Self {
        HalfInt(2 * n)
    }

    /// Parses a real number that must be an integer or half-integer.
    pub fn from_f64(x: f64) -> Option<Self> {
        let twice = 2.0 * x;
        let r = twice.round();
        if (twice - r).abs() < 1e-9 && r.abs() < 1e15 {
            Some(HalfInt(r as i64))
        } else {
            None
        }
    }

    pub const fn twice(self) -> i64 {
        self.0
    }

    pub fn value(self) -> f64 {
        self.0 as f64 / 2.0
    }
}

impl std::ops::Neg for HalfInt {
    type Output = HalfInt;
    fn neg(self) -> HalfInt {
        HalfInt(-self.0)
    }
}

impl fmt::Display for HalfInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0 % 2 == 0 {
            write!(f, "{}", self.0 / 2)
        } else {
            write!(f, "{}/2", self.0)
        }
    }
}

/// Converts a weight m at level k into the basis index a = k/2 - m.
pub fn weight_to_index(k: u32, m: HalfInt) -> Result<usize> {
    let a2 = k as i64 - m.twice();
    if a2 % 2 != 0 || a2 < 0 || a2 > 2 * k as i64 {
        return Err(Error::InvalidWeight { k, m: m.to_string() });
    }
    Ok((a2 / 2) as usize)
}

pub fn index_to_weight(k: u32, a: usize) -> HalfInt {
    HalfInt(k as i64 - 2 * a as i64)
}

/// Table of ln(n!) for n = 0..=max.
#[derive(Clone, Debug)]
pub struct LogFactorials {
    table: Vec<f64>,
}

impl LogFactorials {
    pub fn new(max: u32) -> Self {
        let mut table = Vec::with_capacity(max as usize + 1);
        let mut acc = 0.0;
        table.push(0.0);
        for n in 1..=max {
            acc += (n as f64).ln();
            table.push(acc);
        }
        LogFactorials { table }
    }

    pub fn ln_factorial(&self, n: u32) -> f64 {
        self.table[n as usize]
    }

    /// ln C(n, r); caller guarantees r <= n <= max.
    pub fn ln_binomial(&self, n: u32, r: u32) -> f64 {
        self.table[n as usize] - self.table[r as usize] - self.table[(n - r) as usize]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn half_int_parsing() {
        assert_eq!(HalfInt::from_f64(1.5), Some(HalfInt::from_twice(3)));
        assert_eq!(HalfInt::from_f64(-2.0), Some(HalfInt::from_int(-2)));
        assert_eq!(HalfInt::from_f64(0.3), None);
        assert_eq!(HalfInt::from_twice(-3).to_string(), "-3/2");
    }

    #[test]
    fn weight_index_round_trip() {
        for k in 0..12u32 {
            for a in 0..=k as usize {
                let m = index_to_weight(k, a);
                assert_eq!(weight_to_index(k, m).unwrap(), a);
            }
        }
        assert!(weight_to_index(4, HalfInt::from_twice(1)).is_err());
        assert!(weight_to_index(4, HalfInt::from_int(3)).is_err());
    }

    #[test]
    fn log_binomials_match_exact() {
        let lf = LogFactorials::new(60);
        let exact: f64 = 118264581564861424.0; // C(60, 30)
        assert!((lf.ln_binomial(60, 30) - exact.ln()).abs() < 1e-12);
        assert_eq!(lf.ln_binomial(7, 0), 0.0);
    }
}
