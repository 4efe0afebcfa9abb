//! Half-integer quantum numbers, stored as twice their value.

use std::fmt;
use std::ops::{Add, Neg, Sub};
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// A spin or projection `j ∈ ℕ/2`, held as the integer `2j`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct HalfInt(i64);

impl HalfInt {
    pub const ZERO: HalfInt = HalfInt(0);
    pub const HALF: HalfInt = HalfInt(1);
    pub const ONE: HalfInt = HalfInt(2);

    pub const fn from_twice(twice: i64) -> Self {
        HalfInt(twice)
    }

    pub const fn from_int(n: i64) -> Self {
        HalfInt(2 * n)
    }

    pub const fn twice(self) -> i64 {
        self.0
    }

    pub fn value(self) -> f64 {
        self.0 as f64 / 2.0
    }

    /// Dimension `2j + 1` of the spin-j irrep.
    pub const fn dim(self) -> i64 {
        self.0 + 1
    }

    /// Semiclassical edge length `j + 1/2`.
    pub fn length(self) -> f64 {
        (self.0 + 1) as f64 / 2.0
    }

    pub const fn is_integer(self) -> bool {
        self.0 % 2 == 0
    }

    pub const fn abs(self) -> Self {
        HalfInt(self.0.abs())
    }

    /// The integer value, if there is one.
    pub const fn to_int(self) -> Option<i64> {
        if self.0 % 2 == 0 {
            Some(self.0 / 2)
        } else {
            None
        }
    }
}

impl Add for HalfInt {
    type Output = HalfInt;
    fn add(self, rhs: HalfInt) -> HalfInt {
        HalfInt(self.0 + rhs.0)
    }
}

impl Sub for HalfInt {
    type Output = HalfInt;
    fn sub(self, rhs: HalfInt) -> HalfInt {
        HalfInt(self.0 - rhs.0)
    }
}

impl Neg for HalfInt {
    type Output = HalfInt;
    fn neg(self) -> HalfInt {
        HalfInt(-self.0)
    }
}

impl std::iter::Sum for HalfInt {
    fn sum<I: Iterator<Item = HalfInt>>(iter: I) -> HalfInt {
        HalfInt(iter.map(|h| h.0).sum())
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

#[derive(Debug, Error, PartialEq, Eq)]
#[error("cannot parse `{0}` as a half-integer")]
pub struct ParseHalfIntError(pub String);

impl FromStr for HalfInt {
    type Err = ParseHalfIntError;

    /// Accepts `3`, `3/2`, `1.5`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = || ParseHalfIntError(s.to_string());
        let t = s.trim();
        if let Some((num, den)) = t.split_once('/') {
            let num: i64 = num.trim().parse().map_err(|_| err())?;
            return match den.trim() {
                "1" => Ok(HalfInt(2 * num)),
                "2" => Ok(HalfInt(num)),
                _ => Err(err()),
            };
        }
        if let Ok(n) = t.parse::<i64>() {
            return Ok(HalfInt(2 * n));
        }
        let x: f64 = t.parse().map_err(|_| err())?;
        let twice = (2.0 * x).round();
        if (2.0 * x - twice).abs() > 1e-12 || !twice.is_finite() {
            return Err(err());
        }
        Ok(HalfInt(twice as i64))
    }
}

/// Three spins coupled to zero.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Triad {
    pub a: HalfInt,
    pub b: HalfInt,
    pub c: HalfInt,
}

impl Triad {
    pub fn new(a: HalfInt, b: HalfInt, c: HalfInt) -> Self {
        Triad { a, b, c }
    }

    pub fn is_allowed(&self) -> bool {
        triad_allowed(self.a, self.b, self.c)
    }
}

/// Clebsch-Gordan condition: triangle inequality and integer sum.
pub fn triad_allowed(a: HalfInt, b: HalfInt, c: HalfInt) -> bool {
    let (a, b, c) = (a.0, b.0, c.0);
    a >= 0 && b >= 0 && c >= 0 && (a + b + c) % 2 == 0 && c <= a + b && c >= (a - b).abs()
}

/// `(-1)^e` for an exponent given as a twice-value; `None` when `e` is not an integer.
pub fn sign_pow(twice_exponent: i64) -> Option<i32> {
    if twice_exponent % 2 != 0 {
        return None;
    }
    Some(if (twice_exponent / 2) % 2 == 0 { 1 } else { -1 })
}

/// Twice-valued range `lo, lo+2, ..., hi` of a coupled spin between `a` and `b`.
pub fn coupling_window(a: HalfInt, b: HalfInt) -> (HalfInt, HalfInt) {
    ((a - b).abs(), a + b)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn h(t: i64) -> HalfInt {
        HalfInt::from_twice(t)
    }

    #[test]
    fn triads() {
        assert!(triad_allowed(h(2), h(2), h(4)));
        assert!(!triad_allowed(h(2), h(2), h(6)));
        assert!(triad_allowed(h(1), h(2), h(1)));
        assert!(!triad_allowed(h(1), h(2), h(2)));
        assert!(!triad_allowed(h(-2), h(2), h(0)));
    }

    #[test]
    fn parse_forms() {
        assert_eq!("3".parse::<HalfInt>().unwrap(), h(6));
        assert_eq!("3/2".parse::<HalfInt>().unwrap(), h(3));
        assert_eq!("-1/2".parse::<HalfInt>().unwrap(), h(-1));
        assert_eq!("2.5".parse::<HalfInt>().unwrap(), h(5));
        assert!("1/3".parse::<HalfInt>().is_err());
        assert!("0.3".parse::<HalfInt>().is_err());
        assert_eq!(h(7).to_string(), "7/2");
        assert_eq!(h(-4).to_string(), "-2");
    }

    #[test]
    fn signs() {
        assert_eq!(sign_pow(0), Some(1));
        assert_eq!(sign_pow(2), Some(-1));
        assert_eq!(sign_pow(-2), Some(-1));
        assert_eq!(sign_pow(4), Some(1));
        assert_eq!(sign_pow(3), None);
    }
}
