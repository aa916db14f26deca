//! Slope bookkeeping.
//!
//! A slant is a nonzero rational slope alpha = num/den in lowest terms with
//! den > 0. Entry (m, n) of a matrix with slant alpha belongs to slant index
//! j exactly when j = floor(alpha * m) - n. All membership arithmetic is
//! exact integer arithmetic on the rational representation; floats never
//! decide which slant an entry lands on.

use std::fmt;

use crate::error::{Error, Result};

/// Bound on |num| and den. Together with the window cap this keeps every
/// floor(num * m / den) inside i64.
const COMPONENT_CAP: i64 = 1_000_000;

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

fn floor_div(a: i128, b: i128) -> i128 {
    debug_assert!(b > 0);
    let q = a / b;
    if a % b != 0 && a < 0 {
        q - 1
    } else {
        q
    }
}

/// Nonzero rational slope in lowest terms, denominator positive.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Slant {
    num: i64,
    den: i64,
}

impl Slant {
    pub fn new(num: i64, den: i64) -> Result<Self> {
        if num == 0 {
            return Err(Error::InvalidSlant("slope must be nonzero".into()));
        }
        if den == 0 {
            return Err(Error::InvalidSlant("denominator must be nonzero".into()));
        }
        let negative = (num < 0) != (den < 0);
        let (n, d) = (num.unsigned_abs(), den.unsigned_abs());
        let g = gcd(n, d);
        let n = (n / g) as i64;
        let d = (d / g) as i64;
        if n > COMPONENT_CAP || d > COMPONENT_CAP {
            return Err(Error::InvalidSlant(format!(
                "reduced slope {}/{} exceeds the supported magnitude",
                n, d
            )));
        }
        Ok(Slant {
            num: if negative { -n } else { n },
            den: d,
        })
    }

    pub fn one() -> Self {
        Slant { num: 1, den: 1 }
    }

    pub fn num(&self) -> i64 {
        self.num
    }

    pub fn den(&self) -> i64 {
        self.den
    }

    pub fn as_f64(&self) -> f64 {
        self.num as f64 / self.den as f64
    }

    pub fn is_positive(&self) -> bool {
        self.num > 0
    }

    /// floor(alpha * m), exactly.
    pub fn floor_mul(&self, m: i64) -> i64 {
        floor_div(self.num as i128 * m as i128, self.den as i128) as i64
    }

    /// ceil(alpha * m), exactly.
    pub fn ceil_mul(&self, m: i64) -> i64 {
        -self.floor_mul_neg(m)
    }

    fn floor_mul_neg(&self, m: i64) -> i64 {
        floor_div(-(self.num as i128) * m as i128, self.den as i128) as i64
    }

    /// Reciprocal slope beta = 1/alpha, again with positive denominator.
    pub fn recip(&self) -> Self {
        if self.num > 0 {
            Slant { num: self.den, den: self.num }
        } else {
            Slant { num: -self.den, den: -self.num }
        }
    }

    pub fn negate(&self) -> Self {
        Slant { num: -self.num, den: self.den }
    }

    /// Product of two slopes, reduced. Errors only if the reduced components
    /// overflow the supported magnitude.
    pub fn checked_mul(&self, rhs: &Slant) -> Result<Self> {
        let num = self.num as i128 * rhs.num as i128;
        let den = self.den as i128 * rhs.den as i128;
        let g = gcd(num.unsigned_abs() as u64, den.unsigned_abs() as u64) as i128;
        let num = num / g;
        let den = den / g;
        if num.unsigned_abs() > COMPONENT_CAP as u128 || den > COMPONENT_CAP as i128 {
            return Err(Error::InvalidSlant(
                "slope product exceeds the supported magnitude".into(),
            ));
        }
        Slant::new(num as i64, den as i64)
    }

    /// ceil(|alpha|).
    pub fn ceil_abs(&self) -> i64 {
        (self.num.unsigned_abs() as i64 + self.den - 1) / self.den
    }

    /// ceil(1/|alpha|) = ceil(den/|num|).
    pub fn ceil_abs_recip(&self) -> i64 {
        let n = self.num.unsigned_abs() as i64;
        (self.den + n - 1) / n
    }

    /// Covering factor ceil(1/|alpha|)^dim for slant-class sup norms.
    pub fn k_factor(&self, dim: u32) -> f64 {
        (self.ceil_abs_recip() as f64).powi(dim as i32)
    }
}

impl fmt::Debug for Slant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.num, self.den)
    }
}

impl fmt::Display for Slant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den == 1 {
            write!(f, "{}", self.num)
        } else {
            write!(f, "{}/{}", self.num, self.den)
        }
    }
}

/// Cap on window half-width; keeps slant index arithmetic exact.
const HALF_WIDTH_CAP: i64 = 1_000_000_000;

/// Symmetric index window {-L, ..., L} on which finite sections live.
///
/// The lattice dimension is carried so constant formulas can quote it, but
/// sections themselves are one-dimensional.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct IndexWindow {
    half_width: i64,
    dim: u32,
}

impl IndexWindow {
    pub fn new(half_width: i64, dim: u32) -> Result<Self> {
        if half_width < 1 || half_width > HALF_WIDTH_CAP {
            return Err(Error::InvalidWindow(format!(
                "half-width {} out of range [1, {}]",
                half_width, HALF_WIDTH_CAP
            )));
        }
        if dim == 0 {
            return Err(Error::InvalidWindow("dimension must be positive".into()));
        }
        Ok(IndexWindow { half_width, dim })
    }

    /// One-dimensional window, the only kind sections support.
    pub fn line(half_width: i64) -> Result<Self> {
        IndexWindow::new(half_width, 1)
    }

    pub fn half_width(&self) -> i64 {
        self.half_width
    }

    pub fn dim(&self) -> u32 {
        self.dim
    }

    /// Number of lattice points, 2L + 1.
    pub fn size(&self) -> usize {
        (2 * self.half_width + 1) as usize
    }

    pub fn contains(&self, k: i64) -> bool {
        k.abs() <= self.half_width
    }

    /// Position of coordinate k in the flattened section, if inside.
    pub fn index_of(&self, k: i64) -> Option<usize> {
        if self.contains(k) {
            Some((k + self.half_width) as usize)
        } else {
            None
        }
    }

    /// Coordinate of flattened position i.
    pub fn coord_of(&self, i: usize) -> i64 {
        i as i64 - self.half_width
    }

    pub fn coords(&self) -> impl Iterator<Item = i64> {
        -self.half_width..=self.half_width
    }
}
