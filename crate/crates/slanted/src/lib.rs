//! Numerical tools for slant-banded matrices: sections of bi-infinite
//! matrices whose nonzero entries cluster along a line of rational slope.
//! The crate provides the slant-class algebra and its norms, lower-bound
//! certificates that transfer between ell^p norms with explicit constants,
//! frame-style pseudo-inverse reconstruction, and stable reconstruction
//! from irregular samples in spline shift-invariant spaces.

use std::fmt;
use std::str::FromStr;

pub mod bb;
pub mod cesaro;
pub mod error;
pub mod frames;
pub mod linalg;
pub mod matrix;
pub mod sampling;
pub mod slant;
pub mod weight;

pub use error::{Error, Result};
pub use matrix::SlantedMatrix;
pub use slant::{IndexWindow, Slant};
pub use weight::Weight;

/// The three measured norms. Formulas elsewhere accept a general exponent;
/// measurements stick to these.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum NormP {
    One,
    Two,
    Inf,
}

impl NormP {
    pub fn exponent(self) -> f64 {
        match self {
            NormP::One => 1.0,
            NormP::Two => 2.0,
            NormP::Inf => f64::INFINITY,
        }
    }

    pub fn all() -> [NormP; 3] {
        [NormP::One, NormP::Two, NormP::Inf]
    }
}

impl FromStr for NormP {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "1" => Ok(NormP::One),
            "2" => Ok(NormP::Two),
            "inf" | "Inf" | "INF" => Ok(NormP::Inf),
            other => Err(Error::Parse(format!(
                "unknown norm index {other:?}; expected 1, 2, or inf"
            ))),
        }
    }
}

impl fmt::Display for NormP {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NormP::One => write!(f, "1"),
            NormP::Two => write!(f, "2"),
            NormP::Inf => write!(f, "inf"),
        }
    }
}
