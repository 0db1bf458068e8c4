//! Points of the Riemann sphere.

use num_complex::Complex64;
use serde::{Serialize, Serializer};
use std::fmt;

/// A point of the extended plane. Infinity is its own variant, never a big number.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum ComplexValue {
    Finite(Complex64),
    Infinity,
}

pub use ComplexValue::{Finite, Infinity};

impl ComplexValue {
    pub fn new(re: f64, im: f64) -> Self {
        Finite(Complex64::new(re, im))
    }

    pub fn real(re: f64) -> Self {
        Finite(Complex64::new(re, 0.0))
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, Infinity)
    }

    pub fn finite(&self) -> Option<Complex64> {
        match *self {
            Finite(z) => Some(z),
            Infinity => None,
        }
    }

    /// Coordinate in the chart at infinity, u = 1/w.
    pub fn chart_at_infinity(&self) -> Complex64 {
        match *self {
            Finite(z) => 1.0 / z,
            Infinity => Complex64::new(0.0, 0.0),
        }
    }

    /// Rebuild a point from its chart-at-infinity coordinate.
    pub fn from_chart_at_infinity(u: Complex64) -> Self {
        if u == Complex64::new(0.0, 0.0) {
            Infinity
        } else {
            Finite(1.0 / u)
        }
    }

    pub fn conj(&self) -> Self {
        match *self {
            Finite(z) => Finite(z.conj()),
            Infinity => Infinity,
        }
    }

    /// Chordal distance on the unit sphere; bounded by 2, well defined at infinity.
    pub fn chordal_distance(&self, other: &ComplexValue) -> f64 {
        match (*self, *other) {
            (Infinity, Infinity) => 0.0,
            (Finite(z), Infinity) | (Infinity, Finite(z)) => 2.0 / (1.0 + z.norm_sqr()).sqrt(),
            (Finite(z), Finite(w)) => {
                2.0 * (z - w).norm() / ((1.0 + z.norm_sqr()).sqrt() * (1.0 + w.norm_sqr()).sqrt())
            }
        }
    }

    /// Euclidean closeness for finite points, exact match for infinity.
    pub fn approx_eq(&self, other: &ComplexValue, tol: f64) -> bool {
        match (*self, *other) {
            (Infinity, Infinity) => true,
            (Finite(z), Finite(w)) => (z - w).norm() <= tol,
            _ => false,
        }
    }
}

impl From<Complex64> for ComplexValue {
    fn from(z: Complex64) -> Self {
        Finite(z)
    }
}

impl From<f64> for ComplexValue {
    fn from(x: f64) -> Self {
        ComplexValue::real(x)
    }
}

impl fmt::Display for ComplexValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Finite(z) => write!(f, "{},{}", z.re, z.im),
            Infinity => write!(f, "inf"),
        }
    }
}

impl Serialize for ComplexValue {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            Finite(z) => [z.re, z.im].serialize(s),
            Infinity => s.serialize_str("inf"),
        }
    }
}

/// Parse "re,im", a bare real, or "inf".
pub fn parse_complex(text: &str) -> Option<ComplexValue> {
    let t = text.trim();
    if t.eq_ignore_ascii_case("inf") || t == "∞" {
        return Some(Infinity);
    }
    match t.split_once(',') {
        Some((re, im)) => Some(ComplexValue::new(re.trim().parse().ok()?, im.trim().parse().ok()?)),
        None => Some(ComplexValue::real(t.parse().ok()?)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn chart_roundtrip() {
        let w = ComplexValue::new(3.0, -4.0);
        let u = w.chart_at_infinity();
        assert!(ComplexValue::from_chart_at_infinity(u).approx_eq(&w, 1e-15));
        assert_eq!(ComplexValue::from_chart_at_infinity(Complex64::new(0.0, 0.0)), Infinity);
    }

    #[test]
    fn parse_forms() {
        assert_eq!(parse_complex("0.25,0"), Some(ComplexValue::new(0.25, 0.0)));
        assert_eq!(parse_complex("inf"), Some(Infinity));
        assert_eq!(parse_complex("-2"), Some(ComplexValue::real(-2.0)));
        assert_eq!(parse_complex("x,1"), None);
    }

    #[test]
    fn chordal_to_infinity_shrinks() {
        let far = ComplexValue::real(1e8);
        assert!(far.chordal_distance(&Infinity) < 1e-7);
        assert!(!far.approx_eq(&Infinity, 1.0));
    }
}
