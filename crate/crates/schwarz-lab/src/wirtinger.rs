//! Derivatives of maps that are holomorphic or anti-holomorphic, with the conjugation parity
//! carried along through compositions.

use num_complex::Complex64;
use serde::Serialize;

/// ∂g/∂z for holomorphic g, ∂g/∂z̄ for anti-holomorphic g.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct WirtingerValue {
    pub value: Complex64,
    pub antiholomorphic: bool,
}

impl WirtingerValue {
    pub fn identity() -> Self {
        WirtingerValue { value: Complex64::new(1.0, 0.0), antiholomorphic: false }
    }

    pub fn holomorphic(value: Complex64) -> Self {
        WirtingerValue { value, antiholomorphic: false }
    }

    pub fn anti(value: Complex64) -> Self {
        WirtingerValue { value, antiholomorphic: true }
    }

    pub fn zero(antiholomorphic: bool) -> Self {
        WirtingerValue { value: Complex64::new(0.0, 0.0), antiholomorphic }
    }

    /// Derivative of `outer ∘ self`, with `outer` evaluated at the image point.
    pub fn then(self, outer: WirtingerValue) -> WirtingerValue {
        let inner = if outer.antiholomorphic { self.value.conj() } else { self.value };
        WirtingerValue {
            value: outer.value * inner,
            antiholomorphic: self.antiholomorphic ^ outer.antiholomorphic,
        }
    }

    /// Multiplier of the first holomorphic iterate: g itself, or g∘g with derivative |D|².
    pub fn holomorphic_multiplier(&self) -> Complex64 {
        if self.antiholomorphic {
            Complex64::new(self.value.norm_sqr(), 0.0)
        } else {
            self.value
        }
    }
}

/// Centered-difference Wirtinger derivatives (∂f, ∂̄f) of a map of the plane.
pub fn finite_difference<F: Fn(Complex64) -> Option<Complex64>>(f: F, z: Complex64, h: f64) -> Option<(Complex64, Complex64)> {
    let fx = (f(z + h)? - f(z - h)?) / (2.0 * h);
    let fy = (f(z + Complex64::new(0.0, h))? - f(z - Complex64::new(0.0, h))?) / (2.0 * h);
    let i = Complex64::new(0.0, 1.0);
    Some(((fx - i * fy) * 0.5, (fx + i * fy) * 0.5))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parity_composes() {
        let a = WirtingerValue::anti(Complex64::new(0.0, 2.0));
        let b = a.then(a);
        assert!(!b.antiholomorphic);
        assert!((b.value - Complex64::new(4.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn finite_difference_of_conjugate_square() {
        let z0 = Complex64::new(0.3, -0.7);
        let (d, db) = finite_difference(|z| Some(z.conj() * z.conj()), z0, 1e-6).unwrap();
        assert!(d.norm() < 1e-8);
        assert!((db - z0.conj() * 2.0).norm() < 1e-8);
    }
}
