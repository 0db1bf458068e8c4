//! Damped Newton iteration in two real unknowns, for maps that are only real-analytic.

use crate::error::{Error, Result};
use num_complex::Complex64;

/// Newton's method in two real unknowns with a centered-difference Jacobian and step halving.
pub(crate) fn newton_2d<F: Fn(Complex64) -> Option<Complex64>>(f: F, seed: Complex64, target: f64, what: &str) -> Result<Complex64> {
    let fail = || Error::NoConvergence(format!("{what} from seed {seed}"));
    let mut a = seed;
    let mut r = f(a).ok_or_else(fail)?;
    for _ in 0..100 {
        if r.norm() < target * 1e-3 {
            break;
        }
        let h = 1e-7 * (1.0 + a.norm());
        let dx = (f(a + h).ok_or_else(fail)? - f(a - h).ok_or_else(fail)?) / (2.0 * h);
        let iy = Complex64::new(0.0, h);
        let dy = (f(a + iy).ok_or_else(fail)? - f(a - iy).ok_or_else(fail)?) / (2.0 * h);
        let det = dx.re * dy.im - dy.re * dx.im;
        if det.abs() < 1e-300 {
            return Err(fail());
        }
        let sx = (r.re * dy.im - dy.re * r.im) / det;
        let sy = (dx.re * r.im - r.re * dx.im) / det;
        let mut step = Complex64::new(sx, sy);
        let mut accepted = false;
        for _ in 0..40 {
            if let Some(rn) = f(a - step) {
                if rn.norm() < r.norm() || rn.norm() < target * 1e-3 {
                    a -= step;
                    r = rn;
                    accepted = true;
                    break;
                }
            }
            step *= 0.5;
        }
        if !accepted {
            break;
        }
    }
    if r.norm() < target {
        Ok(a)
    } else {
        Err(fail())
    }
}
