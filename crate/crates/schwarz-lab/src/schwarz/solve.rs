//! Parameter-plane solvers for the Schwarz family. The family is only real-analytic in a, so
//! every solver works in (Re a, Im a).

use super::SchwarzMap;
use crate::cardioid::circumradius;
use crate::error::{Error, Result};
use crate::newton::newton_2d;
use crate::index::{real_parabolic_point, RealParabolic};
use crate::point::{ComplexValue, Finite};
use num_complex::Complex64;

/// F_a^{period}(0) = F_a^{period−2}(a), as a finite point.
fn critical_return(a: Complex64, period: usize) -> Option<Complex64> {
    let map = SchwarzMap::new(Finite(a)).ok()?;
    map.iterate(Finite(a), period - 2).ok()?.finite()
}

/// Center of a hyperbolic component of the given period: F_a^{period}(0) = 0.
pub fn find_center(period: usize, seed: ComplexValue) -> Result<ComplexValue> {
    if period < 2 {
        return Err(Error::InvalidInput("the critical point 0 maps to ∞, so centers have period ≥ 2".into()));
    }
    let seed = seed.finite().ok_or_else(|| Error::InvalidInput("seed at infinity".into()))?;
    if period == 2 {
        // F^2(0) = a.
        return Ok(Finite(Complex64::new(0.0, 0.0)));
    }
    let a = newton_2d(|a| critical_return(a, period), seed, 1e-10, "center search")?;
    // Real seeds stay real by symmetry; clear the rounding residue in Im a.
    let a = if seed.im == 0.0 && a.im.abs() < 1e-12 { Complex64::new(a.re, 0.0) } else { a };
    Ok(Finite(a))
}

/// A real parameter on the boundary of an odd-period component where the period-k real cycle
/// becomes parabolic. `bracket` is (inside, outside).
pub fn find_real_parabolic_boundary(period: usize, bracket: (f64, f64)) -> Result<RealParabolic> {
    let p = |a: f64, y: f64| SchwarzMap::real(a)?.real_return(y, period);
    // The cycle point in the component of the critical value a sits near a.
    real_parabolic_point(&p, |a| a, bracket.0, bracket.1)
}

/// On the slit the orbit of ∞ stays on the negative real axis: interval dynamics with σ on
/// [−3/4, 0] and the reflection on (−∞, a − r_a].
pub fn slit_orbit_check(a: f64) -> bool {
    let r = circumradius(Complex64::new(a, 0.0));
    let q = a - r;
    let mut z: Option<f64> = None;
    for _ in 0..100 {
        let next = match z {
            None => Some(a),
            Some(x) if (-0.75..=0.0).contains(&x) => {
                let lambda = 1.0 - (1.0 - 4.0 * x).sqrt();
                if lambda == 0.0 {
                    None
                } else {
                    Some((2.0 * lambda - 1.0) / (4.0 * lambda * lambda))
                }
            }
            Some(x) if x <= q => Some(a + r * r / (x - a)),
            Some(_) => return true,
        };
        match next {
            None => z = None,
            Some(x) => {
                if x > 0.0 {
                    return false;
                }
                z = Some(x);
            }
        }
    }
    true
}
