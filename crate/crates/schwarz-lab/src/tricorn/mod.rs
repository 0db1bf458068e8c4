//! Quadratic anti-polynomials f_c(z) = z̄² + c.

mod rays;

pub use rays::{polished_landing, rational_lamination, trace_dynamical_ray, trace_parameter_ray, RationalLamination, RayOptions, RayPath};

use crate::cycle::{classify, CycleClass, CycleGrid, CycleRecord};
use crate::error::{Error, Result};
use crate::index::{contour_index, real_parabolic_point, IndexOptions, RealParabolic};
use crate::newton::newton_2d;
use crate::point::{ComplexValue, Finite, Infinity};
use crate::wirtinger::WirtingerValue;
use num_complex::Complex64;
use serde::Serialize;

/// Radius past which an orbit is treated as captured by ∞ when extracting Böttcher data.
pub const BOTTCHER_RADIUS: f64 = 1e8;
const MAX_BOTTCHER_ITER: usize = 100_000;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AntiPolynomial {
    pub c: Complex64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Escape {
    Escaped(usize),
    Bounded,
}

impl AntiPolynomial {
    pub fn new(c: Complex64) -> AntiPolynomial {
        AntiPolynomial { c }
    }

    pub fn real(c: f64) -> AntiPolynomial {
        AntiPolynomial::new(Complex64::new(c, 0.0))
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        z.conj() * z.conj() + self.c
    }

    pub fn apply(&self, z: ComplexValue) -> ComplexValue {
        match z {
            Infinity => Infinity,
            Finite(z) => Finite(self.eval(z)),
        }
    }

    /// Value and ∂̄-derivative 2z̄.
    pub fn apply_with_derivative(&self, z: Complex64) -> (Complex64, WirtingerValue) {
        (self.eval(z), WirtingerValue::anti(2.0 * z.conj()))
    }

    pub fn iterate(&self, z: Complex64, n: usize) -> Complex64 {
        (0..n).fold(z, |w, _| self.eval(w))
    }

    pub fn iterate_with_derivative(&self, z: Complex64, n: usize) -> (Complex64, WirtingerValue) {
        let mut w = z;
        let mut d = WirtingerValue::identity();
        for _ in 0..n {
            let (next, dw) = self.apply_with_derivative(w);
            d = d.then(dw);
            w = next;
        }
        (w, d)
    }

    /// First n with |fⁿ(z)| > r_esc. The radius should be at least 4 so that escape is final.
    pub fn escape_time(&self, z: Complex64, r_esc: f64, max_iter: usize) -> Escape {
        debug_assert!(r_esc >= 4.0);
        let r2 = r_esc * r_esc;
        let mut w = z;
        for n in 0..=max_iter {
            if w.norm_sqr() > r2 {
                return Escape::Escaped(n);
            }
            w = self.eval(w);
        }
        Escape::Bounded
    }

    /// Green's function ln|φ_c(z)|, zero on the filled Julia set.
    pub fn green(&self, z: Complex64) -> f64 {
        let mut w = z;
        let mut scale = 1.0;
        for _ in 0..MAX_BOTTCHER_ITER {
            if w.norm() > BOTTCHER_RADIUS {
                return w.norm().ln() * scale;
            }
            w = self.eval(w);
            scale *= 0.5;
            if scale == 0.0 {
                break;
            }
        }
        0.0
    }
}

pub fn f_apply(c: ComplexValue, z: ComplexValue) -> ComplexValue {
    match c {
        Infinity => Infinity,
        Finite(c) => AntiPolynomial::new(c).apply(z),
    }
}

pub fn escape_time(c: Complex64, z: Complex64, r_esc: f64, max_iter: usize) -> Escape {
    AntiPolynomial::new(c).escape_time(z, r_esc, max_iter)
}

/// The sequence u_k = conj^k(f^k(c)), which satisfies u_{k+1} = u_k² + conj^{k+1}(c) and
/// approximates Φ(c)^{2^k} once large. Stops at the first term beyond the Böttcher radius.
fn conjugated_orbit(c: Complex64) -> Result<Vec<Complex64>> {
    let mut u = vec![c];
    while u.last().unwrap().norm() <= BOTTCHER_RADIUS {
        if u.len() > 4096 {
            return Err(Error::InsideTricorn);
        }
        let k = u.len();
        let w = *u.last().unwrap();
        let shift = if k % 2 == 1 { c.conj() } else { c };
        u.push(w * w + shift);
    }
    Ok(u)
}

/// Φ(c) = φ_c(c), by the product c·Π(u_{k+1}/u_k²)^{1/2^{k+1}} with principal roots.
pub fn phi_big(c: Complex64) -> Result<Complex64> {
    let u = conjugated_orbit(c)?;
    let mut log = u[0].ln();
    let mut scale = 0.5;
    for k in 0..u.len() - 1 {
        log += (u[k + 1] / (u[k] * u[k])).ln() * scale;
        scale *= 0.5;
    }
    // The tail beyond the Böttcher radius is below double precision.
    Ok(log.exp())
}

/// Φ(c) with the 2ⁿ-th root chosen nearest to `predictor` in argument; used along continuations.
pub fn phi_big_near(c: Complex64, predictor: Complex64) -> Result<Complex64> {
    let u = conjugated_orbit(c)?;
    let n = (u.len() - 1) as i32;
    let last = *u.last().unwrap();
    let scale = 0.5f64.powi(n);
    let modulus = (last.norm().ln() * scale).exp();
    let base = last.arg() * scale;
    let turn = std::f64::consts::TAU * scale;
    let j = ((predictor.arg() - base) / turn).round();
    Ok(Complex64::from_polar(modulus, base + j * turn))
}

/// Center of a hyperbolic component: f_c^{period}(0) = 0 in (Re c, Im c).
pub fn find_center(period: usize, seed: Complex64) -> Result<Complex64> {
    if period == 0 {
        return Err(Error::InvalidInput("period must be positive".into()));
    }
    if period == 1 {
        return Ok(Complex64::new(0.0, 0.0));
    }
    let g = |c: Complex64| {
        let w = AntiPolynomial::new(c).iterate(Complex64::new(0.0, 0.0), period);
        w.is_finite().then_some(w)
    };
    let c = newton_2d(g, seed, 1e-10, "Tricorn center search")?;
    Ok(if seed.im == 0.0 && c.im.abs() < 1e-12 { Complex64::new(c.re, 0.0) } else { c })
}

/// Newton on the holomorphic iterate f^q (q even) from z0; None unless it settles on a fixed point.
pub fn periodic_point_near(poly: &AntiPolynomial, z0: Complex64, q: usize) -> Option<Complex64> {
    debug_assert!(q.is_multiple_of(2));
    let mut z = z0;
    for _ in 0..80 {
        let (w, d) = poly.iterate_with_derivative(z, q);
        if !w.is_finite() {
            return None;
        }
        let denom = d.value - 1.0;
        if denom.norm() < 1e-300 {
            return None;
        }
        let mut step = (w - z) / denom;
        let cap = 0.25 * (1.0 + z.norm());
        if step.norm() > cap {
            step *= cap / step.norm();
        }
        z -= step;
        if step.norm() < 1e-15 * (1.0 + z.norm()) {
            break;
        }
    }
    let w = poly.iterate(z, q);
    ((w - z).norm() < 1e-11 * (1.0 + z.norm())).then_some(z)
}

fn exact_period(poly: &AntiPolynomial, z: Complex64, period: usize) -> bool {
    let scale = 1.0 + z.norm();
    if (poly.iterate(z, period) - z).norm() > 1e-9 * scale {
        return false;
    }
    (1..period).filter(|d| period.is_multiple_of(*d)).all(|d| (poly.iterate(z, d) - z).norm() > 1e-4 * scale)
}

/// Cycles of exact period `period`, from Newton on the holomorphic iterate f^{period} or f^{2·period}.
pub fn find_cycles(poly: &AntiPolynomial, period: usize, grid: &CycleGrid) -> Vec<CycleRecord> {
    let q = if period.is_multiple_of(2) { period } else { 2 * period };
    let n = grid.n.max(2);
    let cell = |i: usize| -grid.half_width + 2.0 * grid.half_width * (i as f64 + 0.5) / n as f64;
    let mut seeds: Vec<Complex64> =
        (0..n).flat_map(|i| (0..n).map(move |j| (i, j))).map(|(i, j)| grid.center + Complex64::new(cell(i), cell(j))).collect();
    seeds.extend((0..8 * n).map(|i| {
        let t = -grid.half_width + 2.0 * grid.half_width * (i as f64 + 0.5) / (8 * n) as f64;
        Complex64::new(grid.center.re + t, grid.center.im)
    }));
    let mut out: Vec<CycleRecord> = Vec::new();
    for s in seeds {
        let Some(z) = periodic_point_near(poly, s, q) else { continue };
        if !exact_period(poly, z, period) {
            continue;
        }
        if out.iter().any(|c| c.points.iter().any(|p| p.approx_eq(&Finite(z), 1e-7))) {
            continue;
        }
        let points: Vec<ComplexValue> = (0..period).map(|k| Finite(poly.iterate(z, k))).collect();
        let cycle = CycleRecord { points, period, multiplier: WirtingerValue::identity(), classification: CycleClass::Repelling };
        let m = multiplier(poly, &cycle);
        let classification = if cycle.contains_critical() { CycleClass::Superattracting } else { classify(m.holomorphic_multiplier(), 1e-6) };
        out.push(CycleRecord { multiplier: m, classification, ..cycle });
    }
    out
}

/// Chain-rule derivative of f^{period} along the cycle.
pub fn multiplier(poly: &AntiPolynomial, cycle: &CycleRecord) -> WirtingerValue {
    cycle.points.iter().filter_map(|p| p.finite()).fold(WirtingerValue::identity(), |d, z| d.then(poly.apply_with_derivative(z).1))
}

/// Fixed-point index of the holomorphic iterate f^{return_period} (return_period even).
pub fn parabolic_index(poly: &AntiPolynomial, fixed_point: Complex64, return_period: usize) -> Result<Complex64> {
    if return_period % 2 == 1 {
        return Err(Error::InvalidInput("the index is taken for an even, holomorphic iterate".into()));
    }
    let g = |z: Complex64| Ok(poly.iterate(z, return_period));
    contour_index(&g, fixed_point, IndexOptions::default())
}

/// Real parameter on the boundary of an odd-period real component where the real cycle turns
/// parabolic; `bracket` is (inside, outside). On ℝ the anti-polynomial is x² + c.
pub fn find_real_parabolic_boundary(period: usize, bracket: (f64, f64)) -> Result<RealParabolic> {
    let p = |c: f64, x: f64| -> Result<(f64, f64)> {
        let (mut v, mut d) = (x, 1.0);
        for _ in 0..period {
            d *= 2.0 * v;
            v = v * v + c;
        }
        if v.is_finite() {
            Ok((v, d))
        } else {
            Err(Error::NonEscaping)
        }
    };
    // The attracting cycle has a point next to the critical value c.
    real_parabolic_point(&p, |c| c, bracket.0, bracket.1)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hand_arithmetic() {
        let f = AntiPolynomial::new(Complex64::new(0.0, 1.0));
        assert_eq!(f.eval(Complex64::new(0.0, 1.0)), Complex64::new(-1.0, 1.0));
        let f = AntiPolynomial::real(-1.0);
        assert_eq!(f.iterate(Complex64::new(0.0, 0.0), 2), Complex64::new(0.0, 0.0));
    }

    #[test]
    fn phi_large_parameter() {
        let c = Complex64::from_polar(1e6, 0.7);
        assert!((phi_big(c).unwrap() / c - 1.0).norm() < 1e-3);
        assert!(matches!(phi_big(Complex64::new(-1.0, 0.0)), Err(Error::InsideTricorn)));
    }

    #[test]
    fn period_three_real_center() {
        let c = find_center(3, Complex64::new(-1.8, 0.0)).unwrap();
        assert!((c.re + 1.7548776662466927).abs() < 1e-10);
    }
}
