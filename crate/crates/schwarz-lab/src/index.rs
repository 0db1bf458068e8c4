//! Holomorphic fixed-point index by contour quadrature, and a real parabolic-point solver
//! shared by both families.

use crate::error::{Error, Result};
use num_complex::Complex64;
use std::f64::consts::TAU;

#[derive(Clone, Copy, Debug)]
pub struct IndexOptions {
    pub radius: f64,
    pub nodes: usize,
    pub agreement: f64,
    pub max_halvings: usize,
}

impl Default for IndexOptions {
    fn default() -> Self {
        IndexOptions { radius: 1e-3, nodes: 2048, agreement: 1e-7, max_halvings: 12 }
    }
}

/// Trapezoid rule for (1/2πi)∮ dz/(z − g(z)) on a circle of radius `radius` about z0.
pub fn contour_index_at<G: Fn(Complex64) -> Result<Complex64>>(g: &G, z0: Complex64, radius: f64, nodes: usize) -> Result<Complex64> {
    let mut sum = Complex64::new(0.0, 0.0);
    for j in 0..nodes {
        let u = Complex64::from_polar(radius, TAU * j as f64 / nodes as f64);
        let z = z0 + u;
        let denom = z - g(z)?;
        if denom.norm() < 1e-300 || !denom.re.is_finite() {
            return Err(Error::ContourThroughZero);
        }
        sum += u / denom;
    }
    Ok(sum / nodes as f64)
}

/// Index with the contour shrunk until two successive radii agree.
pub fn contour_index<G: Fn(Complex64) -> Result<Complex64>>(g: &G, z0: Complex64, opts: IndexOptions) -> Result<Complex64> {
    let mut r = opts.radius;
    let mut prev = contour_index_at(g, z0, r, opts.nodes)?;
    for _ in 0..opts.max_halvings {
        r *= 0.5;
        let cur = contour_index_at(g, z0, r, opts.nodes)?;
        if (cur - prev).norm() < opts.agreement {
            return Ok(cur);
        }
        prev = cur;
    }
    Err(Error::NoConvergence("contour index did not settle".into()))
}

/// A real parameter where the real return map P (the odd iterate restricted to ℝ) has a fixed
/// point y with P'(y) = ±1.
#[derive(Clone, Copy, Debug, serde::Serialize)]
pub struct RealParabolic {
    pub parameter: f64,
    pub point: f64,
    /// P'(y) at the output; the multiplier of the even iterate is its square.
    pub derivative: f64,
}

/// Newton on P(y) = y from a seed; returns the point and P'.
pub fn real_cycle_point<P: Fn(f64, f64) -> Result<(f64, f64)>>(p: &P, a: f64, seed: f64) -> Option<(f64, f64)> {
    let mut y = seed;
    for _ in 0..80 {
        let (v, d) = p(a, y).ok()?;
        let h = v - y;
        if (d - 1.0).abs() < 1e-300 {
            return None;
        }
        let step = (h / (d - 1.0)).clamp(-0.05, 0.05);
        y -= step;
        if step.abs() < 1e-15 * (1.0 + y.abs()) {
            break;
        }
    }
    let (v, d) = p(a, y).ok()?;
    ((v - y).abs() < 1e-10 * (1.0 + y.abs())).then_some((y, d))
}

/// Bisection on "the cycle point near `seed(a)` is attracting", then a Newton polish of
/// (P(y) − y, P'(y) ∓ 1) in (y, a). The bracket is (parameter inside, parameter outside).
pub fn real_parabolic_point<P, S>(p: &P, seed: S, inside: f64, outside: f64) -> Result<RealParabolic>
where
    P: Fn(f64, f64) -> Result<(f64, f64)>,
    S: Fn(f64) -> f64,
{
    let attracting = |a: f64, s: f64| real_cycle_point(p, a, s).filter(|(_, d)| d.abs() < 1.0);
    let (mut y_in, mut d_in) = attracting(inside, seed(inside)).ok_or(Error::NoBracketedCrossing)?;
    if attracting(outside, seed(outside)).is_some() {
        return Err(Error::NoBracketedCrossing);
    }
    let (mut lo, mut hi) = (inside, outside);
    for _ in 0..60 {
        let mid = 0.5 * (lo + hi);
        match attracting(mid, y_in) {
            Some((y, d)) => {
                lo = mid;
                y_in = y;
                d_in = d;
            }
            None => hi = mid,
        }
    }
    let sign = d_in.signum();
    let (mut y, mut a) = (y_in, lo);
    let resid = |y: f64, a: f64| -> Result<(f64, f64)> {
        let (v, d) = p(a, y)?;
        Ok((v - y, d - sign))
    };
    for _ in 0..40 {
        let (f1, f2) = resid(y, a)?;
        let hy = 1e-7 * (1.0 + y.abs());
        let ha = 1e-7 * (1.0 + a.abs());
        let (py1, py2) = resid(y + hy, a)?;
        let (my1, my2) = resid(y - hy, a)?;
        let (pa1, pa2) = resid(y, a + ha)?;
        let (ma1, ma2) = resid(y, a - ha)?;
        let j = [[(py1 - my1) / (2.0 * hy), (pa1 - ma1) / (2.0 * ha)], [(py2 - my2) / (2.0 * hy), (pa2 - ma2) / (2.0 * ha)]];
        let det = j[0][0] * j[1][1] - j[0][1] * j[1][0];
        if det.abs() < 1e-300 {
            break;
        }
        let dy = (f1 * j[1][1] - f2 * j[0][1]) / det;
        let da = (j[0][0] * f2 - j[1][0] * f1) / det;
        y -= dy;
        a -= da;
        if dy.abs() < 1e-16 * (1.0 + y.abs()) && da.abs() < 1e-16 * (1.0 + a.abs()) {
            break;
        }
    }
    let (_, d) = p(a, y)?;
    if ((d * d) - 1.0).abs() > 1e-8 {
        return Err(Error::NoConvergence(format!("parabolic polish stopped at multiplier {}", d * d)));
    }
    Ok(RealParabolic { parameter: a, point: y, derivative: d })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn linear_map_index() {
        let lam = Complex64::new(2.0, 1.0);
        let g = |z: Complex64| Ok(lam * z);
        let i = contour_index(&g, Complex64::new(0.0, 0.0), IndexOptions::default()).unwrap();
        assert!((i - 1.0 / (1.0 - lam)).norm() < 1e-12);
    }

    #[test]
    fn logistic_saddle_node() {
        // y ↦ y² + a has a parabolic fixed point at a = 1/4, y = 1/2.
        let p = |a: f64, y: f64| Ok((y * y + a, 2.0 * y));
        let r = real_parabolic_point(&p, |_| 0.4, 0.2, 0.3).unwrap();
        assert!((r.parameter - 0.25).abs() < 1e-12);
        assert!((r.point - 0.5).abs() < 1e-7);
    }
}
