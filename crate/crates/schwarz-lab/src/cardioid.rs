//! The main cardioid ♥ = φ(𝔻), its Schwarz reflection, and the circle of radius r_a about a
//! that circumscribes it.

use crate::error::{Error, Result};
use crate::point::{ComplexValue, Finite, Infinity};
use crate::tolerances::Tolerances;
use num_complex::Complex64;
use serde::Serialize;
use std::f64::consts::TAU;
use std::sync::OnceLock;

pub const CUSP: f64 = 0.25;

const GRID: usize = 512;
const NEWTON_STEPS: usize = 30;
/// Slack on |λ| ≤ 1 so that computed boundary points still count as boundary points.
const DISK_SLACK: f64 = 1e-12;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// φ(λ) = λ/2 − λ²/4 on finite points.
pub fn phi_c(l: Complex64) -> Complex64 {
    l * 0.5 - l * l * 0.25
}

pub fn phi_prime(l: Complex64) -> Complex64 {
    c(0.5, 0.0) - l * 0.5
}

pub fn phi(lambda: ComplexValue) -> ComplexValue {
    match lambda {
        Finite(l) => Finite(phi_c(l)),
        Infinity => Infinity,
    }
}

/// Cardioid boundary point φ(e^{2πit}).
pub fn boundary_point(t: f64) -> Complex64 {
    phi_c(Complex64::from_polar(1.0, TAU * t))
}

/// Both roots 1 ± √(1−4w) of λ² − 2λ + 4w = 0.
pub fn phi_inverse_roots(w: Complex64) -> [Complex64; 2] {
    let s = (c(1.0, 0.0) - w * 4.0).sqrt();
    [c(1.0, 0.0) + s, c(1.0, 0.0) - s]
}

/// The root of smaller modulus; inside the closed disk exactly when w ∈ ♥̄.
pub fn lambda_of(w: Complex64) -> Complex64 {
    let [p, m] = phi_inverse_roots(w);
    if p.norm_sqr() <= m.norm_sqr() {
        p
    } else {
        m
    }
}

pub fn phi_inverse(w: ComplexValue) -> Option<Complex64> {
    let w = w.finite()?;
    // Both roots are tested; the principal square root branch is never trusted alone.
    phi_inverse_roots(w).into_iter().find(|l| l.norm() <= 1.0 + DISK_SLACK)
}

/// σ(w) = φ(1/λ̄) = (2λ̄ − 1)/(4λ̄²) where w = φ(λ).
pub fn schwarz_sigma(w: ComplexValue) -> Result<ComplexValue> {
    let l = phi_inverse(w).ok_or(Error::OutsideCardioid)?;
    Ok(sigma_from_lambda(l))
}

pub(crate) fn sigma_from_lambda(l: Complex64) -> ComplexValue {
    let lb = l.conj();
    if lb == c(0.0, 0.0) {
        return Infinity;
    }
    Finite((lb * 2.0 - 1.0) / (lb * lb * 4.0))
}

/// ∂σ/∂w̄ = −φ′(1/λ̄) / (λ̄² · conj φ′(λ)).
pub fn sigma_wirtinger(w: ComplexValue) -> Result<Complex64> {
    let l = phi_inverse(w).ok_or(Error::OutsideCardioid)?;
    sigma_wirtinger_lambda(l)
}

pub(crate) fn sigma_wirtinger_lambda(l: Complex64) -> Result<Complex64> {
    if l.norm() < 1e-300 {
        return Err(Error::CriticalPoint);
    }
    let dp = phi_prime(l);
    if dp.norm() < 1e-14 {
        return Err(Error::SingularPoint);
    }
    let lb = l.conj();
    Ok(-phi_prime(1.0 / lb) / (lb * lb * dp.conj()))
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct DropletGeometry {
    pub a: Complex64,
    pub r_a: f64,
    pub alpha: Complex64,
    pub t_alpha: f64,
    pub cusp: f64,
    pub alpha_prime: Complex64,
    /// Set at the end of the slit, where the tangency has higher order.
    pub degenerate_tangency: bool,
}

/// A local maximum of |φ(e^{iθ}) − a| on the cardioid boundary.
#[derive(Clone, Copy, Debug)]
pub struct BoundaryMaximum {
    pub theta: f64,
    pub distance: f64,
    /// Second derivative of the squared distance at the maximum.
    pub curvature: f64,
}

fn grid_table() -> &'static [Complex64] {
    static TABLE: OnceLock<Vec<Complex64>> = OnceLock::new();
    TABLE.get_or_init(|| (0..GRID).map(|j| boundary_point(j as f64 / GRID as f64)).collect())
}

/// Squared distance f(θ) = |φ(e^{iθ}) − a|² and its first two derivatives.
fn dist_derivs(a: Complex64, theta: f64) -> (f64, f64, f64) {
    let e = Complex64::from_polar(1.0, theta);
    let z = phi_c(e) - a;
    let z1 = c(0.0, 1.0) * (e * 0.5 - e * e * 0.5);
    let z2 = -e * 0.5 + e * e;
    let f = z.norm_sqr();
    let f1 = 2.0 * (z.conj() * z1).re;
    let f2 = 2.0 * (z1.norm_sqr() + (z.conj() * z2).re);
    (f, f1, f2)
}

fn polish(a: Complex64, mut theta: f64, tol: f64) -> f64 {
    for _ in 0..NEWTON_STEPS {
        let (_, f1, f2) = dist_derivs(a, theta);
        if f2 >= 0.0 {
            // Not concave here; a small ascent step keeps us moving toward the maximum.
            let step = (f1 * 1e-2).clamp(-1e-3, 1e-3);
            theta += step;
            if step.abs() < tol {
                break;
            }
            continue;
        }
        let step = (-f1 / f2).clamp(-0.05, 0.05);
        theta += step;
        if step.abs() < tol {
            break;
        }
    }
    theta.rem_euclid(TAU)
}

fn angle_gap(x: f64, y: f64) -> f64 {
    let d = (x - y).rem_euclid(TAU);
    d.min(TAU - d)
}

/// All local maxima of the boundary distance to a, polished and deduplicated, largest first.
pub fn boundary_maxima(a: Complex64, tol: &Tolerances) -> Vec<BoundaryMaximum> {
    let table = grid_table();
    let d: Vec<f64> = table.iter().map(|p| (p - a).norm_sqr()).collect();
    let h = TAU / GRID as f64;
    let mut found: Vec<BoundaryMaximum> = Vec::new();
    for j in 0..GRID {
        let prev = d[(j + GRID - 1) % GRID];
        let next = d[(j + 1) % GRID];
        if d[j] < prev || d[j] < next {
            continue;
        }
        let th = j as f64 * h;
        // Seeds on both sides catch two maxima sharing one grid cell.
        for seed in [th - 0.5 * h, th, th + 0.5 * h] {
            let t = polish(a, seed, tol.newton_angle);
            let (f, f1, f2) = dist_derivs(a, t);
            if f2 > 0.0 || f1.abs() > 1e-6 * (1.0 + f) {
                continue;
            }
            if found.iter().any(|m| angle_gap(m.theta, t) <= tol.slit_angle) {
                continue;
            }
            found.push(BoundaryMaximum { theta: t, distance: f.sqrt(), curvature: f2 });
        }
    }
    found.sort_by(|x, y| y.distance.partial_cmp(&x.distance).unwrap());
    found
}

pub fn circumcircle(a: ComplexValue) -> Result<DropletGeometry> {
    circumcircle_with(a, &Tolerances::default())
}

pub fn circumcircle_with(a: ComplexValue, tol: &Tolerances) -> Result<DropletGeometry> {
    let a = a.finite().ok_or_else(|| Error::InvalidInput("circle center at infinity".into()))?;
    let maxima = boundary_maxima(a, tol);
    let top = *maxima.first().ok_or_else(|| Error::NoConvergence("no boundary maximum".into()))?;
    if let Some(other) = maxima[1..].iter().find(|m| top.distance - m.distance <= tol.slit_value) {
        return Err(Error::SlitError { t1: top.theta / TAU, t2: other.theta / TAU });
    }
    let theta = top.theta;
    let e = Complex64::from_polar(1.0, theta);
    let alpha = phi_c(e);
    let alpha_prime = phi_c(1.0 / (c(2.0, 0.0) - e).conj());
    let t_alpha = theta / TAU;
    Ok(DropletGeometry {
        a,
        r_a: top.distance,
        alpha,
        t_alpha,
        cusp: CUSP,
        alpha_prime,
        degenerate_tangency: top.curvature.abs() < tol.degenerate_curvature,
    })
}

/// Radius of the smallest circle about a containing ♥, also on the slit.
pub fn circumradius(a: Complex64) -> f64 {
    boundary_maxima(a, &Tolerances::default()).first().map_or(0.0, |m| m.distance)
}

pub fn circle_reflect(geom: &DropletGeometry, w: ComplexValue) -> ComplexValue {
    match w {
        Infinity => Finite(geom.a),
        Finite(z) => {
            let d = (z - geom.a).conj();
            if d == c(0.0, 0.0) {
                Infinity
            } else {
                Finite(geom.a + geom.r_a * geom.r_a / d)
            }
        }
    }
}

/// ∂/∂w̄ of the circle reflection.
pub fn circle_reflect_wirtinger(geom: &DropletGeometry, w: Complex64) -> Complex64 {
    let d = (w - geom.a).conj();
    -geom.r_a * geom.r_a / (d * d)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum DropletClass {
    Interior,
    BoundaryRegular,
    Singular,
    Outside,
}

pub fn droplet_contains(geom: &DropletGeometry, w: ComplexValue) -> DropletClass {
    droplet_contains_with(geom, w, &Tolerances::default())
}

pub fn droplet_contains_with(geom: &DropletGeometry, w: ComplexValue, tol: &Tolerances) -> DropletClass {
    let z = match w {
        Infinity => return DropletClass::Outside,
        Finite(z) => z,
    };
    if (z - geom.alpha).norm() < tol.singular || (z - c(CUSP, 0.0)).norm() < tol.singular {
        return DropletClass::Singular;
    }
    let beyond_circle = (z - geom.a).norm() - geom.r_a;
    if beyond_circle > tol.boundary {
        return DropletClass::Outside;
    }
    let inside_cardioid = lambda_of(z).norm() - 1.0;
    if inside_cardioid < -tol.boundary {
        return DropletClass::Outside;
    }
    if beyond_circle.abs() <= tol.boundary || inside_cardioid.abs() <= tol.boundary {
        DropletClass::BoundaryRegular
    } else {
        DropletClass::Interior
    }
}

/// Sector rule in ♥: symbol 1 when arg(λ)/2π ∈ (0, t_alpha), else 3.
pub fn sector_symbol(geom: &DropletGeometry, lambda: Complex64) -> u8 {
    let t = (lambda.arg() / TAU).rem_euclid(1.0);
    if t > 0.0 && t < geom.t_alpha {
        1
    } else {
        3
    }
}

/// Outward unit normal of ∂♥ at φ(e^{iθ}).
pub fn outward_normal(theta: f64) -> Complex64 {
    let e = Complex64::from_polar(1.0, theta);
    let n = e * phi_prime(e);
    if n.norm() < 1e-300 {
        return c(1.0, 0.0);
    }
    n / n.norm()
}

/// Distance from φ(e^{iθ}) to the circle, measured along the outward normal.
pub fn normal_gap(geom: &DropletGeometry, theta: f64) -> f64 {
    let p = phi_c(Complex64::from_polar(1.0, theta));
    let n = outward_normal(theta);
    // Solve |p + s n − a| = r for the positive root s.
    let q = p - geom.a;
    let b = (q.conj() * n).re;
    let disc = b * b - (q.norm_sqr() - geom.r_a * geom.r_a);
    -b + disc.max(0.0).sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn phi_values() {
        assert_eq!(phi(ComplexValue::real(0.5)), ComplexValue::real(3.0 / 16.0));
        assert_eq!(phi(Infinity), Infinity);
    }

    #[test]
    fn inverse_picks_disk_root() {
        let l = phi_inverse(ComplexValue::real(3.0 / 16.0)).unwrap();
        assert!((l - 0.5).norm() < 1e-15);
        assert!(phi_inverse(ComplexValue::real(1.0)).is_none());
    }

    #[test]
    fn normal_gap_at_tangency_is_zero() {
        let g = circumcircle(ComplexValue::real(0.0)).unwrap();
        assert!(normal_gap(&g, PI).abs() < 1e-12);
        assert!(normal_gap(&g, 1.0) > 0.0);
    }
}
