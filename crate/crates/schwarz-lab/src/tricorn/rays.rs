//! External rays of f_c and parameter rays of the Tricorn.
//!
//! A point at potential G and angle θ solves u_n = exp(2ⁿ(G + 2πiθ)) for the conjugated orbit
//! u_k = conj^k(f^k(·)), with n large enough that |u_n| is past the Böttcher radius. Potentials step
//! down by 2^{−1/substeps}, and each solve is seeded by the previous point.

use super::{AntiPolynomial, BOTTCHER_RADIUS};
use crate::cycle::cluster_points;
use crate::coding::{exact_period, m2_map, m2_preimages, periodic_angles, RationalAngle};
use crate::error::{Error, Result};
use crate::lamination::Lamination;
use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::ToPrimitive;
use rayon::prelude::*;
use serde::Serialize;
use std::f64::consts::{PI, TAU};

#[derive(Clone, Copy, Debug)]
pub struct RayOptions {
    pub substeps: usize,
    /// Potential of the first dynamical ray point.
    pub start_potential: f64,
    /// Potential bounds for parameter rays: from ln 4 down to ln(1 + 1e−4).
    pub parameter_start: f64,
    pub parameter_stop: f64,
}

impl Default for RayOptions {
    fn default() -> Self {
        RayOptions { substeps: 8, start_potential: BOTTCHER_RADIUS.ln(), parameter_start: 4f64.ln(), parameter_stop: 1e-4f64.ln_1p() }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct RayPath {
    pub angle: RationalAngle,
    pub points: Vec<Complex64>,
    /// Green's function value at each point, strictly decreasing.
    pub potentials: Vec<f64>,
    pub landing_estimate: Complex64,
    /// Distance between the ray points at the last two whole levels.
    pub cauchy_gap: f64,
}

/// 2ⁿθ mod 1, exactly, as a float.
fn doubled_turn(theta: &RationalAngle, n: usize) -> f64 {
    let q = theta.denom();
    let two_n = BigInt::from(2).modpow(&BigInt::from(n), q);
    let p = ((theta.numer() * two_n) % q + q) % q;
    p.to_f64().unwrap_or(0.0) / q.to_f64().unwrap_or(1.0)
}

fn wrap(x: f64) -> f64 {
    x - TAU * ((x + PI) / TAU).floor()
}

/// log u_n(z) − target, with the imaginary part wrapped, and d/dz log u_n.
fn dynamical_residual(poly: &AntiPolynomial, z: Complex64, n: usize, target: Complex64) -> (Complex64, Complex64) {
    let mut u = z;
    let mut du = Complex64::new(1.0, 0.0);
    for k in 0..n {
        let shift = if k % 2 == 0 { poly.c.conj() } else { poly.c };
        du = 2.0 * u * du;
        u = u * u + shift;
    }
    let r = u.ln() - target;
    (Complex64::new(r.re, wrap(r.im)), du / u)
}

/// Same for the parameter equation, where u_0 = c and the map is not holomorphic in c: returns
/// the ∂ and ∂̄ derivatives of log u_n.
fn parameter_residual(c: Complex64, n: usize, target: Complex64) -> (Complex64, Complex64, Complex64) {
    let mut u = c;
    let (mut a, mut b) = (Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0));
    for k in 0..n {
        let odd = k % 2 == 0;
        a = 2.0 * u * a + if odd { 0.0 } else { 1.0 };
        b = 2.0 * u * b + if odd { 1.0 } else { 0.0 };
        u = u * u + if odd { c.conj() } else { c };
    }
    let r = u.ln() - target;
    (Complex64::new(r.re, wrap(r.im)), a / u, b / u)
}

fn target(potential: f64, n: usize, turn: f64) -> Complex64 {
    Complex64::new(potential * 2f64.powi(n as i32), TAU * turn)
}

fn polish_dynamical(poly: &AntiPolynomial, seed: Complex64, n: usize, tgt: Complex64) -> Option<Complex64> {
    let mut z = seed;
    for _ in 0..60 {
        let (r, d) = dynamical_residual(poly, z, n, tgt);
        if !r.re.is_finite() || d.norm() == 0.0 {
            return None;
        }
        let mut step = r / d;
        let cap = 0.5 * (1.0 + z.norm());
        if step.norm() > cap {
            step *= cap / step.norm();
        }
        z -= step;
        if step.norm() < 1e-14 * (1.0 + z.norm()) {
            return Some(z);
        }
    }
    // Deep levels amplify rounding along the orbit; accept a residual at that floor.
    let (r, _) = dynamical_residual(poly, z, n, tgt);
    (r.norm() < 1e-6).then_some(z)
}

/// Ray of angle θ in the dynamical plane of f_c, traced through `levels` halvings of the potential.
pub fn trace_dynamical_ray(poly: &AntiPolynomial, theta: &RationalAngle, levels: usize) -> Result<RayPath> {
    trace_dynamical_ray_with(poly, theta, levels, &RayOptions::default())
}

pub fn trace_dynamical_ray_with(poly: &AntiPolynomial, theta: &RationalAngle, levels: usize, opts: &RayOptions) -> Result<RayPath> {
    let s = opts.substeps.max(1);
    let g0 = opts.start_potential;
    let mut z = Complex64::from_polar(g0.exp(), TAU * theta.to_f64());
    let mut points = Vec::with_capacity(levels * s + 1);
    let mut potentials = Vec::with_capacity(levels * s + 1);
    let turns: Vec<f64> = (0..=levels + 1).map(|n| doubled_turn(theta, n)).collect();
    for i in 0..=levels * s {
        let t = i as f64 / s as f64;
        let g = g0 * 2f64.powf(-t);
        let n = i.div_ceil(s);
        z = polish_dynamical(poly, z, n, target(g, n, turns[n])).ok_or(Error::NewtonStall { level: i / s })?;
        points.push(z);
        potentials.push(g);
        // Once a whole level no longer moves the point, the ray is resolved to machine precision.
        if i % s == 0 && i >= s && (z - points[i - s]).norm() < 1e-13 * (1.0 + z.norm()) {
            break;
        }
    }
    let landing_estimate = *points.last().unwrap();
    let cauchy_gap = if points.len() > s { (landing_estimate - points[points.len() - 1 - s]).norm() } else { f64::INFINITY };
    Ok(RayPath { angle: theta.clone(), points, potentials, landing_estimate, cauchy_gap })
}

/// Parameter ray Φ(c) = r·e^{2πiθ}, continued from r = 4 toward r = 1 + 1e−4 over at most
/// `levels` halvings of the potential.
pub fn trace_parameter_ray(theta: &RationalAngle, levels: usize) -> Result<RayPath> {
    trace_parameter_ray_with(theta, levels, &RayOptions::default())
}

pub fn trace_parameter_ray_with(theta: &RationalAngle, levels: usize, opts: &RayOptions) -> Result<RayPath> {
    let s = opts.substeps.max(1);
    let g0 = opts.parameter_start;
    let escape = BOTTCHER_RADIUS.ln();
    let mut c = Complex64::from_polar(g0.exp(), TAU * theta.to_f64());
    let mut points = Vec::new();
    let mut potentials = Vec::new();
    let mut i = 0;
    loop {
        let t = i as f64 / s as f64;
        let g = g0 * 2f64.powf(-t);
        if g < opts.parameter_stop || t > levels as f64 {
            break;
        }
        let n = (escape / g).log2().ceil().max(0.0) as usize;
        let tgt = target(g, n, doubled_turn(theta, n));
        let mut ok = false;
        for _ in 0..60 {
            let (r, a, b) = parameter_residual(c, n, tgt);
            let det = a.norm_sqr() - b.norm_sqr();
            if !r.re.is_finite() || det.abs() < 1e-300 {
                break;
            }
            // Solve a·δ + b·conj(δ) = r.
            let mut step = (a.conj() * r - b * r.conj()) / det;
            let cap = 0.25 * (1.0 + c.norm()) * g.min(1.0);
            if step.norm() > cap {
                step *= cap / step.norm();
            }
            c -= step;
            if step.norm() < 1e-15 * (1.0 + c.norm()) {
                ok = true;
                break;
            }
        }
        let (r, _, _) = parameter_residual(c, n, tgt);
        if !ok && r.norm() > 1e-8 {
            return Err(Error::ContinuationStall { radius: g.exp() });
        }
        points.push(c);
        potentials.push(g);
        i += 1;
    }
    let landing_estimate = *points.last().ok_or(Error::ContinuationStall { radius: g0.exp() })?;
    let cauchy_gap = if points.len() > s { (landing_estimate - points[points.len() - 1 - s]).norm() } else { f64::INFINITY };
    Ok(RayPath { angle: theta.clone(), points, potentials, landing_estimate, cauchy_gap })
}

#[derive(Clone, Debug, Serialize)]
pub struct RationalLamination {
    pub lamination: Lamination<RationalAngle>,
    pub landings: Vec<(RationalAngle, Complex64)>,
    /// Smallest distance between landing points placed in different classes.
    pub resolution: f64,
    /// Largest distance between landing points within one class.
    pub spread: f64,
    pub max_gap: f64,
}

pub const CLUSTER_TOLERANCE: f64 = 1e-6;

/// Landing point of the θ ray, finished off from a traced estimate: Newton on the holomorphic
/// return map for periodic angles, and for preperiodic ones the preimage of the polished image
/// landing nearest the estimate. The estimate is kept when polishing moves it more than 1e−2.
pub fn polished_landing(poly: &AntiPolynomial, theta: &RationalAngle, estimate: Complex64) -> Complex64 {
    polish(poly, theta, estimate, 0).filter(|z| (z - estimate).norm() < 1e-2).unwrap_or(estimate)
}

fn polish(poly: &AntiPolynomial, theta: &RationalAngle, estimate: Complex64, depth: usize) -> Option<Complex64> {
    if let Some(p) = exact_period(theta) {
        let q = if p % 2 == 0 { p } else { 2 * p };
        return super::periodic_point_near(poly, estimate, q);
    }
    if depth > 64 {
        return None;
    }
    let w = polish(poly, &m2_map(theta), poly.eval(estimate), depth + 1)?;
    // z̄² + c = w
    let r = (w - poly.c).sqrt().conj();
    Some(if (r - estimate).norm() <= (-r - estimate).norm() { r } else { -r })
}

/// Angles of period at most `max_period` under m₋₂, with their strictly preperiodic preimages.
pub fn lamination_angles(max_period: usize) -> Vec<RationalAngle> {
    let mut out = Vec::new();
    for n in 1..=max_period {
        for a in periodic_angles(n) {
            for p in m2_preimages(&a) {
                if crate::coding::exact_period(&p).is_none() {
                    out.push(p);
                }
            }
            out.push(a);
        }
    }
    out.sort();
    out.dedup();
    out
}

/// Co-landing classes of the rays at `lamination_angles(max_period)`.
pub fn rational_lamination(c: Complex64, max_period: usize, levels: usize) -> Result<RationalLamination> {
    let poly = AntiPolynomial::new(c);
    let angles = lamination_angles(max_period);
    let rays: Vec<RayPath> = angles.par_iter().map(|a| trace_dynamical_ray(&poly, a, levels)).collect::<Result<_>>()?;
    let pts: Vec<Complex64> = rays.iter().map(|r| polished_landing(&poly, &r.angle, r.landing_estimate)).collect();
    let groups = cluster_points(&pts, CLUSTER_TOLERANCE);
    let mut spread: f64 = 0.0;
    for g in &groups {
        for &i in g {
            for &j in g {
                spread = spread.max((pts[i] - pts[j]).norm());
            }
        }
    }
    let mut resolution = f64::INFINITY;
    for (x, gx) in groups.iter().enumerate() {
        for gy in &groups[x + 1..] {
            for &i in gx {
                for &j in gy {
                    resolution = resolution.min((pts[i] - pts[j]).norm());
                }
            }
        }
    }
    let classes: Vec<Vec<RationalAngle>> = groups.iter().filter(|g| g.len() > 1).map(|g| g.iter().map(|&i| angles[i].clone()).collect()).collect();
    Ok(RationalLamination {
        lamination: Lamination::from_classes(classes),
        landings: angles.iter().cloned().zip(pts).collect(),
        resolution,
        spread,
        max_gap: rays.iter().map(|r| r.cauchy_gap).fold(0.0, f64::max),
    })
}
