//! Combinatorial straightening between centers of the Schwarz family and the basilica limb of
//! the Tricorn, and the parabolic-index comparison on the real period-3 components.

use crate::coding::{periodic_angles, periodic_rho_itineraries, AngleCode, RationalAngle, RhoAngle, DEFAULT_DEPTH, E_inverse, E_of};
use crate::cycle::cluster_points;
use crate::error::{Error, Result};
use crate::lamination::{pullback_levels, pullback_lamination, Angle, Lamination, Leaf};
use crate::point::Finite;
use crate::portrait::generate_portrait_from_pair;
use crate::schwarz::{self, periodic_landing, SchwarzMap};
use crate::tricorn::{self, trace_dynamical_ray, trace_parameter_ray, AntiPolynomial};
use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;
use std::collections::HashSet;
use std::f64::consts::TAU;

const RAY_DEPTH: usize = 60;
const RAY_LEVELS: usize = 80;
const PARAMETER_LEVELS: usize = 14;
const LANDING_TOLERANCE: f64 = 1e-4;

/// Winding number of a closed polyline (last point joined to the first) about p.
pub fn winding_number(curve: &[Complex64], p: Complex64) -> i64 {
    let mut total = 0.0;
    for i in 0..curve.len() {
        let a = curve[i] - p;
        let b = curve[(i + 1) % curve.len()] - p;
        total += (b / a).arg();
    }
    (total / TAU).round() as i64
}

fn divisors_of_either(k: usize) -> Vec<usize> {
    (1..=2 * k).filter(|d| k.is_multiple_of(*d) || (2 * k).is_multiple_of(*d)).collect()
}

/// Smallest k ≥ 2 with F_a^k(0) = 0, to 1e−8.
pub fn schwarz_center_period(a: Complex64) -> Result<usize> {
    let map = SchwarzMap::new(Finite(a))?;
    let mut w = Finite(a);
    for k in 2..=64 {
        if w.finite().is_some_and(|z| z.norm() < 1e-8) {
            return Ok(k);
        }
        w = map.apply(w).map_err(|_| Error::InvalidInput(format!("{a} is not a center")))?;
    }
    Err(Error::InvalidInput(format!("{a} is not a center of period ≤ 64")))
}

/// Smallest k ≥ 1 with f_c^k(0) = 0, to 1e−8.
pub fn tricorn_center_period(c: Complex64) -> Result<usize> {
    let f = AntiPolynomial::new(c);
    let mut z = Complex64::new(0.0, 0.0);
    for k in 1..=64 {
        z = f.eval(z);
        if z.norm() < 1e-8 {
            return Ok(k);
        }
    }
    Err(Error::InvalidInput(format!("{c} is not a center of period ≤ 64")))
}

fn schwarz_is_fixed(map: &SchwarzMap, w: Complex64, k: usize) -> bool {
    let singular = [map.geometry.alpha, Complex64::new(map.geometry.cusp, 0.0)];
    if singular.iter().any(|s| (w - s).norm() < 1e-9) {
        return true;
    }
    map.iterate(Finite(w), k).ok().and_then(|v| v.finite()).is_some_and(|v| (v - w).norm() < 1e-6 * (1.0 + w.norm()))
}

/// Characteristic ρ-angle pair at a center of the Schwarz family: among co-landing rays of period
/// dividing k or 2k whose landing point is fixed by F^k, the pair that separates 0 from ∞ with
/// the ∞ side on the narrowest arc.
pub fn characteristic_angles_schwarz(a: Complex64) -> Result<(RhoAngle, RhoAngle)> {
    let k = schwarz_center_period(a)?;
    let map = SchwarzMap::new(Finite(a))?;
    let mut codes: Vec<AngleCode> = (0..3u8).map(|v| AngleCode::Vertex { prefix: Vec::new(), vertex: v }).collect();
    for d in divisors_of_either(k).into_iter().filter(|&d| d >= 2) {
        codes.extend(periodic_rho_itineraries(d).into_iter().map(AngleCode::Periodic));
    }
    let landed: Vec<(AngleCode, Complex64)> =
        codes.into_par_iter().filter_map(|code| periodic_landing(&map, &code).ok().map(|(w, _)| (code, w))).collect();
    let points: Vec<Complex64> = landed.iter().map(|x| x.1).collect();
    let mut best: Option<(num_rational::BigRational, RhoAngle, RhoAngle)> = None;
    for group in cluster_points(&points, LANDING_TOLERANCE) {
        if group.len() < 2 || !schwarz_is_fixed(&map, points[group[0]], k) {
            continue;
        }
        let w = points[group[0]];
        let mut class: Vec<RhoAngle> = group.iter().map(|&i| RhoAngle::from_code(landed[i].0.clone(), DEFAULT_DEPTH)).collect();
        class.sort_by_key(|x| x.key());
        let n = class.len();
        for i in 0..n {
            let (s, e) = (&class[i], &class[(i + 1) % n]);
            let width = s.key().ccw_to(&e.key());
            if best.as_ref().is_some_and(|b| b.0 <= width) {
                continue;
            }
            let r1 = schwarz::trace_dynamical_ray(&map, &s.code, RAY_DEPTH)?;
            let r2 = schwarz::trace_dynamical_ray(&map, &e.code, RAY_DEPTH)?;
            let mut curve = r1.points.clone();
            curve.push(w);
            curve.extend(r2.points.iter().rev());
            if winding_number(&curve, Complex64::new(0.0, 0.0)) == 0 {
                continue;
            }
            // A ray strictly inside the arc must end on the unbounded (∞) side.
            let mid = RationalAngle::from_ratio(s.key().value() + &width / num_rational::BigRational::from_integer(2.into()));
            let probe = RhoAngle::from_key(&mid);
            let inside = schwarz::trace_dynamical_ray(&map, &probe.code, RAY_DEPTH)?;
            // Rays share their first tiles, so test a point well past the common prefix.
            if winding_number(&curve, inside.points[inside.points.len() / 2]) != 0 {
                continue;
            }
            best = Some((width, s.clone(), e.clone()));
        }
    }
    best.map(|b| (b.1, b.2)).ok_or_else(|| Error::AmbiguousRoot(format!("no separating co-landing pair at a = {a}")))
}

/// Characteristic m₋₂ pair at a Tricorn center: the co-landing pair, landing on a point fixed by
/// f^k, whose sector holds the critical value c but not 0, of least width.
pub fn characteristic_angles_tricorn(c: Complex64) -> Result<(RationalAngle, RationalAngle)> {
    let k = tricorn_center_period(c)?;
    let f = AntiPolynomial::new(c);
    let angles: Vec<RationalAngle> = divisors_of_either(k).into_iter().flat_map(periodic_angles).collect();
    let rays: Vec<tricorn::RayPath> = angles.par_iter().filter_map(|t| trace_dynamical_ray(&f, t, RAY_LEVELS).ok()).collect();
    // Weakly repelling landing points are approached slowly; finish them off as periodic points.
    let points: Vec<Complex64> = rays.iter().map(|r| tricorn::polished_landing(&f, &r.angle, r.landing_estimate)).collect();
    let mut best: Option<(num_rational::BigRational, RationalAngle, RationalAngle)> = None;
    for group in cluster_points(&points, LANDING_TOLERANCE) {
        if group.len() < 2 {
            continue;
        }
        let w = points[group[0]];
        if (f.iterate(w, k) - w).norm() > 1e-5 * (1.0 + w.norm()) {
            continue;
        }
        let mut members: Vec<&tricorn::RayPath> = group.iter().map(|&i| &rays[i]).collect();
        members.sort_by(|x, y| x.angle.cmp(&y.angle));
        let n = members.len();
        for i in 0..n {
            let (r1, r2) = (members[i], members[(i + 1) % n]);
            let width = r1.angle.ccw_to(&r2.angle);
            if best.as_ref().is_some_and(|b| b.0 <= width) {
                continue;
            }
            let mut curve = r1.points.clone();
            curve.push(w);
            curve.extend(r2.points.iter().rev());
            // Close through the sector at the starting radius, clockwise from r2 back to r1.
            let radius = r1.points[0].norm();
            let (t1, span) = (r1.angle.to_f64(), RationalAngle::from_ratio(width.clone()).to_f64());
            for j in 1..256 {
                let t = t1 + span * (1.0 - j as f64 / 256.0);
                curve.push(Complex64::from_polar(radius, TAU * t));
            }
            if winding_number(&curve, c) != 0 && winding_number(&curve, Complex64::new(0.0, 0.0)) == 0 {
                best = Some((width, r1.angle.clone(), r2.angle.clone()));
            }
        }
    }
    best.map(|b| (b.1, b.2)).ok_or_else(|| Error::AmbiguousRoot(format!("no characteristic co-landing pair at c = {c}")))
}

fn grid_seeds(lo: Complex64, hi: Complex64, n: usize) -> Vec<Complex64> {
    let mut seeds = Vec::new();
    for i in 0..n {
        for j in 0..n {
            let x = lo.re + (hi.re - lo.re) * (i as f64 + 0.5) / n as f64;
            let y = lo.im + (hi.im - lo.im) * (j as f64 + 0.5) / n as f64;
            seeds.push(Complex64::new(x, y));
        }
    }
    seeds.extend((0..8 * n).map(|i| Complex64::new(lo.re + (hi.re - lo.re) * (i as f64 + 0.5) / (8 * n) as f64, 0.0)));
    seeds
}

fn dedupe(mut v: Vec<Complex64>) -> Vec<Complex64> {
    let mut out: Vec<Complex64> = Vec::new();
    v.sort_by(|a, b| a.re.partial_cmp(&b.re).unwrap().then(a.im.partial_cmp(&b.im).unwrap()));
    for mut z in v {
        if z.im.abs() < 1e-12 {
            z.im = 0.0;
        }
        if !out.iter().any(|w| (w - z).norm() < 1e-7) {
            out.push(z);
        }
    }
    out
}

/// Centers of exact period k in the Schwarz family, from a seed grid over the connectedness locus.
pub fn schwarz_centers(k: usize) -> Vec<Complex64> {
    let found: Vec<Complex64> = grid_seeds(Complex64::new(-0.3, -0.5), Complex64::new(0.5, 0.5), 24)
        .into_par_iter()
        .filter_map(|s| schwarz::find_center(k, Finite(s)).ok()?.finite())
        .filter(|a| schwarz_center_period(*a).ok() == Some(k))
        .collect();
    dedupe(found)
}

/// Centers of exact period k of the Tricorn, from a seed grid over |c| ≤ 2.
pub fn tricorn_centers(k: usize) -> Vec<Complex64> {
    let found: Vec<Complex64> = grid_seeds(Complex64::new(-2.2, -2.2), Complex64::new(2.2, 2.2), 40)
        .into_par_iter()
        .filter_map(|s| tricorn::find_center(k, s).ok())
        .filter(|c| tricorn_center_period(*c).ok() == Some(k))
        .collect();
    dedupe(found)
}

#[derive(Clone, Debug, Serialize)]
pub struct StraighteningResult {
    pub a: Complex64,
    pub c: Complex64,
    pub period: usize,
    pub characteristic_angles_s: (RhoAngle, RhoAngle),
    pub characteristic_angles_t: (RationalAngle, RationalAngle),
    pub verified_depth: usize,
    /// |F_a^k(0)| and |f_c^k(0)|.
    pub residuals: (f64, f64),
}

pub const VERIFY_DEPTH: usize = 6;

fn residuals(a: Complex64, c: Complex64, k: usize) -> (f64, f64) {
    let rs = SchwarzMap::new(Finite(a))
        .and_then(|m| m.iterate(Finite(a), k - 2))
        .ok()
        .and_then(|w| w.finite())
        .map_or(f64::INFINITY, |w| w.norm());
    let rt = AntiPolynomial::new(c).iterate(Complex64::new(0.0, 0.0), k).norm();
    (rs, rt)
}

/// χ(a) for a center a: push the characteristic pair through 𝓔, seed the Tricorn center search at
/// the ends of the two parameter rays, and accept the center whose own characteristic pair agrees.
pub fn chi_center(a: Complex64) -> Result<StraighteningResult> {
    let k = schwarz_center_period(a)?;
    let pair_s = characteristic_angles_schwarz(a)?;
    let pair_t = (E_of(&pair_s.0)?, E_of(&pair_s.1)?);
    let ends: Vec<Complex64> = [&pair_t.0, &pair_t.1]
        .iter()
        .map(|t| trace_parameter_ray(t, PARAMETER_LEVELS).map(|r| r.landing_estimate))
        .collect::<Result<_>>()
        .map_err(|e| Error::SeedFailed(format!("parameter rays: {e}")))?;
    let seed = (ends[0] + ends[1]) / 2.0;
    let accepts = |c: Complex64| tricorn_center_period(c).ok() == Some(k) && characteristic_angles_tricorn(c).ok().as_ref() == Some(&pair_t);
    let c = match tricorn::find_center(k, seed) {
        Ok(c) if accepts(c) => c,
        _ => {
            let mut all = tricorn_centers(k);
            all.sort_by(|x, y| (x - seed).norm().partial_cmp(&(y - seed).norm()).unwrap());
            all.into_iter().find(|&c| accepts(c)).ok_or_else(|| Error::SeedFailed(format!("no period-{k} Tricorn center with pair {:?}", pair_t)))?
        }
    };
    let c = if c.im.abs() < 1e-12 && a.im.abs() < 1e-12 { Complex64::new(c.re, 0.0) } else { c };
    let report = verify_straightening(a, c, VERIFY_DEPTH);
    if !report.passed {
        return Err(Error::VerificationFailed(report.mismatches.join("; ")));
    }
    Ok(StraighteningResult { a, c, period: k, characteristic_angles_s: pair_s, characteristic_angles_t: pair_t, verified_depth: VERIFY_DEPTH, residuals: residuals(a, c, k) })
}

/// χ⁻¹(c): pull the Tricorn characteristic pair back by 𝓔 and find the Schwarz center of the same
/// period carrying it; the round trip χ(a) = c is checked.
pub fn chi_inverse_center(c: Complex64) -> Result<StraighteningResult> {
    let k = tricorn_center_period(c)?;
    let pair_t = characteristic_angles_tricorn(c)?;
    let pair_s = (E_inverse(&pair_t.0), E_inverse(&pair_t.1));
    let a = schwarz_centers(k)
        .into_iter()
        .find(|&a| characteristic_angles_schwarz(a).ok().as_ref() == Some(&pair_s))
        .ok_or_else(|| Error::SeedFailed(format!("no period-{k} Schwarz center with pair ({}, {})", pair_s.0, pair_s.1)))?;
    let forward = chi_center(a)?;
    if (forward.c - c).norm() > 1e-8 {
        return Err(Error::VerificationFailed(format!("round trip gives {} instead of {c}", forward.c)));
    }
    Ok(forward)
}

#[derive(Clone, Debug, Serialize)]
pub struct StraighteningReport {
    pub depth: usize,
    pub passed: bool,
    pub leaves_schwarz: usize,
    pub leaves_tricorn: usize,
    pub mismatches: Vec<String>,
}

/// Build both pullback laminations from their own characteristic pairs and compare them level by
/// level after moving the ρ side through 𝓔.
pub fn verify_straightening(a: Complex64, c: Complex64, depth: usize) -> StraighteningReport {
    let mut report = StraighteningReport { depth, passed: false, leaves_schwarz: 0, leaves_tricorn: 0, mismatches: Vec::new() };
    let pair_s = match characteristic_angles_schwarz(a) {
        Ok(p) => p,
        Err(e) => {
            report.mismatches.push(format!("Schwarz pair: {e}"));
            return report;
        }
    };
    let pair_t = match characteristic_angles_tricorn(c) {
        Ok(p) => p,
        Err(e) => {
            report.mismatches.push(format!("Tricorn pair: {e}"));
            return report;
        }
    };
    let (ls, lt) = match (pullback_levels(&pair_s.0, &pair_s.1, depth), pullback_levels(&pair_t.0, &pair_t.1, depth)) {
        (Ok(s), Ok(t)) => (s, t),
        (s, t) => {
            for e in [s.err(), t.err()].into_iter().flatten() {
                report.mismatches.push(e.to_string());
            }
            return report;
        }
    };
    for (level, (s, t)) in ls.iter().zip(&lt).enumerate() {
        let moved: HashSet<Leaf<RationalAngle>> = s.iter().filter_map(|l| l.map(|x| E_of(x).expect("realized code")).ok()).collect();
        let target: HashSet<Leaf<RationalAngle>> = t.iter().cloned().collect();
        if moved != target {
            report.mismatches.push(format!("level {level}: {} leaves differ", moved.symmetric_difference(&target).count()));
        }
    }
    report.leaves_schwarz = ls.iter().flatten().collect::<HashSet<_>>().len();
    report.leaves_tricorn = lt.iter().flatten().collect::<HashSet<_>>().len();
    report.passed = report.mismatches.is_empty();
    report
}

#[derive(Clone, Debug, Serialize)]
pub struct ArcPoint {
    pub parameter: f64,
    pub cycle_point: f64,
    /// Derivative of the real first return; +1 on a parabolic arc, −1 at a cusp.
    pub derivative: f64,
    pub on_arc: bool,
    pub index: Complex64,
}

#[derive(Clone, Debug, Serialize)]
pub struct IndexExperiment {
    pub iota_s: f64,
    pub iota_t: f64,
    pub separation: f64,
    pub imaginary_parts: (f64, f64),
    pub schwarz_points: Vec<ArcPoint>,
    pub tricorn_points: Vec<ArcPoint>,
}

/// Brackets (inside, outside) around the two real ends of the period-3 components.
pub const SCHWARZ_BRACKETS: [(f64, f64); 2] = [(0.1878, 0.186), (0.1878, 0.19)];
pub const TRICORN_BRACKETS: [(f64, f64); 2] = [(-1.755, -1.74), (-1.755, -1.77)];

/// Parabolic indices of the period-3 cycle of the second iterate at the real boundary points of
/// the real period-3 components. The real parameter on each parabolic arc has critical Ecalle
/// height 0 by symmetry; the arcs are paired as the real arcs of corresponding components.
pub fn index_experiment() -> Result<IndexExperiment> {
    let schwarz_points = SCHWARZ_BRACKETS
        .iter()
        .map(|&b| {
            let p = schwarz::find_real_parabolic_boundary(3, b)?;
            let map = SchwarzMap::real(p.parameter)?;
            let index = schwarz::parabolic_index(&map, Complex64::new(p.point, 0.0), 6)?;
            Ok(ArcPoint { parameter: p.parameter, cycle_point: p.point, derivative: p.derivative, on_arc: p.derivative > 0.0, index })
        })
        .collect::<Result<Vec<_>>>()?;
    let tricorn_points = TRICORN_BRACKETS
        .iter()
        .map(|&b| {
            let p = tricorn::find_real_parabolic_boundary(3, b)?;
            let f = AntiPolynomial::real(p.parameter);
            let index = tricorn::parabolic_index(&f, Complex64::new(p.point, 0.0), 6)?;
            Ok(ArcPoint { parameter: p.parameter, cycle_point: p.point, derivative: p.derivative, on_arc: p.derivative > 0.0, index })
        })
        .collect::<Result<Vec<_>>>()?;
    let arc = |v: &[ArcPoint]| v.iter().find(|p| p.on_arc).map(|p| p.index).ok_or(Error::NoBracketedCrossing);
    let (is, it) = (arc(&schwarz_points)?, arc(&tricorn_points)?);
    Ok(IndexExperiment {
        iota_s: is.re,
        iota_t: it.re,
        separation: (is.re - it.re).abs(),
        imaginary_parts: (is.im, it.im),
        schwarz_points,
        tricorn_points,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum DescriptorKind {
    Center,
    Misiurewicz,
    RealParabolic,
}

#[derive(Clone, Debug, Serialize)]
pub struct GeometricallyFiniteDescriptor<A: Angle> {
    pub kind: DescriptorKind,
    pub period: usize,
    pub preperiod: usize,
    pub characteristic_angles: (A, A),
    pub lamination_prefix: Lamination<A>,
}

impl<A: Angle> GeometricallyFiniteDescriptor<A> {
    /// Descriptor of a center from its characteristic pair; the pair must generate a portrait.
    pub fn center(period: usize, pair: (A, A), depth: usize) -> Result<Self> {
        generate_portrait_from_pair(&pair.0, &pair.1)?;
        let lamination_prefix = pullback_lamination(&pair.0, &pair.1, depth)?;
        Ok(GeometricallyFiniteDescriptor { kind: DescriptorKind::Center, period, preperiod: 0, characteristic_angles: pair, lamination_prefix })
    }
}
