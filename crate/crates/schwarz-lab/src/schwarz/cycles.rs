//! Periodic cycles, multipliers, Koenigs ratios and parabolic indices for F_a.

use super::SchwarzMap;
use crate::error::{Error, Result};
use crate::index::{contour_index, IndexOptions};
use crate::point::{ComplexValue, Finite, Infinity};
use crate::wirtinger::WirtingerValue;
use num_complex::Complex64;
pub use crate::cycle::{CycleClass, CycleGrid, CycleRecord};
use crate::cycle::classify;

fn newton_fixed(map: &SchwarzMap, z0: Complex64, q: usize) -> Option<Complex64> {
    let mut z = z0;
    for _ in 0..60 {
        let (w, d) = map.iterate_with_derivative(z, q).ok()?;
        let h = w - z;
        let denom = d.value - 1.0;
        if denom.norm() < 1e-300 {
            return None;
        }
        let mut step = h / denom;
        let cap = 0.25 * (1.0 + z.norm());
        if step.norm() > cap {
            step *= cap / step.norm();
        }
        z -= step;
        if step.norm() < 1e-14 * (1.0 + z.norm()) {
            break;
        }
    }
    let (w, _) = map.iterate_with_derivative(z, q).ok()?;
    ((w - z).norm() < 1e-11 * (1.0 + z.norm())).then_some(z)
}

fn orbit(map: &SchwarzMap, start: ComplexValue, n: usize) -> Option<Vec<ComplexValue>> {
    let mut pts = vec![start];
    for _ in 1..n {
        pts.push(map.apply(*pts.last().unwrap()).ok()?);
    }
    Some(pts)
}

fn exact_period(map: &SchwarzMap, z: ComplexValue, period: usize, tol: f64) -> bool {
    let back = |k: usize| map.iterate(z, k).map(|w| w.approx_eq(&z, tol * (1.0 + z.finite().map_or(0.0, |v| v.norm()))));
    if back(period) != Ok(true) {
        return false;
    }
    // Proper divisors are checked with a looser tolerance: near a parabolic point Newton on
    // F^q stalls at spurious points a hair away from the lower-period cycle.
    let loose = |k: usize| {
        map.iterate(z, k)
            .map(|w| w.approx_eq(&z, 1e-4 * (1.0 + z.finite().map_or(0.0, |v| v.norm()))))
    };
    (1..period).filter(|d| period.is_multiple_of(*d)).all(|d| loose(d) != Ok(true))
}

fn same_cycle(c: &CycleRecord, z: &ComplexValue) -> bool {
    c.points.iter().any(|p| p.approx_eq(z, 1e-7))
}

pub fn find_cycles(map: &SchwarzMap, period: usize, grid: &CycleGrid) -> Vec<CycleRecord> {
    let mut out: Vec<CycleRecord> = Vec::new();
    let tol = map.tol.cycle;
    // The cycle through the critical point 0 and ∞.
    let zero = ComplexValue::real(0.0);
    if period >= 2 && exact_period(map, zero, period, tol) {
        if let Some(points) = orbit(map, zero, period) {
            out.push(CycleRecord {
                points,
                period,
                multiplier: WirtingerValue::zero(period % 2 == 1),
                classification: CycleClass::Superattracting,
            });
        }
    }
    let q = if period.is_multiple_of(2) { period } else { 2 * period };
    let n = grid.n.max(2);
    let cell = |i: usize| -grid.half_width + 2.0 * grid.half_width * (i as f64 + 0.5) / n as f64;
    let mut seeds: Vec<Complex64> = (0..n)
        .flat_map(|i| (0..n).map(move |j| (i, j)))
        .map(|(i, j)| grid.center + Complex64::new(cell(i), cell(j)))
        .collect();
    // Real seeds and the forward critical orbit catch cycles whose basins miss the grid.
    seeds.extend((0..8 * n).map(|i| {
        let t = -grid.half_width + 2.0 * grid.half_width * (i as f64 + 0.5) / (8 * n) as f64;
        Complex64::new(grid.center.re + t, grid.center.im)
    }));
    let mut w = Infinity;
    for _ in 0..400 {
        match map.apply(w) {
            Ok(next) => w = next,
            Err(_) => break,
        }
        if let Some(z) = w.finite() {
            seeds.push(z);
        }
    }
    for s in seeds {
        {
            let Some(z) = newton_fixed(map, s, q) else { continue };
            let zc = Finite(z);
            if !exact_period(map, zc, period, tol) || out.iter().any(|c| same_cycle(c, &zc)) {
                continue;
            }
            let Some(points) = orbit(map, zc, period) else { continue };
            let Ok(m) = cycle_multiplier(map, &points) else { continue };
            out.push(CycleRecord {
                points,
                period,
                multiplier: m,
                classification: classify(m.holomorphic_multiplier(), map.tol.neutral),
            });
        }
    }
    out
}

fn cycle_multiplier(map: &SchwarzMap, points: &[ComplexValue]) -> Result<WirtingerValue> {
    if points.iter().any(|p| p.is_infinite() || p.finite().is_some_and(|z| z.norm() < 1e-14)) {
        return Ok(WirtingerValue::zero(points.len() % 2 == 1));
    }
    let mut d = WirtingerValue::identity();
    for p in points {
        let (_, dw, _) = map.apply_with_derivative(p.finite().unwrap())?;
        d = d.then(dw);
    }
    Ok(d)
}

/// Chain-rule multiplier of F^period along the cycle; zero on the critical cycle.
pub fn multiplier(map: &SchwarzMap, cycle: &CycleRecord) -> Result<WirtingerValue> {
    cycle_multiplier(map, &cycle.points)
}

/// Attracting fixed point of F^{2k} reached by the critical orbit, and its multiplier.
fn critical_attractor(map: &SchwarzMap, k: usize) -> Result<(Complex64, Complex64)> {
    let q = 2 * k;
    let mut w = map.iterate(Infinity, q).map_err(|_| Error::NotOddAttracting(k))?;
    for _ in 0..200_000 {
        let next = map.iterate(w, q).map_err(|_| Error::NotOddAttracting(k))?;
        let done = next.approx_eq(&w, 1e-9 * (1.0 + w.finite().map_or(0.0, |z| z.norm())));
        w = next;
        if done {
            break;
        }
    }
    let z = w.finite().ok_or(Error::NotOddAttracting(k))?;
    let z = newton_fixed(map, z, q).ok_or(Error::NotOddAttracting(k))?;
    let (_, d) = map.iterate_with_derivative(z, q)?;
    Ok((z, d.value))
}

/// Koenigs coordinate κ(z) = lim λ^{-n}(F^{2kn}(z) − z_a), with one Richardson step.
fn koenigs_coordinate(map: &SchwarzMap, k: usize, z_a: Complex64, lambda: Complex64, v: Complex64) -> Result<Complex64> {
    let q = 2 * k;
    let scale = 1.0 + z_a.norm();
    let mut w = Finite(v);
    let mut pow = Complex64::new(1.0, 0.0);
    let mut prev: Option<Complex64> = None;
    let mut prev_extrap: Option<Complex64> = None;
    for _ in 0..100_000 {
        let z = w.finite().ok_or(Error::LinearizationDiverged)?;
        let kappa = (z - z_a) / pow;
        if let Some(p) = prev {
            let ex = (kappa - lambda * p) / (1.0 - lambda);
            if let Some(pe) = prev_extrap {
                if (ex - pe).norm() <= 1e-10 * ex.norm() || (z - z_a).norm() < 1e-7 * scale {
                    return Ok(ex);
                }
            }
            prev_extrap = Some(ex);
        }
        prev = Some(kappa);
        w = map.iterate(w, q).map_err(|_| Error::LinearizationDiverged)?;
        pow *= lambda;
    }
    Err(Error::LinearizationDiverged)
}

/// ζ = κ(F^k(v))/κ(v) for the critical-value representative v = F^{2k}(∞).
pub fn koenigs_ratio(map: &SchwarzMap, k: usize) -> Result<Complex64> {
    let v = map.iterate(Infinity, 2 * k).map_err(|_| Error::NotOddAttracting(k))?;
    koenigs_ratio_from(map, k, v)
}

pub fn koenigs_ratio_from(map: &SchwarzMap, k: usize, v: ComplexValue) -> Result<Complex64> {
    if k.is_multiple_of(2) {
        return Err(Error::NotOddAttracting(k));
    }
    let zero = ComplexValue::real(0.0);
    if map.iterate(zero, k).is_ok_and(|w| w.approx_eq(&zero, 1e-12)) {
        // Superattracting: the ratio is defined to be 0 at the center.
        return Ok(Complex64::new(0.0, 0.0));
    }
    let (z_a, lambda) = critical_attractor(map, k)?;
    if lambda.norm() >= 1.0 {
        return Err(Error::NotOddAttracting(k));
    }
    if lambda.norm() < 1e-12 {
        return Ok(Complex64::new(0.0, 0.0));
    }
    // F^k fixes z_a, so v and F^k(v) share the immediate basin of z_a under F^{2k}.
    let fk = map.iterate(v, k).map_err(|_| Error::LinearizationDiverged)?;
    let v = v.finite().ok_or(Error::LinearizationDiverged)?;
    let fk = fk.finite().ok_or(Error::LinearizationDiverged)?;
    let kv = koenigs_coordinate(map, k, z_a, lambda, v)?;
    let kf = koenigs_coordinate(map, k, z_a, lambda, fk)?;
    Ok(kf / kv)
}

/// Fixed-point index of F^{return_period} (return_period even) at a fixed point.
pub fn parabolic_index(map: &SchwarzMap, fixed_point: Complex64, return_period: usize) -> Result<Complex64> {
    if return_period % 2 == 1 {
        return Err(Error::InvalidInput("the index is taken for an even, holomorphic iterate".into()));
    }
    let g = |z: Complex64| map.iterate(Finite(z), return_period)?.finite().ok_or(Error::ContourThroughZero);
    contour_index(&g, fixed_point, IndexOptions::default())
}
