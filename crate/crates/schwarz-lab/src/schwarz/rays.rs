//! Dynamical rays of F_a by pulling back a fixed skeleton in the fundamental tile.
//!
//! The skeleton is a basepoint b with three short paths to the three sides of T_a (the circle,
//! the upper and lower boundary arcs of ♥) and two spines running to α_a. The ray with
//! itinerary (s₁, s₂, …) is the concatenation of the images of
//! `side s_n → b → side s_{n+1}` under B_{s₁}∘…∘B_{s_n}, where B_s is the inverse branch of
//! symbol s.

use super::SchwarzMap;
use crate::cardioid::{phi_c, CUSP};
use crate::coding::{AngleCode, Itinerary};
use crate::error::{Error, Result};
use crate::point::Finite;
use num_complex::Complex64;
use serde::Serialize;
use std::f64::consts::TAU;

const PATH_POINTS: usize = 10;
const SPINE_POINTS: usize = 48;

#[derive(Clone, Debug)]
pub struct RaySkeleton {
    pub basepoint: Complex64,
    /// paths[s−1] runs from the basepoint to side s.
    pub paths: [Vec<Complex64>; 3],
    /// Basepoint to α_a along the upper and lower halves of the tile.
    pub spine_upper: Vec<Complex64>,
    pub spine_lower: Vec<Complex64>,
    pub cusp_path: Vec<Complex64>,
}

fn linspace(p: Complex64, q: Complex64, n: usize) -> Vec<Complex64> {
    (0..n).map(|i| p + (q - p) * (i as f64 / (n - 1) as f64)).collect()
}

impl RaySkeleton {
    pub fn new(map: &SchwarzMap) -> RaySkeleton {
        let g = &map.geometry;
        let radial = |c: Complex64| {
            let d = c - g.a;
            let u = if d.norm() > 1e-14 { d / d.norm() } else { Complex64::new(1.0, 0.0) };
            g.a + u * g.r_a
        };
        // Halfway between ∂♥ and the circle, along rays from a.
        let midline = |theta: f64| {
            let c = phi_c(Complex64::from_polar(1.0, theta));
            (c + radial(c)) * 0.5
        };
        let cusp = Complex64::new(CUSP, 0.0);
        let b = midline(0.0);
        let th_a = g.t_alpha * TAU;
        let arc_path = |from: f64, to: f64| -> Vec<Complex64> {
            let mut v: Vec<Complex64> =
                (0..PATH_POINTS).map(|i| midline(from + (to - from) * i as f64 / (PATH_POINTS - 1) as f64)).collect();
            v.push(phi_c(Complex64::from_polar(1.0, to)));
            v
        };
        let spine = |from: f64, to: f64| -> Vec<Complex64> {
            let mut v: Vec<Complex64> =
                (0..SPINE_POINTS).map(|i| midline(from + (to - from) * i as f64 / SPINE_POINTS as f64)).collect();
            v.push(g.alpha);
            v
        };
        RaySkeleton {
            basepoint: b,
            paths: [arc_path(0.0, th_a / 2.0), linspace(b, radial(cusp), PATH_POINTS), arc_path(TAU, (TAU + th_a) / 2.0)],
            spine_upper: spine(0.0, th_a),
            spine_lower: spine(TAU, th_a),
            cusp_path: linspace(b, cusp, PATH_POINTS),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SchwarzRay {
    pub code: String,
    pub points: Vec<Complex64>,
    /// Images of the basepoint, one per level: the successive tile representatives.
    pub representatives: Vec<Complex64>,
    pub landing: Complex64,
    pub cauchy_gap: f64,
}

fn compose(map: &SchwarzMap, syms: &[u8], z: Complex64) -> Result<Complex64> {
    syms.iter().rev().try_fold(z, |w, &s| map.branch(w, s))
}

/// Among all preimages of z, the one nearest to `near`; used for the singular endpoint.
fn nearest_preimage(map: &SchwarzMap, z: Complex64, near: Complex64) -> Result<Complex64> {
    map.inverse_branches(Finite(z))
        .into_iter()
        .filter_map(|(w, _)| w.finite())
        .min_by(|p, q| (p - near).norm().partial_cmp(&(q - near).norm()).unwrap())
        .ok_or(Error::NoImage)
}

fn map_by_prefix(map: &SchwarzMap, prefix: &[u8], pts: &[Complex64], singular_last: bool) -> Result<Vec<Complex64>> {
    let n = pts.len();
    let mut out: Vec<Complex64> =
        pts[..n - usize::from(singular_last)].iter().map(|&p| compose(map, prefix, p)).collect::<Result<_>>()?;
    if singular_last {
        // Follow the polyline through each branch so the endpoint picks the matching preimage.
        let mut prev: Vec<Complex64> = vec![pts[n - 2]];
        let mut z = pts[n - 1];
        for &s in prefix.iter().rev() {
            let p = map.branch(prev[0], s)?;
            z = nearest_preimage(map, z, p)?;
            prev[0] = p;
        }
        out.push(z);
    }
    Ok(out)
}

pub fn trace_dynamical_ray(map: &SchwarzMap, code: &AngleCode, depth: usize) -> Result<SchwarzRay> {
    let sk = RaySkeleton::new(map);
    let b = sk.basepoint;
    let path = |s: u8| &sk.paths[(s - 1) as usize];
    let local = |syms: &[u8], n: usize| -> Vec<Complex64> {
        let mut v = Vec::new();
        if n >= 1 {
            v.extend(path(syms[n - 1]).iter().rev().skip(1));
        }
        v.extend(path(syms[n]).iter().skip(usize::from(n >= 1)));
        v
    };
    let mut points = Vec::new();
    let mut reps = vec![b];
    match code {
        AngleCode::Periodic(it) => {
            let syms = it.prefix(depth + 1);
            for n in 0..depth {
                let seg = local(&syms, n);
                for p in seg {
                    points.push(compose(map, &syms[..n], p)?);
                }
                reps.push(compose(map, &syms[..n + 1], b)?);
            }
            let landing = *reps.last().unwrap();
            points.push(landing);
            let gap = if reps.len() >= 2 { (reps[reps.len() - 1] - reps[reps.len() - 2]).norm() } else { f64::INFINITY };
            Ok(SchwarzRay { code: code.to_string(), points, representatives: reps, landing, cauchy_gap: gap })
        }
        AngleCode::Vertex { prefix, vertex } => {
            let m = prefix.len();
            for n in 0..m {
                for p in local(prefix, n) {
                    points.push(compose(map, &prefix[..n], p)?);
                }
                reps.push(compose(map, &prefix[..n + 1], b)?);
            }
            let tail = match vertex {
                0 => &sk.cusp_path,
                1 => &sk.spine_upper,
                _ => &sk.spine_lower,
            };
            let mut last = Vec::new();
            if m >= 1 {
                last.extend(path(prefix[m - 1]).iter().rev().skip(1));
                last.extend(tail.iter().skip(1));
            } else {
                last.extend(tail.iter());
            }
            let mapped = map_by_prefix(map, prefix, &last, true)?;
            let landing = *mapped.last().unwrap();
            points.extend(mapped);
            Ok(SchwarzRay { code: code.to_string(), points, representatives: reps, landing, cauchy_gap: 0.0 })
        }
    }
}

/// Landing point of a ray, found as the attracting fixed point of the periodic inverse branch
/// and then pulled back through the preperiod. Returns the point and the last step size.
pub fn periodic_landing(map: &SchwarzMap, code: &AngleCode) -> Result<(Complex64, f64)> {
    match code {
        AngleCode::Vertex { .. } => Ok((trace_dynamical_ray(map, code, 1)?.landing, 0.0)),
        AngleCode::Periodic(it) => {
            let Itinerary { preperiod, period } = it;
            let sk = RaySkeleton::new(map);
            let mut z = sk.basepoint;
            let mut step = f64::INFINITY;
            for _ in 0..20_000 {
                let next = compose(map, period, z)?;
                step = (next - z).norm();
                z = next;
                if step < 1e-15 * (1.0 + z.norm()) {
                    break;
                }
            }
            Ok((compose(map, preperiod, z)?, step))
        }
    }
}
