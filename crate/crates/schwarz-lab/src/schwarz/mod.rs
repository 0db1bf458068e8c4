//! The circle-and-cardioid family F_a: σ on ♥̄, reflection in |w − a| = r_a outside the disk.

mod cycles;
mod rays;
mod solve;

pub use cycles::{find_cycles, koenigs_ratio, koenigs_ratio_from, multiplier, parabolic_index, CycleClass, CycleGrid, CycleRecord};
pub use rays::{periodic_landing, trace_dynamical_ray, RaySkeleton, SchwarzRay};
pub use solve::{find_center, find_real_parabolic_boundary, slit_orbit_check};

use crate::cardioid::{
    circle_reflect, circle_reflect_wirtinger, circumcircle_with, droplet_contains_with, lambda_of, phi_c, phi_inverse_roots,
    sector_symbol, sigma_from_lambda, sigma_wirtinger_lambda, DropletClass, DropletGeometry, CUSP,
};
use crate::error::{Error, Result};
use crate::point::{ComplexValue, Finite, Infinity};
use crate::tolerances::Tolerances;
use crate::triangle::Word;
use crate::wirtinger::WirtingerValue;
use num_complex::Complex64;
use serde::Serialize;

const IN_DISK_SLACK: f64 = 1e-12;

#[derive(Clone, Debug)]
pub struct SchwarzMap {
    pub a: Complex64,
    pub geometry: DropletGeometry,
    pub tol: Tolerances,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EscapeRecord {
    pub escapes: bool,
    pub rank: usize,
    pub address: Word,
    pub terminal: ComplexValue,
    /// The orbit entered a singular collar; such points are left out of statistics.
    pub singular: bool,
}

impl SchwarzMap {
    pub fn new(a: ComplexValue) -> Result<SchwarzMap> {
        SchwarzMap::with_tolerances(a, Tolerances::default())
    }

    pub fn real(a: f64) -> Result<SchwarzMap> {
        SchwarzMap::new(ComplexValue::real(a))
    }

    pub fn with_tolerances(a: ComplexValue, tol: Tolerances) -> Result<SchwarzMap> {
        let geometry = circumcircle_with(a, &tol)?;
        Ok(SchwarzMap { a: geometry.a, geometry, tol })
    }

    fn near_singular(&self, z: Complex64) -> bool {
        (z - self.geometry.alpha).norm() < self.tol.singular || (z - Complex64::new(CUSP, 0.0)).norm() < self.tol.singular
    }

    fn cardioid_lambda(&self, z: Complex64) -> Option<Complex64> {
        let l = lambda_of(z);
        (l.norm() <= 1.0 + IN_DISK_SLACK).then_some(l)
    }

    pub fn apply(&self, w: ComplexValue) -> Result<ComplexValue> {
        let z = match w {
            Infinity => return Ok(Finite(self.a)),
            Finite(z) => z,
        };
        if self.near_singular(z) {
            return Err(Error::SingularPoint);
        }
        if let Some(l) = self.cardioid_lambda(z) {
            return Ok(sigma_from_lambda(l));
        }
        if (z - self.a).norm() >= self.geometry.r_a {
            return Ok(circle_reflect(&self.geometry, w));
        }
        Err(Error::NoImage)
    }

    /// Image, derivative and symbol at a finite non-critical point.
    pub fn apply_with_derivative(&self, z: Complex64) -> Result<(ComplexValue, WirtingerValue, u8)> {
        if self.near_singular(z) {
            return Err(Error::SingularPoint);
        }
        if let Some(l) = self.cardioid_lambda(z) {
            let d = sigma_wirtinger_lambda(l).map_err(|e| if e == Error::CriticalPoint { Error::DerivativeAtCritical } else { e })?;
            return Ok((sigma_from_lambda(l), WirtingerValue::anti(d), sector_symbol(&self.geometry, l)));
        }
        if (z - self.a).norm() >= self.geometry.r_a {
            let d = circle_reflect_wirtinger(&self.geometry, z);
            return Ok((circle_reflect(&self.geometry, Finite(z)), WirtingerValue::anti(d), 2));
        }
        Err(Error::NoImage)
    }

    /// Forward symbol: 2 outside the closed disk, sector rule on ♥̄.
    pub fn symbol_of(&self, w: ComplexValue) -> u8 {
        match w {
            Infinity => 2,
            Finite(z) => match self.cardioid_lambda(z) {
                Some(l) => sector_symbol(&self.geometry, l),
                None => 2,
            },
        }
    }

    pub fn classify(&self, w: ComplexValue) -> DropletClass {
        droplet_contains_with(&self.geometry, w, &self.tol)
    }

    pub fn classify_point(&self, w: ComplexValue, max_iter: usize) -> EscapeRecord {
        let mut z = w;
        let mut address = Vec::new();
        for n in 0..=max_iter {
            match self.classify(z) {
                DropletClass::Interior | DropletClass::BoundaryRegular => {
                    resolve_heart_runs(&mut address);
                    return EscapeRecord { escapes: true, rank: n, address: Word(address), terminal: z, singular: false };
                }
                DropletClass::Singular => {
                    return EscapeRecord { escapes: false, rank: n, address: Word(address), terminal: z, singular: true };
                }
                DropletClass::Outside => {}
            }
            if n == max_iter {
                break;
            }
            address.push(self.symbol_of(z));
            z = match self.apply(z) {
                Ok(next) => next,
                Err(_) => return EscapeRecord { escapes: false, rank: n, address: Word(address), terminal: z, singular: true },
            };
        }
        EscapeRecord { escapes: false, rank: max_iter, address: Word(address), terminal: z, singular: false }
    }

    pub fn iterate(&self, w: ComplexValue, n: usize) -> Result<ComplexValue> {
        (0..n).try_fold(w, |z, _| self.apply(z))
    }

    /// F^n with its derivative; fails if the orbit meets 0, ∞ or a singular point.
    pub fn iterate_with_derivative(&self, z: Complex64, n: usize) -> Result<(Complex64, WirtingerValue)> {
        let mut d = WirtingerValue::identity();
        let mut w = z;
        for _ in 0..n {
            let (next, dw, _) = self.apply_with_derivative(w)?;
            d = d.then(dw);
            w = next.finite().ok_or(Error::DerivativeAtCritical)?;
        }
        Ok((w, d))
    }

    /// The real map y ↦ F^k(y) and its derivative, for real a and real y.
    pub fn real_return(&self, y: f64, k: usize) -> Result<(f64, f64)> {
        let (w, d) = self.iterate_with_derivative(Complex64::new(y, 0.0), k)?;
        Ok((w.re, d.value.re))
    }

    /// σ-preimages of a finite z with their sector labels.
    fn sigma_preimages(&self, z: Complex64) -> Vec<(Complex64, Complex64)> {
        phi_inverse_roots(z)
            .into_iter()
            .filter(|x| x.norm() >= 1.0)
            .map(|x| {
                let l = 1.0 / x.conj();
                (phi_c(l), l)
            })
            .collect()
    }

    pub fn inverse_branches(&self, z: ComplexValue) -> Vec<(ComplexValue, u8)> {
        let z = match z {
            Infinity => return vec![(Finite(Complex64::new(0.0, 0.0)), sector_symbol(&self.geometry, Complex64::new(0.0, 0.0)))],
            Finite(z) => z,
        };
        let mut out = Vec::with_capacity(3);
        if (z - self.a).norm() <= self.geometry.r_a * (1.0 + IN_DISK_SLACK) {
            out.push((circle_reflect(&self.geometry, Finite(z)), 2));
        }
        let pre = self.sigma_preimages(z);
        let mut labels: Vec<u8> = pre.iter().map(|(_, l)| sector_symbol(&self.geometry, *l)).collect();
        if labels.len() == 2 && labels[0] == labels[1] {
            // Keep the two labels distinct: the one further counter-clockwise is symbol 3.
            let t = |l: Complex64| l.arg().rem_euclid(std::f64::consts::TAU);
            let later = usize::from(t(pre[1].1) > t(pre[0].1));
            labels[later] = 3;
            labels[1 - later] = 1;
        }
        out.extend(pre.into_iter().zip(labels).map(|((w, _), s)| (Finite(w), s)));
        out
    }

    /// The inverse branch with symbol s, used by ray pullback.
    pub(crate) fn branch(&self, z: Complex64, s: u8) -> Result<Complex64> {
        if s == 2 {
            if (z - self.a).norm() > self.geometry.r_a * (1.0 + 1e-9) {
                return Err(Error::NoImage);
            }
            return circle_reflect(&self.geometry, Finite(z)).finite().ok_or(Error::NoImage);
        }
        let pre = self.sigma_preimages(z);
        match pre.len() {
            0 => Err(Error::NoImage),
            1 => Ok(pre[0].0),
            _ => {
                if (pre[0].0 - pre[1].0).norm() < self.tol.branch {
                    return Err(Error::BranchAmbiguity);
                }
                let branches = self.inverse_branches(Finite(z));
                branches
                    .into_iter()
                    .find(|(_, sym)| *sym == s)
                    .and_then(|(w, _)| w.finite())
                    .ok_or(Error::NoImage)
            }
        }
    }
}

/// A point of ♥ whose image is again in ♥ lies on the opposite side of the 1/3 partition from its
/// image. The sector rule is kept only where the orbit leaves ♥; earlier symbols in a run of
/// consecutive ♥ visits alternate backwards from there.
fn resolve_heart_runs(address: &mut [u8]) {
    for k in (0..address.len().saturating_sub(1)).rev() {
        if address[k] != 2 && address[k + 1] != 2 {
            address[k] = 4 - address[k + 1];
        }
    }
}

#[allow(non_snake_case)]
pub fn F_apply(map: &SchwarzMap, w: ComplexValue) -> Result<ComplexValue> {
    map.apply(w)
}

pub fn classify_point(map: &SchwarzMap, w: ComplexValue, max_iter: usize) -> EscapeRecord {
    map.classify_point(w, max_iter)
}

pub fn inverse_branches(map: &SchwarzMap, z: ComplexValue) -> Vec<(ComplexValue, u8)> {
    map.inverse_branches(z)
}

/// Number of iterations for ∞ to reach the fundamental tile.
pub fn depth(a: ComplexValue, max_iter: usize) -> Result<usize> {
    let map = SchwarzMap::new(a)?;
    let rec = map.classify_point(Infinity, max_iter);
    if rec.escapes {
        Ok(rec.rank)
    } else {
        Err(Error::NonEscaping)
    }
}

/// Escape record of the critical value ∞ for a parameter, or None on the slit.
pub fn parameter_record(a: Complex64, max_iter: usize, tol: &Tolerances) -> Option<EscapeRecord> {
    let map = SchwarzMap::with_tolerances(Finite(a), *tol).ok()?;
    Some(map.classify_point(Infinity, max_iter))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn critical_orbit_at_zero() {
        let m = SchwarzMap::real(0.0).unwrap();
        assert_eq!(m.apply(ComplexValue::real(0.0)).unwrap(), Infinity);
        assert_eq!(m.apply(Infinity).unwrap(), ComplexValue::real(0.0));
    }

    #[test]
    fn interior_of_droplet_has_no_image() {
        let m = SchwarzMap::real(0.0).unwrap();
        assert_eq!(m.apply(ComplexValue::real(0.7)), Err(Error::NoImage));
    }

    #[test]
    fn heart_runs_alternate_backwards() {
        let mut w = vec![2, 1, 3, 1, 1, 2, 3, 3];
        resolve_heart_runs(&mut w);
        assert_eq!(w, vec![2, 3, 1, 3, 1, 2, 1, 3]);
    }

    #[test]
    fn complex_parameter_address_is_admissible() {
        let rec = parameter_record(Complex64::new(0.0674365234375, 0.0965576171875), 200, &Tolerances::default()).unwrap();
        assert!(rec.escapes);
        assert!(rec.address.is_admissible(), "{:?}", rec.address);
    }
}
