//! Periodic cycle records shared by both families.

use crate::point::ComplexValue;
use crate::wirtinger::WirtingerValue;
use num_complex::Complex64;
use serde::Serialize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum CycleClass {
    Superattracting,
    Attracting,
    Parabolic,
    Repelling,
}

#[derive(Clone, Debug, Serialize)]
pub struct CycleRecord {
    pub points: Vec<ComplexValue>,
    pub period: usize,
    /// Derivative of F^period at the first point; anti-holomorphic for odd periods.
    pub multiplier: WirtingerValue,
    pub classification: CycleClass,
}

impl CycleRecord {
    /// Multiplier of the first holomorphic return map (F^period or F^{2·period}).
    pub fn holomorphic_multiplier(&self) -> Complex64 {
        self.multiplier.holomorphic_multiplier()
    }

    pub fn contains_critical(&self) -> bool {
        self.points.iter().any(|p| p.is_infinite() || p.finite().is_some_and(|z| z.norm() < 1e-12))
    }
}

/// Square seed grid for the Newton search.
#[derive(Clone, Copy, Debug)]
pub struct CycleGrid {
    pub center: Complex64,
    pub half_width: f64,
    pub n: usize,
}

impl Default for CycleGrid {
    fn default() -> Self {
        CycleGrid { center: Complex64::new(0.0, 0.0), half_width: 1.5, n: 24 }
    }
}

pub(crate) fn classify(m: Complex64, neutral: f64) -> CycleClass {
    let r = m.norm();
    if r < 1e-12 {
        CycleClass::Superattracting
    } else if r < 1.0 - neutral {
        CycleClass::Attracting
    } else if r > 1.0 + neutral {
        CycleClass::Repelling
    } else {
        CycleClass::Parabolic
    }
}

/// Single-linkage clusters of points within `tol`.
pub fn cluster_points(points: &[Complex64], tol: f64) -> Vec<Vec<usize>> {
    let n = points.len();
    let mut parent: Vec<usize> = (0..n).collect();
    fn root(p: &mut [usize], mut i: usize) -> usize {
        while p[i] != i {
            p[i] = p[p[i]];
            i = p[i];
        }
        i
    }
    for i in 0..n {
        for j in i + 1..n {
            if (points[i] - points[j]).norm() < tol {
                let (a, b) = (root(&mut parent, i), root(&mut parent, j));
                parent[a] = b;
            }
        }
    }
    let mut groups: std::collections::BTreeMap<usize, Vec<usize>> = Default::default();
    for i in 0..n {
        let r = root(&mut parent, i);
        groups.entry(r).or_default().push(i);
    }
    groups.into_values().collect()
}
