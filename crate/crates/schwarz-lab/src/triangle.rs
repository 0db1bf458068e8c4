//! The ideal triangle Π with vertices 1, ω, ω², its side reflections and the piecewise map ρ.

use crate::error::{Error, Result};
use crate::point::{ComplexValue, Finite, Infinity};
use num_complex::Complex64;
use serde::Serialize;
use std::f64::consts::TAU;
use std::fmt;

const SQRT3: f64 = 1.732_050_807_568_877_2;
pub const SIDE_RADIUS_SQ: f64 = 3.0;
const ON_SIDE: f64 = 1e-12;

/// Centers of the side circles; side j spans the boundary arc ((j−1)/3, j/3).
pub const SIDE_CENTERS: [Complex64; 3] = [
    Complex64::new(1.0, SQRT3),
    Complex64::new(-2.0, 0.0),
    Complex64::new(1.0, -SQRT3),
];

/// Vertices 1, ω, ω² as points of the unit circle.
pub const VERTICES: [Complex64; 3] = [
    Complex64::new(1.0, 0.0),
    Complex64::new(-0.5, SQRT3 / 2.0),
    Complex64::new(-0.5, -SQRT3 / 2.0),
];

#[derive(Clone, Copy, Debug, Default)]
pub struct IdealTriangle;

impl IdealTriangle {
    pub fn vertices(&self) -> [Complex64; 3] {
        VERTICES
    }

    pub fn side_circles(&self) -> [(Complex64, f64); 3] {
        SIDE_CENTERS.map(|c| (c, SQRT3))
    }

    /// True when z lies strictly inside Π (outside all three side circles).
    pub fn contains(&self, z: Complex64) -> bool {
        SIDE_CENTERS.iter().all(|c| (z - c).norm_sqr() > SIDE_RADIUS_SQ + ON_SIDE)
    }
}

fn check_side(j: u8) -> usize {
    assert!((1..=3).contains(&j), "side index must be 1, 2 or 3");
    (j - 1) as usize
}

/// ρ_j(z) = c_j + 3/conj(z − c_j).
pub fn side_reflection(j: u8, z: ComplexValue) -> ComplexValue {
    let cj = SIDE_CENTERS[check_side(j)];
    match z {
        Infinity => Finite(cj),
        Finite(z) => {
            let d = (z - cj).conj();
            if d == Complex64::new(0.0, 0.0) {
                Infinity
            } else {
                Finite(cj + SIDE_RADIUS_SQ / d)
            }
        }
    }
}

pub(crate) fn reflect(j: u8, z: Complex64) -> Complex64 {
    let cj = SIDE_CENTERS[(j - 1) as usize];
    cj + SIDE_RADIUS_SQ / (z - cj).conj()
}

pub fn rho_disk(z: ComplexValue) -> Result<ComplexValue> {
    let w = z.finite().ok_or_else(|| Error::InvalidInput("ρ is defined on the closed disk".into()))?;
    let j = (1..=3u8)
        .find(|&j| (w - SIDE_CENTERS[(j - 1) as usize]).norm_sqr() <= SIDE_RADIUS_SQ + ON_SIDE)
        .ok_or(Error::InteriorOfPi)?;
    Ok(Finite(reflect(j, w)))
}

/// Which third of the circle holds θ.
pub fn arc_symbol(theta: f64) -> Result<u8> {
    let t = theta.rem_euclid(1.0);
    for v in [0.0, 1.0 / 3.0, 2.0 / 3.0, 1.0] {
        if (t - v).abs() < ON_SIDE {
            return Err(Error::OnVertex(theta));
        }
    }
    Ok(if t < 1.0 / 3.0 {
        1
    } else if t < 2.0 / 3.0 {
        2
    } else {
        3
    })
}

pub fn angle_of(z: Complex64) -> f64 {
    (z.arg() / TAU).rem_euclid(1.0)
}

/// ρ on the boundary circle, in angle coordinates.
pub fn rho_circle(theta: f64) -> f64 {
    let t = theta.rem_euclid(1.0);
    match arc_symbol(t) {
        Err(_) => t,
        Ok(j) => angle_of(reflect(j, Complex64::from_polar(1.0, TAU * t))),
    }
}

/// Apply ρ_j to an angle, returning the image angle inside the closed arc j (lifted to [0,1]).
pub(crate) fn reflect_angle_into_arc(j: u8, theta: f64) -> f64 {
    let t = angle_of(reflect(j, Complex64::from_polar(1.0, TAU * theta)));
    let (lo, hi) = arc_bounds(j);
    if t < lo - 1e-12 {
        t + 1.0
    } else if t > hi + 1e-12 {
        t - 1.0
    } else {
        t
    }
}

pub fn arc_bounds(j: u8) -> (f64, f64) {
    let lo = (j - 1) as f64 / 3.0;
    (lo, lo + 1.0 / 3.0)
}

/// A finite word over {1, 2, 3}.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Word(pub Vec<u8>);

impl Word {
    pub fn new(symbols: Vec<u8>) -> Result<Word> {
        let w = Word(symbols);
        if w.is_admissible() {
            Ok(w)
        } else {
            Err(Error::InadmissibleWord(w.to_string()))
        }
    }

    pub fn is_admissible(&self) -> bool {
        self.0.iter().all(|s| (1..=3).contains(s)) && self.0.windows(2).all(|p| p[0] != p[1])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn symbols(&self) -> &[u8] {
        &self.0
    }

    pub fn parse(text: &str) -> Result<Word> {
        let syms = text
            .chars()
            .filter(|c| !c.is_whitespace() && *c != ',')
            .map(|c| match c {
                '1' => Ok(1),
                '2' => Ok(2),
                '3' => Ok(3),
                _ => Err(Error::InvalidInput(format!("bad symbol {c:?} in {text:?}"))),
            })
            .collect::<Result<Vec<u8>>>()?;
        Word::new(syms)
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for s in &self.0 {
            write!(f, "{s}")?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct DiskTile {
    pub word: Word,
    /// Images of 1, ω, ω² under the word's composition of reflections.
    pub vertex_list: [Complex64; 3],
}

impl DiskTile {
    pub fn rank(&self) -> usize {
        self.word.len()
    }

    /// Euclidean diameter; the sides bow inward so the vertices realize it.
    pub fn diameter(&self) -> f64 {
        let v = &self.vertex_list;
        (v[0] - v[1]).norm().max((v[1] - v[2]).norm()).max((v[0] - v[2]).norm())
    }

    /// A point inside the tile: the image of the center of Π.
    pub fn interior_point(&self) -> Complex64 {
        apply_word(&self.word, Complex64::new(0.0, 0.0))
    }
}

/// ρ_{i₁}∘…∘ρ_{i_k}(z).
pub fn apply_word(word: &Word, z: Complex64) -> Complex64 {
    word.0.iter().rev().fold(z, |acc, &j| reflect(j, acc))
}

pub fn tile_for_word(word: &Word) -> Result<DiskTile> {
    if !word.is_admissible() {
        return Err(Error::InadmissibleWord(word.to_string()));
    }
    Ok(DiskTile { word: word.clone(), vertex_list: VERTICES.map(|v| apply_word(word, v)) })
}

/// All admissible words of the given length.
pub fn admissible_words(len: usize) -> Vec<Word> {
    let mut out = vec![Vec::new()];
    for _ in 0..len {
        let mut next = Vec::with_capacity(out.len() * 3);
        for w in &out {
            for s in 1..=3u8 {
                if w.last() != Some(&s) {
                    let mut v: Vec<u8> = w.clone();
                    v.push(s);
                    next.push(v);
                }
            }
        }
        out = next;
    }
    out.into_iter().map(Word).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn side_circles_are_orthogonal() {
        for (c, r) in IdealTriangle.side_circles() {
            assert!((c.norm_sqr() - 1.0 - r * r).abs() < 1e-12);
        }
    }

    #[test]
    fn reflection_of_origin_by_side_two() {
        let z = side_reflection(2, ComplexValue::real(0.0)).finite().unwrap();
        assert!((z - Complex64::new(-0.5, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn arcs() {
        assert_eq!(arc_symbol(1.0 / 9.0), Ok(1));
        assert_eq!(arc_symbol(0.5), Ok(2));
        assert_eq!(arc_symbol(0.99), Ok(3));
        assert!(arc_symbol(2.0 / 3.0).is_err());
    }

    #[test]
    fn word_parsing() {
        assert_eq!(Word::parse("213").unwrap().0, vec![2, 1, 3]);
        assert!(Word::parse("11").is_err());
    }
}
