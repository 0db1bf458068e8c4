//! Exact symbolic coding of circle angles under m₋₂ (θ ↦ −2θ) and ρ, and the conjugacy 𝓔
//! between them, realized by matching itineraries.

use crate::error::{Error, Result};
use crate::triangle::{arc_bounds, arc_symbol, reflect_angle_into_arc, rho_circle};
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Serialize, Serializer};
use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

/// A rational point of ℝ/ℤ, kept reduced in [0, 1).
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RationalAngle(BigRational);

fn frac(r: BigRational) -> BigRational {
    let f = r.floor();
    r - f
}

impl RationalAngle {
    pub fn new(num: i64, den: i64) -> RationalAngle {
        assert!(den != 0, "zero denominator");
        RationalAngle::from_ratio(BigRational::new(num.into(), den.into()))
    }

    pub fn from_ratio(r: BigRational) -> RationalAngle {
        RationalAngle(frac(r))
    }

    pub fn zero() -> RationalAngle {
        RationalAngle(BigRational::zero())
    }

    pub fn value(&self) -> &BigRational {
        &self.0
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn to_f64(&self) -> f64 {
        self.0.numer().to_f64().unwrap_or(f64::NAN) / self.0.denom().to_f64().unwrap_or(f64::NAN)
    }

    /// Index 0, 1, 2 when the angle is the fixed point 0, 1/3, 2/3.
    pub fn fixed_index(&self) -> Option<u8> {
        let three = BigInt::from(3);
        if self.0.is_zero() {
            Some(0)
        } else if self.0.denom() == &three {
            Some(self.0.numer().to_u8().unwrap_or(0))
        } else {
            None
        }
    }

    /// The open third of the circle holding the angle.
    pub fn arc(&self) -> Option<u8> {
        if self.fixed_index().is_some() {
            return None;
        }
        let three_x = &self.0 * BigRational::from_integer(3.into());
        Some(three_x.floor().to_integer().to_u8().unwrap_or(0) + 1)
    }

    /// Counter-clockwise length from self to other, in [0, 1).
    pub fn ccw_to(&self, other: &RationalAngle) -> BigRational {
        frac(&other.0 - &self.0)
    }

    pub fn parse(text: &str) -> Result<RationalAngle> {
        let bad = || Error::InvalidInput(format!("bad angle {text:?}"));
        let t = text.trim();
        let r = match t.split_once('/') {
            Some((p, q)) => {
                let p = BigInt::from_str(p.trim()).map_err(|_| bad())?;
                let q = BigInt::from_str(q.trim()).map_err(|_| bad())?;
                if q.is_zero() {
                    return Err(bad());
                }
                BigRational::new(p, q)
            }
            None => BigRational::from_integer(BigInt::from_str(t).map_err(|_| bad())?),
        };
        Ok(RationalAngle::from_ratio(r))
    }
}

impl fmt::Display for RationalAngle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.0.numer(), self.0.denom())
    }
}

impl Serialize for RationalAngle {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

pub fn m2_map(theta: &RationalAngle) -> RationalAngle {
    RationalAngle::from_ratio(-theta.value() * BigRational::from_integer(2.into()))
}

/// The two m₋₂ preimages, (1 − θ)/2 and (2 − θ)/2.
pub fn m2_preimages(theta: &RationalAngle) -> [RationalAngle; 2] {
    let half = BigRational::new(1.into(), 2.into());
    [1, 2].map(|k| RationalAngle::from_ratio((BigRational::from_integer(k.into()) - theta.value()) * &half))
}

/// Eventually periodic symbol sequence: preperiod followed by the period repeated forever.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Itinerary {
    pub preperiod: Vec<u8>,
    pub period: Vec<u8>,
}

fn primitive_root(p: &[u8]) -> Vec<u8> {
    let n = p.len();
    for d in 1..n {
        if n.is_multiple_of(d) && (0..n).all(|i| p[i] == p[i % d]) {
            return p[..d].to_vec();
        }
    }
    p.to_vec()
}

impl Itinerary {
    pub fn periodic(period: Vec<u8>) -> Itinerary {
        Itinerary { preperiod: Vec::new(), period }.normalized()
    }

    pub fn new(preperiod: Vec<u8>, period: Vec<u8>) -> Result<Itinerary> {
        if period.is_empty() {
            return Err(Error::InvalidInput("empty period".into()));
        }
        let it = Itinerary { preperiod, period }.normalized();
        if !it.is_admissible() {
            return Err(Error::InadmissibleWord(it.to_string()));
        }
        Ok(it)
    }

    /// Primitive period, shortest preperiod.
    pub fn normalized(mut self) -> Itinerary {
        self.period = primitive_root(&self.period);
        while let (Some(&a), Some(&b)) = (self.preperiod.last(), self.period.last()) {
            if a != b {
                break;
            }
            self.preperiod.pop();
            self.period.rotate_right(1);
        }
        self
    }

    pub fn is_admissible(&self) -> bool {
        if self.period.is_empty() {
            return false;
        }
        let ok = |s: &u8| (1..=3).contains(s);
        if !self.preperiod.iter().all(ok) || !self.period.iter().all(ok) {
            return false;
        }
        let n = self.preperiod.len() + self.period.len() + 1;
        (0..n).all(|i| self.symbol(i) != self.symbol(i + 1))
    }

    pub fn is_periodic(&self) -> bool {
        self.preperiod.is_empty()
    }

    pub fn symbol(&self, i: usize) -> u8 {
        if i < self.preperiod.len() {
            self.preperiod[i]
        } else {
            self.period[(i - self.preperiod.len()) % self.period.len()]
        }
    }

    pub fn prefix(&self, n: usize) -> Vec<u8> {
        (0..n).map(|i| self.symbol(i)).collect()
    }

    /// Itinerary of the image point.
    pub fn shift(&self) -> Itinerary {
        let mut it = self.clone();
        if it.preperiod.is_empty() {
            it.period.rotate_left(1);
        } else {
            it.preperiod.remove(0);
        }
        it
    }

    pub fn parse(text: &str) -> Result<Itinerary> {
        let bad = || Error::InvalidInput(format!("bad itinerary {text:?}"));
        let digits = |s: &str| -> Result<Vec<u8>> {
            s.chars()
                .filter(|c| !c.is_whitespace())
                .map(|c| c.to_digit(10).filter(|d| (1..=3).contains(d)).map(|d| d as u8).ok_or_else(bad))
                .collect()
        };
        let (pre, per) = text.split_once('|').unwrap_or(("", text));
        Itinerary::new(digits(pre)?, digits(per)?)
    }
}

impl fmt::Display for Itinerary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for s in &self.preperiod {
            write!(f, "{s}")?;
        }
        write!(f, "|")?;
        for s in &self.period {
            write!(f, "{s}")?;
        }
        Ok(())
    }
}

/// Exact m₋₂ itinerary; fails if the orbit lands on a fixed angle.
pub fn itinerary_of_rational(theta: &RationalAngle) -> Result<Itinerary> {
    match code_of_rational(theta) {
        AngleCode::Periodic(it) => Ok(it),
        AngleCode::Vertex { prefix, .. } => Err(Error::HitsFixedPoint { index: prefix.len() }),
    }
}

/// Preimage of y under m₋₂ inside the open arc s, if any.
fn pull_back_into_arc(y: &RationalAngle, s: u8) -> Option<RationalAngle> {
    m2_preimages(y).into_iter().find(|x| x.arc() == Some(s))
}

pub fn rational_from_itinerary(it: &Itinerary) -> Result<RationalAngle> {
    let no = || Error::NoRealization(it.to_string());
    if !it.is_admissible() {
        return Err(Error::InadmissibleWord(it.to_string()));
    }
    let p = it.period.len();
    // Inverse branches are x = (k − y)/2; k is forced by the arc and, for arc 2, by the next arc.
    let branch = |s: u8, next: u8| -> i64 {
        match s {
            1 => 1,
            3 => 2,
            _ if next == 1 => 1,
            _ => 2,
        }
    };
    let mut sum = BigRational::zero();
    let mut scale = BigRational::new(1.into(), 2.into());
    let minus_half = BigRational::new((-1).into(), 2.into());
    for i in 0..p {
        let k = branch(it.period[i], it.period[(i + 1) % p]);
        sum += &scale * BigRational::from_integer(k.into());
        scale *= &minus_half;
    }
    let denom = BigRational::one() - num_traits::pow(minus_half, p);
    let mut x = RationalAngle::from_ratio(sum / denom);
    if x.arc() != Some(it.period[0]) {
        return Err(no());
    }
    for &s in it.preperiod.iter().rev() {
        x = pull_back_into_arc(&x, s).ok_or_else(no)?;
    }
    match itinerary_of_rational(&x) {
        Ok(back) if &back == it => Ok(x),
        _ => Err(no()),
    }
}

/// Symbolic code of any rational angle: an itinerary, or a finite prefix ending on a fixed angle.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum AngleCode {
    Periodic(Itinerary),
    /// `vertex` is 0, 1, 2 for the fixed angles 0, 1/3, 2/3.
    Vertex { prefix: Vec<u8>, vertex: u8 },
}

pub fn code_of_rational(theta: &RationalAngle) -> AngleCode {
    let mut seen: HashMap<RationalAngle, usize> = HashMap::new();
    let mut syms = Vec::new();
    let mut x = theta.clone();
    loop {
        if let Some(v) = x.fixed_index() {
            return AngleCode::Vertex { prefix: syms, vertex: v };
        }
        if let Some(&start) = seen.get(&x) {
            let period = syms.split_off(start);
            return AngleCode::Periodic(Itinerary { preperiod: syms, period }.normalized());
        }
        seen.insert(x.clone(), syms.len());
        syms.push(x.arc().expect("non-fixed angle has an arc"));
        x = m2_map(&x);
    }
}

pub fn rational_from_code(code: &AngleCode) -> Result<RationalAngle> {
    match code {
        AngleCode::Periodic(it) => rational_from_itinerary(it),
        AngleCode::Vertex { prefix, vertex } => {
            let mut x = RationalAngle::new(*vertex as i64, 3);
            for &s in prefix.iter().rev() {
                x = pull_back_into_arc(&x, s).ok_or_else(|| Error::NoRealization(code.to_string()))?;
            }
            Ok(x)
        }
    }
}

impl AngleCode {
    pub fn shift(&self) -> AngleCode {
        match self {
            AngleCode::Periodic(it) => AngleCode::Periodic(it.shift()),
            AngleCode::Vertex { prefix, vertex } => {
                AngleCode::Vertex { prefix: prefix.get(1..).unwrap_or(&[]).to_vec(), vertex: *vertex }
            }
        }
    }

    /// First `n` symbols; vertex codes stop at the vertex.
    pub fn prefix(&self, n: usize) -> Vec<u8> {
        match self {
            AngleCode::Periodic(it) => it.prefix(n),
            AngleCode::Vertex { prefix, .. } => prefix.iter().take(n).copied().collect(),
        }
    }

    pub fn itinerary(&self) -> Option<&Itinerary> {
        match self {
            AngleCode::Periodic(it) => Some(it),
            AngleCode::Vertex { .. } => None,
        }
    }

    /// (preperiod, period); vertex codes have period 1.
    pub fn period_data(&self) -> (usize, usize) {
        match self {
            AngleCode::Periodic(it) => (it.preperiod.len(), it.period.len()),
            AngleCode::Vertex { prefix, .. } => (prefix.len(), 1),
        }
    }

    pub fn parse(text: &str) -> Result<AngleCode> {
        match text.split_once('@') {
            None => Ok(AngleCode::Periodic(Itinerary::parse(text)?)),
            Some((pre, v)) => {
                let vertex = match v.trim() {
                    "0" => 0,
                    "1/3" => 1,
                    "2/3" => 2,
                    _ => return Err(Error::InvalidInput(format!("bad vertex in {text:?}"))),
                };
                let prefix: Vec<u8> = crate::triangle::Word::parse(pre)?.0;
                let code = AngleCode::Vertex { prefix, vertex };
                rational_from_code(&code)?;
                Ok(code)
            }
        }
    }
}

impl fmt::Display for AngleCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AngleCode::Periodic(it) => write!(f, "{it}"),
            AngleCode::Vertex { prefix, vertex } => {
                for s in prefix {
                    write!(f, "{s}")?;
                }
                write!(f, "@{}", ["0", "1/3", "2/3"][*vertex as usize])
            }
        }
    }
}

/// A (pre)periodic angle of ρ, known exactly by its code and approximately by position.
#[derive(Clone, Debug)]
pub struct RhoAngle {
    pub code: AngleCode,
    pub numeric: f64,
    pub precision: f64,
}

impl PartialEq for RhoAngle {
    fn eq(&self, other: &Self) -> bool {
        self.code == other.code
    }
}
impl Eq for RhoAngle {}

impl std::hash::Hash for RhoAngle {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.code.hash(state)
    }
}

impl fmt::Display for RhoAngle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.code)
    }
}

impl Serialize for RhoAngle {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.code.to_string())
    }
}

pub const DEFAULT_DEPTH: usize = 60;

impl RhoAngle {
    pub fn from_code(code: AngleCode, depth: usize) -> RhoAngle {
        let (numeric, precision) = code_position(&code, depth);
        RhoAngle { code, numeric, precision }
    }

    pub fn from_itinerary(it: Itinerary, depth: usize) -> RhoAngle {
        RhoAngle::from_code(AngleCode::Periodic(it), depth)
    }

    pub fn itinerary(&self) -> Option<&Itinerary> {
        self.code.itinerary()
    }

    /// ρ-image, exact on codes.
    pub fn image(&self) -> RhoAngle {
        RhoAngle::from_code(self.code.shift(), DEFAULT_DEPTH)
    }

    pub fn parse(text: &str) -> Result<RhoAngle> {
        Ok(RhoAngle::from_code(AngleCode::parse(text)?, DEFAULT_DEPTH))
    }
}

#[allow(non_snake_case)]
pub fn E_of(rho_angle: &RhoAngle) -> Result<RationalAngle> {
    rational_from_code(&rho_angle.code)
}

#[allow(non_snake_case)]
pub fn E_inverse(theta: &RationalAngle) -> RhoAngle {
    E_inverse_at(theta, DEFAULT_DEPTH)
}

#[allow(non_snake_case)]
pub fn E_inverse_at(theta: &RationalAngle, depth: usize) -> RhoAngle {
    RhoAngle::from_code(code_of_rational(theta), depth)
}

/// Nested-arc enclosure of the ρ-angle with the given itinerary, from its first `depth` symbols.
pub fn rho_angle_position(it: &Itinerary, depth: usize) -> (f64, f64) {
    word_enclosure(&it.prefix(depth.max(1)))
}

fn word_enclosure(word: &[u8]) -> (f64, f64) {
    let last = *word.last().expect("nonempty word");
    let (mut lo, mut hi) = arc_bounds(last);
    for &s in word[..word.len() - 1].iter().rev() {
        let a = reflect_angle_into_arc(s, lo);
        let b = reflect_angle_into_arc(s, hi);
        lo = a.min(b);
        hi = a.max(b);
    }
    (((lo + hi) / 2.0).rem_euclid(1.0), (hi - lo) / 2.0)
}

/// Position of any ρ code; vertex codes are located exactly.
pub fn code_position(code: &AngleCode, depth: usize) -> (f64, f64) {
    match code {
        AngleCode::Periodic(it) => rho_angle_position(it, depth),
        AngleCode::Vertex { prefix, vertex } => {
            let mut x = *vertex as f64 / 3.0;
            for &s in prefix.iter().rev() {
                x = reflect_angle_into_arc(s, x);
            }
            (x.rem_euclid(1.0), 0.0)
        }
    }
}

/// ρ-itinerary of a float angle; stops early when the orbit reaches a vertex.
pub fn numeric_rho_itinerary(theta: f64, depth: usize) -> (Vec<u8>, Option<u8>) {
    let mut t = theta.rem_euclid(1.0);
    let mut syms = Vec::with_capacity(depth);
    for _ in 0..depth {
        match arc_symbol(t) {
            Ok(s) => syms.push(s),
            Err(_) => return (syms, Some((t * 3.0).round() as u8 % 3)),
        }
        t = rho_circle(t);
    }
    (syms, None)
}

/// Midpoint of the m₋₂ nested interval with the given itinerary prefix.
pub fn m2_word_position(word: &[u8]) -> (f64, f64) {
    let last = *word.last().expect("nonempty word");
    let (mut lo, mut hi) = arc_bounds(last);
    for i in (0..word.len() - 1).rev() {
        let k = match word[i] {
            1 => 1.0,
            3 => 2.0,
            _ if word[i + 1] == 1 => 1.0,
            _ => 2.0,
        };
        let (a, b) = ((k - hi) / 2.0, (k - lo) / 2.0);
        lo = a;
        hi = b;
    }
    (((lo + hi) / 2.0).rem_euclid(1.0), (hi - lo) / 2.0)
}

/// 𝓔 evaluated numerically by itinerary transport at finite depth.
#[allow(non_snake_case)]
pub fn E_numeric(theta: f64, depth: usize) -> f64 {
    let (syms, vertex) = numeric_rho_itinerary(theta, depth);
    match vertex {
        Some(v) => {
            let code = AngleCode::Vertex { prefix: syms, vertex: v };
            rational_from_code(&code).map(|r| r.to_f64()).unwrap_or(f64::NAN)
        }
        None => m2_word_position(&syms).0,
    }
}

/// m₋₂ angles of exact period n: numerators over (−2)^n − 1.
pub fn periodic_angles(n: usize) -> Vec<RationalAngle> {
    let den: BigInt = (num_traits::pow(BigInt::from(-2), n) - BigInt::one()).abs();
    let mut out = Vec::new();
    let mut k = BigInt::zero();
    while k < den {
        let x = RationalAngle::from_ratio(BigRational::new(k.clone(), den.clone()));
        if exact_period(&x) == Some(n) && !out.contains(&x) {
            out.push(x);
        }
        k += 1;
    }
    out.sort();
    out
}

/// Smallest n ≥ 1 with m₋₂ⁿ(θ) = θ; None for strictly preperiodic angles.
pub fn exact_period(theta: &RationalAngle) -> Option<usize> {
    let den = theta.denom();
    if den.is_even() {
        return None;
    }
    let mut x = m2_map(theta);
    let mut n = 1;
    while &x != theta {
        x = m2_map(&x);
        n += 1;
        if n > 4096 {
            return None;
        }
    }
    Some(n)
}

/// Admissible primitive periodic ρ-itineraries of exact period n realized by an angle.
pub fn periodic_rho_itineraries(n: usize) -> Vec<Itinerary> {
    crate::triangle::admissible_words(n)
        .into_iter()
        .filter(|w| w.0.first() != w.0.last() || n == 1)
        .map(|w| Itinerary { preperiod: Vec::new(), period: w.0 })
        .filter(|it| primitive_root(&it.period).len() == n && n > 1)
        .filter(|it| rational_from_itinerary(it).is_ok())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn normalization_rotates_period() {
        let it = Itinerary { preperiod: vec![2, 3], period: vec![1, 3] }.normalized();
        assert_eq!(it.preperiod, vec![2]);
        assert_eq!(it.period, vec![3, 1]);
        let it = Itinerary::periodic(vec![1, 3, 1, 3]);
        assert_eq!(it.period, vec![1, 3]);
    }

    #[test]
    fn display_and_parse() {
        let it = Itinerary::parse("3|132").unwrap();
        assert_eq!(it.to_string(), "3|132");
        assert_eq!(Itinerary::parse("2|132").unwrap().to_string(), "|213");
        assert_eq!(AngleCode::parse("3@1/3").unwrap().to_string(), "3@1/3");
    }

    #[test]
    fn vertex_codes() {
        let c = code_of_rational(&RationalAngle::new(1, 6));
        assert_eq!(c, AngleCode::Vertex { prefix: vec![1], vertex: 2 });
        assert_eq!(rational_from_code(&c).unwrap(), RationalAngle::new(1, 6));
    }

    #[test]
    fn period_two_is_empty() {
        assert!(periodic_angles(2).is_empty());
        assert_eq!(periodic_angles(3).len(), 6);
    }
}
