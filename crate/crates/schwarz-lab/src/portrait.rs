//! Formal orbit portraits under m₋₂ and ρ.

use crate::coding::{RationalAngle, RhoAngle, E_inverse, E_of};
use crate::error::{Error, Result};
use crate::lamination::{angle_period, sets_unlinked, sort_cyclic, Angle, Leaf, MapKind};
use num_rational::BigRational;
use serde::Serialize;
use std::collections::{HashMap, HashSet};
use std::fmt;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OrbitPortrait<A: Angle> {
    pub map_kind: MapKind,
    /// Class j is carried onto class j + 1 (cyclically).
    pub classes: Vec<Vec<A>>,
}

impl<A: Angle> OrbitPortrait<A> {
    /// Sorts every class; the class order is kept as given.
    pub fn new(classes: Vec<Vec<A>>) -> OrbitPortrait<A> {
        let classes = classes
            .into_iter()
            .map(|mut c| {
                sort_cyclic(&mut c);
                c
            })
            .collect();
        OrbitPortrait { map_kind: A::KIND, classes }
    }

    pub fn orbit_period(&self) -> usize {
        self.classes.len()
    }

    pub fn map<B: Angle, F: Fn(&A) -> Result<B>>(&self, f: F) -> Result<OrbitPortrait<B>> {
        let classes = self.classes.iter().map(|c| c.iter().map(&f).collect::<Result<Vec<B>>>()).collect::<Result<Vec<_>>>()?;
        Ok(OrbitPortrait::new(classes))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum Violation {
    Empty,
    TooSmall { class: usize },
    Overlap { class: usize },
    ImageMismatch { class: usize },
    OrderNotReversed { class: usize },
    Linked { first: usize, second: usize },
    NotPeriodic { class: usize },
    PeriodStructure(String),
    CharacteristicTie,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::Empty => write!(f, "empty portrait"),
            Violation::TooSmall { class } => write!(f, "class {class} has fewer than two angles"),
            Violation::Overlap { class } => write!(f, "class {class} repeats an angle or meets another class"),
            Violation::ImageMismatch { class } => write!(f, "class {class} is not carried bijectively onto the next class"),
            Violation::OrderNotReversed { class } => write!(f, "class {class} keeps its cyclic order"),
            Violation::Linked { first, second } => write!(f, "classes {first} and {second} are linked"),
            Violation::NotPeriodic { class } => write!(f, "class {class} holds a strictly preperiodic angle"),
            Violation::PeriodStructure(s) => write!(f, "period structure: {s}"),
            Violation::CharacteristicTie => write!(f, "shortest complementary arc is not unique"),
        }
    }
}

/// Reversed image order is a rotation of the sorted image class.
fn reverses_order<A: Angle>(class: &[A], next: &[A]) -> bool {
    if class.len() < 3 {
        return true;
    }
    let mut images: Vec<A> = class.iter().map(|a| a.image()).collect();
    images.reverse();
    let Some(start) = next.iter().position(|a| *a == images[0]) else { return false };
    images.iter().enumerate().all(|(i, a)| *a == next[(start + i) % next.len()])
}

/// Complementary arcs of every class as (start, end, length), counter-clockwise.
fn complementary_arcs<A: Angle>(p: &OrbitPortrait<A>) -> Vec<(A, A, BigRational)> {
    let mut arcs = Vec::new();
    for class in &p.classes {
        let n = class.len();
        for i in 0..n {
            let (s, e) = (&class[i], &class[(i + 1) % n]);
            arcs.push((s.clone(), e.clone(), s.key().ccw_to(&e.key())));
        }
    }
    arcs
}

pub fn validate_fop<A: Angle>(p: &OrbitPortrait<A>) -> std::result::Result<(), Vec<Violation>> {
    let mut v = Vec::new();
    let n = p.classes.len();
    if n == 0 {
        return Err(vec![Violation::Empty]);
    }
    let mut all: HashSet<&A> = HashSet::new();
    for (j, class) in p.classes.iter().enumerate() {
        if class.len() < 2 {
            v.push(Violation::TooSmall { class: j });
        }
        if class.iter().any(|a| !all.insert(a)) {
            v.push(Violation::Overlap { class: j });
        }
    }
    for (j, class) in p.classes.iter().enumerate() {
        let next = &p.classes[(j + 1) % n];
        let images: HashSet<A> = class.iter().map(|a| a.image()).collect();
        let target: HashSet<A> = next.iter().cloned().collect();
        if images.len() != class.len() || images != target {
            v.push(Violation::ImageMismatch { class: j });
        } else if !reverses_order(class, next) {
            v.push(Violation::OrderNotReversed { class: j });
        }
    }
    for i in 0..n {
        for j in i + 1..n {
            if !sets_unlinked(&p.classes[i], &p.classes[j]) {
                v.push(Violation::Linked { first: i, second: j });
            }
        }
    }
    let periods: Vec<Vec<Option<usize>>> = p.classes.iter().map(|c| c.iter().map(angle_period).collect()).collect();
    for (j, ps) in periods.iter().enumerate() {
        if ps.iter().any(|x| x.is_none()) {
            v.push(Violation::NotPeriodic { class: j });
        }
    }
    if v.is_empty() {
        let ps: Vec<usize> = periods[0].iter().map(|x| x.unwrap()).collect();
        let size = p.classes[0].len();
        if n.is_multiple_of(2) {
            if ps.iter().any(|&r| r != ps[0]) {
                v.push(Violation::PeriodStructure(format!("even orbit period {n} with mixed angle periods {ps:?}")));
            }
        } else {
            let count = |r: usize| ps.iter().filter(|&&x| x == r).count();
            let ok = (size == 2 && (count(n) == 2 || count(2 * n) == 2)) || (size == 3 && count(n) == 1 && count(2 * n) == 2);
            if !ok {
                v.push(Violation::PeriodStructure(format!("odd orbit period {n}, class size {size}, angle periods {ps:?}")));
            }
        }
        let arcs = complementary_arcs(p);
        let min = arcs.iter().map(|a| a.2.clone()).min().unwrap();
        if arcs.iter().filter(|a| a.2 == min).count() > 1 {
            v.push(Violation::CharacteristicTie);
        }
    }
    if v.is_empty() {
        Ok(())
    } else {
        Err(v)
    }
}

/// Endpoints (t⁻, t⁺) of the shortest complementary arc, counter-clockwise from t⁻.
pub fn characteristic_arc<A: Angle>(p: &OrbitPortrait<A>) -> Result<(A, A)> {
    let arcs = complementary_arcs(p);
    let min = arcs.iter().map(|a| a.2.clone()).min().ok_or_else(|| Error::NoPortrait("empty portrait".into()))?;
    let mut shortest = arcs.into_iter().filter(|a| a.2 == min);
    let (s, e, _) = shortest.next().unwrap();
    if shortest.next().is_some() {
        return Err(Error::NoPortrait("shortest complementary arc is not unique".into()));
    }
    Ok((s, e))
}

/// Saturate the leaf (t⁻, t⁺) under the map, join angles along leaves, and order the resulting
/// classes along the orbit.
pub fn generate_portrait_from_pair<A: Angle>(tminus: &A, tplus: &A) -> Result<OrbitPortrait<A>> {
    let no = |why: &str| Error::NoPortrait(format!("({tminus}, {tplus}): {why}"));
    if tminus == tplus {
        return Err(no("equal angles"));
    }
    if angle_period(tminus).is_none() || angle_period(tplus).is_none() {
        return Err(no("strictly preperiodic angle"));
    }
    let mut leaves: Vec<Leaf<A>> = Vec::new();
    let (mut a, mut b) = (tminus.clone(), tplus.clone());
    loop {
        let leaf = Leaf::new(a.clone(), b.clone()).map_err(|_| no("a leaf collapses to a point"))?;
        if leaves.contains(&leaf) {
            break;
        }
        if leaves.iter().any(|l| l.crosses(&leaf)) {
            return Err(no("forward images cross"));
        }
        leaves.push(leaf);
        a = a.image();
        b = b.image();
    }
    let lam = crate::lamination::Lamination::from_leaves(leaves);
    let class_of: HashMap<A, usize> = lam.classes.iter().enumerate().flat_map(|(i, c)| c.iter().map(move |a| (a.clone(), i))).collect();
    let start = class_of[tminus];
    let mut order = vec![start];
    loop {
        let cur = *order.last().unwrap();
        let next = class_of.get(&lam.classes[cur][0].image()).copied().ok_or_else(|| no("orbit leaves the saturated classes"))?;
        if next == start {
            break;
        }
        if order.contains(&next) || order.len() > lam.classes.len() {
            return Err(no("classes do not form one cycle"));
        }
        order.push(next);
    }
    if order.len() != lam.classes.len() {
        return Err(no("classes do not form one cycle"));
    }
    let portrait = OrbitPortrait::new(order.into_iter().map(|i| lam.classes[i].clone()).collect());
    validate_fop(&portrait).map_err(|v| no(&v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join("; ")))?;
    Ok(portrait)
}

/// m₋₂ portrait to the ρ portrait with 𝓔-corresponding angles.
#[allow(non_snake_case)]
pub fn push_forward_E(p: &OrbitPortrait<RationalAngle>) -> Result<OrbitPortrait<RhoAngle>> {
    p.map(|a| Ok(E_inverse(a)))
}

#[allow(non_snake_case)]
pub fn pull_back_E(p: &OrbitPortrait<RhoAngle>) -> Result<OrbitPortrait<RationalAngle>> {
    p.map(E_of)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> RationalAngle {
        RationalAngle::new(n, d)
    }

    #[test]
    fn fixed_portrait() {
        let p = OrbitPortrait::new(vec![vec![q(1, 3), q(2, 3)]]);
        assert_eq!(validate_fop(&p), Ok(()));
        assert_eq!(characteristic_arc(&p).unwrap(), (q(1, 3), q(2, 3)));
        assert_eq!(generate_portrait_from_pair(&q(1, 3), &q(2, 3)).unwrap(), p);
    }

    #[test]
    fn singleton_rejected() {
        let p = OrbitPortrait::new(vec![vec![q(1, 3)]]);
        assert!(validate_fop(&p).unwrap_err().contains(&Violation::TooSmall { class: 0 }));
    }

    #[test]
    fn airplane_pair() {
        let p = generate_portrait_from_pair(&q(3, 7), &q(4, 7)).unwrap();
        assert_eq!(p.orbit_period(), 3);
        assert_eq!(characteristic_arc(&p).unwrap(), (q(3, 7), q(4, 7)));
    }
}
