//! Chords and laminations of the circle, for m₋₂ angles and ρ angles alike.
//!
//! Both angle types carry an exact order key in m₋₂ coordinates (the identity for rationals, the
//! conjugacy 𝓔 for ρ angles), so every unlinking test is a comparison of rationals.

use crate::coding::{code_of_rational, exact_period, m2_map, m2_preimages, periodic_angles, AngleCode, Itinerary, RationalAngle, RhoAngle, DEFAULT_DEPTH, E_of};
use crate::error::{Error, Result};
use crate::portrait::{characteristic_arc, generate_portrait_from_pair};
use num_rational::BigRational;
use num_traits::One;
use serde::Serialize;
use std::collections::{BTreeMap, HashMap, HashSet};
use std::fmt::{Debug, Display};
use std::hash::Hash;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum MapKind {
    M2,
    Rho,
}

pub trait Angle: Clone + Eq + Hash + Debug + Display + Serialize + Send + Sync {
    const KIND: MapKind;
    /// Exact position in m₋₂ coordinates; order-preserving.
    fn key(&self) -> RationalAngle;
    fn from_key(key: &RationalAngle) -> Self;
    fn image(&self) -> Self;
    fn preimages(&self) -> [Self; 2];
    /// Position on the circle in turns, for drawing.
    fn turn(&self) -> f64 {
        self.key().to_f64()
    }
}

impl Angle for RationalAngle {
    const KIND: MapKind = MapKind::M2;

    fn key(&self) -> RationalAngle {
        self.clone()
    }

    fn from_key(key: &RationalAngle) -> Self {
        key.clone()
    }

    fn image(&self) -> Self {
        m2_map(self)
    }

    fn preimages(&self) -> [Self; 2] {
        m2_preimages(self)
    }
}

/// The arc of the circle opposite a vertex: its interior holds the non-trivial preimage.
fn opposite_arc(vertex: u8) -> u8 {
    (vertex + 1) % 3 + 1
}

impl Angle for RhoAngle {
    const KIND: MapKind = MapKind::Rho;

    fn key(&self) -> RationalAngle {
        E_of(self).expect("ρ angles are built from realized codes")
    }

    fn from_key(key: &RationalAngle) -> Self {
        RhoAngle::from_code(code_of_rational(key), DEFAULT_DEPTH)
    }

    fn image(&self) -> Self {
        RhoAngle::image(self)
    }

    fn turn(&self) -> f64 {
        self.numeric
    }

    /// Symbolic: prepend each symbol allowed before the current first one.
    fn preimages(&self) -> [Self; 2] {
        let codes: Vec<AngleCode> = match &self.code {
            AngleCode::Vertex { prefix, vertex } if prefix.is_empty() => {
                vec![self.code.clone(), AngleCode::Vertex { prefix: vec![opposite_arc(*vertex)], vertex: *vertex }]
            }
            AngleCode::Vertex { prefix, vertex } => (1..=3u8)
                .filter(|&j| j != prefix[0])
                .map(|j| AngleCode::Vertex { prefix: std::iter::once(j).chain(prefix.iter().copied()).collect(), vertex: *vertex })
                .collect(),
            AngleCode::Periodic(it) => (1..=3u8)
                .filter(|&j| j != it.symbol(0))
                .map(|j| {
                    let pre = std::iter::once(j).chain(it.preperiod.iter().copied()).collect();
                    AngleCode::Periodic(Itinerary::new(pre, it.period.clone()).expect("prepending an allowed symbol"))
                })
                .collect(),
        };
        let mut it = codes.into_iter().map(|c| RhoAngle::from_code(c, DEFAULT_DEPTH));
        [it.next().unwrap(), it.next().unwrap()]
    }
}

/// Exact period of the angle under its map, None when strictly preperiodic.
pub fn angle_period<A: Angle>(a: &A) -> Option<usize> {
    exact_period(&a.key())
}

fn frac_len(from: &RationalAngle, to: &RationalAngle) -> BigRational {
    from.ccw_to(to)
}

/// Length of the shorter arc between two angles.
pub fn chord_length<A: Angle>(a: &A, b: &A) -> BigRational {
    let l = frac_len(&a.key(), &b.key());
    let other = BigRational::one() - &l;
    if l < other {
        l
    } else {
        other
    }
}

/// Unordered pair of distinct angles, stored with the smaller key first.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Leaf<A: Angle> {
    pub endpoints: [A; 2],
}

impl<A: Angle> Leaf<A> {
    pub fn new(a: A, b: A) -> Result<Leaf<A>> {
        if a == b {
            return Err(Error::InvalidInput(format!("degenerate leaf at {a}")));
        }
        Ok(if a.key() <= b.key() { Leaf { endpoints: [a, b] } } else { Leaf { endpoints: [b, a] } })
    }

    pub fn keys(&self) -> (RationalAngle, RationalAngle) {
        (self.endpoints[0].key(), self.endpoints[1].key())
    }

    pub fn crosses(&self, other: &Leaf<A>) -> bool {
        let (a, b) = self.keys();
        let (c, d) = other.keys();
        chords_cross(&a, &b, &c, &d)
    }

    pub fn map<B: Angle, F: Fn(&A) -> B>(&self, f: F) -> Result<Leaf<B>> {
        Leaf::new(f(&self.endpoints[0]), f(&self.endpoints[1]))
    }
}

impl<A: Angle> Display for Leaf<A> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({}, {})", self.endpoints[0], self.endpoints[1])
    }
}

/// Chords (a, b) and (c, d) with a < b cross iff exactly one of c, d lies strictly between a and b.
/// Shared endpoints never count as crossings.
pub fn chords_cross(a: &RationalAngle, b: &RationalAngle, c: &RationalAngle, d: &RationalAngle) -> bool {
    if a == c || a == d || b == c || b == d {
        return false;
    }
    let (lo, hi) = if a < b { (a, b) } else { (b, a) };
    let inside = |x: &RationalAngle| lo < x && x < hi;
    inside(c) != inside(d)
}

/// Finite sets of angles are unlinked when disjoint and no chord of one crosses a chord of the other.
pub fn sets_unlinked<A: Angle>(x: &[A], y: &[A]) -> bool {
    let kx: Vec<RationalAngle> = x.iter().map(|a| a.key()).collect();
    let ky: Vec<RationalAngle> = y.iter().map(|a| a.key()).collect();
    if kx.iter().any(|k| ky.contains(k)) {
        return false;
    }
    for i in 0..kx.len() {
        for j in i + 1..kx.len() {
            for p in 0..ky.len() {
                for q in p + 1..ky.len() {
                    if chords_cross(&kx[i], &kx[j], &ky[p], &ky[q]) {
                        return false;
                    }
                }
            }
        }
    }
    true
}

/// Sort by key; the smallest key comes first.
pub fn sort_cyclic<A: Angle>(set: &mut [A]) {
    set.sort_by_key(|a| a.key());
}

#[derive(Clone, Debug, Serialize)]
pub struct Lamination<A: Angle> {
    pub map_kind: MapKind,
    pub leaves: Vec<Leaf<A>>,
    /// Equivalence classes spanned by the leaves (polygons and single leaves).
    pub classes: Vec<Vec<A>>,
}

impl<A: Angle> Lamination<A> {
    pub fn empty() -> Lamination<A> {
        Lamination { map_kind: A::KIND, leaves: Vec::new(), classes: Vec::new() }
    }

    pub fn from_leaves(leaves: Vec<Leaf<A>>) -> Lamination<A> {
        let mut leaves: Vec<Leaf<A>> = leaves.into_iter().collect::<HashSet<_>>().into_iter().collect();
        leaves.sort_by_key(|l| l.keys());
        let mut index: HashMap<A, usize> = HashMap::new();
        let mut angles: Vec<A> = Vec::new();
        for l in &leaves {
            for e in &l.endpoints {
                if !index.contains_key(e) {
                    index.insert(e.clone(), angles.len());
                    angles.push(e.clone());
                }
            }
        }
        let mut parent: Vec<usize> = (0..angles.len()).collect();
        fn root(p: &mut [usize], mut i: usize) -> usize {
            while p[i] != i {
                p[i] = p[p[i]];
                i = p[i];
            }
            i
        }
        for l in &leaves {
            let (a, b) = (root(&mut parent, index[&l.endpoints[0]]), root(&mut parent, index[&l.endpoints[1]]));
            parent[a] = b;
        }
        let mut groups: BTreeMap<usize, Vec<A>> = BTreeMap::new();
        for (i, a) in angles.iter().enumerate() {
            let r = root(&mut parent, i);
            groups.entry(r).or_default().push(a.clone());
        }
        let mut classes: Vec<Vec<A>> = groups.into_values().collect();
        for c in &mut classes {
            sort_cyclic(c);
        }
        classes.sort_by_key(|c| c[0].key());
        Lamination { map_kind: A::KIND, leaves, classes }
    }

    /// Leaves are the polygon edges of each class (a single chord for two angles).
    pub fn from_classes(classes: Vec<Vec<A>>) -> Lamination<A> {
        let mut leaves = Vec::new();
        for class in &classes {
            let mut c = class.clone();
            sort_cyclic(&mut c);
            c.dedup();
            match c.len() {
                0 | 1 => {}
                2 => leaves.push(Leaf::new(c[0].clone(), c[1].clone()).unwrap()),
                n => {
                    for i in 0..n {
                        leaves.push(Leaf::new(c[i].clone(), c[(i + 1) % n].clone()).unwrap());
                    }
                }
            }
        }
        Lamination::from_leaves(leaves)
    }

    /// Index pairs of crossing leaves.
    pub fn crossings(&self) -> Vec<(usize, usize)> {
        let keys: Vec<(RationalAngle, RationalAngle)> = self.leaves.iter().map(|l| l.keys()).collect();
        let mut out = Vec::new();
        for i in 0..keys.len() {
            for j in i + 1..keys.len() {
                if chords_cross(&keys[i].0, &keys[i].1, &keys[j].0, &keys[j].1) {
                    out.push((i, j));
                }
            }
        }
        out
    }

    pub fn is_unlinked(&self) -> bool {
        self.crossings().is_empty()
    }

    pub fn map<B: Angle, F: Fn(&A) -> B>(&self, f: F) -> Result<Lamination<B>> {
        let leaves = self.leaves.iter().map(|l| l.map(&f)).collect::<Result<Vec<_>>>()?;
        Ok(Lamination::from_leaves(leaves))
    }

    pub fn leaf_keys(&self) -> Vec<(RationalAngle, RationalAngle)> {
        let mut k: Vec<_> = self.leaves.iter().map(|l| l.keys()).collect();
        k.sort();
        k
    }
}

/// The four arcs cut out by the two major leaves: long arcs on either side, short arcs inside
/// the critical strip.
struct Majors {
    cuts: [RationalAngle; 4],
    long: [bool; 4],
}

impl Majors {
    fn arc_of(&self, x: &RationalAngle) -> Vec<usize> {
        // Closed arcs [cuts[i], cuts[i+1]], cyclically.
        (0..4)
            .filter(|&i| {
                let (s, e) = (&self.cuts[i], &self.cuts[(i + 1) % 4]);
                let len = s.ccw_to(e);
                let off = s.ccw_to(x);
                off <= len
            })
            .collect()
    }

    fn chord_allowed(&self, p: &RationalAngle, q: &RationalAngle) -> bool {
        let (ap, aq) = (self.arc_of(p), self.arc_of(q));
        let same_long = ap.iter().any(|i| self.long[*i] && aq.contains(i));
        let across_strip = ap.iter().any(|i| !self.long[*i] && aq.iter().any(|j| !self.long[*j] && j != i));
        same_long || across_strip
    }
}

/// Preimage leaves of every leaf at each level; level k holds 2^k leaves (with repeats across
/// levels for invariant leaves).
pub fn pullback_levels<A: Angle>(tminus: &A, tplus: &A, depth: usize) -> Result<Vec<Vec<Leaf<A>>>> {
    let minor = Leaf::new(tminus.clone(), tplus.clone())?;
    let [x1, x2] = tminus.preimages();
    let [y1, y2] = tplus.preimages();
    let pairings = [[(x1.clone(), y1.clone()), (x2.clone(), y2.clone())], [(x1, y2), (x2, y1)]];
    let min_len = |p: &[(A, A); 2]| p.iter().map(|(a, b)| chord_length(a, b)).min().unwrap();
    let majors_pair = if min_len(&pairings[0]) >= min_len(&pairings[1]) { pairings[0].clone() } else { pairings[1].clone() };
    let majors: Vec<Leaf<A>> = majors_pair.iter().map(|(a, b)| Leaf::new(a.clone(), b.clone())).collect::<Result<_>>()?;
    let mut cuts: Vec<RationalAngle> = majors.iter().flat_map(|l| [l.endpoints[0].key(), l.endpoints[1].key()]).collect();
    cuts.sort();
    cuts.dedup();
    if cuts.len() != 4 {
        return Err(Error::InvalidInput("the characteristic leaf is critical".into()));
    }
    let cuts: [RationalAngle; 4] = [cuts[0].clone(), cuts[1].clone(), cuts[2].clone(), cuts[3].clone()];
    let quarter = BigRational::new(1.into(), 4.into());
    let long = [0, 1, 2, 3].map(|i| cuts[i].ccw_to(&cuts[(i + 1) % 4]) > quarter);
    let region = Majors { cuts, long };

    let pull = |leaf: &Leaf<A>| -> Result<[Leaf<A>; 2]> {
        if *leaf == minor {
            return Ok([majors[0].clone(), majors[1].clone()]);
        }
        let [p1, p2] = leaf.endpoints[0].preimages();
        let [q1, q2] = leaf.endpoints[1].preimages();
        for option in [[(p1.clone(), q1.clone()), (p2.clone(), q2.clone())], [(p1.clone(), q2.clone()), (p2.clone(), q1.clone())]] {
            let ok = option.iter().all(|(a, b)| {
                let leaf = Leaf::new(a.clone(), b.clone());
                leaf.as_ref().is_ok_and(|l| region.chord_allowed(&a.key(), &b.key()) && majors.iter().all(|m| !m.crosses(l)))
            });
            if ok {
                return Ok([Leaf::new(option[0].0.clone(), option[0].1.clone())?, Leaf::new(option[1].0.clone(), option[1].1.clone())?]);
            }
        }
        Err(Error::VerificationFailed(format!("no unlinked preimage pairing for {leaf}")))
    };

    let mut levels = vec![vec![minor.clone()]];
    let mut all: HashSet<Leaf<A>> = HashSet::from([minor.clone()]);
    let mut seen: Vec<Leaf<A>> = vec![minor.clone()];
    for k in 1..=depth {
        let mut next = Vec::with_capacity(2 * levels[k - 1].len());
        for leaf in &levels[k - 1] {
            next.extend(pull(leaf)?);
        }
        for l in &next {
            if all.insert(l.clone()) {
                if let Some(bad) = seen.iter().find(|s| s.crosses(l)) {
                    return Err(Error::VerificationFailed(format!("level {k}: {l} crosses {bad}")));
                }
                seen.push(l.clone());
            }
        }
        levels.push(next);
    }
    Ok(levels)
}

/// All iterated preimages of the characteristic leaf up to `depth`, with unlinking checked at
/// every level.
pub fn pullback_lamination<A: Angle>(tminus: &A, tplus: &A, depth: usize) -> Result<Lamination<A>> {
    let levels = pullback_levels(tminus, tplus, depth)?;
    Ok(Lamination::from_leaves(levels.into_iter().flatten().collect()))
}

/// Exactly one class maps two-to-one onto its image, and all its angles are strictly preperiodic.
pub fn is_misiurewicz_type<A: Angle>(lam: &Lamination<A>) -> bool {
    let collapsing: Vec<&Vec<A>> = lam
        .classes
        .iter()
        .filter(|class| {
            let mut counts: HashMap<A, usize> = HashMap::new();
            for a in class.iter() {
                *counts.entry(a.image()).or_default() += 1;
            }
            counts.len() * 2 == class.len() && counts.values().all(|&n| n == 2)
        })
        .collect();
    collapsing.len() == 1 && collapsing[0].iter().all(|a| angle_period(a).is_none())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Model {
    /// Pairs transported to ρ angles by 𝓔⁻¹.
    Schwarz,
    Tricorn,
}

/// Characteristic pairs of all valid portraits with angles in [1/3, 2/3] and exact period at
/// most `max_period`, in m₋₂ coordinates. Both angles of a pair share one period.
pub fn characteristic_pairs(max_period: usize) -> Vec<(RationalAngle, RationalAngle)> {
    use rayon::prelude::*;
    let third = RationalAngle::new(1, 3);
    let two_thirds = RationalAngle::new(2, 3);
    let mut out = Vec::new();
    for n in 1..=max_period {
        let angles: Vec<RationalAngle> = periodic_angles(n).into_iter().filter(|a| *a >= third && *a <= two_thirds).collect();
        let candidates: Vec<(usize, usize)> = (0..angles.len()).flat_map(|i| (i + 1..angles.len()).map(move |j| (i, j))).collect();
        let mut found: Vec<(RationalAngle, RationalAngle)> = candidates
            .par_iter()
            .filter_map(|&(i, j)| {
                let (t0, t1) = (&angles[i], &angles[j]);
                let portrait = generate_portrait_from_pair(t0, t1).ok()?;
                let (a, b) = characteristic_arc(&portrait).ok()?;
                (a == *t0 && b == *t1).then(|| (t0.clone(), t1.clone()))
            })
            .collect();
        found.sort();
        out.extend(found);
    }
    out
}

/// One leaf per characteristic pair; the Schwarz model carries the same pairs as ρ angles.
pub fn parameter_lamination<A: Angle>(max_period: usize) -> Lamination<A> {
    let leaves = characteristic_pairs(max_period)
        .into_iter()
        .map(|(a, b)| Leaf::new(A::from_key(&a), A::from_key(&b)).expect("distinct angles"))
        .collect();
    Lamination::from_leaves(leaves)
}

#[derive(Clone, Debug, Serialize)]
pub struct IsomorphismReport {
    pub max_period: usize,
    pub leaves_tricorn: usize,
    pub leaves_schwarz: usize,
    pub bijective: bool,
    pub order_preserved: bool,
    pub unlinked_tricorn: bool,
    pub unlinked_schwarz: bool,
    /// Leaf count by angle period.
    pub leaves_per_period: BTreeMap<usize, usize>,
    pub passed: bool,
}

/// Cyclic order of the endpoint sets agrees: after rotating to a common start, the ρ positions
/// (from nested arcs, independent of 𝓔) increase along the m₋₂ order.
fn cyclic_order_matches(pairs: &[(RationalAngle, f64)]) -> bool {
    let mut sorted: Vec<&(RationalAngle, f64)> = pairs.iter().collect();
    sorted.sort_by(|a, b| a.0.cmp(&b.0));
    let pos: Vec<f64> = sorted.iter().map(|p| p.1).collect();
    let n = pos.len();
    if n < 3 {
        return true;
    }
    let descents = (0..n).filter(|&i| pos[(i + 1) % n] <= pos[i]).count();
    descents == 1
}

fn numeric_crossings(leaves: &[(f64, f64)]) -> bool {
    let cross = |a: f64, b: f64, c: f64, d: f64| {
        let (lo, hi) = if a < b { (a, b) } else { (b, a) };
        let inside = |x: f64| lo < x && x < hi;
        [a, b].iter().all(|e| (e - c).abs() > 1e-12 && (e - d).abs() > 1e-12) && inside(c) != inside(d)
    };
    (0..leaves.len()).any(|i| (i + 1..leaves.len()).any(|j| cross(leaves[i].0, leaves[i].1, leaves[j].0, leaves[j].1)))
}

/// Check the leaf bijection between the two parameter models under a given transport of angles.
pub fn model_isomorphism_check_with<F: Fn(&RationalAngle) -> RhoAngle>(max_period: usize, transport: F) -> IsomorphismReport {
    let pairs = characteristic_pairs(max_period);
    let tricorn: Lamination<RationalAngle> = parameter_lamination(max_period);
    let schwarz_leaves: Vec<(RhoAngle, RhoAngle)> = pairs.iter().map(|(a, b)| (transport(a), transport(b))).collect();
    let distinct: HashSet<(String, String)> = schwarz_leaves.iter().map(|(a, b)| (a.to_string(), b.to_string())).collect();
    let bijective = distinct.len() == pairs.len()
        && schwarz_leaves.iter().zip(&pairs).all(|((a, b), (x, y))| E_of(a).ok().as_ref() == Some(x) && E_of(b).ok().as_ref() == Some(y));
    let mut endpoints: Vec<(RationalAngle, f64)> = Vec::new();
    for ((a, b), (x, y)) in schwarz_leaves.iter().zip(&pairs) {
        for (r, t) in [(a, x), (b, y)] {
            if !endpoints.iter().any(|(k, _)| k == t) {
                endpoints.push((t.clone(), r.numeric));
            }
        }
    }
    let numeric: Vec<(f64, f64)> = schwarz_leaves.iter().map(|(a, b)| (a.numeric, b.numeric)).collect();
    let mut leaves_per_period = BTreeMap::new();
    for (a, _) in &pairs {
        *leaves_per_period.entry(exact_period(a).unwrap_or(0)).or_insert(0) += 1;
    }
    let order_preserved = cyclic_order_matches(&endpoints);
    let unlinked_tricorn = tricorn.is_unlinked();
    let unlinked_schwarz = !numeric_crossings(&numeric);
    IsomorphismReport {
        max_period,
        leaves_tricorn: tricorn.leaves.len(),
        leaves_schwarz: distinct.len(),
        bijective,
        order_preserved,
        unlinked_tricorn,
        unlinked_schwarz,
        leaves_per_period,
        passed: bijective && order_preserved && unlinked_tricorn && unlinked_schwarz && tricorn.leaves.len() == distinct.len(),
    }
}

pub fn model_isomorphism_check(max_period: usize) -> IsomorphismReport {
    model_isomorphism_check_with(max_period, <RhoAngle as Angle>::from_key)
}
