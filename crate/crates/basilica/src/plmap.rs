//! Orientation-preserving piecewise-linear circle homeomorphisms with exact
//! rational breakpoints, and their decomposition into the dynamical
//! pseudo-group of the doubling map.
//!
//! A [`PLCircleMap`] is stored in canonical form: no collinear interior
//! nodes, node list starting at the smallest breakpoint, and rigid rotations
//! normalized to the single node `(0, r)`. Two maps are equal iff their
//! canonical node lists are equal.

use std::fmt;

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::circle::{pow2_ratio, ratio_pow2_exp, Angle, Arc};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum PlMapError {
    #[error("NonMonotone: node values violate the cyclic order of breakpoints")]
    NonMonotone,
    #[error("EmptyMap: a map needs at least one node")]
    Empty,
    #[error("NotDyadic: arc interpolation requires dyadic endpoints")]
    NotDyadic,
    #[error("Unrealizable: segment is not a branch of the doubling pseudo-group")]
    Unrealizable,
    #[error("NonPowerOfTwoSlope: segment slope is not an integer power of 2")]
    NonPowerOfTwoSlope,
    #[error("ParseMap: {0}")]
    Parse(String),
}

/// Membership of a map in the concrete Thompson-like families.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum MembershipClass {
    /// Dyadic breakpoints and values, slopes integer powers of 2.
    ThompsonT,
    /// Breakpoints and values with denominators `2^k` or `3·2^k`, slopes
    /// integer powers of 2.
    ThompsonLikeTAlpha,
    Neither,
}

impl fmt::Display for MembershipClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MembershipClass::ThompsonT => write!(f, "ThompsonT"),
            MembershipClass::ThompsonLikeTAlpha => write!(f, "ThompsonLikeTα"),
            MembershipClass::Neither => write!(f, "Neither"),
        }
    }
}

/// The three circle generators of Thompson's group T.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Generator {
    A,
    B,
    C,
}

/// An orientation-preserving PL circle homeomorphism, linear in the angular
/// coordinate between consecutive nodes. One node means a rigid rotation.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct PLCircleMap {
    nodes: Vec<(Angle, Angle)>,
}

impl PLCircleMap {
    /// Build and canonicalize a map interpolating the given
    /// `(breakpoint, value)` pairs. Rejects repeated breakpoints or values and
    /// value sequences that are not in the breakpoints' cyclic order.
    pub fn new(pairs: Vec<(Angle, Angle)>) -> Result<Self, PlMapError> {
        if pairs.is_empty() {
            return Err(PlMapError::Empty);
        }
        let mut nodes = pairs;
        nodes.sort_by(|a, b| a.0.cmp(&b.0));
        for w in nodes.windows(2) {
            if w[0].0 == w[1].0 {
                return Err(PlMapError::NonMonotone);
            }
        }
        if nodes.len() > 1 {
            // Degree one: the value arcs must tile the circle exactly once.
            let mut total = BigRational::zero();
            for i in 0..nodes.len() {
                let j = (i + 1) % nodes.len();
                if nodes[i].1 == nodes[j].1 {
                    return Err(PlMapError::NonMonotone);
                }
                total += nodes[i].1.dist_ccw(&nodes[j].1);
            }
            if total != BigRational::one() {
                return Err(PlMapError::NonMonotone);
            }
        }
        Ok(PLCircleMap {
            nodes: canonicalize(nodes),
        })
    }

    pub fn identity() -> Self {
        PLCircleMap {
            nodes: vec![(Angle::zero(), Angle::zero())],
        }
    }

    pub fn rotation(by: &Angle) -> Self {
        PLCircleMap {
            nodes: vec![(Angle::zero(), by.clone())],
        }
    }

    pub fn is_identity(&self) -> bool {
        self.nodes.len() == 1 && self.nodes[0].0 == self.nodes[0].1 && self.nodes[0].0.is_zero()
    }

    /// `Some(r)` when the map is the rigid rotation by `r`.
    pub fn as_rotation(&self) -> Option<&Angle> {
        if self.nodes.len() == 1 {
            Some(&self.nodes[0].1)
        } else {
            None
        }
    }

    pub fn nodes(&self) -> &[(Angle, Angle)] {
        &self.nodes
    }

    pub fn breakpoints(&self) -> impl Iterator<Item = &Angle> {
        self.nodes.iter().map(|(b, _)| b)
    }

    /// Slope of segment `i` (from node `i` to node `i+1`, cyclically).
    pub fn segment_slope(&self, i: usize) -> BigRational {
        if self.nodes.len() == 1 {
            return BigRational::one();
        }
        let j = (i + 1) % self.nodes.len();
        self.nodes[i].1.dist_ccw(&self.nodes[j].1) / self.nodes[i].0.dist_ccw(&self.nodes[j].0)
    }

    pub fn slopes(&self) -> Vec<BigRational> {
        (0..self.nodes.len()).map(|i| self.segment_slope(i)).collect()
    }

    /// Exact image of `a`.
    pub fn evaluate(&self, a: &Angle) -> Angle {
        if self.nodes.len() == 1 {
            let (b, v) = &self.nodes[0];
            return v.add(&a.sub(b));
        }
        let base = &self.nodes[0].0;
        let off = base.dist_ccw(a);
        // Last node whose offset from the base does not exceed `off`.
        let idx = self
            .nodes
            .partition_point(|(b, _)| base.dist_ccw(b) <= off)
            .saturating_sub(1);
        let (b, v) = &self.nodes[idx];
        let slope = self.segment_slope(idx);
        let delta = b.dist_ccw(a) * slope;
        v.add(&Angle::from_ratio(delta))
    }

    /// Exact composition `self ∘ other` (apply `other` first).
    pub fn compose(&self, other: &Self) -> Self {
        let other_inv = other.invert();
        let mut cuts: Vec<Angle> = other.breakpoints().cloned().collect();
        for b in self.breakpoints() {
            cuts.push(other_inv.evaluate(b));
        }
        cuts.sort();
        cuts.dedup();
        let nodes = cuts
            .into_iter()
            .map(|x| {
                let y = self.evaluate(&other.evaluate(&x));
                (x, y)
            })
            .collect();
        PLCircleMap {
            nodes: canonicalize(nodes),
        }
    }

    /// Exact inverse.
    pub fn invert(&self) -> Self {
        let mut nodes: Vec<(Angle, Angle)> =
            self.nodes.iter().map(|(b, v)| (v.clone(), b.clone())).collect();
        nodes.sort_by(|a, b| a.0.cmp(&b.0));
        PLCircleMap {
            nodes: canonicalize(nodes),
        }
    }

    /// The exact maps of the generator formulas, canonicalized.
    pub fn generator(g: Generator) -> Self {
        let n = |p: i64, q: i64| Angle::new(p, q);
        let pairs = match g {
            Generator::A => vec![
                (Angle::zero(), Angle::zero()),
                (n(1, 2), n(1, 4)),
                (n(3, 4), n(1, 2)),
            ],
            Generator::B => vec![
                (Angle::zero(), Angle::zero()),
                (n(1, 2), n(1, 2)),
                (n(3, 4), n(5, 8)),
                (n(7, 8), n(3, 4)),
            ],
            Generator::C => vec![
                (Angle::zero(), n(3, 4)),
                (n(1, 2), Angle::zero()),
                (n(3, 4), n(1, 2)),
            ],
        };
        PLCircleMap::new(pairs).expect("generator data is monotone")
    }

    pub fn membership_class(&self) -> MembershipClass {
        let slopes_pow2 = (0..self.nodes.len()).all(|i| ratio_pow2_exp(&self.segment_slope(i)).is_some());
        if !slopes_pow2 {
            return MembershipClass::Neither;
        }
        if self.nodes.iter().all(|(b, v)| b.is_dyadic() && v.is_dyadic()) {
            MembershipClass::ThompsonT
        } else if self
            .nodes
            .iter()
            .all(|(b, v)| b.is_tri_dyadic() && v.is_tri_dyadic())
        {
            MembershipClass::ThompsonLikeTAlpha
        } else {
            MembershipClass::Neither
        }
    }

    /// Serialize in the `plmap v1` format: one node per line, canonical order.
    pub fn to_plmap_v1(&self) -> String {
        let mut s = String::from("plmap v1\n");
        for (b, v) in &self.nodes {
            s.push_str(&format!("{b} -> {v}\n"));
        }
        s
    }

    pub fn from_plmap_v1(text: &str) -> Result<Self, PlMapError> {
        let mut lines = text.lines();
        match lines.next() {
            Some("plmap v1") => {}
            other => {
                return Err(PlMapError::Parse(format!(
                    "expected header 'plmap v1', got {other:?}"
                )))
            }
        }
        let mut pairs = Vec::new();
        for line in lines {
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            let (lhs, rhs) = line
                .split_once("->")
                .ok_or_else(|| PlMapError::Parse(format!("bad node line {line:?}")))?;
            let b: Angle = lhs.trim().parse().map_err(|e| PlMapError::Parse(format!("{e}")))?;
            let v: Angle = rhs.trim().parse().map_err(|e| PlMapError::Parse(format!("{e}")))?;
            pairs.push((b, v));
        }
        PLCircleMap::new(pairs)
    }
}

impl fmt::Debug for PLCircleMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "plmap[")?;
        for (i, (b, v)) in self.nodes.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{b}->{v}")?;
        }
        write!(f, "]")
    }
}

/// Drop collinear interior nodes, collapse rotations to `(0, r)`, and start
/// the list at the smallest breakpoint. Idempotent.
fn canonicalize(nodes: Vec<(Angle, Angle)>) -> Vec<(Angle, Angle)> {
    if nodes.len() == 1 {
        let (b, v) = &nodes[0];
        let rot = v.sub(b);
        return vec![(Angle::zero(), rot)];
    }
    let k = nodes.len();
    let slope = |i: usize| -> BigRational {
        let j = (i + 1) % k;
        nodes[i].1.dist_ccw(&nodes[j].1) / nodes[i].0.dist_ccw(&nodes[j].0)
    };
    let mut kept: Vec<(Angle, Angle)> = Vec::with_capacity(k);
    for (i, node) in nodes.iter().enumerate() {
        let prev = (i + k - 1) % k;
        if slope(prev) != slope(i) {
            kept.push(node.clone());
        }
    }
    if kept.is_empty() {
        // All segments collinear: a rigid rotation (slope is forced to 1).
        let rot = nodes[0].1.sub(&nodes[0].0);
        return vec![(Angle::zero(), rot)];
    }
    kept.sort_by(|a, b| a.0.cmp(&b.0));
    kept
}

/// A piecewise-linear bijection between two circle arcs, stored as strictly
/// increasing offset pairs from the arc starts. Offsets avoid mod-1 wrap
/// degeneracies when either arc is the full circle.
#[derive(Clone, PartialEq, Eq)]
pub struct ArcMap {
    src_start: Angle,
    dst_start: Angle,
    /// `(source offset, destination offset)`, starting at `(0, 0)` and ending
    /// at `(source length, destination length)`.
    offsets: Vec<(BigRational, BigRational)>,
}

impl ArcMap {
    /// Node pairs as absolute angles (the last node wraps for full circles).
    pub fn nodes(&self) -> Vec<(Angle, Angle)> {
        self.offsets
            .iter()
            .map(|(s, d)| {
                (
                    self.src_start.add(&Angle::from_ratio(s.clone())),
                    self.dst_start.add(&Angle::from_ratio(d.clone())),
                )
            })
            .collect()
    }

    pub fn source_start(&self) -> &Angle {
        &self.src_start
    }

    pub fn source_len(&self) -> &BigRational {
        &self.offsets.last().unwrap().0
    }

    /// Image of `a`; `None` outside the source arc.
    pub fn evaluate(&self, a: &Angle) -> Option<Angle> {
        let off = self.src_start.dist_ccw(a);
        if &off > self.source_len() {
            return None;
        }
        let idx = self
            .offsets
            .partition_point(|(s, _)| s <= &off)
            .saturating_sub(1)
            .min(self.offsets.len() - 2);
        let (s0, d0) = &self.offsets[idx];
        let (s1, d1) = &self.offsets[idx + 1];
        let slope = (d1 - d0) / (s1 - s0);
        let dst = d0 + (off - s0) * slope;
        Some(self.dst_start.add(&Angle::from_ratio(dst)))
    }

    pub fn slopes(&self) -> Vec<BigRational> {
        self.offsets
            .windows(2)
            .map(|w| (&w[1].1 - &w[0].1) / (&w[1].0 - &w[0].0))
            .collect()
    }

    /// Interior breakpoints (excluding both endpoints) with their values.
    pub fn interior_nodes(&self) -> Vec<(Angle, Angle)> {
        self.offsets[1..self.offsets.len() - 1]
            .iter()
            .map(|(s, d)| {
                (
                    self.src_start.add(&Angle::from_ratio(s.clone())),
                    self.dst_start.add(&Angle::from_ratio(d.clone())),
                )
            })
            .collect()
    }

    /// Offset pairs, including both endpoints.
    pub fn offsets(&self) -> &[(BigRational, BigRational)] {
        &self.offsets
    }

    /// Destination offset for a source offset in `[0, source length]`.
    pub fn offset_value(&self, src: &BigRational) -> BigRational {
        debug_assert!(!src.is_negative() && src <= self.source_len());
        let idx = self
            .offsets
            .partition_point(|(s, _)| s <= src)
            .saturating_sub(1)
            .min(self.offsets.len() - 2);
        let (s0, d0) = &self.offsets[idx];
        let (s1, d1) = &self.offsets[idx + 1];
        d0 + (src - s0) * (d1 - d0) / (s1 - s0)
    }
}

impl fmt::Debug for ArcMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "arcmap{:?}", self.nodes())
    }
}

/// PL bijection `I0 → I1` with dyadic breakpoints and power-of-two slopes:
/// the two-slope construction stretching an initial block by `2^e` and the
/// rest by `2^{e+1}`, where `2^e ≤ len1/len0 < 2^{e+1}`.
///
/// `len = 1` (full circle cut at the start point) is allowed on either side.
pub fn arc_interpolate_span(
    start0: &Angle,
    len0: &BigRational,
    start1: &Angle,
    len1: &BigRational,
) -> Result<ArcMap, PlMapError> {
    if !(start0.is_dyadic() && start1.is_dyadic() && len0.denom().magnitude().count_ones() == 1
        && len1.denom().magnitude().count_ones() == 1)
    {
        return Err(PlMapError::NotDyadic);
    }
    if !len0.is_positive() || !len1.is_positive() || len0 > &BigRational::one() || len1 > &BigRational::one() {
        return Err(PlMapError::NotDyadic);
    }
    let ratio = len1 / len0;
    // Largest e with 2^e ≤ ratio.
    let mut e = ratio.numer().bits() as i64 - ratio.denom().bits() as i64;
    while pow2_ratio(e) > ratio {
        e -= 1;
    }
    while pow2_ratio(e + 1) <= ratio {
        e += 1;
    }
    let slope = pow2_ratio(e);
    // Split len0 = x + y with x·2^e + y·2^{e+1} = len1.
    let y = len1 / &slope - len0;
    let x = len0 - &y;
    debug_assert!(!x.is_negative() && !y.is_negative());
    let mut offsets = vec![(BigRational::zero(), BigRational::zero())];
    if !x.is_zero() && !y.is_zero() {
        offsets.push((x.clone(), &x * &slope));
    }
    offsets.push((len0.clone(), len1.clone()));
    Ok(ArcMap {
        src_start: start0.clone(),
        dst_start: start1.clone(),
        offsets,
    })
}

/// [`arc_interpolate_span`] for proper arcs.
pub fn arc_interpolate(i0: &Arc, i1: &Arc) -> Result<ArcMap, PlMapError> {
    if !(i0.end().is_dyadic() && i1.end().is_dyadic()) {
        return Err(PlMapError::NotDyadic);
    }
    arc_interpolate_span(i0.start(), &i0.length(), i1.start(), &i1.length())
}

/// The data of a pseudo-group element `g^{-m}∘g^n` restricted to an arc:
/// `anchor` is the image of the arc's start (the chosen `g^{-m}`-preimage).
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct DynBranch {
    pub forward: u32,
    pub backward: u32,
    pub anchor: Angle,
}

impl DynBranch {
    /// Slope `2^{forward - backward}` as an exact rational.
    pub fn slope(&self) -> BigRational {
        pow2_ratio(self.forward as i64 - self.backward as i64)
    }

    /// Image of `x` for a branch anchored at the start of `segment`.
    pub fn evaluate(&self, seg_start: &Angle, x: &Angle) -> Angle {
        let off = seg_start.dist_ccw(x);
        self.anchor.add(&Angle::from_ratio(off * self.slope()))
    }
}

/// A circle domain for a pseudo-group piece: `length = 1` is the full circle.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct CircleSegment {
    pub start: Angle,
    pub length: BigRational,
}

/// One piece of a piecewise dynamical map.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct DynPiece {
    pub segment: CircleSegment,
    pub branch: DynBranch,
}

/// Realize the linear map sending `start ↦ img_start` with slope `2^e` along
/// an arc of length `len` as a branch `g^{-m}∘g^n`, with the minimal valid
/// `n`. Both `2^n·start` and `2^m·img_start` must eventually agree mod 1.
pub fn dyn_decompose_linear(
    start: &Angle,
    img_start: &Angle,
    len: &BigRational,
    slope_exp: i64,
) -> Result<DynBranch, PlMapError> {
    if !len.is_positive()
        || len > &BigRational::one()
        || len * pow2_ratio(slope_exp) > BigRational::one()
    {
        return Err(PlMapError::Unrealizable);
    }
    let cap = 2 * (start.denom().bits() + img_start.denom().bits()) as i64 + 72;
    let mut n = slope_exp.max(0);
    while n <= cap {
        let m = n - slope_exp;
        debug_assert!(m >= 0);
        let lhs = start.double_n(n as u32);
        let rhs = img_start.double_n(m as u32);
        if lhs == rhs {
            return Ok(DynBranch {
                forward: n as u32,
                backward: m as u32,
                anchor: img_start.clone(),
            });
        }
        n += 1;
    }
    Err(PlMapError::Unrealizable)
}

/// [`dyn_decompose_linear`] with the arc endpoints spelled out, verified by
/// evaluating the branch at both endpoints of `i`.
pub fn dyn_decompose_segment(i: &Arc, img: &Arc, slope_exp: i64) -> Result<DynBranch, PlMapError> {
    if img.length() != i.length() * pow2_ratio(slope_exp) {
        return Err(PlMapError::Unrealizable);
    }
    let branch = dyn_decompose_linear(i.start(), img.start(), &i.length(), slope_exp)?;
    if &branch.evaluate(i.start(), i.end()) != img.end()
        || &branch.evaluate(i.start(), i.start()) != img.start()
    {
        return Err(PlMapError::Unrealizable);
    }
    Ok(branch)
}

/// Decompose a Thompson(-like) map into pseudo-group branches, one per
/// linearity segment. Concatenation reproduces the map exactly.
pub fn piecewise_dynamical_decomposition(
    f: &PLCircleMap,
) -> Result<Vec<DynPiece>, PlMapError> {
    if f.membership_class() == MembershipClass::Neither {
        return Err(PlMapError::NonPowerOfTwoSlope);
    }
    let nodes = f.nodes();
    if let Some(rot) = f.as_rotation() {
        // A rotation is a single global branch g^{-n}∘g^n.
        let branch = dyn_decompose_linear(&Angle::zero(), rot, &BigRational::one(), 0)?;
        return Ok(vec![DynPiece {
            segment: CircleSegment {
                start: Angle::zero(),
                length: BigRational::one(),
            },
            branch,
        }]);
    }
    let mut out = Vec::with_capacity(nodes.len());
    for i in 0..nodes.len() {
        let j = (i + 1) % nodes.len();
        let seg_len = nodes[i].0.dist_ccw(&nodes[j].0);
        let slope = f.segment_slope(i);
        let e = ratio_pow2_exp(&slope).ok_or(PlMapError::NonPowerOfTwoSlope)?;
        let branch = dyn_decompose_linear(&nodes[i].0, &nodes[i].1, &seg_len, e)?;
        debug_assert_eq!(&branch.evaluate(&nodes[i].0, &nodes[j].0), &nodes[j].1);
        out.push(DynPiece {
            segment: CircleSegment {
                start: nodes[i].0.clone(),
                length: seg_len,
            },
            branch,
        });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circle::Angle;
    use num_bigint::BigInt;

    fn ang(n: i64, d: i64) -> Angle {
        Angle::new(n, d)
    }

    fn word_map(word: &[(Generator, bool)]) -> PLCircleMap {
        word.iter().fold(PLCircleMap::identity(), |acc, (g, inv)| {
            let m = PLCircleMap::generator(*g);
            let m = if *inv { m.invert() } else { m };
            acc.compose(&m)
        })
    }

    /// The defining formulas, written independently of the node representation.
    fn formula_a(t: &Angle) -> Angle {
        let r = t.as_ratio().clone();
        let half = BigRational::new(BigInt::from(1), BigInt::from(2));
        let three_q = BigRational::new(BigInt::from(3), BigInt::from(4));
        Angle::from_ratio(if r <= half {
            r / BigRational::from_integer(BigInt::from(2))
        } else if r <= three_q {
            r - BigRational::new(BigInt::from(1), BigInt::from(4))
        } else {
            r * BigRational::from_integer(BigInt::from(2)) - BigRational::one()
        })
    }

    #[test]
    fn generator_shapes() {
        let a = PLCircleMap::generator(Generator::A);
        assert_eq!(
            a.nodes(),
            &[
                (Angle::zero(), Angle::zero()),
                (ang(1, 2), ang(1, 4)),
                (ang(3, 4), ang(1, 2))
            ]
        );
        let slopes = a.slopes();
        assert_eq!(slopes[0], BigRational::new(BigInt::from(1), BigInt::from(2)));
        assert_eq!(slopes[2], BigRational::from_integer(BigInt::from(2)));

        let b = PLCircleMap::generator(Generator::B);
        // Identity on [0, 1/2]; interior breaks at 1/2, 3/4, 7/8.
        assert_eq!(b.evaluate(&ang(1, 4)), ang(1, 4));
        for bp in [ang(1, 2), ang(3, 4), ang(7, 8)] {
            assert!(b.breakpoints().any(|x| *x == bp));
        }

        let c = PLCircleMap::generator(Generator::C);
        assert_eq!(c.evaluate(&Angle::zero()), ang(3, 4));
        assert_eq!(c.evaluate(&ang(1, 2)), Angle::zero());
    }

    #[test]
    fn evaluation_matches_formulas() {
        let a = PLCircleMap::generator(Generator::A);
        assert_eq!(a.evaluate(&ang(3, 4)), ang(1, 2));
        let c = PLCircleMap::generator(Generator::C);
        assert_eq!(c.evaluate(&Angle::zero()), ang(3, 4));
        let b = PLCircleMap::generator(Generator::B);
        assert_eq!(b.evaluate(&ang(15, 16)), ang(7, 8));
        for k in 0..64 {
            let t = ang(k, 64);
            assert_eq!(a.evaluate(&t), formula_a(&t), "A at {t}");
        }
    }

    #[test]
    fn rotation_is_single_node() {
        let r = PLCircleMap::rotation(&ang(1, 2));
        assert_eq!(r.nodes().len(), 1);
        assert_eq!(r.evaluate(&ang(1, 3)), ang(5, 6));
        // A rotation presented with two nodes canonicalizes to one.
        let two = PLCircleMap::new(vec![(ang(1, 3), ang(7, 12)), (ang(5, 6), ang(1, 12))]).unwrap();
        assert_eq!(two, PLCircleMap::rotation(&ang(1, 4)));
    }

    #[test]
    fn non_monotone_rejected() {
        let e = PLCircleMap::new(vec![
            (Angle::zero(), Angle::zero()),
            (ang(1, 2), ang(1, 4)),
            (ang(1, 4), ang(1, 2)),
        ]);
        assert_eq!(e, Err(PlMapError::NonMonotone));
    }

    #[test]
    fn c_cubed_is_identity() {
        let c = PLCircleMap::generator(Generator::C);
        assert!(c.compose(&c.compose(&c)).is_identity());
        let a = PLCircleMap::generator(Generator::A);
        assert!(a.compose(&a.invert()).is_identity());
        assert_eq!(
            PLCircleMap::rotation(&ang(1, 4)).invert(),
            PLCircleMap::rotation(&ang(3, 4))
        );
    }

    #[test]
    fn membership_classification() {
        assert_eq!(
            PLCircleMap::generator(Generator::A).membership_class(),
            MembershipClass::ThompsonT
        );
        let iota = PLCircleMap::new(vec![(ang(1, 3), ang(2, 3)), (ang(2, 3), ang(1, 3))]).unwrap();
        assert_eq!(iota.membership_class(), MembershipClass::ThompsonLikeTAlpha);
        assert_eq!(
            PLCircleMap::rotation(&ang(1, 5)).membership_class(),
            MembershipClass::Neither
        );
    }

    #[test]
    fn random_words_stay_in_thompson_t() {
        let gens = [Generator::A, Generator::B, Generator::C];
        let mut state = 0x9e3779b97f4a7c15u64;
        let mut next = move || {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            state
        };
        for _ in 0..500 {
            let len = (next() % 12 + 1) as usize;
            let word: Vec<(Generator, bool)> = (0..len)
                .map(|_| (gens[(next() % 3) as usize], next() % 2 == 0))
                .collect();
            let m = word_map(&word);
            assert_eq!(m.membership_class(), MembershipClass::ThompsonT);
            assert!(m.compose(&m.invert()).is_identity());
        }
    }

    #[test]
    fn canonical_form_is_idempotent() {
        let a = PLCircleMap::generator(Generator::A);
        let again = PLCircleMap::new(a.nodes().to_vec()).unwrap();
        assert_eq!(a, again);
        // Adding a collinear node changes nothing.
        let mut padded = a.nodes().to_vec();
        padded.push((ang(1, 4), a.evaluate(&ang(1, 4))));
        assert_eq!(PLCircleMap::new(padded).unwrap(), a);
    }

    #[test]
    fn serialization_round_trip() {
        let b = PLCircleMap::generator(Generator::B);
        let text = b.to_plmap_v1();
        assert!(text.starts_with("plmap v1\n"));
        let back = PLCircleMap::from_plmap_v1(&text).unwrap();
        assert_eq!(b, back);
        assert_eq!(back.to_plmap_v1(), text);
    }

    #[test]
    fn arc_interpolation_examples() {
        let i0 = Arc::new(Angle::zero(), ang(1, 2)).unwrap();
        let m = arc_interpolate(&i0, &i0).unwrap();
        assert_eq!(m.evaluate(&ang(1, 4)), Some(ang(1, 4)));
        assert!(m.slopes().iter().all(|s| s.is_one()));

        let i1 = Arc::new(Angle::zero(), ang(1, 4)).unwrap();
        let i2 = Arc::new(Angle::zero(), ang(1, 2)).unwrap();
        let m = arc_interpolate(&i1, &i2).unwrap();
        assert_eq!(m.slopes(), vec![BigRational::from_integer(BigInt::from(2))]);

        let i3 = Arc::new(Angle::zero(), ang(3, 4)).unwrap();
        let m = arc_interpolate(&i1, &i3).unwrap();
        assert_eq!(
            m.nodes(),
            vec![
                (Angle::zero(), Angle::zero()),
                (ang(1, 8), ang(1, 4)),
                (ang(1, 4), ang(3, 4))
            ]
        );
        for s in m.slopes() {
            assert!(ratio_pow2_exp(&s).is_some(), "slope {s} not a power of 2");
        }
        assert!(m.nodes().iter().all(|(b, v)| b.is_dyadic() && v.is_dyadic()));
    }

    #[test]
    fn dyn_segment_examples() {
        // Branch of g^{-1} fixing 0.
        let b = dyn_decompose_segment(
            &Arc::new(Angle::zero(), ang(1, 2)).unwrap(),
            &Arc::new(Angle::zero(), ang(1, 4)).unwrap(),
            -1,
        )
        .unwrap();
        assert_eq!((b.forward, b.backward), (0, 1));
        assert_eq!(b.anchor, Angle::zero());

        // g^{-2}∘g² taking [1/2, 3/4] to [1/4, 1/2].
        let b = dyn_decompose_segment(
            &Arc::new(ang(1, 2), ang(3, 4)).unwrap(),
            &Arc::new(ang(1, 4), ang(1, 2)).unwrap(),
            0,
        )
        .unwrap();
        assert_eq!((b.forward, b.backward), (2, 2));
        assert_eq!(b.anchor.double_n(2), ang(1, 2).double_n(2));

        // g itself on [3/4, 1].
        let b = dyn_decompose_segment(
            &Arc::new(ang(3, 4), Angle::zero()).unwrap(),
            &Arc::new(ang(1, 2), Angle::zero()).unwrap(),
            1,
        )
        .unwrap();
        assert_eq!((b.forward, b.backward), (1, 0));
    }

    #[test]
    fn decomposition_of_a_matches_display() {
        let a = PLCircleMap::generator(Generator::A);
        let pieces = piecewise_dynamical_decomposition(&a).unwrap();
        assert_eq!(pieces.len(), 3);
        assert_eq!(
            (pieces[0].branch.forward, pieces[0].branch.backward),
            (0, 1)
        );
        assert_eq!(
            (pieces[1].branch.forward, pieces[1].branch.backward),
            (2, 2)
        );
        assert_eq!(
            (pieces[2].branch.forward, pieces[2].branch.backward),
            (1, 0)
        );
    }

    #[test]
    fn decomposition_of_identity_is_trivial_branch() {
        let pieces = piecewise_dynamical_decomposition(&PLCircleMap::identity()).unwrap();
        assert_eq!(pieces.len(), 1);
        assert_eq!(pieces[0].branch.forward, 0);
        assert_eq!(pieces[0].branch.backward, 0);
        assert_eq!(pieces[0].segment.length, BigRational::one());
    }

    #[test]
    fn decomposition_re_evaluates_random_words() {
        let gens = [Generator::A, Generator::B, Generator::C];
        let mut state = 0x243f6a8885a308d3u64;
        let mut next = move || {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            state
        };
        for _ in 0..50 {
            let len = (next() % 6 + 1) as usize;
            let word: Vec<(Generator, bool)> = (0..len)
                .map(|_| (gens[(next() % 3) as usize], next() % 2 == 0))
                .collect();
            let m = word_map(&word);
            let pieces = piecewise_dynamical_decomposition(&m).unwrap();
            for piece in &pieces {
                for k in 0..10u64 {
                    let off = piece.segment.length.clone()
                        * BigRational::new(BigInt::from(2 * k + 1), BigInt::from(20));
                    let x = piece.segment.start.add(&Angle::from_ratio(off));
                    let lhs = piece.branch.evaluate(&piece.segment.start, &x);
                    assert_eq!(lhs, m.evaluate(&x));
                    // Branch consistency: g^m ∘ branch == g^n on the segment.
                    assert_eq!(
                        lhs.double_n(piece.branch.backward),
                        x.double_n(piece.branch.forward)
                    );
                }
            }
        }
    }
}
