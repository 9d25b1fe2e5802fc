//! The basilica lamination: the angle sets `D_n`, dynamical partitions of
//! the circle, leaf pairing, and the correspondence between inner
//! (component-boundary) and outer (Böttcher) angle coordinates.
//!
//! Outer angles live on the circle at infinity; the rays of angles
//! `D_n = g^{-n}{1/3, 2/3}` land at the iterated preimages of the α fixed
//! point. Two angles form a *leaf* when their rays land at the same point.
//! The lamination is generated by pulling the root leaf `{1/3, 2/3}` back
//! under the doubling map, keeping one preimage pair in each half-disk cut
//! by the diameter at `e(1/3)` (with `e(2/3)` on the minus side).

use std::collections::{HashMap, HashSet};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::circle::{Angle, Arc};
use crate::plmap::PLCircleMap;

/// Default cap on subdivision depth; deep enough for every test and figure
/// in this crate while keeping denominators around `3·2^24`.
pub const DEFAULT_DEPTH_CAP: u32 = 24;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum LaminationError {
    #[error("DepthCap: requested depth {requested} exceeds cap {cap}")]
    DepthCap { requested: u32, cap: u32 },
    #[error("NotLaminationPoint: {0} is not in D_infinity")]
    NotLaminationPoint(Angle),
}

/// An unordered pair of co-landing angles, stored with `a < b`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Leaf {
    a: Angle,
    b: Angle,
}

impl Leaf {
    pub fn new(x: Angle, y: Angle) -> Self {
        if x <= y {
            Leaf { a: x, b: y }
        } else {
            Leaf { a: y, b: x }
        }
    }

    pub fn small(&self) -> &Angle {
        &self.a
    }

    pub fn big(&self) -> &Angle {
        &self.b
    }

    pub fn contains(&self, x: &Angle) -> bool {
        &self.a == x || &self.b == x
    }

    pub fn other(&self, x: &Angle) -> Option<&Angle> {
        if x == &self.a {
            Some(&self.b)
        } else if x == &self.b {
            Some(&self.a)
        } else {
            None
        }
    }

    /// Chord crossing test: exactly one endpoint of `other` lies strictly
    /// inside the arc `(a, b)`.
    pub fn links(&self, other: &Leaf) -> bool {
        let inside = |x: &Angle| {
            x != &self.a && x != &self.b && self.a.dist_ccw(x) < self.a.dist_ccw(&self.b)
        };
        inside(&other.a) ^ inside(&other.b)
    }

    pub fn root_leaf() -> Self {
        Leaf::new(Angle::new(1, 3), Angle::new(2, 3))
    }
}

/// The angles of `D_n = g^{-n}{1/3, 2/3}`, cyclically sorted. `2^{n+1}` points
/// with denominators dividing `3·2^n`.
pub fn d_points_with_cap(n: u32, cap: u32) -> Result<Vec<Angle>, LaminationError> {
    if n > cap {
        return Err(LaminationError::DepthCap { requested: n, cap });
    }
    let denom = BigInt::from(3) << n;
    let count = 1u64 << n;
    let mut pts = Vec::with_capacity(2 * count as usize);
    for k in 0..count {
        let base = BigInt::from(3) * BigInt::from(k);
        for extra in [1u32, 2u32] {
            pts.push(Angle::from_ratio(BigRational::new(
                &base + BigInt::from(extra),
                denom.clone(),
            )));
        }
    }
    pts.sort();
    Ok(pts)
}

pub fn d_points(n: u32) -> Result<Vec<Angle>, LaminationError> {
    d_points_with_cap(n, DEFAULT_DEPTH_CAP)
}

/// Gap lengths of `D_n` alternate exactly between `1/(3·2^n)` and
/// `2/(3·2^n)`.
pub fn verify_alternation(n: u32) -> bool {
    let pts = match d_points_with_cap(n, u32::MAX) {
        Ok(p) => p,
        Err(_) => return false,
    };
    let short = BigRational::new(BigInt::one(), BigInt::from(3) << n);
    let long = &short + &short;
    let k = pts.len();
    let mut expect_short = {
        // The gap after the first point fixes the parity of the alternation.
        let g = pts[0].dist_ccw(&pts[1]);
        if g == short {
            true
        } else if g == long {
            false
        } else {
            return false;
        }
    };
    for i in 0..k {
        let gap = pts[i].dist_ccw(&pts[(i + 1) % k]);
        let want = if expect_short { &short } else { &long };
        if &gap != want {
            return false;
        }
        expect_short = !expect_short;
    }
    true
}

/// Which open half-disk (cut by the diameter at angles `1/3` and `5/6`) an
/// angle lies in: `false` is the side containing `2/3`, `true` the side
/// containing `0`. `None` on the diameter itself.
fn half_disk_side(x: &Angle) -> Option<bool> {
    let d_start = Angle::new(1, 3);
    let d_end = Angle::new(5, 6);
    if x == &d_start || x == &d_end {
        return None;
    }
    Some(d_start.dist_ccw(x) >= d_start.dist_ccw(&d_end))
}

/// The two `g`-preimage leaves of a leaf, one per closed half-disk. The root
/// leaf reproduces itself plus the leaf `{1/6, 5/6}`.
fn pullback_leaf(leaf: &Leaf) -> [Leaf; 2] {
    if leaf == &Leaf::root_leaf() {
        return [Leaf::root_leaf(), Leaf::new(Angle::new(1, 6), Angle::new(5, 6))];
    }
    let (a0, a1) = leaf.small().halves();
    let (b0, b1) = leaf.big().halves();
    let sa0 = half_disk_side(&a0).expect("deeper preimages avoid the diameter");
    let sb0 = half_disk_side(&b0).expect("deeper preimages avoid the diameter");
    if sa0 == sb0 {
        [Leaf::new(a0, b0), Leaf::new(a1, b1)]
    } else {
        [Leaf::new(a0, b1), Leaf::new(a1, b0)]
    }
}

/// The lamination materialized level by level: level 0 holds the root leaf,
/// level `k ≥ 1` holds the `2^{k-1}` leaves pairing `D_k \ D_{k-1}`.
pub struct LaminationLevels {
    depth: u32,
    levels: Vec<Vec<Leaf>>,
    partner: HashMap<Angle, Angle>,
}

impl LaminationLevels {
    pub fn depth(&self) -> u32 {
        self.depth
    }

    pub fn level(&self, k: u32) -> &[Leaf] {
        &self.levels[k as usize]
    }

    pub fn all_leaves(&self) -> impl Iterator<Item = &Leaf> {
        self.levels.iter().flatten()
    }

    pub fn leaf_count(&self) -> usize {
        self.levels.iter().map(Vec::len).sum()
    }

    /// The unique partner of a point of `∪_{k ≤ depth} D_k`.
    pub fn partner(&self, a: &Angle) -> Result<Angle, LaminationError> {
        self.partner
            .get(a)
            .cloned()
            .ok_or_else(|| LaminationError::NotLaminationPoint(a.clone()))
    }

    pub fn is_leaf(&self, leaf: &Leaf) -> bool {
        self.partner.get(leaf.small()) == Some(leaf.big())
    }
}

pub fn build_lamination_with_cap(
    depth: u32,
    cap: u32,
) -> Result<LaminationLevels, LaminationError> {
    if depth > cap {
        return Err(LaminationError::DepthCap {
            requested: depth,
            cap,
        });
    }
    let mut levels = vec![vec![Leaf::root_leaf()]];
    let mut seen: HashSet<Leaf> = levels[0].iter().cloned().collect();
    for _ in 1..=depth {
        let prev = levels.last().unwrap();
        let mut fresh = Vec::with_capacity(2 * prev.len());
        for leaf in prev {
            for pulled in pullback_leaf(leaf) {
                if seen.insert(pulled.clone()) {
                    fresh.push(pulled);
                }
            }
        }
        fresh.sort_by(|x, y| x.small().cmp(y.small()));
        levels.push(fresh);
    }
    let mut partner = HashMap::new();
    for leaf in levels.iter().flatten() {
        partner.insert(leaf.small().clone(), leaf.big().clone());
        partner.insert(leaf.big().clone(), leaf.small().clone());
    }
    Ok(LaminationLevels {
        depth,
        levels,
        partner,
    })
}

pub fn build_lamination(depth: u32) -> Result<LaminationLevels, LaminationError> {
    build_lamination_with_cap(depth, DEFAULT_DEPTH_CAP)
}

/// The partner of any point of `D_∞`, by descending the pullback recursion:
/// the leaf through `a` is the half-disk-compatible preimage of the leaf
/// through `g(a)`.
pub fn partner(a: &Angle) -> Result<Angle, LaminationError> {
    let level = a
        .d_infinity_level()
        .ok_or_else(|| LaminationError::NotLaminationPoint(a.clone()))?;
    match level {
        0 => Ok(if a == &Angle::new(1, 3) {
            Angle::new(2, 3)
        } else {
            Angle::new(1, 3)
        }),
        1 => Ok(if a == &Angle::new(1, 6) {
            Angle::new(5, 6)
        } else {
            Angle::new(1, 6)
        }),
        _ => {
            let p = partner(&a.double())?;
            let (h0, h1) = p.halves();
            let sa = half_disk_side(a).expect("level >= 2 avoids the diameter");
            let s0 = half_disk_side(&h0).expect("level >= 2 avoids the diameter");
            Ok(if sa == s0 { h0 } else { h1 })
        }
    }
}

/// Classification of a partition arc: `Limb` when its endpoints co-land (the
/// arc is cut off by a single root), `Span` otherwise.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum ArcCase {
    LimbArc,
    SpanArc,
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct PartitionArc {
    pub arc: Arc,
    pub case: ArcCase,
    pub level: u32,
}

/// The `2^{n+1}` closed arcs between consecutive points of `D_n`, each
/// classified by the leaf test.
pub fn partition(n: u32) -> Result<Vec<PartitionArc>, LaminationError> {
    partition_with_cap(n, DEFAULT_DEPTH_CAP)
}

pub fn partition_with_cap(n: u32, cap: u32) -> Result<Vec<PartitionArc>, LaminationError> {
    let pts = d_points_with_cap(n, cap)?;
    let k = pts.len();
    let mut arcs = Vec::with_capacity(k);
    for i in 0..k {
        let start = pts[i].clone();
        let end = pts[(i + 1) % k].clone();
        let case = if partner(&start)? == end {
            ArcCase::LimbArc
        } else {
            ArcCase::SpanArc
        };
        arcs.push(PartitionArc {
            arc: Arc::new(start, end).expect("consecutive D_n points are distinct"),
            case,
            level: n,
        });
    }
    Ok(arcs)
}

/// True iff `f` maps every leaf of level ≤ `depth` to a leaf. Returns `false`
/// (not an error) when `f` moves a tested point off `D_∞`.
pub fn preserves_lamination(f: &PLCircleMap, depth: u32) -> bool {
    let levels = match build_lamination_with_cap(depth, u32::MAX) {
        Ok(l) => l,
        Err(_) => return false,
    };
    for leaf in levels.all_leaves() {
        let fa = f.evaluate(leaf.small());
        let fb = f.evaluate(leaf.big());
        if !fa.in_d_infinity() || !fb.in_d_infinity() {
            return false;
        }
        match partner(&fa) {
            Ok(p) if p == fb => {}
            _ => return false,
        }
    }
    true
}

// ---------------------------------------------------------------------------
// Inner ↔ outer correspondence for ∂U₀.
//
// The angles of rays landing on the boundary of the central component form a
// Cantor set C₀ with two top-level pieces, [1/6, 1/3] and [2/3, 5/6]. The
// square g² of the doubling map sends each piece onto the whole set, and the
// itinerary of a point under g² reads off the binary expansion of its inner
// angle. Inverting one digit is an exact affine branch:
//
//   digit 0 (inner angle in [0, 1/2], piece [2/3, 5/6]):  x ↦ x/4 + 1/2
//   digit 1 (inner angle in [1/2, 1], piece [1/6, 1/3]):  x ↦ x/4
//
// in the lifted coordinate x ∈ [2/3, 4/3] (a point of the `1` piece is
// lifted by +1 before the branch applies).
// ---------------------------------------------------------------------------

/// Eventually periodic binary expansion: `value = 0.(prefix)(period)^∞`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct BinaryExpansion {
    pub prefix: Vec<u8>,
    pub period: Vec<u8>,
}

impl BinaryExpansion {
    /// The canonical expansion of a rational in `[0, 1)`; dyadic rationals get
    /// the terminating expansion (period `[0]`).
    pub fn of(t: &Angle) -> Self {
        let mut digits = Vec::new();
        let mut seen: HashMap<Angle, usize> = HashMap::new();
        let mut x = t.clone();
        loop {
            if let Some(&at) = seen.get(&x) {
                return BinaryExpansion {
                    period: digits.split_off(at),
                    prefix: digits,
                };
            }
            seen.insert(x.clone(), digits.len());
            let doubled = x.as_ratio() + x.as_ratio();
            let digit = if doubled >= BigRational::one() { 1 } else { 0 };
            digits.push(digit);
            x = Angle::from_ratio(doubled);
        }
    }

    /// The lower expansion of a dyadic rational (ending in `1^∞`), the limit
    /// of expansions of angles approaching `t` from below. For `t = 0` this
    /// wraps around the circle: `0.111… = 1 ≡ 0`.
    pub fn lower_of_dyadic(t: &Angle) -> Option<Self> {
        t.dyadic_level()?;
        if t.is_zero() {
            return Some(BinaryExpansion {
                prefix: vec![],
                period: vec![1],
            });
        }
        let canon = Self::of(t);
        debug_assert_eq!(canon.period, vec![0]);
        let mut prefix = canon.prefix;
        debug_assert_eq!(prefix.last(), Some(&1));
        prefix.pop();
        prefix.push(0);
        Some(BinaryExpansion {
            prefix,
            period: vec![1],
        })
    }

    pub fn value(&self) -> BigRational {
        let bits = |digits: &[u8]| {
            let mut acc = BigRational::zero();
            let mut w = BigRational::new(BigInt::one(), BigInt::from(2));
            for d in digits {
                if *d == 1 {
                    acc += &w;
                }
                w /= BigInt::from(2);
            }
            acc
        };
        let p = self.prefix.len() as i64;
        let q = self.period.len() as u32;
        let repeat = bits(&self.period) * BigRational::from_integer(BigInt::one() << q)
            / BigRational::from_integer((BigInt::one() << q) - BigInt::one());
        bits(&self.prefix) + crate::circle::pow2_ratio(-p) * repeat
    }
}

/// One inverse-branch step: the outer point whose itinerary starts with
/// `digit` and continues as the point with lifted value `rest`.
/// `rest_first_digit` tells whether the continuation sits in the `1` piece
/// (and so is lifted by +1 before dividing).
fn branch_step(digit: u8, rest: &BigRational, rest_first_digit: u8) -> BigRational {
    let lifted = if rest_first_digit == 1 {
        rest + BigRational::one()
    } else {
        rest.clone()
    };
    let quarter = lifted / BigRational::from_integer(BigInt::from(4));
    if digit == 0 {
        quarter + BigRational::new(BigInt::one(), BigInt::from(2))
    } else {
        quarter
    }
}

/// The outer angle whose g²-itinerary across the two C₀ pieces spells the
/// given binary expansion of the inner angle.
pub fn outer_of_expansion(exp: &BinaryExpansion) -> Angle {
    // Fixed point of the period: the composition of the period's branch
    // steps is affine with slope 4^{-q}.
    let q = exp.period.len();
    debug_assert!(q > 0);
    let mut slope = BigRational::one();
    let mut intercept = BigRational::zero();
    // Build G = step(e_1) ∘ … ∘ step(e_q) symbolically, innermost first.
    for i in (0..q).rev() {
        let digit = exp.period[i];
        let next_digit = exp.period[(i + 1) % q];
        // step(x) = (x + lift)/4 + shift applied after the current affine map.
        let lift = if next_digit == 1 {
            BigRational::one()
        } else {
            BigRational::zero()
        };
        let shift = if digit == 0 {
            BigRational::new(BigInt::one(), BigInt::from(2))
        } else {
            BigRational::zero()
        };
        let four = BigRational::from_integer(BigInt::from(4));
        slope /= &four;
        intercept = (intercept + lift) / four + shift;
    }
    let mut value = intercept / (BigRational::one() - slope);
    // Fold the prefix, innermost digit first.
    for i in (0..exp.prefix.len()).rev() {
        let digit = exp.prefix[i];
        let next_digit = if i + 1 < exp.prefix.len() {
            exp.prefix[i + 1]
        } else {
            exp.period[0]
        };
        value = branch_step(digit, &value, next_digit);
    }
    Angle::from_ratio(value)
}

/// The outer angle(s) of the rays landing at the inner-angle-`t` point of the
/// central component boundary. Dyadic inner angles are roots of satellite
/// wakes and carry two rays; other rationals carry one.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum OuterAngles {
    /// `lower` is the wake's start (limit from below), `upper` its end.
    Pair { lower: Angle, upper: Angle },
    Single(Angle),
}

pub fn inner_to_outer(t: &Angle) -> OuterAngles {
    let canon = BinaryExpansion::of(t);
    match BinaryExpansion::lower_of_dyadic(t) {
        Some(lower_exp) => OuterAngles::Pair {
            lower: outer_of_expansion(&lower_exp),
            upper: outer_of_expansion(&canon),
        },
        None => OuterAngles::Single(outer_of_expansion(&canon)),
    }
}

/// The wake rooted at the inner-angle-`t` point of ∂U₀ (for dyadic `t`): the
/// outer arc cut off by its two rays, not containing the central component.
pub fn wake_of_inner(t: &Angle) -> Option<(Angle, BigRational)> {
    match inner_to_outer(t) {
        OuterAngles::Pair { lower, upper } => {
            let len = lower.dist_ccw(&upper);
            Some((lower, len))
        }
        OuterAngles::Single(_) => None,
    }
}

/// Result of collapsing an outer angle to the inner coordinate of ∂U₀.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Collapse {
    /// The angle is on the boundary Cantor set C₀; inner angle attained.
    Boundary(Angle),
    /// The angle lies strictly inside the wake rooted at the returned dyadic
    /// inner angle.
    InsideWake(Angle),
}

impl Collapse {
    pub fn inner(&self) -> &Angle {
        match self {
            Collapse::Boundary(t) | Collapse::InsideWake(t) => t,
        }
    }
}

/// The collapse map χ: the inner angle of the ∂U₀ point "under" an outer
/// angle. Exact, by digit extraction with cycle detection.
pub fn collapse_outer(theta: &Angle) -> Collapse {
    let third = BigRational::new(BigInt::one(), BigInt::from(3));
    let two_thirds = BigRational::new(BigInt::from(2), BigInt::from(3));
    let five_sixths = BigRational::new(BigInt::from(5), BigInt::from(6));
    let seven_sixths = BigRational::new(BigInt::from(7), BigInt::from(6));
    // The wake across α collapses to inner angle 0.
    if theta.as_ratio() > &third && theta.as_ratio() < &two_thirds {
        return Collapse::InsideWake(Angle::zero());
    }
    let mut x = theta.as_ratio().clone();
    if x < two_thirds {
        x += BigRational::one();
    }
    let mut digits: Vec<u8> = Vec::new();
    let mut seen: HashMap<BigRational, usize> = HashMap::new();
    loop {
        if let Some(&at) = seen.get(&x) {
            let period = digits.split_off(at);
            let exp = BinaryExpansion {
                prefix: digits,
                period,
            };
            return Collapse::Boundary(Angle::from_ratio(exp.value()));
        }
        seen.insert(x.clone(), digits.len());
        if x <= five_sixths {
            digits.push(0);
            x = &x * BigRational::from_integer(BigInt::from(4)) - BigRational::from_integer(BigInt::from(2));
        } else if x >= seven_sixths {
            digits.push(1);
            x = &x * BigRational::from_integer(BigInt::from(4)) - BigRational::from_integer(BigInt::from(4));
        } else {
            // Strictly inside the central gap: the wake at inner angle
            // 0.(digits)1 exactly.
            digits.push(1);
            let exp = BinaryExpansion {
                prefix: digits,
                period: vec![0],
            };
            return Collapse::InsideWake(Angle::from_ratio(exp.value()));
        }
    }
}

/// Membership in the ∂U₀ angle set C₀.
pub fn on_central_boundary(theta: &Angle) -> bool {
    matches!(collapse_outer(theta), Collapse::Boundary(_))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::plmap::Generator;

    fn ang(n: i64, d: i64) -> Angle {
        Angle::new(n, d)
    }

    #[test]
    fn d_point_counts_and_values() {
        assert_eq!(d_points(0).unwrap(), vec![ang(1, 3), ang(2, 3)]);
        assert_eq!(
            d_points(1).unwrap(),
            vec![ang(1, 6), ang(1, 3), ang(2, 3), ang(5, 6)]
        );
        let d2 = d_points(2).unwrap();
        assert_eq!(d2.len(), 8);
        assert!(d2.contains(&ang(1, 12)) && d2.contains(&ang(7, 12)));
        for n in 0..=10u32 {
            let dn = d_points(n).unwrap();
            assert_eq!(dn.len(), 1 << (n + 1));
            if n > 0 {
                let prev = d_points(n - 1).unwrap();
                assert!(prev.iter().all(|p| dn.binary_search(p).is_ok()));
            }
        }
        assert!(matches!(
            d_points_with_cap(5, 4),
            Err(LaminationError::DepthCap { .. })
        ));
    }

    #[test]
    fn gap_lengths_alternate_exactly() {
        assert!(verify_alternation(0));
        assert!(verify_alternation(1));
        assert!(verify_alternation(12));
        let pts = d_points(1).unwrap();
        let gaps: Vec<BigRational> = (0..4)
            .map(|i| pts[i].dist_ccw(&pts[(i + 1) % 4]))
            .collect();
        assert_eq!(
            gaps,
            vec![
                BigRational::new(BigInt::from(1), BigInt::from(6)),
                BigRational::new(BigInt::from(1), BigInt::from(3)),
                BigRational::new(BigInt::from(1), BigInt::from(6)),
                BigRational::new(BigInt::from(1), BigInt::from(3)),
            ]
        );
    }

    #[test]
    fn lamination_levels_and_counts() {
        let lam = build_lamination(3).unwrap();
        assert_eq!(lam.level(0), &[Leaf::root_leaf()]);
        assert_eq!(lam.level(1), &[Leaf::new(ang(1, 6), ang(5, 6))]);
        // Depth 2: the preimage pairs of {1/6, 5/6} split by the half-disk.
        assert_eq!(
            lam.level(2),
            &[
                Leaf::new(ang(1, 12), ang(11, 12)),
                Leaf::new(ang(5, 12), ang(7, 12)),
            ]
        );
        for k in 1..=3u32 {
            assert_eq!(lam.level(k).len(), 1 << (k - 1));
        }
        // Every D_n point lies on exactly one leaf of levels ≤ n.
        for n in 0..=3u32 {
            for p in d_points(n).unwrap() {
                assert!(lam.partner(&p).is_ok(), "{p} missing partner");
            }
        }
    }

    #[test]
    fn leaves_never_link() {
        let lam = build_lamination(8).unwrap();
        let leaves: Vec<&Leaf> = lam.all_leaves().collect();
        for i in 0..leaves.len() {
            for j in (i + 1)..leaves.len() {
                assert!(
                    !leaves[i].links(leaves[j]),
                    "{:?} links {:?}",
                    leaves[i],
                    leaves[j]
                );
            }
        }
    }

    #[test]
    fn partner_is_involution_and_matches_levels() {
        let lam = build_lamination(9).unwrap();
        for n in 0..=9u32 {
            for p in d_points(n).unwrap() {
                let q = partner(&p).unwrap();
                assert_eq!(partner(&q).unwrap(), p);
                assert_eq!(lam.partner(&p).unwrap(), q);
            }
        }
        assert_eq!(partner(&ang(1, 3)).unwrap(), ang(2, 3));
        assert_eq!(partner(&ang(1, 6)).unwrap(), ang(5, 6));
        assert_eq!(partner(&ang(5, 12)).unwrap(), ang(7, 12));
        assert!(partner(&ang(1, 2)).is_err());
    }

    #[test]
    fn partition_cases() {
        let p0 = partition(0).unwrap();
        assert_eq!(p0.len(), 2);
        assert!(p0.iter().all(|a| a.case == ArcCase::LimbArc));

        let p1 = partition(1).unwrap();
        assert_eq!(p1.len(), 4);
        let find = |s: &Angle| p1.iter().find(|a| a.arc.start() == s).unwrap();
        assert_eq!(find(&ang(1, 6)).case, ArcCase::SpanArc);
        assert_eq!(find(&ang(2, 3)).case, ArcCase::SpanArc);
        assert_eq!(find(&ang(1, 3)).case, ArcCase::LimbArc);
        assert_eq!(find(&ang(5, 6)).case, ArcCase::LimbArc);
        // Limb arcs are exactly those whose endpoints form a leaf.
        for n in 0..=6u32 {
            let lam = build_lamination(n).unwrap();
            for arc in partition(n).unwrap() {
                let is_leaf = lam.is_leaf(&Leaf::new(arc.arc.start().clone(), arc.arc.end().clone()));
                assert_eq!(arc.case == ArcCase::LimbArc, is_leaf);
            }
        }
    }

    #[test]
    fn lamination_preservation() {
        assert!(preserves_lamination(&PLCircleMap::identity(), 8));
        assert!(preserves_lamination(
            &PLCircleMap::rotation(&ang(1, 2)),
            12
        ));
        assert!(!preserves_lamination(
            &PLCircleMap::rotation(&ang(1, 3)),
            6
        ));
        // Thompson generators act on inner angles, not outer ones.
        assert!(!preserves_lamination(
            &PLCircleMap::generator(Generator::A),
            6
        ));
    }

    #[test]
    fn binary_expansions() {
        let e = BinaryExpansion::of(&ang(1, 3));
        assert_eq!((e.prefix.as_slice(), e.period.as_slice()), (&[][..], &[0u8, 1][..]));
        assert_eq!(e.value(), ang(1, 3).as_ratio().clone());
        let e = BinaryExpansion::of(&ang(1, 4));
        assert_eq!((e.prefix.as_slice(), e.period.as_slice()), (&[0u8, 1][..], &[0u8][..]));
        let low = BinaryExpansion::lower_of_dyadic(&ang(1, 4)).unwrap();
        assert_eq!(
            (low.prefix.as_slice(), low.period.as_slice()),
            (&[0u8, 0][..], &[1u8][..])
        );
        assert_eq!(low.value(), ang(1, 4).as_ratio().clone());
        assert!(BinaryExpansion::lower_of_dyadic(&ang(1, 3)).is_none());
    }

    #[test]
    fn inner_to_outer_known_values() {
        // The α fixed point: rays 1/3 and 2/3.
        assert_eq!(
            inner_to_outer(&Angle::zero()),
            OuterAngles::Pair {
                lower: ang(1, 3),
                upper: ang(2, 3)
            }
        );
        // The -α point at inner angle 1/2: rays 5/6 and 1/6 (wake through 0).
        assert_eq!(
            inner_to_outer(&ang(1, 2)),
            OuterAngles::Pair {
                lower: ang(5, 6),
                upper: ang(1, 6)
            }
        );
        // Inner 1/4 and 3/4: the imaginary-axis roots.
        assert_eq!(
            inner_to_outer(&ang(1, 4)),
            OuterAngles::Pair {
                lower: ang(17, 24),
                upper: ang(19, 24)
            }
        );
        assert_eq!(
            inner_to_outer(&ang(3, 4)),
            OuterAngles::Pair {
                lower: ang(5, 24),
                upper: ang(7, 24)
            }
        );
        // A non-dyadic rational lands a single ray.
        assert_eq!(inner_to_outer(&ang(1, 3)), OuterAngles::Single(ang(4, 5)));
        assert_eq!(inner_to_outer(&ang(2, 3)), OuterAngles::Single(ang(1, 5)));
    }

    #[test]
    fn wake_roots_pair_as_leaves() {
        // Each wake's two boundary rays co-land, so they must form a leaf.
        for (n, d) in [(0i64, 1i64), (1, 2), (1, 4), (3, 4), (1, 8), (5, 8), (3, 16)] {
            let t = ang(n, d);
            if let OuterAngles::Pair { lower, upper } = inner_to_outer(&t) {
                assert_eq!(partner(&lower).unwrap(), upper, "wake at inner {t}");
            } else {
                panic!("dyadic {t} should give a wake pair");
            }
        }
    }

    #[test]
    fn semiconjugacy_of_substitution() {
        // g²-image of the outer correspondence matches inner doubling, with
        // matching branch choices for dyadic inputs.
        let mut state = 0xfeed5eedu64;
        let mut next = move || {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            state
        };
        for _ in 0..200 {
            let d = (next() % 1000 + 2) as i64;
            let n = (next() % (d as u64)) as i64;
            let t = ang(n, d);
            match (inner_to_outer(&t), inner_to_outer(&t.double())) {
                (OuterAngles::Single(s), OuterAngles::Single(s2)) => {
                    assert_eq!(s.double().double(), s2, "at inner {t}");
                }
                (
                    OuterAngles::Pair { lower, upper },
                    OuterAngles::Pair {
                        lower: l2,
                        upper: u2,
                    },
                ) => {
                    assert_eq!(lower.double().double(), l2, "lower at inner {t}");
                    assert_eq!(upper.double().double(), u2, "upper at inner {t}");
                }
                other => panic!("dyadic type mismatch at {t}: {other:?}"),
            }
        }
    }

    #[test]
    fn wake_lengths_scale_by_four_per_level() {
        let (s0, l0) = wake_of_inner(&Angle::zero()).unwrap();
        assert_eq!(s0, ang(1, 3));
        assert_eq!(l0, BigRational::new(BigInt::from(1), BigInt::from(3)));
        let (s1, l1) = wake_of_inner(&ang(1, 2)).unwrap();
        assert_eq!(s1, ang(5, 6));
        assert_eq!(l1, BigRational::new(BigInt::from(1), BigInt::from(3)));
        // Level-k dyadics root wakes of outer length (2/3)·2^{-(2k-1)}.
        for (t, expect) in [
            (ang(1, 4), BigRational::new(BigInt::from(1), BigInt::from(12))),
            (ang(3, 8), BigRational::new(BigInt::from(1), BigInt::from(48))),
        ] {
            let (_, len) = wake_of_inner(&t).unwrap();
            assert_eq!(len, expect, "wake length at inner {t}");
        }
        assert!(wake_of_inner(&ang(1, 3)).is_none());
    }

    #[test]
    fn collapse_inverts_the_correspondence() {
        for (n, d) in [(0i64, 1i64), (1, 2), (1, 4), (3, 4), (5, 8), (1, 3), (2, 5)] {
            let t = ang(n, d);
            match inner_to_outer(&t) {
                OuterAngles::Pair { lower, upper } => {
                    assert_eq!(collapse_outer(&lower), Collapse::Boundary(t.clone()));
                    assert_eq!(collapse_outer(&upper), Collapse::Boundary(t.clone()));
                }
                OuterAngles::Single(s) => {
                    assert_eq!(collapse_outer(&s), Collapse::Boundary(t.clone()));
                }
            }
        }
        // Inside the wake of -α (through angle 0).
        assert_eq!(
            collapse_outer(&Angle::zero()),
            Collapse::InsideWake(ang(1, 2))
        );
        assert_eq!(collapse_outer(&ang(1, 12)), Collapse::InsideWake(ang(1, 2)));
        // Inside the wake across α.
        assert_eq!(collapse_outer(&ang(1, 2)), Collapse::InsideWake(Angle::zero()));
        assert_eq!(collapse_outer(&ang(5, 12)), Collapse::InsideWake(Angle::zero()));
        assert!(on_central_boundary(&ang(1, 6)));
        assert!(on_central_boundary(&ang(4, 5)));
        assert!(!on_central_boundary(&ang(11, 12)));
    }
}
