//! Exact rational arithmetic on the circle ℝ/ℤ.
//!
//! Everything downstream (piecewise-linear maps, laminations, the group
//! action) is built on [`Angle`]: a reduced fraction with representative in
//! `[0, 1)`. There is deliberately no floating point here; floats live only
//! in the geometry module.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum CircleError {
    /// `cyclic_between` requires three pairwise distinct points.
    #[error("NonDistinct: cyclic order needs pairwise distinct angles")]
    NonDistinct,
    /// An arc needs two distinct endpoints.
    #[error("DegenerateArc: arc endpoints must differ")]
    DegenerateArc,
    /// Failed to parse an angle from text.
    #[error("ParseAngle: {0}")]
    Parse(String),
}

/// A point of ℝ/ℤ stored as a reduced fraction in `[0, 1)`.
///
/// Equality is structural; two angles are equal iff their reduced
/// representatives coincide. The ordering is the linear order on `[0, 1)`,
/// which is what the canonical forms downstream key on.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Angle(BigRational);

impl Angle {
    /// Exact angle `n/d`, reduced mod 1. Panics if `d == 0`.
    pub fn new(n: i64, d: i64) -> Self {
        Self::from_ratio(BigRational::new(BigInt::from(n), BigInt::from(d)))
    }

    pub fn zero() -> Self {
        Angle(BigRational::zero())
    }

    /// Reduce an arbitrary rational mod 1 into `[0, 1)`.
    pub fn from_ratio(r: BigRational) -> Self {
        let f = &r - r.floor();
        Angle(f)
    }

    pub fn as_ratio(&self) -> &BigRational {
        &self.0
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    /// `(self + other) mod 1`.
    pub fn add(&self, other: &Angle) -> Angle {
        Angle::from_ratio(&self.0 + &other.0)
    }

    /// `(self - other) mod 1`.
    pub fn sub(&self, other: &Angle) -> Angle {
        Angle::from_ratio(&self.0 - &other.0)
    }

    /// The doubling map `g`: θ ↦ 2θ mod 1, the angle action of z ↦ z².
    pub fn double(&self) -> Angle {
        Angle::from_ratio(&self.0 + &self.0)
    }

    /// Iterated doubling `g^n`.
    pub fn double_n(&self, n: u32) -> Angle {
        let two_n = BigRational::from_integer(BigInt::one() << n);
        Angle::from_ratio(&self.0 * two_n)
    }

    /// The two solutions of `2x ≡ self (mod 1)`, as `(self/2, self/2 + 1/2)`.
    pub fn halves(&self) -> (Angle, Angle) {
        let half = BigRational::new(BigInt::one(), BigInt::from(2));
        let a = Angle::from_ratio(&self.0 / BigRational::from_integer(BigInt::from(2)));
        let b = Angle::from_ratio(a.0.clone() + half);
        (a, b)
    }

    /// Counterclockwise arc length from `self` to `other`, in `[0, 1)`.
    pub fn dist_ccw(&self, other: &Angle) -> BigRational {
        let d = &other.0 - &self.0;
        if d.is_negative() {
            d + BigRational::one()
        } else {
            d
        }
    }

    /// Circle metric: min(|a-b|, 1-|a-b|).
    pub fn circle_dist(&self, other: &Angle) -> BigRational {
        let d = self.dist_ccw(other);
        let comp = BigRational::one() - &d;
        if d <= comp {
            d
        } else {
            comp
        }
    }

    /// Denominator is a power of two (an iterated `g`-preimage of 0).
    pub fn is_dyadic(&self) -> bool {
        is_pow2(self.0.denom())
    }

    /// Denominator of the form `3·2^k` or `2^k`.
    pub fn is_tri_dyadic(&self) -> bool {
        let d = self.0.denom();
        if is_pow2(d) {
            return true;
        }
        let (q, r) = num_integer::div_rem(d.clone(), BigInt::from(3));
        r.is_zero() && is_pow2(&q)
    }

    /// Level `k` when the denominator is exactly `2^k`.
    pub fn dyadic_level(&self) -> Option<u32> {
        if self.is_dyadic() {
            Some(self.0.denom().bits().saturating_sub(1) as u32)
        } else {
            None
        }
    }

    /// Strict membership in `D_∞ = ∪ g^{-n}{1/3, 2/3}`: denominator exactly
    /// `3·2^k`. Returns the level `k` (smallest `n` with `g^n(θ) ∈ {1/3, 2/3}`).
    pub fn d_infinity_level(&self) -> Option<u32> {
        let d = self.0.denom();
        let (q, r) = num_integer::div_rem(d.clone(), BigInt::from(3));
        if r.is_zero() && is_pow2(&q) {
            Some(q.bits().saturating_sub(1) as u32)
        } else {
            None
        }
    }

    pub fn in_d_infinity(&self) -> bool {
        self.d_infinity_level().is_some()
    }
}

fn is_pow2(n: &BigInt) -> bool {
    n.is_positive() && n.magnitude().count_ones() == 1
}

/// `2^e` as an exact rational, `e` possibly negative.
pub(crate) fn pow2_ratio(e: i64) -> BigRational {
    if e >= 0 {
        BigRational::from_integer(BigInt::one() << e as u64)
    } else {
        BigRational::new(BigInt::one(), BigInt::one() << (-e) as u64)
    }
}

/// The unique dyadic rational of smallest level strictly between two
/// rationals.
pub(crate) fn coarsest_dyadic_between(a: &BigRational, b: &BigRational) -> BigRational {
    debug_assert!(a < b);
    for k in 0..512u32 {
        let scale = BigRational::from_integer(BigInt::one() << k);
        let j = (a * &scale).floor() + BigRational::one();
        let candidate = j / &scale;
        if &candidate > a && &candidate < b {
            return candidate;
        }
    }
    unreachable!("distinct rationals always admit an intermediate dyadic");
}

/// `Some(e)` when `r == 2^e` exactly.
pub(crate) fn ratio_pow2_exp(r: &BigRational) -> Option<i64> {
    if !r.is_positive() {
        return None;
    }
    let (n, d) = (r.numer(), r.denom());
    if n.is_one() && is_pow2(d) {
        Some(-((d.bits() - 1) as i64))
    } else if d.is_one() && is_pow2(n) {
        Some((n.bits() - 1) as i64)
    } else {
        None
    }
}

/// True iff traversing counterclockwise from `a` one meets `b` before `c`.
pub fn cyclic_between(a: &Angle, b: &Angle, c: &Angle) -> Result<bool, CircleError> {
    if a == b || b == c || a == c {
        return Err(CircleError::NonDistinct);
    }
    Ok(a.dist_ccw(b) < a.dist_ccw(c))
}

/// An oriented circle arc, traversed counterclockwise from `start` to `end`.
/// Nondegenerate: `start ≠ end`, so the length lies in `(0, 1)`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Arc {
    start: Angle,
    end: Angle,
}

impl Arc {
    pub fn new(start: Angle, end: Angle) -> Result<Self, CircleError> {
        if start == end {
            return Err(CircleError::DegenerateArc);
        }
        Ok(Arc { start, end })
    }

    pub fn start(&self) -> &Angle {
        &self.start
    }

    pub fn end(&self) -> &Angle {
        &self.end
    }

    pub fn length(&self) -> BigRational {
        self.start.dist_ccw(&self.end)
    }

    /// Closed-arc membership.
    pub fn contains(&self, a: &Angle) -> bool {
        a == &self.start || a == &self.end || self.start.dist_ccw(a) <= self.length()
    }

    /// Strict interior membership.
    pub fn contains_interior(&self, a: &Angle) -> bool {
        a != &self.start && a != &self.end && self.start.dist_ccw(a) < self.length()
    }
}

impl fmt::Display for Angle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_zero() {
            write!(f, "0")
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

impl fmt::Debug for Angle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl FromStr for Angle {
    type Err = CircleError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        let parse_int =
            |t: &str| BigInt::from_str(t).map_err(|e| CircleError::Parse(format!("{t:?}: {e}")));
        if let Some((n, d)) = s.split_once('/') {
            let denom = parse_int(d.trim())?;
            if denom.is_zero() {
                return Err(CircleError::Parse("zero denominator".into()));
            }
            Ok(Angle::from_ratio(BigRational::new(
                parse_int(n.trim())?,
                denom,
            )))
        } else {
            Ok(Angle::from_ratio(BigRational::from_integer(parse_int(s)?)))
        }
    }
}

impl fmt::Display for Arc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", self.start, self.end)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn ang(n: i64, d: i64) -> Angle {
        Angle::new(n, d)
    }

    #[test]
    fn addition_wraps_and_reduces() {
        assert_eq!(ang(1, 3).add(&ang(2, 3)), Angle::zero());
        assert_eq!(ang(5, 6).add(&ang(1, 3)), ang(1, 6));
        assert_eq!(ang(1, 12).add(&ang(1, 12)), ang(1, 6));
    }

    #[test]
    fn doubling_respects_the_one_third_cycle() {
        assert_eq!(ang(1, 3).double(), ang(2, 3));
        assert_eq!(ang(2, 3).double(), ang(1, 3));
        assert_eq!(Angle::zero().double(), Angle::zero());
    }

    #[test]
    fn halves_solve_the_doubling_equation() {
        assert_eq!(ang(1, 3).halves(), (ang(1, 6), ang(2, 3)));
        assert_eq!(Angle::zero().halves(), (Angle::zero(), ang(1, 2)));
        assert_eq!(ang(2, 3).halves(), (ang(1, 3), ang(5, 6)));
    }

    #[test]
    fn cyclic_order() {
        assert!(cyclic_between(&Angle::zero(), &ang(1, 3), &ang(2, 3)).unwrap());
        assert!(!cyclic_between(&Angle::zero(), &ang(2, 3), &ang(1, 3)).unwrap());
        assert!(cyclic_between(&ang(5, 6), &Angle::zero(), &ang(1, 6)).unwrap());
        assert_eq!(
            cyclic_between(&ang(1, 2), &ang(1, 2), &ang(1, 3)),
            Err(CircleError::NonDistinct)
        );
    }

    #[test]
    fn arc_membership_closed() {
        let arc = Arc::new(ang(1, 3), ang(2, 3)).unwrap();
        assert!(arc.contains(&ang(1, 2)));
        assert!(!arc.contains(&ang(1, 6)));
        let wrap = Arc::new(ang(5, 6), ang(1, 6)).unwrap();
        assert!(wrap.contains(&Angle::zero()));
        assert!(!wrap.contains(&ang(1, 2)));
        assert!(wrap.contains(&ang(5, 6)));
    }

    #[test]
    fn dyadic_predicates() {
        assert!(ang(3, 8).is_dyadic());
        assert!(!ang(1, 3).is_dyadic());
        assert!(ang(1, 3).is_tri_dyadic());
        assert!(ang(7, 12).is_tri_dyadic());
        assert!(ang(1, 2).is_tri_dyadic());
        assert!(!ang(1, 5).is_tri_dyadic());
        assert_eq!(ang(7, 12).d_infinity_level(), Some(2));
        assert_eq!(ang(1, 2).d_infinity_level(), None);
        assert_eq!(Angle::zero().d_infinity_level(), None);
    }

    #[test]
    fn textual_round_trip() {
        for s in ["0", "1/3", "7/12", "11/12"] {
            let a: Angle = s.parse().unwrap();
            assert_eq!(a.to_string(), s);
        }
        assert_eq!("5/3".parse::<Angle>().unwrap(), ang(2, 3));
        assert_eq!("-1/3".parse::<Angle>().unwrap(), ang(2, 3));
        assert!("1/0".parse::<Angle>().is_err());
    }

    fn arb_angle() -> impl Strategy<Value = Angle> {
        (any::<i32>(), 1..=10_000i32).prop_map(|(n, d)| Angle::new(n as i64, d as i64))
    }

    proptest! {
        #[test]
        fn halves_invert_doubling(a in arb_angle()) {
            let (h0, h1) = a.halves();
            prop_assert_eq!(h0.double(), a.clone());
            prop_assert_eq!(h1.double(), a);
        }

        #[test]
        fn addition_monoid_laws(a in arb_angle(), b in arb_angle(), c in arb_angle()) {
            prop_assert_eq!(a.add(&b), b.add(&a));
            prop_assert_eq!(a.add(&b).add(&c), a.add(&b.add(&c)));
            prop_assert_eq!(a.add(&Angle::zero()), a);
        }

        #[test]
        fn cyclic_between_antisymmetry(a in arb_angle(), b in arb_angle(), c in arb_angle()) {
            prop_assume!(a != b && b != c && a != c);
            let fwd = cyclic_between(&a, &b, &c).unwrap();
            let bwd = cyclic_between(&a, &c, &b).unwrap();
            prop_assert!(fwd ^ bwd);
        }

        #[test]
        fn tri_dyadic_closed_under_dynamics(a in arb_angle()) {
            if a.is_tri_dyadic() {
                prop_assert!(a.double().is_tri_dyadic());
                let (h0, h1) = a.halves();
                prop_assert!(h0.is_tri_dyadic() && h1.is_tri_dyadic());
            }
            if a.is_dyadic() {
                prop_assert!(a.double().is_dyadic());
            }
        }
    }
}
