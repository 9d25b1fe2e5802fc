//! Approximation of lamination-preserving circle homeomorphisms by group
//! elements: given a target map, build a Thompson-like map agreeing with it
//! on the vertex set `D_n`, by pushing each partition arc forward to the
//! model arc, bridging with a piecewise-linear interpolation, and pulling
//! back along the branch matching the target's image endpoints. Distortion
//! estimators stand in for the uniformity claims.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use thiserror::Error;

use crate::circle::{pow2_ratio, Angle, Arc};
use crate::geometry::{trace_ray, GeometryError, DEFAULT_RAY_STEPS, DEFAULT_RAY_TOL};
use crate::group::{word_to_map, GroupWord};
use crate::lamination::{
    build_lamination, collapse_outer, inner_to_outer, partition_with_cap, preserves_lamination,
    wake_of_inner, Collapse, OuterAngles,
};
use crate::plmap::{dyn_decompose_linear, PLCircleMap};

#[derive(Debug, Error, PartialEq)]
pub enum ApproxError {
    #[error("NotLaminationPreserving: target moves a lamination leaf off the lamination")]
    NotLaminationPreserving,
    #[error("SearchExhausted: no forward iterate of an image arc reaches the model family (cap {0})")]
    SearchExhausted(u32),
    #[error("NonMonotoneOnE: target is not orientation-preserving on the node set")]
    NonMonotoneOnE,
    #[error("Geometry: {0}")]
    Geometry(#[from] GeometryError),
}

/// Fixed default seed for all randomized estimators, echoed into reports.
pub const DEFAULT_SEED: u64 = 0xba5111ca;

/// Minimal deterministic PRNG (splitmix64); identical streams on every
/// platform for a given seed.
#[derive(Clone, Debug)]
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        SplitMix64 { state: seed }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9e3779b97f4a7c15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
        z ^ (z >> 31)
    }

    pub fn below(&mut self, n: u64) -> u64 {
        self.next_u64() % n.max(1)
    }

    /// A uniform angle on the grid of denominator 2^32.
    pub fn angle(&mut self) -> Angle {
        Angle::from_ratio(BigRational::new(
            BigInt::from(self.next_u64() >> 32),
            BigInt::one() << 32,
        ))
    }
}

/// A target circle homeomorphism presented as an evaluation oracle. Exact
/// targets return lamination angles exactly; numeric ones are snapped to the
/// lamination grid during approximation.
pub struct TargetOracle {
    eval: Box<dyn Fn(&Angle) -> Angle + Send + Sync>,
    declared_exact: bool,
}

impl TargetOracle {
    pub fn from_map(m: PLCircleMap) -> Self {
        TargetOracle {
            eval: Box::new(move |a| m.evaluate(a)),
            declared_exact: true,
        }
    }

    pub fn from_word(w: &GroupWord) -> Self {
        Self::from_map(word_to_map(w))
    }

    pub fn from_fn(
        f: impl Fn(&Angle) -> Angle + Send + Sync + 'static,
        declared_exact: bool,
    ) -> Self {
        TargetOracle {
            eval: Box::new(f),
            declared_exact,
        }
    }

    pub fn eval(&self, a: &Angle) -> Angle {
        (self.eval)(a)
    }

    pub fn declared_exact(&self) -> bool {
        self.declared_exact
    }

    /// Evaluate and, for numeric oracles, snap to the nearest angle with
    /// denominator dividing `3·2^snap_level`.
    fn eval_lamination(&self, a: &Angle, snap_level: u32) -> Result<Angle, ApproxError> {
        let v = self.eval(a);
        if self.declared_exact || v.in_d_infinity() {
            return if v.in_d_infinity() {
                Ok(v)
            } else {
                Err(ApproxError::NotLaminationPreserving)
            };
        }
        let grid = BigRational::from_integer(BigInt::from(3) << snap_level);
        let snapped = Angle::from_ratio((v.as_ratio() * &grid).round() / &grid);
        if snapped.in_d_infinity() {
            Ok(snapped)
        } else {
            Err(ApproxError::NotLaminationPreserving)
        }
    }
}

/// Per-arc record of the assembled piece `g^{-backward} ∘ bridge ∘ g^{forward}`.
#[derive(Clone, Debug)]
pub struct ApproxStep {
    pub arc: Arc,
    pub forward: u32,
    pub backward: u32,
    /// Interior bridge nodes (0 when the piece is a single branch).
    pub bridge_nodes: usize,
}

/// Default snap grid for numeric oracles.
pub const DEFAULT_SNAP_LEVEL: u32 = 32;

/// The approximation of the target at level `n`: a Thompson-like map equal to
/// the target on all of `D_n`.
pub fn approximate(target: &TargetOracle, n: u32) -> Result<PLCircleMap, ApproxError> {
    approximate_with_steps(target, n, DEFAULT_SNAP_LEVEL).map(|(m, _)| m)
}

pub fn approximate_with_steps(
    target: &TargetOracle,
    n: u32,
    snap_level: u32,
) -> Result<(PLCircleMap, Vec<ApproxStep>), ApproxError> {
    // Precheck: the target must pair leaves with leaves up to level n.
    let lam = build_lamination(n.min(crate::lamination::DEFAULT_DEPTH_CAP))
        .map_err(|_| ApproxError::NotLaminationPreserving)?;
    let mut images: HashMap<Angle, Angle> = HashMap::new();
    let mut image_of = |a: &Angle| -> Result<Angle, ApproxError> {
        if let Some(v) = images.get(a) {
            return Ok(v.clone());
        }
        let v = target.eval_lamination(a, snap_level)?;
        images.insert(a.clone(), v.clone());
        Ok(v)
    };
    for leaf in lam.all_leaves() {
        let fa = image_of(leaf.small())?;
        let fb = image_of(leaf.big())?;
        match crate::lamination::partner(&fa) {
            Ok(p) if p == fb => {}
            _ => return Err(ApproxError::NotLaminationPreserving),
        }
    }

    let arcs = partition_with_cap(n, u32::MAX).map_err(|_| ApproxError::SearchExhausted(0))?;
    let two_thirds = BigRational::new(BigInt::from(2), BigInt::from(3));
    let m_cap = 2 * n + 16;
    let mut nodes: Vec<(Angle, Angle)> = Vec::new();
    let mut steps: Vec<ApproxStep> = Vec::new();

    // Work stack of arcs with a subdivision budget: an arc whose image never
    // iterates onto the model family is split at its interior vertex points
    // and retried one level deeper, as the proof does by enlarging n.
    let mut work: Vec<(Angle, Angle, u32)> = arcs
        .iter()
        .rev()
        .map(|p| (p.arc.start().clone(), p.arc.end().clone(), 18u32))
        .collect();

    while let Some((p, q, fuel)) = work.pop() {
        let (p, q) = (&p, &q);
        let len = p.dist_ccw(q);
        let tp = image_of(p)?;
        let tq = image_of(q)?;
        let img_len = tp.dist_ccw(&tq);
        // Arc lengths are 2/(3·2^k); k doublings reach the model arc.
        let n_i = {
            let ratio = &two_thirds / &len;
            crate::circle::ratio_pow2_exp(&ratio).expect("partition lengths are 2/(3·2^k)") as u32
        };

        // A single pseudo-group branch matching endpoints and the midpoint of
        // an exact target is the piece itself; this is what makes the
        // approximation eventually exact for group elements.
        if target.declared_exact {
            if let Some(exp) = crate::circle::ratio_pow2_exp(&(&img_len / &len)) {
                if let Ok(branch) = dyn_decompose_linear(p, &tp, &len, exp) {
                    let mid = p.add(&Angle::from_ratio(&len / BigRational::from_integer(
                        BigInt::from(2),
                    )));
                    if branch.evaluate(p, &mid) == target.eval(&mid) {
                        nodes.push((p.clone(), tp.clone()));
                        steps.push(ApproxStep {
                            arc: Arc::new(p.clone(), q.clone()).expect("nondegenerate arc"),
                            forward: branch.forward,
                            backward: branch.backward,
                            bridge_nodes: 0,
                        });
                        continue;
                    }
                }
            }
        }

        // Search for the forward iterate of the image arc that lands in the
        // model family: the clean span between two central-boundary cut
        // points, starting where the first wake ends and ending where the
        // second begins. (Iterates that still carry a limb at an end, or
        // that sit inside a single wake, are rejected and doubled further.)
        let mut found = None;
        let mut m_i = 0u32;
        while m_i <= m_cap {
            let scaled = &img_len * pow2_ratio(m_i as i64);
            if scaled > BigRational::one() {
                break;
            }
            let e1 = tp.double_n(m_i);
            let e2 = tq.double_n(m_i);
            if let (Collapse::Boundary(t1), Collapse::Boundary(t2)) =
                (collapse_outer(&e1), collapse_outer(&e2))
            {
                let wake1 = wake_of_inner(&t1);
                let wake2 = wake_of_inner(&t2);
                if let (Some((w1, l1)), Some((w2, _))) = (wake1, wake2) {
                    let upper1 = w1.add(&Angle::from_ratio(l1));
                    if e1 == upper1 && e2 == w2 {
                        let full = t1 == t2;
                        debug_assert!(!full || scaled == two_thirds || t1 != Angle::zero());
                        found = Some((e1, t1, t2, full));
                        break;
                    }
                }
            }
            m_i += 1;
        }
        let (e1, t1, t2, full) = match found {
            Some(f) => f,
            None if fuel > 0 => {
                // No admissible iterate yet: refine this arc at its interior
                // vertex points (the short/long/short split one level down).
                let quarter = &len / BigRational::from_integer(BigInt::from(4));
                let s1 = p.add(&Angle::from_ratio(quarter.clone()));
                let s2 = p.add(&Angle::from_ratio(&quarter * BigRational::from_integer(BigInt::from(3))));
                work.push((s2.clone(), q.clone(), fuel - 1));
                work.push((s1.clone(), s2, fuel - 1));
                work.push((p.clone(), s1, fuel - 1));
                continue;
            }
            None => return Err(ApproxError::SearchExhausted(m_cap)),
        };

        // Bridge from the full cut circle onto the model's inner span, then
        // pull its wake-boundary nodes back through g^{n_i} on the source
        // and g^{m_i} on the image.
        let inner_len = if full {
            BigRational::one()
        } else {
            t1.dist_ccw(&t2)
        };
        nodes.push((p.clone(), tp.clone()));
        let mut interior = 0usize;
        for (d, dv) in balanced_bridge_nodes(&t1, &inner_len)? {
            let (dl, du) = match inner_to_outer(&d) {
                OuterAngles::Pair { lower, upper } => (lower, upper),
                OuterAngles::Single(_) => continue,
            };
            let (vl, vu) = match inner_to_outer(&dv) {
                OuterAngles::Pair { lower, upper } => (lower, upper),
                OuterAngles::Single(_) => continue,
            };
            for (x, y) in [(dl, vl), (du, vu)] {
                let src_off = two_thirds_offset(&x);
                let dst_off = e1.dist_ccw(&y);
                let bp = p.add(&Angle::from_ratio(src_off / pow2_ratio(n_i as i64)));
                let val = tp.add(&Angle::from_ratio(dst_off / pow2_ratio(m_i as i64)));
                nodes.push((bp, val));
                interior += 1;
            }
        }
        steps.push(ApproxStep {
            arc: Arc::new(p.clone(), q.clone()).expect("nondegenerate arc"),
            forward: n_i,
            backward: m_i,
            bridge_nodes: interior,
        });
    }

    let map = PLCircleMap::new(nodes).map_err(|_| ApproxError::NotLaminationPreserving)?;
    Ok((map, steps))
}

/// Offset of a model-arc angle from the arc start `2/3`, in `[0, 2/3]`.
fn two_thirds_offset(x: &Angle) -> BigRational {
    Angle::new(2, 3).dist_ccw(x)
}

/// Interior node pairs of a piecewise-linear bijection from the full inner
/// circle (cut at angle 0) onto the inner arc of the model, built by
/// balanced recursion: each source half splits the image at the coarsest
/// dyadic in the middle of its arc, and a piece is final once it maps a
/// standard dyadic interval affinely onto a standard one. Coarse split
/// images keep the level shift at every node small, so the wake transports
/// hanging off the nodes stay within a bounded slope of the sectors.
fn balanced_bridge_nodes(
    dst_start: &Angle,
    dst_len: &BigRational,
) -> Result<Vec<(Angle, Angle)>, ApproxError> {
    let aligned = |x: &BigRational, len: &BigRational| (x / len).is_integer();
    let is_final = |a: &BigRational, b: &BigRational, da: &Angle, dlen: &BigRational| -> bool {
        let len = b - a;
        crate::circle::ratio_pow2_exp(&len).is_some()
            && aligned(a, &len)
            && crate::circle::ratio_pow2_exp(dlen).is_some()
            && aligned(da.as_ratio(), dlen)
    };
    // (source lo, source hi, image start, image length)
    let mut queue: Vec<(BigRational, BigRational, Angle, BigRational)> = vec![(
        BigRational::zero(),
        BigRational::one(),
        dst_start.clone(),
        dst_len.clone(),
    )];
    let mut nodes: Vec<(Angle, Angle)> = Vec::new();
    let mut guard = 0u32;
    while let Some((a, b, da, dlen)) = queue.pop() {
        guard += 1;
        if guard > 1 << 20 {
            return Err(ApproxError::SearchExhausted(guard));
        }
        if is_final(&a, &b, &da, &dlen) {
            continue;
        }
        let m_src = (&a + &b) / BigRational::from_integer(BigInt::from(2));
        // Coarsest dyadic in the middle half of the image arc (lifted reals;
        // the dyadic grids are 1-periodic so the lift is harmless).
        let lo = da.as_ratio() + &dlen / BigRational::from_integer(BigInt::from(4));
        let hi = da.as_ratio() + &dlen * BigRational::new(BigInt::from(3), BigInt::from(4));
        let m_dst_lift = crate::circle::coarsest_dyadic_between(&lo, &hi);
        let m_dst = Angle::from_ratio(m_dst_lift.clone());
        let first_len = &m_dst_lift - da.as_ratio();
        nodes.push((Angle::from_ratio(m_src.clone()), m_dst.clone()));
        queue.push((a, m_src.clone(), da, first_len.clone()));
        queue.push((m_src, b, m_dst, dlen - first_len));
    }
    nodes.sort_by(|x, y| x.0.cmp(&y.0));
    Ok(nodes)
}

/// Maximum circle distance between the map and the target over equispaced
/// sample angles, as an exact rational (the target is evaluated exactly).
pub fn sup_distance(f: &PLCircleMap, target: &TargetOracle, samples: u32) -> BigRational {
    let mut max = BigRational::zero();
    let denom = BigInt::from(samples.max(1));
    for k in 0..samples.max(1) {
        let x = Angle::from_ratio(BigRational::new(BigInt::from(k), denom.clone()));
        let d = f.evaluate(&x).circle_dist(&target.eval(&x));
        if d > max {
            max = d;
        }
    }
    max
}

/// The piecewise-linear interpolation of the target on a finite node set.
pub fn interpolate_on(points: &[Angle], target: &TargetOracle) -> Result<PLCircleMap, ApproxError> {
    if points.len() < 2 {
        return Err(ApproxError::NonMonotoneOnE);
    }
    let nodes: Vec<(Angle, Angle)> = points
        .iter()
        .map(|e| (e.clone(), target.eval(e)))
        .collect();
    PLCircleMap::new(nodes).map_err(|_| ApproxError::NonMonotoneOnE)
}

/// Symmetric-triple distortion measurement: the maximum over sampled triples
/// `(o, o+s, o−s)` of the image ratio `d(f(o),f(o+s)) / d(f(o),f(o−s))`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DistortionEstimate {
    pub samples: u64,
    pub max_ratio: f64,
}

pub fn distortion_estimate(
    f: impl Fn(&Angle) -> Angle,
    triples: u32,
    scales: &[BigRational],
    seed: u64,
) -> DistortionEstimate {
    let mut rng = SplitMix64::new(seed);
    let mut max_ratio = 1.0f64;
    let mut samples = 0u64;
    for scale in scales {
        for _ in 0..triples {
            let o = rng.angle();
            let p = o.add(&Angle::from_ratio(scale.clone()));
            let q = o.sub(&Angle::from_ratio(scale.clone()));
            let fo = f(&o);
            let num = fo.circle_dist(&f(&p));
            let den = fo.circle_dist(&f(&q));
            if num.is_zero() || den.is_zero() {
                continue;
            }
            let r = (&num / &den).to_f64().unwrap_or(1.0);
            max_ratio = max_ratio.max(r).max(1.0 / r);
            samples += 1;
        }
    }
    DistortionEstimate { samples, max_ratio }
}

/// Distortion of the induced Julia-set map, measured in the plane between
/// landing points of angle-symmetric triples and of their images: the worst
/// ratio between image and source symmetric plane ratios.
pub fn julia_distortion_estimate(
    f: &PLCircleMap,
    triples: u32,
    seed: u64,
) -> Result<DistortionEstimate, ApproxError> {
    if !preserves_lamination(f, 6) {
        return Err(ApproxError::NotLaminationPreserving);
    }
    let mut rng = SplitMix64::new(seed);
    let mut max_ratio = 1.0f64;
    let mut samples = 0u64;
    let land = |a: &Angle| -> Result<num_complex::Complex64, ApproxError> {
        Ok(trace_ray(a, DEFAULT_RAY_STEPS, DEFAULT_RAY_TOL)?.landing)
    };
    let mut attempts = 0u32;
    while samples < triples as u64 && attempts < 8 * triples {
        attempts += 1;
        // Symmetric triples on the lamination grid of a random level.
        let level = 3 + rng.below(5) as u32;
        let denom = BigInt::from(3) << level;
        let step = BigRational::new(BigInt::one(), denom.clone());
        let o = Angle::from_ratio(BigRational::new(
            BigInt::from(rng.below((3u64) << level)),
            denom.clone(),
        ));
        let p = o.add(&Angle::from_ratio(step.clone()));
        let q = o.sub(&Angle::from_ratio(step.clone()));
        let (zo, zp, zq) = (land(&o)?, land(&p)?, land(&q)?);
        let src = (zo - zp).norm() / (zo - zq).norm();
        let (io, ip, iq) = (
            land(&f.evaluate(&o))?,
            land(&f.evaluate(&p))?,
            land(&f.evaluate(&q))?,
        );
        let img = (io - ip).norm() / (io - iq).norm();
        if !src.is_finite() || !img.is_finite() || src == 0.0 || img == 0.0 {
            continue;
        }
        let r = img / src;
        max_ratio = max_ratio.max(r).max(1.0 / r);
        samples += 1;
    }
    Ok(DistortionEstimate { samples, max_ratio })
}
