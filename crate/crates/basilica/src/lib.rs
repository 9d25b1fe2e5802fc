//! Exact-arithmetic engine for the extended Thompson group of
//! quasisymmetries of the basilica Julia set (the Julia set of
//! `f(z) = z² − 1`).
//!
//! The crate is organized around the objects it manipulates:
//!
//! - [`circle`]: exact rational points and arcs of ℝ/ℤ;
//! - [`plmap`]: piecewise-linear circle homeomorphisms, the Thompson
//!   families as concrete map sets, and decompositions into the dynamical
//!   pseudo-group of the doubling map;
//! - [`lamination`]: the invariant lamination of the basilica, dynamical
//!   partitions, and the correspondence between inner (Fatou) and outer
//!   (Böttcher) circle coordinates;
//! - [`group`]: the extended Thompson group generated by T and the
//!   inversion, its action on the tree of bounded Fatou components, and
//!   word decomposition;
//! - [`approx`]: approximation of lamination-preserving circle maps by
//!   group elements matching them on dynamical vertex sets, with
//!   quasisymmetric distortion estimators;
//! - [`geometry`]: numeric complex dynamics (external rays, landing
//!   points, membership in the filled Julia set);
//! - [`render`]: deterministic SVG/PNG figures with overlays.
//!
//! See the crate examples for runnable entry points into each capability,
//! and the `basilica` binary for the command-line surface.

pub mod approx;
pub mod circle;
pub mod geometry;
pub mod group;
pub mod lamination;
pub mod plmap;
pub mod render;

pub use approx::{
    approximate, distortion_estimate, interpolate_on, julia_distortion_estimate, sup_distance,
    ApproxError, ApproxStep, DistortionEstimate, TargetOracle, DEFAULT_SEED,
};
pub use circle::{cyclic_between, Angle, Arc, CircleError};
pub use geometry::{in_filled_set, landing_point, trace_ray, GeometryError, RayTrace};
pub use render::{render_png, render_svg, Layer, RenderSpec};
pub use group::{
    act_on_component, decompose_to_word, extend_inner_to_outer, iota_map, leaf_from_address,
    rho_map, sigma_map, thompson_word, transitivity_element, wake_interval, word_to_map,
    Bookkeeping, ComponentAddress, GroupError, GroupWord, Letter,
};
pub use lamination::{
    build_lamination, collapse_outer, d_points, inner_to_outer, partition, partner,
    preserves_lamination, verify_alternation, ArcCase, LaminationError, LaminationLevels, Leaf,
    OuterAngles, PartitionArc,
};
pub use plmap::{
    arc_interpolate, dyn_decompose_segment, piecewise_dynamical_decomposition, ArcMap,
    CircleSegment, DynBranch, DynPiece, Generator, MembershipClass, PLCircleMap, PlMapError,
};
