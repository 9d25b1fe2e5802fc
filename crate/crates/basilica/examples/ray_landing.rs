//! External rays of the basilica: landing points of the fixed rays, the
//! co-landing of lamination leaves, and the semiconjugacy with doubling.
//!
//! ```bash
//! cargo run -p basilica --example ray_landing
//! ```

use basilica::circle::Angle;
use basilica::geometry::{
    alpha, basilica, beta, landing_point, trace_ray, DEFAULT_RAY_STEPS, DEFAULT_RAY_TOL,
};
use basilica::lamination::build_lamination;

fn main() {
    for (text, expect, name) in [
        ("0", beta(), "beta"),
        ("1/3", alpha(), "alpha"),
        ("2/3", alpha(), "alpha"),
        ("1/2", -beta(), "-beta"),
    ] {
        let theta: Angle = text.parse().unwrap();
        let t = trace_ray(&theta, DEFAULT_RAY_STEPS, DEFAULT_RAY_TOL).unwrap();
        println!(
            "ray {text:>3} lands at {:+.9}{:+.9}i = {name} (error {:.2e})",
            t.landing.re,
            t.landing.im,
            (t.landing - expect).norm()
        );
    }

    let lam = build_lamination(5).unwrap();
    let mut worst: f64 = 0.0;
    for leaf in lam.all_leaves() {
        let za = landing_point(leaf.small()).unwrap();
        let zb = landing_point(leaf.big()).unwrap();
        worst = worst.max((za - zb).norm());
    }
    println!(
        "\nall {} leaves to depth 5 co-land; worst endpoint gap {worst:.2e}",
        lam.leaf_count()
    );

    let theta = Angle::new(7, 12);
    let z = landing_point(&theta).unwrap();
    let w = landing_point(&theta.double()).unwrap();
    println!(
        "semiconjugacy: |f(land(7/12)) - land(7/6)| = {:.2e}",
        (basilica(z) - w).norm()
    );
}
