//! The approximation engine: build maps agreeing with a target on the
//! vertex sets D_n, watch the uniform distance fall, and reach the target
//! exactly once the level passes its breakpoint depth.
//!
//! ```bash
//! cargo run -p basilica --example approximation
//! ```

use basilica::approx::{approximate, sup_distance, TargetOracle};
use basilica::group::{word_to_map, GroupWord};
use basilica::lamination::d_points;
use num_traits::ToPrimitive;

fn main() {
    let w: GroupWord = "B iota A^-1".parse().unwrap();
    let target_map = word_to_map(&w);
    let max_level = target_map
        .nodes()
        .iter()
        .flat_map(|(b, v)| [b, v])
        .filter_map(|a| a.d_infinity_level())
        .max()
        .unwrap();
    println!("target: {w}  (breakpoint level {max_level})");

    let target = TargetOracle::from_map(target_map.clone());
    for n in 4..=9u32 {
        let tau = approximate(&target, n).unwrap();
        let agree = d_points(n)
            .unwrap()
            .iter()
            .all(|d| tau.evaluate(d) == target_map.evaluate(d));
        let sup = sup_distance(&tau, &target, 4096);
        println!(
            "n = {n}: {} nodes, agrees on all of D_{n}: {agree}, sup distance {:.6}{}",
            tau.nodes().len(),
            sup.to_f64().unwrap_or(f64::NAN),
            if tau == target_map { "  (exact)" } else { "" },
        );
    }
}
