//! The basilica lamination from the angle side: the vertex sets D_n, the
//! alternation of gap lengths, leaf pairing, and the dynamical partition
//! with its limb/span classification.
//!
//! ```bash
//! cargo run -p basilica --example lamination_tour
//! ```

use basilica::circle::Angle;
use basilica::lamination::{
    build_lamination, d_points, partition, partner, verify_alternation, ArcCase,
};

fn main() {
    for n in 0..=2u32 {
        let pts: Vec<String> = d_points(n).unwrap().iter().map(|p| p.to_string()).collect();
        println!("D_{n} = {{{}}}", pts.join(", "));
    }
    println!(
        "gap lengths alternate for n = 0..=12: {}",
        (0..=12).all(verify_alternation)
    );

    let lam = build_lamination(5).unwrap();
    for k in 0..=3u32 {
        let leaves: Vec<String> = lam
            .level(k)
            .iter()
            .map(|l| format!("{{{}, {}}}", l.small(), l.big()))
            .collect();
        println!("level {k}: {}", leaves.join("  "));
    }

    for a in [Angle::new(1, 3), Angle::new(1, 6), Angle::new(5, 12)] {
        println!("partner({a}) = {}", partner(&a).unwrap());
    }

    println!("\npartition at level 1:");
    for arc in partition(1).unwrap() {
        let tag = match arc.case {
            ArcCase::LimbArc => "limb",
            ArcCase::SpanArc => "span",
        };
        println!("    [{}, {}]  {tag}", arc.arc.start(), arc.arc.end());
    }
}
