//! The correspondence between inner angles on the central component boundary
//! and outer ray angles: wakes of dyadic roots, the collapse map, and the
//! extension of an inner Thompson element to the outer circle.
//!
//! ```bash
//! cargo run -p basilica --example inner_outer_bridge
//! ```

use basilica::circle::Angle;
use basilica::group::extend_inner_to_outer;
use basilica::lamination::{collapse_outer, inner_to_outer, preserves_lamination, OuterAngles};
use basilica::plmap::{Generator, PLCircleMap};

fn main() {
    for t in [
        Angle::zero(),
        Angle::new(1, 2),
        Angle::new(1, 4),
        Angle::new(3, 4),
        Angle::new(1, 3),
    ] {
        match inner_to_outer(&t) {
            OuterAngles::Pair { lower, upper } => {
                println!("inner {t}: wake rays {{{lower}, {upper}}}")
            }
            OuterAngles::Single(s) => println!("inner {t}: single ray {s}"),
        }
    }

    for theta in [Angle::new(1, 6), Angle::new(19, 24), Angle::new(1, 12)] {
        println!("collapse({theta}) = {:?}", collapse_outer(&theta));
    }

    let a = PLCircleMap::generator(Generator::A);
    let ext = extend_inner_to_outer(&a).unwrap();
    println!("\nouter extension of A ({} nodes):", ext.nodes().len());
    for (b, v) in ext.nodes() {
        println!("    {b} -> {v}");
    }
    println!(
        "class {}, preserves the lamination to depth 10: {}",
        ext.membership_class(),
        preserves_lamination(&ext, 10)
    );
}
