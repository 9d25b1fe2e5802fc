//! The circle generators A, B, C of Thompson's group T, the inversion ι,
//! and the relations that structure the extended group.
//!
//! ```bash
//! cargo run -p basilica --example generators_and_relations
//! ```

use basilica::circle::Angle;
use basilica::group::{iota_map, rho_map, sigma_map};
use basilica::plmap::{Generator, PLCircleMap};

fn main() {
    for g in [Generator::A, Generator::B, Generator::C] {
        let m = PLCircleMap::generator(g);
        println!("{g:?}: class {}", m.membership_class());
        for (b, v) in m.nodes() {
            println!("    {b} -> {v}");
        }
        let slopes: Vec<String> = m.slopes().iter().map(|s| s.to_string()).collect();
        println!("    slopes {}", slopes.join(", "));
    }

    let c = PLCircleMap::generator(Generator::C);
    println!("\nC∘C∘C is the identity: {}", c.compose(&c.compose(&c)).is_identity());

    let iota = iota_map();
    println!("ι∘ι is the identity:   {}", iota.compose(&iota).is_identity());
    println!("ι(0) = {},  ι(1/3) = {}", iota.evaluate(&Angle::zero()), iota.evaluate(&Angle::new(1, 3)));

    let rho = rho_map();
    let sigma = sigma_map();
    println!("ρ∘ρ is the identity:   {}", rho.compose(&rho).is_identity());
    println!("σ = ρ∘ι:               {}", sigma == rho.compose(&iota));
    println!("σ fixes the β ray:     σ(0) = {}", sigma.evaluate(&Angle::zero()));
}
