//! Quasisymmetric distortion estimators: symmetric-triple ratios on the
//! circle and, pushed through the ray landing map, on the Julia set itself.
//!
//! ```bash
//! cargo run -p basilica --example distortion_report
//! ```

use basilica::approx::{distortion_estimate, julia_distortion_estimate, DEFAULT_SEED};
use basilica::group::{iota_map, rho_map, word_to_map};
use basilica::plmap::{Generator, PLCircleMap};
use num_bigint::BigInt;
use num_rational::BigRational;

fn main() {
    let scales: Vec<BigRational> = (1..=10)
        .map(|k| BigRational::new(BigInt::from(1), BigInt::from(1) << k))
        .collect();
    println!("circle distortion over symmetric triples (seed {DEFAULT_SEED:#x}):");
    for (name, m) in [
        ("identity", PLCircleMap::identity()),
        ("rotation 1/2", rho_map()),
        ("generator A", PLCircleMap::generator(Generator::A)),
        ("iota", iota_map()),
        ("A iota B^-1", word_to_map(&"A iota B^-1".parse().unwrap())),
    ] {
        let e = distortion_estimate(|x| m.evaluate(x), 1000, &scales, DEFAULT_SEED);
        println!("    {name:14} max ratio {:8.4}  ({} samples)", e.max_ratio, e.samples);
    }

    println!("\nplane distortion between landing points:");
    for (name, m) in [
        ("identity", PLCircleMap::identity()),
        ("rho (z -> -z)", rho_map()),
        ("iota", iota_map()),
    ] {
        let e = julia_distortion_estimate(&m, 80, DEFAULT_SEED).unwrap();
        println!("    {name:14} max ratio {:8.4}  ({} samples)", e.max_ratio, e.samples);
    }
}
