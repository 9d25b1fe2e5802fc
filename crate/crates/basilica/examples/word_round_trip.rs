//! Membership certificates: a lamination-preserving Thompson-like map is
//! peeled back into a word over {A, B, C, ι} whose map reproduces it
//! exactly; maps breaking the lamination are rejected.
//!
//! ```bash
//! cargo run -p basilica --example word_round_trip
//! ```

use basilica::circle::Angle;
use basilica::group::{decompose_to_word, word_to_map, GroupWord};
use basilica::plmap::PLCircleMap;

fn main() {
    for text in ["iota", "A B^-1", "C iota A", "B iota C^-1 iota A^-1"] {
        let w: GroupWord = text.parse().unwrap();
        let m = word_to_map(&w);
        let recovered = decompose_to_word(&m).unwrap();
        println!(
            "{text:24} -> {} letters, map reproduced: {}",
            recovered.len(),
            word_to_map(&recovered) == m
        );
    }

    let rot_third = PLCircleMap::rotation(&Angle::new(1, 3));
    println!(
        "\nrotation by 1/3 (class {}) rejected: {:?}",
        rot_third.membership_class(),
        decompose_to_word(&rot_third).unwrap_err()
    );
}
