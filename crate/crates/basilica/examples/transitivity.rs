//! Transitivity of the extended group on the component tree: for any
//! address, a word taking it to the central component while respecting the
//! inner coordinate there and rotating only components along the path.
//!
//! ```bash
//! cargo run -p basilica --example transitivity
//! ```

use basilica::circle::Angle;
use basilica::group::{
    act_on_component, measure_rotation, transitivity_element, word_to_map, ComponentAddress,
};

fn main() {
    for steps in [
        vec![Angle::zero()],
        vec![Angle::new(1, 2)],
        vec![Angle::new(3, 4), Angle::new(1, 4)],
        vec![Angle::zero(), Angle::new(1, 2), Angle::new(1, 4)],
    ] {
        let addr = ComponentAddress::new(steps).unwrap();
        let (word, bookkeeping) = transitivity_element(&addr).unwrap();
        let map = word_to_map(&word);
        println!("address {addr}");
        println!("    word: {word}");
        println!(
            "    image: {}  (inner rotation at source: {})",
            act_on_component(&map, &addr).unwrap(),
            measure_rotation(&map, &addr).unwrap(),
        );
        if bookkeeping.0.is_empty() {
            println!("    bookkeeping: all coordinates respected");
        }
        for (component, rotation) in &bookkeeping.0 {
            println!("    bookkeeping: {component} rotated by {rotation}");
        }
    }
}
