//! The action of the extended group on the tree of bounded Fatou
//! components, through exact leaf transport: ι swaps the two central
//! components, σ shifts the real chain.
//!
//! ```bash
//! cargo run -p basilica --example tree_action
//! ```

use basilica::circle::Angle;
use basilica::group::{
    act_on_component, iota_map, leaf_from_address, sigma_map, wake_interval, word_to_map,
    ComponentAddress,
};

fn addr(steps: &[Angle]) -> ComponentAddress {
    ComponentAddress::new(steps.to_vec()).unwrap()
}

fn main() {
    let root = ComponentAddress::root();
    let u_minus = addr(&[Angle::zero()]);
    let u_one = addr(&[Angle::new(1, 2)]);
    let u_two = addr(&[Angle::new(1, 2), Angle::new(1, 2)]);

    for a in [&u_minus, &u_one, &u_two, &addr(&[Angle::new(1, 4)])] {
        println!(
            "component {a}: root leaf {:?}, wake {}",
            leaf_from_address(a).unwrap(),
            wake_interval(a).unwrap(),
        );
    }

    let iota = iota_map();
    let sigma = sigma_map();
    println!("\nι: () -> {}", act_on_component(&iota, &root).unwrap());
    println!("ι: (0) -> {}", act_on_component(&iota, &u_minus).unwrap());
    println!("σ: (0) -> {}", act_on_component(&sigma, &u_minus).unwrap());
    println!("σ: () -> {}", act_on_component(&sigma, &root).unwrap());
    println!("σ: (1/2) -> {}", act_on_component(&sigma, &u_one).unwrap());

    // The action is a homomorphism: acting by a word equals acting letter
    // by letter.
    let w = "A iota C^-1".parse().unwrap();
    let m = word_to_map(&w);
    let mut step = u_two.clone();
    for (l, e) in w.letters().iter().rev() {
        let mut single = basilica::group::GroupWord::empty();
        single.push(*l, *e);
        step = act_on_component(&word_to_map(&single), &step).unwrap();
    }
    assert_eq!(act_on_component(&m, &u_two).unwrap(), step);
    println!("\n(A ι C⁻¹)·(1/2, 1/2) = {step}, letterwise and at once");
}
