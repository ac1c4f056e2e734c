//! How a two-point braid acts on the fundamental group of the holed disk:
//! every generator rewrites the lassos while fixing the boundary word.
//!
//! Run with: cargo run --example braid_action

use goeritz::{B2Gen, PlanarModel};

fn main() {
    let p = 3;
    let model = PlanarModel::new(p).expect("p >= 1");
    println!("disk with {p} boundary circles, lassos c1..c{p} and points u0, u1");
    println!("boundary word: {}", model.boundary_word());
    println!();

    for (name, gen) in [
        ("rotor", B2Gen::Rotor),
        ("a2 (point x1 around hole 2)", B2Gen::Anchored(2)),
        ("f1 (pair around hole 1)", B2Gen::Freewheel(1)),
    ] {
        let braid = model.generator(gen).expect("in range");
        println!("{name}: parity {}", braid.parity());
        for i in 1..=p {
            let circle = model.circle(i).expect("in range");
            println!("  c{i} -> {}", braid.apply(&circle).expect("same rank"));
        }
        println!("  u0 -> {}", braid.apply(&model.point0()).expect("same rank"));
        println!("  u1 -> {}", braid.apply(&model.point1()).expect("same rank"));

        // The boundary word is fixed exactly, not just up to conjugacy.
        let fixed = braid.apply(&model.boundary_word()).expect("same rank");
        assert_eq!(fixed, model.boundary_word());
        braid.validate().expect("certificate holds");
        println!("  boundary word fixed, certificate verified");
        println!();
    }

    // A short mixed word, evaluated left to right (first letter outermost).
    let word = [(B2Gen::Rotor, 1), (B2Gen::Freewheel(2), -1), (B2Gen::Anchored(3), 1)];
    let braid = model.evaluate(word).expect("in range");
    println!("word r f2^-1 a3: parity {}", braid.parity());
    assert_eq!(braid.parity(), 1);
    assert!(braid.compose(&braid.inverse()).expect("same model").is_identity());
    println!("composition with the inverse returns the identity");
}
