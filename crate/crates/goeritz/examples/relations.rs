//! The defining relation of the two-point braid group of a holed disk:
//! a half rotation squared equals the ordered product of the hole pushes.
//!
//! Run with: cargo run --example relations

use goeritz::{B2Gen, PlanarModel};

fn main() {
    for p in 1..=5 {
        let model = PlanarModel::new(p).expect("p >= 1");
        let rotor = model.generator(B2Gen::Rotor).expect("in range");
        let rotor_squared = rotor.compose(&rotor).expect("same model");
        let product = model
            .evaluate((1..=p).map(|i| (B2Gen::Anchored(i), 1)))
            .expect("in range");
        assert_eq!(rotor_squared, product, "relation fails at p = {p}");
        let spelled: Vec<String> = (1..=p).map(|i| format!("a{i}")).collect();
        println!("p = {p}: rotor^2 = {}  (parity {})", spelled.join(" "), product.parity());

        // The relation iterates: even rotor powers are powers of the full
        // anchored product.
        for k in 2..=3 {
            let lhs = rotor.pow(2 * k).expect("compose");
            let rhs = product.pow(k).expect("compose");
            assert_eq!(lhs, rhs, "iterate fails at p = {p}, k = {k}");
        }

        // The rotor itself has infinite order; only its parity is torsion.
        let mut power = model.identity();
        for k in 1..=10 {
            power = power.compose(&rotor).expect("same model");
            assert!(!power.is_identity(), "rotor^{k} collapsed at p = {p}");
        }
    }
    println!("rotor powers stay nontrivial; only the exchange parity is torsion");
}
