//! Reaching any arc with anchored twists only: every (word, parity) target
//! is hit by a word in the 2g anchored generators plus at most one rotor.
//!
//! Run with: cargo run --example factor_arc

use goeritz::arcs::GenKind;
use goeritz::surface::parse_word;
use goeritz::HandlebodyModel;

fn main() {
    let genus = 2;
    let model = HandlebodyModel::new(genus).expect("genus >= 1");
    println!("genus {genus}: reference arc {}", model.reference_arc());

    for (text, swapped) in [
        ("1", true),
        ("a1", false),
        ("b2^-1", false),
        ("a1 b2^-1", true),
        ("b1 a2 b1^-1", false),
        ("a1 a1 b1", true),
    ] {
        let raw = parse_word(genus, text).expect("parses");
        let target = model.arc(&raw, swapped).expect("same alphabet");
        let word = model.factor(&target).expect("reachable");

        // Round trip: the factored word really lands on the target.
        let reached = model.tau(&word).expect("in range");
        assert!(model.arc_eq(&reached, &target).expect("same model"));

        // Structure: anchored twists with at most one trailing rotor.
        for (k, gen) in word.gens().iter().enumerate() {
            match gen.kind {
                GenKind::Anchored(_) | GenKind::AnchoredPrime(_) => {}
                GenKind::Rotor => assert_eq!(k + 1, word.len(), "rotor only at the end"),
                GenKind::Freewheel(_) => panic!("factorization must avoid freewheeling moves"),
            }
        }
        println!("target {target}  <-  {word}");
    }

    // The factorization is a right inverse of the evaluation, not a normal
    // form: feeding the factored word back in and factoring again is stable.
    let raw = parse_word(genus, "b2 a1^-1").expect("parses");
    let target = model.arc(&raw, false).expect("same alphabet");
    let word = model.factor(&target).expect("reachable");
    let again = model.factor(&model.tau(&word).expect("in range")).expect("reachable");
    assert_eq!(word.to_string(), again.to_string());
    println!("factoring is stable under one round trip: {word}");
}
