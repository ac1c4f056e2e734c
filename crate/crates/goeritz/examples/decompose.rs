//! Splitting a word of handlebody moves into an anchored prefix and a
//! freewheeling residual: the prefix carries all of the arc movement, the
//! residual fixes the reference arc.
//!
//! Run with: cargo run --example decompose

use goeritz::{GoeritzWord, HandlebodyModel};

fn main() {
    let genus = 2;
    let model = HandlebodyModel::new(genus).expect("genus >= 1");

    for text in [
        "a1 f2 a1^-1",
        "r f3 a2 r^-1",
        "f2 f4^-1 a1' b_free", // the parser rejects this one; see below
    ] {
        let word = match GoeritzWord::parse(genus, text) {
            Ok(word) => word,
            Err(err) => {
                println!("`{text}` does not parse: {err}");
                continue;
            }
        };
        let arc = model.tau(&word).expect("in range");
        let (anchored_part, residual) = model.decompose(&word).expect("in range");

        // The residual fixes the reference arc...
        assert!(model.is_freewheeling(&residual).expect("in range"));
        // ...the anchored part reproduces the input on the reference arc...
        let reached = model.tau(&anchored_part).expect("in range");
        assert!(model.arc_eq(&reached, &arc).expect("same model"));
        // ...and the two pieces multiply back to the input word.
        let product = anchored_part.concat(&residual).expect("same genus");
        assert_eq!(product.reduced(), word.reduced());

        println!("word      {word}");
        println!("  arc     {arc}");
        println!("  anchored  {anchored_part}");
        println!("  residual  {}", residual.reduced());
        println!();
    }

    // Pure conjugations by freewheeling moves are already residuals: the
    // anchored part of f2 a1 a1^-1 f2^-1 is empty.
    let word = GoeritzWord::parse(genus, "f2 a1 a1^-1 f2^-1").expect("parses");
    let (anchored_part, _) = model.decompose(&word).expect("in range");
    assert!(anchored_part.is_empty());
    println!("f2 a1 a1^-1 f2^-1 is freewheeling: anchored part is empty");
}
