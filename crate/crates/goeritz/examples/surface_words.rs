//! Working with words in a closed surface group: normalization, the word
//! problem, and why equality needs more than comparing reduced spellings.
//!
//! Run with: cargo run --example surface_words

use goeritz::freegroup::FWord;
use goeritz::surface::{format_word, parse_word, SurfaceGroup};

fn main() {
    // Genus 1: the group is Z^2, so normalization sorts into a1^m b1^n.
    let torus = SurfaceGroup::new(1).expect("genus >= 1");
    let commuted = parse_word(1, "b1 a1 b1 a1^-1").expect("parses");
    let normal = torus.normalize(&commuted).expect("same alphabet");
    println!("genus 1: b1 a1 b1 a1^-1  ->  {}", format_word(&normal));
    let squared = parse_word(1, "b1^2").expect("parses");
    assert!(torus.equal(&normal, &squared).expect("same alphabet"));

    // Genus 2: words shorten whenever they contain more than half of a
    // cyclic rotation of the defining relation.
    let group = SurfaceGroup::new(2).expect("genus >= 1");
    println!("genus 2 relator: {}", format_word(&group.relator()));
    let long = parse_word(2, "a1 b1 a1^-1 b1^-1 a2 b2 a2^-1").expect("parses");
    let short = group.normalize(&long).expect("same alphabet");
    println!("genus 2: {}  ->  {}", format_word(&long), format_word(&short));
    assert!(short.len() < long.len());

    // A word is trivial exactly when its normal form is empty.
    let relator_conjugate = group
        .relator()
        .conjugated_by(&parse_word(2, "a2 b1^-1").expect("parses"))
        .expect("same rank");
    assert!(group.is_trivial(&relator_conjugate).expect("same alphabet"));
    println!("conjugates of the relator normalize to the empty word");

    // Distinct shortened spellings can still be equal in the group, so the
    // word problem is decided by normalizing the quotient u v^-1.
    let left = FWord::from_letters(4, &[1, 2, -1, -2]).expect("in range");
    let right = FWord::from_letters(4, &[4, 3, -4, -3]).expect("in range");
    assert_ne!(
        group.normalize(&left).expect("same alphabet"),
        group.normalize(&right).expect("same alphabet"),
        "both spellings are already as short as possible"
    );
    assert!(group.equal(&left, &right).expect("same alphabet"));
    println!(
        "[{}] and [{}] are equal although both are shortest spellings",
        format_word(&left),
        format_word(&right)
    );

    // Abelianized exponent counts are a fast invariant.
    let word = parse_word(2, "a1 b2 a1 b2^-1").expect("parses");
    println!("abelianization of a1 b2 a1 b2^-1: {:?}", group.abelianization(&word).expect("ok"));
}
