//! Meridian-crossing schedules: counting how many extra intersections an
//! isotopy of the reference arc needs, and rewriting any word so that one
//! intersection at a time suffices.
//!
//! Run with: cargo run --example thin_width

use goeritz::width::{canonical, thin};
use goeritz::{GoeritzWord, HandlebodyModel};

fn main() {
    let genus = 2;
    let model = HandlebodyModel::new(genus).expect("genus >= 1");

    // Each generator crosses meridian disks in a fixed short pattern; the
    // canonical schedule of a word concatenates those blocks.
    for text in ["a1", "f2", "f4^-1", "f2 a1 f2^-1", "r f4 a2'"] {
        let word = GoeritzWord::parse(genus, text).expect("parses");
        let schedule = canonical(&model, &word).expect("in range");
        println!("word {text:<12} width {} events {:?}", schedule.width(), schedule
            .events()
            .iter()
            .map(|e| e.to_string())
            .collect::<Vec<_>>());
        assert!(schedule.width() <= 1);
    }
    println!();

    // Widths concatenate by taking the maximum, because every block
    // returns all intersection counts to zero.
    let left = canonical(&model, &GoeritzWord::parse(genus, "f2 f4").expect("parses"))
        .expect("in range");
    let right = canonical(&model, &GoeritzWord::parse(genus, "f2^-1").expect("parses"))
        .expect("in range");
    let joined = left.concat(&right).expect("same genus");
    assert_eq!(joined.width(), left.width().max(right.width()));
    println!(
        "concat: width {} and width {} join to width {}",
        left.width(),
        right.width(),
        joined.width()
    );

    // Splitting cuts at the moments when no intersections are open.
    let pieces = joined.split();
    println!("split into {} balanced pieces", pieces.len());
    let mut reassembled = pieces[0].clone();
    for piece in &pieces[1..] {
        reassembled = reassembled.concat(piece).expect("same genus");
    }
    assert_eq!(reassembled, joined);

    // Thinning: any word rewrites to one with the same arc action whose
    // schedule has width at most 1.
    let word = GoeritzWord::parse(genus, "f2 a1 r f4^-1 a2 f2").expect("parses");
    let (rewritten, schedule) = thin(&model, &word).expect("in range");
    let same = model
        .arc_eq(
            &model.tau(&rewritten).expect("in range"),
            &model.tau(&word).expect("in range"),
        )
        .expect("same model");
    assert!(same && schedule.width() <= 1);
    println!();
    println!("thin: {word}");
    println!("  ->  {rewritten}");
    println!("  width {} over {} events", schedule.width(), schedule.len());
}
