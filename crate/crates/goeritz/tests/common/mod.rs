//! Shared generators and independent oracles for the integration suites.
#![allow(dead_code)]

use std::collections::HashSet;

use goeritz::arcs::{GenKind, GoeritzGen, GoeritzWord};
use goeritz::braid2::B2Gen;
use goeritz::freegroup::FWord;
use goeritz::surface::SurfaceGroup;
use goeritz::width::{CrossEvent, Schedule};
use rand::rngs::StdRng;
use rand::Rng;

/// A freely reduced word over `rank` letters, drawn letter by letter,
/// rejecting immediate cancellations.
pub fn random_reduced_word(rng: &mut StdRng, rank: usize, len: usize) -> FWord {
    let mut letters: Vec<i32> = Vec::with_capacity(len);
    while letters.len() < len {
        let magnitude = rng.gen_range(1..=rank) as i32;
        let letter = if rng.gen_bool(0.5) { magnitude } else { -magnitude };
        if letters.last() == Some(&-letter) {
            continue;
        }
        letters.push(letter);
    }
    FWord::from_letters(rank, &letters).expect("letters in range")
}

/// A random word over the full generating set at the given genus.
pub fn random_goeritz_word(rng: &mut StdRng, genus: usize, len: usize) -> GoeritzWord {
    let mut gens = Vec::with_capacity(len);
    for _ in 0..len {
        let sign = if rng.gen_bool(0.5) { 1 } else { -1 };
        let kind = match rng.gen_range(0..4) {
            0 => GenKind::Anchored(rng.gen_range(1..=genus)),
            1 => GenKind::AnchoredPrime(rng.gen_range(1..=genus)),
            2 => GenKind::Rotor,
            _ => GenKind::Freewheel(rng.gen_range(1..=2 * genus)),
        };
        gens.push(GoeritzGen::new(kind, sign));
    }
    GoeritzWord::new(genus, gens).expect("generators in range")
}

/// A short random braid word; braids act with exponential image growth, so
/// callers should keep `len` small.
pub fn random_braid_word(rng: &mut StdRng, p: usize, len: usize) -> Vec<(B2Gen, i32)> {
    (0..len)
        .map(|_| {
            let sign = if rng.gen_bool(0.5) { 1 } else { -1 };
            let gen = match rng.gen_range(0..3) {
                0 => B2Gen::Rotor,
                1 => B2Gen::Anchored(rng.gen_range(1..=p)),
                _ => B2Gen::Freewheel(rng.gen_range(1..=p)),
            };
            (gen, sign)
        })
        .collect()
}

/// A random valid crossing schedule: a biased walk that never lets a disk
/// count go negative and closes every intersection at the end.
pub fn random_schedule(rng: &mut StdRng, genus: usize, steps: usize) -> Schedule {
    let mut events = Vec::new();
    let mut open = vec![0i64; genus + 1];
    for _ in 0..steps {
        let disk = rng.gen_range(1..=genus);
        let end = rng.gen_range(0..=1u8);
        if open[disk] > 0 && rng.gen_bool(0.5) {
            events.push(CrossEvent::new(end, disk, -1));
            open[disk] -= 1;
        } else {
            events.push(CrossEvent::new(end, disk, 1));
            open[disk] += 1;
        }
    }
    for disk in 1..=genus {
        while open[disk] > 0 {
            let end = rng.gen_range(0..=1u8);
            events.push(CrossEvent::new(end, disk, -1));
            open[disk] -= 1;
        }
    }
    Schedule::try_new(genus, events).expect("walk is balanced")
}

/// Calls `visit` on every freely reduced word of length <= max_len over
/// `rank` letters (the empty word included), without materializing the set.
pub fn for_each_reduced_word(rank: usize, max_len: usize, mut visit: impl FnMut(&[i32])) {
    fn extend(
        rank: usize,
        max_len: usize,
        current: &mut Vec<i32>,
        visit: &mut impl FnMut(&[i32]),
    ) {
        visit(current);
        if current.len() == max_len {
            return;
        }
        for magnitude in 1..=rank as i32 {
            for letter in [magnitude, -magnitude] {
                if current.last() == Some(&-letter) {
                    continue;
                }
                current.push(letter);
                extend(rank, max_len, current, visit);
                current.pop();
            }
        }
    }
    let mut current = Vec::with_capacity(max_len);
    extend(rank, max_len, &mut current, &mut visit);
}

pub fn free_reduce(letters: &[i32]) -> Vec<i32> {
    let mut out: Vec<i32> = Vec::with_capacity(letters.len());
    for &letter in letters {
        if out.last() == Some(&-letter) {
            out.pop();
        } else {
            out.push(letter);
        }
    }
    out
}

/// Decides triviality by exhaustive descent: wherever the word contains a
/// factor of a relator rotation longer than half the relator, replace the
/// factor by the inverse of the rotation's remainder (a strictly shorter
/// word in the same class) and backtrack over every such choice.
///
/// Sound because each replacement multiplies by a conjugate of a relator
/// rotation; complete because a nonempty trivial reduced word over this
/// small-cancellation relator always contains such a factor, and the
/// replacement keeps the class trivial, so some branch reaches the empty
/// word. Exponential in the worst case but the words here are short.
pub fn descends_to_empty(letters: &[i32], rotations: &[Vec<i32>]) -> bool {
    if letters.is_empty() {
        return true;
    }
    let relator_len = rotations[0].len();
    for rotation in rotations {
        for factor_len in (relator_len / 2 + 1)..=relator_len.min(letters.len()) {
            let factor = &rotation[..factor_len];
            for start in 0..=letters.len() - factor_len {
                if &letters[start..start + factor_len] != factor {
                    continue;
                }
                let mut next: Vec<i32> =
                    Vec::with_capacity(letters.len() + relator_len - 2 * factor_len);
                next.extend_from_slice(&letters[..start]);
                next.extend(rotation[factor_len..].iter().rev().map(|&l| -l));
                next.extend_from_slice(&letters[start + factor_len..]);
                if descends_to_empty(&free_reduce(&next), rotations) {
                    return true;
                }
            }
        }
    }
    false
}

/// Trivial words generated bottom-up: breadth-first closure of the empty
/// word under inserting any cyclic rotation of the relator or its inverse
/// anywhere, free-reducing, and keeping words up to the cap.
///
/// Every member is trivial, but the closure is not complete for its cap:
/// a conjugate like x·R·x⁻¹ reduces past the splice point once x cancels,
/// so no single insertion into a reduced member rebuilds it. Use
/// [`descends_to_empty`] to decide triviality; use the closure as an
/// independent supply of known-trivial words.
pub struct TrivialClosure {
    cap: usize,
    set: HashSet<Vec<i32>>,
}

impl TrivialClosure {
    pub fn build(group: &SurfaceGroup, cap: usize) -> Self {
        let relator: Vec<i32> = group.relator().letters().to_vec();
        let rotations = cyclic_rotations(&relator);
        let mut set: HashSet<Vec<i32>> = HashSet::new();
        let mut frontier: Vec<Vec<i32>> = vec![Vec::new()];
        set.insert(Vec::new());
        while let Some(word) = frontier.pop() {
            for rotation in &rotations {
                for pos in 0..=word.len() {
                    let mut candidate = Vec::with_capacity(word.len() + rotation.len());
                    candidate.extend_from_slice(&word[..pos]);
                    candidate.extend_from_slice(rotation);
                    candidate.extend_from_slice(&word[pos..]);
                    let reduced = free_reduce(&candidate);
                    if reduced.len() <= cap && !set.contains(&reduced) {
                        set.insert(reduced.clone());
                        frontier.push(reduced);
                    }
                }
            }
        }
        TrivialClosure { cap, set }
    }

    pub fn cap(&self) -> usize {
        self.cap
    }

    pub fn len(&self) -> usize {
        self.set.len()
    }

    /// Whether the closure reached this word; `true` certifies triviality,
    /// `false` certifies nothing.
    pub fn contains(&self, letters: &[i32]) -> bool {
        assert!(letters.len() <= self.cap, "query longer than the closure cap");
        self.set.contains(letters)
    }

    pub fn members(&self) -> impl Iterator<Item = &Vec<i32>> {
        self.set.iter()
    }
}

/// All cyclic rotations of the word and of its inverse, deduplicated.
pub fn cyclic_rotations(letters: &[i32]) -> Vec<Vec<i32>> {
    let inverse: Vec<i32> = letters.iter().rev().map(|&l| -l).collect();
    let mut out: Vec<Vec<i32>> = Vec::new();
    for base in [letters, &inverse[..]] {
        for k in 0..base.len() {
            let mut rotation = base[k..].to_vec();
            rotation.extend_from_slice(&base[..k]);
            if !out.contains(&rotation) {
                out.push(rotation);
            }
        }
    }
    out
}

/// All length-`size` factors of the cyclic word and of its inverse.
pub fn cyclic_factors(letters: &[i32], size: usize) -> Vec<Vec<i32>> {
    cyclic_rotations(letters)
        .into_iter()
        .map(|rotation| rotation[..size].to_vec())
        .collect::<HashSet<_>>()
        .into_iter()
        .collect()
}

/// Whether the reduced word contains any of the factors as a subword.
pub fn contains_factor(letters: &[i32], factors: &[Vec<i32>]) -> bool {
    factors.iter().any(|factor| {
        letters
            .windows(factor.len())
            .any(|window| window == factor.as_slice())
    })
}
