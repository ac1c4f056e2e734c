//! The fundamental group of the closed orientable surface of genus g.
//!
//! Generators are a₁,b₁,…,a_g,b_g with the single relation
//! [a₁,b₁]⋯[a_g,b_g] = 1. Letters are encoded in an [`FWord`] of rank 2g as
//! aᵢ = 2i−1, bᵢ = 2i. For g = 1 the group is ℤ² and words are normalized to
//! the canonical form a₁^m b₁^n. For g ≥ 2 the relator is small-cancellation
//! (distinct cyclic conjugates of it and its inverse share at most one
//! letter), so length reduction by half-relator replacement decides the word
//! problem: a word represents the identity exactly when it reduces to the
//! empty word.

use crate::freegroup::{FWord, FreeGroupError};
use std::collections::HashMap;
use thiserror::Error;

/// Errors from surface-group construction, arithmetic, or parsing.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum SurfaceError {
    /// Genus must be at least 1.
    #[error("genus must be >= 1, got {0}")]
    GenusOutOfRange(usize),
    /// Two words from groups of different genus were combined.
    #[error("genus mismatch: expected {expected}, found {found}")]
    GenusMismatch { expected: usize, found: usize },
    /// A word's free-group rank does not equal 2·genus.
    #[error("word rank {rank} does not match alphabet size {expected}")]
    AlphabetMismatch { rank: usize, expected: usize },
    /// Text input that does not follow the `a1 b2^-1` grammar.
    #[error("parse error at byte {offset}: {message}")]
    Parse { offset: usize, message: String },
    #[error(transparent)]
    Free(#[from] FreeGroupError),
}

/// A genus-g surface group with its reduction tables.
#[derive(Debug, Clone)]
pub struct SurfaceGroup {
    genus: usize,
    /// All cyclic rotations of the relator and of its inverse (8g words of
    /// length 4g each), empty for genus 1.
    rotations: Vec<Vec<i32>>,
    /// Length-(2g+1) prefix of each rotation, mapped to its index. A window
    /// of that length matches at most one rotation because distinct
    /// rotations share at most a single letter.
    window_index: HashMap<Vec<i32>, usize>,
    /// Window length 2g+1: one more than half the relator length.
    window: usize,
}

/// An element of the surface group, stored normalized.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SurfaceWord {
    genus: usize,
    word: FWord,
}

impl SurfaceWord {
    pub fn genus(&self) -> usize {
        self.genus
    }

    /// The stored normalized representative.
    pub fn word(&self) -> &FWord {
        &self.word
    }

    pub fn is_identity(&self) -> bool {
        self.word.is_empty()
    }
}

impl std::fmt::Display for SurfaceWord {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", format_word(&self.word))
    }
}

impl SurfaceGroup {
    pub fn new(genus: usize) -> Result<Self, SurfaceError> {
        if genus == 0 {
            return Err(SurfaceError::GenusOutOfRange(genus));
        }
        let mut rotations = Vec::new();
        let mut window_index = HashMap::new();
        let window = 2 * genus + 1;
        if genus >= 2 {
            let relator = relator_letters(genus);
            let inverse: Vec<i32> = relator.iter().rev().map(|&l| -l).collect();
            for base in [relator, inverse] {
                for shift in 0..base.len() {
                    let mut rotated = base.clone();
                    rotated.rotate_left(shift);
                    let key = rotated[..window].to_vec();
                    let id = rotations.len();
                    let previous = window_index.insert(key, id);
                    // Distinct rotations would otherwise share a prefix
                    // longer than one letter, contradicting the
                    // small-cancellation property the reduction relies on.
                    debug_assert!(previous.is_none());
                    rotations.push(rotated);
                }
            }
        }
        Ok(SurfaceGroup { genus, rotations, window_index, window })
    }

    pub fn genus(&self) -> usize {
        self.genus
    }

    /// Number of free generators: 2·genus.
    pub fn rank(&self) -> usize {
        2 * self.genus
    }

    /// The generator aᵢ, 1 ≤ i ≤ genus.
    pub fn a(&self, i: usize) -> Result<FWord, SurfaceError> {
        self.check_index(i)?;
        Ok(FWord::generator(self.rank(), 2 * i - 1)?)
    }

    /// The generator bᵢ, 1 ≤ i ≤ genus.
    pub fn b(&self, i: usize) -> Result<FWord, SurfaceError> {
        self.check_index(i)?;
        Ok(FWord::generator(self.rank(), 2 * i)?)
    }

    fn check_index(&self, i: usize) -> Result<(), SurfaceError> {
        if i == 0 || i > self.genus {
            return Err(SurfaceError::AlphabetMismatch { rank: i, expected: self.genus });
        }
        Ok(())
    }

    /// The defining relator [a₁,b₁]⋯[a_g,b_g].
    pub fn relator(&self) -> FWord {
        FWord::from_letters(self.rank(), &relator_letters(self.genus)).expect("relator letters in range")
    }

    fn check_rank(&self, w: &FWord) -> Result<(), SurfaceError> {
        if w.rank() != self.rank() {
            return Err(SurfaceError::AlphabetMismatch { rank: w.rank(), expected: self.rank() });
        }
        Ok(())
    }

    /// Reduces `w` to the committed normal form.
    ///
    /// Genus 1: the canonical abelian form a₁^m b₁^n. Genus ≥ 2: repeatedly
    /// find a window of length 2g+1 matching a rotation of the relator or
    /// its inverse, extend the match as far as it goes, and replace it by
    /// the inverse of the rotation's remainder; each replacement shortens
    /// the word by at least 2 letters. The result is empty exactly when `w`
    /// represents the identity.
    pub fn normalize(&self, w: &FWord) -> Result<FWord, SurfaceError> {
        self.check_rank(w)?;
        if self.genus == 1 {
            let sums = w.exponent_sums();
            let mut letters = Vec::new();
            push_power(&mut letters, 1, sums[0]);
            push_power(&mut letters, 2, sums[1]);
            return Ok(FWord::from_letters(2, &letters)?);
        }
        let mut current = w.letters().to_vec();
        'scan: loop {
            if current.len() >= self.window {
                for start in 0..=(current.len() - self.window) {
                    let key = &current[start..start + self.window];
                    let Some(&rotation_id) = self.window_index.get(key) else { continue };
                    let rotation = &self.rotations[rotation_id];
                    let mut matched = self.window;
                    while start + matched < current.len()
                        && matched < rotation.len()
                        && current[start + matched] == rotation[matched]
                    {
                        matched += 1;
                    }
                    // rotation = u·v with u the matched part, so u = v⁻¹ in
                    // the group; swapping in v⁻¹ shortens the word.
                    let mut replaced = Vec::with_capacity(current.len());
                    replaced.extend_from_slice(&current[..start]);
                    replaced.extend(rotation[matched..].iter().rev().map(|&l| -l));
                    replaced.extend_from_slice(&current[start + matched..]);
                    current = FWord::from_letters(self.rank(), &replaced)?.letters().to_vec();
                    continue 'scan;
                }
            }
            break;
        }
        Ok(FWord::from_letters(self.rank(), &current)?)
    }

    /// Whether `w` represents the identity.
    pub fn is_trivial(&self, w: &FWord) -> Result<bool, SurfaceError> {
        Ok(self.normalize(w)?.is_empty())
    }

    /// Whether `u` and `v` represent the same group element, decided by
    /// normalizing `u·v⁻¹`.
    pub fn equal(&self, u: &FWord, v: &FWord) -> Result<bool, SurfaceError> {
        self.is_trivial(&u.concat(&v.inverse())?)
    }

    /// Image in H₁ ≅ ℤ^{2g}: the signed letter counts.
    pub fn abelianization(&self, w: &FWord) -> Result<Vec<i64>, SurfaceError> {
        self.check_rank(w)?;
        Ok(w.exponent_sums())
    }

    /// Wraps a raw free word as a normalized [`SurfaceWord`].
    pub fn element(&self, raw: &FWord) -> Result<SurfaceWord, SurfaceError> {
        Ok(SurfaceWord { genus: self.genus, word: self.normalize(raw)? })
    }

    /// The identity element.
    pub fn one(&self) -> SurfaceWord {
        SurfaceWord { genus: self.genus, word: FWord::identity(self.rank()) }
    }

    /// Product of two elements, renormalized.
    pub fn mul(&self, u: &SurfaceWord, v: &SurfaceWord) -> Result<SurfaceWord, SurfaceError> {
        self.check_genus(u)?;
        self.check_genus(v)?;
        self.element(&u.word.concat(&v.word)?)
    }

    /// Inverse of an element.
    pub fn inv(&self, u: &SurfaceWord) -> Result<SurfaceWord, SurfaceError> {
        self.check_genus(u)?;
        self.element(&u.word.inverse())
    }

    fn check_genus(&self, u: &SurfaceWord) -> Result<(), SurfaceError> {
        if u.genus != self.genus {
            return Err(SurfaceError::GenusMismatch { expected: self.genus, found: u.genus });
        }
        Ok(())
    }
}

fn relator_letters(genus: usize) -> Vec<i32> {
    let mut letters = Vec::with_capacity(4 * genus);
    for i in 1..=genus as i32 {
        let a = 2 * i - 1;
        let b = 2 * i;
        letters.extend_from_slice(&[a, b, -a, -b]);
    }
    letters
}

fn push_power(letters: &mut Vec<i32>, index: i32, exponent: i64) {
    let letter = if exponent >= 0 { index } else { -index };
    for _ in 0..exponent.unsigned_abs() {
        letters.push(letter);
    }
}

/// Renders a surface word in the `a1 b2^-1` alphabet, merging runs of one
/// generator; the identity renders as `1`.
pub fn format_word(w: &FWord) -> String {
    if w.is_empty() {
        return "1".to_string();
    }
    let mut parts: Vec<String> = Vec::new();
    let mut run_letter = w.letters()[0];
    let mut run_count = 0i64;
    let emit = |letter: i32, count: i64, parts: &mut Vec<String>| {
        let index = letter.unsigned_abs();
        let name = if index % 2 == 1 { "a" } else { "b" };
        let number = index.div_ceil(2);
        let exponent = count * letter.signum() as i64;
        if exponent == 1 {
            parts.push(format!("{name}{number}"));
        } else {
            parts.push(format!("{name}{number}^{exponent}"));
        }
    };
    for &letter in w.letters() {
        if letter == run_letter {
            run_count += 1;
        } else {
            emit(run_letter, run_count, &mut parts);
            run_letter = letter;
            run_count = 1;
        }
    }
    emit(run_letter, run_count, &mut parts);
    parts.join(" ")
}

/// Parses the `a1 b2^-1` grammar into a free word of rank 2·genus.
///
/// Tokens are whitespace-separated; each is `a<i>` or `b<i>` with
/// 1 ≤ i ≤ genus, optionally followed by `^<integer>`. The bare token `1`
/// stands for the identity and contributes nothing. Errors carry the byte
/// offset of the offending token.
pub fn parse_word(genus: usize, text: &str) -> Result<FWord, SurfaceError> {
    let rank = 2 * genus;
    let mut letters: Vec<i32> = Vec::new();
    for (offset, token) in tokenize(text) {
        let (head, exponent) = split_exponent(token, offset)?;
        if head == "1" {
            continue;
        }
        let mut chars = head.chars();
        let kind = chars.next();
        let index_text = chars.as_str();
        let base = match kind {
            Some('a') => 1,
            Some('b') => 2,
            _ => {
                return Err(SurfaceError::Parse {
                    offset,
                    message: format!("unknown token `{token}`, expected a<i> or b<i>"),
                })
            }
        };
        let index: usize = index_text.parse().map_err(|_| SurfaceError::Parse {
            offset,
            message: format!("bad generator index in `{token}`"),
        })?;
        if index == 0 || index > genus {
            return Err(SurfaceError::Parse {
                offset,
                message: format!("index must be in 1..={genus}, got {index}"),
            });
        }
        let letter = (2 * index as i32 - 2) + base;
        push_power(&mut letters, letter, exponent);
    }
    Ok(FWord::from_letters(rank, &letters)?)
}

/// Splits `text` into (byte offset, token) pairs at whitespace.
pub(crate) fn tokenize(text: &str) -> Vec<(usize, &str)> {
    let mut out = Vec::new();
    let mut start: Option<usize> = None;
    for (i, ch) in text.char_indices() {
        if ch.is_whitespace() {
            if let Some(s) = start.take() {
                out.push((s, &text[s..i]));
            }
        } else if start.is_none() {
            start = Some(i);
        }
    }
    if let Some(s) = start {
        out.push((s, &text[s..]));
    }
    out
}

/// Splits a trailing `^<integer>` off a token; the default exponent is 1.
pub(crate) fn split_exponent(token: &str, offset: usize) -> Result<(&str, i64), SurfaceError> {
    match token.find('^') {
        None => Ok((token, 1)),
        Some(pos) => {
            let exponent: i64 = token[pos + 1..].parse().map_err(|_| SurfaceError::Parse {
                offset: offset + pos + 1,
                message: format!("malformed exponent in `{token}`"),
            })?;
            Ok((&token[..pos], exponent))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(rank: usize, letters: &[i32]) -> FWord {
        FWord::from_letters(rank, letters).unwrap()
    }

    #[test]
    fn relator_normalizes_to_identity() {
        for genus in 2..=4 {
            let group = SurfaceGroup::new(genus).unwrap();
            assert!(group.is_trivial(&group.relator()).unwrap());
            let conjugated = group
                .relator()
                .conjugated_by(&w(2 * genus, &[2, -1, 4]))
                .unwrap();
            assert!(group.is_trivial(&conjugated).unwrap());
            let squared = group.relator().concat(&group.relator()).unwrap();
            assert!(group.is_trivial(&squared).unwrap());
        }
    }

    #[test]
    fn torus_words_normalize_to_abelian_form() {
        let group = SurfaceGroup::new(1).unwrap();
        // a b a^-1 b^-1 -> identity on the torus.
        assert!(group.is_trivial(&w(2, &[1, 2, -1, -2])).unwrap());
        let word = w(2, &[2, 1, 2, -1, 2, 1, 1]);
        let normal = group.normalize(&word).unwrap();
        assert_eq!(normal.letters(), &[1, 1, 2, 2, 2]);
        assert!(group.equal(&word, &normal).unwrap());
    }

    #[test]
    fn distinct_generators_are_distinct() {
        let group = SurfaceGroup::new(2).unwrap();
        let a1 = group.a(1).unwrap();
        let b1 = group.b(1).unwrap();
        assert!(!group.equal(&a1, &b1).unwrap());
        assert!(!group.is_trivial(&a1).unwrap());
        assert_eq!(group.abelianization(&a1).unwrap(), vec![1, 0, 0, 0]);
        assert_eq!(group.abelianization(&b1).unwrap(), vec![0, 1, 0, 0]);
    }

    #[test]
    fn relator_insertion_does_not_change_class() {
        let group = SurfaceGroup::new(2).unwrap();
        let base = w(4, &[1, 3, -2, 4]);
        let with_relator = base.concat(&group.relator()).unwrap();
        assert!(group.equal(&base, &with_relator).unwrap());
        let reduced = group.normalize(&with_relator).unwrap();
        assert!(reduced.len() < with_relator.len());
    }

    #[test]
    fn normalization_is_idempotent_and_shortening() {
        let group = SurfaceGroup::new(2).unwrap();
        let relator = group.relator();
        // A word with a 3/4-relator window: the first 6 letters of the
        // relator followed by extra letters.
        let mut letters = relator.letters()[..6].to_vec();
        letters.extend_from_slice(&[1, 1]);
        let word = w(4, &letters);
        let reduced = group.normalize(&word).unwrap();
        assert!(reduced.len() < word.len());
        assert_eq!(group.normalize(&reduced).unwrap(), reduced);
        assert!(group.equal(&word, &reduced).unwrap());
    }

    #[test]
    fn equality_is_a_congruence_on_samples() {
        let group = SurfaceGroup::new(2).unwrap();
        let u = w(4, &[1, 2, 3]);
        let u_alt = u.concat(&group.relator()).unwrap();
        let v = w(4, &[-4, 1]);
        let left = u.concat(&v).unwrap();
        let right = u_alt.concat(&v).unwrap();
        assert!(group.equal(&left, &right).unwrap());
        assert_eq!(
            group.abelianization(&left).unwrap(),
            group.abelianization(&right).unwrap()
        );
    }

    #[test]
    fn rank_mismatch_is_reported() {
        let group = SurfaceGroup::new(2).unwrap();
        let err = group.normalize(&w(2, &[1])).unwrap_err();
        assert_eq!(err, SurfaceError::AlphabetMismatch { rank: 2, expected: 4 });
    }

    #[test]
    fn parse_and_format_round_trip() {
        let word = parse_word(2, "a1 b2^-2 a2^3").unwrap();
        assert_eq!(word.letters(), &[1, -4, -4, 3, 3, 3]);
        assert_eq!(format_word(&word), "a1 b2^-2 a2^3");
        assert_eq!(format_word(&FWord::identity(4)), "1");
        assert_eq!(parse_word(1, "a1 a1^-1").unwrap(), FWord::identity(2));
        assert_eq!(parse_word(2, "1").unwrap(), FWord::identity(4));
    }

    #[test]
    fn parse_errors_carry_byte_offsets() {
        match parse_word(2, "a1 c2").unwrap_err() {
            SurfaceError::Parse { offset, .. } => assert_eq!(offset, 3),
            other => panic!("unexpected error {other:?}"),
        }
        match parse_word(2, "a1 b2^x").unwrap_err() {
            SurfaceError::Parse { offset, .. } => assert_eq!(offset, 6),
            other => panic!("unexpected error {other:?}"),
        }
        match parse_word(2, "a0").unwrap_err() {
            SurfaceError::Parse { offset, .. } => assert_eq!(offset, 0),
            other => panic!("unexpected error {other:?}"),
        }
        match parse_word(2, "a3").unwrap_err() {
            SurfaceError::Parse { offset, .. } => assert_eq!(offset, 0),
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn surface_word_wrapper_normalizes() {
        let group = SurfaceGroup::new(2).unwrap();
        let elt = group.element(&group.relator()).unwrap();
        assert!(elt.is_identity());
        let a1 = group.element(&group.a(1).unwrap()).unwrap();
        let product = group.mul(&a1, &group.inv(&a1).unwrap()).unwrap();
        assert!(product.is_identity());
        assert_eq!(a1.to_string(), "a1");
    }
}
