//! Words and automorphisms of a finitely generated free group.
//!
//! Letters are signed 1-based integers: `3` is the third generator, `-3` its
//! inverse, and `0` is never valid. Every [`FWord`] is kept freely reduced,
//! so structural equality is equality in the free group. An [`FAut`] carries
//! both its image table and the image table of its inverse, and the pair is
//! certified at construction time, which keeps composition and inversion
//! cheap and total.

use thiserror::Error;

/// Errors from malformed words or uncertified automorphism tables.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum FreeGroupError {
    /// A letter's absolute value is zero or exceeds the rank.
    #[error("letter {letter} out of range for rank {rank}")]
    LetterOutOfRange { letter: i32, rank: usize },
    /// Two words from free groups of different ranks were combined.
    #[error("rank mismatch: expected {expected}, found {found}")]
    RankMismatch { expected: usize, found: usize },
    /// An automorphism table has the wrong number of entries.
    #[error("image table for rank {expected} has {found} entries")]
    TableSize { expected: usize, found: usize },
    /// The claimed inverse table fails to invert on some generator.
    #[error("tables are not mutually inverse at generator {generator}")]
    NotInverse { generator: usize },
}

/// A freely reduced word in the free group of a fixed rank.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FWord {
    rank: usize,
    letters: Vec<i32>,
}

impl FWord {
    /// The empty word.
    pub fn identity(rank: usize) -> Self {
        FWord { rank, letters: Vec::new() }
    }

    /// The single-letter word for the 1-based generator `index`.
    pub fn generator(rank: usize, index: usize) -> Result<Self, FreeGroupError> {
        Self::from_letters(rank, &[i32::try_from(index).unwrap_or(0)])
    }

    /// Builds a word from signed letters, freely reducing as it goes.
    pub fn from_letters(rank: usize, letters: &[i32]) -> Result<Self, FreeGroupError> {
        let mut word = FWord::identity(rank);
        for &letter in letters {
            word.push_letter(letter)?;
        }
        Ok(word)
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    /// The reduced letters, leftmost first.
    pub fn letters(&self) -> &[i32] {
        &self.letters
    }

    /// Reduced length.
    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    /// Appends one letter, cancelling against the current tail.
    pub fn push_letter(&mut self, letter: i32) -> Result<(), FreeGroupError> {
        let magnitude = letter.unsigned_abs() as usize;
        if magnitude == 0 || magnitude > self.rank {
            return Err(FreeGroupError::LetterOutOfRange { letter, rank: self.rank });
        }
        if self.letters.last() == Some(&-letter) {
            self.letters.pop();
        } else {
            self.letters.push(letter);
        }
        Ok(())
    }

    /// Concatenation followed by free reduction.
    pub fn concat(&self, other: &FWord) -> Result<FWord, FreeGroupError> {
        if self.rank != other.rank {
            return Err(FreeGroupError::RankMismatch { expected: self.rank, found: other.rank });
        }
        let mut out = self.clone();
        for &letter in &other.letters {
            out.push_letter(letter)?;
        }
        Ok(out)
    }

    /// The group inverse: letters reversed with signs flipped.
    pub fn inverse(&self) -> FWord {
        FWord {
            rank: self.rank,
            letters: self.letters.iter().rev().map(|&l| -l).collect(),
        }
    }

    /// `u * self * u^{-1}`.
    pub fn conjugated_by(&self, u: &FWord) -> Result<FWord, FreeGroupError> {
        u.concat(self)?.concat(&u.inverse())
    }

    /// Exponent sum of each generator, in generator order.
    pub fn exponent_sums(&self) -> Vec<i64> {
        let mut sums = vec![0i64; self.rank];
        for &letter in &self.letters {
            let index = letter.unsigned_abs() as usize - 1;
            sums[index] += letter.signum() as i64;
        }
        sums
    }

    /// Splits into `(core, u)` with `self = u * core * u^{-1}` and `core`
    /// cyclically reduced (its first and last letters are not inverse).
    pub fn cyclically_reduced(&self) -> (FWord, FWord) {
        let mut lo = 0usize;
        let mut hi = self.letters.len();
        // A reduced word can only cancel across the ends.
        while hi - lo >= 2 && self.letters[lo] == -self.letters[hi - 1] {
            lo += 1;
            hi -= 1;
        }
        let core = FWord { rank: self.rank, letters: self.letters[lo..hi].to_vec() };
        let conjugator = FWord { rank: self.rank, letters: self.letters[..lo].to_vec() };
        (core, conjugator)
    }

    /// Whether `self` and `other` are conjugate, decided by rotation matching
    /// of their cyclically reduced cores.
    pub fn is_conjugate(&self, other: &FWord) -> bool {
        if self.rank != other.rank {
            return false;
        }
        let (a, _) = self.cyclically_reduced();
        let (b, _) = other.cyclically_reduced();
        if a.len() != b.len() {
            return false;
        }
        if a.is_empty() {
            return true;
        }
        let doubled: Vec<i32> = a.letters.iter().chain(a.letters.iter()).copied().collect();
        doubled.windows(b.len()).any(|window| window == b.letters.as_slice())
    }

    /// Applies the homomorphism sending generator `i` to `images(i)`;
    /// the letter `-i` goes to the inverse of `images(i)`.
    pub fn substitute<F>(&self, out_rank: usize, images: F) -> Result<FWord, FreeGroupError>
    where
        F: Fn(usize) -> FWord,
    {
        let mut out = FWord::identity(out_rank);
        for &letter in &self.letters {
            let index = letter.unsigned_abs() as usize;
            let image = images(index);
            if image.rank() != out_rank {
                return Err(FreeGroupError::RankMismatch { expected: out_rank, found: image.rank() });
            }
            let piece = if letter > 0 { image } else { image.inverse() };
            out = out.concat(&piece)?;
        }
        Ok(out)
    }
}

impl std::fmt::Display for FWord {
    /// Renders as `x1 x2^-1 x1^2`, merging runs of one generator; the empty
    /// word renders as `1`.
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.letters.is_empty() {
            return write!(f, "1");
        }
        let mut first = true;
        let mut run_letter = self.letters[0];
        let mut run_count = 0i64;
        let emit = |letter: i32, count: i64, first: &mut bool, f: &mut std::fmt::Formatter<'_>| {
            if !*first {
                write!(f, " ")?;
            }
            *first = false;
            let exponent = count * letter.signum() as i64;
            if exponent == 1 {
                write!(f, "x{}", letter.unsigned_abs())
            } else {
                write!(f, "x{}^{}", letter.unsigned_abs(), exponent)
            }
        };
        for &letter in &self.letters {
            if letter == run_letter {
                run_count += 1;
            } else {
                emit(run_letter, run_count, &mut first, f)?;
                run_letter = letter;
                run_count = 1;
            }
        }
        emit(run_letter, run_count, &mut first, f)
    }
}

/// An automorphism of the free group, stored as certified image tables for
/// itself and its inverse.
#[derive(Debug, Clone)]
pub struct FAut {
    rank: usize,
    images: Vec<FWord>,
    inverse_images: Vec<FWord>,
}

impl PartialEq for FAut {
    fn eq(&self, other: &Self) -> bool {
        self.rank == other.rank && self.images == other.images
    }
}
impl Eq for FAut {}

impl FAut {
    /// The identity automorphism.
    pub fn identity(rank: usize) -> Self {
        let table: Vec<FWord> = (1..=rank)
            .map(|i| FWord::generator(rank, i).expect("generator in range"))
            .collect();
        FAut { rank, images: table.clone(), inverse_images: table }
    }

    /// Builds an automorphism from its image table and the image table of its
    /// inverse, verifying that they invert each other on every generator.
    pub fn new(
        rank: usize,
        images: Vec<FWord>,
        inverse_images: Vec<FWord>,
    ) -> Result<Self, FreeGroupError> {
        if images.len() != rank {
            return Err(FreeGroupError::TableSize { expected: rank, found: images.len() });
        }
        if inverse_images.len() != rank {
            return Err(FreeGroupError::TableSize { expected: rank, found: inverse_images.len() });
        }
        for table in [&images, &inverse_images] {
            for word in table {
                if word.rank() != rank {
                    return Err(FreeGroupError::RankMismatch { expected: rank, found: word.rank() });
                }
            }
        }
        let candidate = FAut { rank, images, inverse_images };
        for index in 1..=rank {
            let generator = FWord::generator(rank, index)?;
            if candidate.apply(&candidate.inverse_images[index - 1])? != generator
                || candidate.inv_apply(&candidate.images[index - 1])? != generator
            {
                return Err(FreeGroupError::NotInverse { generator: index });
            }
        }
        Ok(candidate)
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    /// Image of the 1-based generator `index`.
    pub fn image(&self, index: usize) -> &FWord {
        &self.images[index - 1]
    }

    /// Image of `index` under the inverse automorphism.
    pub fn inverse_image(&self, index: usize) -> &FWord {
        &self.inverse_images[index - 1]
    }

    /// Applies the automorphism to a word.
    pub fn apply(&self, word: &FWord) -> Result<FWord, FreeGroupError> {
        if word.rank() != self.rank {
            return Err(FreeGroupError::RankMismatch { expected: self.rank, found: word.rank() });
        }
        word.substitute(self.rank, |i| self.images[i - 1].clone())
    }

    /// Applies the inverse automorphism to a word.
    pub fn inv_apply(&self, word: &FWord) -> Result<FWord, FreeGroupError> {
        if word.rank() != self.rank {
            return Err(FreeGroupError::RankMismatch { expected: self.rank, found: word.rank() });
        }
        word.substitute(self.rank, |i| self.inverse_images[i - 1].clone())
    }

    /// Functional composition: `(self.compose(other))(w) = self(other(w))`.
    pub fn compose(&self, other: &FAut) -> Result<FAut, FreeGroupError> {
        if other.rank != self.rank {
            return Err(FreeGroupError::RankMismatch { expected: self.rank, found: other.rank });
        }
        let images = other
            .images
            .iter()
            .map(|w| self.apply(w))
            .collect::<Result<Vec<_>, _>>()?;
        let inverse_images = self
            .inverse_images
            .iter()
            .map(|w| other.inv_apply(w))
            .collect::<Result<Vec<_>, _>>()?;
        // Tables come from certified factors, so the certificate holds by
        // construction; re-checking here would make composition quadratic.
        Ok(FAut { rank: self.rank, images, inverse_images })
    }

    /// The inverse automorphism (a table swap).
    pub fn inverse(&self) -> FAut {
        FAut {
            rank: self.rank,
            images: self.inverse_images.clone(),
            inverse_images: self.images.clone(),
        }
    }

    pub fn is_identity(&self) -> bool {
        self.images
            .iter()
            .enumerate()
            .all(|(i, w)| w.letters() == [(i + 1) as i32])
    }

    /// Whether the automorphism fixes `word` exactly (not just up to
    /// conjugacy).
    pub fn fixes(&self, word: &FWord) -> Result<bool, FreeGroupError> {
        Ok(self.apply(word)? == *word)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(rank: usize, letters: &[i32]) -> FWord {
        FWord::from_letters(rank, letters).unwrap()
    }

    #[test]
    fn reduction_cancels_adjacent_inverses() {
        assert_eq!(w(2, &[1, 2, -2, -1]), FWord::identity(2));
        assert_eq!(w(2, &[1, 2, -2, 1]).letters(), &[1, 1]);
        assert_eq!(w(3, &[3, -1, 1, -3, 2]).letters(), &[2]);
    }

    #[test]
    fn rejects_letters_out_of_range() {
        assert_eq!(
            FWord::from_letters(2, &[3]),
            Err(FreeGroupError::LetterOutOfRange { letter: 3, rank: 2 })
        );
        assert_eq!(
            FWord::from_letters(2, &[0]),
            Err(FreeGroupError::LetterOutOfRange { letter: 0, rank: 2 })
        );
    }

    #[test]
    fn inverse_concat_is_identity() {
        let word = w(3, &[1, -2, 3, 3, -1]);
        assert!(word.concat(&word.inverse()).unwrap().is_empty());
        assert!(word.inverse().concat(&word).unwrap().is_empty());
    }

    #[test]
    fn conjugation_and_cyclic_reduction() {
        let core = w(2, &[1, 2]);
        let u = w(2, &[2, -1, 2]);
        let conj = core.conjugated_by(&u).unwrap();
        let (reduced, conjugator) = conj.cyclically_reduced();
        assert_eq!(
            reduced
                .conjugated_by(&conjugator)
                .unwrap(),
            conj
        );
        assert!(conj.is_conjugate(&core));
        assert!(core.is_conjugate(&conj));
        assert!(!core.is_conjugate(&w(2, &[1, -2])));
        assert!(!core.is_conjugate(&w(2, &[1])));
    }

    #[test]
    fn conjugacy_matches_rotations_only() {
        let a = w(2, &[1, 2, 1, -2]);
        for shift in 0..4 {
            let mut letters = a.letters().to_vec();
            letters.rotate_left(shift);
            assert!(a.is_conjugate(&w(2, &letters)));
        }
        // Same length, cyclically reduced, but no rotation matches.
        assert!(!a.is_conjugate(&w(2, &[1, 2, -1, 2])));
        assert!(!a.is_conjugate(&w(2, &[1, 2, -1, -2])));
    }

    #[test]
    fn exponent_sums_count_signed_occurrences() {
        assert_eq!(w(3, &[1, 1, -2, 3, 1, -3, -3]).exponent_sums(), vec![3, -1, -1]);
        assert_eq!(FWord::identity(2).exponent_sums(), vec![0, 0]);
    }

    #[test]
    fn display_merges_runs() {
        assert_eq!(w(2, &[1, 1, -2, -2, 1]).to_string(), "x1^2 x2^-2 x1");
        assert_eq!(FWord::identity(1).to_string(), "1");
        assert_eq!(w(2, &[-1]).to_string(), "x1^-1");
    }

    #[test]
    fn substitute_is_a_homomorphism() {
        let word = w(2, &[1, -2, 1]);
        let image = word
            .substitute(2, |i| match i {
                1 => w(2, &[1, 2]),
                _ => w(2, &[2]),
            })
            .unwrap();
        assert_eq!(image, w(2, &[1, 2, -2, 1, 2]));
        assert_eq!(image.letters(), &[1, 1, 2]);
    }

    #[test]
    fn aut_certificate_accepts_true_inverse_pairs() {
        // x1 -> x1 x2, x2 -> x2 with inverse x1 -> x1 x2^-1, x2 -> x2.
        let aut = FAut::new(
            2,
            vec![w(2, &[1, 2]), w(2, &[2])],
            vec![w(2, &[1, -2]), w(2, &[2])],
        )
        .unwrap();
        let probe = w(2, &[1, 1, -2]);
        assert_eq!(aut.inv_apply(&aut.apply(&probe).unwrap()).unwrap(), probe);
        assert_eq!(aut.apply(&aut.inv_apply(&probe).unwrap()).unwrap(), probe);
    }

    #[test]
    fn aut_certificate_rejects_mismatched_tables() {
        let err = FAut::new(
            2,
            vec![w(2, &[1, 2]), w(2, &[2])],
            vec![w(2, &[1, 2]), w(2, &[2])],
        )
        .unwrap_err();
        assert_eq!(err, FreeGroupError::NotInverse { generator: 1 });
    }

    #[test]
    fn compose_applies_right_factor_first() {
        // f: x1 -> x1 x2; g: x1 -> x2, x2 -> x1 (swap).
        let f = FAut::new(
            2,
            vec![w(2, &[1, 2]), w(2, &[2])],
            vec![w(2, &[1, -2]), w(2, &[2])],
        )
        .unwrap();
        let swap = FAut::new(
            2,
            vec![w(2, &[2]), w(2, &[1])],
            vec![w(2, &[2]), w(2, &[1])],
        )
        .unwrap();
        let fg = f.compose(&swap).unwrap();
        // (f . g)(x1) = f(g(x1)) = f(x2) = x2.
        assert_eq!(fg.image(1), &w(2, &[2]));
        // (f . g)(x2) = f(x1) = x1 x2.
        assert_eq!(fg.image(2), &w(2, &[1, 2]));
        let gf = swap.compose(&f).unwrap();
        assert_eq!(gf.image(1), &w(2, &[2, 1]));
        assert_ne!(fg, gf);
    }

    #[test]
    fn compose_with_inverse_is_identity() {
        let f = FAut::new(
            2,
            vec![w(2, &[1, 2]), w(2, &[2])],
            vec![w(2, &[1, -2]), w(2, &[2])],
        )
        .unwrap();
        assert!(f.compose(&f.inverse()).unwrap().is_identity());
        assert!(f.inverse().compose(&f).unwrap().is_identity());
    }

    #[test]
    fn aut_preserves_products() {
        let f = FAut::new(
            2,
            vec![w(2, &[1, 2]), w(2, &[-1])],
            vec![w(2, &[-2]), w(2, &[2, 1])],
        )
        .unwrap();
        let u = w(2, &[1, -2, 1]);
        let v = w(2, &[2, 2, -1]);
        let lhs = f.apply(&u.concat(&v).unwrap()).unwrap();
        let rhs = f.apply(&u).unwrap().concat(&f.apply(&v).unwrap()).unwrap();
        assert_eq!(lhs, rhs);
    }
}
