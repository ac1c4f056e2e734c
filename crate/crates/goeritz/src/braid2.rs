//! The two-point braid group of a disk with holes, acting on a free group.
//!
//! The model surface is a round disk with p−1 round holes in a row and two
//! marked points x₀, x₁ sitting left of the holes on the horizontal
//! diameter, in the order x₀, x₁, H₁, …, H_{p−1}. Counting the outer circle,
//! the surface has p boundary circles c₁, …, c_p (c_p is the outer one).
//!
//! Mapping classes act on the free group generated by u₀, u₁ (lassos about
//! the marked points) and c₁, …, c_p. The outer circle c_p is kept as a
//! formal generator so that the circle relation becomes the explicit word
//! u₀·u₁·c₁⋯c_{p−1}·c_p⁻¹, which every braid must fix letter for letter:
//! that single exact condition replaces working modulo a relation.
//!
//! All loops are traversed counterclockwise. The exposed generator set is
//! the rotor (half rotation of the pair x₀x₁ about the midpoint of the short
//! arc joining them), anchored twists (x₁ carried counterclockwise around
//! one hole, or clockwise for the derived sign), and freewheeling pair
//! pushes (x₀ and x₁ carried together around a hole). The generator tables
//! below are frozen output of tracing those motions on the lasso system;
//! the invariant suite plus the defining relation
//! anchored(1)⋯anchored(p) = rotor² over-determine their correctness.

use crate::freegroup::{FAut, FWord, FreeGroupError};
use thiserror::Error;

/// Errors from model construction, generator lookup, or composition.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum Braid2Error {
    /// The number of boundary circles must be at least 1.
    #[error("boundary circle count must be >= 1, got {0}")]
    BoundaryCountOutOfRange(usize),
    /// A generator index outside 1..=p.
    #[error("generator index {index} out of range 1..={max}")]
    IndexOutOfRange { index: usize, max: usize },
    /// Elements of different models were combined.
    #[error("mixed models: {expected} vs {found} boundary circles")]
    ModelMismatch { expected: usize, found: usize },
    /// A claimed pair push does not conjugate the point lasso.
    #[error("point-lasso image is not a positively oriented conjugate; not a pair push")]
    NotAPairPush,
    /// The automorphism moves the circle relation word.
    #[error("automorphism does not fix the circle relation word")]
    BoundaryWordMoved,
    /// Point lasso classes are inconsistent with the swap bit.
    #[error("point lasso classes are not permuted as the swap bit claims")]
    PointClassesBroken,
    /// A hole circle class is not preserved.
    #[error("conjugacy class of circle c{0} is not preserved")]
    HoleClassBroken(usize),
    #[error(transparent)]
    Free(#[from] FreeGroupError),
}

/// A disk with p−1 holes in a row and two marked points: the stage on which
/// the braids act. The free group has rank p+2.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PlanarModel {
    p: usize,
}

/// The exposed generator alphabet.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum B2Gen {
    /// Half rotation of the marked-point pair; the only generator that
    /// exchanges x₀ and x₁.
    Rotor,
    /// x₁ pushed around the i-th hole (around everything for i = p), with
    /// x₀ held fixed.
    Anchored(usize),
    /// The pair x₀x₁ pushed together around the i-th hole; for i = p the
    /// pair travels once around all of the holes. In the bare disk (p = 1)
    /// that enclosing loop slides off the outer boundary, so Freewheel(1)
    /// is the identity there.
    Freewheel(usize),
}

/// A braid: a certified free-group automorphism plus the bit recording
/// whether the marked points were exchanged.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Braid2Elt {
    model: PlanarModel,
    aut: FAut,
    swap: u8,
}

impl PlanarModel {
    pub fn new(p: usize) -> Result<Self, Braid2Error> {
        if p == 0 {
            return Err(Braid2Error::BoundaryCountOutOfRange(p));
        }
        Ok(PlanarModel { p })
    }

    /// Number of boundary circles, outer included.
    pub fn boundary_count(&self) -> usize {
        self.p
    }

    /// Rank of the acted-on free group: p circles plus two point lassos.
    pub fn rank(&self) -> usize {
        self.p + 2
    }

    /// Lasso about boundary circle i (1..=p; i = p is the outer circle).
    pub fn circle(&self, i: usize) -> Result<FWord, Braid2Error> {
        self.check_index(i)?;
        Ok(FWord::generator(self.rank(), i)?)
    }

    /// Lasso about the left marked point x₀.
    pub fn point0(&self) -> FWord {
        FWord::generator(self.rank(), self.p + 1).expect("in range")
    }

    /// Lasso about the right marked point x₁.
    pub fn point1(&self) -> FWord {
        FWord::generator(self.rank(), self.p + 2).expect("in range")
    }

    /// The circle relation u₀·u₁·c₁⋯c_{p−1}·c_p⁻¹: the product of lassos in
    /// row order equals the outer circle. Every braid fixes this word
    /// exactly.
    pub fn boundary_word(&self) -> FWord {
        let mut letters: Vec<i32> = vec![(self.p + 1) as i32, (self.p + 2) as i32];
        for i in 1..self.p {
            letters.push(i as i32);
        }
        letters.push(-(self.p as i32));
        FWord::from_letters(self.rank(), &letters).expect("in range")
    }

    fn check_index(&self, i: usize) -> Result<(), Braid2Error> {
        if i == 0 || i > self.p {
            return Err(Braid2Error::IndexOutOfRange { index: i, max: self.p });
        }
        Ok(())
    }

    /// Generator indices of the row lassos, left to right:
    /// u₀, u₁, c₁, …, c_{p−1}.
    fn row_lassos(&self) -> Vec<i32> {
        let mut lassos = vec![(self.p + 1) as i32, (self.p + 2) as i32];
        for i in 1..self.p {
            lassos.push(i as i32);
        }
        lassos
    }

    /// The identity braid.
    pub fn identity(&self) -> Braid2Elt {
        Braid2Elt { model: *self, aut: FAut::identity(self.rank()), swap: 0 }
    }

    /// Builds a named generator, validating every braid invariant.
    pub fn generator(&self, gen: B2Gen) -> Result<Braid2Elt, Braid2Error> {
        let elt = match gen {
            B2Gen::Rotor => Braid2Elt {
                model: *self,
                aut: artin_twist(self.rank(), &self.row_lassos(), 1)?,
                swap: 1,
            },
            B2Gen::Anchored(i) => {
                self.check_index(i)?;
                let aut = if i < self.p {
                    self.hole_twist(i)?.inverse()
                } else {
                    // Pushing x₁ counterclockwise around everything: the
                    // pair twist preceded by one full twist with each hole.
                    let sigma1 = artin_twist(self.rank(), &self.row_lassos(), 1)?;
                    let mut acc = sigma1.compose(&sigma1)?;
                    for j in 1..self.p {
                        acc = self.hole_twist(j)?.compose(&acc)?;
                    }
                    acc
                };
                Braid2Elt { model: *self, aut, swap: 0 }
            }
            B2Gen::Freewheel(i) => {
                self.check_index(i)?;
                let small = SmallModel { p: self.p };
                let small_aut = if i < self.p {
                    small.hole_twist(i)?.inverse()
                } else {
                    let mut acc = FAut::identity(small.rank());
                    for j in 1..self.p {
                        acc = small.hole_twist(j)?.compose(&acc)?;
                    }
                    acc
                };
                Braid2Elt { model: *self, aut: lift_pair_push(self.p, &small_aut)?, swap: 0 }
            }
        };
        elt.validate()?;
        Ok(elt)
    }

    /// Counterclockwise full twist of x₁ with hole i (1..=p−1): the lasso
    /// chain conjugation of the squared elementary twist.
    fn hole_twist(&self, i: usize) -> Result<FAut, Braid2Error> {
        full_twist(self.rank(), &self.row_lassos(), 2, 2 + i)
    }

    /// Evaluates a word of signed generators left to right, so the first
    /// letter is the outermost map when the result acts on the free group.
    pub fn evaluate<I>(&self, word: I) -> Result<Braid2Elt, Braid2Error>
    where
        I: IntoIterator<Item = (B2Gen, i32)>,
    {
        let mut acc = self.identity();
        for (gen, exponent) in word {
            acc = acc.compose(&self.generator(gen)?.pow(exponent)?)?;
        }
        Ok(acc)
    }
}

/// The one-point companion model used to build pair pushes: a disk with the
/// same p−1 holes and a single point y where the pair used to be. Free rank
/// p+1: circles ĉ₁…ĉ_p (index 1..p), point lasso u_y (index p+1).
struct SmallModel {
    p: usize,
}

impl SmallModel {
    fn rank(&self) -> usize {
        self.p + 1
    }

    fn row_lassos(&self) -> Vec<i32> {
        let mut lassos = vec![(self.p + 1) as i32];
        for i in 1..self.p {
            lassos.push(i as i32);
        }
        lassos
    }

    /// Counterclockwise full twist of y with hole i.
    fn hole_twist(&self, i: usize) -> Result<FAut, Braid2Error> {
        full_twist(self.rank(), &self.row_lassos(), 1, 1 + i)
    }
}

/// The elementary counterclockwise half twist exchanging row objects j and
/// j+1. With z_j, z_{j+1} the lassos of the two objects: z_j ↦ z_j z_{j+1}
/// z_j⁻¹ and z_{j+1} ↦ z_j; every other generator is fixed. The product
/// z_j·z_{j+1} is fixed, which is why the circle relation word survives.
fn artin_twist(rank: usize, lassos: &[i32], j: usize) -> Result<FAut, Braid2Error> {
    if j == 0 || j >= lassos.len() {
        return Err(Braid2Error::IndexOutOfRange { index: j, max: lassos.len() - 1 });
    }
    let zj = lassos[j - 1];
    let zk = lassos[j];
    let mut images: Vec<FWord> = Vec::with_capacity(rank);
    let mut inverse_images: Vec<FWord> = Vec::with_capacity(rank);
    for index in 1..=rank as i32 {
        if index == zj {
            images.push(FWord::from_letters(rank, &[zj, zk, -zj])?);
            inverse_images.push(FWord::from_letters(rank, &[zk])?);
        } else if index == zk {
            images.push(FWord::from_letters(rank, &[zj])?);
            inverse_images.push(FWord::from_letters(rank, &[-zk, zj, zk])?);
        } else {
            images.push(FWord::from_letters(rank, &[index])?);
            inverse_images.push(FWord::from_letters(rank, &[index])?);
        }
    }
    Ok(FAut::new(rank, images, inverse_images)?)
}

/// Counterclockwise full twist of the objects at row positions r < s: bring
/// s next to r by elementary twists, square the elementary twist there, and
/// bring it back.
fn full_twist(rank: usize, lassos: &[i32], r: usize, s: usize) -> Result<FAut, Braid2Error> {
    assert!(r < s, "full twist needs r < s");
    let sigma_r = artin_twist(rank, lassos, r)?;
    let square = sigma_r.compose(&sigma_r)?;
    let mut chain = FAut::identity(rank);
    for j in (r + 1)..s {
        chain = artin_twist(rank, lassos, j)?.compose(&chain)?;
    }
    Ok(chain.compose(&square)?.compose(&chain.inverse())?)
}

/// Splits a reduced conjugate v·core·v⁻¹ of the single-letter word `core`
/// into its conjugator v. Returns None when the word is not of that shape.
fn peel_conjugator(word: &FWord, core: i32) -> Option<FWord> {
    let letters = word.letters();
    if letters.len() % 2 == 0 {
        return None;
    }
    let mid = letters.len() / 2;
    if letters[mid] != core {
        return None;
    }
    for t in 0..mid {
        if letters[t] != -letters[letters.len() - 1 - t] {
            return None;
        }
    }
    FWord::from_letters(word.rank(), &letters[..mid]).ok()
}

/// Transplants a pair push from the one-point model to the two-point model.
///
/// The embedding sends ĉᵢ ↦ cᵢ and the point lasso u_y ↦ u₀u₁ (a small
/// circle around y expands to one enclosing both points). A pair push moves
/// that circle around a loop w, so its one-point automorphism sends
/// u_y ↦ w·u_y·w⁻¹; in the two-point model both u₀ and u₁ are conjugated by
/// the transplanted w while each ĉᵢ-image transfers verbatim.
///
/// The inverse table must use the conjugator sub(φ⁻¹(w))⁻¹ rather than an
/// independently extracted holonomy of φ⁻¹: a holonomy is only determined
/// up to powers of u_y, and only this choice is compatible with the forward
/// table (it is forced by Φ∘sub = sub∘φ). The result is re-certified.
fn lift_pair_push(p: usize, small: &FAut) -> Result<FAut, Braid2Error> {
    let rank_small = p + 1;
    let rank_big = p + 2;
    debug_assert_eq!(small.rank(), rank_small);
    let sub = |w: &FWord| -> Result<FWord, FreeGroupError> {
        w.substitute(rank_big, |i| {
            if i <= p {
                FWord::generator(rank_big, i).expect("in range")
            } else {
                FWord::from_letters(rank_big, &[(p + 1) as i32, (p + 2) as i32]).expect("in range")
            }
        })
    };
    let point = rank_small as i32;
    let holonomy = peel_conjugator(small.image(rank_small), point).ok_or(Braid2Error::NotAPairPush)?;
    let conj_fwd = sub(&holonomy)?;
    let conj_bwd = sub(&small.inv_apply(&holonomy)?)?.inverse();
    let mut images = Vec::with_capacity(rank_big);
    let mut inverse_images = Vec::with_capacity(rank_big);
    for i in 1..=p {
        images.push(sub(small.image(i))?);
        inverse_images.push(sub(small.inverse_image(i))?);
    }
    for point_index in [p + 1, p + 2] {
        let u = FWord::generator(rank_big, point_index)?;
        images.push(u.conjugated_by(&conj_fwd)?);
        inverse_images.push(u.conjugated_by(&conj_bwd)?);
    }
    Ok(FAut::new(rank_big, images, inverse_images)?)
}

impl Braid2Elt {
    pub fn model(&self) -> PlanarModel {
        self.model
    }

    /// The underlying free-group automorphism.
    pub fn aut(&self) -> &FAut {
        &self.aut
    }

    /// 1 when the braid exchanges the two marked points.
    pub fn parity(&self) -> u8 {
        self.swap
    }

    /// Functional composition: `x.compose(y)` acts as x after y on loops.
    pub fn compose(&self, other: &Braid2Elt) -> Result<Braid2Elt, Braid2Error> {
        if self.model != other.model {
            return Err(Braid2Error::ModelMismatch {
                expected: self.model.p,
                found: other.model.p,
            });
        }
        Ok(Braid2Elt {
            model: self.model,
            aut: self.aut.compose(&other.aut)?,
            swap: (self.swap + other.swap) % 2,
        })
    }

    pub fn inverse(&self) -> Braid2Elt {
        Braid2Elt { model: self.model, aut: self.aut.inverse(), swap: self.swap }
    }

    /// Signed power by repeated composition.
    pub fn pow(&self, exponent: i32) -> Result<Braid2Elt, Braid2Error> {
        let base = if exponent < 0 { self.inverse() } else { self.clone() };
        let mut acc = self.model.identity();
        for _ in 0..exponent.unsigned_abs() {
            acc = acc.compose(&base)?;
        }
        Ok(acc)
    }

    pub fn is_identity(&self) -> bool {
        self.swap == 0 && self.aut.is_identity()
    }

    /// Image of a loop under the braid.
    pub fn apply(&self, loop_word: &FWord) -> Result<FWord, Braid2Error> {
        Ok(self.aut.apply(loop_word)?)
    }

    /// Checks every structural invariant: the circle relation word is fixed
    /// exactly, the point lasso classes are permuted as the swap bit says,
    /// and each circle class is preserved.
    pub fn validate(&self) -> Result<(), Braid2Error> {
        let model = &self.model;
        if !self.aut.fixes(&model.boundary_word())? {
            return Err(Braid2Error::BoundaryWordMoved);
        }
        let u0 = model.point0();
        let u1 = model.point1();
        let (expect0, expect1) = if self.swap == 0 { (&u0, &u1) } else { (&u1, &u0) };
        if !self.aut.apply(&u0)?.is_conjugate(expect0) || !self.aut.apply(&u1)?.is_conjugate(expect1) {
            return Err(Braid2Error::PointClassesBroken);
        }
        for i in 1..=model.p {
            let c = model.circle(i)?;
            if !self.aut.apply(&c)?.is_conjugate(&c) {
                return Err(Braid2Error::HoleClassBroken(i));
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(rank: usize, letters: &[i32]) -> FWord {
        FWord::from_letters(rank, letters).unwrap()
    }

    #[test]
    fn rotor_exchanges_point_lassos() {
        // p = 2, rank 4: c1=1, c2=2, u0=3, u1=4.
        let model = PlanarModel::new(2).unwrap();
        let rotor = model.generator(B2Gen::Rotor).unwrap();
        assert_eq!(rotor.parity(), 1);
        assert_eq!(rotor.apply(&model.point0()).unwrap(), w(4, &[3, 4, -3]));
        assert_eq!(rotor.apply(&model.point1()).unwrap(), w(4, &[3]));
        assert_eq!(rotor.apply(&model.circle(1).unwrap()).unwrap(), w(4, &[1]));
    }

    #[test]
    fn anchored_twist_conjugates_crossed_circles_only() {
        let model = PlanarModel::new(2).unwrap();
        let a1 = model.generator(B2Gen::Anchored(1)).unwrap();
        assert_eq!(a1.parity(), 0);
        // x0 is untouched: the twist happens entirely to its right.
        assert_eq!(a1.apply(&model.point0()).unwrap(), w(4, &[3]));
        // The x1 lasso comes back conjugated by the hole circle.
        assert_eq!(a1.apply(&model.point1()).unwrap(), w(4, &[-1, 4, 1]));
        a1.validate().unwrap();
    }

    #[test]
    fn freewheel_conjugates_both_points_together() {
        let model = PlanarModel::new(2).unwrap();
        let f1 = model.generator(B2Gen::Freewheel(1)).unwrap();
        assert_eq!(f1.parity(), 0);
        assert_eq!(f1.apply(&model.point0()).unwrap(), w(4, &[-1, 3, 1]));
        assert_eq!(f1.apply(&model.point1()).unwrap(), w(4, &[-1, 4, 1]));
        // c1 is rewritten through the pair circle u0u1c1 but keeps its class.
        assert_eq!(
            f1.apply(&model.circle(1).unwrap()).unwrap(),
            w(4, &[-1, -4, -3, 1, 3, 4, 1])
        );
        assert_eq!(f1.apply(&model.circle(2).unwrap()).unwrap(), w(4, &[2]));
        f1.validate().unwrap();
    }

    #[test]
    fn enclosing_freewheel_slides_off_only_in_the_bare_disk() {
        let disk = PlanarModel::new(1).unwrap();
        assert!(disk.generator(B2Gen::Freewheel(1)).unwrap().is_identity());
        // With a hole present the enclosing loop is pinned.
        let holed = PlanarModel::new(2).unwrap();
        assert!(!holed.generator(B2Gen::Freewheel(2)).unwrap().is_identity());
    }

    #[test]
    fn anchored_product_equals_rotor_squared() {
        for p in 1..=4 {
            let model = PlanarModel::new(p).unwrap();
            let rotor = model.generator(B2Gen::Rotor).unwrap();
            let mut product = model.identity();
            for i in 1..=p {
                product = product.compose(&model.generator(B2Gen::Anchored(i)).unwrap()).unwrap();
            }
            assert_eq!(product, rotor.compose(&rotor).unwrap(), "p = {p}");
        }
    }

    #[test]
    fn rotor_powers_are_nontrivial_in_the_disk() {
        let model = PlanarModel::new(1).unwrap();
        let rotor = model.generator(B2Gen::Rotor).unwrap();
        let mut acc = model.identity();
        for k in 1..=20 {
            acc = acc.compose(&rotor).unwrap();
            assert!(!acc.is_identity(), "rotor^{k} must not be the identity");
            assert_eq!(acc.parity(), (k % 2) as u8);
        }
    }

    #[test]
    fn parity_is_a_homomorphism_and_swap_composes() {
        let model = PlanarModel::new(3).unwrap();
        let gens = [
            model.generator(B2Gen::Rotor).unwrap(),
            model.generator(B2Gen::Anchored(2)).unwrap(),
            model.generator(B2Gen::Freewheel(1)).unwrap(),
        ];
        for x in &gens {
            for y in &gens {
                let xy = x.compose(y).unwrap();
                assert_eq!(xy.parity(), (x.parity() + y.parity()) % 2);
            }
        }
    }

    #[test]
    fn generators_validate_for_several_models() {
        for p in 1..=4 {
            let model = PlanarModel::new(p).unwrap();
            model.generator(B2Gen::Rotor).unwrap().validate().unwrap();
            for i in 1..=p {
                model.generator(B2Gen::Anchored(i)).unwrap().validate().unwrap();
                model.generator(B2Gen::Freewheel(i)).unwrap().validate().unwrap();
            }
        }
    }

    #[test]
    fn validate_rejects_a_wrong_swap_bit() {
        let model = PlanarModel::new(2).unwrap();
        let mut rotor = model.generator(B2Gen::Rotor).unwrap();
        rotor.swap = 0;
        assert_eq!(rotor.validate(), Err(Braid2Error::PointClassesBroken));
    }

    #[test]
    fn lift_rejects_non_pair_pushes() {
        // u_y ↦ u_y·ĉ₁ is an automorphism but no conjugation of u_y.
        let p = 2;
        let rank = p + 1;
        let images = vec![w(rank, &[1]), w(rank, &[2]), w(rank, &[3, 1])];
        let inverse_images = vec![w(rank, &[1]), w(rank, &[2]), w(rank, &[3, -1])];
        let aut = FAut::new(rank, images, inverse_images).unwrap();
        assert_eq!(lift_pair_push(p, &aut).unwrap_err(), Braid2Error::NotAPairPush);
    }

    #[test]
    fn evaluate_folds_left_to_right() {
        let model = PlanarModel::new(2).unwrap();
        let rotor = model.generator(B2Gen::Rotor).unwrap();
        let a1 = model.generator(B2Gen::Anchored(1)).unwrap();
        let word = model
            .evaluate([(B2Gen::Rotor, 1), (B2Gen::Anchored(1), 1)])
            .unwrap();
        assert_eq!(word, rotor.compose(&a1).unwrap());
        assert_ne!(word, a1.compose(&rotor).unwrap());
        let inverse_pair = model
            .evaluate([(B2Gen::Anchored(1), 1), (B2Gen::Anchored(1), -1)])
            .unwrap();
        assert!(inverse_pair.is_identity());
    }

    #[test]
    fn pow_matches_repeated_composition() {
        let model = PlanarModel::new(2).unwrap();
        let rotor = model.generator(B2Gen::Rotor).unwrap();
        assert_eq!(rotor.pow(2).unwrap(), rotor.compose(&rotor).unwrap());
        assert_eq!(rotor.pow(-1).unwrap(), rotor.inverse());
        assert!(rotor.pow(0).unwrap().is_identity());
        assert!(rotor.pow(3).unwrap().compose(&rotor.pow(-3).unwrap()).unwrap().is_identity());
    }

    #[test]
    fn iterated_relation_uses_the_interleaved_product() {
        // rotor^{2k} equals (anchored(1)⋯anchored(p))^k.
        let model = PlanarModel::new(3).unwrap();
        let rotor = model.generator(B2Gen::Rotor).unwrap();
        let mut prod = model.identity();
        for i in 1..=3 {
            prod = prod.compose(&model.generator(B2Gen::Anchored(i)).unwrap()).unwrap();
        }
        for k in 1..=3i32 {
            assert_eq!(rotor.pow(2 * k).unwrap(), prod.pow(k).unwrap());
        }
    }
}
