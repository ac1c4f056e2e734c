//! Word calculus for the motion group of a trivial arc in a handlebody.
//!
//! A genus-g handlebody H carries a boundary-parallel arc I₀ with endpoints
//! x₀, x₁ on ∂H. Moving the arc through H and back to itself, rel boundary,
//! gives a group generated by 4g+1 moves:
//!
//! * anchored slides `A(i)`, `A'(i)` (i in 1..=g) drag the endpoint at x₁
//!   around a committed loop γ̂ᵢ or γ̂ᵢ′ and return it;
//! * the rotor `r` spins the two endpoints half a turn inside a small disk,
//!   swapping them;
//! * freewheeling moves `F(j)` (j in 1..=2g) carry the whole parallelism
//!   disk around a committed boundary loop ĉⱼ and back.
//!
//! The observable tracked here is the terminal-arc class: the surface-group
//! class of α₀⁻¹·α_ω (reference arc against moved arc), read from the
//! endpoint currently at x₀ to the endpoint at x₁, together with a parity
//! bit recording whether the ends are swapped. Words act through [`tau`]
//! (rightmost generator first, so written words compose like functions);
//! [`factor`] solves for an anchored word hitting a given arc class, and
//! [`decompose`] splits any word into that anchored prefix times a residual
//! that fixes the arc.
//!
//! All loop tables are committed literal data over the standard surface
//! alphabet and are certified by the invariant tests at the bottom of this
//! file, not asserted as the only possible reading of the pictures they
//! come from.
//!
//! [`tau`]: HandlebodyModel::tau
//! [`factor`]: HandlebodyModel::factor
//! [`decompose`]: HandlebodyModel::decompose

use crate::freegroup::FWord;
use crate::surface::{self, SurfaceError, SurfaceGroup, SurfaceWord};
use thiserror::Error;

/// Errors from handlebody-model construction, arc moves, or word parsing.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum GoeritzError {
    /// Genus must be at least 1.
    #[error("genus must be >= 1, got {0}")]
    GenusOutOfRange(usize),
    /// A word or arc built for one genus was used with another.
    #[error("genus mismatch: expected {expected}, found {found}")]
    GenusMismatch { expected: usize, found: usize },
    /// A generator index outside the model's range.
    #[error("generator index {index} out of range 1..={max}")]
    IndexOutOfRange { index: usize, max: usize },
    /// Text input that does not follow the `a1 a1' r f2` grammar.
    #[error("parse error at byte {offset}: {message}")]
    Parse { offset: usize, message: String },
    #[error(transparent)]
    Surface(#[from] SurfaceError),
    #[error(transparent)]
    Free(#[from] crate::freegroup::FreeGroupError),
}

/// One of the 4g+1 generating moves.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum GenKind {
    /// `A(i)`: slide the x₁ endpoint around γ̂ᵢ, 1 ≤ i ≤ g.
    Anchored(usize),
    /// `A'(i)`: slide the x₁ endpoint around γ̂ᵢ′, 1 ≤ i ≤ g.
    AnchoredPrime(usize),
    /// `r`: half-turn of the endpoint pair; swaps the ends.
    Rotor,
    /// `F(j)`: carry the parallelism disk around ĉⱼ, 1 ≤ j ≤ 2g.
    Freewheel(usize),
}

/// A generating move with a sign exponent ±1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct GoeritzGen {
    pub kind: GenKind,
    pub sign: i8,
}

impl GoeritzGen {
    pub fn new(kind: GenKind, sign: i8) -> Self {
        debug_assert!(sign == 1 || sign == -1);
        GoeritzGen { kind, sign: if sign >= 0 { 1 } else { -1 } }
    }

    pub fn anchored(i: usize) -> Self {
        Self::new(GenKind::Anchored(i), 1)
    }

    pub fn anchored_prime(i: usize) -> Self {
        Self::new(GenKind::AnchoredPrime(i), 1)
    }

    pub fn rotor() -> Self {
        Self::new(GenKind::Rotor, 1)
    }

    pub fn freewheel(j: usize) -> Self {
        Self::new(GenKind::Freewheel(j), 1)
    }

    pub fn inverse(self) -> Self {
        GoeritzGen { kind: self.kind, sign: -self.sign }
    }
}

impl std::fmt::Display for GoeritzGen {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", gen_base(self.kind))?;
        if self.sign < 0 {
            write!(f, "^-1")?;
        }
        Ok(())
    }
}

fn gen_base(kind: GenKind) -> String {
    match kind {
        GenKind::Anchored(i) => format!("a{i}"),
        GenKind::AnchoredPrime(i) => format!("a{i}'"),
        GenKind::Rotor => "r".to_string(),
        GenKind::Freewheel(j) => format!("f{j}"),
    }
}

/// A formal sequence of generating moves for a fixed genus.
///
/// Words are kept literally as written; nothing cancels on construction.
/// [`reduced`](GoeritzWord::reduced) removes adjacent formal inverse pairs
/// when a canonical-ish representative is wanted.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GoeritzWord {
    genus: usize,
    gens: Vec<GoeritzGen>,
}

impl GoeritzWord {
    /// Builds a word after range-checking every generator index.
    pub fn new(genus: usize, gens: Vec<GoeritzGen>) -> Result<Self, GoeritzError> {
        if genus == 0 {
            return Err(GoeritzError::GenusOutOfRange(genus));
        }
        for gen in &gens {
            check_gen(genus, *gen)?;
        }
        Ok(GoeritzWord { genus, gens })
    }

    pub fn empty(genus: usize) -> Result<Self, GoeritzError> {
        Self::new(genus, Vec::new())
    }

    pub fn genus(&self) -> usize {
        self.genus
    }

    pub fn gens(&self) -> &[GoeritzGen] {
        &self.gens
    }

    pub fn len(&self) -> usize {
        self.gens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gens.is_empty()
    }

    pub fn push(&mut self, gen: GoeritzGen) -> Result<(), GoeritzError> {
        check_gen(self.genus, gen)?;
        self.gens.push(gen);
        Ok(())
    }

    /// Concatenation as formal words; nothing cancels.
    pub fn concat(&self, other: &GoeritzWord) -> Result<GoeritzWord, GoeritzError> {
        if other.genus != self.genus {
            return Err(GoeritzError::GenusMismatch { expected: self.genus, found: other.genus });
        }
        let mut gens = self.gens.clone();
        gens.extend_from_slice(&other.gens);
        Ok(GoeritzWord { genus: self.genus, gens })
    }

    /// The formal inverse: reversed order, every sign flipped.
    pub fn inverse_word(&self) -> GoeritzWord {
        let gens = self.gens.iter().rev().map(|g| g.inverse()).collect();
        GoeritzWord { genus: self.genus, gens }
    }

    /// Cancels adjacent formal inverse pairs (same kind, opposite sign)
    /// until none remain. Only formal cancellation: `r·r` stays put even
    /// though the rotor squares to an arc-fixing move.
    pub fn reduced(&self) -> GoeritzWord {
        let mut stack: Vec<GoeritzGen> = Vec::with_capacity(self.gens.len());
        for &gen in &self.gens {
            match stack.last() {
                Some(top) if top.kind == gen.kind && top.sign == -gen.sign => {
                    stack.pop();
                }
                _ => stack.push(gen),
            }
        }
        GoeritzWord { genus: self.genus, gens: stack }
    }

    /// Parses the whitespace-separated `a1 a2' r f3` grammar.
    ///
    /// Tokens are `a<i>`, `a<i>'`, `r`, or `f<j>`, each optionally followed
    /// by `^<integer>`; an exponent of magnitude > 1 expands into repeated
    /// generators. The bare token `1` stands for the empty word. Errors
    /// carry the byte offset of the offending token.
    pub fn parse(genus: usize, text: &str) -> Result<GoeritzWord, GoeritzError> {
        if genus == 0 {
            return Err(GoeritzError::GenusOutOfRange(genus));
        }
        let mut gens: Vec<GoeritzGen> = Vec::new();
        for (offset, token) in surface::tokenize(text) {
            let (head, exponent) = match surface::split_exponent(token, offset) {
                Ok(pair) => pair,
                Err(SurfaceError::Parse { offset, message }) => {
                    return Err(GoeritzError::Parse { offset, message })
                }
                Err(other) => return Err(other.into()),
            };
            if head == "1" {
                continue;
            }
            let kind = parse_gen_kind(genus, head, token, offset)?;
            let sign = if exponent >= 0 { 1 } else { -1 };
            for _ in 0..exponent.unsigned_abs() {
                gens.push(GoeritzGen::new(kind, sign));
            }
        }
        GoeritzWord::new(genus, gens)
    }
}

fn parse_gen_kind(
    genus: usize,
    head: &str,
    token: &str,
    offset: usize,
) -> Result<GenKind, GoeritzError> {
    if head == "r" {
        return Ok(GenKind::Rotor);
    }
    let mut chars = head.chars();
    let lead = chars.next();
    let rest = chars.as_str();
    let (family, prime) = match lead {
        Some('a') if rest.ends_with('\'') => ('a', true),
        Some('a') => ('a', false),
        Some('f') => ('f', false),
        _ => {
            return Err(GoeritzError::Parse {
                offset,
                message: format!("unknown token `{token}`, expected a<i>, a<i>', r, or f<j>"),
            })
        }
    };
    let digits = if prime { &rest[..rest.len() - 1] } else { rest };
    let index: usize = digits.parse().map_err(|_| GoeritzError::Parse {
        offset,
        message: format!("bad generator index in `{token}`"),
    })?;
    let max = if family == 'a' { genus } else { 2 * genus };
    if index == 0 || index > max {
        return Err(GoeritzError::Parse {
            offset,
            message: format!("index must be in 1..={max}, got {index}"),
        });
    }
    Ok(match (family, prime) {
        ('a', false) => GenKind::Anchored(index),
        ('a', true) => GenKind::AnchoredPrime(index),
        _ => GenKind::Freewheel(index),
    })
}

impl std::fmt::Display for GoeritzWord {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.gens.is_empty() {
            return write!(f, "1");
        }
        let mut parts: Vec<String> = Vec::new();
        let mut run: Option<(GenKind, i8, i64)> = None;
        let emit = |entry: (GenKind, i8, i64), parts: &mut Vec<String>| {
            let (kind, sign, count) = entry;
            let exponent = sign as i64 * count;
            if exponent == 1 {
                parts.push(gen_base(kind));
            } else {
                parts.push(format!("{}^{}", gen_base(kind), exponent));
            }
        };
        for gen in &self.gens {
            match run {
                Some((kind, sign, count)) if kind == gen.kind && sign == gen.sign => {
                    run = Some((kind, sign, count + 1));
                }
                Some(entry) => {
                    emit(entry, &mut parts);
                    run = Some((gen.kind, gen.sign, 1));
                }
                None => run = Some((gen.kind, gen.sign, 1)),
            }
        }
        if let Some(entry) = run {
            emit(entry, &mut parts);
        }
        write!(f, "{}", parts.join(" "))
    }
}

fn check_gen(genus: usize, gen: GoeritzGen) -> Result<(), GoeritzError> {
    if gen.sign != 1 && gen.sign != -1 {
        return Err(GoeritzError::Parse {
            offset: 0,
            message: format!("generator sign must be ±1, got {}", gen.sign),
        });
    }
    match gen.kind {
        GenKind::Anchored(i) | GenKind::AnchoredPrime(i) => {
            if i == 0 || i > genus {
                return Err(GoeritzError::IndexOutOfRange { index: i, max: genus });
            }
        }
        GenKind::Freewheel(j) => {
            if j == 0 || j > 2 * genus {
                return Err(GoeritzError::IndexOutOfRange { index: j, max: 2 * genus });
            }
        }
        GenKind::Rotor => {}
    }
    Ok(())
}

/// The terminal-arc observable: a surface-group class and an end-swap bit.
///
/// `w` is the class of α₀⁻¹·α_ω read from the endpoint currently at x₀ to
/// the endpoint currently at x₁; `parity` is 1 when the ends are swapped.
/// Equality of the struct is representative-level; use
/// [`HandlebodyModel::arc_eq`] for group-level comparison.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ArcClass {
    w: SurfaceWord,
    parity: u8,
}

impl ArcClass {
    pub fn new(w: SurfaceWord, swapped: bool) -> Self {
        ArcClass { w, parity: swapped as u8 }
    }

    /// The normalized surface-group class of the moved arc against the
    /// reference arc.
    pub fn w(&self) -> &SurfaceWord {
        &self.w
    }

    /// 0 when the endpoints sit at their home positions, 1 when swapped.
    pub fn parity(&self) -> u8 {
        self.parity
    }
}

impl std::fmt::Display for ArcClass {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({}, {})", self.w, self.parity)
    }
}

/// One factor of a product of γ̂-loops: γ̂ᵢ^±1 or γ̂ᵢ′^±1.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GammaRef {
    pub index: usize,
    pub prime: bool,
    pub sign: i8,
}

/// The loop a freewheeling move follows, with the meridian disks it crosses.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LoopData {
    /// Boundary loop ĉⱼ over the standard surface alphabet.
    pub boundary: FWord,
    /// Meridian crossings in loop order: (disk index 1..=g, sign).
    pub crossings: Vec<(usize, i8)>,
}

/// A genus-g handlebody with its committed disk system and loop tables.
///
/// The tables are literal data: the slide loops γ̂ᵢ = aᵢ, γ̂ᵢ′ = bᵢ, a basis
/// table expressing each standard surface generator as a product of slide
/// loops, and for each freewheeling move the boundary loop ĉⱼ it follows
/// together with its meridian crossing list (ĉ₂ᵢ₋₁ = aᵢ crosses nothing,
/// ĉ₂ᵢ = bᵢ crosses disk i once).
#[derive(Debug, Clone)]
pub struct HandlebodyModel {
    genus: usize,
    group: SurfaceGroup,
    gamma: Vec<FWord>,
    gamma_prime: Vec<FWord>,
    basis: Vec<Vec<GammaRef>>,
    loops: Vec<LoopData>,
}

impl HandlebodyModel {
    pub fn new(genus: usize) -> Result<Self, GoeritzError> {
        if genus == 0 {
            return Err(GoeritzError::GenusOutOfRange(genus));
        }
        let group = SurfaceGroup::new(genus)?;
        let mut gamma = Vec::with_capacity(genus);
        let mut gamma_prime = Vec::with_capacity(genus);
        let mut basis = Vec::with_capacity(2 * genus);
        let mut loops = Vec::with_capacity(2 * genus);
        for i in 1..=genus {
            gamma.push(group.a(i)?);
            gamma_prime.push(group.b(i)?);
            // Letter 2i-1 = aᵢ is the slide loop γ̂ᵢ itself; letter 2i = bᵢ
            // is γ̂ᵢ′.
            basis.push(vec![GammaRef { index: i, prime: false, sign: 1 }]);
            basis.push(vec![GammaRef { index: i, prime: true, sign: 1 }]);
            loops.push(LoopData { boundary: group.a(i)?, crossings: vec![] });
            loops.push(LoopData { boundary: group.b(i)?, crossings: vec![(i, 1)] });
        }
        Ok(HandlebodyModel { genus, group, gamma, gamma_prime, basis, loops })
    }

    pub fn genus(&self) -> usize {
        self.genus
    }

    /// The boundary surface group used to normalize arc classes.
    pub fn group(&self) -> &SurfaceGroup {
        &self.group
    }

    /// The slide loop γ̂ᵢ for `A(i)`, 1 ≤ i ≤ genus.
    pub fn gamma(&self, i: usize) -> Result<FWord, GoeritzError> {
        self.check_handle(i)?;
        Ok(self.gamma[i - 1].clone())
    }

    /// The slide loop γ̂ᵢ′ for `A'(i)`, 1 ≤ i ≤ genus.
    pub fn gamma_prime(&self, i: usize) -> Result<FWord, GoeritzError> {
        self.check_handle(i)?;
        Ok(self.gamma_prime[i - 1].clone())
    }

    /// The committed expression of surface letter `letter` (1..=2g, sign
    /// ignored) as a product of slide loops.
    pub fn basis_refs(&self, letter: usize) -> Result<&[GammaRef], GoeritzError> {
        if letter == 0 || letter > 2 * self.genus {
            return Err(GoeritzError::IndexOutOfRange { index: letter, max: 2 * self.genus });
        }
        Ok(&self.basis[letter - 1])
    }

    /// The loop ĉⱼ the freewheeling move `F(j)` follows, 1 ≤ j ≤ 2g.
    pub fn boundary_loop(&self, j: usize) -> Result<&LoopData, GoeritzError> {
        if j == 0 || j > 2 * self.genus {
            return Err(GoeritzError::IndexOutOfRange { index: j, max: 2 * self.genus });
        }
        Ok(&self.loops[j - 1])
    }

    fn check_handle(&self, i: usize) -> Result<(), GoeritzError> {
        if i == 0 || i > self.genus {
            return Err(GoeritzError::IndexOutOfRange { index: i, max: self.genus });
        }
        Ok(())
    }

    /// The untouched reference arc: trivial class, ends at home.
    pub fn reference_arc(&self) -> ArcClass {
        ArcClass { w: self.group.one(), parity: 0 }
    }

    /// Wraps a raw surface word as a normalized arc class.
    pub fn arc(&self, raw: &FWord, swapped: bool) -> Result<ArcClass, GoeritzError> {
        Ok(ArcClass { w: self.group.element(raw)?, parity: swapped as u8 })
    }

    /// Group-level arc comparison: parities equal and classes equal in the
    /// surface group (reduced representatives need not coincide).
    pub fn arc_eq(&self, x: &ArcClass, y: &ArcClass) -> Result<bool, GoeritzError> {
        Ok(x.parity == y.parity && self.group.equal(x.w.word(), y.w.word())?)
    }

    /// Rewrites a surface word as a product of slide-loop symbols via the
    /// basis table.
    pub fn express_in_gamma(&self, w: &FWord) -> Result<Vec<GammaRef>, GoeritzError> {
        let mut refs = Vec::with_capacity(w.len());
        for &letter in w.letters() {
            let entry = self.basis_refs(letter.unsigned_abs() as usize)?;
            if letter > 0 {
                refs.extend_from_slice(entry);
            } else {
                refs.extend(
                    entry.iter().rev().map(|r| GammaRef { sign: -r.sign, ..*r }),
                );
            }
        }
        Ok(refs)
    }

    /// Expands a product of slide-loop symbols back to a surface word via
    /// the gamma table.
    pub fn expand_gamma(&self, refs: &[GammaRef]) -> Result<FWord, GoeritzError> {
        let mut out = FWord::identity(2 * self.genus);
        for r in refs {
            self.check_handle(r.index)?;
            let base = if r.prime { &self.gamma_prime[r.index - 1] } else { &self.gamma[r.index - 1] };
            let factor = if r.sign >= 0 { base.clone() } else { base.inverse() };
            out = out.concat(&factor)?;
        }
        Ok(out)
    }

    /// Applies one generating move to an arc class.
    ///
    /// Anchored moves multiply `w` on the right by the slide loop (the loop
    /// is read at the position the moving endpoint currently occupies, which
    /// makes the rule the same for both parities); the rotor inverts `w` and
    /// flips the parity; freewheeling moves conjugate `w` by ĉⱼ, carrying
    /// both endpoints. The result is renormalized.
    pub fn act(&self, gen: GoeritzGen, a: &ArcClass) -> Result<ArcClass, GoeritzError> {
        check_gen(self.genus, gen)?;
        if a.w.genus() != self.genus {
            return Err(GoeritzError::GenusMismatch { expected: self.genus, found: a.w.genus() });
        }
        let w = a.w.word();
        match gen.kind {
            GenKind::Anchored(i) | GenKind::AnchoredPrime(i) => {
                let base = if matches!(gen.kind, GenKind::Anchored(_)) {
                    &self.gamma[i - 1]
                } else {
                    &self.gamma_prime[i - 1]
                };
                let factor = if gen.sign > 0 { base.clone() } else { base.inverse() };
                self.arc(&w.concat(&factor)?, a.parity == 1)
            }
            GenKind::Rotor => self.arc(&w.inverse(), a.parity == 0),
            GenKind::Freewheel(j) => {
                let c = &self.loops[j - 1].boundary;
                // Positive F(j) conjugates to ĉⱼ⁻¹·w·ĉⱼ.
                let conjugator = if gen.sign > 0 { c.inverse() } else { c.clone() };
                self.arc(&w.conjugated_by(&conjugator)?, a.parity == 1)
            }
        }
    }

    /// The terminal-arc class of a word: the moves are applied to the
    /// reference arc with the rightmost generator first, so written words
    /// compose like functions and `tau(u·v) = u applied to tau(v)`.
    pub fn tau(&self, word: &GoeritzWord) -> Result<ArcClass, GoeritzError> {
        if word.genus != self.genus {
            return Err(GoeritzError::GenusMismatch { expected: self.genus, found: word.genus });
        }
        let mut arc = self.reference_arc();
        for &gen in word.gens.iter().rev() {
            arc = self.act(gen, &arc)?;
        }
        Ok(arc)
    }

    /// Whether the word returns the arc to the reference position as an
    /// unoriented arc: trivial class, either parity.
    pub fn is_freewheeling(&self, word: &GoeritzWord) -> Result<bool, GoeritzError> {
        Ok(self.tau(word)?.w.is_identity())
    }

    /// Produces an anchored word (over `A(i)`, `A'(i)`, `r` only) whose
    /// terminal arc is `target`.
    ///
    /// The target class is rewritten through the basis table into slide
    /// loops; each slide-loop symbol becomes the matching anchored move, in
    /// reverse order so the right-to-left action rebuilds the word left to
    /// right; a trailing rotor accounts for parity 1.
    pub fn factor(&self, target: &ArcClass) -> Result<GoeritzWord, GoeritzError> {
        if target.w.genus() != self.genus {
            return Err(GoeritzError::GenusMismatch {
                expected: self.genus,
                found: target.w.genus(),
            });
        }
        let refs = self.express_in_gamma(target.w.word())?;
        let mut gens: Vec<GoeritzGen> = refs
            .iter()
            .rev()
            .map(|r| {
                let kind = if r.prime {
                    GenKind::AnchoredPrime(r.index)
                } else {
                    GenKind::Anchored(r.index)
                };
                GoeritzGen::new(kind, r.sign)
            })
            .collect();
        if target.parity == 1 {
            gens.push(GoeritzGen::rotor());
        }
        GoeritzWord::new(self.genus, gens)
    }

    /// Splits a word into `(anchored_part, residual)` with
    /// `anchored_part = factor(tau(word))` and
    /// `residual = anchored_part⁻¹ · word`, so the residual fixes the
    /// reference arc and the formal product of the two pieces cancels back
    /// to the input.
    pub fn decompose(
        &self,
        word: &GoeritzWord,
    ) -> Result<(GoeritzWord, GoeritzWord), GoeritzError> {
        let anchored_part = self.factor(&self.tau(word)?)?;
        let residual = anchored_part.inverse_word().concat(word)?;
        Ok((anchored_part, residual))
    }
}
