//! Crossing schedules: the combinatorial shadow of moving an arc through a
//! meridian disk system.
//!
//! While the arc of [`HandlebodyModel`] moves, its endpoints occasionally
//! pass through one of the g meridian disks. A [`Schedule`] records those
//! events in time order; its width is the largest number of simultaneous
//! arc/disk intersections. Valid schedules start and end with the arc clear
//! of every disk and never remove an intersection that is not there.
//!
//! [`canonical`] translates a word of generating moves into the schedule
//! its committed loop tables dictate: anchored slides and the rotor avoid
//! the disks entirely, and each freewheeling move passes the arc completely
//! through each disk its loop crosses, one disk at a time. Every such
//! schedule has width at most 1, and [`thin`] pairs any word with a
//! width-at-most-1 schedule for an arc-equivalent rewriting.

use crate::arcs::{GenKind, GoeritzError, GoeritzWord, HandlebodyModel};
use thiserror::Error;

/// Errors from schedule validation or rewriting.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum WidthError {
    /// Genus must be at least 1.
    #[error("genus must be >= 1, got {0}")]
    GenusOutOfRange(usize),
    /// Two schedules of different genus were combined.
    #[error("genus mismatch: expected {expected}, found {found}")]
    GenusMismatch { expected: usize, found: usize },
    /// An event's fields are not of the required shape.
    #[error("event {position} is malformed: {message}")]
    MalformedEvent { position: usize, message: String },
    /// A disk index outside 1..=genus.
    #[error("event {position} names disk {disk}, expected 1..={max}")]
    DiskOutOfRange { position: usize, disk: usize, max: usize },
    /// A removal event with no live intersection on its disk: the first
    /// prefix whose running count would go negative.
    #[error("event {position} removes an intersection on disk {disk} that does not exist")]
    NegativeCount { position: usize, disk: usize },
    /// Intersections still present when the schedule ends.
    #[error("schedule ends with {count} intersection(s) left on disk {disk}")]
    OpenCount { disk: usize, count: i64 },
    /// `rewrite_same_end` was applied to something other than a same-end
    /// two-event block.
    #[error("not a same-end block: {0}")]
    NotASameEndBlock(String),
    #[error(transparent)]
    Goeritz(#[from] GoeritzError),
}

/// One endpoint of the arc passing through one meridian disk.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct CrossEvent {
    /// Which endpoint crosses: 0 or 1.
    pub end: u8,
    /// Which meridian disk, 1..=genus.
    pub disk: usize,
    /// +1 creates an arc/disk intersection, -1 removes one.
    pub dir: i8,
}

impl CrossEvent {
    pub fn new(end: u8, disk: usize, dir: i8) -> Self {
        CrossEvent { end, disk, dir }
    }
}

impl std::fmt::Display for CrossEvent {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let sign = if self.dir >= 0 { '+' } else { '-' };
        write!(f, "({},E{},{})", self.end, self.disk, sign)
    }
}

/// A time-ordered list of crossing events for a genus-g disk system.
///
/// Always valid once built: every prefix keeps a nonnegative intersection
/// count on every disk, and all counts return to zero at the end. Equality
/// compares genus and events; the provenance notes left by rewrites are
/// carried along but never compared.
#[derive(Debug, Clone, Eq)]
pub struct Schedule {
    genus: usize,
    events: Vec<CrossEvent>,
    notes: Vec<String>,
}

impl PartialEq for Schedule {
    fn eq(&self, other: &Self) -> bool {
        self.genus == other.genus && self.events == other.events
    }
}

impl Schedule {
    /// Validates and wraps an event sequence. The error names the first
    /// offending event.
    pub fn try_new(genus: usize, events: Vec<CrossEvent>) -> Result<Self, WidthError> {
        if genus == 0 {
            return Err(WidthError::GenusOutOfRange(genus));
        }
        let mut per_disk = vec![0i64; genus];
        for (position, event) in events.iter().enumerate() {
            if event.end > 1 {
                return Err(WidthError::MalformedEvent {
                    position,
                    message: format!("end must be 0 or 1, got {}", event.end),
                });
            }
            if event.dir != 1 && event.dir != -1 {
                return Err(WidthError::MalformedEvent {
                    position,
                    message: format!("dir must be +1 or -1, got {}", event.dir),
                });
            }
            if event.disk == 0 || event.disk > genus {
                return Err(WidthError::DiskOutOfRange {
                    position,
                    disk: event.disk,
                    max: genus,
                });
            }
            let count = &mut per_disk[event.disk - 1];
            *count += event.dir as i64;
            if *count < 0 {
                return Err(WidthError::NegativeCount { position, disk: event.disk });
            }
        }
        for (disk0, &count) in per_disk.iter().enumerate() {
            if count != 0 {
                return Err(WidthError::OpenCount { disk: disk0 + 1, count });
            }
        }
        Ok(Schedule { genus, events, notes: Vec::new() })
    }

    pub fn empty(genus: usize) -> Result<Self, WidthError> {
        Self::try_new(genus, Vec::new())
    }

    pub fn genus(&self) -> usize {
        self.genus
    }

    pub fn events(&self) -> &[CrossEvent] {
        &self.events
    }

    /// Human-readable log of the rewrites that produced this schedule.
    pub fn notes(&self) -> &[String] {
        &self.notes
    }

    pub fn len(&self) -> usize {
        self.events.len()
    }

    pub fn is_empty(&self) -> bool {
        self.events.is_empty()
    }

    /// The width: the largest total intersection count over all prefixes.
    pub fn width(&self) -> usize {
        let mut count = 0i64;
        let mut max = 0i64;
        for event in &self.events {
            count += event.dir as i64;
            max = max.max(count);
        }
        max as usize
    }

    /// Concatenation in time. Because both summands return every disk to
    /// zero, the width of the result is exactly the maximum of the widths.
    pub fn concat(&self, other: &Schedule) -> Result<Schedule, WidthError> {
        if other.genus != self.genus {
            return Err(WidthError::GenusMismatch { expected: self.genus, found: other.genus });
        }
        let mut events = self.events.clone();
        events.extend_from_slice(&other.events);
        let mut notes = self.notes.clone();
        notes.extend_from_slice(&other.notes);
        let joined = Schedule { genus: self.genus, events, notes };
        debug_assert_eq!(joined.width(), self.width().max(other.width()));
        Ok(joined)
    }

    /// Cuts the schedule at every interior moment when the arc is clear of
    /// all disks. Concatenating the pieces reproduces the input verbatim;
    /// no piece returns to zero in its interior. Provenance notes stay with
    /// the whole, not the pieces.
    pub fn split(&self) -> Vec<Schedule> {
        let mut pieces = Vec::new();
        let mut current: Vec<CrossEvent> = Vec::new();
        let mut count = 0i64;
        for &event in &self.events {
            current.push(event);
            count += event.dir as i64;
            if count == 0 {
                pieces.push(Schedule {
                    genus: self.genus,
                    events: std::mem::take(&mut current),
                    notes: Vec::new(),
                });
            }
        }
        debug_assert!(current.is_empty());
        pieces
    }

    /// Rewrites a same-end block into two opposite pass-throughs.
    ///
    /// A block [(e,i,+),(e,i,-)] pokes one endpoint through disk i and pulls
    /// it straight back. Sliding the poke across the parallelism disk
    /// instead passes the arc fully through and fully back:
    /// [(e,i,+),(ē,i,-),(ē,i,+),(e,i,-)]. Width stays 1 and every disk
    /// still nets to zero; the rewrite is recorded in the notes.
    pub fn rewrite_same_end(&self) -> Result<Schedule, WidthError> {
        let [open, close] = self.events[..] else {
            return Err(WidthError::NotASameEndBlock(format!(
                "expected exactly 2 events, got {}",
                self.events.len()
            )));
        };
        if open.end != close.end {
            return Err(WidthError::NotASameEndBlock(
                "the two events use different ends (already a pass-through)".to_string(),
            ));
        }
        if open.disk != close.disk || open.dir != 1 || close.dir != -1 {
            return Err(WidthError::NotASameEndBlock(
                "expected [(e,i,+),(e,i,-)] on a single disk".to_string(),
            ));
        }
        let e = open.end;
        let other = 1 - e;
        let i = open.disk;
        let events = vec![
            CrossEvent::new(e, i, 1),
            CrossEvent::new(other, i, -1),
            CrossEvent::new(other, i, 1),
            CrossEvent::new(e, i, -1),
        ];
        let mut notes = self.notes.clone();
        notes.push(format!(
            "same-end block on disk {i} (end {e}) rewritten as two opposite pass-throughs"
        ));
        Ok(Schedule { genus: self.genus, events, notes })
    }
}

impl std::fmt::Display for Schedule {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "[")?;
        for (k, event) in self.events.iter().enumerate() {
            if k > 0 {
                write!(f, " ")?;
            }
            write!(f, "{event}")?;
        }
        write!(f, "]")
    }
}

/// The schedule a word of generating moves produces under the committed
/// loop tables.
///
/// Anchored slides and the rotor never touch the disks. A positive
/// freewheeling move `F(j)` passes the arc completely through each disk in
/// its loop's crossing list, leading with end 1; the inverse move replays
/// the crossings in reverse with the ends exchanged. Each pass-through
/// closes before the next opens, so the width is at most 1 for every word.
pub fn canonical(model: &HandlebodyModel, word: &GoeritzWord) -> Result<Schedule, WidthError> {
    if word.genus() != model.genus() {
        return Err(WidthError::GenusMismatch {
            expected: model.genus(),
            found: word.genus(),
        });
    }
    let mut events = Vec::new();
    for gen in word.gens() {
        let GenKind::Freewheel(j) = gen.kind else { continue };
        let crossings = &model.boundary_loop(j)?.crossings;
        if gen.sign > 0 {
            for &(disk, _) in crossings {
                events.push(CrossEvent::new(1, disk, 1));
                events.push(CrossEvent::new(0, disk, -1));
            }
        } else {
            for &(disk, _) in crossings.iter().rev() {
                events.push(CrossEvent::new(0, disk, 1));
                events.push(CrossEvent::new(1, disk, -1));
            }
        }
    }
    let schedule = Schedule::try_new(model.genus(), events)?;
    debug_assert!(schedule.width() <= 1);
    Ok(schedule)
}

/// Rewrites a word into its anchored-times-residual form and pairs it with
/// the canonical schedule of the rewriting.
///
/// The rewritten word is `anchored_part · residual` from
/// [`HandlebodyModel::decompose`], so it cancels formally back to the input
/// and reaches the same terminal arc; its canonical schedule has width at
/// most 1.
pub fn thin(
    model: &HandlebodyModel,
    word: &GoeritzWord,
) -> Result<(GoeritzWord, Schedule), WidthError> {
    let (anchored_part, residual) = model.decompose(word)?;
    let rewritten = anchored_part.concat(&residual)?;
    debug_assert!(model
        .arc_eq(&model.tau(&rewritten)?, &model.tau(word)?)
        .unwrap_or(false));
    let schedule = canonical(model, &rewritten)?;
    Ok((rewritten, schedule))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};

    fn ev(end: u8, disk: usize, dir: i8) -> CrossEvent {
        CrossEvent::new(end, disk, dir)
    }

    fn sched(genus: usize, events: &[CrossEvent]) -> Schedule {
        Schedule::try_new(genus, events.to_vec()).unwrap()
    }

    #[test]
    fn width_counts_simultaneous_intersections() {
        assert_eq!(sched(1, &[]).width(), 0);
        assert_eq!(sched(1, &[ev(1, 1, 1), ev(0, 1, -1)]).width(), 1);
        let nested = sched(2, &[ev(1, 1, 1), ev(1, 2, 1), ev(1, 2, -1), ev(1, 1, -1)]);
        assert_eq!(nested.width(), 2);
    }

    #[test]
    fn validation_reports_the_first_bad_prefix() {
        let err = Schedule::try_new(1, vec![ev(1, 1, -1), ev(1, 1, 1)]).unwrap_err();
        assert_eq!(err, WidthError::NegativeCount { position: 0, disk: 1 });
        // Disk 2 goes negative even though the total count stays positive.
        let err = Schedule::try_new(
            2,
            vec![ev(1, 1, 1), ev(0, 2, -1), ev(0, 2, 1), ev(1, 1, -1)],
        )
        .unwrap_err();
        assert_eq!(err, WidthError::NegativeCount { position: 1, disk: 2 });
        let err = Schedule::try_new(1, vec![ev(1, 1, 1)]).unwrap_err();
        assert_eq!(err, WidthError::OpenCount { disk: 1, count: 1 });
        let err = Schedule::try_new(2, vec![ev(1, 3, 1), ev(0, 3, -1)]).unwrap_err();
        assert_eq!(err, WidthError::DiskOutOfRange { position: 0, disk: 3, max: 2 });
        assert!(matches!(
            Schedule::try_new(1, vec![ev(2, 1, 1), ev(0, 1, -1)]).unwrap_err(),
            WidthError::MalformedEvent { position: 0, .. }
        ));
        assert!(matches!(
            Schedule::try_new(1, vec![ev(1, 1, 2), ev(0, 1, -1)]).unwrap_err(),
            WidthError::MalformedEvent { position: 0, .. }
        ));
        assert!(Schedule::try_new(0, vec![]).is_err());
    }

    #[test]
    fn concat_takes_the_exact_maximum_width() {
        let pass = sched(2, &[ev(1, 1, 1), ev(0, 1, -1)]);
        let wide = sched(2, &[ev(1, 1, 1), ev(1, 2, 1), ev(1, 2, -1), ev(1, 1, -1)]);
        let empty = Schedule::empty(2).unwrap();
        assert_eq!(empty.concat(&pass).unwrap(), pass);
        assert_eq!(pass.concat(&pass).unwrap().width(), 1);
        assert_eq!(pass.concat(&wide).unwrap().width(), 2);
        assert_eq!(wide.concat(&pass).unwrap().width(), 2);
        let other_genus = Schedule::empty(3).unwrap();
        assert!(matches!(
            pass.concat(&other_genus),
            Err(WidthError::GenusMismatch { expected: 2, found: 3 })
        ));
    }

    #[test]
    fn split_cuts_at_clear_moments_and_reassembles() {
        assert!(Schedule::empty(2).unwrap().split().is_empty());
        let two_blocks = sched(2, &[ev(1, 1, 1), ev(0, 1, -1), ev(1, 2, 1), ev(0, 2, -1)]);
        let pieces = two_blocks.split();
        assert_eq!(pieces.len(), 2);
        assert_eq!(pieces[0], sched(2, &[ev(1, 1, 1), ev(0, 1, -1)]));
        assert_eq!(pieces[1], sched(2, &[ev(1, 2, 1), ev(0, 2, -1)]));
        let wide = sched(2, &[ev(1, 1, 1), ev(1, 2, 1), ev(1, 2, -1), ev(1, 1, -1)]);
        assert_eq!(wide.split(), vec![wide.clone()]);
        let mut glued = Schedule::empty(2).unwrap();
        for piece in two_blocks.split() {
            glued = glued.concat(&piece).unwrap();
        }
        assert_eq!(glued, two_blocks);
    }

    #[test]
    fn same_end_rewrite_gives_two_opposite_pass_throughs() {
        let poke = sched(1, &[ev(1, 1, 1), ev(1, 1, -1)]);
        let rewritten = poke.rewrite_same_end().unwrap();
        assert_eq!(
            rewritten.events(),
            &[ev(1, 1, 1), ev(0, 1, -1), ev(0, 1, 1), ev(1, 1, -1)]
        );
        assert_eq!(rewritten.width(), 1);
        assert_eq!(rewritten.notes().len(), 1);
        let mirrored = sched(2, &[ev(0, 2, 1), ev(0, 2, -1)]).rewrite_same_end().unwrap();
        assert_eq!(
            mirrored.events(),
            &[ev(0, 2, 1), ev(1, 2, -1), ev(1, 2, 1), ev(0, 2, -1)]
        );
        let pass = sched(1, &[ev(1, 1, 1), ev(0, 1, -1)]);
        assert!(matches!(pass.rewrite_same_end(), Err(WidthError::NotASameEndBlock(_))));
        let long = sched(1, &[ev(1, 1, 1), ev(0, 1, -1), ev(1, 1, 1), ev(0, 1, -1)]);
        assert!(matches!(long.rewrite_same_end(), Err(WidthError::NotASameEndBlock(_))));
    }

    #[test]
    fn canonical_schedules_follow_the_loop_tables() {
        let m = HandlebodyModel::new(2).unwrap();
        let anchored = GoeritzWord::parse(2, "a1 a2'^-1 r").unwrap();
        assert!(canonical(&m, &anchored).unwrap().is_empty());
        // ĉ₂ = b₁ crosses disk 1 once: a single pass-through, end 1 leading.
        let f2 = GoeritzWord::parse(2, "f2").unwrap();
        let s = canonical(&m, &f2).unwrap();
        assert_eq!(s.events(), &[ev(1, 1, 1), ev(0, 1, -1)]);
        assert_eq!(s.width(), 1);
        // The inverse replays it backwards with the ends exchanged.
        let f2_inv = GoeritzWord::parse(2, "f2^-1").unwrap();
        let s = canonical(&m, &f2_inv).unwrap();
        assert_eq!(s.events(), &[ev(0, 1, 1), ev(1, 1, -1)]);
        // ĉ₁ = a₁ is disjoint from every disk.
        let f1 = GoeritzWord::parse(2, "f1").unwrap();
        assert!(canonical(&m, &f1).unwrap().is_empty());
        let mixed = GoeritzWord::parse(2, "f2 a1 f4^-1 f2").unwrap();
        let s = canonical(&m, &mixed).unwrap();
        assert_eq!(s.width(), 1);
        assert_eq!(s.len(), 6);
    }

    #[test]
    fn thin_preserves_the_arc_and_stays_width_one() {
        let m = HandlebodyModel::new(2).unwrap();
        let pure = GoeritzWord::parse(2, "a1 a1").unwrap();
        let (rewritten, schedule) = thin(&m, &pure).unwrap();
        assert_eq!(rewritten.reduced(), pure);
        assert!(schedule.is_empty());
        let word = GoeritzWord::parse(2, "f2 a1 f2^-1").unwrap();
        let (rewritten, schedule) = thin(&m, &word).unwrap();
        assert!(schedule.width() <= 1);
        assert!(m
            .arc_eq(&m.tau(&rewritten).unwrap(), &m.tau(&word).unwrap())
            .unwrap());
        assert_eq!(rewritten.reduced(), word.reduced());
    }

    #[test]
    fn random_words_always_thin_to_width_one() {
        let mut rng = StdRng::seed_from_u64(17);
        for genus in 1..=3 {
            let m = HandlebodyModel::new(genus).unwrap();
            for _ in 0..30 {
                let mut gens = Vec::new();
                for _ in 0..rng.gen_range(0..24) {
                    let kind = match rng.gen_range(0..4) {
                        0 => GenKind::Anchored(rng.gen_range(1..=genus)),
                        1 => GenKind::AnchoredPrime(rng.gen_range(1..=genus)),
                        2 => GenKind::Rotor,
                        _ => GenKind::Freewheel(rng.gen_range(1..=2 * genus)),
                    };
                    let sign = if rng.gen_bool(0.5) { 1 } else { -1 };
                    gens.push(crate::arcs::GoeritzGen::new(kind, sign));
                }
                let word = GoeritzWord::new(genus, gens).unwrap();
                assert!(canonical(&m, &word).unwrap().width() <= 1);
                let (rewritten, schedule) = thin(&m, &word).unwrap();
                assert!(schedule.width() <= 1);
                assert!(m
                    .arc_eq(&m.tau(&rewritten).unwrap(), &m.tau(&word).unwrap())
                    .unwrap());
            }
        }
    }
}
