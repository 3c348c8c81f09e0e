//! Matching arcs in a disk with marked points.
//!
//! The marked points `1..=p` sit on a horizontal line. The line is cut into
//! segments `s_0, ..., s_p`: `s_k` joins points `k` and `k + 1`, while `s_0`
//! and `s_p` run from the outer points to the boundary. An arc in minimal
//! position with respect to the line is determined up to isotopy by the side
//! it leaves its first endpoint on and the ordered list of segments it
//! crosses. Reducing that data (removing bigons with the line) gives a
//! canonical code, so two arcs are isotopic exactly when their codes agree.
//!
//! Half-twists act on codes by local rewriting: the support of `sigma_i` is
//! a thin disk around `s_i`, so only crossings of `s_i` and endpoints at
//! `i`, `i + 1` change.

use std::fmt;
use std::hash::{Hash, Hasher};

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ArcError {
    #[error("a marked disk needs at least 2 points, got {0}")]
    TooFewPoints(usize),
    #[error("generator index {index} out of range 1..={max}")]
    IndexOutOfRange { index: usize, max: usize },
    #[error("arcs live in different disks ({0} vs {1} marked points)")]
    DiskMismatch(usize, usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Side {
    Upper,
    Lower,
}

impl Side {
    pub fn flip(self) -> Self {
        match self {
            Side::Upper => Side::Lower,
            Side::Lower => Side::Upper,
        }
    }

    fn flipped_times(self, times: usize) -> Self {
        if times % 2 == 0 {
            self
        } else {
            self.flip()
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct MarkedDisk {
    point_count: usize,
}

impl MarkedDisk {
    pub fn new(point_count: usize) -> Result<Self, ArcError> {
        if point_count < 2 {
            return Err(ArcError::TooFewPoints(point_count));
        }
        Ok(MarkedDisk { point_count })
    }

    pub fn point_count(&self) -> usize {
        self.point_count
    }

    /// Number of standard arcs (and of braid generators), `p - 1`.
    pub fn generator_count(&self) -> usize {
        self.point_count - 1
    }

    fn check_index(&self, i: usize) -> Result<(), ArcError> {
        if i == 0 || i >= self.point_count {
            return Err(ArcError::IndexOutOfRange {
                index: i,
                max: self.point_count - 1,
            });
        }
        Ok(())
    }
}

/// Reduced crossing data of an unoriented arc, stored in the orientation
/// that compares smaller.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ArcCode {
    pub start: u32,
    pub start_side: Side,
    pub crossings: Vec<u32>,
    pub end: u32,
}

impl ArcCode {
    fn standard(i: u32) -> Self {
        ArcCode {
            start: i,
            start_side: Side::Upper,
            crossings: Vec::new(),
            end: i + 1,
        }
    }

    /// Side from which the arc arrives at its end point.
    pub fn end_side(&self) -> Side {
        self.start_side.flipped_times(self.crossings.len())
    }

    fn reversed(&self) -> Self {
        ArcCode {
            start: self.end,
            start_side: self.end_side(),
            crossings: self.crossings.iter().rev().copied().collect(),
            end: self.start,
        }
    }

    /// Remove every bigon with the line and pick the canonical orientation.
    fn normalize(start: u32, mut side: Side, raw: Vec<u32>, end: u32) -> Self {
        let mut seq: Vec<u32> = Vec::with_capacity(raw.len());
        for c in raw {
            if seq.last() == Some(&c) {
                seq.pop();
            } else {
                seq.push(c);
            }
        }
        let touches = |c: u32, q: u32| c == q || c + 1 == q;
        let mut head = 0;
        while head < seq.len() && touches(seq[head], start) {
            head += 1;
            side = side.flip();
        }
        seq.drain(..head);
        while seq.last().is_some_and(|&c| touches(c, end)) {
            seq.pop();
        }
        if seq.is_empty() && start.abs_diff(end) == 1 {
            side = Side::Upper;
        }
        let code = ArcCode {
            start,
            start_side: side,
            crossings: seq,
            end,
        };
        let rev = code.reversed();
        code.min(rev)
    }

    /// Image under `sigma_i^{sign}`.
    fn twisted(&self, i: u32, sign: i8) -> Self {
        let swap = |q: u32| {
            if q == i {
                i + 1
            } else if q == i + 1 {
                i
            } else {
                q
            }
        };
        // Extra crossing picked up by an endpoint dragged through the twist.
        let extra = |side: Side| match (sign > 0, side) {
            (true, Side::Upper) | (false, Side::Lower) => i - 1,
            _ => i + 1,
        };
        let mut seq = Vec::with_capacity(self.crossings.len() + 4);
        let moves_start = self.start == i || self.start == i + 1;
        if moves_start {
            seq.push(extra(self.start_side));
        }
        let mut cur = self.start_side;
        for &c in &self.crossings {
            if c == i {
                let down = cur == Side::Upper;
                if (sign > 0) == down {
                    seq.extend([i - 1, i, i + 1]);
                } else {
                    seq.extend([i + 1, i, i - 1]);
                }
            } else {
                seq.push(c);
            }
            cur = cur.flip();
        }
        if self.end == i || self.end == i + 1 {
            seq.push(extra(cur));
        }
        let start_side = if moves_start {
            self.start_side.flip()
        } else {
            self.start_side
        };
        ArcCode::normalize(swap(self.start), start_side, seq, swap(self.end))
    }

    fn crossings_of(&self, segment: u32) -> usize {
        self.crossings.iter().filter(|&&c| c == segment).count()
    }
}

impl fmt::Display for ArcCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let side = match self.start_side {
            Side::Upper => 'U',
            Side::Lower => 'L',
        };
        write!(f, "{}{side}[", self.start)?;
        for (k, c) in self.crossings.iter().enumerate() {
            if k > 0 {
                write!(f, " ")?;
            }
            write!(f, "s{c}")?;
        }
        write!(f, "]{}", self.end)
    }
}

/// A half-twist `sigma_index^{sign}` along the standard arc `a_index`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct BraidLetter {
    pub index: usize,
    pub sign: i8,
}

impl BraidLetter {
    pub fn new(index: usize, sign: i8) -> Self {
        BraidLetter { index, sign }
    }

    pub fn inverse(self) -> Self {
        BraidLetter {
            index: self.index,
            sign: -self.sign,
        }
    }
}

/// An isotopy class of matching arcs together with one braid word producing
/// it from a standard arc. Equality and hashing ignore the witness.
#[derive(Debug, Clone)]
pub struct Arc {
    points: usize,
    code: ArcCode,
    witness_word: Vec<BraidLetter>,
    witness_generator: usize,
}

impl PartialEq for Arc {
    fn eq(&self, other: &Self) -> bool {
        self.points == other.points && self.code == other.code
    }
}

impl Eq for Arc {}

impl Hash for Arc {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.points.hash(state);
        self.code.hash(state);
    }
}

impl Arc {
    pub fn code(&self) -> &ArcCode {
        &self.code
    }

    pub fn point_count(&self) -> usize {
        self.points
    }

    /// `(w, i)` with `self = w(a_i)`; `w` reads outermost letter first.
    pub fn witness(&self) -> (&[BraidLetter], usize) {
        (&self.witness_word, self.witness_generator)
    }

    /// The endpoints of the arc, smaller first.
    pub fn endpoints(&self) -> (u32, u32) {
        let (a, b) = (self.code.start, self.code.end);
        (a.min(b), a.max(b))
    }

    /// If the arc is a standard arc `a_i`, return `i`.
    pub fn standard_index(&self) -> Option<usize> {
        (self.code == ArcCode::standard(self.code.start)).then_some(self.code.start as usize)
    }

    fn apply_letter(&self, letter: BraidLetter) -> Arc {
        let code = self.code.twisted(letter.index as u32, letter.sign);
        let mut witness_word = Vec::with_capacity(self.witness_word.len() + 1);
        if self.witness_word.first() == Some(&letter.inverse()) {
            witness_word.extend_from_slice(&self.witness_word[1..]);
        } else {
            witness_word.push(letter);
            witness_word.extend_from_slice(&self.witness_word);
        }
        Arc {
            points: self.points,
            code,
            witness_word,
            witness_generator: self.witness_generator,
        }
    }
}

impl fmt::Display for Arc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.code)
    }
}

/// The straight arc `a_i` between marked points `i` and `i + 1`.
pub fn standard_arc(disk: &MarkedDisk, i: usize) -> Result<Arc, ArcError> {
    disk.check_index(i)?;
    Ok(Arc {
        points: disk.point_count,
        code: ArcCode::standard(i as u32),
        witness_word: Vec::new(),
        witness_generator: i,
    })
}

/// Compose half-twists; the leftmost letter is applied last.
pub fn apply_braid_word(disk: &MarkedDisk, word: &[BraidLetter], x: &Arc) -> Result<Arc, ArcError> {
    check_same(disk, x)?;
    for l in word {
        disk.check_index(l.index)?;
    }
    Ok(word.iter().rev().fold(x.clone(), |acc, &l| acc.apply_letter(l)))
}

/// Half-twist along an arbitrary arc, via conjugation by its witness word.
pub fn half_twist(disk: &MarkedDisk, target: &Arc, along: &Arc, sign: i8) -> Result<Arc, ArcError> {
    check_same(disk, target)?;
    check_same(disk, along)?;
    let (w, i) = along.witness();
    let mut word = Vec::with_capacity(2 * w.len() + 1);
    word.extend_from_slice(w);
    word.push(BraidLetter::new(i, sign));
    word.extend(w.iter().rev().map(|l| l.inverse()));
    apply_braid_word(disk, &word, target)
}

pub fn arc_equal(x: &Arc, y: &Arc) -> Result<bool, ArcError> {
    if x.points != y.points {
        return Err(ArcError::DiskMismatch(x.points, y.points));
    }
    Ok(x.code == y.code)
}

/// Intersection number of the matching spheres over two arcs: minimal
/// interior crossings plus shared endpoints. An arc with itself gives 2.
pub fn sphere_intersection(x: &Arc, y: &Arc) -> Result<u64, ArcError> {
    if x.points != y.points {
        return Err(ArcError::DiskMismatch(x.points, y.points));
    }
    let disk = MarkedDisk {
        point_count: x.points,
    };
    // Straighten y to a_j and carry x along.
    let (w, j) = y.witness();
    let inv: Vec<BraidLetter> = w.iter().rev().map(|l| l.inverse()).collect();
    let z = apply_braid_word(&disk, &inv, x)?;
    let j = j as u32;
    let interior = z.code.crossings_of(j) as u64;
    let shared = [z.code.start, z.code.end]
        .iter()
        .filter(|&&q| q == j || q == j + 1)
        .count() as u64;
    Ok(interior + shared)
}

fn check_same(disk: &MarkedDisk, x: &Arc) -> Result<(), ArcError> {
    if disk.point_count != x.points {
        return Err(ArcError::DiskMismatch(disk.point_count, x.points));
    }
    Ok(())
}
