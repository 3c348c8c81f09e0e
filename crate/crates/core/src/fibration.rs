//! Abstract Lefschetz fibrations: a plumbing fiber plus a cyclically ordered
//! list of vanishing cycles, the moves relating them, and the homology of
//! the total space.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::One;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::arc::{apply_braid_word, sphere_intersection, standard_arc, Arc, ArcCode, BraidLetter, MarkedDisk};
use crate::lattice::{
    apply_twist_word, free_reduce, intersection_form, inverse_word, smith_normal_form,
    twist_power, HomClass, PlumbingTree, TreeError, TwistLetter,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Weinstein,
    Smooth,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Weinstein => "weinstein",
            Mode::Smooth => "smooth",
        })
    }
}

impl FromStr for Mode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "weinstein" => Ok(Mode::Weinstein),
            "smooth" => Ok(Mode::Smooth),
            other => Err(format!("unknown mode `{other}` (expected weinstein or smooth)")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    Left,
    Right,
}

impl Direction {
    pub fn opposite(self) -> Self {
        match self {
            Direction::Left => Direction::Right,
            Direction::Right => Direction::Left,
        }
    }
}

impl fmt::Display for Direction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Direction::Left => "left",
            Direction::Right => "right",
        })
    }
}

/// Why a move was refused.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum IllegalReason {
    #[error("position {position} out of range 1..={max}")]
    PositionOutOfRange { position: usize, max: usize },
    #[error("vertex {0} is not in the fiber")]
    UnknownVertex(usize),
    #[error("smooth replacement is only available in smooth mode")]
    WrongMode,
    #[error("smooth replacement needs an even sphere dimension, got n = {0}")]
    OddDimension(u32),
    #[error("parity: exponent {exponent} is not a nonzero multiple of {step} required at n = {n}")]
    Parity { n: u32, exponent: i64, step: i64 },
    #[error("smooth replacement is only decided for path fibers")]
    NotPathFiber,
    #[error("replacement cycle meets the vertex sphere {0} times, expected exactly once")]
    IntersectionNotOne(u64),
    #[error("cannot destabilize: {0}")]
    Destabilize(&'static str),
    #[error("a fibration needs at least two cycles for a Hurwitz move")]
    TooFewCycles,
    #[error("rewritten cycle is not equal to the current one")]
    NotEqual,
    #[error("rewrite chain step {0} is not an elementary relation")]
    BadChainStep(usize),
    #[error("non-path fiber: a rewrite needs an explicit relation chain")]
    MissingChain,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FibrationError {
    #[error(transparent)]
    Tree(#[from] TreeError),
    #[error("a fibration needs at least one vanishing cycle")]
    NoCycles,
    #[error("cycle references vertex {0}, which is not in the fiber")]
    UnknownVertex(usize),
    #[error("illegal move: {0}")]
    IllegalMove(#[from] IllegalReason),
}

/// Normal-form data distinguishing cycles. Path fibers use the arc code;
/// other fibers fall back to the reduced word.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CycleCode {
    Arc(ArcCode),
    Word { base: usize, word: Vec<TwistLetter> },
}

/// A vanishing cycle `word(base sphere)`, with the word read outermost
/// letter first.
#[derive(Debug, Clone)]
pub struct Cycle {
    base: usize,
    word: Vec<TwistLetter>,
    code: CycleCode,
    class: HomClass,
    arc: Option<Arc>,
}

impl PartialEq for Cycle {
    fn eq(&self, other: &Self) -> bool {
        self.base == other.base && self.word == other.word
    }
}

impl Eq for Cycle {}

/// Free-reduce and drop innermost twists that fix the base sphere: twists
/// along the base sphere itself or along spheres disjoint from it.
fn reduce_word(
    tree: &PlumbingTree,
    base: usize,
    word: impl IntoIterator<Item = TwistLetter>,
) -> Vec<TwistLetter> {
    let mut w = free_reduce(word);
    while w.last().is_some_and(|l| l.vertex == base || !tree.adjacent(l.vertex, base)) {
        w.pop();
    }
    w
}

fn braid_of(tree: &PlumbingTree, word: &[TwistLetter]) -> Vec<BraidLetter> {
    word.iter()
        .map(|l| BraidLetter::new(tree.path_position(l.vertex).expect("path fiber vertex"), l.exponent))
        .collect()
}

/// Matching arc of `word(base)` in the disk modelling a path fiber.
fn arc_of(tree: &PlumbingTree, base: usize, word: &[TwistLetter]) -> Option<Arc> {
    let pos = tree.path_position(base)?;
    let disk = MarkedDisk::new(tree.vertex_count() + 1).ok()?;
    let a = standard_arc(&disk, pos).ok()?;
    apply_braid_word(&disk, &braid_of(tree, word), &a).ok()
}

impl Cycle {
    pub fn new(
        tree: &PlumbingTree,
        base: usize,
        word: impl IntoIterator<Item = TwistLetter>,
    ) -> Result<Self, FibrationError> {
        let word: Vec<TwistLetter> = word.into_iter().collect();
        for v in std::iter::once(base).chain(word.iter().map(|l| l.vertex)) {
            if !tree.contains_vertex(v) {
                return Err(FibrationError::UnknownVertex(v));
            }
        }
        let word = reduce_word(tree, base, word);
        let form = intersection_form(tree);
        let class = apply_twist_word(&form, &word, &HomClass::basis(tree.vertex_count(), base));
        let arc = arc_of(tree, base, &word);
        let code = match &arc {
            Some(a) => CycleCode::Arc(a.code().clone()),
            None => CycleCode::Word {
                base,
                word: word.clone(),
            },
        };
        Ok(Cycle {
            base,
            word,
            code,
            class,
            arc,
        })
    }

    /// The bare vertex sphere of `v`.
    pub fn vertex(tree: &PlumbingTree, v: usize) -> Result<Self, FibrationError> {
        Cycle::new(tree, v, [])
    }

    pub fn base(&self) -> usize {
        self.base
    }

    pub fn word(&self) -> &[TwistLetter] {
        &self.word
    }

    pub fn code(&self) -> &CycleCode {
        &self.code
    }

    pub fn class(&self) -> &HomClass {
        &self.class
    }

    /// Matching arc, available for path fibers.
    pub fn arc(&self) -> Option<&Arc> {
        self.arc.as_ref()
    }

    /// Syntactically a vertex sphere.
    pub fn bare_vertex(&self) -> Option<usize> {
        self.word.is_empty().then_some(self.base)
    }

    /// The vertex whose sphere this cycle equals: decided by the arc on path
    /// fibers, syntactically otherwise.
    pub fn as_vertex_sphere(&self, tree: &PlumbingTree) -> Option<usize> {
        if let Some(v) = self.bare_vertex() {
            return Some(v);
        }
        let idx = self.arc.as_ref()?.standard_index()?;
        tree.path_order().map(|order| order[idx - 1])
    }

    /// Same class of spheres: arc equality on path fibers, reduced-word
    /// equality otherwise.
    pub fn same_as(&self, other: &Cycle) -> bool {
        self.code == other.code
    }

    /// `tau_self^{sign}(target)`, written as the conjugated word.
    pub fn twist(&self, tree: &PlumbingTree, target: &Cycle, sign: i8) -> Result<Cycle, FibrationError> {
        let mut word = Vec::with_capacity(2 * self.word.len() + 1 + target.word.len());
        word.extend_from_slice(&self.word);
        word.push(TwistLetter::new(self.base, sign));
        word.extend(inverse_word(&self.word));
        word.extend_from_slice(&target.word);
        Cycle::new(tree, target.base, word)
    }

    /// Rebuild the cached normal forms against another tree containing the
    /// same vertices.
    fn rebuild(&self, tree: &PlumbingTree) -> Result<Cycle, FibrationError> {
        Cycle::new(tree, self.base, self.word.iter().copied())
    }
}

impl fmt::Display for Cycle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if !self.word.is_empty() {
            write!(f, "[")?;
            for (i, l) in self.word.iter().enumerate() {
                if i > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{l}")?;
            }
            write!(f, "]")?;
        }
        write!(f, "v{}", self.base)
    }
}

/// An explicit rewrite chain state `(base, word)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WordState {
    pub base: usize,
    pub word: Vec<TwistLetter>,
}

/// One rewriting step of a fibration.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "move", rename_all = "snake_case")]
pub enum Move {
    /// Left: `(L1, ..., Lm) -> (L2, ..., Lm, L1)`; right is the inverse.
    CyclicShift { direction: Direction },
    /// Acts on the adjacent pair at `position`, `position + 1`.
    /// Right: `(L_{i+1}, tau_{L_{i+1}}(L_i))`; left: `(tau_{L_i}^{-1}(L_{i+1}), L_i)`.
    Hurwitz { position: usize, direction: Direction },
    /// Attach a new leaf at `attach` and put its sphere first.
    Stabilize { attach: usize },
    /// Remove the cycle at `position` together with its leaf vertex.
    Destabilize { position: usize },
    /// Replace `tau_vertex^{exponent}(c)` at `position` by `c`.
    SmoothReplace { position: usize, vertex: usize, exponent: i64 },
    /// Replace the cycle at `position` by an equal one.
    RewriteCycle {
        position: usize,
        base: usize,
        word: Vec<TwistLetter>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        chain: Option<Vec<WordState>>,
    },
}

impl fmt::Display for Move {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Move::CyclicShift { direction } => write!(f, "cyclic:{direction}"),
            Move::Hurwitz {
                position,
                direction,
            } => write!(f, "hurwitz:{position}:{direction}"),
            Move::Stabilize { attach } => write!(f, "stabilize:{attach}"),
            Move::Destabilize { position } => write!(f, "destabilize:{position}"),
            Move::SmoothReplace {
                position,
                vertex,
                exponent,
            } => write!(f, "smooth:{position}:{vertex}:{exponent}"),
            Move::RewriteCycle {
                position,
                base,
                word,
                ..
            } => {
                write!(f, "rewrite:{position}:{base}:")?;
                for (i, l) in word.iter().enumerate() {
                    if i > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{l}")?;
                }
                Ok(())
            }
        }
    }
}

impl FromStr for Move {
    type Err = String;

    /// Parses the forms produced by `Display`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let parts: Vec<&str> = s.trim().split(':').collect();
        let num = |i: usize| -> Result<usize, String> {
            parts
                .get(i)
                .ok_or_else(|| format!("move `{s}` is missing a field"))?
                .parse::<usize>()
                .map_err(|e| format!("bad number in move `{s}`: {e}"))
        };
        let dir = |i: usize| -> Result<Direction, String> {
            match parts.get(i).copied() {
                Some("left" | "l") => Ok(Direction::Left),
                Some("right" | "r") => Ok(Direction::Right),
                _ => Err(format!("move `{s}` needs a direction left|right")),
            }
        };
        let arity = |n: usize| -> Result<(), String> {
            if parts.len() == n {
                Ok(())
            } else {
                Err(format!("move `{s}` expects {} fields", n - 1))
            }
        };
        match parts[0] {
            "cyclic" => {
                arity(2)?;
                Ok(Move::CyclicShift { direction: dir(1)? })
            }
            "hurwitz" => {
                arity(3)?;
                Ok(Move::Hurwitz {
                    position: num(1)?,
                    direction: dir(2)?,
                })
            }
            "stabilize" => {
                arity(2)?;
                Ok(Move::Stabilize { attach: num(1)? })
            }
            "destabilize" => {
                arity(2)?;
                Ok(Move::Destabilize { position: num(1)? })
            }
            "smooth" => {
                arity(4)?;
                let exponent = parts[3]
                    .parse::<i64>()
                    .map_err(|e| format!("bad exponent in move `{s}`: {e}"))?;
                Ok(Move::SmoothReplace {
                    position: num(1)?,
                    vertex: num(2)?,
                    exponent,
                })
            }
            "rewrite" => {
                arity(4)?;
                let word = parse_word(parts[3])?;
                Ok(Move::RewriteCycle {
                    position: num(1)?,
                    base: num(2)?,
                    word,
                    chain: None,
                })
            }
            other => Err(format!("unknown move kind `{other}`")),
        }
    }
}

/// Parse `"1+,2-"` into twist letters; the empty string is the empty word.
pub fn parse_word(s: &str) -> Result<Vec<TwistLetter>, String> {
    s.split(',')
        .filter(|t| !t.trim().is_empty())
        .map(|t| {
            let t = t.trim();
            let (v, sign) = t.split_at(t.len() - 1);
            let exponent = match sign {
                "+" => 1,
                "-" => -1,
                _ => return Err(format!("twist letter `{t}` must end in + or -")),
            };
            let vertex = v
                .parse::<usize>()
                .map_err(|e| format!("bad vertex in `{t}`: {e}"))?;
            Ok(TwistLetter::new(vertex, exponent))
        })
        .collect()
}

/// Required divisor of smooth-replacement exponents, `None` for odd `n`.
pub fn smooth_step(n: u32) -> Option<i64> {
    match n {
        2 => Some(2),
        n if n % 2 == 0 => Some(4),
        _ => None,
    }
}

/// An abstract Lefschetz fibration with a plumbing fiber.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AbstractLF {
    fiber: PlumbingTree,
    cycles: Vec<Cycle>,
}

/// Deduplication key: equal for fibrations differing by a cyclic shift or by
/// rewriting cycles to equal ones.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CanonicalKey {
    sphere_dim: u32,
    vertex_count: usize,
    edges: Vec<(usize, usize)>,
    codes: Vec<CycleCode>,
}

/// A finitely generated abelian group `Z^rank + (+) Z/t`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct AbelianGroup {
    pub rank: usize,
    pub torsion: Vec<BigInt>,
}

impl AbelianGroup {
    pub fn zero() -> Self {
        AbelianGroup {
            rank: 0,
            torsion: Vec::new(),
        }
    }

    pub fn free(rank: usize) -> Self {
        AbelianGroup {
            rank,
            torsion: Vec::new(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.rank == 0 && self.torsion.is_empty()
    }

    /// Direct sum, with torsion kept as a sorted list of factors.
    pub fn direct_sum(&self, other: &AbelianGroup) -> AbelianGroup {
        let mut torsion: Vec<BigInt> = self.torsion.iter().chain(&other.torsion).cloned().collect();
        torsion.sort();
        AbelianGroup {
            rank: self.rank + other.rank,
            torsion,
        }
    }

    fn normalized(mut self) -> Self {
        self.torsion.sort();
        self
    }
}

impl fmt::Display for AbelianGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        match self.rank {
            0 => {}
            1 => parts.push("Z".to_string()),
            r => parts.push(format!("Z^{r}")),
        }
        parts.extend(self.torsion.iter().map(|t| format!("Z/{t}")));
        if parts.is_empty() {
            f.write_str("0")
        } else {
            f.write_str(&parts.join(" + "))
        }
    }
}

impl AbstractLF {
    pub fn new(fiber: PlumbingTree, cycles: Vec<Cycle>) -> Result<Self, FibrationError> {
        if cycles.is_empty() {
            return Err(FibrationError::NoCycles);
        }
        let cycles = cycles
            .iter()
            .map(|c| c.rebuild(&fiber))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(AbstractLF { fiber, cycles })
    }

    /// Build from `(base, word)` pairs.
    pub fn from_words(
        fiber: PlumbingTree,
        cycles: impl IntoIterator<Item = (usize, Vec<TwistLetter>)>,
    ) -> Result<Self, FibrationError> {
        let cycles = cycles
            .into_iter()
            .map(|(b, w)| Cycle::new(&fiber, b, w))
            .collect::<Result<Vec<_>, _>>()?;
        if cycles.is_empty() {
            return Err(FibrationError::NoCycles);
        }
        Ok(AbstractLF { fiber, cycles })
    }

    /// Build from a list of bare vertex spheres.
    pub fn from_vertices(fiber: PlumbingTree, vertices: &[usize]) -> Result<Self, FibrationError> {
        Self::from_words(fiber, vertices.iter().map(|&v| (v, Vec::new())))
    }

    pub fn fiber(&self) -> &PlumbingTree {
        &self.fiber
    }

    pub fn sphere_dim(&self) -> u32 {
        self.fiber.sphere_dim()
    }

    /// Dimension of the total space, `2n + 2`.
    pub fn total_dim(&self) -> u32 {
        2 * self.fiber.sphere_dim() + 2
    }

    pub fn cycles(&self) -> &[Cycle] {
        &self.cycles
    }

    pub fn cycle_count(&self) -> usize {
        self.cycles.len()
    }

    pub fn cycle(&self, position: usize) -> Result<&Cycle, IllegalReason> {
        self.check_position(position, self.cycles.len())?;
        Ok(&self.cycles[position - 1])
    }

    /// Homology class of the cycle at a 1-based position.
    pub fn cycle_class(&self, position: usize) -> Result<&HomClass, IllegalReason> {
        self.cycle(position).map(Cycle::class)
    }

    fn check_position(&self, position: usize, max: usize) -> Result<(), IllegalReason> {
        if position == 0 || position > max {
            return Err(IllegalReason::PositionOutOfRange { position, max });
        }
        Ok(())
    }

    fn with_cycles(&self, cycles: Vec<Cycle>) -> AbstractLF {
        AbstractLF {
            fiber: self.fiber.clone(),
            cycles,
        }
    }

    pub fn apply_move(&self, mv: &Move, mode: Mode) -> Result<AbstractLF, FibrationError> {
        let m = self.cycles.len();
        match mv {
            Move::CyclicShift { direction } => {
                let mut cycles = self.cycles.clone();
                match direction {
                    Direction::Left => cycles.rotate_left(1),
                    Direction::Right => cycles.rotate_right(1),
                }
                Ok(self.with_cycles(cycles))
            }
            Move::Hurwitz {
                position,
                direction,
            } => {
                if m < 2 {
                    return Err(IllegalReason::TooFewCycles.into());
                }
                self.check_position(*position, m - 1)?;
                let i = position - 1;
                let (a, b) = (&self.cycles[i], &self.cycles[i + 1]);
                let (first, second) = match direction {
                    Direction::Right => (b.clone(), b.twist(&self.fiber, a, 1)?),
                    Direction::Left => (a.twist(&self.fiber, b, -1)?, a.clone()),
                };
                let mut cycles = self.cycles.clone();
                cycles[i] = first;
                cycles[i + 1] = second;
                Ok(self.with_cycles(cycles))
            }
            Move::Stabilize { attach } => {
                if !self.fiber.contains_vertex(*attach) {
                    return Err(IllegalReason::UnknownVertex(*attach).into());
                }
                let fiber = self.fiber.with_leaf(*attach)?;
                let mut cycles = Vec::with_capacity(m + 1);
                cycles.push(Cycle::vertex(&fiber, fiber.vertex_count())?);
                for c in &self.cycles {
                    cycles.push(c.rebuild(&fiber)?);
                }
                Ok(AbstractLF { fiber, cycles })
            }
            Move::Destabilize { position } => {
                self.check_position(*position, m)?;
                self.destabilize_check(*position)?;
                let fiber = self
                    .fiber
                    .without_last_vertex()
                    .ok_or(IllegalReason::Destabilize("vertex is not a leaf"))?;
                let cycles = self
                    .cycles
                    .iter()
                    .enumerate()
                    .filter(|(k, _)| k + 1 != *position)
                    .map(|(_, c)| c.rebuild(&fiber))
                    .collect::<Result<Vec<_>, _>>()?;
                Ok(AbstractLF { fiber, cycles })
            }
            Move::SmoothReplace {
                position,
                vertex,
                exponent,
            } => {
                let c = self.smooth_replacement(*position, *vertex, *exponent, mode)?;
                let mut cycles = self.cycles.clone();
                cycles[position - 1] = c;
                Ok(self.with_cycles(cycles))
            }
            Move::RewriteCycle {
                position,
                base,
                word,
                chain,
            } => {
                self.check_position(*position, m)?;
                let new = Cycle::new(&self.fiber, *base, word.iter().copied())?;
                let old = &self.cycles[position - 1];
                self.rewrite_check(old, &new, chain.as_deref())?;
                let mut cycles = self.cycles.clone();
                cycles[position - 1] = new;
                Ok(self.with_cycles(cycles))
            }
        }
    }

    fn destabilize_check(&self, position: usize) -> Result<usize, IllegalReason> {
        let v = self.fiber.vertex_count();
        if v < 2 {
            return Err(IllegalReason::Destabilize("the fiber has a single vertex"));
        }
        let c = &self.cycles[position - 1];
        if c.bare_vertex() != Some(v) {
            return Err(IllegalReason::Destabilize(
                "the cycle is not the bare sphere of the highest-labelled vertex",
            ));
        }
        if !self.fiber.is_leaf(v) {
            return Err(IllegalReason::Destabilize("vertex is not a leaf"));
        }
        let used_elsewhere = self.cycles.iter().enumerate().any(|(k, c)| {
            k + 1 != position && (c.base == v || c.word.iter().any(|l| l.vertex == v))
        });
        if used_elsewhere {
            return Err(IllegalReason::Destabilize("vertex occurs in another cycle"));
        }
        Ok(v)
    }

    fn smooth_replacement(
        &self,
        position: usize,
        vertex: usize,
        exponent: i64,
        mode: Mode,
    ) -> Result<Cycle, FibrationError> {
        let n = self.sphere_dim();
        if mode != Mode::Smooth {
            return Err(IllegalReason::WrongMode.into());
        }
        let step = smooth_step(n).ok_or(IllegalReason::OddDimension(n))?;
        if exponent == 0 || exponent % step != 0 {
            return Err(IllegalReason::Parity { n, exponent, step }.into());
        }
        self.check_position(position, self.cycles.len())?;
        if !self.fiber.contains_vertex(vertex) {
            return Err(IllegalReason::UnknownVertex(vertex).into());
        }
        if !self.fiber.is_path() {
            return Err(IllegalReason::NotPathFiber.into());
        }
        let cur = &self.cycles[position - 1];
        let word: Vec<TwistLetter> = twist_power(vertex, -exponent)
            .into_iter()
            .chain(cur.word.iter().copied())
            .collect();
        let c = Cycle::new(&self.fiber, cur.base, word)?;
        let sphere = Cycle::vertex(&self.fiber, vertex)?;
        let meet = match (c.arc(), sphere.arc()) {
            (Some(x), Some(y)) => sphere_intersection(x, y).expect("same disk"),
            _ => return Err(IllegalReason::NotPathFiber.into()),
        };
        if meet != 1 {
            return Err(IllegalReason::IntersectionNotOne(meet).into());
        }
        Ok(c)
    }

    fn rewrite_check(
        &self,
        old: &Cycle,
        new: &Cycle,
        chain: Option<&[WordState]>,
    ) -> Result<(), IllegalReason> {
        if self.fiber.is_path() {
            return if old.same_as(new) {
                Ok(())
            } else {
                Err(IllegalReason::NotEqual)
            };
        }
        if old == new {
            return Ok(());
        }
        let chain = chain.ok_or(IllegalReason::MissingChain)?;
        let mut states = vec![(old.base, old.word.clone())];
        for s in chain {
            for v in std::iter::once(s.base).chain(s.word.iter().map(|l| l.vertex)) {
                if !self.fiber.contains_vertex(v) {
                    return Err(IllegalReason::UnknownVertex(v));
                }
            }
            states.push((s.base, reduce_word(&self.fiber, s.base, s.word.iter().copied())));
        }
        states.push((new.base, new.word.clone()));
        for (k, pair) in states.windows(2).enumerate() {
            if !elementary_related(&self.fiber, &pair[0], &pair[1]) {
                return Err(IllegalReason::BadChainStep(k + 1));
            }
        }
        Ok(())
    }

    /// Every move [`AbstractLF::apply_move`] accepts, except cycle rewrites,
    /// in a fixed order: cyclic shifts, Hurwitz moves by position,
    /// destabilizations, stabilizations by attachment vertex, and smooth
    /// replacements by position with exponent `+-step`.
    pub fn legal_moves(&self, mode: Mode) -> Vec<Move> {
        let m = self.cycles.len();
        let mut moves = vec![
            Move::CyclicShift {
                direction: Direction::Left,
            },
            Move::CyclicShift {
                direction: Direction::Right,
            },
        ];
        for position in 1..m {
            for direction in [Direction::Left, Direction::Right] {
                moves.push(Move::Hurwitz {
                    position,
                    direction,
                });
            }
        }
        for position in 1..=m {
            if self.destabilize_check(position).is_ok() {
                moves.push(Move::Destabilize { position });
            }
        }
        for attach in 1..=self.fiber.vertex_count() {
            moves.push(Move::Stabilize { attach });
        }
        if let (Mode::Smooth, Some(step)) = (mode, smooth_step(self.sphere_dim())) {
            for position in 1..=m {
                for vertex in 1..=self.fiber.vertex_count() {
                    for exponent in [step, -step] {
                        if self.smooth_replacement(position, vertex, exponent, mode).is_ok() {
                            moves.push(Move::SmoothReplace {
                                position,
                                vertex,
                                exponent,
                            });
                        }
                    }
                }
            }
        }
        moves
    }

    /// Moves undoing `mv` when applied to its result, in order.
    pub fn inverse_moves(&self, mv: &Move) -> Vec<Move> {
        match mv {
            Move::CyclicShift { direction } => vec![Move::CyclicShift {
                direction: direction.opposite(),
            }],
            Move::Hurwitz {
                position,
                direction,
            } => vec![Move::Hurwitz {
                position: *position,
                direction: direction.opposite(),
            }],
            Move::Stabilize { .. } => vec![Move::Destabilize { position: 1 }],
            Move::Destabilize { position } => {
                let v = self.fiber.vertex_count();
                let attach = self.fiber.neighbors(v).first().copied().unwrap_or(1);
                let mut out = vec![
                    Move::CyclicShift {
                        direction: Direction::Left
                    };
                    position - 1
                ];
                out.push(Move::Stabilize { attach });
                out.extend(vec![
                    Move::CyclicShift {
                        direction: Direction::Right
                    };
                    position - 1
                ]);
                out
            }
            Move::SmoothReplace {
                position,
                vertex,
                exponent,
            } => vec![Move::SmoothReplace {
                position: *position,
                vertex: *vertex,
                exponent: -exponent,
            }],
            Move::RewriteCycle {
                position, chain, ..
            } => {
                let old = &self.cycles[position - 1];
                vec![Move::RewriteCycle {
                    position: *position,
                    base: old.base,
                    word: old.word.clone(),
                    chain: chain.as_ref().map(|c| c.iter().rev().cloned().collect()),
                }]
            }
        }
    }

    pub fn canonical_key(&self) -> CanonicalKey {
        let codes: Vec<CycleCode> = self.cycles.iter().map(|c| c.code.clone()).collect();
        let m = codes.len();
        let best = (0..m)
            .min_by(|&a, &b| {
                let ra = codes[a..].iter().chain(&codes[..a]);
                let rb = codes[b..].iter().chain(&codes[..b]);
                ra.cmp(rb)
            })
            .unwrap_or(0);
        let mut rotated = codes[best..].to_vec();
        rotated.extend_from_slice(&codes[..best]);
        CanonicalKey {
            sphere_dim: self.sphere_dim(),
            vertex_count: self.fiber.vertex_count(),
            edges: self.fiber.edges().collect(),
            codes: rotated,
        }
    }

    /// Homology of the total space in degrees `0..=n+1`.
    ///
    /// The fiber contributes a 0-cell and one `n`-cell per vertex; each
    /// vanishing cycle attaches an `(n+1)`-cell along its class.
    pub fn total_space_homology(&self) -> Vec<(u32, AbelianGroup)> {
        let n = self.sphere_dim();
        let v = self.fiber.vertex_count();
        let m = self.cycles.len();
        let matrix: Vec<Vec<BigInt>> = (0..v)
            .map(|row| self.cycles.iter().map(|c| c.class.0[row].clone()).collect())
            .collect();
        let snf = smith_normal_form(&matrix);
        let torsion: Vec<BigInt> = snf.factors.iter().filter(|d| !d.is_one()).cloned().collect();
        let mut out = Vec::with_capacity(n as usize + 2);
        out.push((0, AbelianGroup::free(1)));
        for j in 1..n {
            out.push((j, AbelianGroup::zero()));
        }
        out.push((
            n,
            AbelianGroup {
                rank: v - snf.rank,
                torsion,
            }
            .normalized(),
        ));
        out.push((n + 1, AbelianGroup::free(m - snf.rank)));
        out
    }

    pub fn euler_characteristic(&self) -> i64 {
        let n = self.sphere_dim() as i64;
        let sign = |k: i64| if k % 2 == 0 { 1 } else { -1 };
        let v = self.fiber.vertex_count() as i64;
        let m = self.cycles.len() as i64;
        1 + v * sign(n) + sign(n + 1) * m
    }
}

/// One elementary relation between reduced `(base, word)` states, in either
/// direction: commuting letters on non-adjacent vertices, a braid relation
/// on adjacent vertices, or absorbing `tau_x^e tau_y^e` applied to the
/// sphere of `x` (adjacent `x`, `y`) into the sphere of `y`.
pub fn elementary_related(
    tree: &PlumbingTree,
    a: &(usize, Vec<TwistLetter>),
    b: &(usize, Vec<TwistLetter>),
) -> bool {
    a == b || one_step(tree, a).contains(b) || one_step(tree, b).contains(a)
}

fn one_step(tree: &PlumbingTree, (base, word): &(usize, Vec<TwistLetter>)) -> Vec<(usize, Vec<TwistLetter>)> {
    let mut out = Vec::new();
    let push = |out: &mut Vec<_>, b: usize, w: Vec<TwistLetter>| out.push((b, reduce_word(tree, b, w)));
    for i in 0..word.len().saturating_sub(1) {
        let (x, y) = (word[i], word[i + 1]);
        if x.vertex != y.vertex && !tree.adjacent(x.vertex, y.vertex) {
            let mut w = word.clone();
            w.swap(i, i + 1);
            push(&mut out, *base, w);
        }
    }
    for i in 0..word.len().saturating_sub(2) {
        let (x, y, z) = (word[i], word[i + 1], word[i + 2]);
        if x.vertex != z.vertex || !tree.adjacent(x.vertex, y.vertex) {
            continue;
        }
        // u^e v^f u^g -> v^g u^f v^e holds when e = f = g and when g = -e.
        if (x.exponent == y.exponent && y.exponent == z.exponent) || x.exponent == -z.exponent {
            let (u, v) = (x.vertex, y.vertex);
            let replacement = if x.exponent == -z.exponent {
                [
                    TwistLetter::new(v, -y.exponent),
                    TwistLetter::new(u, x.exponent),
                    TwistLetter::new(v, y.exponent),
                ]
            } else {
                [
                    TwistLetter::new(v, x.exponent),
                    TwistLetter::new(u, x.exponent),
                    TwistLetter::new(v, x.exponent),
                ]
            };
            let mut w = word[..i].to_vec();
            w.extend(replacement);
            w.extend_from_slice(&word[i + 3..]);
            push(&mut out, *base, w);
        }
    }
    if word.len() >= 2 {
        let (x, y) = (word[word.len() - 2], word[word.len() - 1]);
        if x.vertex == *base && x.exponent == y.exponent && tree.adjacent(x.vertex, y.vertex) {
            push(&mut out, y.vertex, word[..word.len() - 2].to_vec());
        }
    }
    out
}

impl fmt::Display for AbstractLF {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}; ", self.fiber)?;
        for (i, c) in self.cycles.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}
