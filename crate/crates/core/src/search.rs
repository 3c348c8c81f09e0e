//! Bounded bidirectional breadth-first search for certificates.
//!
//! States are deduplicated by canonical key. Expansion is sequential and
//! follows the order of [`AbstractLF::legal_moves`], so results depend only
//! on the inputs and the budget. Failing to find a certificate says nothing
//! about equivalence.

use std::collections::VecDeque;

use indexmap::IndexMap;
use thiserror::Error;

use crate::certificate::Certificate;
use crate::fibration::{AbstractLF, CanonicalKey, Direction, Mode, Move};

/// Wording for an unsuccessful search.
pub const NOT_FOUND: &str = "no certificate within budget";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SearchBudget {
    /// Total number of moves, summed over both search directions.
    pub max_depth: usize,
    /// Total number of distinct states stored.
    pub max_states: usize,
    /// How many vertices beyond the larger input fiber stabilization may add.
    pub allow_stabilize_up_to: usize,
}

impl SearchBudget {
    pub fn new(max_depth: usize, max_states: usize, allow_stabilize_up_to: usize) -> Self {
        SearchBudget {
            max_depth,
            max_states,
            allow_stabilize_up_to,
        }
    }
}

impl Default for SearchBudget {
    fn default() -> Self {
        SearchBudget::new(8, 50_000, 1)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SearchError {
    #[error("fibrations have different sphere dimensions ({0} vs {1})")]
    DimensionMismatch(u32, u32),
}

#[derive(Debug, Clone)]
pub enum SearchOutcome {
    Found(Certificate),
    NotFound { explored: usize },
}

impl SearchOutcome {
    pub fn certificate(self) -> Option<Certificate> {
        match self {
            SearchOutcome::Found(c) => Some(c),
            SearchOutcome::NotFound { .. } => None,
        }
    }
}

struct Node {
    state: AbstractLF,
    parent: Option<(usize, Vec<Move>)>,
}

struct Side {
    nodes: IndexMap<CanonicalKey, Node>,
    frontier: VecDeque<usize>,
    depth: usize,
}

impl Side {
    fn new(start: AbstractLF) -> Self {
        let (state, _) = normalize(&start);
        let mut nodes = IndexMap::new();
        nodes.insert(
            state.canonical_key(),
            Node {
                state,
                parent: None,
            },
        );
        Side {
            nodes,
            frontier: VecDeque::from([0]),
            depth: 0,
        }
    }

    /// Moves from the root to node `idx`, root first.
    fn path_moves(&self, idx: usize) -> Vec<Move> {
        let mut chunks = Vec::new();
        let mut cur = idx;
        while let Some((_, node)) = self.nodes.get_index(cur) {
            match &node.parent {
                Some((p, moves)) => {
                    chunks.push(moves.clone());
                    cur = *p;
                }
                None => break,
            }
        }
        chunks.into_iter().rev().flatten().collect()
    }
}

/// Rewrite cycles on a path fiber that equal a vertex sphere to that bare
/// sphere, keeping words short.
fn normalize(f: &AbstractLF) -> (AbstractLF, Vec<Move>) {
    let mut moves = Vec::new();
    let mut g = f.clone();
    if !f.fiber().is_path() {
        return (g, moves);
    }
    for (k, c) in f.cycles().iter().enumerate() {
        if c.bare_vertex().is_none() {
            if let Some(v) = c.as_vertex_sphere(f.fiber()) {
                let mv = Move::RewriteCycle {
                    position: k + 1,
                    base: v,
                    word: Vec::new(),
                    chain: None,
                };
                g = g.apply_move(&mv, Mode::Weinstein).expect("arc-equal rewrite");
                moves.push(mv);
            }
        }
    }
    (g, moves)
}

/// Expanding a state: every legal move followed by normalization.
fn children(state: &AbstractLF, mode: Mode, vertex_bound: usize) -> Vec<(AbstractLF, Vec<Move>)> {
    let mut out = Vec::new();
    for mv in state.legal_moves(mode) {
        if matches!(mv, Move::Stabilize { .. }) && state.fiber().vertex_count() >= vertex_bound {
            continue;
        }
        let Ok(next) = state.apply_move(&mv, mode) else {
            continue;
        };
        let (next, mut fix) = normalize(&next);
        let mut moves = vec![mv];
        moves.append(&mut fix);
        out.push((next, moves));
    }
    out
}

/// Moves turning `a` into `b` when both have the same canonical key.
fn bridge(a: &AbstractLF, b: &AbstractLF) -> Vec<Move> {
    let m = a.cycle_count();
    let codes_b: Vec<_> = b.cycles().iter().map(|c| c.code().clone()).collect();
    let r = (0..m)
        .find(|&r| (0..m).all(|i| a.cycles()[(i + r) % m].code() == &codes_b[i]))
        .expect("equal keys are rotations of each other");
    let mut moves = vec![
        Move::CyclicShift {
            direction: Direction::Left
        };
        r
    ];
    for (i, target) in b.cycles().iter().enumerate() {
        if a.cycles()[(i + r) % m] != *target {
            moves.push(Move::RewriteCycle {
                position: i + 1,
                base: target.base(),
                word: target.word().to_vec(),
                chain: None,
            });
        }
    }
    moves
}

/// Inverse of a move list applied from `start`.
fn invert_path(start: &AbstractLF, moves: &[Move], mode: Mode) -> Vec<Move> {
    let mut state = start.clone();
    let mut inverses: Vec<Vec<Move>> = Vec::with_capacity(moves.len());
    for mv in moves {
        inverses.push(state.inverse_moves(mv));
        state = state.apply_move(mv, mode).expect("search paths are legal");
    }
    inverses.into_iter().rev().flatten().collect()
}

/// Search for a certificate from `f1` to `f2`.
pub fn search(
    f1: &AbstractLF,
    f2: &AbstractLF,
    mode: Mode,
    budget: &SearchBudget,
) -> Result<SearchOutcome, SearchError> {
    if f1.sphere_dim() != f2.sphere_dim() {
        return Err(SearchError::DimensionMismatch(f1.sphere_dim(), f2.sphere_dim()));
    }
    let bound = f1.fiber().vertex_count().max(f2.fiber().vertex_count()) + budget.allow_stabilize_up_to;
    let mut fwd = Side::new(f1.clone());
    let mut bwd = Side::new(f2.clone());
    let mut stored = 2;

    let finish = |fwd: &Side, fi: usize, bwd: &Side, bi: usize| -> Certificate {
        let (_, fnode) = fwd.nodes.get_index(fi).expect("node");
        let (_, bnode) = bwd.nodes.get_index(bi).expect("node");
        let mut steps = normalize(f1).1;
        steps.extend(fwd.path_moves(fi));
        steps.extend(bridge(&fnode.state, &bnode.state));
        let mut back = normalize(f2).1;
        back.extend(bwd.path_moves(bi));
        steps.extend(invert_path(f2, &back, mode));
        Certificate {
            mode,
            start: f1.clone(),
            steps,
            claimed_end: f2.clone(),
            provenance: "search".into(),
        }
    };

    if let Some(bi) = bwd.nodes.get_index_of(&fwd.nodes.get_index(0).expect("root").0.clone()) {
        return Ok(SearchOutcome::Found(finish(&fwd, 0, &bwd, bi)));
    }

    while fwd.depth + bwd.depth < budget.max_depth {
        let expand_fwd = fwd.frontier.len() <= bwd.frontier.len();
        let (side, other) = if expand_fwd {
            (&mut fwd, &bwd)
        } else {
            (&mut bwd, &fwd)
        };
        if side.frontier.is_empty() {
            break;
        }
        let level: Vec<usize> = side.frontier.drain(..).collect();
        side.depth += 1;
        for idx in level {
            let state = side.nodes.get_index(idx).expect("node").1.state.clone();
            for (next, moves) in children(&state, mode, bound) {
                let key = next.canonical_key();
                if side.nodes.contains_key(&key) {
                    continue;
                }
                let (new_idx, _) = side.nodes.insert_full(
                    key.clone(),
                    Node {
                        state: next,
                        parent: Some((idx, moves)),
                    },
                );
                stored += 1;
                if let Some(oi) = other.nodes.get_index_of(&key) {
                    let cert = if expand_fwd {
                        finish(&fwd, new_idx, &bwd, oi)
                    } else {
                        finish(&fwd, oi, &bwd, new_idx)
                    };
                    return Ok(SearchOutcome::Found(cert));
                }
                side.frontier.push_back(new_idx);
                if stored >= budget.max_states {
                    return Ok(SearchOutcome::NotFound { explored: stored });
                }
            }
        }
    }
    Ok(SearchOutcome::NotFound { explored: stored })
}

/// Forward search for the first state satisfying `goal`; the returned
/// certificate ends at that state.
pub fn search_until(
    f: &AbstractLF,
    mode: Mode,
    budget: &SearchBudget,
    goal: impl Fn(&AbstractLF) -> bool,
) -> Option<Certificate> {
    let bound = f.fiber().vertex_count() + budget.allow_stabilize_up_to;
    let mut side = Side::new(f.clone());
    let prefix = normalize(f).1;
    let found = |side: &Side, idx: usize| {
        let (_, node) = side.nodes.get_index(idx).expect("node");
        let mut steps = prefix.clone();
        steps.extend(side.path_moves(idx));
        Certificate {
            mode,
            start: f.clone(),
            steps,
            claimed_end: node.state.clone(),
            provenance: "search".into(),
        }
    };
    if goal(&side.nodes[0].state) {
        return Some(found(&side, 0));
    }
    while side.depth < budget.max_depth {
        let level: Vec<usize> = side.frontier.drain(..).collect();
        if level.is_empty() {
            break;
        }
        side.depth += 1;
        for idx in level {
            let state = side.nodes[idx].state.clone();
            for (next, moves) in children(&state, mode, bound) {
                let key = next.canonical_key();
                if side.nodes.contains_key(&key) {
                    continue;
                }
                let hit = goal(&next);
                let (new_idx, _) = side.nodes.insert_full(
                    key,
                    Node {
                        state: next,
                        parent: Some((idx, moves)),
                    },
                );
                if hit {
                    return Some(found(&side, new_idx));
                }
                side.frontier.push_back(new_idx);
                if side.nodes.len() >= budget.max_states {
                    return None;
                }
            }
        }
    }
    None
}
