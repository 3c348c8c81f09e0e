//! Vertex-block decompositions, wrapped-category component counts, the
//! end-connected-sum algebra of invariants, and thimble index gaps.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::arc::sphere_intersection;
use crate::certificate::weinstein_reduction;
use crate::fibration::{AbelianGroup, AbstractLF, Mode};
use crate::search::{search_until, SearchBudget};

/// Marker carried by every report: invariants that would need symplectic
/// cohomology are outside this engine.
pub const SH_NOT_IMPLEMENTED: &str =
    "Weinstein distinction beyond component counts: NOT IMPLEMENTED (symplectic cohomology out of scope)";

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DecompositionError {
    #[error("index gaps need n >= 2 and k >= 1, got n = {n}, k = {k}")]
    GapRange { n: u32, k: usize },
    #[error("reports have different sphere dimensions ({0} vs {1})")]
    DimensionMismatch(u32, u32),
    #[error("thimble graph needs a path fiber")]
    NotPathFiber,
}

/// Why a fibration is not in vertex-block form.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BlockFailure {
    #[error("cycle at position {0} is not a vertex sphere")]
    NonVertexCycle(usize),
    #[error("occurrences of vertex {0} are not cyclically contiguous")]
    Interleaved(usize),
    #[error("vertices {0:?} carry no cycle")]
    UnusedVertex(Vec<usize>),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlockDecomposition {
    /// `(vertex, count)` runs in cyclic order.
    pub blocks: Vec<(usize, usize)>,
    pub leftover_vertices: BTreeSet<usize>,
}

impl BlockDecomposition {
    /// Blocks with at least two cycles; each contributes a nonzero summand.
    pub fn nontrivial(&self) -> impl Iterator<Item = &(usize, usize)> {
        self.blocks.iter().filter(|&&(_, c)| c >= 2)
    }
}

/// Succeeds iff every cycle is a vertex sphere, each vertex's cycles are
/// cyclically contiguous, and every vertex is used.
pub fn detect_blocks(f: &AbstractLF) -> Result<BlockDecomposition, BlockFailure> {
    let tree = f.fiber();
    let seq: Vec<usize> = f
        .cycles()
        .iter()
        .enumerate()
        .map(|(k, c)| c.as_vertex_sphere(tree).ok_or(BlockFailure::NonVertexCycle(k + 1)))
        .collect::<Result<_, _>>()?;
    let m = seq.len();
    let start = (0..m).find(|&i| seq[i] != seq[(i + m - 1) % m]).unwrap_or(0);
    let mut blocks: Vec<(usize, usize)> = Vec::new();
    for k in 0..m {
        let v = seq[(start + k) % m];
        match blocks.last_mut() {
            Some((u, c)) if *u == v => *c += 1,
            _ => {
                if blocks.iter().any(|&(u, _)| u == v) {
                    return Err(BlockFailure::Interleaved(v));
                }
                blocks.push((v, 1));
            }
        }
    }
    let unused: Vec<usize> = (1..=tree.vertex_count())
        .filter(|v| !blocks.iter().any(|&(u, _)| u == *v))
        .collect();
    if !unused.is_empty() {
        return Err(BlockFailure::UnusedVertex(unused));
    }
    Ok(BlockDecomposition {
        blocks,
        leftover_vertices: BTreeSet::new(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Exactness {
    Unknown,
    LowerBound,
    Exact,
}

impl fmt::Display for Exactness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Exactness::Exact => "exact",
            Exactness::LowerBound => "lower_bound",
            Exactness::Unknown => "unknown",
        })
    }
}

/// Number of nonzero factors of the wrapped Fukaya category.
#[derive(Debug, Clone)]
pub struct ComponentCount {
    pub value: usize,
    pub exactness: Exactness,
    pub justification: String,
}

impl PartialEq for ComponentCount {
    fn eq(&self, other: &Self) -> bool {
        self.value == other.value && self.exactness == other.exactness
    }
}

impl Eq for ComponentCount {}

impl ComponentCount {
    fn unknown(why: impl Into<String>) -> Self {
        ComponentCount {
            value: 0,
            exactness: Exactness::Unknown,
            justification: why.into(),
        }
    }

    /// Count read off a block decomposition of a path-fiber fibration.
    fn from_blocks(bd: &BlockDecomposition, how: &str) -> Self {
        let value = bd.nontrivial().count();
        let summands: Vec<String> = bd
            .blocks
            .iter()
            .map(|&(v, c)| {
                if c >= 2 {
                    format!("vertex {v} x{c} -> A_{} (indecomposable)", c - 1)
                } else {
                    format!("vertex {v} x1 -> ball")
                }
            })
            .collect();
        let detail = format!(
            "{how}; end connected sum of vertex blocks [{}]",
            summands.join(", ")
        );
        if value == 0 {
            // Only balls: nothing nonzero to count, so no exact claim is made.
            ComponentCount {
                value,
                exactness: Exactness::LowerBound,
                justification: format!("{detail}; every summand is a ball"),
            }
        } else {
            ComponentCount {
                value,
                exactness: Exactness::Exact,
                justification: detail,
            }
        }
    }
}

impl fmt::Display for ComponentCount {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} ({})", self.value, self.exactness)
    }
}

/// Component count: block decomposition when available, else a known
/// reduction or a bounded weinstein-mode search for a block-form
/// representative.
pub fn component_count(f: &AbstractLF, budget: &SearchBudget) -> ComponentCount {
    if !f.fiber().is_path() {
        return match detect_blocks(f) {
            Ok(bd) => ComponentCount::unknown(format!(
                "branched fiber: {} nontrivial vertex blocks, but block sums are only certified over path fibers",
                bd.nontrivial().count()
            )),
            Err(e) => ComponentCount::unknown(format!("branched fiber, no block form ({e})")),
        };
    }
    match detect_blocks(f) {
        Ok(bd) => ComponentCount::from_blocks(&bd, "block form"),
        Err(failure) => {
            if let Some(cert) = weinstein_reduction(f) {
                if let Ok(end) = cert.replay() {
                    if let Ok(bd) = detect_blocks(&end) {
                        return ComponentCount::from_blocks(
                            &bd,
                            &format!("known reduction `{}` ({} steps)", cert.provenance, cert.steps.len()),
                        );
                    }
                }
            }
            match search_until(f, Mode::Weinstein, budget, |g| {
                g.fiber().is_path() && detect_blocks(g).is_ok()
            }) {
                Some(cert) => {
                    let end = cert.replay().expect("search certificates replay");
                    let bd = detect_blocks(&end).expect("search stops at block form");
                    ComponentCount::from_blocks(
                        &bd,
                        &format!("block form reached by a {}-step weinstein search", cert.steps.len()),
                    )
                }
                None => ComponentCount::unknown(format!(
                    "not in block form ({failure}); no block-form representative within budget"
                )),
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct IndexGapReport {
    pub n: u32,
    pub k: usize,
    pub gap_max_min: i64,
    pub gap_min_max: i64,
    pub nonvanishing_certified: bool,
}

/// Maslov index gaps between consecutive chord generators for the thimbles
/// of the `A_k` Milnor fiber fibration with fiber dimension `n`.
pub fn index_gaps(n: u32, k: usize) -> Result<IndexGapReport, DecompositionError> {
    if n < 2 || k < 1 {
        return Err(DecompositionError::GapRange { n, k });
    }
    let gap_max_min = (n as i64 - 1) * (k as i64 + 1) + 2;
    let gap_min_max = n as i64;
    Ok(IndexGapReport {
        n,
        k,
        gap_max_min,
        gap_min_max,
        nonvanishing_certified: gap_max_min >= 4 && gap_min_max >= 2,
    })
}

/// Total-space invariants of one fibration.
#[derive(Debug, Clone)]
pub struct InvariantReport {
    pub n: u32,
    pub homology: Vec<(u32, AbelianGroup)>,
    pub euler: i64,
    pub components: ComponentCount,
    pub index_gaps: Vec<IndexGapReport>,
    pub notes: Vec<String>,
}

impl PartialEq for InvariantReport {
    fn eq(&self, other: &Self) -> bool {
        let sorted = |g: &[IndexGapReport]| {
            let mut g = g.to_vec();
            g.sort();
            g
        };
        self.n == other.n
            && self.homology == other.homology
            && self.euler == other.euler
            && self.components == other.components
            && sorted(&self.index_gaps) == sorted(&other.index_gaps)
    }
}

impl Eq for InvariantReport {}

pub fn invariant_report(f: &AbstractLF, budget: &SearchBudget) -> InvariantReport {
    let n = f.sphere_dim();
    let components = component_count(f, budget);
    let mut index_gaps = Vec::new();
    if components.exactness == Exactness::Exact {
        let bd = detect_blocks(f).ok().or_else(|| {
            let cert = weinstein_reduction(f)?;
            detect_blocks(&cert.replay().ok()?).ok()
        });
        let bd = bd.or_else(|| {
            let cert = search_until(f, Mode::Weinstein, budget, |g| {
                g.fiber().is_path() && detect_blocks(g).is_ok()
            })?;
            detect_blocks(&cert.replay().ok()?).ok()
        });
        if let Some(bd) = bd {
            index_gaps = bd
                .nontrivial()
                .filter_map(|&(_, c)| index_gaps_for(n, c - 1))
                .collect();
        }
    }
    let mut notes = vec![SH_NOT_IMPLEMENTED.to_string()];
    if !f.fiber().is_path() {
        notes.push("cycle equality on a branched fiber is decided by reduced words only".into());
    }
    InvariantReport {
        n,
        homology: f.total_space_homology(),
        euler: f.euler_characteristic(),
        components,
        index_gaps,
        notes,
    }
}

fn index_gaps_for(n: u32, k: usize) -> Option<IndexGapReport> {
    index_gaps(n, k).ok()
}

/// Invariants of an end connected sum from those of its parts.
pub fn sum_invariants(
    a: &InvariantReport,
    b: &InvariantReport,
) -> Result<InvariantReport, DecompositionError> {
    if a.n != b.n {
        return Err(DecompositionError::DimensionMismatch(a.n, b.n));
    }
    let degrees: BTreeSet<u32> = a.homology.iter().chain(&b.homology).map(|(d, _)| *d).collect();
    let group = |r: &InvariantReport, d: u32| {
        r.homology
            .iter()
            .find(|(e, _)| *e == d)
            .map(|(_, g)| g.clone())
            .unwrap_or_else(AbelianGroup::zero)
    };
    let homology = degrees
        .into_iter()
        .map(|d| {
            if d == 0 {
                (0, AbelianGroup::free(1))
            } else {
                (d, group(a, d).direct_sum(&group(b, d)))
            }
        })
        .collect();
    let components = ComponentCount {
        value: a.components.value + b.components.value,
        exactness: a.components.exactness.min(b.components.exactness),
        justification: format!(
            "sum of parts: ({}) + ({})",
            a.components.justification, b.components.justification
        ),
    };
    let mut index_gaps = a.index_gaps.clone();
    index_gaps.extend_from_slice(&b.index_gaps);
    let mut notes = a.notes.clone();
    for note in &b.notes {
        if !notes.contains(note) {
            notes.push(note.clone());
        }
    }
    Ok(InvariantReport {
        n: a.n,
        homology,
        euler: a.euler + b.euler - 1,
        components,
        index_gaps,
        notes,
    })
}

/// Diagnostic graph on cycle positions: an edge when the spheres meet or
/// coincide. Not a component count.
pub fn thimble_graph(f: &AbstractLF) -> Result<Vec<(usize, usize)>, DecompositionError> {
    if !f.fiber().is_path() {
        return Err(DecompositionError::NotPathFiber);
    }
    let cycles = f.cycles();
    let mut edges = Vec::new();
    for i in 0..cycles.len() {
        for j in i + 1..cycles.len() {
            let (x, y) = (cycles[i].arc(), cycles[j].arc());
            let (Some(x), Some(y)) = (x, y) else {
                return Err(DecompositionError::NotPathFiber);
            };
            let meet = sphere_intersection(x, y).expect("same disk");
            if meet > 0 || x == y {
                edges.push((i + 1, j + 1));
            }
        }
    }
    Ok(edges)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::{build_a_milnor, build_p_tmj, build_x, build_y, build_z};
    use crate::fibration::{Direction, Move};
    use crate::lattice::PlumbingTree;

    fn budget() -> SearchBudget {
        SearchBudget::new(4, 2000, 0)
    }

    #[test]
    fn blocks_of_catalog_members() {
        let y = build_y(2, 2).unwrap();
        assert_eq!(detect_blocks(&y).unwrap().blocks, vec![(1, 5), (2, 2)]);
        assert_eq!(
            detect_blocks(&build_p_tmj(3, 2, 2).unwrap()),
            Err(BlockFailure::Interleaved(1))
        );
        let small = AbstractLF::from_vertices(PlumbingTree::a_type(2, 2).unwrap(), &[1, 1, 2]).unwrap();
        assert_eq!(detect_blocks(&small).unwrap().blocks, vec![(1, 2), (2, 1)]);
        let unused = AbstractLF::from_vertices(PlumbingTree::a_type(3, 2).unwrap(), &[1, 2]).unwrap();
        assert_eq!(detect_blocks(&unused), Err(BlockFailure::UnusedVertex(vec![3])));
        assert_eq!(
            detect_blocks(&build_x(1, 2).unwrap()),
            Err(BlockFailure::NonVertexCycle(4))
        );
    }

    #[test]
    fn blocks_stable_under_rotation() {
        let z = build_z(&[2, 1, 3], 2).unwrap();
        let base = detect_blocks(&z).unwrap();
        let mut g = z.clone();
        for _ in 0..z.cycle_count() {
            g = g
                .apply_move(&Move::CyclicShift { direction: Direction::Left }, Mode::Weinstein)
                .unwrap();
            let mut b = detect_blocks(&g).unwrap().blocks;
            let mut e = base.blocks.clone();
            b.sort();
            e.sort();
            assert_eq!(b, e);
        }
    }

    #[test]
    fn counts() {
        let c = component_count(&build_y(1, 2).unwrap(), &budget());
        assert_eq!((c.value, c.exactness), (2, Exactness::Exact));
        let c = component_count(&build_x(1, 2).unwrap(), &budget());
        assert_eq!((c.value, c.exactness), (1, Exactness::Exact));
        let c = component_count(&build_z(&[2, 2, 1], 3).unwrap(), &budget());
        assert_eq!((c.value, c.exactness), (3, Exactness::Exact));
        let ball = AbstractLF::from_vertices(PlumbingTree::a_type(1, 2).unwrap(), &[1]).unwrap();
        assert_eq!(component_count(&ball, &budget()).exactness, Exactness::LowerBound);
        let e6 = component_count(&build_p_tmj(5, 3, 2).unwrap(), &budget());
        assert_eq!(e6.exactness, Exactness::Unknown);
    }

    #[test]
    fn gaps() {
        let g = index_gaps(2, 1).unwrap();
        assert_eq!((g.gap_max_min, g.gap_min_max, g.nonvanishing_certified), (4, 2, true));
        let g = index_gaps(3, 2).unwrap();
        assert_eq!((g.gap_max_min, g.gap_min_max), (8, 3));
        assert!(index_gaps(2, 0).is_err());
        assert!(index_gaps(1, 3).is_err());
    }

    #[test]
    fn sums_of_reports() {
        let b = budget();
        for k in 1..=3 {
            let a = invariant_report(&build_a_milnor(2 * k, 2).unwrap(), &b);
            let t = invariant_report(&build_a_milnor(1, 2).unwrap(), &b);
            let y = invariant_report(&build_y(k, 2).unwrap(), &b);
            assert_eq!(sum_invariants(&a, &t).unwrap(), y);
        }
        let ball = invariant_report(
            &AbstractLF::from_vertices(PlumbingTree::a_type(1, 2).unwrap(), &[1]).unwrap(),
            &b,
        );
        let a = invariant_report(&build_a_milnor(3, 2).unwrap(), &b);
        let s = sum_invariants(&a, &ball).unwrap();
        assert_eq!(s.components.value, a.components.value);
        assert_eq!(s.euler, a.euler);
        let other = invariant_report(&build_a_milnor(3, 3).unwrap(), &b);
        assert!(sum_invariants(&a, &other).is_err());
    }

    #[test]
    fn thimble_graphs() {
        let pair = build_a_milnor(1, 2).unwrap();
        assert_eq!(thimble_graph(&pair).unwrap(), vec![(1, 2)]);
        let y = build_y(1, 2).unwrap();
        let edges = thimble_graph(&y).unwrap();
        assert!(edges.contains(&(3, 4)));
        let branched = AbstractLF::from_vertices(
            crate::catalog::TreeSpec::E(6).build(2).unwrap(),
            &[1, 2, 3, 4, 5, 6],
        )
        .unwrap();
        assert!(thimble_graph(&branched).is_err());
    }
}
