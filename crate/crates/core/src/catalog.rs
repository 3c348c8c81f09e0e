//! Named fibers and fibrations.
//!
//! On the two-vertex path fiber, `alpha` is vertex 1 and `beta` is vertex 2;
//! on longer path fibers `alpha_i` is vertex `i`.

use std::fmt;

use thiserror::Error;

use crate::decomposition::detect_blocks;
use crate::fibration::{AbstractLF, FibrationError};
use crate::lattice::{twist_power, PlumbingTree, TreeError, TwistLetter};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CatalogError {
    #[error("bad parameter: {0}")]
    BadParameter(String),
    #[error("part {index} is not in vertex-block form along its path: {reason}")]
    NotBlockForm { index: usize, reason: String },
    #[error("parts have different sphere dimensions")]
    MixedDimension,
    #[error(transparent)]
    Tree(#[from] TreeError),
    #[error(transparent)]
    Fibration(#[from] FibrationError),
}

fn bad(msg: impl Into<String>) -> CatalogError {
    CatalogError::BadParameter(msg.into())
}

/// Named plumbing trees.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TreeSpec {
    /// Path on `m` vertices.
    A(usize),
    /// `m` vertices: a path of `m - 1` with a leaf at its second-to-last vertex.
    D(usize),
    /// `k` in 6..=8.
    E(usize),
    /// Path `1..=m` plus vertex `m + 1` attached at `j`.
    T(usize, usize),
    Explicit {
        vertices: usize,
        edges: Vec<(usize, usize)>,
    },
}

impl TreeSpec {
    pub fn build(&self, n: u32) -> Result<PlumbingTree, CatalogError> {
        match *self {
            TreeSpec::A(m) => {
                if m == 0 {
                    return Err(bad("A(m) needs m >= 1"));
                }
                Ok(PlumbingTree::a_type(m, n)?)
            }
            TreeSpec::D(m) => {
                if m < 4 {
                    return Err(bad("D(m) needs m >= 4"));
                }
                TreeSpec::T(m - 1, m - 2).build(n)
            }
            TreeSpec::E(k) => {
                if !(6..=8).contains(&k) {
                    return Err(bad("E(k) needs k in 6..=8"));
                }
                TreeSpec::T(k - 1, 3).build(n)
            }
            TreeSpec::T(m, j) => {
                if m == 0 || j == 0 || j > m {
                    return Err(bad(format!("T(m, j) needs 1 <= j <= m, got m={m}, j={j}")));
                }
                let edges = (1..m).map(|i| (i, i + 1)).chain(std::iter::once((j, m + 1)));
                Ok(PlumbingTree::new(m + 1, edges, n)?)
            }
            TreeSpec::Explicit {
                vertices,
                ref edges,
            } => Ok(PlumbingTree::new(vertices, edges.iter().copied(), n)?),
        }
    }
}

impl fmt::Display for TreeSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TreeSpec::A(m) => write!(f, "A{m}"),
            TreeSpec::D(m) => write!(f, "D{m}"),
            TreeSpec::E(k) => write!(f, "E{k}"),
            TreeSpec::T(m, j) => write!(f, "T({m},{j})"),
            TreeSpec::Explicit { vertices, .. } => write!(f, "tree on {vertices} vertices"),
        }
    }
}

fn a2(n: u32) -> Result<PlumbingTree, CatalogError> {
    Ok(PlumbingTree::a_type(2, n)?)
}

fn bare(v: usize, count: usize) -> impl Iterator<Item = (usize, Vec<TwistLetter>)> {
    std::iter::repeat_n((v, Vec::new()), count)
}

/// One-vertex fiber with `m + 1` copies of its sphere: the `A_m` Milnor fiber.
pub fn build_a_milnor(m: usize, n: u32) -> Result<AbstractLF, CatalogError> {
    if m == 0 {
        return Err(bad("A-milnor needs m >= 1"));
    }
    Ok(AbstractLF::from_words(PlumbingTree::a_type(1, n)?, bare(1, m + 1))?)
}

/// `(A_2; alpha x (2k+1), tau_alpha^{2k}(beta), beta)`.
pub fn build_x(k: usize, n: u32) -> Result<AbstractLF, CatalogError> {
    if k == 0 {
        return Err(bad("X needs k >= 1"));
    }
    let cycles = bare(1, 2 * k + 1)
        .chain(std::iter::once((2, twist_power(1, 2 * k as i64))))
        .chain(bare(2, 1));
    Ok(AbstractLF::from_words(a2(n)?, cycles)?)
}

/// `(A_2; alpha x (2k+1), beta, beta)`.
pub fn build_y(k: usize, n: u32) -> Result<AbstractLF, CatalogError> {
    if k == 0 {
        return Err(bad("Y needs k >= 1"));
    }
    Ok(AbstractLF::from_words(a2(n)?, bare(1, 2 * k + 1).chain(bare(2, 2)))?)
}

/// `(A_k; alpha_1 x (i_1+1), ..., alpha_k x (i_k+1))`.
pub fn build_z(i: &[usize], n: u32) -> Result<AbstractLF, CatalogError> {
    if i.is_empty() {
        return Err(bad("Z needs at least one parameter"));
    }
    if i.contains(&0) {
        return Err(bad("Z parameters must be >= 1"));
    }
    let tree = PlumbingTree::a_type(i.len(), n)?;
    let cycles = i
        .iter()
        .enumerate()
        .flat_map(|(j, &c)| bare(j + 1, c + 1));
    Ok(AbstractLF::from_words(tree, cycles)?)
}

/// `(A_2; alpha x m, beta, beta)`.
pub fn build_q(m: usize, n: u32) -> Result<AbstractLF, CatalogError> {
    if m == 0 {
        return Err(bad("Q needs m >= 1"));
    }
    Ok(AbstractLF::from_words(a2(n)?, bare(1, m).chain(bare(2, 2)))?)
}

/// `(A_2; alpha x j, beta, alpha x (m+1-j), beta)`, whose total space is
/// taken to be the plumbing along `T(m, j)`.
pub fn build_p_tmj(m: usize, j: usize, n: u32) -> Result<AbstractLF, CatalogError> {
    if m < 2 {
        return Err(bad("P(T(m, j)) needs m >= 2"));
    }
    if j == 0 || j > m {
        return Err(bad(format!("P(T(m, j)) needs 1 <= j <= m, got m={m}, j={j}")));
    }
    let cycles = bare(1, j)
        .chain(bare(2, 1))
        .chain(bare(1, m + 1 - j))
        .chain(bare(2, 1));
    Ok(AbstractLF::from_words(a2(n)?, cycles)?)
}

/// Join path-fiber parts in vertex-block form end to end.
///
/// Each part's blocks must follow its path order (up to rotation). The
/// result is the path on all vertices with the parts' blocks concatenated.
pub fn end_connect_sum_fibration(parts: &[AbstractLF]) -> Result<AbstractLF, CatalogError> {
    let Some(first) = parts.first() else {
        return Err(bad("end connected sum needs at least one part"));
    };
    let n = first.sphere_dim();
    let mut counts: Vec<usize> = Vec::new();
    for (index, part) in parts.iter().enumerate() {
        if part.sphere_dim() != n {
            return Err(CatalogError::MixedDimension);
        }
        let not_block = |reason: String| CatalogError::NotBlockForm { index, reason };
        let order = part
            .fiber()
            .path_order()
            .ok_or_else(|| not_block("fiber is not a path".into()))?;
        let blocks = detect_blocks(part).map_err(|e| not_block(e.to_string()))?;
        let mut by_pos: Vec<(usize, usize)> = blocks
            .blocks
            .iter()
            .map(|&(v, c)| (order.iter().position(|&u| u == v).expect("vertex on path"), c))
            .collect();
        let start = by_pos.iter().position(|&(p, _)| p == 0).expect("all vertices used");
        by_pos.rotate_left(start);
        if by_pos.iter().enumerate().any(|(k, &(p, _))| p != k) {
            return Err(not_block("blocks do not follow the path order".into()));
        }
        counts.extend(by_pos.iter().map(|&(_, c)| c));
    }
    let tree = PlumbingTree::a_type(counts.len(), n)?;
    let cycles = counts
        .iter()
        .enumerate()
        .flat_map(|(j, &c)| bare(j + 1, c));
    Ok(AbstractLF::from_words(tree, cycles)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cycle_counts() {
        for k in 1..=8 {
            assert_eq!(build_x(k, 2).unwrap().cycle_count(), 2 * k + 3);
            assert_eq!(build_y(k, 3).unwrap().cycle_count(), 2 * k + 3);
            assert_eq!(build_x(k, 2).unwrap().cycle(2 * k + 2).unwrap().word().len(), 2 * k);
        }
        for m in 1..=8 {
            assert_eq!(build_a_milnor(m, 2).unwrap().cycle_count(), m + 1);
            assert_eq!(build_q(m, 2).unwrap().cycle_count(), m + 2);
        }
        for m in 2..=8 {
            for j in 1..=m {
                assert_eq!(build_p_tmj(m, j, 4).unwrap().cycle_count(), m + 3);
            }
        }
    }

    #[test]
    fn parameter_errors() {
        assert!(build_x(0, 2).is_err());
        assert!(build_y(0, 2).is_err());
        assert!(build_z(&[], 2).is_err());
        assert!(build_z(&[1, 0], 2).is_err());
        assert!(build_q(0, 2).is_err());
        assert!(build_p_tmj(3, 4, 2).is_err());
        assert!(build_p_tmj(3, 0, 2).is_err());
        assert!(build_a_milnor(0, 2).is_err());
        assert!(build_x(1, 1).is_err());
        assert!(TreeSpec::T(3, 4).build(2).is_err());
        assert!(TreeSpec::E(9).build(2).is_err());
    }

    #[test]
    fn y_is_q() {
        for k in 1..=4 {
            assert_eq!(build_y(k, 2).unwrap(), build_q(2 * k + 1, 2).unwrap());
        }
    }

    #[test]
    fn z_examples() {
        let z = build_z(&[2, 1], 3).unwrap();
        assert_eq!(z, AbstractLF::from_vertices(PlumbingTree::a_type(2, 3).unwrap(), &[1, 1, 1, 2, 2]).unwrap());
        assert_eq!(build_z(&[4], 2).unwrap(), build_a_milnor(4, 2).unwrap());
    }

    #[test]
    fn p_tmj_example() {
        let p = build_p_tmj(3, 2, 2).unwrap();
        let expect = AbstractLF::from_vertices(PlumbingTree::a_type(2, 2).unwrap(), &[1, 1, 2, 1, 1, 2]).unwrap();
        assert_eq!(p, expect);
    }

    #[test]
    fn named_trees() {
        let e6 = TreeSpec::E(6).build(2).unwrap();
        assert_eq!(e6.vertex_count(), 6);
        assert_eq!(e6.degree(3), 3);
        let d5 = TreeSpec::D(5).build(2).unwrap();
        assert_eq!(d5.vertex_count(), 5);
        assert_eq!(d5.degree(3), 3);
        assert!(TreeSpec::T(5, 1).build(2).unwrap().is_path());
        assert!(TreeSpec::T(5, 5).build(2).unwrap().is_path());
    }

    #[test]
    fn end_sums() {
        let p = build_a_milnor(1, 2).unwrap();
        let three = end_connect_sum_fibration(&[p.clone(), p.clone(), p.clone()]).unwrap();
        assert_eq!(three, build_z(&[1, 1, 1], 2).unwrap());
        assert_eq!(end_connect_sum_fibration(&[p.clone()]).unwrap(), p);
        let z = end_connect_sum_fibration(&[build_a_milnor(2, 2).unwrap(), p]).unwrap();
        assert_eq!(z, build_z(&[2, 1], 2).unwrap());
        let bad = end_connect_sum_fibration(&[build_p_tmj(3, 2, 2).unwrap()]);
        assert!(matches!(bad, Err(CatalogError::NotBlockForm { index: 0, .. })));
    }
}
