//! Middle homology of a plumbing fiber.
//!
//! A plumbing of `n`-spheres along a tree has free middle homology with one
//! basis vector per vertex sphere. This module holds the tree itself, the
//! intersection pairing on that lattice, the Picard–Lefschetz action of a
//! Dehn twist along a vertex sphere, and the Smith normal form used for the
//! total-space homology computation. All arithmetic is exact.

use std::collections::{BTreeSet, VecDeque};
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TreeError {
    #[error("a plumbing tree needs at least one vertex")]
    Empty,
    #[error("sphere dimension must be at least 2, got {0}")]
    SphereDim(u32),
    #[error("edge ({0}, {1}) references a vertex outside 1..={2}")]
    VertexOutOfRange(usize, usize, usize),
    #[error("self-loop at vertex {0}")]
    SelfLoop(usize),
    #[error("duplicate edge ({0}, {1})")]
    DuplicateEdge(usize, usize),
    #[error("expected {expected} edges for {vertices} vertices, got {got}")]
    EdgeCount {
        vertices: usize,
        expected: usize,
        got: usize,
    },
    #[error("edges do not connect all vertices")]
    Disconnected,
}

/// A tree of Lagrangian vertex spheres of dimension `sphere_dim`.
///
/// Vertices are numbered `1..=vertex_count`. Edges are stored as ordered pairs
/// `(low, high)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PlumbingTree {
    vertex_count: usize,
    edges: BTreeSet<(usize, usize)>,
    sphere_dim: u32,
    path_order: Option<Vec<usize>>,
}

impl PlumbingTree {
    pub fn new(
        vertex_count: usize,
        edges: impl IntoIterator<Item = (usize, usize)>,
        sphere_dim: u32,
    ) -> Result<Self, TreeError> {
        if vertex_count == 0 {
            return Err(TreeError::Empty);
        }
        if sphere_dim < 2 {
            return Err(TreeError::SphereDim(sphere_dim));
        }
        let mut set = BTreeSet::new();
        let mut got = 0;
        for (a, b) in edges {
            got += 1;
            if a == 0 || b == 0 || a > vertex_count || b > vertex_count {
                return Err(TreeError::VertexOutOfRange(a, b, vertex_count));
            }
            if a == b {
                return Err(TreeError::SelfLoop(a));
            }
            let e = (a.min(b), a.max(b));
            if !set.insert(e) {
                return Err(TreeError::DuplicateEdge(e.0, e.1));
            }
        }
        if got != vertex_count - 1 {
            return Err(TreeError::EdgeCount {
                vertices: vertex_count,
                expected: vertex_count - 1,
                got,
            });
        }
        let mut tree = PlumbingTree {
            vertex_count,
            edges: set,
            sphere_dim,
            path_order: None,
        };
        if !tree.is_connected() {
            return Err(TreeError::Disconnected);
        }
        tree.path_order = tree.compute_path_order();
        Ok(tree)
    }

    /// The path graph `1 - 2 - ... - k`.
    pub fn a_type(k: usize, sphere_dim: u32) -> Result<Self, TreeError> {
        Self::new(k, (1..k).map(|i| (i, i + 1)), sphere_dim)
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn sphere_dim(&self) -> u32 {
        self.sphere_dim
    }

    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.edges.iter().copied()
    }

    pub fn adjacent(&self, u: usize, v: usize) -> bool {
        self.edges.contains(&(u.min(v), u.max(v)))
    }

    pub fn neighbors(&self, v: usize) -> Vec<usize> {
        self.edges
            .iter()
            .filter_map(|&(a, b)| {
                if a == v {
                    Some(b)
                } else if b == v {
                    Some(a)
                } else {
                    None
                }
            })
            .collect()
    }

    pub fn degree(&self, v: usize) -> usize {
        self.edges.iter().filter(|&&(a, b)| a == v || b == v).count()
    }

    pub fn is_leaf(&self, v: usize) -> bool {
        self.vertex_count > 1 && self.degree(v) == 1
    }

    pub fn contains_vertex(&self, v: usize) -> bool {
        (1..=self.vertex_count).contains(&v)
    }

    /// True when the tree is a path graph (an A-type fiber).
    pub fn is_path(&self) -> bool {
        self.path_order.is_some()
    }

    /// Vertices listed along the path, starting from the endpoint with the
    /// smaller label. `None` when the tree branches.
    pub fn path_order(&self) -> Option<&[usize]> {
        self.path_order.as_deref()
    }

    /// 1-based position of `v` along the path, i.e. the index of the
    /// matching arc that models the vertex sphere.
    pub fn path_position(&self, v: usize) -> Option<usize> {
        self.path_order
            .as_ref()
            .and_then(|order| order.iter().position(|&u| u == v))
            .map(|p| p + 1)
    }

    /// Attach a new leaf vertex `vertex_count + 1` at `attach`.
    pub fn with_leaf(&self, attach: usize) -> Result<Self, TreeError> {
        let v = self.vertex_count + 1;
        Self::new(
            v,
            self.edges.iter().copied().chain(std::iter::once((attach, v))),
            self.sphere_dim,
        )
    }

    /// Remove the highest-labelled vertex, which must be a leaf.
    pub fn without_last_vertex(&self) -> Option<Self> {
        let v = self.vertex_count;
        if !self.is_leaf(v) {
            return None;
        }
        Self::new(
            v - 1,
            self.edges.iter().copied().filter(|&(a, b)| a != v && b != v),
            self.sphere_dim,
        )
        .ok()
    }

    fn is_connected(&self) -> bool {
        let mut seen = vec![false; self.vertex_count + 1];
        let mut queue = VecDeque::from([1]);
        seen[1] = true;
        let mut count = 1;
        while let Some(u) = queue.pop_front() {
            for w in self.neighbors(u) {
                if !seen[w] {
                    seen[w] = true;
                    count += 1;
                    queue.push_back(w);
                }
            }
        }
        count == self.vertex_count
    }

    fn compute_path_order(&self) -> Option<Vec<usize>> {
        if self.vertex_count == 1 {
            return Some(vec![1]);
        }
        if (1..=self.vertex_count).any(|v| self.degree(v) > 2) {
            return None;
        }
        let start = (1..=self.vertex_count).find(|&v| self.degree(v) == 1)?;
        let mut order = vec![start];
        let mut prev = 0;
        let mut cur = start;
        while order.len() < self.vertex_count {
            let next = self.neighbors(cur).into_iter().find(|&w| w != prev)?;
            order.push(next);
            prev = cur;
            cur = next;
        }
        Some(order)
    }
}

impl fmt::Display for PlumbingTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "tree(V={}, n={}, edges=[", self.vertex_count, self.sphere_dim)?;
        for (i, (a, b)) in self.edges.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{a}-{b}")?;
        }
        write!(f, "])")
    }
}

/// One Dehn twist letter: `exponent` is `+1` or `-1`. Serialized as the
/// pair `[vertex, exponent]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "(usize, i8)", into = "(usize, i8)")]
pub struct TwistLetter {
    pub vertex: usize,
    pub exponent: i8,
}

impl TwistLetter {
    pub fn new(vertex: usize, exponent: i8) -> Self {
        debug_assert!(exponent == 1 || exponent == -1);
        TwistLetter { vertex, exponent }
    }

    pub fn inverse(self) -> Self {
        TwistLetter {
            vertex: self.vertex,
            exponent: -self.exponent,
        }
    }
}

impl TryFrom<(usize, i8)> for TwistLetter {
    type Error = String;

    fn try_from((vertex, exponent): (usize, i8)) -> Result<Self, Self::Error> {
        if exponent != 1 && exponent != -1 {
            return Err(format!("twist exponent must be 1 or -1, got {exponent}"));
        }
        Ok(TwistLetter { vertex, exponent })
    }
}

impl From<TwistLetter> for (usize, i8) {
    fn from(l: TwistLetter) -> Self {
        (l.vertex, l.exponent)
    }
}

impl fmt::Display for TwistLetter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.vertex, if self.exponent > 0 { '+' } else { '-' })
    }
}

/// `count` copies of `tau_vertex^{sign(exponent)}` for a signed power.
pub fn twist_power(vertex: usize, exponent: i64) -> Vec<TwistLetter> {
    let sign = if exponent >= 0 { 1 } else { -1 };
    vec![TwistLetter::new(vertex, sign); exponent.unsigned_abs() as usize]
}

/// Inverse of a composed word.
pub fn inverse_word(word: &[TwistLetter]) -> Vec<TwistLetter> {
    word.iter().rev().map(|l| l.inverse()).collect()
}

/// Cancel adjacent inverse pairs.
pub fn free_reduce(word: impl IntoIterator<Item = TwistLetter>) -> Vec<TwistLetter> {
    let mut out: Vec<TwistLetter> = Vec::new();
    for l in word {
        if out.last() == Some(&l.inverse()) {
            out.pop();
        } else {
            out.push(l);
        }
    }
    out
}

/// Integer coefficients of a middle-homology class in the vertex-sphere basis.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct HomClass(pub Vec<BigInt>);

impl HomClass {
    pub fn zero(len: usize) -> Self {
        HomClass(vec![BigInt::zero(); len])
    }

    /// The class of vertex sphere `v` (1-based).
    pub fn basis(len: usize, v: usize) -> Self {
        let mut c = Self::zero(len);
        c.0[v - 1] = BigInt::one();
        c
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        HomClass(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn neg(&self) -> Self {
        HomClass(self.0.iter().map(|c| -c).collect())
    }

    pub fn equal_up_to_sign(&self, other: &HomClass) -> bool {
        self == other || *self == other.neg()
    }

    fn add_scaled_basis(&mut self, v: usize, scale: &BigInt) {
        self.0[v - 1] += scale;
    }
}

impl fmt::Display for HomClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

/// The intersection pairing on the middle homology of the fiber.
///
/// Symmetric with diagonal `-2` when `n` is even; skew with zero diagonal
/// when `n` is odd. An edge `{i, j}` with `i < j` has `entry(i, j) = +1` and
/// `entry(j, i) = (-1)^n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntersectionForm {
    sphere_dim: u32,
    matrix: Vec<Vec<i64>>,
}

pub fn intersection_form(tree: &PlumbingTree) -> IntersectionForm {
    let v = tree.vertex_count();
    let even = tree.sphere_dim() % 2 == 0;
    let mut matrix = vec![vec![0i64; v]; v];
    for (i, row) in matrix.iter_mut().enumerate() {
        row[i] = if even { -2 } else { 0 };
    }
    for (a, b) in tree.edges() {
        matrix[a - 1][b - 1] = 1;
        matrix[b - 1][a - 1] = if even { 1 } else { -1 };
    }
    IntersectionForm {
        sphere_dim: tree.sphere_dim(),
        matrix,
    }
}

impl IntersectionForm {
    pub fn dim(&self) -> usize {
        self.matrix.len()
    }

    pub fn sphere_dim(&self) -> u32 {
        self.sphere_dim
    }

    pub fn is_symmetric(&self) -> bool {
        self.sphere_dim % 2 == 0
    }

    pub fn entry(&self, i: usize, j: usize) -> i64 {
        self.matrix[i - 1][j - 1]
    }

    pub fn matrix(&self) -> &[Vec<i64>] {
        &self.matrix
    }

    pub fn pair(&self, x: &HomClass, y: &HomClass) -> BigInt {
        let mut total = BigInt::zero();
        for (i, xi) in x.0.iter().enumerate() {
            if xi.is_zero() {
                continue;
            }
            for (j, yj) in y.0.iter().enumerate() {
                let m = self.matrix[i][j];
                if m != 0 && !yj.is_zero() {
                    total += xi * yj * m;
                }
            }
        }
        total
    }

    /// `<x, delta_v>`.
    pub fn pair_with_vertex(&self, x: &HomClass, v: usize) -> BigInt {
        x.0.iter()
            .zip(self.matrix.iter())
            .filter(|(_, row)| row[v - 1] != 0)
            .map(|(xi, row)| xi * row[v - 1])
            .sum()
    }
}

/// Homology action of `tau_v^{sign}`.
///
/// Even `n`: the reflection `x - (2<x,d>/<d,d>) d = x + <x,d> d`, an
/// involution. Odd `n`: the transvection `x + sign <x,d> d`.
pub fn picard_lefschetz(form: &IntersectionForm, x: &HomClass, v: usize, sign: i8) -> HomClass {
    let p = form.pair_with_vertex(x, v);
    let mut out = x.clone();
    if form.is_symmetric() || sign >= 0 {
        out.add_scaled_basis(v, &p);
    } else {
        out.add_scaled_basis(v, &-p);
    }
    out
}

/// Apply a composed twist word. The word reads as a composition, leftmost
/// letter outermost, so the last letter acts first.
pub fn apply_twist_word(form: &IntersectionForm, word: &[TwistLetter], x: &HomClass) -> HomClass {
    word.iter()
        .rev()
        .fold(x.clone(), |acc, l| picard_lefschetz(form, &acc, l.vertex, l.exponent))
}

/// Invariant factors of an integer matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SmithForm {
    /// Positive invariant factors `d_1 | d_2 | ...`, one per unit of rank.
    pub factors: Vec<BigInt>,
    pub rank: usize,
}

impl SmithForm {
    /// Factors greater than one.
    pub fn torsion(&self) -> Vec<BigInt> {
        self.factors.iter().filter(|d| !d.is_one()).cloned().collect()
    }
}

/// Smith normal form by pivoting on the smallest nonzero entry.
pub fn smith_normal_form(matrix: &[Vec<BigInt>]) -> SmithForm {
    let rows = matrix.len();
    let cols = matrix.first().map_or(0, Vec::len);
    let mut a: Vec<Vec<BigInt>> = matrix.to_vec();
    let mut diag: Vec<BigInt> = Vec::new();

    for t in 0..rows.min(cols) {
        loop {
            let Some((pi, pj)) = smallest_nonzero(&a, t) else {
                return finish(diag);
            };
            a.swap(t, pi);
            for row in a.iter_mut() {
                row.swap(t, pj);
            }
            let mut clean = true;
            for i in t + 1..rows {
                if a[i][t].is_zero() {
                    continue;
                }
                let q = a[i][t].div_floor(&a[t][t]);
                for j in t..cols {
                    let sub = &q * &a[t][j];
                    a[i][j] -= sub;
                }
                if !a[i][t].is_zero() {
                    clean = false;
                }
            }
            for j in t + 1..cols {
                if a[t][j].is_zero() {
                    continue;
                }
                let q = a[t][j].div_floor(&a[t][t]);
                for row in a.iter_mut().take(rows).skip(t) {
                    let sub = &q * &row[t];
                    row[j] -= sub;
                }
                if !a[t][j].is_zero() {
                    clean = false;
                }
            }
            if !clean {
                continue;
            }
            // Pivot must divide the remaining block; otherwise fold a bad row in.
            let bad = (t + 1..rows)
                .find(|&i| (t + 1..cols).any(|j| !(&a[i][j] % &a[t][t]).is_zero()));
            match bad {
                Some(i) => {
                    for j in t..cols {
                        let add = a[i][j].clone();
                        a[t][j] += add;
                    }
                }
                None => break,
            }
        }
        diag.push(a[t][t].abs());
    }
    finish(diag)
}

fn smallest_nonzero(a: &[Vec<BigInt>], t: usize) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize)> = None;
    for (i, row) in a.iter().enumerate().skip(t) {
        for (j, x) in row.iter().enumerate().skip(t) {
            if x.is_zero() {
                continue;
            }
            if best.is_none_or(|(bi, bj)| x.abs() < a[bi][bj].abs()) {
                best = Some((i, j));
            }
        }
    }
    best
}

fn finish(mut diag: Vec<BigInt>) -> SmithForm {
    // Smallest-pivot elimination already yields a divisibility chain; the
    // gcd/lcm sweep is kept for safety on degenerate inputs.
    for i in 0..diag.len() {
        for j in i + 1..diag.len() {
            let g = diag[i].gcd(&diag[j]);
            let l = diag[i].lcm(&diag[j]);
            diag[i] = g;
            diag[j] = l;
        }
    }
    SmithForm {
        rank: diag.len(),
        factors: diag,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn big(rows: &[&[i64]]) -> Vec<Vec<BigInt>> {
        rows.iter()
            .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
            .collect()
    }

    #[test]
    fn rejects_non_trees() {
        assert_eq!(PlumbingTree::new(0, [], 2), Err(TreeError::Empty));
        assert_eq!(PlumbingTree::new(2, [(1, 2)], 1), Err(TreeError::SphereDim(1)));
        assert!(matches!(
            PlumbingTree::new(3, [(1, 2)], 2),
            Err(TreeError::EdgeCount { .. })
        ));
        assert!(matches!(
            PlumbingTree::new(4, [(1, 2), (2, 1), (3, 4)], 2),
            Err(TreeError::DuplicateEdge(1, 2))
        ));
        assert!(matches!(
            PlumbingTree::new(4, [(1, 2), (3, 4), (4, 3)], 2),
            Err(TreeError::DuplicateEdge(3, 4))
        ));
        assert!(matches!(
            PlumbingTree::new(4, [(1, 2), (2, 3), (1, 3)], 2),
            Err(TreeError::Disconnected)
        ));
        assert!(matches!(
            PlumbingTree::new(2, [(1, 3)], 2),
            Err(TreeError::VertexOutOfRange(1, 3, 2))
        ));
    }

    #[test]
    fn path_detection() {
        let t = PlumbingTree::new(3, [(3, 1), (1, 2)], 2).unwrap();
        assert_eq!(t.path_order(), Some(&[2, 1, 3][..]));
        assert_eq!(t.path_position(3), Some(3));
        let star = PlumbingTree::new(4, [(1, 2), (1, 3), (1, 4)], 2).unwrap();
        assert!(!star.is_path());
        assert!(PlumbingTree::a_type(1, 3).unwrap().is_path());
    }

    #[test]
    fn forms_on_small_trees() {
        let a2 = PlumbingTree::a_type(2, 3).unwrap();
        assert_eq!(intersection_form(&a2).matrix(), &[vec![0, 1], vec![-1, 0]]);
        let a2 = PlumbingTree::a_type(2, 2).unwrap();
        assert_eq!(intersection_form(&a2).matrix(), &[vec![-2, 1], vec![1, -2]]);
        let a1 = PlumbingTree::a_type(1, 4).unwrap();
        assert_eq!(intersection_form(&a1).matrix(), &[vec![-2]]);
    }

    #[test]
    fn twist_of_own_sphere() {
        for n in [2, 3] {
            let t = PlumbingTree::a_type(3, n).unwrap();
            let form = intersection_form(&t);
            let d = HomClass::basis(3, 2);
            let img = picard_lefschetz(&form, &d, 2, 1);
            if n % 2 == 0 {
                assert_eq!(img, d.neg());
            } else {
                assert_eq!(img, d);
            }
        }
    }

    #[test]
    fn even_twist_squared_is_identity_on_beta() {
        let form = intersection_form(&PlumbingTree::a_type(2, 2).unwrap());
        let beta = HomClass::basis(2, 2);
        let word = twist_power(1, 2);
        assert_eq!(apply_twist_word(&form, &word, &beta), beta);
    }

    #[test]
    fn odd_two_step_word_sends_beta_to_alpha() {
        let form = intersection_form(&PlumbingTree::a_type(2, 3).unwrap());
        let word = [TwistLetter::new(2, -1), TwistLetter::new(1, -1)];
        let img = apply_twist_word(&form, &word, &HomClass::basis(2, 2));
        assert_eq!(img, HomClass::basis(2, 1));
    }

    #[test]
    fn free_reduction() {
        let w = [
            TwistLetter::new(1, 1),
            TwistLetter::new(2, 1),
            TwistLetter::new(2, -1),
            TwistLetter::new(1, -1),
            TwistLetter::new(3, 1),
        ];
        assert_eq!(free_reduce(w), vec![TwistLetter::new(3, 1)]);
    }

    #[test]
    fn snf_small_cases() {
        let s = smith_normal_form(&big(&[&[2, 0], &[0, 3]]));
        assert_eq!(s.factors, vec![BigInt::from(1), BigInt::from(6)]);
        assert_eq!(s.rank, 2);
        let z = smith_normal_form(&big(&[&[0, 0], &[0, 0]]));
        assert_eq!(z.rank, 0);
        assert!(z.factors.is_empty());
        let id = smith_normal_form(&big(&[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1]]));
        assert_eq!(id.factors, vec![BigInt::from(1); 3]);
        let empty = smith_normal_form(&[]);
        assert_eq!(empty.rank, 0);
    }

    #[test]
    fn snf_nonsquare() {
        let s = smith_normal_form(&big(&[&[2, 4, 4], &[-6, 6, 12], &[10, -4, -16]]));
        assert_eq!(
            s.factors,
            vec![BigInt::from(2), BigInt::from(6), BigInt::from(12)]
        );
        let t = smith_normal_form(&big(&[&[1, 1], &[1, 1], &[0, 2]]));
        assert_eq!(t.factors, vec![BigInt::from(1), BigInt::from(2)]);
    }
}
