//! Fixed workloads shared by the benchmarks.

use lefschetz_core::{BraidLetter, HomClass, PlumbingTree, TwistLetter};
use num_bigint::BigInt;

/// A deterministic braid word cycling through the generators of a disk
/// with `points` marked points.
pub fn braid_workload(points: usize, len: usize) -> Vec<BraidLetter> {
    let gens = points - 1;
    (0..len)
        .map(|t| BraidLetter::new(1 + (t * 7 + t / 3) % gens, if t % 3 == 2 { -1 } else { 1 }))
        .collect()
}

/// The same pattern as twist letters on a path of `vertices` vertices.
pub fn twist_workload(vertices: usize, len: usize) -> Vec<TwistLetter> {
    braid_workload(vertices + 1, len)
        .into_iter()
        .map(|l| TwistLetter::new(l.index, l.sign))
        .collect()
}

/// A dense `rows x cols` integer matrix with small entries.
pub fn matrix_workload(rows: usize, cols: usize) -> Vec<Vec<BigInt>> {
    (0..rows)
        .map(|i| {
            (0..cols)
                .map(|j| BigInt::from(((i * 31 + j * 17 + i * j) % 11) as i64 - 5))
                .collect()
        })
        .collect()
}

pub fn path(vertices: usize, n: u32) -> PlumbingTree {
    PlumbingTree::a_type(vertices, n).expect("path tree")
}

pub fn unit(vertices: usize) -> HomClass {
    HomClass::basis(vertices, 1)
}
