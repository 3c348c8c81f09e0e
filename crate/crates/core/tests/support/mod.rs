//! Independent reference computations used to check the engines.
#![allow(dead_code)]

use lefschetz_core::{
    AbstractLF, BraidLetter, Direction, Mode, Move, PlumbingTree, SmithForm, TwistLetter,
};
use num_bigint::BigInt;
use num_traits::ToPrimitive;
use rand::seq::SliceRandom;
use rand::Rng;

// ---------------------------------------------------------------------------
// Free group on the punctures, with the Artin action of the braid group.
// Letter `+k` is the loop `x_k` around puncture `k`, `-k` its inverse.

pub fn fg_reduce(word: &[i32]) -> Vec<i32> {
    let mut out: Vec<i32> = Vec::with_capacity(word.len());
    for &l in word {
        if out.last() == Some(&-l) {
            out.pop();
        } else {
            out.push(l);
        }
    }
    out
}

fn artin_image(letter: i32, i: i32, sign: i8) -> Vec<i32> {
    let k = letter.abs();
    let image = if sign > 0 {
        if k == i {
            vec![i, i + 1, -i]
        } else if k == i + 1 {
            vec![i]
        } else {
            vec![k]
        }
    } else if k == i {
        vec![i + 1]
    } else if k == i + 1 {
        vec![-(i + 1), i, i + 1]
    } else {
        vec![k]
    };
    if letter > 0 {
        image
    } else {
        image.iter().rev().map(|l| -l).collect()
    }
}

pub fn artin_apply(word: &[i32], l: BraidLetter) -> Vec<i32> {
    let i = l.index as i32;
    let subst: Vec<i32> = word.iter().flat_map(|&x| artin_image(x, i, l.sign)).collect();
    fg_reduce(&subst)
}

/// Cyclically reduced, rotation-minimal representative of a conjugacy class.
pub fn conjugacy_key(word: &[i32]) -> Vec<i32> {
    let mut w = fg_reduce(word);
    while w.len() >= 2 && w[0] == -w[w.len() - 1] {
        w.remove(0);
        w.pop();
    }
    (0..w.len().max(1))
        .map(|r| {
            let mut v = w.clone();
            v.rotate_left(r.min(w.len()));
            v
        })
        .min()
        .unwrap_or_default()
}

/// Curve bounding the image of the standard arc `a_i` under the braid word
/// (leftmost letter applied last), as a conjugacy class.
pub fn arc_oracle_key(word: &[BraidLetter], i: usize) -> Vec<i32> {
    let mut w = vec![i as i32, i as i32 + 1];
    for &l in word.iter().rev() {
        w = artin_apply(&w, l);
    }
    conjugacy_key(&w)
}

/// All braid words of length `len` on `gens` generators.
pub fn all_braid_words(gens: usize, len: usize) -> Vec<Vec<BraidLetter>> {
    let letters: Vec<BraidLetter> = (1..=gens)
        .flat_map(|i| [BraidLetter::new(i, 1), BraidLetter::new(i, -1)])
        .collect();
    let mut words = vec![Vec::new()];
    for _ in 0..len {
        words = words
            .into_iter()
            .flat_map(|w| {
                letters.iter().map(move |&l| {
                    let mut v = w.clone();
                    v.push(l);
                    v
                })
            })
            .collect();
    }
    words
}

// ---------------------------------------------------------------------------
// Smith normal form by determinantal divisors.

fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}

fn det(m: &[Vec<i64>]) -> i64 {
    match m.len() {
        0 => 1,
        1 => m[0][0],
        _ => (0..m.len())
            .map(|j| {
                let minor: Vec<Vec<i64>> = m[1..]
                    .iter()
                    .map(|r| r.iter().enumerate().filter(|&(c, _)| c != j).map(|(_, &x)| x).collect())
                    .collect();
                let s = if j % 2 == 0 { 1 } else { -1 };
                s * m[0][j] * det(&minor)
            })
            .sum(),
    }
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![Vec::new()];
    }
    if n < k {
        return Vec::new();
    }
    let mut out = subsets(n - 1, k);
    for mut s in subsets(n - 1, k - 1) {
        s.push(n - 1);
        out.push(s);
    }
    out
}

/// Invariant factors `d_k / d_{k-1}` where `d_k` is the gcd of the `k x k`
/// minors.
pub fn snf_oracle(m: &[Vec<i64>]) -> (usize, Vec<i64>) {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut divisors = vec![1i64];
    for k in 1..=rows.min(cols) {
        let mut g = 0;
        for rs in subsets(rows, k) {
            for cs in subsets(cols, k) {
                let minor: Vec<Vec<i64>> = rs.iter().map(|&r| cs.iter().map(|&c| m[r][c]).collect()).collect();
                g = gcd(g, det(&minor));
            }
        }
        if g == 0 {
            break;
        }
        divisors.push(g);
    }
    let rank = divisors.len() - 1;
    let factors = (1..=rank).map(|k| divisors[k] / divisors[k - 1]).collect();
    (rank, factors)
}

pub fn smith_as_i64(s: &SmithForm) -> (usize, Vec<i64>) {
    (s.rank, s.factors.iter().map(|d| d.to_i64().expect("small factor")).collect())
}

pub fn to_big(m: &[Vec<i64>]) -> Vec<Vec<BigInt>> {
    m.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect()
}

// ---------------------------------------------------------------------------
// Lattice: intersection pairing and twists, computed from the edge list.

/// `pair[i][j]`: -2 / 0 on the diagonal for even / odd `n`; for an edge
/// `i < j`, `+1` at `(i, j)` and `(-1)^n` at `(j, i)`.
pub fn form_oracle(vertices: usize, edges: &[(usize, usize)], n: u32) -> Vec<Vec<i64>> {
    let even = n % 2 == 0;
    let mut m = vec![vec![0; vertices]; vertices];
    for (i, row) in m.iter_mut().enumerate() {
        row[i] = if even { -2 } else { 0 };
    }
    for &(a, b) in edges {
        let (i, j) = (a.min(b) - 1, a.max(b) - 1);
        m[i][j] = 1;
        m[j][i] = if even { 1 } else { -1 };
    }
    m
}

/// `tau_v^{sign}(x) = x + sign^{n+1} <x, d_v> d_v`.
pub fn twist_oracle(form: &[Vec<i64>], n: u32, x: &[i64], v: usize, sign: i8) -> Vec<i64> {
    let p: i64 = x.iter().zip(form).map(|(xi, row)| xi * row[v - 1]).sum();
    let s = if n % 2 == 0 { 1 } else { sign as i64 };
    let mut out = x.to_vec();
    out[v - 1] += s * p;
    out
}

pub fn word_oracle(form: &[Vec<i64>], n: u32, word: &[TwistLetter], x: &[i64]) -> Vec<i64> {
    word.iter()
        .rev()
        .fold(x.to_vec(), |acc, l| twist_oracle(form, n, &acc, l.vertex, l.exponent))
}

pub fn tree_edges(t: &PlumbingTree) -> Vec<(usize, usize)> {
    t.edges().collect()
}

// ---------------------------------------------------------------------------
// Random data.

pub fn random_class<R: Rng>(rng: &mut R, len: usize) -> Vec<i64> {
    (0..len).map(|_| rng.gen_range(-5..=5)).collect()
}

pub fn random_twist_word<R: Rng>(rng: &mut R, vertices: usize, max_len: usize) -> Vec<TwistLetter> {
    let len = rng.gen_range(0..=max_len);
    (0..len)
        .map(|_| TwistLetter::new(rng.gen_range(1..=vertices), if rng.gen_bool(0.5) { 1 } else { -1 }))
        .collect()
}

/// A word acting identically on spheres: a braid or commutation relator
/// or a cancelling pair.
pub fn random_relator<R: Rng>(rng: &mut R, tree: &PlumbingTree) -> Vec<TwistLetter> {
    let v = tree.vertex_count();
    let u = rng.gen_range(1..=v);
    let e: i8 = if rng.gen_bool(0.5) { 1 } else { -1 };
    let l = |x: usize, s: i8| TwistLetter::new(x, s);
    match rng.gen_range(0..3) {
        0 => vec![l(u, e), l(u, -e)],
        _ if v == 1 => vec![l(u, e), l(u, -e)],
        1 => {
            let w = *tree.neighbors(u).choose(rng).expect("connected tree");
            // u w u (w u w)^{-1}
            vec![l(u, e), l(w, e), l(u, e), l(w, -e), l(u, -e), l(w, -e)]
        }
        _ => {
            let far: Vec<usize> = (1..=v).filter(|&w| w != u && !tree.adjacent(u, w)).collect();
            match far.choose(rng) {
                Some(&w) => vec![l(u, e), l(w, e), l(u, -e), l(w, -e)],
                None => vec![l(u, e), l(u, -e)],
            }
        }
    }
}

/// A random fibration on a path fiber with every cycle a vertex sphere.
pub fn random_vertex_fibration<R: Rng>(rng: &mut R, max_v: usize, max_m: usize, n: u32) -> AbstractLF {
    let v = rng.gen_range(1..=max_v);
    let m = rng.gen_range(v.max(2)..=max_m);
    let mut vertices: Vec<usize> = (1..=v).collect();
    while vertices.len() < m {
        vertices.push(rng.gen_range(1..=v));
    }
    vertices.shuffle(rng);
    AbstractLF::from_vertices(PlumbingTree::a_type(v, n).expect("path"), &vertices).expect("valid")
}

/// Apply `steps` random legal Hurwitz or rotation moves.
pub fn random_walk<R: Rng>(rng: &mut R, f: &AbstractLF, steps: usize) -> AbstractLF {
    let mut g = f.clone();
    for _ in 0..steps {
        let m = g.cycle_count();
        let mv = if rng.gen_bool(0.2) {
            Move::CyclicShift {
                direction: if rng.gen_bool(0.5) { Direction::Left } else { Direction::Right },
            }
        } else {
            Move::Hurwitz {
                position: rng.gen_range(1..m),
                direction: if rng.gen_bool(0.5) { Direction::Left } else { Direction::Right },
            }
        };
        if let Ok(next) = g.apply_move(&mv, Mode::Weinstein) {
            g = next;
        }
    }
    g
}
