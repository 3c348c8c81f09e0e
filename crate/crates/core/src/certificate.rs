//! Replayable certificates and the builtin move scripts.
//!
//! Each builtin is a fixed script of moves between catalog fibrations:
//! the reduction of `X_k` to the `A_{2k+1}` Milnor fiber, the smooth
//! replacement turning `X_k` into `Y_k`, the splitting steps of the
//! `Z`-families, and the shifts of the branch point in `P(T(m, j))`.

use std::fmt;

use thiserror::Error;

use crate::catalog::{build_a_milnor, build_p_tmj, build_q, build_x, build_y, build_z, CatalogError, TreeSpec};
use crate::fibration::{smooth_step, AbstractLF, Direction, FibrationError, Mode, Move};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CertificateError {
    #[error("{0}")]
    Unsupported(String),
    #[error(transparent)]
    Catalog(#[from] CatalogError),
}

fn unsupported(msg: impl Into<String>) -> CertificateError {
    CertificateError::Unsupported(msg.into())
}

/// An ordered, replayable list of moves between two fibrations.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Certificate {
    pub mode: Mode,
    pub start: AbstractLF,
    pub steps: Vec<Move>,
    pub claimed_end: AbstractLF,
    pub provenance: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RejectReason {
    IllegalMove(FibrationError),
    EndMismatch,
}

impl fmt::Display for RejectReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RejectReason::IllegalMove(e) => write!(f, "{e}"),
            RejectReason::EndMismatch => write!(f, "replay does not end at the claimed fibration"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    Accept,
    /// `step` is the 1-based index of the failing move, or one past the last
    /// step for an end mismatch.
    Reject { step: usize, reason: RejectReason },
}

impl Verdict {
    pub fn is_accept(&self) -> bool {
        matches!(self, Verdict::Accept)
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::Accept => write!(f, "accept"),
            Verdict::Reject { step, reason } => write!(f, "reject at step {step}: {reason}"),
        }
    }
}

impl Certificate {
    /// Replay every step, returning the final fibration.
    pub fn replay(&self) -> Result<AbstractLF, (usize, FibrationError)> {
        let mut state = self.start.clone();
        for (k, mv) in self.steps.iter().enumerate() {
            state = state.apply_move(mv, self.mode).map_err(|e| (k + 1, e))?;
        }
        Ok(state)
    }

    /// The same equivalence read backwards.
    pub fn reversed(&self) -> Result<Certificate, (usize, FibrationError)> {
        let mut state = self.start.clone();
        let mut inverses = Vec::with_capacity(self.steps.len());
        for (k, mv) in self.steps.iter().enumerate() {
            inverses.push(state.inverse_moves(mv));
            state = state.apply_move(mv, self.mode).map_err(|e| (k + 1, e))?;
        }
        Ok(Certificate {
            mode: self.mode,
            start: state,
            steps: inverses.into_iter().rev().flatten().collect(),
            claimed_end: self.start.clone(),
            provenance: format!("reverse of {}", self.provenance),
        })
    }
}

/// Deterministic replay check.
pub fn verify(cert: &Certificate) -> Verdict {
    match cert.replay() {
        Err((step, e)) => Verdict::Reject {
            step,
            reason: RejectReason::IllegalMove(e),
        },
        Ok(end) if end.canonical_key() == cert.claimed_end.canonical_key() => Verdict::Accept,
        Ok(_) => Verdict::Reject {
            step: cert.steps.len() + 1,
            reason: RejectReason::EndMismatch,
        },
    }
}

fn shift(direction: Direction) -> Move {
    Move::CyclicShift { direction }
}

fn hurwitz(position: usize, direction: Direction) -> Move {
    Move::Hurwitz {
        position,
        direction,
    }
}

fn rewrite_bare(position: usize, vertex: usize) -> Move {
    Move::RewriteCycle {
        position,
        base: vertex,
        word: Vec::new(),
        chain: None,
    }
}

fn certificate(mode: Mode, start: AbstractLF, steps: Vec<Move>, end: AbstractLF, provenance: String) -> Certificate {
    Certificate {
        mode,
        start,
        steps,
        claimed_end: end,
        provenance,
    }
}

fn step_for(n: u32) -> Result<i64, CertificateError> {
    smooth_step(n).ok_or_else(|| unsupported(format!("smooth moves are unavailable for odd n = {n}")))
}

/// `X_k` to the `A_{2k+1}` Milnor fiber in weinstein mode: move the twisted
/// cycle to the front, rotate it to the back, absorb it into `alpha` by one
/// more Hurwitz move, then destabilize `beta`.
pub fn x_to_a_milnor(k: usize, n: u32) -> Result<Certificate, CertificateError> {
    let start = build_x(k, n)?;
    let mut steps: Vec<Move> = (1..=2 * k + 1).rev().map(|p| hurwitz(p, Direction::Left)).collect();
    steps.push(shift(Direction::Left));
    steps.push(hurwitz(2 * k + 2, Direction::Left));
    steps.push(rewrite_bare(2 * k + 2, 1));
    steps.push(Move::Destabilize { position: 2 * k + 3 });
    let end = build_a_milnor(2 * k + 1, n)?;
    Ok(certificate(Mode::Weinstein, start, steps, end, format!("x-to-a-milnor k={k} n={n}")))
}

/// `X_k` to `Y_k` by one smooth replacement of `tau_alpha^{2k}(beta)`.
pub fn x_to_y_smooth(k: usize, n: u32) -> Result<Certificate, CertificateError> {
    let step = step_for(n)?;
    let exponent = 2 * k as i64;
    if exponent % step != 0 {
        return Err(unsupported(format!(
            "X_{k} and Y_{k} are only related by smooth replacement when 2k is a multiple of {step} at n = {n}"
        )));
    }
    let start = build_x(k, n)?;
    let steps = vec![Move::SmoothReplace {
        position: 2 * k + 2,
        vertex: 1,
        exponent,
    }];
    let end = build_y(k, n)?;
    Ok(certificate(Mode::Smooth, start, steps, end, format!("x-y-smooth k={k} n={n}")))
}

/// Smooth splitting `Z(prefix; s*a + b) -> Z(prefix; s*a; b)` with `s` the
/// smooth step: stabilize a new last vertex, trade `b` copies of the old last
/// sphere for the new one by Hurwitz moves, carry the twisted new sphere back
/// across the remaining block, untwist it by a smooth replacement, and
/// rotate it into place.
pub fn z_split(prefix: &[usize], a: usize, b: usize, n: u32) -> Result<Certificate, CertificateError> {
    let s = step_for(n)? as usize;
    if a == 0 || b == 0 {
        return Err(unsupported("z-split needs a >= 1 and b >= 1"));
    }
    let mut from: Vec<usize> = prefix.to_vec();
    from.push(s * a + b);
    let mut to: Vec<usize> = prefix.to_vec();
    to.extend([s * a, b]);
    let start = build_z(&from, n)?;
    let end = build_z(&to, n)?;

    let k = prefix.len() + 2;
    let pc: usize = prefix.iter().map(|i| i + 1).sum();
    let big = s * a + b + 1;
    let m = pc + big + 1;
    let mut steps = vec![
        shift(Direction::Right),
        Move::Stabilize { attach: k - 1 },
        shift(Direction::Left),
        shift(Direction::Left),
        hurwitz(m - 1, Direction::Right),
    ];
    for t in 0..b {
        steps.push(hurwitz(m - t - 1, Direction::Right));
        steps.push(rewrite_bare(m - t, k));
    }
    let mut pos = m - b;
    for _ in 0..=s * a {
        pos -= 1;
        steps.push(hurwitz(pos, Direction::Left));
    }
    steps.push(Move::SmoothReplace {
        position: pos,
        vertex: k - 1,
        exponent: -((s * a) as i64),
    });
    while pos > 1 {
        pos -= 1;
        steps.push(hurwitz(pos, Direction::Left));
    }
    steps.push(shift(Direction::Left));
    Ok(certificate(
        Mode::Smooth,
        start,
        steps,
        end,
        format!("z-split prefix={prefix:?} a={a} b={b} n={n}"),
    ))
}

/// Parameters of the `r`-th member (1-based) of the `Z`-family built from
/// `i = (i_1, ..., i_k)`: the first `r - 1` entries scaled by the smooth step,
/// then one merged entry.
pub fn z_family_member(i: &[usize], r: usize, n: u32) -> Result<Vec<usize>, CertificateError> {
    let s = step_for(n)? as usize;
    let k = i.len();
    if k == 0 || r == 0 || r > k {
        return Err(unsupported(format!("family member {r} out of range 1..={k}")));
    }
    let mut p: Vec<usize> = i[..r - 1].iter().map(|x| s * x).collect();
    let tail: usize = i[r - 1..k - 1].iter().map(|x| s * x).sum::<usize>() + i[k - 1];
    p.push(tail);
    Ok(p)
}

/// Smooth certificates linking consecutive members of a `Z`-family.
pub fn z_family_chain(i: &[usize], n: u32) -> Result<Vec<Certificate>, CertificateError> {
    step_for(n)?;
    if i.contains(&0) {
        return Err(unsupported("family parameters must be >= 1"));
    }
    let k = i.len();
    let mut out = Vec::new();
    for r in 1..k {
        let s = step_for(n)? as usize;
        let member = z_family_member(i, r, n)?;
        let prefix = &member[..r - 1];
        let b: usize = i[r..k - 1].iter().map(|x| s * x).sum::<usize>() + i[k - 1];
        out.push(z_split(prefix, i[r - 1], b, n)?);
    }
    Ok(out)
}

/// `P(T(m, j)) -> P(T(m, j + s))` by moving the first `beta` right past `s`
/// copies of `alpha` and untwisting it. When `j + s = m + 1` the end is
/// `Q_{m+1}`.
pub fn p_tree_shift(m: usize, j: usize, n: u32) -> Result<Certificate, CertificateError> {
    let s = step_for(n)? as usize;
    if j + s > m + 1 {
        return Err(unsupported(format!(
            "P(T({m}, {j})) has fewer than {s} copies of alpha after its first beta"
        )));
    }
    let start = build_p_tmj(m, j, n)?;
    let mut steps: Vec<Move> = (j + 1..=j + s).map(|p| hurwitz(p, Direction::Right)).collect();
    steps.push(Move::SmoothReplace {
        position: j + s + 1,
        vertex: 1,
        exponent: s as i64,
    });
    let (end, provenance) = if j + s == m + 1 {
        (build_q(m + 1, n)?, format!("p-tree-to-q m={m} j={j} n={n}"))
    } else {
        (build_p_tmj(m, j + s, n)?, format!("p-tree-shift m={m} j={j} n={n}"))
    };
    Ok(certificate(Mode::Smooth, start, steps, end, provenance))
}

/// Weinstein reduction of `P(T(m, 1))` to the `A_{m+1}` Milnor fiber.
pub fn p_tree_first_reduction(m: usize, n: u32) -> Result<Certificate, CertificateError> {
    let start = build_p_tmj(m, 1, n)?;
    let steps = vec![
        shift(Direction::Left),
        shift(Direction::Left),
        hurwitz(m + 2, Direction::Left),
        hurwitz(m + 1, Direction::Left),
        rewrite_bare(m + 1, 1),
        Move::Destabilize { position: m + 2 },
    ];
    let end = build_a_milnor(m + 1, n)?;
    Ok(certificate(Mode::Weinstein, start, steps, end, format!("p-tree-first-reduction m={m} n={n}")))
}

/// A known weinstein reduction starting at a fibration with the same key as
/// `f`, if one applies.
pub fn weinstein_reduction(f: &AbstractLF) -> Option<Certificate> {
    let tree = f.fiber();
    if !tree.is_path() || tree.vertex_count() != 2 {
        return None;
    }
    let n = f.sphere_dim();
    let m = f.cycle_count();
    let key = f.canonical_key();
    if m >= 5 && m % 2 == 1 {
        if let Ok(c) = x_to_a_milnor((m - 3) / 2, n) {
            if c.start.canonical_key() == key {
                return Some(c);
            }
        }
    }
    if m >= 5 {
        if let Ok(c) = p_tree_first_reduction(m - 3, n) {
            if c.start.canonical_key() == key {
                return Some(c);
            }
        }
    }
    None
}

/// Member of a diffeomorphic plumbing family.
#[derive(Debug, Clone)]
pub struct FamilyMember {
    pub label: String,
    pub fibration: AbstractLF,
    /// The plumbing tree the total space corresponds to, when it is one.
    pub tree: Option<TreeSpec>,
}

/// Fibrations linked by smooth certificates, consecutive members first.
#[derive(Debug, Clone)]
pub struct PlumbingFamily {
    pub label: String,
    pub n: u32,
    pub members: Vec<FamilyMember>,
    pub certificates: Vec<Certificate>,
}

/// Chain `P(T(m, j0)) -> P(T(m, j0 + s)) -> ...`, stopping at `T(m, j_last)`
/// or, with `to_q`, continuing to `Q_{m+1}`.
fn p_chain(
    label: &str,
    m: usize,
    j0: usize,
    j_last: usize,
    to_q: bool,
    names: &[(usize, &str)],
    n: u32,
) -> Result<PlumbingFamily, CertificateError> {
    let s = step_for(n)? as usize;
    let mut members = Vec::new();
    let mut certificates = Vec::new();
    let name = |j: usize| {
        names
            .iter()
            .find(|(jj, _)| *jj == j)
            .map(|(_, nm)| format!("{nm} = P(T({m},{j}))"))
            .unwrap_or_else(|| format!("P(T({m},{j}))"))
    };
    let mut j = j0;
    loop {
        members.push(FamilyMember {
            label: name(j),
            fibration: build_p_tmj(m, j, n)?,
            tree: Some(TreeSpec::T(m, j)),
        });
        if j == j_last && !to_q {
            break;
        }
        let cert = p_tree_shift(m, j, n)?;
        certificates.push(cert);
        if j + s == m + 1 {
            members.push(FamilyMember {
                label: format!("Q{}", m + 1),
                fibration: build_q(m + 1, n)?,
                tree: None,
            });
            break;
        }
        j += s;
        if j > m {
            return Err(unsupported(format!("chain from T({m},{j0}) overshoots")));
        }
    }
    Ok(PlumbingFamily {
        label: label.to_string(),
        n,
        members,
        certificates,
    })
}

/// The listed diffeomorphic families of Milnor fibers and `Q`-manifolds at
/// the given even `n`: fibers identified with plumbings along `T(m, j)`.
pub fn milnor_fiber_families(n: u32) -> Result<Vec<PlumbingFamily>, CertificateError> {
    match n {
        2 => Ok(vec![
            p_chain("A6 ~ E6", 5, 1, 3, false, &[(1, "A6"), (3, "E6")], n)?,
            p_chain(
                "Q7 ~ A7 ~ E7 ~ D7",
                6,
                1,
                5,
                true,
                &[(1, "A7"), (3, "E7"), (5, "D7")],
                n,
            )?,
            p_chain("A8 ~ E8", 7, 1, 3, false, &[(1, "A8"), (3, "E8")], n)?,
            p_chain("Q4 ~ D4", 3, 2, 2, true, &[(2, "D4")], n)?,
            p_chain("Q5 ~ A5 ~ D5", 4, 1, 3, true, &[(1, "A5"), (3, "D5")], n)?,
        ]),
        n if n >= 4 && n % 2 == 0 => Ok(vec![
            p_chain("E7 ~ Q7", 6, 3, 3, true, &[(3, "E7")], n)?,
            p_chain("A8 ~ E8", 7, 1, 5, false, &[(1, "A8"), (5, "E8")], n)?,
            p_chain("A5 ~ Q5", 4, 1, 1, true, &[(1, "A5")], n)?,
            p_chain("D6 ~ Q6", 5, 2, 2, true, &[(2, "D6")], n)?,
            p_chain("A7 ~ D7", 6, 1, 5, false, &[(1, "A7"), (5, "D7")], n)?,
        ]),
        _ => Err(unsupported(format!("smooth families need even n, got {n}"))),
    }
}

/// Parameters for [`builtin_certificate`].
#[derive(Debug, Clone, Default)]
pub struct BuiltinParams {
    pub k: Option<usize>,
    pub m: Option<usize>,
    pub j: Option<usize>,
    pub a: Option<usize>,
    pub b: Option<usize>,
    pub i: Vec<usize>,
    pub link: Option<usize>,
}

/// Names accepted by [`builtin_certificate`].
pub const BUILTIN_NAMES: [&str; 6] = [
    "x-to-a-milnor",
    "x-y-smooth",
    "z-split",
    "z-family",
    "p-tree-shift",
    "p-tree-reduction",
];

/// Look up a builtin script by name.
pub fn builtin_certificate(name: &str, p: &BuiltinParams, n: u32) -> Result<Certificate, CertificateError> {
    let need = |v: Option<usize>, flag: &str| v.ok_or_else(|| unsupported(format!("{name} needs {flag}")));
    match name {
        "x-to-a-milnor" => x_to_a_milnor(need(p.k, "k")?, n),
        "x-y-smooth" => x_to_y_smooth(need(p.k, "k")?, n),
        "z-split" => z_split(&p.i, need(p.a, "a")?, need(p.b, "b")?, n),
        "z-family" => {
            let link = need(p.link, "link")?;
            let chain = z_family_chain(&p.i, n)?;
            let len = chain.len();
            chain
                .into_iter()
                .nth(link.wrapping_sub(1))
                .ok_or_else(|| unsupported(format!("link {link} out of range 1..={len}")))
        }
        "p-tree-shift" => p_tree_shift(need(p.m, "m")?, need(p.j, "j")?, n),
        "p-tree-reduction" => p_tree_first_reduction(need(p.m, "m")?, n),
        other => Err(unsupported(format!(
            "unknown builtin `{other}` (expected one of {})",
            BUILTIN_NAMES.join(", ")
        ))),
    }
}

/// Every builtin certificate in the desk range for one `n`, with names.
pub fn builtin_certificates(n: u32) -> Vec<Certificate> {
    let mut out = Vec::new();
    for k in 1..=5 {
        out.extend(x_to_a_milnor(k, n));
        out.extend(x_to_y_smooth(k, n));
    }
    for m in 2..=5 {
        out.extend(p_tree_first_reduction(m, n));
    }
    if smooth_step(n).is_some() {
        for i in [vec![1, 1], vec![2, 1], vec![1, 2], vec![1, 1, 1], vec![2, 1, 2]] {
            out.extend(z_family_chain(&i, n).into_iter().flatten());
        }
        if let Ok(fams) = milnor_fiber_families(n) {
            for f in fams {
                out.extend(f.certificates);
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::build_z;

    fn accept(c: &Certificate) {
        assert_eq!(verify(c), Verdict::Accept, "{}", c.provenance);
    }

    #[test]
    fn x_reduction_lengths() {
        for n in 2..=4 {
            for k in 1..=3 {
                let c = x_to_a_milnor(k, n).unwrap();
                assert_eq!(c.steps.len(), 2 * k + 5);
                accept(&c);
            }
        }
    }

    #[test]
    fn x_y_smooth_parities() {
        accept(&x_to_y_smooth(1, 2).unwrap());
        accept(&x_to_y_smooth(2, 4).unwrap());
        assert!(x_to_y_smooth(1, 4).is_err());
        assert!(x_to_y_smooth(1, 3).is_err());
    }

    #[test]
    fn z_split_examples() {
        let c = z_split(&[], 1, 1, 4).unwrap();
        assert_eq!(c.start, build_z(&[5], 4).unwrap());
        assert_eq!(c.claimed_end, build_z(&[4, 1], 4).unwrap());
        accept(&c);
        accept(&z_split(&[2], 1, 3, 2).unwrap());
        assert!(z_split(&[], 1, 1, 3).is_err());
    }

    #[test]
    fn z_chain_members() {
        assert_eq!(z_family_member(&[1, 2, 1], 1, 2).unwrap(), vec![7]);
        assert_eq!(z_family_member(&[1, 2, 1], 2, 2).unwrap(), vec![2, 5]);
        assert_eq!(z_family_member(&[1, 2, 1], 3, 2).unwrap(), vec![2, 4, 1]);
        for c in z_family_chain(&[1, 2, 1], 2).unwrap() {
            accept(&c);
        }
    }

    #[test]
    fn p_tree_scripts() {
        accept(&p_tree_shift(5, 1, 2).unwrap());
        accept(&p_tree_shift(6, 5, 2).unwrap());
        accept(&p_tree_shift(7, 1, 4).unwrap());
        assert!(p_tree_shift(5, 3, 4).is_err());
        for m in 2..=5 {
            accept(&p_tree_first_reduction(m, 3).unwrap());
        }
    }

    #[test]
    fn families_verify() {
        for n in [2, 4] {
            for fam in milnor_fiber_families(n).unwrap() {
                assert_eq!(fam.certificates.len() + 1, fam.members.len(), "{}", fam.label);
                for c in &fam.certificates {
                    accept(c);
                }
            }
        }
    }

    #[test]
    fn lookup_by_name() {
        let p = BuiltinParams {
            k: Some(2),
            ..Default::default()
        };
        assert_eq!(builtin_certificate("x-to-a-milnor", &p, 3).unwrap(), x_to_a_milnor(2, 3).unwrap());
        let p = BuiltinParams {
            i: vec![1, 2],
            link: Some(1),
            ..Default::default()
        };
        accept(&builtin_certificate("z-family", &p, 4).unwrap());
        let p = BuiltinParams {
            link: Some(2),
            ..p
        };
        assert!(builtin_certificate("z-family", &p, 4).is_err());
        assert!(builtin_certificate("nope", &BuiltinParams::default(), 2).is_err());
        assert!(builtin_certificate("p-tree-shift", &BuiltinParams::default(), 2).is_err());
    }

    #[test]
    fn reversal() {
        let c = x_to_a_milnor(1, 2).unwrap();
        let r = c.reversed().unwrap();
        accept(&r);
        let c = z_split(&[], 1, 1, 2).unwrap();
        accept(&c.reversed().unwrap());
    }

    #[test]
    fn tampering_is_caught() {
        let mut c = x_to_a_milnor(1, 2).unwrap();
        c.steps.insert(
            0,
            Move::SmoothReplace {
                position: 4,
                vertex: 1,
                exponent: 2,
            },
        );
        assert!(matches!(verify(&c), Verdict::Reject { step: 1, .. }));
        let mut c = x_to_a_milnor(1, 2).unwrap();
        c.claimed_end = build_a_milnor(2, 2).unwrap();
        assert!(matches!(
            verify(&c),
            Verdict::Reject {
                reason: RejectReason::EndMismatch,
                ..
            }
        ));
    }
}
