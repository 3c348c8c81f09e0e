//! The reproduction table: every builtin certificate and invariant
//! separation in the small parameter range, one PASS/FAIL row each.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use lefschetz_core::{
    build_a_milnor, build_x, build_y, build_z, component_count, index_gaps,
    milnor_fiber_families, p_tree_first_reduction, search, verify, x_to_a_milnor, x_to_y_smooth,
    z_family_chain, z_family_member, AbstractLF, Certificate, ComponentCount, Exactness,
    FibrationError, IllegalReason, Mode, Move, SearchBudget, SearchOutcome, Verdict, NOT_FOUND,
    SH_NOT_IMPLEMENTED,
};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Status {
    Pass,
    Fail,
    /// Not checked, with the reason; never a failure.
    Skipped(String),
}

#[derive(Debug, Clone)]
pub struct Check {
    pub what: String,
    pub status: Status,
}

#[derive(Debug, Clone)]
pub struct Row {
    pub label: String,
    pub checks: Vec<Check>,
}

impl Row {
    fn new(label: impl Into<String>) -> Self {
        Row {
            label: label.into(),
            checks: Vec::new(),
        }
    }

    fn check(&mut self, what: impl Into<String>, ok: bool) -> &mut Self {
        self.checks.push(Check {
            what: what.into(),
            status: if ok { Status::Pass } else { Status::Fail },
        });
        self
    }

    fn skip(&mut self, what: impl Into<String>, why: impl Into<String>) -> &mut Self {
        self.checks.push(Check {
            what: what.into(),
            status: Status::Skipped(why.into()),
        });
        self
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.status != Status::Fail)
    }

    pub fn render(&self) -> String {
        let mut s = format!("[{}] {}:", if self.passed() { "PASS" } else { "FAIL" }, self.label);
        for (i, c) in self.checks.iter().enumerate() {
            let sep = if i == 0 { " " } else { ", " };
            let status = match &c.status {
                Status::Pass => "PASS".to_string(),
                Status::Fail => "FAIL".to_string(),
                Status::Skipped(why) => why.clone(),
            };
            if c.what.is_empty() {
                let _ = write!(s, "{sep}{status}");
            } else {
                let _ = write!(s, "{sep}{} {status}", c.what);
            }
        }
        s
    }
}

fn cert_ok(c: &Result<Certificate, impl std::fmt::Display>) -> bool {
    matches!(c, Ok(c) if verify(c) == Verdict::Accept)
}

fn count_text(c: &ComponentCount) -> String {
    match c.exactness {
        Exactness::Exact => c.value.to_string(),
        Exactness::LowerBound => format!(">={}", c.value),
        Exactness::Unknown => "?".into(),
    }
}

fn reduction_rows(rows: &mut Vec<Row>) {
    for n in 2..=4 {
        for k in 1..=3 {
            let mut r = Row::new(format!("X_k reduces to A_(2k+1) (n={n}, k={k})"));
            r.check("weinstein cert", cert_ok(&x_to_a_milnor(k, n)));
            rows.push(r);
        }
        for m in 2..=3 {
            let mut r = Row::new(format!("P(T({m},1)) reduces to A_({}) (n={n})", m + 1));
            r.check("weinstein cert", cert_ok(&p_tree_first_reduction(m, n)));
            rows.push(r);
        }
    }
}

fn x_y_rows(rows: &mut Vec<Row>, budget: &SearchBudget) {
    for n in 2..=4 {
        for k in 1..=3 {
            let mut r = Row::new(format!("X_k vs Y_k (n={n}, k={k})"));
            match x_to_y_smooth(k, n) {
                Ok(c) => {
                    r.check("diffeo cert", verify(&c) == Verdict::Accept);
                }
                Err(e) => {
                    r.skip("diffeo cert", format!("n/a ({e})"));
                }
            }
            let (x, y) = (build_x(k, n).unwrap(), build_y(k, n).unwrap());
            let (cx, cy) = (component_count(&x, budget), component_count(&y, budget));
            let exact = cx.exactness == Exactness::Exact && cy.exactness == Exactness::Exact;
            r.check(
                format!("components {}≠{}", count_text(&cx), count_text(&cy)),
                exact && cx.value == 1 && cy.value == 2,
            );
            r.check("homology equal", x.total_space_homology() == y.total_space_homology());
            rows.push(r);
        }
    }
}

fn z_rows(rows: &mut Vec<Row>, budget: &SearchBudget) {
    let mut params: Vec<Vec<usize>> = Vec::new();
    for len in 2..=3 {
        let mut cur = vec![1; len];
        loop {
            params.push(cur.clone());
            let Some(pos) = cur.iter().rposition(|&x| x < 3) else { break };
            cur[pos] += 1;
            for x in cur.iter_mut().skip(pos + 1) {
                *x = 1;
            }
        }
    }
    for n in [2, 4] {
        for i in &params {
            let shown = i.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",");
            let mut r = Row::new(format!("Z-family (n={n}, i=({shown}))"));
            let members: Vec<AbstractLF> = (1..=i.len())
                .map(|k| build_z(&z_family_member(i, k, n).unwrap(), n).unwrap())
                .collect();
            let counts: Vec<ComponentCount> = members.iter().map(|f| component_count(f, budget)).collect();
            let values: BTreeSet<usize> = counts.iter().map(|c| c.value).collect();
            let shown_counts = values.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(",");
            r.check(
                format!("family of {}, counts {{{shown_counts}}}", members.len()),
                counts.iter().all(|c| c.exactness == Exactness::Exact) && values == (1..=i.len()).collect(),
            );
            let h = members[0].total_space_homology();
            r.check(
                "homology equal",
                members.iter().all(|f| f.total_space_homology() == h && f.euler_characteristic() == members[0].euler_characteristic()),
            );
            let chain = z_family_chain(i, n);
            let linked = match &chain {
                Ok(certs) => {
                    certs.len() + 1 == members.len()
                        && certs.iter().enumerate().all(|(k, c)| {
                            c.start == members[k] && c.claimed_end == members[k + 1] && verify(c) == Verdict::Accept
                        })
                }
                Err(_) => false,
            };
            r.check("smooth chain", linked);
            rows.push(r);
        }
    }
    let mut r = Row::new("Z-family (n=3)");
    r.skip("smooth chain", "n/a (smooth moves are unavailable at odd n)");
    r.check("rejected", z_family_chain(&[1, 1], 3).is_err());
    rows.push(r);
}

fn family_rows(rows: &mut Vec<Row>, budget: &SearchBudget) {
    for n in [2, 4] {
        let Ok(families) = milnor_fiber_families(n) else {
            let mut r = Row::new(format!("Milnor fiber families (n={n})"));
            r.check("built", false);
            rows.push(r);
            continue;
        };
        for fam in families {
            let mut r = Row::new(format!("Milnor fibers {} (n={n})", fam.label));
            r.check(
                if fam.certificates.len() == 1 { "smooth cert" } else { "smooth certs" },
                fam.certificates.iter().all(|c| verify(c) == Verdict::Accept),
            );
            let h = fam.members[0].fibration.total_space_homology();
            r.check("homology equal", fam.members.iter().all(|m| m.fibration.total_space_homology() == h));
            let counts: Vec<String> = fam
                .members
                .iter()
                .map(|m| {
                    let short = m.label.split(" = ").next().unwrap_or(&m.label).to_string();
                    format!("{short}:{}", count_text(&component_count(&m.fibration, budget)))
                })
                .collect();
            r.skip("components", counts.join(" "));
            r.skip("", SH_NOT_IMPLEMENTED);
            rows.push(r);
        }
    }
}

fn parity_rows(rows: &mut Vec<Row>) {
    let smooth = |k: usize, n: u32, exponent: i64| {
        build_x(k, n).unwrap().apply_move(
            &Move::SmoothReplace {
                position: 2 * k + 2,
                vertex: 1,
                exponent,
            },
            Mode::Smooth,
        )
    };
    let is_parity = |r: &Result<AbstractLF, FibrationError>| {
        matches!(r, Err(FibrationError::IllegalMove(IllegalReason::Parity { .. })))
    };
    let is_odd = |r: &Result<AbstractLF, FibrationError>| {
        matches!(r, Err(FibrationError::IllegalMove(IllegalReason::OddDimension(_))))
    };
    let mut r = Row::new("smooth replacement parity gates");
    r.check("exponent 2 at n=2 accepted", smooth(1, 2, 2).is_ok());
    r.check("exponent 2 at n=4 rejected", is_parity(&smooth(1, 4, 2)));
    r.check("exponent 4 at n=4 accepted", smooth(2, 4, 4).is_ok());
    r.check("any exponent at n=3 rejected", is_odd(&smooth(1, 3, 2)) && is_odd(&smooth(2, 3, 4)));
    rows.push(r);
}

fn gap_rows(rows: &mut Vec<Row>) {
    let mut r = Row::new("thimble index gaps (2<=n<=8, 1<=k<=8)");
    let ok = (2..=8u32).all(|n| {
        (1..=8usize).all(|k| {
            index_gaps(n, k).is_ok_and(|g| {
                g.gap_max_min == (n as i64 - 1) * (k as i64 + 1) + 2
                    && g.gap_min_max == n as i64
                    && g.nonvanishing_certified
            })
        })
    });
    r.check("((n-1)(k+1)+2, n)", ok);
    rows.push(r);
}

fn search_rows(rows: &mut Vec<Row>) {
    let mut r = Row::new("search X_1 -> A_3 (n=3, weinstein, depth 12)");
    let found = search(
        &build_x(1, 3).unwrap(),
        &build_a_milnor(3, 3).unwrap(),
        Mode::Weinstein,
        &SearchBudget::new(12, 200_000, 0),
    );
    r.check(
        "certificate replays",
        matches!(found, Ok(SearchOutcome::Found(ref c)) if verify(c) == Verdict::Accept),
    );
    rows.push(r);
    let mut r = Row::new("search X_1 -> Y_1 (n=2, weinstein, depth 3)");
    let out = search(
        &build_x(1, 2).unwrap(),
        &build_y(1, 2).unwrap(),
        Mode::Weinstein,
        &SearchBudget::new(3, 5_000, 0),
    );
    r.check(NOT_FOUND, matches!(out, Ok(SearchOutcome::NotFound { .. })));
    rows.push(r);
}

/// Build every row. Deterministic.
pub fn run_suite() -> Vec<Row> {
    let budget = SearchBudget::new(6, 20_000, 0);
    let mut rows = Vec::new();
    reduction_rows(&mut rows);
    x_y_rows(&mut rows, &budget);
    z_rows(&mut rows, &budget);
    family_rows(&mut rows, &budget);
    parity_rows(&mut rows);
    gap_rows(&mut rows);
    search_rows(&mut rows);
    rows
}

pub fn render(rows: &[Row]) -> String {
    let mut s = String::new();
    for r in rows {
        s.push_str(&r.render());
        s.push('\n');
    }
    let passed = rows.iter().filter(|r| r.passed()).count();
    let _ = writeln!(s, "{passed}/{} rows passed", rows.len());
    s
}
