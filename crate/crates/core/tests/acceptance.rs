//! Acceptance runner: one PASS/FAIL line per criterion.
//!
//! A FAIL marked `known` is a recorded discrepancy between the published
//! values and the exact computation (a pinned erratum). It is reported, and
//! the runner still exits 0 as long as every value equals its pinned one.
//! Any other FAIL exits 1.

mod common;

use dp2_delta::ade::AdeType;
use dp2_delta::catalog::{self, Atlas, CheckStatus, LemmaBody};
use dp2_delta::lattice;
use dp2_delta::rational::{fmt_q, parse_q, to_f64, Q};
use dp2_delta::report::{self, row_model, RowStatus};
use dp2_delta::surface::{build_surface, enumerate_embeddings_uncached, SingularitySpec};
use dp2_delta::table;
use dp2_delta::zariski::CurveSystem;
use std::collections::{BTreeMap, BTreeSet};
use std::process::ExitCode;
use std::time::{Duration, Instant};

#[derive(PartialEq, Eq)]
enum Verdict {
    Pass,
    KnownFail,
    Fail,
}

struct Runner {
    unexpected: usize,
}

impl Runner {
    fn line(&mut self, id: &str, verdict: Verdict, detail: impl AsRef<str>) {
        let tag = match verdict {
            Verdict::Pass => "PASS",
            Verdict::KnownFail => "FAIL (known)",
            Verdict::Fail => "FAIL",
        };
        if verdict == Verdict::Fail {
            self.unexpected += 1;
        }
        println!("[{id}] {tag}: {}", detail.as_ref());
    }
}

fn pass_if(ok: bool) -> Verdict {
    if ok {
        Verdict::Pass
    } else {
        Verdict::Fail
    }
}

fn table_reproduction(r: &mut Runner) {
    let start = Instant::now();
    let rows = report::table_report(None);
    let elapsed = start.elapsed();
    let csv = report::render_csv(&rows);
    let published = table::rows();
    r.line(
        "1 rows",
        pass_if(rows.len() == published.len() && csv.lines().count() == published.len() + 1),
        format!("{} rows emitted, one per row of the embedded table", rows.len()),
    );
    let bad: Vec<String> = rows
        .iter()
        .zip(published)
        .filter(|(a, b)| a.status != RowStatus::Match || a.delta != b.delta)
        .map(|(a, b)| format!("{} {}: {} vs {}", a.sing, b.lines, fmt_q(&a.delta), fmt_q(&b.delta)))
        .collect();
    let values: BTreeSet<Q> = rows.iter().map(|x| x.delta).collect();
    r.line(
        "1 delta",
        pass_if(bad.is_empty()),
        if bad.is_empty() {
            format!(
                "{}/{} rows certified with the published delta; values {}",
                rows.len(),
                rows.len(),
                values.iter().rev().map(fmt_q).collect::<Vec<_>>().join(", ")
            )
        } else {
            format!("mismatched rows: {}", bad.join("; "))
        },
    );
    let line_diffs: Vec<(String, usize, usize, bool)> = rows
        .iter()
        .zip(published)
        .filter(|(a, b)| a.lines != b.lines)
        .map(|(a, b)| (a.sing.clone(), a.lines, b.lines, b.model_lines == Some(a.lines)))
        .collect();
    let verdict = if line_diffs.is_empty() {
        Verdict::Pass
    } else if line_diffs.iter().all(|d| d.3) {
        Verdict::KnownFail
    } else {
        Verdict::Fail
    };
    r.line(
        "1 lines",
        verdict,
        format!(
            "{}/{} rows have the published line count{}",
            rows.len() - line_diffs.len(),
            rows.len(),
            line_diffs
                .iter()
                .map(|(s, got, want, _)| format!("; {s}: model has {got}, published {want}"))
                .collect::<String>()
        ),
    );
    r.line(
        "1 runtime",
        pass_if(elapsed < Duration::from_secs(300)),
        format!("table computed in {:.2}s (limit 300s)", elapsed.as_secs_f64()),
    );
}

/// Stated `S` values the suite is expected to cover.
const STATED_S: &[&str] = &[
    "2/3", "4/9", "1/2", "7/9", "5/3", "11/24", "8/15", "1", "5/6", "7/15", "13/12", "31/36", "13/24", "17/36",
    "41/72", "23/36", "7/6", "8/9", "10/21", "7/12", "4/3", "26/45", "5/3", "10/9", "2", "7/3", "5/4", "53/60",
    "37/60", "23/48", "7/4", "10/3", "16/9", "8/3",
];

fn lemma_suite(r: &mut Runner) {
    let reports = catalog::verify_all();
    let families = reports.iter().filter(|x| !x.realizations.is_empty() || x.checks.len() > 1).count();
    let closed = |name: &str| {
        matches!(name, "tau" | "breakpoints" | "P^2" | "P.A") || name.ends_with("realized") || name.starts_with("P.A = ")
    };
    // Per group: total, passed, errata, failures.
    type Tally = (usize, usize, Vec<String>, Vec<String>);
    let mut tally: BTreeMap<&str, Tally> = BTreeMap::new();
    for rep in &reports {
        for c in &rep.checks {
            let group = if closed(&c.name) {
                "closed"
            } else if c.name == "S" || c.name == "S from the stated P^2" {
                "s"
            } else if c.name.starts_with("S(W)") || c.name.starts_with("delta") {
                "claims"
            } else {
                continue;
            };
            let e = tally.entry(group).or_default();
            e.0 += 1;
            match c.status {
                CheckStatus::Pass | CheckStatus::NotApplicable => e.1 += 1,
                CheckStatus::Erratum => e.2.push(format!("{} {}", rep.id, c.name)),
                CheckStatus::Fail => e.3.push(format!("{} {}", rep.id, c.name)),
            }
        }
    }
    for (id, group, what) in [
        ("2 closed", "closed", "tau, breakpoints, N(v), P^2 and P.A equal the stated closed forms"),
        ("2 S", "s", "stated S values equal the exact integrals"),
        ("2 claims", "claims", "stated S(W) and delta claims hold for the exact values"),
    ] {
        let (total, ok, errata, fails) = tally.remove(group).unwrap_or_default();
        let verdict = if !fails.is_empty() {
            Verdict::Fail
        } else if !errata.is_empty() {
            Verdict::KnownFail
        } else {
            pass_if(total > 0)
        };
        let mut detail = format!("{ok}/{total} checks: {what} ({families} lemmas)");
        if !errata.is_empty() {
            detail.push_str(&format!("; errata: {}", errata.join(", ")));
        }
        if !fails.is_empty() {
            detail.push_str(&format!("; failing: {}", fails.join(", ")));
        }
        r.line(id, verdict, detail);
    }
    // The expected stated values all occur in the catalog.
    let stated: BTreeSet<Q> = catalog::lemmas()
        .iter()
        .filter_map(|l| match &l.body {
            LemmaBody::Family(f) => Some(f.s_curve),
            LemmaBody::Axiom(_) => None,
        })
        .collect();
    let missing: Vec<&str> = STATED_S.iter().copied().filter(|s| !stated.contains(&parse_q(s).unwrap())).collect();
    r.line(
        "2 coverage",
        pass_if(missing.is_empty()),
        if missing.is_empty() {
            format!("all {} listed S values are stated by some lemma", STATED_S.len())
        } else {
            format!("listed S values stated by no lemma: {}", missing.join(", "))
        },
    );
}

fn lattice_enumeration(r: &mut Runner) {
    // Brute force over a box strictly containing every solution.
    let form = |a: &[i64; 8], b: &[i64; 8]| a[0] * b[0] - (1..8).map(|i| a[i] * b[i]).sum::<i64>();
    let k = [-3, 1, 1, 1, 1, 1, 1, 1];
    let (mut roots, mut lines) = (BTreeSet::new(), BTreeSet::new());
    let mut x = [0i64; 8];
    for n in 0..11 * 7usize.pow(7) {
        let mut m = n;
        x[0] = (m % 11) as i64 - 5;
        m /= 11;
        for xi in x.iter_mut().skip(1) {
            *xi = (m % 7) as i64 - 3;
            m /= 7;
        }
        match (form(&x, &x), form(&x, &k)) {
            (-2, 0) => {
                roots.insert(x);
            }
            (-1, -1) => {
                lines.insert(x);
            }
            _ => {}
        }
    }
    let lib_roots: BTreeSet<[i64; 8]> = lattice::roots().iter().copied().collect();
    let lib_lines: BTreeSet<[i64; 8]> = lattice::line_classes().iter().copied().collect();
    r.line(
        "3",
        pass_if(roots.len() == 126 && lines.len() == 56 && roots == lib_roots && lines == lib_lines),
        format!(
            "brute force finds {} roots and {} lines; library sets {}",
            roots.len(),
            lines.len(),
            if roots == lib_roots && lines == lib_lines { "identical" } else { "differ" }
        ),
    );
}

fn zariski_properties(r: &mut Runner) {
    let mut models: Vec<_> = table::rows().iter().map(|row| row_model(row, None)).collect();
    models.push(build_surface(&SingularitySpec::new(AdeType::smooth(), None)).unwrap());
    let cases = 100;
    let failures: Vec<String> = models
        .iter()
        .filter_map(|m| {
            common::zariski::run_model(&CurveSystem::from_model(m), cases)
                .err()
                .map(|e| format!("{} ({} lines): {e}", m.ade, m.line_count))
        })
        .collect();
    r.line(
        "4",
        pass_if(failures.is_empty()),
        if failures.is_empty() {
            format!(
                "{cases} random classes on each of {} models: orthogonality, nefness, negative-definite support, order independence",
                models.len()
            )
        } else {
            failures.join("; ")
        },
    );
}

fn integrals(r: &mut Runner) {
    let atlas = Atlas::get();
    let (mut n, mut worst) = (0usize, 0f64);
    let mut bad = Vec::new();
    for c in atlas.curve_flags.iter().chain(&atlas.blowup_flags) {
        let pieces = common::quadrature::exported(c);
        let mut record = |name: String, numeric: f64, exact: &Q| {
            let err = (numeric - to_f64(exact)).abs();
            worst = worst.max(err);
            n += 1;
            if err >= 1e-9 {
                bad.push(name);
            }
        };
        record(format!("S on {}", c.carrier), common::quadrature::s_curve(&pieces), &c.flag.s_curve);
        for st in &c.flag.strata {
            let v = common::quadrature::s_flag(&pieces, &c.flag.family.labels, st);
            record(format!("S(W) at {} of {}", st.name, c.surface), v, &st.s_w);
        }
    }
    r.line(
        "5",
        pass_if(bad.is_empty() && n > 0),
        format!("{n} exact integrals agree with quadrature; worst error {worst:.1e} (tolerance 1e-9){}", if bad.is_empty() { String::new() } else { format!("; failing: {}", bad.join(", ")) }),
    );
}

fn embeddings(r: &mut Runner) {
    let types: BTreeSet<AdeType> = table::rows().iter().map(|x| x.ade.clone()).collect();
    let mut pairs: Vec<Vec<usize>> = types
        .iter()
        .map(|t| {
            let mut c: Vec<usize> = enumerate_embeddings_uncached(t).iter().map(|e| e.line_count).collect();
            c.sort_unstable_by(|a, b| b.cmp(a));
            c
        })
        .filter(|c| c.len() > 1)
        .collect();
    pairs.sort();
    let want = vec![vec![6, 5], vec![8, 7], vec![12, 11], vec![16, 15], vec![20, 19], vec![26, 25]];
    r.line(
        "6",
        pass_if(pairs == want),
        format!(
            "ambiguous types split into line counts {}",
            pairs
                .iter()
                .map(|p| format!("{{{}}}", p.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")))
                .collect::<Vec<_>>()
                .join(" ")
        ),
    );
}

fn main() -> ExitCode {
    let mut r = Runner { unexpected: 0 };
    table_reproduction(&mut r);
    lemma_suite(&mut r);
    lattice_enumeration(&mut r);
    zariski_properties(&mut r);
    integrals(&mut r);
    embeddings(&mut r);
    if r.unexpected == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{} unexpected failure(s)", r.unexpected);
        ExitCode::FAILURE
    }
}
