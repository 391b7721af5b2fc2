//! Test-only reference implementations, kept independent of the library's
//! algorithms.

#![allow(dead_code)]

use dp2_delta::rational::{q, Q};

pub fn form(a: &[Q], b: &[Q]) -> Q {
    let mut s = a[0] * b[0];
    for i in 1..a.len() {
        s -= a[i] * b[i];
    }
    s
}

pub fn to_q(c: &[i64]) -> Vec<Q> {
    c.iter().map(|&x| q(x as i128)).collect()
}

/// Solves `m x = b` for a nonsingular square `m`.
#[allow(clippy::needless_range_loop)]
pub fn solve(mut m: Vec<Vec<Q>>, mut b: Vec<Q>) -> Vec<Q> {
    let n = m.len();
    for c in 0..n {
        let p = (c..n).find(|&r| m[r][c] != q(0)).expect("nonsingular system");
        m.swap(p, c);
        b.swap(p, c);
        for r in 0..n {
            if r != c && m[r][c] != q(0) {
                let f = m[r][c] / m[c][c];
                for k in c..n {
                    let t = m[c][k];
                    m[r][k] -= f * t;
                }
                let t = b[c];
                b[r] -= f * t;
            }
        }
    }
    (0..n).map(|i| b[i] / m[i][i]).collect()
}

/// Zariski decomposition by growing the support: start from the empty
/// support and repeatedly add every curve the current positive part meets
/// negatively. Returns `(curve, coefficient)` sorted by curve, zero
/// coefficients dropped.
pub fn fujita(curves: &[Vec<i64>], d: &[Q]) -> Vec<(usize, Q)> {
    let cs: Vec<Vec<Q>> = curves.iter().map(|c| to_q(c)).collect();
    let mut support: Vec<usize> = Vec::new();
    loop {
        let coeffs = if support.is_empty() {
            vec![]
        } else {
            let gram = support
                .iter()
                .map(|&i| support.iter().map(|&j| form(&cs[i], &cs[j])).collect())
                .collect();
            let rhs = support.iter().map(|&i| form(d, &cs[i])).collect();
            solve(gram, rhs)
        };
        let mut p = d.to_vec();
        for (&i, a) in support.iter().zip(&coeffs) {
            for k in 0..p.len() {
                p[k] -= *a * cs[i][k];
            }
        }
        let new: Vec<usize> = (0..cs.len())
            .filter(|i| !support.contains(i) && form(&p, &cs[*i]) < q(0))
            .collect();
        if new.is_empty() {
            let mut out: Vec<(usize, Q)> =
                support.into_iter().zip(coeffs).filter(|(_, a)| *a != q(0)).collect();
            out.sort();
            return out;
        }
        support.extend(new);
    }
}

/// Determinant by fraction-exact Gaussian elimination.
#[allow(clippy::needless_range_loop)]
pub fn det(mut m: Vec<Vec<Q>>) -> Q {
    let n = m.len();
    let mut d = q(1);
    for c in 0..n {
        let Some(p) = (c..n).find(|&r| m[r][c] != q(0)) else {
            return q(0);
        };
        if p != c {
            m.swap(p, c);
            d = -d;
        }
        d *= m[c][c];
        for r in c + 1..n {
            let f = m[r][c] / m[c][c];
            for k in c..n {
                let t = m[c][k];
                m[r][k] -= f * t;
            }
        }
    }
    d
}

/// Sylvester's criterion on `-G`.
pub fn negative_definite(g: &[Vec<Q>]) -> bool {
    (1..=g.len()).all(|k| {
        let minor: Vec<Vec<Q>> = g[..k].iter().map(|row| row[..k].iter().map(|x| -*x).collect()).collect();
        det(minor) > q(0)
    })
}

pub mod zariski {
    use super::*;
    use dp2_delta::zariski::{zariski_decompose, CurveSystem, Zariski};
    use proptest::prelude::*;
    use proptest::test_runner::{Config, TestCaseError, TestRunner};

    /// `(curve, numerator, denominator)` terms and a multiple of `-K`.
    pub type ClassSpec = (Vec<(usize, i128, i128)>, i128);

    pub fn class_strategy(n_curves: usize) -> impl Strategy<Value = ClassSpec> {
        (prop::collection::vec((0..n_curves, 0i128..=6, 1i128..=4), 0..6), 0i128..=3)
    }

    /// A nonnegative combination of generators plus `k(-K)`: pseudo-effective
    /// by construction.
    pub fn build_class(sys: &CurveSystem, terms: &[(usize, i128, i128)], k: i128) -> Vec<Q> {
        let mut d: Vec<Q> = vec![q(3 * k), q(-k), q(-k), q(-k), q(-k), q(-k), q(-k), q(-k)];
        d.truncate(sys.dim);
        for &(i, a, b) in terms {
            let c = to_q(&sys.curves[i]);
            for x in 0..sys.dim {
                d[x] += Q::new(a, b) * c[x];
            }
        }
        d
    }

    fn curve(sys: &CurveSystem, i: usize) -> Vec<Q> {
        to_q(&sys.curves[i])
    }

    pub fn check_decomposition(sys: &CurveSystem, d: &[Q], z: &Zariski) -> Result<(), TestCaseError> {
        // D = P + N.
        let mut sum = z.positive.clone();
        for &(i, a) in &z.negative {
            prop_assert!(a > q(0), "nonpositive coefficient on {}", sys.labels[i]);
            let c = curve(sys, i);
            for x in 0..sys.dim {
                sum[x] += a * c[x];
            }
        }
        prop_assert_eq!(&sum[..], d);
        // Orthogonality on the support.
        for &(i, _) in &z.negative {
            prop_assert_eq!(form(&z.positive, &curve(sys, i)), q(0));
        }
        // Nef against every generator.
        for i in 0..sys.curves.len() {
            prop_assert!(form(&z.positive, &curve(sys, i)) >= q(0), "P.{} < 0", sys.labels[i]);
        }
        prop_assert!(form(&z.positive, &z.positive) >= q(0));
        // Negative-definite support.
        let gram: Vec<Vec<Q>> = z
            .negative
            .iter()
            .map(|&(i, _)| z.negative.iter().map(|&(j, _)| form(&curve(sys, i), &curve(sys, j))).collect())
            .collect();
        prop_assert!(negative_definite(&gram));
        // Agreement with the reference algorithm.
        let mut neg = z.negative.clone();
        neg.sort();
        prop_assert_eq!(neg, fujita(&sys.curves, d));
        Ok(())
    }

    /// Decomposes with the generators listed in the order `perm` and checks
    /// the result is the same.
    pub fn check_order_independence(
        sys: &CurveSystem,
        d: &[Q],
        z: &Zariski,
        perm: &[usize],
    ) -> Result<(), TestCaseError> {
        let shuffled = CurveSystem {
            dim: sys.dim,
            curves: perm.iter().map(|&i| sys.curves[i].clone()).collect(),
            labels: perm.iter().map(|&i| sys.labels[i].clone()).collect(),
        };
        let z2 = zariski_decompose(&shuffled, d).map_err(|e| TestCaseError::fail(e.to_string()))?;
        prop_assert_eq!(&z2.positive, &z.positive);
        let mut n1: Vec<(usize, Q)> = z.negative.clone();
        let mut n2: Vec<(usize, Q)> = z2.negative.iter().map(|&(i, a)| (perm[i], a)).collect();
        n1.sort();
        n2.sort();
        prop_assert_eq!(n1, n2);
        Ok(())
    }

    /// Runs `cases` random classes through both checks.
    pub fn run_model(sys: &CurveSystem, cases: u32) -> Result<(), String> {
        let n = sys.curves.len();
        let mut runner = TestRunner::new(Config {
            cases,
            failure_persistence: None,
            ..Config::default()
        });
        // The second component is a random order of the generators.
        let strat = (class_strategy(n), Just((0..n).collect::<Vec<usize>>()).prop_shuffle());
        runner
            .run(&strat, |((terms, k), perm)| {
                let d = build_class(sys, &terms, k);
                let z = zariski_decompose(sys, &d).map_err(|e| TestCaseError::fail(e.to_string()))?;
                check_decomposition(sys, &d, &z)?;
                check_order_independence(sys, &d, &z, &perm)
            })
            .map_err(|e| e.to_string())
    }
}

pub mod quadrature {
    use dp2_delta::catalog::Candidate;
    use dp2_delta::delta::{FlagStratum, VOLUME};
    use serde_json::Value;
    use std::collections::BTreeMap;

    fn rational(v: &Value) -> f64 {
        v["num"].as_i64().unwrap() as f64 / v["den"].as_i64().unwrap() as f64
    }

    /// Polynomial coefficients, constant term first.
    fn poly(v: &Value) -> Vec<f64> {
        v.as_array().unwrap().iter().map(rational).collect()
    }

    fn eval(p: &[f64], x: f64) -> f64 {
        p.iter().rev().fold(0.0, |acc, c| acc * x + c)
    }

    fn simpson(f: &dyn Fn(f64) -> f64, a: f64, b: f64) -> f64 {
        (b - a) / 6.0 * (f(a) + 4.0 * f((a + b) / 2.0) + f(b))
    }

    fn adaptive(f: &dyn Fn(f64) -> f64, a: f64, b: f64, whole: f64, eps: f64, depth: u32) -> f64 {
        let m = (a + b) / 2.0;
        let (l, r) = (simpson(f, a, m), simpson(f, m, b));
        if depth == 0 || (l + r - whole).abs() <= 15.0 * eps {
            return l + r + (l + r - whole) / 15.0;
        }
        adaptive(f, a, m, l, eps / 2.0, depth - 1) + adaptive(f, m, b, r, eps / 2.0, depth - 1)
    }

    pub fn integrate(f: &dyn Fn(f64) -> f64, a: f64, b: f64) -> f64 {
        adaptive(f, a, b, simpson(f, a, b), 1e-13, 40)
    }

    pub struct ExportedPiece {
        start: f64,
        end: f64,
        negative: BTreeMap<String, Vec<f64>>,
        p_sq: Vec<f64>,
        p_dot: Vec<f64>,
    }

    /// The flag's family after a round trip through its JSON export.
    pub fn exported(c: &Candidate) -> Vec<ExportedPiece> {
        let text = serde_json::to_string(&c.flag.family.to_json()).unwrap();
        let v: Value = serde_json::from_str(&text).unwrap();
        v["pieces"]
            .as_array()
            .unwrap()
            .iter()
            .map(|p| ExportedPiece {
                start: rational(&p["start"]),
                end: rational(&p["end"]),
                negative: p["negative"]
                    .as_array()
                    .unwrap()
                    .iter()
                    .map(|n| (n["curve"].as_str().unwrap().to_string(), poly(&n["coefficient"])))
                    .collect(),
                p_sq: poly(&p["p_squared"]),
                p_dot: poly(&p["p_dot_carrier"]),
            })
            .collect()
    }

    /// `(1/vol) ∫ P^2`.
    pub fn s_curve(pieces: &[ExportedPiece]) -> f64 {
        pieces.iter().map(|p| integrate(&|x| eval(&p.p_sq, x), p.start, p.end)).sum::<f64>() / VOLUME as f64
    }

    /// `(2/vol) ∫ h`, with `h` rebuilt from the exported coefficients.
    pub fn s_flag(pieces: &[ExportedPiece], labels: &[String], st: &FlagStratum) -> f64 {
        let local: Vec<(String, f64)> = st
            .stratum
            .incident
            .iter()
            .map(|&(j, m)| (labels[j].clone(), m as f64))
            .collect();
        pieces
            .iter()
            .map(|p| {
                let h = |x: f64| {
                    let pc = eval(&p.p_dot, x);
                    let nc: f64 = local
                        .iter()
                        .map(|(l, m)| m * p.negative.get(l).map_or(0.0, |n| eval(n, x)))
                        .sum();
                    pc * nc + pc * pc / 2.0
                };
                integrate(&h, p.start, p.end)
            })
            .sum::<f64>()
            * 2.0
            / VOLUME as f64
    }
}
