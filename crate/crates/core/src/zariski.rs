//! Zariski decomposition on surfaces whose effective cone is generated by a
//! finite set of negative curves.
//!
//! The family `D(v) = D0 - v C` is resolved chamber by chamber. On each
//! chamber the negative support is constant, so every coefficient of `N(v)`
//! and of `P(v)` is affine in `v`. The support just to the right of a point
//! `v0` is found by running the decomposition on `D(v0 + eps)` with values
//! compared lexicographically as `a + b eps`.

use crate::poly::Poly;
use crate::rational::{fmt_q, QJson, Q};
use crate::simplex::{self, LpResult};
use crate::surface::SurfaceModel;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};
use std::cmp::Ordering;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ZariskiError {
    #[error("class {0} is not pseudo-effective")]
    NotPseudoEffective(String),
    #[error("carrier index {0} is out of range")]
    BadCarrier(usize),
    #[error("threshold linear program is unbounded")]
    Unbounded,
}

/// A lattice `Z^{1,n-1}` with a finite list of generating negative curves.
#[derive(Clone, Debug)]
pub struct CurveSystem {
    pub dim: usize,
    pub curves: Vec<Vec<i64>>,
    pub labels: Vec<String>,
}

pub fn dot(a: &[Q], b: &[Q]) -> Q {
    let mut s = a[0] * b[0];
    for i in 1..a.len() {
        s -= a[i] * b[i];
    }
    s
}

pub fn to_q(c: &[i64]) -> Vec<Q> {
    c.iter().map(|&x| Q::from_integer(x as i128)).collect()
}

/// `-K` in the coordinates of an `n`-dimensional lattice, the last `n - 8`
/// coordinates being zero.
pub fn anticanonical(dim: usize) -> Vec<Q> {
    let mut v = vec![Q::zero(); dim];
    for (i, x) in crate::lattice::K.iter().enumerate() {
        v[i] = Q::from_integer(-*x as i128);
    }
    v
}

impl CurveSystem {
    pub fn from_model(m: &SurfaceModel) -> Self {
        CurveSystem {
            dim: crate::lattice::RANK,
            curves: m.curves.iter().map(|c| c.class.to_vec()).collect(),
            labels: m.curves.iter().map(|c| c.label.clone()).collect(),
        }
    }

    pub fn curve_q(&self, i: usize) -> Vec<Q> {
        to_q(&self.curves[i])
    }

    pub fn curve_dot(&self, i: usize, d: &[Q]) -> Q {
        dot(&self.curve_q(i), d)
    }

    fn gram(&self, idx: &[usize]) -> Vec<Vec<Q>> {
        idx.iter()
            .map(|&i| {
                let ci = self.curve_q(i);
                idx.iter().map(|&j| dot(&ci, &self.curve_q(j))).collect()
            })
            .collect()
    }
}

/// `a + b eps`, ordered lexicographically.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
struct Aff {
    a: Q,
    b: Q,
}

impl Aff {
    fn cmp_zero(&self) -> Ordering {
        self.a
            .cmp(&Q::zero())
            .then_with(|| self.b.cmp(&Q::zero()))
    }
}

/// Solves `G x = r` for each right-hand side column. Returns `None` unless
/// `G` is negative definite, which elimination without pivoting detects as
/// a strictly negative pivot at every step.
#[allow(clippy::needless_range_loop)]
fn solve_negative_definite(g: &[Vec<Q>], rhs: &[Vec<Q>]) -> Option<Vec<Vec<Q>>> {
    let n = g.len();
    let k = rhs.len();
    let mut m: Vec<Vec<Q>> = (0..n)
        .map(|i| {
            let mut row = g[i].clone();
            row.extend(rhs.iter().map(|col| col[i]));
            row
        })
        .collect();
    for p in 0..n {
        if !m[p][p].is_negative() {
            return None;
        }
        for r in p + 1..n {
            if m[r][p].is_zero() {
                continue;
            }
            let f = m[r][p] / m[p][p];
            for c in p..n + k {
                let t = m[p][c];
                m[r][c] -= f * t;
            }
        }
    }
    let mut x = vec![vec![Q::zero(); n]; k];
    for col in 0..k {
        for i in (0..n).rev() {
            let mut s = m[i][n + col];
            for j in i + 1..n {
                s -= m[i][j] * x[col][j];
            }
            x[col][i] = s / m[i][i];
        }
    }
    Some(x)
}

/// Negative support and coefficients of `base + eps dir`.
fn decompose_aff(
    sys: &CurveSystem,
    base: &[Q],
    dir: &[Q],
) -> Result<(Vec<usize>, Vec<Aff>), ZariskiError> {
    let ncurves = sys.curves.len();
    let cq: Vec<Vec<Q>> = (0..ncurves).map(|i| sys.curve_q(i)).collect();
    let mut support: Vec<usize> = Vec::new();
    let mut coeffs: Vec<Aff> = Vec::new();
    loop {
        // P = D - sum a_i C_i, kept as a pair of vectors.
        let mut p0 = base.to_vec();
        let mut p1 = dir.to_vec();
        for (&i, c) in support.iter().zip(&coeffs) {
            for k in 0..sys.dim {
                p0[k] -= c.a * cq[i][k];
                p1[k] -= c.b * cq[i][k];
            }
        }
        let new: Vec<usize> = (0..ncurves)
            .filter(|i| !support.contains(i))
            .filter(|&i| {
                let v = Aff {
                    a: dot(&p0, &cq[i]),
                    b: dot(&p1, &cq[i]),
                };
                v.cmp_zero() == Ordering::Less
            })
            .collect();
        if new.is_empty() {
            break;
        }
        support.extend(new);
        support.sort();
        let g = sys.gram(&support);
        let r0: Vec<Q> = support.iter().map(|&i| dot(base, &cq[i])).collect();
        let r1: Vec<Q> = support.iter().map(|&i| dot(dir, &cq[i])).collect();
        let sol = solve_negative_definite(&g, &[r0, r1])
            .ok_or_else(|| ZariskiError::NotPseudoEffective(fmt_vec(base)))?;
        coeffs = (0..support.len())
            .map(|j| Aff {
                a: sol[0][j],
                b: sol[1][j],
            })
            .collect();
        if coeffs.iter().any(|c| c.cmp_zero() == Ordering::Less) {
            return Err(ZariskiError::NotPseudoEffective(fmt_vec(base)));
        }
    }
    Ok((support, coeffs))
}

fn fmt_vec(v: &[Q]) -> String {
    let parts: Vec<String> = v.iter().map(fmt_q).collect();
    format!("({})", parts.join(","))
}

/// Nef against every generator; equivalent to nefness because the
/// generators span the effective cone.
pub fn is_nef(sys: &CurveSystem, d: &[Q]) -> bool {
    (0..sys.curves.len()).all(|i| !sys.curve_dot(i, d).is_negative())
}

fn cone_matrix(sys: &CurveSystem) -> Vec<Vec<Q>> {
    (0..sys.dim)
        .map(|k| {
            sys.curves
                .iter()
                .map(|c| Q::from_integer(c[k] as i128))
                .collect()
        })
        .collect()
}

/// Membership in the cone spanned by the generators, decided by an exact LP.
pub fn is_pseudo_effective(sys: &CurveSystem, d: &[Q]) -> bool {
    simplex::feasible_point(&cone_matrix(sys), d).is_some()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Zariski {
    /// `(curve index, coefficient)` for the negative part, coefficients > 0.
    pub negative: Vec<(usize, Q)>,
    pub positive: Vec<Q>,
}

pub fn zariski_decompose(sys: &CurveSystem, d: &[Q]) -> Result<Zariski, ZariskiError> {
    if !is_pseudo_effective(sys, d) {
        return Err(ZariskiError::NotPseudoEffective(fmt_vec(d)));
    }
    let zero = vec![Q::zero(); sys.dim];
    let (support, coeffs) = decompose_aff(sys, d, &zero)?;
    let mut p = d.to_vec();
    let mut negative = Vec::new();
    for (&i, c) in support.iter().zip(&coeffs) {
        if c.a.is_zero() {
            continue;
        }
        let ci = sys.curve_q(i);
        for k in 0..sys.dim {
            p[k] -= c.a * ci[k];
        }
        negative.push((i, c.a));
    }
    Ok(Zariski {
        negative,
        positive: p,
    })
}

/// `sup { v >= 0 : D0 - v C is pseudo-effective }`.
pub fn psef_threshold(sys: &CurveSystem, d0: &[Q], c: &[Q]) -> Result<Q, ZariskiError> {
    let mut a = cone_matrix(sys);
    for (k, row) in a.iter_mut().enumerate() {
        row.push(c[k]);
    }
    let n = sys.curves.len() + 1;
    let mut cost = vec![Q::zero(); n];
    cost[n - 1] = -Q::from_integer(1);
    match simplex::minimize(&a, d0, &cost) {
        LpResult::Optimal { value, .. } => Ok(-value),
        LpResult::Infeasible => Err(ZariskiError::NotPseudoEffective(fmt_vec(d0))),
        LpResult::Unbounded => Err(ZariskiError::Unbounded),
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Piece {
    pub start: Q,
    pub end: Q,
    /// `(curve index, coefficient of N(v))`, each of degree <= 1.
    pub negative: Vec<(usize, Poly)>,
    /// `P(v)^2`, degree <= 2.
    pub p_sq: Poly,
    /// `P(v) . C`, degree <= 1.
    pub p_dot: Poly,
}

impl Piece {
    /// Coefficient of a curve in `N(v)` on this piece.
    pub fn coefficient(&self, curve: usize) -> Poly {
        self.negative
            .iter()
            .find(|(i, _)| *i == curve)
            .map(|(_, p)| p.clone())
            .unwrap_or_else(Poly::zero)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PiecewiseFamily {
    pub carrier: usize,
    pub tau: Q,
    pub pieces: Vec<Piece>,
    pub labels: Vec<String>,
}

impl PiecewiseFamily {
    /// Interior breakpoints together with the endpoints `0` and `tau`.
    pub fn breakpoints(&self) -> Vec<Q> {
        let mut v: Vec<Q> = self.pieces.iter().map(|p| p.start).collect();
        v.push(self.tau);
        v
    }

    pub fn piece_at(&self, v: Q) -> Option<&Piece> {
        self.pieces.iter().find(|p| p.start <= v && v <= p.end)
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(FamilyJson::from(self)).expect("serializable")
    }
}

#[derive(Serialize, Deserialize)]
struct NegJson {
    curve: String,
    coefficient: Poly,
}

#[derive(Serialize, Deserialize)]
struct PieceJson {
    start: QJson,
    end: QJson,
    negative: Vec<NegJson>,
    p_squared: Poly,
    p_dot_carrier: Poly,
}

#[derive(Serialize, Deserialize)]
struct FamilyJson {
    carrier: String,
    tau: QJson,
    pieces: Vec<PieceJson>,
}

impl From<&PiecewiseFamily> for FamilyJson {
    fn from(f: &PiecewiseFamily) -> Self {
        FamilyJson {
            carrier: f.labels[f.carrier].clone(),
            tau: f.tau.into(),
            pieces: f
                .pieces
                .iter()
                .map(|p| PieceJson {
                    start: p.start.into(),
                    end: p.end.into(),
                    negative: p
                        .negative
                        .iter()
                        .map(|(i, c)| NegJson {
                            curve: f.labels[*i].clone(),
                            coefficient: c.clone(),
                        })
                        .collect(),
                    p_squared: p.p_sq.clone(),
                    p_dot_carrier: p.p_dot.clone(),
                })
                .collect(),
        }
    }
}

/// Chamber decomposition of `D0 - v C` on `[0, tau]`, `C` being generator
/// `carrier`.
pub fn piecewise_family(
    sys: &CurveSystem,
    d0: &[Q],
    carrier: usize,
) -> Result<PiecewiseFamily, ZariskiError> {
    if carrier >= sys.curves.len() {
        return Err(ZariskiError::BadCarrier(carrier));
    }
    let c = sys.curve_q(carrier);
    let tau = psef_threshold(sys, d0, &c)?;
    let cq: Vec<Vec<Q>> = (0..sys.curves.len()).map(|i| sys.curve_q(i)).collect();
    let dir: Vec<Q> = c.iter().map(|x| -x).collect();
    let mut pieces = Vec::new();
    let mut start = Q::zero();
    while start < tau {
        let base: Vec<Q> = (0..sys.dim).map(|k| d0[k] - start * c[k]).collect();
        let (support, coeffs) = decompose_aff(sys, &base, &dir)?;
        // Coefficients as polynomials in v: a + b (v - start).
        let negative: Vec<(usize, Poly)> = support
            .iter()
            .zip(&coeffs)
            .map(|(&i, a)| (i, Poly::affine(a.a - a.b * start, a.b)))
            .filter(|(_, p)| !p.is_zero())
            .collect();
        // P(v) coordinate-wise as affine polynomials.
        let pv: Vec<Poly> = (0..sys.dim)
            .map(|k| {
                let mut p = Poly::affine(d0[k], -c[k]);
                for (i, n) in &negative {
                    p = &p - &n.scale(cq[*i][k]);
                }
                p
            })
            .collect();
        let form = |x: &[Poly], y: &[Poly]| -> Poly {
            let mut s = &x[0] * &y[0];
            for k in 1..sys.dim {
                s = &s - &(&x[k] * &y[k]);
            }
            s
        };
        let p_sq = form(&pv, &pv);
        let cpoly: Vec<Poly> = c.iter().map(|&x| Poly::constant(x)).collect();
        let p_dot = form(&pv, &cpoly);
        // Next event: an outside curve reaching P.C' = 0, or a coefficient
        // reaching zero.
        let mut end = tau;
        for (i, ci) in cq.iter().enumerate() {
            if support.contains(&i) {
                continue;
            }
            let cp: Vec<Poly> = ci.iter().map(|&x| Poly::constant(x)).collect();
            let f = form(&pv, &cp);
            let slope = f.coeff(1);
            if slope.is_negative() {
                let root = -f.coeff(0) / slope;
                if root > start && root < end {
                    end = root;
                }
            }
        }
        for (_, n) in &negative {
            let slope = n.coeff(1);
            if slope.is_negative() {
                let root = -n.coeff(0) / slope;
                if root > start && root < end {
                    end = root;
                }
            }
        }
        pieces.push(Piece {
            start,
            end,
            negative,
            p_sq,
            p_dot,
        });
        start = end;
    }
    Ok(PiecewiseFamily {
        carrier,
        tau,
        pieces,
        labels: sys.labels.clone(),
    })
}
