//! Flag integrals and local delta bounds.
//!
//! For a flag `P ∈ C` with `C` a curve of log discrepancy `A`:
//! `S(C) = (1/vol) ∫ P(v)^2 dv` with `vol = (-K)^2 = 2`, so `S = (1/2) ∫ P^2`;
//! `h(v) = (P.C) (N.C)_P + (P.C)^2 / 2`, where `(N.C)_P` sums the
//! coefficients of `N(v)` times local intersection multiplicities at `P`;
//! `S(W; P) = (2/vol) ∫ h dv`. The point then satisfies
//! `min(A/S(C), 1/S(W; P)) <= delta_P <= A/S(C)`.

use crate::blowup::{self, BlowupError, BlowupModel};
use crate::poly::Poly;
use crate::rational::{fmt_q, min_q, q, qr, QJson, Q};
use crate::strategy;
use crate::surface::{PointStratum, StratumKind, SurfaceModel};
use crate::zariski::{self, anticanonical, CurveSystem, PiecewiseFamily, ZariskiError};
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use std::collections::BTreeSet;
use thiserror::Error;

/// `(-K)^2`.
pub const VOLUME: i128 = 2;

/// Imported lower bound for points off every line through a singular point.
pub fn generic_floor() -> Q {
    qr(9, 5)
}

pub const GENERIC_AXIOM: &str = "generic-floor-9/5";
pub const GENERIC_LEMMA: &str = "deg2-genpoint";

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DeltaError {
    #[error("stratum lies on curve {stratum_carrier}, not on flag carrier {carrier}")]
    StratumNotOnCarrier {
        carrier: String,
        stratum_carrier: String,
    },
    #[error(transparent)]
    Zariski(#[from] ZariskiError),
    #[error(transparent)]
    Blowup(#[from] BlowupError),
    #[error("stratum {stratum} is not certified: lower {lower} < global upper {upper}")]
    UncertifiedStratum {
        stratum: String,
        lower: String,
        upper: String,
    },
}

/// One segment of `h(v)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HPiece {
    pub start: Q,
    pub end: Q,
    pub h: Poly,
}

pub fn s_curve(family: &PiecewiseFamily) -> Q {
    let total: Q = family
        .pieces
        .iter()
        .map(|p| p.p_sq.integrate(p.start, p.end))
        .sum();
    total / q(VOLUME)
}

/// `h(v)` for a stratum on the family's carrier. Incident curves are indices
/// into the family's curve system.
pub fn h_function(family: &PiecewiseFamily, stratum: &PointStratum) -> Result<Vec<HPiece>, DeltaError> {
    if stratum.carrier != family.carrier {
        return Err(DeltaError::StratumNotOnCarrier {
            carrier: family.labels[family.carrier].clone(),
            stratum_carrier: family
                .labels
                .get(stratum.carrier)
                .cloned()
                .unwrap_or_else(|| format!("#{}", stratum.carrier)),
        });
    }
    Ok(family
        .pieces
        .iter()
        .map(|p| {
            let mut local = Poly::zero();
            for &(j, m) in &stratum.incident {
                local = &local + &p.coefficient(j).scale(q(m as i128));
            }
            let h = &(&p.p_dot * &local) + &(&p.p_dot * &p.p_dot).scale(qr(1, 2));
            HPiece {
                start: p.start,
                end: p.end,
                h,
            }
        })
        .collect())
}

pub fn s_flag(family: &PiecewiseFamily, stratum: &PointStratum) -> Result<Q, DeltaError> {
    let h = h_function(family, stratum)?;
    let total: Q = h.iter().map(|p| p.h.integrate(p.start, p.end)).sum();
    Ok(total * q(2) / q(VOLUME))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum FlagKind {
    Curve,
    Blowup,
}

/// A stratum on a flag carrier together with its `S(W; P)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FlagStratum {
    pub stratum: PointStratum,
    pub name: String,
    pub s_w: Q,
}

/// Everything computed for one flag carrier.
#[derive(Clone, Debug)]
pub struct FlagData {
    pub kind: FlagKind,
    pub carrier: String,
    /// Log discrepancy of the carrier.
    pub log_discrepancy: Q,
    pub family: PiecewiseFamily,
    pub s_curve: Q,
    pub strata: Vec<FlagStratum>,
}

impl FlagData {
    /// `A / S(C)`.
    pub fn upper(&self) -> Q {
        self.log_discrepancy / self.s_curve
    }

    /// `min(A/S(C), 1/S(W; P))` for one stratum.
    pub fn lower_at(&self, s_w: Q) -> Q {
        if s_w.is_zero() {
            self.upper()
        } else {
            min_q(self.upper(), Q::one() / s_w)
        }
    }

    pub fn stratum_index(&self, incident: &[(usize, u32)], kind: StratumKind) -> Option<usize> {
        self.strata
            .iter()
            .position(|s| s.stratum.incident == incident && s.stratum.kind == kind)
    }

    /// Smallest lower bound over all strata of the carrier.
    pub fn lower(&self) -> Q {
        self.strata
            .iter()
            .map(|s| self.lower_at(s.s_w))
            .min()
            .unwrap_or_else(|| self.upper())
    }
}

fn stratum_name(labels: &[String], s: &PointStratum) -> String {
    match s.kind {
        StratumKind::Generic => format!("{} general", labels[s.carrier]),
        StratumKind::Intersection { copy } => {
            let others: Vec<&str> = s.incident.iter().map(|(j, _)| labels[*j].as_str()).collect();
            let base = format!("{} ∩ {}", labels[s.carrier], others.join(" ∩ "));
            if copy > 0 {
                format!("{base} #{}", copy + 1)
            } else {
                base
            }
        }
    }
}

fn flag_from_family(
    kind: FlagKind,
    log_discrepancy: Q,
    family: PiecewiseFamily,
    strata: Vec<PointStratum>,
) -> Result<FlagData, DeltaError> {
    let s = s_curve(&family);
    let strata = strata
        .into_iter()
        .map(|st| {
            let s_w = s_flag(&family, &st)?;
            Ok(FlagStratum {
                name: stratum_name(&family.labels, &st),
                stratum: st,
                s_w,
            })
        })
        .collect::<Result<Vec<_>, DeltaError>>()?;
    Ok(FlagData {
        kind,
        carrier: family.labels[family.carrier].clone(),
        log_discrepancy,
        family,
        s_curve: s,
        strata,
    })
}

/// Curve flag on a curve of the model, evaluated on all its point strata.
pub fn curve_flag(model: &SurfaceModel, carrier: usize) -> Result<FlagData, DeltaError> {
    let sys = CurveSystem::from_model(model);
    let family = zariski::piecewise_family(&sys, &anticanonical(sys.dim), carrier)?;
    flag_from_family(FlagKind::Curve, Q::one(), family, model.point_strata(carrier))
}

/// `(lower, upper)` for one stratum via the flag on its carrier.
pub fn delta_point_bound_curve(model: &SurfaceModel, stratum: &PointStratum) -> Result<(Q, Q), DeltaError> {
    let sys = CurveSystem::from_model(model);
    let family = zariski::piecewise_family(&sys, &anticanonical(sys.dim), stratum.carrier)?;
    let s = s_curve(&family);
    let s_w = s_flag(&family, stratum)?;
    let upper = Q::one() / s;
    let lower = if s_w.is_zero() { upper } else { min_q(upper, Q::one() / s_w) };
    Ok((lower, upper))
}

/// Flag `P ∈ E_P` on the ordinary blowup at `a ∩ b`. `A(E_P) = 2` and the
/// different on `E_P` vanishes, so every point of `E_P` has log discrepancy 1.
pub fn blowup_flag(model: &SurfaceModel, a: usize, b: usize) -> Result<FlagData, DeltaError> {
    let bm = blowup::blowup_at_intersection(model, a, b)?;
    let family = zariski::piecewise_family(&bm.system, &anticanonical(bm.system.dim), bm.exceptional)?;
    verify_blowup(&bm, &family)?;
    let e = bm.system.curve_q(bm.exceptional);
    let mut strata = vec![PointStratum {
        carrier: bm.exceptional,
        incident: vec![],
        kind: StratumKind::Generic,
    }];
    for &i in &bm.through_point {
        let w = bm.system.curve_dot(i, &e);
        let w = *w.numer() / *w.denom();
        for copy in 0..w as u32 {
            strata.push(PointStratum {
                carrier: bm.exceptional,
                incident: vec![(i, 1)],
                kind: StratumKind::Intersection { copy },
            });
        }
    }
    flag_from_family(FlagKind::Blowup, q(2), family, strata)
}

/// Consistency checks on a blowup family: positive parts are nef against
/// every generator and have nonnegative square throughout.
fn verify_blowup(bm: &BlowupModel, family: &PiecewiseFamily) -> Result<(), DeltaError> {
    let fail = |why: String| DeltaError::Blowup(BlowupError::BlowupModelInvalid(bm.name.clone(), why));
    let d0 = anticanonical(bm.system.dim);
    let c = bm.system.curve_q(bm.exceptional);
    for p in &family.pieces {
        if p.p_sq.min_on(p.start, p.end) < Q::zero() {
            return Err(fail(format!("negative volume on [{}, {}]", fmt_q(&p.start), fmt_q(&p.end))));
        }
        let mid = (p.start + p.end) / q(2);
        let mut pv: Vec<Q> = (0..bm.system.dim).map(|k| d0[k] - mid * c[k]).collect();
        for (i, n) in &p.negative {
            let ci = bm.system.curve_q(*i);
            let a = n.eval(mid);
            for k in 0..bm.system.dim {
                pv[k] -= a * ci[k];
            }
        }
        if !zariski::is_nef(&bm.system, &pv) {
            return Err(fail(format!("positive part not nef at v = {}", fmt_q(&mid))));
        }
    }
    Ok(())
}

/// Best bounds at a blowup point: `(lower, upper)`.
pub fn delta_point_bound_blowup(model: &SurfaceModel, a: usize, b: usize) -> Result<(Q, Q), DeltaError> {
    let f = blowup_flag(model, a, b)?;
    Ok((f.lower(), f.upper()))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SValue {
    pub flag: String,
    pub s_curve: QJson,
    pub s_w: QJson,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StratumBound {
    pub name: String,
    pub lemma: String,
    pub lower: QJson,
    pub upper: Option<QJson>,
    #[serde(rename = "S_values")]
    pub s_values: Vec<SValue>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DeltaCertificate {
    #[serde(rename = "type")]
    pub ade: String,
    pub lines: usize,
    pub delta: QJson,
    pub strata: Vec<StratumBound>,
    pub axioms: Vec<String>,
}

impl DeltaCertificate {
    pub fn delta_q(&self) -> Q {
        Q::new(self.delta.num, self.delta.den)
    }
}

/// A point of the surface, described as a set of flags through it.
struct Point {
    name: String,
    /// `(carrier curve, stratum on it)`.
    flags: Vec<(usize, PointStratum)>,
    /// The two (-2)-curves meeting here, if any.
    neg_two_pair: Option<(usize, usize)>,
}

fn support_of(flag: &FlagData) -> BTreeSet<usize> {
    flag.family
        .pieces
        .iter()
        .flat_map(|p| p.negative.iter().map(|(i, _)| *i))
        .collect()
}

/// Points of the model to certify, with equivalent points merged.
fn points(model: &SurfaceModel, flags: &[(usize, FlagData)]) -> Vec<Point> {
    let relevant: BTreeSet<usize> = flags.iter().map(|(c, _)| *c).collect();
    let mut out = Vec::new();
    for (c, flag) in flags {
        let supp = support_of(flag);
        out.push(Point {
            name: format!("{} general", model.curves[*c].label),
            flags: vec![(
                *c,
                PointStratum {
                    carrier: *c,
                    incident: vec![],
                    kind: StratumKind::Generic,
                },
            )],
            neg_two_pair: None,
        });
        for d in 0..model.curves.len() {
            if d == *c {
                continue;
            }
            let w = model.dot(*c, d);
            if w <= 0 {
                continue;
            }
            let d_relevant = relevant.contains(&d);
            // Each pair of relevant curves is listed once, from the smaller index.
            if d_relevant && d < *c {
                continue;
            }
            // Points on no other relevant curve and off the negative support
            // behave like general points of the carrier.
            if !d_relevant && !supp.contains(&d) {
                continue;
            }
            for copy in 0..w as u32 {
                let kind = StratumKind::Intersection { copy };
                let mut fl = vec![(
                    *c,
                    PointStratum {
                        carrier: *c,
                        incident: vec![(d, 1)],
                        kind,
                    },
                )];
                if d_relevant {
                    fl.push((
                        d,
                        PointStratum {
                            carrier: d,
                            incident: vec![(*c, 1)],
                            kind,
                        },
                    ));
                }
                let both_neg_two = model.curves[*c].is_neg_two() && model.curves[d].is_neg_two();
                let mut name = format!("{} ∩ {}", model.curves[*c].label, model.curves[d].label);
                if copy > 0 {
                    name = format!("{name} #{}", copy + 1);
                }
                out.push(Point {
                    name,
                    flags: fl,
                    neg_two_pair: both_neg_two.then_some((*c, d)),
                });
            }
        }
    }
    out
}

/// Computes all curve flags on the relevant curves of a model.
pub fn relevant_flags(model: &SurfaceModel) -> Result<Vec<(usize, FlagData)>, DeltaError> {
    model
        .relevant_curves()
        .into_iter()
        .map(|c| Ok((c, curve_flag(model, c)?)))
        .collect()
}

/// Global certificate: every relevant point gets the best available lower
/// bound, and `delta` is certified when the least lower bound equals the
/// least upper bound.
pub fn delta_global(model: &SurfaceModel) -> Result<DeltaCertificate, DeltaError> {
    let flags = relevant_flags(model)?;
    let flag_of = |c: usize| &flags.iter().find(|(x, _)| *x == c).unwrap().1;
    let catalog = strategy::assignments(model);
    let lemma_of = |c: usize| {
        catalog
            .iter()
            .find(|(x, _)| *x == c)
            .map(|(_, l)| l.clone())
            .unwrap_or_else(|| "computed".to_string())
    };
    struct Eval {
        name: String,
        lemma: String,
        lower: Q,
        upper: Option<Q>,
        s_values: Vec<SValue>,
        neg_two_pair: Option<(usize, usize)>,
    }
    let mut evals: Vec<Eval> = Vec::new();
    for p in points(model, &flags) {
        let mut lower: Option<(Q, String)> = None;
        let mut upper: Option<Q> = None;
        let mut s_values = Vec::new();
        for (c, st) in &p.flags {
            let f = flag_of(*c);
            let i = f
                .stratum_index(&st.incident, st.kind)
                .expect("stratum listed on its carrier");
            let s_w = f.strata[i].s_w;
            let lo = f.lower_at(s_w);
            s_values.push(SValue {
                flag: f.carrier.clone(),
                s_curve: f.s_curve.into(),
                s_w: s_w.into(),
            });
            if lower.as_ref().is_none_or(|(l, _)| lo > *l) {
                lower = Some((lo, lemma_of(*c)));
            }
            upper = Some(upper.map_or(f.upper(), |u| min_q(u, f.upper())));
        }
        let (lower, lemma) = lower.expect("at least one flag");
        evals.push(Eval {
            name: p.name,
            lemma,
            lower,
            upper,
            s_values,
            neg_two_pair: p.neg_two_pair,
        });
    }
    // Blow up only the (-2)-(-2) points that curve flags leave short of the
    // global upper bound.
    let Some(global_upper) = evals.iter().filter_map(|e| e.upper).min() else {
        return Err(DeltaError::UncertifiedStratum {
            stratum: GENERIC_LEMMA.to_string(),
            lower: fmt_q(&generic_floor()),
            upper: "none".to_string(),
        });
    };
    for e in evals.iter_mut() {
        if let (Some((a, b)), true) = (e.neg_two_pair, e.lower < global_upper) {
            let f = blowup_flag(model, a, b)?;
            let lo = f.lower();
            for s in &f.strata {
                e.s_values.push(SValue {
                    flag: format!("blowup {}", e.name),
                    s_curve: f.s_curve.into(),
                    s_w: s.s_w.into(),
                });
            }
            if lo > e.lower {
                e.lower = lo;
                e.lemma = strategy::BLOWUP_LEMMA.to_string();
            }
            e.upper = Some(e.upper.map_or(f.upper(), |u| min_q(u, f.upper())));
        }
    }
    let global_upper = evals.iter().filter_map(|e| e.upper).min().expect("some flag");
    let mut strata: Vec<StratumBound> = evals
        .iter()
        .map(|e| StratumBound {
            name: e.name.clone(),
            lemma: e.lemma.clone(),
            lower: e.lower.into(),
            upper: e.upper.map(Into::into),
            s_values: e.s_values.clone(),
        })
        .collect();
    strata.push(StratumBound {
        name: "points off lines through singular points".to_string(),
        lemma: GENERIC_LEMMA.to_string(),
        lower: generic_floor().into(),
        upper: None,
        s_values: vec![],
    });
    let global_lower = evals
        .iter()
        .map(|e| e.lower)
        .fold(generic_floor(), min_q);
    if global_lower != global_upper {
        let worst = evals
            .iter()
            .find(|e| e.lower == global_lower)
            .map(|e| e.name.clone())
            .unwrap_or_else(|| GENERIC_LEMMA.to_string());
        return Err(DeltaError::UncertifiedStratum {
            stratum: worst,
            lower: fmt_q(&global_lower),
            upper: fmt_q(&global_upper),
        });
    }
    Ok(DeltaCertificate {
        ade: model.ade.to_string(),
        lines: model.line_count,
        delta: global_lower.into(),
        strata,
        axioms: vec![GENERIC_AXIOM.to_string()],
    })
}
