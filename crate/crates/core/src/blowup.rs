//! Ordinary blowup of a surface model at the intersection point of two
//! curves.
//!
//! The lattice gains a ninth coordinate for the exceptional curve `E` with
//! `E^2 = -1`. Generators of the effective cone
//! are `E`, the strict transforms `C - m E` of the negative curves (`m = 1`
//! for the two curves through the point), and `f - E` for every nef conic
//! class `f` meeting both curves through the point. The member of `|f|`
//! through the point always has multiplicity at least one there, so each
//! such class is effective.

use crate::lattice::{self, intersect, Class};
use crate::surface::SurfaceModel;
use crate::zariski::CurveSystem;
use thiserror::Error;

pub const BLOWUP_RANK: usize = lattice::RANK + 1;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum BlowupError {
    #[error("curves {0} and {1} do not meet; no blowup point")]
    NoIntersection(String, String),
    #[error("blowup model at {0} failed verification: {1}")]
    BlowupModelInvalid(String, String),
}

/// A blowup model: the curve system on the blown-up surface and the roles
/// of its generators.
#[derive(Clone, Debug)]
pub struct BlowupModel {
    pub system: CurveSystem,
    /// Index of `E` in `system`.
    pub exceptional: usize,
    /// Generators through the blown-up point, i.e. meeting `E`.
    pub through_point: Vec<usize>,
    pub name: String,
}

fn extend(c: &Class, m: i64) -> Vec<i64> {
    let mut v = c.to_vec();
    v.push(-m);
    v
}

/// Blows up the point `a ∩ b` of the model (curve indices).
pub fn blowup_at_intersection(
    model: &SurfaceModel,
    a: usize,
    b: usize,
) -> Result<BlowupModel, BlowupError> {
    let la = &model.curves[a].label;
    let lb = &model.curves[b].label;
    if model.dot(a, b) <= 0 {
        return Err(BlowupError::NoIntersection(la.clone(), lb.clone()));
    }
    let name = format!("{la} ∩ {lb}");
    let mut curves = Vec::new();
    let mut labels = Vec::new();
    for (i, c) in model.curves.iter().enumerate() {
        let m = i64::from(i == a || i == b);
        curves.push(extend(&c.class, m));
        labels.push(format!("{}~", c.label));
    }
    let mut e = vec![0i64; BLOWUP_RANK];
    e[lattice::RANK] = 1;
    let exceptional = curves.len();
    curves.push(e);
    labels.push("E_P".to_string());
    for f in lattice::conic_classes() {
        let nef = model.curves.iter().all(|c| intersect(f, &c.class) >= 0);
        if nef && intersect(f, &model.curves[a].class) >= 1 && intersect(f, &model.curves[b].class) >= 1 {
            curves.push(extend(f, 1));
            labels.push(format!("F{}~", lattice::fmt_class(f)));
        }
    }
    let system = CurveSystem {
        dim: BLOWUP_RANK,
        curves,
        labels,
    };
    let eq = system.curve_q(exceptional);
    let through_point = (0..system.curves.len())
        .filter(|&i| i != exceptional && system.curve_dot(i, &eq) > num_rational::Ratio::from_integer(0))
        .collect();
    Ok(BlowupModel {
        system,
        exceptional,
        through_point,
        name,
    })
}
