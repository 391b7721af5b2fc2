//! Per-surface proof strategy: which catalog lemma covers each relevant
//! curve of a table surface.
//!
//! The assignment is frozen in `data/strategy.toml` so that it can be read
//! and diffed; [`derive`] recomputes it from the lemma matching and the test
//! suite keeps the two in agreement. Curves no lemma describes are reported
//! under [`COMPUTED`].

use crate::catalog;
use crate::delta;
use crate::surface::SurfaceModel;
use serde::{Deserialize, Serialize};
use std::sync::OnceLock;

pub const BLOWUP_LEMMA: &str = "deg2-65-A2points";

/// Lemma name for curves whose flag the engine evaluates without a catalog
/// entry.
pub const COMPUTED: &str = "computed";

const RAW: &str = include_str!("../data/strategy.toml");

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Assignment {
    pub curve: String,
    pub lemma: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub part: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SurfaceStrategy {
    #[serde(rename = "type")]
    pub ade: String,
    pub lines: usize,
    pub assignments: Vec<Assignment>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "kebab-case")]
struct StrategyFile {
    format_version: u32,
    surface: Vec<SurfaceStrategy>,
}

/// The frozen strategy table.
pub fn frozen() -> &'static [SurfaceStrategy] {
    static S: OnceLock<Vec<SurfaceStrategy>> = OnceLock::new();
    S.get_or_init(|| {
        let f: StrategyFile = toml::from_str(RAW).expect("embedded strategy table parses");
        assert_eq!(f.format_version, 1, "strategy format-version");
        f.surface
    })
}

/// Recomputes the strategy of a model from its curve flags.
pub fn derive(model: &SurfaceModel) -> Result<SurfaceStrategy, delta::DeltaError> {
    let assignments = delta::relevant_flags(model)?
        .iter()
        .map(|(c, f)| {
            let (lemma, part) = match catalog::identify(f) {
                Some((l, i)) => {
                    let st = l.family().expect("identified lemmas have a family");
                    (l.id.clone(), st.parts[i].name.clone())
                }
                None => (COMPUTED.to_string(), None),
            };
            Assignment {
                curve: model.curves[*c].label.clone(),
                lemma,
                part,
            }
        })
        .collect();
    Ok(SurfaceStrategy {
        ade: model.ade.to_string(),
        lines: model.line_count,
        assignments,
    })
}

/// Renders strategies in the format of `data/strategy.toml`, one line per
/// curve.
pub fn render(strategies: &[SurfaceStrategy]) -> String {
    let mut out = String::from(
        "# Lemma covering each relevant curve of every table surface. Generated by\n\
         # `dp2 strategy`; the test suite checks it against the lemma matching.\n\n\
         format-version = 1\n",
    );
    for s in strategies {
        out.push_str(&format!("\n[[surface]]\ntype = {:?}\nlines = {}\nassignments = [\n", s.ade, s.lines));
        for a in &s.assignments {
            let part = a.part.as_ref().map(|p| format!(", part = {p:?}")).unwrap_or_default();
            out.push_str(&format!("  {{ curve = {:?}, lemma = {:?}{part} }},\n", a.curve, a.lemma));
        }
        out.push_str("]\n");
    }
    out
}

/// `(curve index, lemma id)` for the relevant curves of a model, from the
/// frozen table. Unknown surfaces get no assignments.
pub fn assignments(model: &SurfaceModel) -> Vec<(usize, String)> {
    let ade = model.ade.to_string();
    frozen()
        .iter()
        .find(|s| s.ade == ade && s.lines == model.line_count)
        .map(|s| {
            s.assignments
                .iter()
                .filter_map(|a| model.curve_by_label(&a.curve).map(|i| (i, a.lemma.clone())))
                .collect()
        })
        .unwrap_or_default()
}
