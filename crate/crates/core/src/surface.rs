//! Lattice models of degree-2 Du Val del Pezzo surfaces.
//!
//! A model of type `T` is a simple-root system of type `T` inside the `E7`
//! root system of `K^perp`. Its members are the (-2)-curves of the minimal
//! resolution, and its (-1)-curves are the line classes `l` with `l.r >= 0`
//! for every (-2)-curve `r`. Models are classified up to the Weyl group by
//! their number of (-1)-curves.

use crate::ade::AdeType;
use crate::lattice::{self, intersect, Class};
use petgraph::graph::{NodeIndex, UnGraph};
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, HashMap};
use std::fmt::Write as _;
use std::path::Path;
use std::sync::{Arc, Mutex, OnceLock};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SurfaceError {
    #[error("no degree-2 surface of type {0} is realizable")]
    UnknownType(String),
    #[error("type {ade} has several models (line counts {counts:?}); pass the line count")]
    AmbiguousType { ade: String, counts: Vec<usize> },
    #[error("type {ade} has no model with {lines} lines (available: {counts:?})")]
    NoSuchLineCount {
        ade: String,
        lines: usize,
        counts: Vec<usize>,
    },
    #[error("curve {0} is not a (-1)- or (-2)-class")]
    InvalidCurve(String),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SingularitySpec {
    pub ade_type: AdeType,
    pub expected_lines: Option<usize>,
}

impl SingularitySpec {
    pub fn new(ade_type: AdeType, expected_lines: Option<usize>) -> Self {
        SingularitySpec {
            ade_type,
            expected_lines,
        }
    }
}

/// One Weyl orbit of embeddings, given by its lexicographically first
/// representative in search order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Embedding {
    pub line_count: usize,
    /// Root classes in `AdeType::nodes()` order.
    pub simple_roots: Vec<Class>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CurveKind {
    /// Node `node` (Bourbaki label) of component `component`.
    NegTwo { component: usize, node: usize },
    NegOne,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Curve {
    pub class: Class,
    pub kind: CurveKind,
    pub label: String,
}

impl Curve {
    pub fn self_intersection(&self) -> i64 {
        intersect(&self.class, &self.class)
    }

    pub fn is_neg_two(&self) -> bool {
        matches!(self.kind, CurveKind::NegTwo { .. })
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SurfaceModel {
    pub ade: AdeType,
    /// (-2)-curves first, ordered by component then node label, followed by
    /// the (-1)-curves in lexicographic class order.
    pub curves: Vec<Curve>,
    pub neg_two_count: usize,
    pub line_count: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum StratumKind {
    /// Points of the carrier on no other negative curve.
    Generic,
    /// The `copy`-th intersection point with another curve.
    Intersection { copy: u32 },
}

/// A point class on a carrier curve, with the other curves through it.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PointStratum {
    pub carrier: usize,
    /// `(curve index, local intersection multiplicity with the carrier)`.
    pub incident: Vec<(usize, u32)>,
    pub kind: StratumKind,
}

impl SurfaceModel {
    /// Builds a model from explicit (-2)-classes, rejecting anything that is
    /// not a root.
    pub fn from_neg_two(ade: AdeType, roots: &[Class]) -> Result<Self, SurfaceError> {
        for r in roots {
            if !lattice::is_root(r) {
                return Err(SurfaceError::InvalidCurve(lattice::fmt_class(r)));
            }
        }
        let nodes = ade.nodes();
        assert_eq!(nodes.len(), roots.len(), "one root per Dynkin node");
        let mut tagged: Vec<((usize, usize), Class)> =
            nodes.iter().copied().zip(roots.iter().copied()).collect();
        tagged.sort_by_key(|(n, _)| *n);
        let mut curves: Vec<Curve> = tagged
            .iter()
            .map(|&((c, k), class)| Curve {
                class,
                kind: CurveKind::NegTwo {
                    component: c,
                    node: k,
                },
                label: format!("E{}.{}", c + 1, k),
            })
            .collect();
        let lines: Vec<Class> = lattice::line_classes()
            .iter()
            .filter(|l| roots.iter().all(|r| intersect(l, r) >= 0))
            .copied()
            .collect();
        let line_count = lines.len();
        curves.extend(lines.into_iter().enumerate().map(|(i, class)| Curve {
            class,
            kind: CurveKind::NegOne,
            label: format!("L{}", i + 1),
        }));
        Ok(SurfaceModel {
            ade,
            curves,
            neg_two_count: roots.len(),
            line_count,
        })
    }

    pub fn neg_two(&self) -> &[Curve] {
        &self.curves[..self.neg_two_count]
    }

    pub fn neg_one(&self) -> &[Curve] {
        &self.curves[self.neg_two_count..]
    }

    pub fn dot(&self, i: usize, j: usize) -> i64 {
        intersect(&self.curves[i].class, &self.curves[j].class)
    }

    pub fn curve_by_label(&self, label: &str) -> Option<usize> {
        self.curves.iter().position(|c| c.label == label)
    }

    /// Index of the (-2)-curve at `(component, node)`.
    pub fn node(&self, component: usize, node: usize) -> Option<usize> {
        self.neg_two().iter().position(|c| {
            c.kind
                == CurveKind::NegTwo {
                    component,
                    node,
                }
        })
    }

    /// (-2)-curves met by curve `i`, with intersection numbers.
    pub fn neg_two_neighbours(&self, i: usize) -> Vec<(usize, i64)> {
        (0..self.neg_two_count)
            .filter(|&j| j != i)
            .map(|j| (j, self.dot(i, j)))
            .filter(|&(_, w)| w > 0)
            .collect()
    }

    /// Lines meeting at least one (-2)-curve.
    pub fn adjacent_lines(&self) -> Vec<usize> {
        (self.neg_two_count..self.curves.len())
            .filter(|&i| !self.neg_two_neighbours(i).is_empty())
            .collect()
    }

    /// Curves whose flags the delta engine evaluates: all (-2)-curves and
    /// the lines through singular points.
    pub fn relevant_curves(&self) -> Vec<usize> {
        let mut v: Vec<usize> = (0..self.neg_two_count).collect();
        v.extend(self.adjacent_lines());
        v
    }

    pub fn dual_graph(&self) -> UnGraph<usize, u32> {
        let mut g = UnGraph::new_undirected();
        let idx: Vec<NodeIndex> = (0..self.curves.len()).map(|i| g.add_node(i)).collect();
        for i in 0..self.curves.len() {
            for j in i + 1..self.curves.len() {
                let w = self.dot(i, j);
                if w > 0 {
                    g.add_edge(idx[i], idx[j], w as u32);
                }
            }
        }
        g
    }

    /// Subgraph spanned by the (-2)-curves.
    pub fn neg_two_graph(&self) -> UnGraph<(), ()> {
        let mut g = UnGraph::new_undirected();
        let idx: Vec<NodeIndex> = (0..self.neg_two_count).map(|_| g.add_node(())).collect();
        for i in 0..self.neg_two_count {
            for j in i + 1..self.neg_two_count {
                for _ in 0..self.dot(i, j).max(0) {
                    g.add_edge(idx[i], idx[j], ());
                }
            }
        }
        g
    }

    /// Point strata on a carrier: one generic class and, for every curve
    /// meeting it with weight `w`, `w` distinct transversal points.
    pub fn point_strata(&self, carrier: usize) -> Vec<PointStratum> {
        let mut out = vec![PointStratum {
            carrier,
            incident: vec![],
            kind: StratumKind::Generic,
        }];
        for j in 0..self.curves.len() {
            if j == carrier {
                continue;
            }
            let w = self.dot(carrier, j);
            for copy in 0..w.max(0) as u32 {
                out.push(PointStratum {
                    carrier,
                    incident: vec![(j, 1)],
                    kind: StratumKind::Intersection { copy },
                });
            }
        }
        out
    }

    /// Graphviz rendering; vertex labels carry the curve kind and edges carry
    /// `weight = w`.
    pub fn to_dot(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "graph \"{}\" {{", self.ade);
        for (i, c) in self.curves.iter().enumerate() {
            let (kind, shape) = if c.is_neg_two() {
                ("-2", "box")
            } else {
                ("-1", "ellipse")
            };
            let _ = writeln!(
                s,
                "  n{i} [label=\"{} ({kind})\", kind=\"{kind}\", shape={shape}];",
                c.label
            );
        }
        let g = self.dual_graph();
        for e in g.edge_indices() {
            let (a, b) = g.edge_endpoints(e).unwrap();
            let w = g[e];
            let _ = writeln!(s, "  n{} -- n{} [weight={w}, label=\"{w}\"];", g[a], g[b]);
        }
        s.push_str("}\n");
        s
    }
}

fn masks() -> &'static (Vec<u128>, Vec<u128>, Vec<u128>) {
    static M: OnceLock<(Vec<u128>, Vec<u128>, Vec<u128>)> = OnceLock::new();
    M.get_or_init(|| {
        let roots = lattice::roots();
        let mut adj = vec![0u128; roots.len()];
        let mut orth = vec![0u128; roots.len()];
        for (i, a) in roots.iter().enumerate() {
            for (j, b) in roots.iter().enumerate() {
                match intersect(a, b) {
                    1 => adj[i] |= 1 << j,
                    0 => orth[i] |= 1 << j,
                    _ => {}
                }
            }
        }
        // neg[l]: roots pairing negatively with line l.
        let neg = lattice::line_classes()
            .iter()
            .map(|l| {
                roots
                    .iter()
                    .enumerate()
                    .filter(|(_, r)| intersect(l, r) < 0)
                    .fold(0u128, |m, (j, _)| m | 1 << j)
            })
            .collect();
        (adj, orth, neg)
    })
}

struct Search {
    nodes: Vec<(usize, usize)>,
    /// For each position, the earlier positions it must be adjacent to.
    adjacent_to: Vec<Vec<usize>>,
    /// Position of the previous isolated A1 node, for symmetry breaking.
    prev_a1: Vec<Option<usize>>,
    is_a1: Vec<bool>,
    chosen: Vec<usize>,
    found: BTreeMap<usize, Vec<usize>>,
}

impl Search {
    fn run(&mut self, pos: usize, used: u128) {
        let (adj, orth, neg) = masks();
        if pos == self.nodes.len() {
            let set = used;
            let lines = neg.iter().filter(|m| *m & set == 0).count();
            self.found.entry(lines).or_insert_with(|| self.chosen.clone());
            return;
        }
        let mut cand: u128 = if pos == 0 { 1 } else { !0u128 >> 2 };
        for q in 0..pos {
            let r = self.chosen[q];
            cand &= if self.adjacent_to[pos].contains(&q) {
                adj[r]
            } else {
                orth[r]
            };
        }
        cand &= !used;
        let roots = lattice::roots();
        while cand != 0 {
            let i = cand.trailing_zeros() as usize;
            cand &= cand - 1;
            if pos > 0 && self.is_a1[pos] {
                // Reflection in an isolated node flips its sign and fixes the
                // rest, so keep the larger of +-r and order equal components.
                let negated = lattice::root_index(&lattice::neg(&roots[i])).unwrap();
                if negated > i {
                    continue;
                }
                if let Some(p) = self.prev_a1[pos] {
                    if self.chosen[p] > i {
                        continue;
                    }
                }
            }
            self.chosen.push(i);
            self.run(pos + 1, used | 1 << i);
            self.chosen.pop();
        }
    }
}

/// Uncached exhaustive enumeration of Weyl orbits of simple-root embeddings,
/// keyed by line count. Orbits with no (-1)-curve are not realizable and are
/// dropped.
pub fn enumerate_embeddings_uncached(ade: &AdeType) -> Vec<Embedding> {
    if ade.is_smooth() {
        return vec![Embedding {
            line_count: lattice::LINE_COUNT,
            simple_roots: vec![],
        }];
    }
    if ade.rank() > 7 {
        return vec![];
    }
    let nodes = ade.nodes();
    let adjacent_to = (0..nodes.len())
        .map(|p| (0..p).filter(|&q| ade.adjacent(nodes[p], nodes[q])).collect())
        .collect();
    let comps = ade.components();
    let is_a1: Vec<bool> = nodes
        .iter()
        .map(|&(c, _)| comps[c].family == crate::ade::Family::A && comps[c].rank == 1)
        .collect();
    let mut prev_a1 = vec![None; nodes.len()];
    let mut last: Option<usize> = None;
    for p in 0..nodes.len() {
        if is_a1[p] {
            prev_a1[p] = last.filter(|&q| q > 0);
            last = Some(p);
        }
    }
    let mut s = Search {
        nodes,
        adjacent_to,
        prev_a1,
        is_a1,
        chosen: vec![],
        found: BTreeMap::new(),
    };
    s.run(0, 0);
    let roots = lattice::roots();
    s.found
        .into_iter()
        .rev()
        .filter(|(lines, _)| *lines > 0)
        .map(|(line_count, idx)| Embedding {
            line_count,
            simple_roots: idx.into_iter().map(|i| roots[i]).collect(),
        })
        .collect()
}

type EmbeddingCache = Mutex<HashMap<AdeType, Arc<Vec<Embedding>>>>;

fn memory_cache() -> &'static EmbeddingCache {
    static C: OnceLock<EmbeddingCache> = OnceLock::new();
    C.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Weyl orbits of realizable embeddings, in decreasing line count.
pub fn enumerate_embeddings(ade: &AdeType) -> Arc<Vec<Embedding>> {
    enumerate_embeddings_cached(ade, None)
}

/// As [`enumerate_embeddings`], also reading and writing JSON files under
/// `disk` when given. Unreadable cache files are recomputed.
pub fn enumerate_embeddings_cached(ade: &AdeType, disk: Option<&Path>) -> Arc<Vec<Embedding>> {
    if let Some(e) = memory_cache().lock().unwrap().get(ade) {
        return e.clone();
    }
    let file = disk.map(|d| d.join(format!("embeddings-{}.json", ade.to_string().replace('+', "_"))));
    let from_disk = file
        .as_ref()
        .and_then(|f| std::fs::read_to_string(f).ok())
        .and_then(|s| serde_json::from_str::<Vec<Embedding>>(&s).ok())
        .filter(|es| es.iter().all(|e| e.simple_roots.iter().all(lattice::is_root)));
    let es = match from_disk {
        Some(es) => es,
        None => {
            let es = enumerate_embeddings_uncached(ade);
            if let Some(f) = &file {
                if let Some(dir) = f.parent() {
                    let _ = std::fs::create_dir_all(dir);
                }
                if let Ok(s) = serde_json::to_string(&es) {
                    let _ = std::fs::write(f, s);
                }
            }
            es
        }
    };
    let es = Arc::new(es);
    memory_cache()
        .lock()
        .unwrap()
        .insert(ade.clone(), es.clone());
    es
}

pub fn build_surface(spec: &SingularitySpec) -> Result<SurfaceModel, SurfaceError> {
    build_surface_cached(spec, None)
}

pub fn build_surface_cached(
    spec: &SingularitySpec,
    disk: Option<&Path>,
) -> Result<SurfaceModel, SurfaceError> {
    let ade = &spec.ade_type;
    // Lattice-realizable types outside the classification (such as 7A1) are
    // not del Pezzo surfaces.
    if !ade.is_smooth() && crate::table::line_counts(ade).is_empty() {
        return Err(SurfaceError::UnknownType(ade.to_string()));
    }
    let es = enumerate_embeddings_cached(ade, disk);
    let counts: Vec<usize> = es.iter().map(|e| e.line_count).collect();
    let e = match (spec.expected_lines, es.len()) {
        (_, 0) => return Err(SurfaceError::UnknownType(ade.to_string())),
        (None, 1) => &es[0],
        (None, _) => {
            return Err(SurfaceError::AmbiguousType {
                ade: ade.to_string(),
                counts,
            })
        }
        (Some(n), _) => es.iter().find(|e| e.line_count == n).ok_or_else(|| {
            SurfaceError::NoSuchLineCount {
                ade: ade.to_string(),
                lines: n,
                counts: counts.clone(),
            }
        })?,
    };
    SurfaceModel::from_neg_two(ade.clone(), &e.simple_roots)
}
