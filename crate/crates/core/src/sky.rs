//! The view from the sky: each red string contracted to one vertex.
//!
//! A sky vertex carries `(X, Y)`, the number of red edges labeled 0 and 1 on
//! its string. Green edges between strings become sky edges; those labeled
//! 0 or 1 that change `X` by exactly one are recolored blue.

use std::collections::{BTreeMap, HashMap, HashSet};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{Color, ColoredGraph, Edge, EdgeLabel};
use crate::verify::{self, Analysis, AxiomReport, Location, Rule, GREEN, RED};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SkyError {
    #[error("contraction needs a graph passing K0-K3: {0}")]
    Precondition(String),
    #[error("structural error: {0}")]
    Structure(String),
    #[error("sky graph violation: {0}")]
    Lemma1(String),
    #[error("gluing inconsistency: {0}")]
    Glue(String),
    #[error("isomorphism test not applicable: {0}")]
    NotApplicable(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SkyVertex {
    pub x: u32,
    pub y: u32,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct SkyEdge {
    pub src: usize,
    pub dst: usize,
    pub color: Color,
    pub label: EdgeLabel,
}

/// Vertex ids are positions in `vertices`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SkyGraph {
    pub vertices: Vec<SkyVertex>,
    pub edges: Vec<SkyEdge>,
}

impl SkyGraph {
    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    /// `Σ (X + Y + 1)`: the number of crystal vertices the sky graph stands for.
    pub fn expansion_count(&self) -> u64 {
        self.vertices.iter().map(|v| u64::from(v.x + v.y + 1)).sum()
    }

    pub fn to_colored(&self) -> ColoredGraph {
        ColoredGraph::new(
            (0..self.len()).collect(),
            self.edges
                .iter()
                .map(|e| Edge::new(e.src, e.dst, e.color, Some(e.label)))
                .collect(),
        )
    }

    pub fn xy(&self) -> Vec<Option<(u32, u32)>> {
        self.vertices.iter().map(|v| Some((v.x, v.y))).collect()
    }

    pub fn count_color(&self, c: Color) -> usize {
        self.edges.iter().filter(|e| e.color == c).count()
    }
}

/// A contracted crystal together with the sky vertex of every crystal vertex.
#[derive(Clone, Debug)]
pub struct Contraction {
    pub sky: SkyGraph,
    /// Indexed by position in the input graph's vertex list.
    pub string_of: Vec<usize>,
}

/// Contracts a labeled (or decoratable) crystal-like graph. Requires K0-K3.
pub fn contract(g: &ColoredGraph) -> Result<Contraction, SkyError> {
    for rule in [Rule::K0, Rule::K1, Rule::K2, Rule::K3] {
        let rep =
            verify::check_axiom(g, rule).map_err(|e| SkyError::Precondition(e.to_string()))?;
        if let Some(v) = rep.violations.first() {
            return Err(SkyError::Precondition(format!(
                "{}: {}",
                v.axiom, v.message
            )));
        }
    }
    let a = Analysis::new(g).map_err(|e| SkyError::Precondition(e.to_string()))?;
    let n = a.n();
    let mut string_of = vec![usize::MAX; n];
    let mut vertices = Vec::new();
    for v in 0..n {
        let mut s = v;
        while let Some(p) = a.pred(s, RED) {
            s = p;
        }
        if string_of[s] != usize::MAX {
            string_of[v] = string_of[s];
            continue;
        }
        let id = vertices.len();
        let (mut zeros, mut ones) = (0u32, 0u32);
        let mut u = s;
        string_of[u] = id;
        while let Some(e) = a.out[RED][u] {
            if a.labels[e] == 0 {
                zeros += 1;
            } else {
                ones += 1;
            }
            u = a.dst(e);
            string_of[u] = id;
        }
        vertices.push(SkyVertex { x: zeros, y: ones });
    }

    let mut joined: BTreeMap<(usize, usize), Vec<u8>> = BTreeMap::new();
    for e in 0..g.edges.len() {
        if a.out[GREEN][a.src(e)] != Some(e) {
            continue;
        }
        let (s, d) = (string_of[a.src(e)], string_of[a.dst(e)]);
        if s == d {
            return Err(SkyError::Structure(format!(
                "{} stays on one red string",
                a.edge_text(e)
            )));
        }
        let labels = joined.entry((s, d)).or_default();
        let l = a.labels[e] as u8;
        if !labels.contains(&l) {
            labels.push(l);
        }
    }
    let mut edges = Vec::with_capacity(joined.len());
    for ((s, d), labels) in joined {
        if labels.len() > 1 {
            return Err(SkyError::Lemma1(format!(
                "strings {s} and {d} are joined by green edges with labels {labels:?}"
            )));
        }
        let label = EdgeLabel(labels[0]);
        let dx = vertices[s].x.abs_diff(vertices[d].x);
        let color = match (label, dx) {
            (EdgeLabel::HALF, _) => Color::Green,
            (_, 1) => Color::Blue,
            (_, 0 | 2) => Color::Green,
            _ => {
                return Err(SkyError::Structure(format!(
                    "edge {s}->{d} labeled {label} changes X by {dx}"
                )))
            }
        };
        edges.push(SkyEdge {
            src: s,
            dst: d,
            color,
            label,
        });
    }
    Ok(Contraction {
        sky: SkyGraph { vertices, edges },
        string_of,
    })
}

/// Degree and label constraints on sky vertices and the forbidden configurations.
pub fn check_lemma1(s: &SkyGraph) -> AxiomReport {
    let mut rep = AxiomReport::default();
    let n = s.len();
    let mut outs: Vec<Vec<&SkyEdge>> = vec![Vec::new(); n];
    let mut ins: Vec<Vec<&SkyEdge>> = vec![Vec::new(); n];
    let mut pairs = HashSet::new();
    for (k, e) in s.edges.iter().enumerate() {
        if e.src >= n || e.dst >= n {
            rep.push(
                Rule::Lemma1,
                Location {
                    vertices: vec![],
                    edges: vec![k],
                },
                "edge endpoint out of range",
            );
            continue;
        }
        if !pairs.insert((e.src, e.dst)) {
            rep.push(
                Rule::Lemma1,
                Location {
                    vertices: vec![e.src, e.dst],
                    edges: vec![k],
                },
                format!("parallel edges {}->{}", e.src, e.dst),
            );
        }
        outs[e.src].push(e);
        ins[e.dst].push(e);
    }
    for v in 0..n {
        for (list, dir) in [(&outs[v], "outgoing"), (&ins[v], "ingoing")] {
            if list.len() > 3 {
                rep.push(
                    Rule::Lemma1,
                    Location::vertices([v]),
                    format!("{} {dir} edges at {v}", list.len()),
                );
            }
            let mut labels: Vec<u8> = list.iter().map(|e| e.label.0).collect();
            labels.sort_unstable();
            if labels.windows(2).any(|w| w[0] == w[1]) {
                rep.push(
                    Rule::Lemma1,
                    Location::vertices([v]),
                    format!("repeated {dir} label at {v}: {labels:?}"),
                );
            }
        }
        let has = |list: &Vec<&SkyEdge>, c: Color, l: EdgeLabel| {
            list.iter().any(|e| e.color == c && e.label == l)
        };
        let half_in = has(&ins[v], Color::Green, EdgeLabel::HALF);
        let half_out = has(&outs[v], Color::Green, EdgeLabel::HALF);
        let blue0_out = has(&outs[v], Color::Blue, EdgeLabel::ZERO);
        let blue1_in = has(&ins[v], Color::Blue, EdgeLabel::ONE);
        if half_in && blue0_out {
            rep.push(
                Rule::Picture10,
                Location::vertices([v]),
                format!("(a) 1/2 edge followed by blue 0 at {v}"),
            );
        }
        if blue1_in && half_out {
            rep.push(
                Rule::Picture10,
                Location::vertices([v]),
                format!("(b) blue 1 followed by 1/2 edge at {v}"),
            );
        }
        if half_out && blue0_out {
            rep.push(
                Rule::Picture10,
                Location::vertices([v]),
                format!("(c) 1/2 edge and blue 0 leave {v}"),
            );
        }
        if half_in && blue1_in {
            rep.push(
                Rule::Picture10,
                Location::vertices([v]),
                format!("(d) blue 1 and 1/2 edge enter {v}"),
            );
        }
    }
    rep.sort();
    rep
}

/// A sky graph with its distinguished gluing set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Sail {
    pub graph: SkyGraph,
    pub diagonal: Vec<usize>,
}

/// Upper sail: etages `k = 0..=H/2`, positions `l = 0..=H-2k`, labels `(l, H-2k-l)`.
pub fn sail_upper(h: u32) -> Sail {
    let mut index = HashMap::new();
    let mut vertices = Vec::new();
    for k in 0..=h / 2 {
        for l in 0..=h - 2 * k {
            index.insert((k, l), vertices.len());
            vertices.push(SkyVertex {
                x: l,
                y: h - 2 * k - l,
            });
        }
    }
    let mut edges = Vec::new();
    let mut add = |from: (u32, u32), to: (u32, u32), label: EdgeLabel| {
        if let (Some(&s), Some(&d)) = (index.get(&from), index.get(&to)) {
            edges.push(SkyEdge {
                src: s,
                dst: d,
                color: Color::Green,
                label,
            });
        }
    };
    for k in 0..=h / 2 {
        for l in 0..=h - 2 * k {
            add((k, l), (k, l + 1), EdgeLabel::HALF);
            add((k, l), (k + 1, l), EdgeLabel::ZERO);
            if k > 0 {
                add((k, l), (k - 1, l + 2), EdgeLabel::ONE);
            }
        }
    }
    edges.sort();
    let diagonal = (0..=h).map(|l| index[&(0, l)]).collect();
    Sail {
        graph: SkyGraph { vertices, edges },
        diagonal,
    }
}

/// Lower sail: a triangular grid `(k, j)`, `j <= B - k`, every vertex labeled `(k, k)`.
pub fn sail_lower(b: u32) -> Sail {
    let mut index = HashMap::new();
    let mut vertices = Vec::new();
    for k in 0..=b {
        for j in 0..=b - k {
            index.insert((k, j), vertices.len());
            vertices.push(SkyVertex { x: k, y: k });
        }
    }
    let mut edges = Vec::new();
    for k in 0..=b {
        for j in 0..=b - k {
            let s = index[&(k, j)];
            if let Some(&d) = index.get(&(k + 1, j)) {
                edges.push(SkyEdge {
                    src: s,
                    dst: d,
                    color: Color::Blue,
                    label: EdgeLabel::ONE,
                });
            }
            if k > 0 {
                if let Some(&d) = index.get(&(k - 1, j + 1)) {
                    edges.push(SkyEdge {
                        src: s,
                        dst: d,
                        color: Color::Blue,
                        label: EdgeLabel::ZERO,
                    });
                }
            }
        }
    }
    edges.sort();
    let diagonal = (0..=b).map(|j| index[&(0, j)]).collect();
    Sail {
        graph: SkyGraph { vertices, edges },
        diagonal,
    }
}

#[derive(Clone, Debug)]
pub struct GlueSpec {
    pub left: Sail,
    pub right: Sail,
}

/// `(G, S) ⊛ (G', T)`: one copy of `G` per `t ∈ T`, one copy of `G'` per `s ∈ S`,
/// vertex `s` of copy `G_t` identified with vertex `t` of copy `G'_s`.
///
/// Copies of the left graph keep their labels. A right copy attached at `s`
/// is shifted so that its distinguished points land on the label of `s`.
pub fn glue(spec: &GlueSpec) -> Result<SkyGraph, SkyError> {
    let (l, r) = (&spec.left, &spec.right);
    let (sl, tr) = (&l.diagonal, &r.diagonal);
    let mut vertices = Vec::new();
    let mut left_id = vec![vec![0usize; l.graph.len()]; tr.len()];
    for row in left_id.iter_mut() {
        for (v, id) in row.iter_mut().enumerate() {
            *id = vertices.len();
            vertices.push(l.graph.vertices[v]);
        }
    }
    let t_pos: HashMap<usize, usize> = tr.iter().enumerate().map(|(i, &t)| (t, i)).collect();
    let mut right_id = vec![vec![0usize; r.graph.len()]; sl.len()];
    for (si, &s) in sl.iter().enumerate() {
        let target = l.graph.vertices[s];
        let shift = tr.first().map(|&t| {
            let base = r.graph.vertices[t];
            (
                i64::from(target.x) - i64::from(base.x),
                i64::from(target.y) - i64::from(base.y),
            )
        });
        for (v, rv) in r.graph.vertices.iter().enumerate() {
            let (dx, dy) = shift.unwrap_or((0, 0));
            let (x, y) = (i64::from(rv.x) + dx, i64::from(rv.y) + dy);
            if x < 0 || y < 0 {
                return Err(SkyError::Glue(format!(
                    "copy at {s} gets negative label ({x}, {y})"
                )));
            }
            let label = SkyVertex {
                x: x as u32,
                y: y as u32,
            };
            if let Some(&ti) = t_pos.get(&v) {
                let id = left_id[ti][s];
                if vertices[id] != label {
                    return Err(SkyError::Glue(format!(
                        "identified vertex gets labels {:?} and {:?}",
                        vertices[id], label
                    )));
                }
                right_id[si][v] = id;
            } else {
                right_id[si][v] = vertices.len();
                vertices.push(label);
            }
        }
    }
    let mut edges = Vec::new();
    for row in &left_id {
        for e in &l.graph.edges {
            edges.push(SkyEdge {
                src: row[e.src],
                dst: row[e.dst],
                ..*e
            });
        }
    }
    for row in &right_id {
        for e in &r.graph.edges {
            edges.push(SkyEdge {
                src: row[e.src],
                dst: row[e.dst],
                ..*e
            });
        }
    }
    edges.sort();
    edges.dedup();
    let expected = l.graph.len() * tr.len() + r.graph.len() * sl.len() - sl.len() * tr.len();
    if vertices.len() != expected {
        return Err(SkyError::Glue(format!(
            "{} vertices, expected {expected}",
            vertices.len()
        )));
    }
    Ok(SkyGraph { vertices, edges })
}

/// The glued sail model for the interval `B(H, A)`.
pub fn sail_model(h: u32, a: u32) -> Result<SkyGraph, SkyError> {
    glue(&GlueSpec {
        left: sail_upper(h),
        right: sail_lower(a / 2),
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IsoResult {
    pub isomorphic: bool,
    /// Candidate bijection from the first graph's positions to the second's.
    pub witness: Option<Vec<usize>>,
    pub reason: Option<String>,
}

impl IsoResult {
    fn no(reason: impl Into<String>, witness: Option<Vec<usize>>) -> Self {
        IsoResult {
            isomorphic: false,
            witness,
            reason: Some(reason.into()),
        }
    }
}

type Key = (bool, Color, Option<EdgeLabel>);

fn keyed_adjacency(
    g: &ColoredGraph,
    pos: &HashMap<usize, usize>,
) -> Result<Vec<BTreeMap<Key, usize>>, SkyError> {
    let mut adj = vec![BTreeMap::new(); g.vertices.len()];
    for e in &g.edges {
        let (Some(&s), Some(&d)) = (pos.get(&e.src), pos.get(&e.dst)) else {
            return Err(SkyError::NotApplicable(format!(
                "edge {e} has a dangling endpoint"
            )));
        };
        if adj[s].insert((true, e.color, e.label), d).is_some()
            || adj[d].insert((false, e.color, e.label), s).is_some()
        {
            return Err(SkyError::NotApplicable(format!(
                "two {} edges with label {:?} share an endpoint at {e}",
                e.color, e.label
            )));
        }
    }
    Ok(adj)
}

/// Decides isomorphism by walking both graphs from their unique sources.
///
/// Edges at a vertex are told apart by direction, color and label, so the
/// walk has no choices. `xy` labels, when given, must be preserved too.
pub fn iso_colored(
    g1: &ColoredGraph,
    xy1: &[Option<(u32, u32)>],
    g2: &ColoredGraph,
    xy2: &[Option<(u32, u32)>],
) -> Result<IsoResult, SkyError> {
    let pos = |g: &ColoredGraph| -> HashMap<usize, usize> {
        g.vertices
            .iter()
            .enumerate()
            .map(|(i, v)| (*v, i))
            .collect()
    };
    let (p1, p2) = (pos(g1), pos(g2));
    let a1 = keyed_adjacency(g1, &p1)?;
    let a2 = keyed_adjacency(g2, &p2)?;
    let sources = |adj: &[BTreeMap<Key, usize>]| -> Vec<usize> {
        (0..adj.len())
            .filter(|&v| adj[v].keys().all(|k| k.0))
            .collect()
    };
    let (s1, s2) = (sources(&a1), sources(&a2));
    if s1.len() != 1 || s2.len() != 1 {
        return Err(SkyError::NotApplicable(format!(
            "graphs have {} and {} sources, need exactly one each",
            s1.len(),
            s2.len()
        )));
    }
    if g1.vertices.len() != g2.vertices.len() || g1.edges.len() != g2.edges.len() {
        return Ok(IsoResult::no(
            format!(
                "sizes differ: {}/{} vertices, {}/{} edges",
                g1.vertices.len(),
                g2.vertices.len(),
                g1.edges.len(),
                g2.edges.len()
            ),
            None,
        ));
    }
    let n = g1.vertices.len();
    let mut map = vec![usize::MAX; n];
    let mut used = vec![false; n];
    map[s1[0]] = s2[0];
    used[s2[0]] = true;
    let mut stack = vec![s1[0]];
    while let Some(v) = stack.pop() {
        let w = map[v];
        if xy1.get(v).copied().flatten() != xy2.get(w).copied().flatten() {
            return Ok(IsoResult::no(
                format!("vertex labels differ at {v} -> {w}"),
                None,
            ));
        }
        if a1[v].keys().ne(a2[w].keys()) {
            return Ok(IsoResult::no(
                format!("edge sets differ at {v} -> {w}"),
                None,
            ));
        }
        for (k, &u) in &a1[v] {
            let x = a2[w][k];
            if map[u] == usize::MAX {
                if used[x] {
                    return Ok(IsoResult::no(format!("map is not injective at {x}"), None));
                }
                map[u] = x;
                used[x] = true;
                stack.push(u);
            } else if map[u] != x {
                return Ok(IsoResult::no(format!("inconsistent images for {u}"), None));
            }
        }
    }
    if map.contains(&usize::MAX) {
        return Ok(IsoResult::no("first graph is not connected", None));
    }
    Ok(IsoResult {
        isomorphic: true,
        witness: Some(map),
        reason: None,
    })
}

pub fn iso(s1: &SkyGraph, s2: &SkyGraph) -> Result<IsoResult, SkyError> {
    iso_colored(&s1.to_colored(), &s1.xy(), &s2.to_colored(), &s2.xy())
}
