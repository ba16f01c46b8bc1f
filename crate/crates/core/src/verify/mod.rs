//! Axioms K0-K5 and their local consequences on edge-2-colored labeled digraphs.
//!
//! Every check reports all of its violations rather than the first one, so a
//! single mutated edge shows up wherever it breaks something.

mod axioms;
mod derived;
pub mod patterns;

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{Adjacency, Color, ColoredGraph, VertexId};
pub use patterns::{dualize_pattern, patterns_equivalent, Pattern, PatternEdge};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Rule {
    K0,
    K1,
    K2,
    K3,
    K4,
    K5,
    #[serde(rename = "half-edge-corollary")]
    HalfEdgeCorollary,
    #[serde(rename = "half-edge-context")]
    HalfEdgeContext,
    #[serde(rename = "star-squares")]
    StarSquares,
    #[serde(rename = "double-half")]
    DoubleHalf,
    #[serde(rename = "lemma1")]
    Lemma1,
    #[serde(rename = "picture10")]
    Picture10,
    /// Relations implied by K5 (degree 5 relations and the Verma halves).
    #[serde(rename = "consequence")]
    Consequence,
    /// Green 1 or 0 edges outside every square and every K5 premise.
    #[serde(rename = "k5-coverage")]
    K5Coverage,
    #[serde(rename = "structure")]
    Structure,
}

impl Rule {
    pub const AXIOMS: [Rule; 6] = [Rule::K0, Rule::K1, Rule::K2, Rule::K3, Rule::K4, Rule::K5];
    pub const DERIVED: [Rule; 4] = [
        Rule::HalfEdgeCorollary,
        Rule::HalfEdgeContext,
        Rule::StarSquares,
        Rule::DoubleHalf,
    ];

    pub fn id(self) -> &'static str {
        match self {
            Rule::K0 => "K0",
            Rule::K1 => "K1",
            Rule::K2 => "K2",
            Rule::K3 => "K3",
            Rule::K4 => "K4",
            Rule::K5 => "K5",
            Rule::HalfEdgeCorollary => "half-edge-corollary",
            Rule::HalfEdgeContext => "half-edge-context",
            Rule::StarSquares => "star-squares",
            Rule::DoubleHalf => "double-half",
            Rule::Lemma1 => "lemma1",
            Rule::Picture10 => "picture10",
            Rule::Consequence => "consequence",
            Rule::K5Coverage => "k5-coverage",
            Rule::Structure => "structure",
        }
    }

    pub fn parse(s: &str) -> Option<Rule> {
        [Rule::AXIOMS.as_slice(), Rule::DERIVED.as_slice()]
            .concat()
            .into_iter()
            .find(|r| r.id().eq_ignore_ascii_case(s))
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Location {
    pub vertices: Vec<VertexId>,
    /// Indices into the checked graph's edge list.
    pub edges: Vec<usize>,
}

impl Location {
    pub fn vertices(v: impl IntoIterator<Item = VertexId>) -> Self {
        Location {
            vertices: v.into_iter().collect(),
            edges: Vec::new(),
        }
    }

    pub fn edge(e: usize, g: &ColoredGraph) -> Self {
        Location {
            vertices: vec![g.edges[e].src, g.edges[e].dst],
            edges: vec![e],
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Violation {
    pub axiom: Rule,
    pub location: Location,
    pub message: String,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct AxiomReport {
    pub violations: Vec<Violation>,
    /// Diagnostics that do not fail the check.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub warnings: Vec<Violation>,
}

impl AxiomReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn push(&mut self, axiom: Rule, location: Location, message: impl Into<String>) {
        self.violations.push(Violation {
            axiom,
            location,
            message: message.into(),
        });
    }

    pub fn warn(&mut self, axiom: Rule, location: Location, message: impl Into<String>) {
        self.warnings.push(Violation {
            axiom,
            location,
            message: message.into(),
        });
    }

    pub fn merge(&mut self, other: AxiomReport) {
        self.violations.extend(other.violations);
        self.warnings.extend(other.warnings);
    }

    pub fn count(&self, axiom: Rule) -> usize {
        self.violations.iter().filter(|v| v.axiom == axiom).count()
    }

    /// Deterministic order by axiom, then location.
    pub fn sort(&mut self) {
        self.violations.sort();
        self.warnings.sort();
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum VerifyError {
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("some edges carry labels and others do not")]
    MixedLabels,
    #[error("{0} is not an axiom or derived-check id")]
    UnknownRule(String),
}

pub(crate) const RED: usize = 0;
pub(crate) const GREEN: usize = 1;

pub(crate) fn slot(c: Color) -> Option<usize> {
    match c {
        Color::Red => Some(RED),
        Color::Green => Some(GREEN),
        Color::Blue => None,
    }
}

/// A graph that passed K0, with per-color adjacency, string statistics and
/// effective labels.
pub(crate) struct Analysis<'g> {
    pub g: &'g ColoredGraph,
    pub adj: Adjacency,
    /// Edge index leaving / entering each vertex position, per color slot.
    pub out: [Vec<Option<usize>>; 2],
    pub inc: [Vec<Option<usize>>; 2],
    pub t: [Vec<u32>; 2],
    pub h: [Vec<u32>; 2],
    /// Label halves per edge; computed from string data when the input has none.
    pub labels: Vec<i64>,
    pub labels_provided: bool,
}

impl<'g> Analysis<'g> {
    pub fn new(g: &'g ColoredGraph) -> Result<Analysis<'g>, VerifyError> {
        let labeled = g.labeled_count();
        if labeled != 0 && labeled != g.edges.len() {
            return Err(VerifyError::MixedLabels);
        }
        if !axioms::k0(g).passed() {
            return Err(VerifyError::Precondition("the graph violates K0".into()));
        }
        let adj = Adjacency::build(g).map_err(VerifyError::Precondition)?;
        let n = adj.len();
        let mut out = [vec![None; n], vec![None; n]];
        let mut inc = [vec![None; n], vec![None; n]];
        for (k, e) in g.edges.iter().enumerate() {
            let s = slot(e.color).expect("K0 rejects blue edges");
            out[s][adj.pos[&e.src]] = Some(k);
            inc[s][adj.pos[&e.dst]] = Some(k);
        }
        let mut a = Analysis {
            g,
            adj,
            out,
            inc,
            t: [vec![0; n], vec![0; n]],
            h: [vec![0; n], vec![0; n]],
            labels: Vec::new(),
            labels_provided: labeled != 0,
        };
        for s in [RED, GREEN] {
            for v in 0..n {
                let mut u = v;
                while let Some(p) = a.pred(u, s) {
                    a.t[s][v] += 1;
                    u = p;
                }
                u = v;
                while let Some(q) = a.succ(u, s) {
                    a.h[s][v] += 1;
                    u = q;
                }
            }
        }
        a.labels = g
            .edges
            .iter()
            .enumerate()
            .map(|(k, e)| match e.label {
                Some(l) => i64::from(l.halves()),
                None => a.computed_label(k),
            })
            .collect();
        Ok(a)
    }

    pub fn n(&self) -> usize {
        self.adj.len()
    }

    pub fn src(&self, e: usize) -> usize {
        self.adj.pos[&self.g.edges[e].src]
    }

    pub fn dst(&self, e: usize) -> usize {
        self.adj.pos[&self.g.edges[e].dst]
    }

    pub fn id(&self, v: usize) -> VertexId {
        self.adj.ids[v]
    }

    pub fn succ(&self, v: usize, s: usize) -> Option<usize> {
        self.out[s][v].map(|e| self.dst(e))
    }

    pub fn pred(&self, v: usize, s: usize) -> Option<usize> {
        self.inc[s][v].map(|e| self.src(e))
    }

    pub fn label_out(&self, v: usize, s: usize) -> Option<i64> {
        self.out[s][v].map(|e| self.labels[e])
    }

    pub fn label_in(&self, v: usize, s: usize) -> Option<i64> {
        self.inc[s][v].map(|e| self.labels[e])
    }

    /// Label the decoration rule assigns to edge `e`.
    pub fn computed_label(&self, e: usize) -> i64 {
        let (u, v) = (self.src(e), self.dst(e));
        match self.g.edges[e].color {
            Color::Red => 2 * (i64::from(self.h[GREEN][v]) - i64::from(self.h[GREEN][u])),
            _ => i64::from(self.h[RED][v]) - i64::from(self.h[RED][u]),
        }
    }

    pub fn loc_edge(&self, e: usize) -> Location {
        Location::edge(e, self.g)
    }

    pub fn loc(&self, vs: &[usize]) -> Location {
        Location::vertices(vs.iter().map(|&v| self.id(v)))
    }

    pub fn edge_text(&self, e: usize) -> String {
        let ed = &self.g.edges[e];
        format!(
            "{} edge {}->{} (label {}/2)",
            ed.color, ed.src, ed.dst, self.labels[e]
        )
    }
}

/// Runs one axiom.
///
/// K3-K5 need labels: either all edges carry them, or none do and K1/K2 hold
/// so that they can be computed.
pub fn check_axiom(g: &ColoredGraph, rule: Rule) -> Result<AxiomReport, VerifyError> {
    let mut report = match rule {
        Rule::K0 => axioms::k0(g),
        Rule::K1 | Rule::K2 => {
            let a = Analysis::new(g)?;
            if rule == Rule::K1 {
                axioms::k1(&a)
            } else {
                axioms::k2(&a)
            }
        }
        Rule::K3 | Rule::K4 | Rule::K5 => {
            let a = labeled_analysis(g)?;
            match rule {
                Rule::K3 => axioms::k3(&a),
                Rule::K4 => axioms::k4(&a),
                _ => axioms::k5(&a),
            }
        }
        other => return check_derived(g, other),
    };
    report.sort();
    Ok(report)
}

fn labeled_analysis(g: &ColoredGraph) -> Result<Analysis<'_>, VerifyError> {
    let a = Analysis::new(g)?;
    if !a.labels_provided && !(axioms::k1(&a).passed() && axioms::k2(&a).passed()) {
        return Err(VerifyError::Precondition(
            "the graph has no labels and they cannot be computed because K1/K2 fail".into(),
        ));
    }
    Ok(a)
}

/// Runs one derived check. Requires K0 and K3.
pub fn check_derived(g: &ColoredGraph, rule: Rule) -> Result<AxiomReport, VerifyError> {
    let a = labeled_analysis(g)?;
    if !axioms::k3(&a).passed() {
        return Err(VerifyError::Precondition("the graph violates K3".into()));
    }
    let strings = derived::RedStrings::new(&a);
    let mut report = match rule {
        Rule::HalfEdgeCorollary => derived::half_edge_corollary(&a),
        Rule::HalfEdgeContext => derived::half_edge_context(&a),
        Rule::StarSquares => derived::star_squares(&a, &strings),
        Rule::DoubleHalf => derived::double_half(&a, &strings),
        other => return Err(VerifyError::UnknownRule(other.id().into())),
    };
    report.sort();
    Ok(report)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct VerifyOptions {
    pub derived: bool,
    /// Check the consequence patterns and K5 coverage (warnings only).
    pub diagnostics: bool,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            derived: true,
            diagnostics: true,
        }
    }
}

/// Runs K0-K5 and, if asked, the derived checks.
///
/// Stops after K0 when it fails, and after K2 when labels are absent and
/// cannot be computed. Derived checks run only when K3 holds.
pub fn verify_all(g: &ColoredGraph, opts: VerifyOptions) -> Result<AxiomReport, VerifyError> {
    let labeled = g.labeled_count();
    if labeled != 0 && labeled != g.edges.len() {
        return Err(VerifyError::MixedLabels);
    }
    let mut report = axioms::k0(g);
    if !report.passed() {
        report.sort();
        return Ok(report);
    }
    let a = Analysis::new(g)?;
    report.merge(axioms::k1(&a));
    report.merge(axioms::k2(&a));
    if !a.labels_provided && !report.passed() {
        report.sort();
        return Ok(report);
    }
    let k3 = axioms::k3(&a);
    let k3_ok = k3.passed();
    report.merge(k3);
    report.merge(axioms::k4(&a));
    report.merge(axioms::k5(&a));
    if opts.diagnostics {
        report.merge(axioms::k5_coverage(&a));
        report.merge(axioms::consequences(&a));
    }
    if opts.derived && k3_ok {
        let strings = derived::RedStrings::new(&a);
        report.merge(derived::half_edge_corollary(&a));
        report.merge(derived::half_edge_context(&a));
        report.merge(derived::star_squares(&a, &strings));
        report.merge(derived::double_half(&a, &strings));
    }
    report.sort();
    Ok(report)
}

/// One embedding of a pattern premise.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PatternMatch {
    /// Premise vertex name and the graph vertex it maps to.
    pub premise: Vec<(String, VertexId)>,
    pub extends: bool,
}

/// All embeddings of `p`'s premise in `g` and whether the conclusion extends each.
pub fn match_pattern(g: &ColoredGraph, p: &Pattern) -> Result<Vec<PatternMatch>, VerifyError> {
    let a = labeled_analysis(g)?;
    Ok(axioms::matches(&a, p)
        .into_iter()
        .map(|(assign, extends)| PatternMatch {
            premise: p
                .premise_vertices()
                .into_iter()
                .map(|i| (p.names[i].clone(), a.id(assign[i].expect("premise vertex"))))
                .collect(),
            extends,
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::crystal::{generate_decorated, to_colored};
    use crate::graph::{Edge, EdgeLabel};
    use crate::model::Bounds;

    fn crystal(h: i64, a: i64) -> ColoredGraph {
        to_colored(&generate_decorated(&Bounds::interval(h, a).unwrap()).unwrap())
    }

    #[test]
    fn generated_crystals_pass() {
        for (h, a) in [(0, 0), (1, 0), (0, 2), (1, 2), (2, 2)] {
            let g = crystal(h, a);
            for r in Rule::AXIOMS.into_iter().chain(Rule::DERIVED) {
                let rep = check_axiom(&g, r).unwrap();
                assert!(rep.passed(), "{r} on B({h},{a}): {:?}", rep.violations);
            }
            assert!(verify_all(&g, VerifyOptions::default()).unwrap().passed());
        }
    }

    #[test]
    fn empty_graph_passes() {
        let g = ColoredGraph::default();
        for r in Rule::AXIOMS {
            assert!(check_axiom(&g, r).unwrap().passed());
        }
    }

    #[test]
    fn unlabeled_input_is_decorated() {
        let g = crystal(1, 2).unlabeled();
        assert!(verify_all(&g, VerifyOptions::default()).unwrap().passed());
    }

    #[test]
    fn forged_half_label_is_caught() {
        let mut g = crystal(1, 0);
        let e = g
            .edges
            .iter()
            .position(|e| e.color == Color::Green)
            .unwrap();
        g.edges[e].label = Some(EdgeLabel::ONE);
        let rep = verify_all(&g, VerifyOptions::default()).unwrap();
        assert!(rep.count(Rule::K2) + rep.count(Rule::K3) > 0);
    }

    #[test]
    fn deleted_edge_breaks_k1() {
        let b = Bounds::interval(0, 2).unwrap();
        let c = generate_decorated(&b).unwrap();
        let mut g = to_colored(&c);
        let from = c
            .graph
            .id_of(&crate::Configuration::new([2, 1, 0, 0, 0, 0, 0]))
            .unwrap();
        let to = c
            .graph
            .id_of(&crate::Configuration::new([2, 2, 0, 0, 0, 0, 0]))
            .unwrap();
        g.edges.retain(|e| !(e.src == from && e.dst == to));
        assert!(check_axiom(&g, Rule::K1).unwrap().count(Rule::K1) > 0);
    }

    #[test]
    fn mixed_labels_are_a_precondition_error() {
        let mut g = crystal(1, 0);
        g.edges[0].label = None;
        assert_eq!(check_axiom(&g, Rule::K3), Err(VerifyError::MixedLabels));
    }

    #[test]
    fn two_half_edges_on_one_green_string() {
        let half = Some(EdgeLabel::HALF);
        let g = ColoredGraph::new(
            vec![0, 1, 2],
            vec![
                Edge::new(0, 1, Color::Green, half),
                Edge::new(1, 2, Color::Green, half),
            ],
        );
        let rep = check_derived(&g, Rule::HalfEdgeCorollary).unwrap();
        assert_eq!(rep.count(Rule::HalfEdgeCorollary), 1);
    }

    #[test]
    fn single_red_one_edge_in_b10() {
        let g = crystal(1, 0);
        let p = Pattern::parse("red-1", &["a r2 b"], &[]);
        assert_eq!(match_pattern(&g, &p).unwrap().len(), 1);
        let p = Pattern::parse("bad", &["a r3 b"], &[]);
        assert!(match_pattern(&g, &p).unwrap().is_empty());
    }

    #[test]
    fn rule_ids_round_trip() {
        for r in Rule::AXIOMS.into_iter().chain(Rule::DERIVED) {
            assert_eq!(Rule::parse(r.id()), Some(r));
        }
        assert_eq!(Rule::parse("k4"), Some(Rule::K4));
        assert_eq!(Rule::parse("K9"), None);
    }
}
