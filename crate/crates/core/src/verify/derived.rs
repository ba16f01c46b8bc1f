//! Consequences of K1-K4 about half edges and commuting squares.

use crate::graph::Color;

use super::{Analysis, AxiomReport, Location, Rule, GREEN, RED};

/// Per vertex: first vertex of its red string and the string's critical position `X`.
pub(crate) struct RedStrings {
    pub start: Vec<usize>,
    pub critical: Vec<u32>,
}

impl RedStrings {
    /// Assumes K3, so the zero labels form a prefix of each string.
    pub fn new(a: &Analysis) -> RedStrings {
        let n = a.n();
        let mut start = vec![usize::MAX; n];
        let mut critical = vec![0; n];
        for s in (0..n).filter(|&v| a.inc[RED][v].is_none()) {
            let mut members = vec![s];
            let mut zeros = 0;
            let mut u = s;
            while let Some(e) = a.out[RED][u] {
                if a.labels[e] == 0 {
                    zeros += 1;
                }
                u = a.dst(e);
                members.push(u);
            }
            for m in members {
                start[m] = s;
                critical[m] = zeros;
            }
        }
        RedStrings { start, critical }
    }
}

fn halves<'a>(a: &'a Analysis<'_>) -> impl Iterator<Item = usize> + 'a {
    (0..a.g.edges.len()).filter(|&e| a.g.edges[e].color == Color::Green && a.labels[e] == 1)
}

/// At most one edge labeled 1/2 on a green string.
pub(crate) fn half_edge_corollary(a: &Analysis) -> AxiomReport {
    let mut rep = AxiomReport::default();
    for s in (0..a.n()).filter(|&v| a.inc[GREEN][v].is_none()) {
        let mut found = Vec::new();
        let mut u = s;
        while let Some(e) = a.out[GREEN][u] {
            if a.labels[e] == 1 {
                found.push(e);
            }
            u = a.dst(e);
        }
        if found.len() > 1 {
            rep.push(
                Rule::HalfEdgeCorollary,
                Location {
                    vertices: vec![a.id(s)],
                    edges: found.clone(),
                },
                format!(
                    "green string from {} has {} edges labeled 1/2",
                    a.id(s),
                    found.len()
                ),
            );
        }
    }
    rep
}

/// A 1/2 edge is entered by a red 1 edge and left by a red 0 edge.
pub(crate) fn half_edge_context(a: &Analysis) -> AxiomReport {
    let mut rep = AxiomReport::default();
    for e in halves(a) {
        let (p, q) = (a.src(e), a.dst(e));
        if a.label_in(p, RED) != Some(2) {
            rep.push(
                Rule::HalfEdgeContext,
                a.loc_edge(e),
                format!(
                    "{}: red edge into the tail is missing or not labeled 1",
                    a.edge_text(e)
                ),
            );
        }
        if a.label_out(q, RED) != Some(0) {
            rep.push(
                Rule::HalfEdgeContext,
                a.loc_edge(e),
                format!(
                    "{}: red edge out of the head is missing or not labeled 0",
                    a.edge_text(e)
                ),
            );
        }
    }
    rep
}

fn in_square(a: &Analysis, v: usize) -> Option<bool> {
    let x = a.pred(v, RED)?;
    let y = a.pred(v, GREEN)?;
    Some(matches!((a.pred(x, GREEN), a.pred(y, RED)), (Some(p), Some(q)) if p == q))
}

fn out_square(a: &Analysis, v: usize) -> Option<bool> {
    let x = a.succ(v, RED)?;
    let y = a.succ(v, GREEN)?;
    Some(matches!((a.succ(x, GREEN), a.succ(y, RED)), (Some(p), Some(q)) if p == q))
}

/// Away from the critical vertex the red and green edges at `v` commute:
/// the ingoing pair above it, the outgoing pair below it.
pub(crate) fn star_squares(a: &Analysis, s: &RedStrings) -> AxiomReport {
    let mut rep = AxiomReport::default();
    for v in 0..a.n() {
        let t = i64::from(a.t[RED][v]);
        let x = i64::from(s.critical[v]);
        if t > x && in_square(a, v) == Some(false) {
            rep.push(
                Rule::StarSquares,
                a.loc(&[v]),
                format!(
                    "ingoing red and green edges at {} (t1 = {t}, X = {x}) do not close a square",
                    a.id(v)
                ),
            );
        }
        if t < x && out_square(a, v) == Some(false) {
            rep.push(
                Rule::StarSquares,
                a.loc(&[v]),
                format!(
                    "outgoing red and green edges at {} (t1 = {t}, X = {x}) do not close a square",
                    a.id(v)
                ),
            );
        }
        if (t >= x + 2 || t <= x - 2)
            && (in_square(a, v) == Some(false) || out_square(a, v) == Some(false))
        {
            rep.push(
                Rule::StarSquares,
                a.loc(&[v]),
                format!(
                    "vertex {} is two steps from the critical vertex but a square is open",
                    a.id(v)
                ),
            );
        }
    }
    rep
}

/// A 1/2 edge leaves one step after the critical vertex and enters one step
/// before it; a red string meets at most two of them.
pub(crate) fn double_half(a: &Analysis, s: &RedStrings) -> AxiomReport {
    let mut rep = AxiomReport::default();
    let mut incident = vec![0usize; a.n()];
    for e in halves(a) {
        let (p, q) = (a.src(e), a.dst(e));
        let tp = a.t[RED][p];
        let tq = a.t[RED][q];
        if tp != s.critical[p] + 1 {
            rep.push(
                Rule::DoubleHalf,
                a.loc_edge(e),
                format!(
                    "{} leaves at t1 = {tp}, expected {}",
                    a.edge_text(e),
                    s.critical[p] + 1
                ),
            );
        }
        if i64::from(tq) != i64::from(s.critical[q]) - 1 {
            rep.push(
                Rule::DoubleHalf,
                a.loc_edge(e),
                format!(
                    "{} enters at t1 = {tq}, expected {}",
                    a.edge_text(e),
                    i64::from(s.critical[q]) - 1
                ),
            );
        }
        incident[s.start[p]] += 1;
        incident[s.start[q]] += 1;
    }
    for (v, &c) in incident.iter().enumerate() {
        if c > 2 {
            rep.push(
                Rule::DoubleHalf,
                a.loc(&[v]),
                format!("red string from {} meets {c} edges labeled 1/2", a.id(v)),
            );
        }
    }
    rep
}
