//! Local implication patterns and a backtracking matcher.
//!
//! A pattern is a premise graph plus a conclusion that must extend every
//! injective, color- and label-preserving embedding of the premise. Vertices
//! named only in the conclusion are fresh and must map to vertices outside
//! the premise image.

use std::collections::HashMap;
use std::fmt;

use serde::Serialize;

use crate::graph::{Color, EdgeLabel};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct PatternEdge {
    pub src: usize,
    pub dst: usize,
    pub color: Color,
    pub label: EdgeLabel,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Pattern {
    pub id: String,
    pub names: Vec<String>,
    pub premise: Vec<PatternEdge>,
    pub conclusion: Vec<PatternEdge>,
    pub dual_of: Option<String>,
}

impl Pattern {
    /// Builds a pattern from edges written as `"v g2 p"`: tail, color letter with
    /// label in halves, head.
    pub fn parse(id: &str, premise: &[&str], conclusion: &[&str]) -> Pattern {
        let mut names: Vec<String> = Vec::new();
        let mut intern = |s: &str| -> usize {
            match names.iter().position(|n| n == s) {
                Some(i) => i,
                None => {
                    names.push(s.to_string());
                    names.len() - 1
                }
            }
        };
        let mut parse_edge = |e: &str| -> PatternEdge {
            let parts: Vec<&str> = e.split_whitespace().collect();
            assert_eq!(parts.len(), 3, "bad pattern edge {e:?}");
            let (c, l) = parts[1].split_at(1);
            let color = match c {
                "r" => Color::Red,
                "g" => Color::Green,
                "b" => Color::Blue,
                _ => panic!("bad color in {e:?}"),
            };
            PatternEdge {
                src: intern(parts[0]),
                dst: intern(parts[2]),
                color,
                label: EdgeLabel(l.parse().expect("label halves")),
            }
        };
        let premise = premise.iter().map(|e| parse_edge(e)).collect();
        let conclusion = conclusion.iter().map(|e| parse_edge(e)).collect();
        Pattern {
            id: id.to_string(),
            names,
            premise,
            conclusion,
            dual_of: None,
        }
    }

    pub fn vertex_count(&self) -> usize {
        self.names.len()
    }

    pub fn premise_vertices(&self) -> Vec<usize> {
        let mut v: Vec<usize> = self.premise.iter().flat_map(|e| [e.src, e.dst]).collect();
        v.sort_unstable();
        v.dedup();
        v
    }

    pub fn edge_text(&self, e: &PatternEdge) -> String {
        let c = match e.color {
            Color::Red => 'r',
            Color::Green => 'g',
            Color::Blue => 'b',
        };
        format!(
            "{} {}{} {}",
            self.names[e.src], c, e.label.0, self.names[e.dst]
        )
    }
}

impl fmt::Display for Pattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let p: Vec<_> = self.premise.iter().map(|e| self.edge_text(e)).collect();
        let c: Vec<_> = self.conclusion.iter().map(|e| self.edge_text(e)).collect();
        write!(f, "{}: [{}] => [{}]", self.id, p.join(", "), c.join(", "))
    }
}

/// Reverses every edge and maps each label `a` to `1 - a`.
pub fn dualize_pattern(p: &Pattern) -> Pattern {
    let flip = |e: &PatternEdge| PatternEdge {
        src: e.dst,
        dst: e.src,
        color: e.color,
        label: e.label.dual(),
    };
    let id = match p.id.strip_suffix('*') {
        Some(base) => base.to_string(),
        None => format!("{}*", p.id),
    };
    Pattern {
        id,
        names: p.names.clone(),
        premise: p.premise.iter().map(flip).collect(),
        conclusion: p.conclusion.iter().map(flip).collect(),
        dual_of: Some(p.id.clone()),
    }
}

/// First commutative square of K4: red 0 into `v`, green 1 out of `v`.
pub fn k4_first() -> Pattern {
    Pattern::parse("K4a", &["x r0 v", "v g2 z"], &["x g2 y", "y r0 z"])
}

/// Second commutative square of K4: green 0 into `q`, red 1 out of `q`.
pub fn k4_second() -> Pattern {
    Pattern::parse("K4b", &["x g0 q", "q r2 z"], &["x r2 y", "y g0 z"])
}

pub fn picture_1a() -> Pattern {
    Pattern::parse(
        "1a",
        &["v g2 p", "v r2 u", "u g0 w"],
        &["p r0 q", "q r2 s", "w g2 r", "r r0 t", "s g0 t"],
    )
}

pub fn picture_1b() -> Pattern {
    Pattern::parse(
        "1b",
        &["v g2 p", "p r0 q", "m g1 q"],
        &["o r2 n", "n g0 v", "o g1 j", "j r0 k", "k r2 m"],
    )
}

pub fn picture_1c() -> Pattern {
    Pattern::parse(
        "1c",
        &["v g2 p", "p r0 q", "q r0 s", "v r2 u", "u g1 w"],
        &["a r2 b", "b g1 q", "b r2 c", "c g0 d", "w r0 d"],
    )
}

const PICTURE_2_PREMISE: [&str; 5] = ["A g2 p", "p r0 q", "q r2 r", "A r2 u", "u g1 w"];
const PICTURE_2_CONCLUSION: [&str; 9] = [
    "r g0 D", "D r2 D1", "D1 g1 D2", "D2 r0 C", "w r0 B", "B g2 B1", "B1 r0 B2", "B2 r2 B3",
    "B3 g0 C",
];

/// The degree 7 Verma relation.
pub fn picture_2() -> Pattern {
    Pattern::parse("2", &PICTURE_2_PREMISE, &PICTURE_2_CONCLUSION)
}

/// Degree 5 relation; a consequence of 1b and 1c.
pub fn picture_3() -> Pattern {
    Pattern::parse(
        "3",
        &["v g2 p", "p r0 q", "q r0 s", "v r2 u", "u g1 w"],
        &["s r2 s1", "s1 g1 C", "w r0 w1", "w1 g2 w2", "w2 r0 C"],
    )
}

/// Dual degree 5 relation, transcribed from its own figure. The last vertical
/// edge `m -> t` is drawn green there; it has to be red.
pub fn picture_4() -> Pattern {
    Pattern::parse(
        "4",
        &["q r2 r", "r r2 s", "s g0 t", "k g1 m", "m r0 t"],
        &["o g1 p", "p r0 q", "o r2 u", "u g0 n", "n r2 k"],
    )
}

fn verma_split(id: &str, premise: &[&str]) -> Pattern {
    let all: Vec<&str> = PICTURE_2_PREMISE
        .iter()
        .chain(PICTURE_2_CONCLUSION.iter())
        .copied()
        .collect();
    let rest: Vec<&str> = all
        .iter()
        .filter(|e| !premise.contains(e))
        .copied()
        .collect();
    Pattern::parse(id, premise, &rest)
}

/// Lower chain of the Verma relation implies the whole relation.
pub fn picture_2a_bottom() -> Pattern {
    verma_split(
        "2a-bottom",
        &[
            "A r2 u", "u g1 w", "w r0 B", "B g2 B1", "B1 r0 B2", "B2 r2 B3",
        ],
    )
}

/// Upper chain of the Verma relation implies the whole relation.
pub fn picture_2a_top() -> Pattern {
    verma_split(
        "2a-top",
        &[
            "p r0 q", "q r2 r", "r g0 D", "D r2 D1", "D1 g1 D2", "D2 r0 C",
        ],
    )
}

fn with_duals(base: Vec<Pattern>) -> Vec<Pattern> {
    let mut out = Vec::with_capacity(base.len() * 2);
    for p in base {
        let d = dualize_pattern(&p);
        out.push(p);
        out.push(d);
    }
    out
}

/// Patterns that K5 demands: 1a, 1b, 1c, 2 and their duals.
pub fn k5_catalog() -> Vec<Pattern> {
    with_duals(vec![picture_1a(), picture_1b(), picture_1c(), picture_2()])
}

/// Consequences of K5 checked as warnings: 3, 4 (and duals), both halves of 2a (and duals).
pub fn consequence_catalog() -> Vec<Pattern> {
    with_duals(vec![
        picture_3(),
        picture_4(),
        picture_2a_bottom(),
        picture_2a_top(),
    ])
}

/// Edge key used by the matcher: color, label and a tag separating edge classes.
pub(crate) type Key = (Color, u8, u8);

/// Labeled adjacency the matcher runs on.
pub(crate) struct MatchView {
    pub n: usize,
    pub out: Vec<Vec<(Key, usize)>>,
    pub inc: Vec<Vec<(Key, usize)>>,
    pub edges: Vec<(usize, usize, Key)>,
}

impl MatchView {
    pub fn new(n: usize, edges: Vec<(usize, usize, Key)>) -> MatchView {
        let mut out = vec![Vec::new(); n];
        let mut inc = vec![Vec::new(); n];
        for &(s, d, k) in &edges {
            out[s].push((k, d));
            inc[d].push((k, s));
        }
        MatchView { n, out, inc, edges }
    }

    fn has_edge(&self, s: usize, d: usize, k: Key) -> bool {
        self.out[s].iter().any(|&(kk, dd)| kk == k && dd == d)
    }
}

/// Edges of the pattern side, already keyed.
pub(crate) type KeyedEdge = (usize, usize, Key);

pub(crate) fn keyed(edges: &[PatternEdge], tag: u8) -> Vec<KeyedEdge> {
    edges
        .iter()
        .map(|e| (e.src, e.dst, (e.color, e.label.0, tag)))
        .collect()
}

/// Enumerates injective extensions of `assign` covering `edges`.
///
/// `visit` returns `false` to stop the search early.
pub(crate) fn extend(
    view: &MatchView,
    edges: &[KeyedEdge],
    assign: &mut Vec<Option<usize>>,
    visit: &mut dyn FnMut(&[Option<usize>]) -> bool,
) -> bool {
    let mut used = vec![false; view.n];
    for v in assign.iter().flatten() {
        used[*v] = true;
    }
    let mut remaining: Vec<KeyedEdge> = edges.to_vec();
    search(view, &mut remaining, assign, &mut used, visit)
}

fn search(
    view: &MatchView,
    remaining: &mut Vec<KeyedEdge>,
    assign: &mut Vec<Option<usize>>,
    used: &mut Vec<bool>,
    visit: &mut dyn FnMut(&[Option<usize>]) -> bool,
) -> bool {
    if remaining.is_empty() {
        return visit(assign);
    }
    let pick = remaining
        .iter()
        .position(|&(s, d, _)| assign[s].is_some() && assign[d].is_some())
        .or_else(|| {
            remaining
                .iter()
                .position(|&(s, d, _)| assign[s].is_some() || assign[d].is_some())
        })
        .unwrap_or(0);
    let (s, d, k) = remaining.swap_remove(pick);
    let mut keep_going = true;
    match (assign[s], assign[d]) {
        (Some(gs), Some(gd)) => {
            if view.has_edge(gs, gd, k) {
                keep_going = search(view, remaining, assign, used, visit);
            }
        }
        (Some(gs), None) => {
            for &(kk, gd) in &view.out[gs] {
                if kk != k || used[gd] {
                    continue;
                }
                assign[d] = Some(gd);
                used[gd] = true;
                keep_going = search(view, remaining, assign, used, visit);
                used[gd] = false;
                assign[d] = None;
                if !keep_going {
                    break;
                }
            }
        }
        (None, Some(gd)) => {
            for &(kk, gs) in &view.inc[gd] {
                if kk != k || used[gs] {
                    continue;
                }
                assign[s] = Some(gs);
                used[gs] = true;
                keep_going = search(view, remaining, assign, used, visit);
                used[gs] = false;
                assign[s] = None;
                if !keep_going {
                    break;
                }
            }
        }
        (None, None) => {
            for &(gs, gd, kk) in &view.edges {
                if kk != k || gs == gd || used[gs] || used[gd] || (s == d) {
                    continue;
                }
                assign[s] = Some(gs);
                assign[d] = Some(gd);
                used[gs] = true;
                used[gd] = true;
                keep_going = search(view, remaining, assign, used, visit);
                used[gs] = false;
                used[gd] = false;
                assign[s] = None;
                assign[d] = None;
                if !keep_going {
                    break;
                }
            }
        }
    }
    // restore the removed edge at its old position
    remaining.push((s, d, k));
    let last = remaining.len() - 1;
    remaining.swap(pick, last);
    keep_going
}

/// Whether two patterns are the same up to renaming vertices, keeping
/// premise and conclusion edges apart.
pub fn patterns_equivalent(p: &Pattern, q: &Pattern) -> bool {
    let count = |x: &Pattern| (x.vertex_count(), x.premise.len(), x.conclusion.len());
    if count(p) != count(q) {
        return false;
    }
    let mut target = keyed(&q.premise, 0);
    target.extend(keyed(&q.conclusion, 1));
    let view = MatchView::new(q.vertex_count(), target);
    let mut source = keyed(&p.premise, 0);
    source.extend(keyed(&p.conclusion, 1));
    let mut assign = vec![None; p.vertex_count()];
    let mut found = false;
    extend(&view, &source, &mut assign, &mut |a| {
        found = a.iter().all(Option::is_some);
        !found
    });
    found
}

/// Name-to-index table for reporting.
pub fn name_map(p: &Pattern) -> HashMap<&str, usize> {
    p.names
        .iter()
        .enumerate()
        .map(|(i, n)| (n.as_str(), i))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dual_is_involutive() {
        for p in k5_catalog().iter().chain(consequence_catalog().iter()) {
            let dd = dualize_pattern(&dualize_pattern(p));
            assert_eq!(dd.premise, p.premise);
            assert_eq!(dd.conclusion, p.conclusion);
            assert_eq!(dd.id, p.id);
        }
    }

    #[test]
    fn k4_squares_are_dual() {
        assert!(patterns_equivalent(
            &dualize_pattern(&k4_first()),
            &k4_second()
        ));
        assert!(!patterns_equivalent(&k4_first(), &k4_second()));
    }

    #[test]
    fn picture_4_is_dual_of_3() {
        let d3 = dualize_pattern(&picture_3());
        assert!(patterns_equivalent(&d3, &picture_4()));
        assert!(!patterns_equivalent(&picture_3(), &picture_4()));
        let mut typo = picture_4();
        typo.premise[4].color = Color::Green;
        assert!(!patterns_equivalent(&d3, &typo));
    }

    #[test]
    fn verma_splits_cover_picture_2() {
        for p in [picture_2a_bottom(), picture_2a_top()] {
            assert_eq!(p.premise.len() + p.conclusion.len(), 14);
        }
        assert_eq!(picture_2().vertex_count(), 14);
    }

    #[test]
    fn parse_and_display() {
        let p = k4_first();
        assert_eq!(p.to_string(), "K4a: [x r0 v, v g2 z] => [x g2 y, y r0 z]");
        assert_eq!(name_map(&p)["z"], 2);
        assert_eq!(p.premise_vertices(), vec![0, 1, 2]);
    }
}
