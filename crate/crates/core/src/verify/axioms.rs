use std::collections::HashSet;

use super::patterns::{self, extend, keyed, MatchView, Pattern};
use super::{slot, Analysis, AxiomReport, Location, Rule, GREEN, RED};
use crate::graph::{Adjacency, Color, ColoredGraph};

/// Every monochromatic component is a finite simple directed path.
pub(crate) fn k0(g: &ColoredGraph) -> AxiomReport {
    let mut rep = AxiomReport::default();
    let adj = match Adjacency::build(g) {
        Ok(adj) => adj,
        Err(msg) => {
            rep.push(Rule::K0, Location::default(), msg);
            return rep;
        }
    };
    let n = adj.len();
    let mut succ = [vec![None; n], vec![None; n]];
    for (k, e) in g.edges.iter().enumerate() {
        let Some(s) = slot(e.color) else {
            rep.push(
                Rule::K0,
                Location::edge(k, g),
                format!("{} edges are not allowed here", e.color),
            );
            continue;
        };
        if e.src == e.dst {
            rep.push(Rule::K0, Location::edge(k, g), "loop edge");
        }
        let (u, v) = (adj.pos[&e.src], adj.pos[&e.dst]);
        succ[s][u] = Some(v);
    }
    for v in 0..n {
        for c in [Color::Red, Color::Green] {
            let outs: Vec<usize> = adj.out[v]
                .iter()
                .copied()
                .filter(|&k| g.edges[k].color == c)
                .collect();
            let ins: Vec<usize> = adj.inc[v]
                .iter()
                .copied()
                .filter(|&k| g.edges[k].color == c)
                .collect();
            for (list, dir) in [(outs, "leave"), (ins, "enter")] {
                if list.len() > 1 {
                    rep.push(
                        Rule::K0,
                        Location {
                            vertices: vec![adj.ids[v]],
                            edges: list.clone(),
                        },
                        format!("{} {c} edges {dir} vertex {}", list.len(), adj.ids[v]),
                    );
                }
            }
        }
    }
    if !rep.passed() {
        return rep;
    }
    // with in/out degree at most one, a component is a path unless it is a cycle
    for s in [RED, GREEN] {
        let mut has_pred = vec![false; n];
        for v in succ[s].iter().flatten() {
            has_pred[*v] = true;
        }
        let mut seen = vec![false; n];
        for start in (0..n).filter(|&v| !has_pred[v]) {
            let mut u = start;
            seen[u] = true;
            while let Some(next) = succ[s][u] {
                u = next;
                seen[u] = true;
            }
        }
        if let Some(v) = (0..n).find(|&v| !seen[v] && succ[s][v].is_some()) {
            let color = if s == RED { "red" } else { "green" };
            rep.push(
                Rule::K0,
                Location::vertices([adj.ids[v]]),
                format!("{color} edges form a cycle through vertex {}", adj.ids[v]),
            );
        }
    }
    rep
}

fn diffs(a: &Analysis, e: usize) -> (i64, i64, i64) {
    let (u, v) = (a.src(e), a.dst(e));
    let other = if a.g.edges[e].color == Color::Red {
        GREEN
    } else {
        RED
    };
    let dt = i64::from(a.t[other][u]) - i64::from(a.t[other][v]);
    let dh = i64::from(a.h[other][v]) - i64::from(a.h[other][u]);
    let target = if other == GREEN { 1 } else { 2 };
    (dt, dh, target)
}

/// A red edge shifts the green string data by one, a green edge the red data by two.
pub(crate) fn k1(a: &Analysis) -> AxiomReport {
    let mut rep = AxiomReport::default();
    for e in 0..a.g.edges.len() {
        let (dt, dh, target) = diffs(a, e);
        if dt + dh != target {
            rep.push(
                Rule::K1,
                a.loc_edge(e),
                format!(
                    "{}: dt + dh = {} instead of {target}",
                    a.edge_text(e),
                    dt + dh
                ),
            );
        }
    }
    rep
}

/// Both differences are nonnegative, and given labels agree with the decoration rule.
pub(crate) fn k2(a: &Analysis) -> AxiomReport {
    let mut rep = AxiomReport::default();
    for e in 0..a.g.edges.len() {
        let (dt, dh, _) = diffs(a, e);
        if dt < 0 || dh < 0 {
            rep.push(
                Rule::K2,
                a.loc_edge(e),
                format!(
                    "{}: dt = {dt}, dh = {dh}, both must be nonnegative",
                    a.edge_text(e)
                ),
            );
        }
        if !a.labels_provided {
            continue;
        }
        let given = a.labels[e];
        let legal = match a.g.edges[e].color {
            Color::Red => given == 0 || given == 2,
            _ => (0..=2).contains(&given),
        };
        if !legal {
            rep.push(
                Rule::K2,
                a.loc_edge(e),
                format!("{}: label outside its range", a.edge_text(e)),
            );
        }
        let expected = a.computed_label(e);
        if given != expected {
            rep.push(
                Rule::K2,
                a.loc_edge(e),
                format!(
                    "{}: label consistency fails, string data give {expected}/2",
                    a.edge_text(e)
                ),
            );
        }
    }
    rep
}

/// Labels do not decrease along a string.
pub(crate) fn k3(a: &Analysis) -> AxiomReport {
    let mut rep = AxiomReport::default();
    for s in [RED, GREEN] {
        for v in 0..a.n() {
            let (Some(ein), Some(eout)) = (a.inc[s][v], a.out[s][v]) else {
                continue;
            };
            if a.labels[ein] > a.labels[eout] {
                rep.push(
                    Rule::K3,
                    Location {
                        vertices: vec![a.id(v)],
                        edges: vec![ein, eout],
                    },
                    format!(
                        "label drops from {}/2 to {}/2 at vertex {}",
                        a.labels[ein],
                        a.labels[eout],
                        a.id(v)
                    ),
                );
            }
        }
    }
    rep
}

pub(crate) fn k4(a: &Analysis) -> AxiomReport {
    let mut rep = AxiomReport::default();
    for v in 0..a.n() {
        // red a into v, green b out of v
        if let (Some(er), Some(eg)) = (a.inc[RED][v], a.out[GREEN][v]) {
            let (la, lb) = (a.labels[er], a.labels[eg]);
            let loc = Location {
                vertices: vec![a.id(v)],
                edges: vec![er, eg],
            };
            if la == lb {
                rep.push(
                    Rule::K4,
                    loc,
                    format!("red in and green out of {} share label {la}/2", a.id(v)),
                );
            } else if la < lb {
                if (la, lb) != (0, 2) {
                    rep.push(
                        Rule::K4,
                        loc,
                        format!("red in {la}/2 < green out {lb}/2 at {}", a.id(v)),
                    );
                } else {
                    let x = a.src(er);
                    let z = a.dst(eg);
                    let ok = a.out[GREEN][x].is_some_and(|e1| {
                        let y = a.dst(e1);
                        a.labels[e1] == 2
                            && a.out[RED][y].is_some_and(|e2| a.dst(e2) == z && a.labels[e2] == 0)
                    });
                    if !ok {
                        rep.push(
                            Rule::K4,
                            loc,
                            format!("square below vertex {} does not close", a.id(v)),
                        );
                    }
                }
            }
        }
        // green b into v, red a out of v
        if let (Some(eg), Some(er)) = (a.inc[GREEN][v], a.out[RED][v]) {
            let (lb, la) = (a.labels[eg], a.labels[er]);
            let loc = Location {
                vertices: vec![a.id(v)],
                edges: vec![eg, er],
            };
            if la == lb {
                rep.push(
                    Rule::K4,
                    loc,
                    format!("green in and red out of {} share label {la}/2", a.id(v)),
                );
            } else if la > lb {
                if (la, lb) != (2, 0) {
                    rep.push(
                        Rule::K4,
                        loc,
                        format!("red out {la}/2 > green in {lb}/2 at {}", a.id(v)),
                    );
                } else {
                    let x = a.src(eg);
                    let z = a.dst(er);
                    let ok = a.out[RED][x].is_some_and(|e1| {
                        let y = a.dst(e1);
                        a.labels[e1] == 2
                            && a.out[GREEN][y].is_some_and(|e2| a.dst(e2) == z && a.labels[e2] == 0)
                    });
                    if !ok {
                        rep.push(
                            Rule::K4,
                            loc,
                            format!("square above vertex {} does not close", a.id(v)),
                        );
                    }
                }
            }
        }
    }
    rep
}

fn view(a: &Analysis) -> MatchView {
    let edges = (0..a.g.edges.len())
        .filter(|&e| a.labels[e] >= 0 && a.labels[e] <= u8::MAX as i64)
        .map(|e| {
            (
                a.src(e),
                a.dst(e),
                (a.g.edges[e].color, a.labels[e] as u8, 0),
            )
        })
        .collect();
    MatchView::new(a.n(), edges)
}

fn matches_in(view: &MatchView, p: &Pattern) -> Vec<(Vec<Option<usize>>, bool)> {
    let premise = keyed(&p.premise, 0);
    let conclusion = keyed(&p.conclusion, 0);
    let mut found: Vec<Vec<Option<usize>>> = Vec::new();
    let mut assign = vec![None; p.vertex_count()];
    extend(view, &premise, &mut assign, &mut |m| {
        found.push(m.to_vec());
        true
    });
    found
        .into_iter()
        .map(|mut m| {
            let mut full = None;
            extend(view, &conclusion, &mut m, &mut |done| {
                full = Some(done.to_vec());
                false
            });
            match full {
                Some(done) => (done, true),
                None => (m, false),
            }
        })
        .collect()
}

/// Premise embeddings of `p` (positions), each with whether its conclusion extends.
pub(crate) fn matches(a: &Analysis, p: &Pattern) -> Vec<(Vec<Option<usize>>, bool)> {
    matches_in(&view(a), p)
}

fn implication_report(
    a: &Analysis,
    catalog: &[Pattern],
    rule: Rule,
    as_warning: bool,
) -> AxiomReport {
    let mut rep = AxiomReport::default();
    let v = view(a);
    for p in catalog {
        for (m, ok) in matches_in(&v, p) {
            if ok {
                continue;
            }
            let verts: Vec<usize> = p
                .premise_vertices()
                .into_iter()
                .filter_map(|i| m[i])
                .collect();
            let named: Vec<String> = p
                .premise_vertices()
                .into_iter()
                .filter_map(|i| m[i].map(|g| format!("{}={}", p.names[i], a.id(g))))
                .collect();
            let msg = format!(
                "premise of {} matches at {{{}}} but the conclusion is missing",
                p.id,
                named.join(", ")
            );
            if as_warning {
                rep.warn(rule, a.loc(&verts), msg);
            } else {
                rep.push(rule, a.loc(&verts), msg);
            }
        }
    }
    rep
}

/// Every premise match of the catalog extends to its conclusion.
pub(crate) fn k5(a: &Analysis) -> AxiomReport {
    implication_report(a, &patterns::k5_catalog(), Rule::K5, false)
}

pub(crate) fn consequences(a: &Analysis) -> AxiomReport {
    implication_report(a, &patterns::consequence_catalog(), Rule::Consequence, true)
}

/// Green 1 edges that are neither the bottom of a K4 square nor the anchor of a
/// K5 premise, and dually for green 0 edges.
pub(crate) fn k5_coverage(a: &Analysis) -> AxiomReport {
    let mut rep = AxiomReport::default();
    let v = view(a);
    let edge_between =
        |s: usize, d: usize| -> Option<usize> { a.out[GREEN][s].filter(|&e| a.dst(e) == d) };
    let mut covered: HashSet<usize> = HashSet::new();
    let square = [patterns::k4_first(), patterns::k4_second()];
    // bottom green edge of the first square is x->y, top green edge of the second is y->z
    for (p, (s, d)) in square.iter().zip([("x", "y"), ("y", "z")]) {
        let names = patterns::name_map(p);
        for (m, ok) in matches_in(&v, p) {
            if let (true, Some(gs), Some(gd)) = (ok, m[names[s]], m[names[d]]) {
                covered.extend(edge_between(gs, gd));
            }
        }
    }
    for p in patterns::k5_catalog() {
        let anchor = p.premise[0];
        for (m, _) in matches_in(&v, &p) {
            if let (Some(gs), Some(gd)) = (m[anchor.src], m[anchor.dst]) {
                covered.extend(edge_between(gs, gd));
            }
        }
    }
    for e in 0..a.g.edges.len() {
        if a.g.edges[e].color != Color::Green || a.labels[e] == 1 || covered.contains(&e) {
            continue;
        }
        let side = if a.labels[e] == 2 { "bottom" } else { "top" };
        rep.warn(
            Rule::K5Coverage,
            a.loc_edge(e),
            format!(
                "{} is not the {side} of a square and no K5 premise starts at it",
                a.edge_text(e)
            ),
        );
    }
    rep
}
