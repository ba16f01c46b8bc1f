//! Intervals `B(H, A)` of the crossing model as edge-2-colored digraphs.
//!
//! Red edges are `F1` steps, green edges are `F2` steps. Vertex ids are
//! assigned in BFS order from the zero configuration, exploring `F1` before
//! `F2`, so every serialization of a given interval is identical.

use std::collections::{BTreeSet, HashMap, VecDeque};

use thiserror::Error;

use crate::graph::{Color, ColoredGraph, Edge, EdgeLabel};
use crate::model::{self, Bounds, Configuration, ModelError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CrystalError {
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error("generation needs interval bounds")]
    NotInterval,
    #[error("vertex {0} is not in the graph")]
    NoSuchVertex(usize),
    #[error("{color} edge {src}->{dst} gets label {halves}/2, outside the legal range (K1/K2 inconsistency)")]
    LabelOutOfRange {
        color: Color,
        src: usize,
        dst: usize,
        halves: i64,
    },
    #[error("red labels decrease along the string through vertex {0} (K3)")]
    NonMonotone(usize),
    #[error("inclusion failure: {0}")]
    Inclusion(String),
    #[error("reversal symmetry failure: {0}")]
    Reversal(String),
}

/// Crystal color: 1 is red, 2 is green.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Op {
    F1,
    F2,
}

impl Op {
    pub fn color(self) -> Color {
        match self {
            Op::F1 => Color::Red,
            Op::F2 => Color::Green,
        }
    }

    fn slot(self) -> usize {
        match self {
            Op::F1 => 0,
            Op::F2 => 1,
        }
    }
}

#[derive(Clone, Debug)]
pub struct CrystalGraph {
    pub bounds: Bounds,
    pub vertices: Vec<Configuration>,
    index: HashMap<Configuration, usize>,
    succ: [Vec<Option<usize>>; 2],
    pred: [Vec<Option<usize>>; 2],
}

impl CrystalGraph {
    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn id_of(&self, f: &Configuration) -> Option<usize> {
        self.index.get(f).copied()
    }

    pub fn succ(&self, v: usize, op: Op) -> Option<usize> {
        self.succ[op.slot()][v]
    }

    pub fn pred(&self, v: usize, op: Op) -> Option<usize> {
        self.pred[op.slot()][v]
    }

    /// All edges of one color as `(tail, head)` in tail order.
    pub fn edges(&self, op: Op) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.succ[op.slot()]
            .iter()
            .enumerate()
            .filter_map(|(u, s)| s.map(|v| (u, v)))
    }

    pub fn edge_count(&self) -> usize {
        self.edges(Op::F1).count() + self.edges(Op::F2).count()
    }

    pub fn source(&self) -> usize {
        0
    }

    /// The unique vertex without outgoing edges.
    pub fn sink(&self) -> Option<usize> {
        let mut sinks = (0..self.len())
            .filter(|&v| self.succ(v, Op::F1).is_none() && self.succ(v, Op::F2).is_none());
        let s = sinks.next()?;
        sinks.next().is_none().then_some(s)
    }

    fn check(&self, v: usize) -> Result<(), CrystalError> {
        if v < self.len() {
            Ok(())
        } else {
            Err(CrystalError::NoSuchVertex(v))
        }
    }
}

/// BFS closure of the zero configuration under `F1`, `F2` within `bounds`.
pub fn generate(bounds: &Bounds) -> Result<CrystalGraph, CrystalError> {
    if !bounds.is_interval() {
        return Err(CrystalError::NotInterval);
    }
    let start = bounds.source();
    let mut vertices = vec![start];
    let mut index = HashMap::from([(start, 0usize)]);
    let mut succ: [Vec<Option<usize>>; 2] = [vec![None], vec![None]];
    let mut queue = VecDeque::from([0usize]);
    while let Some(u) = queue.pop_front() {
        let f = vertices[u];
        for op in [Op::F1, Op::F2] {
            let next = match op {
                Op::F1 => model::apply_f1(&f, bounds)?,
                Op::F2 => model::apply_f2(&f, bounds)?,
            };
            let Some(g) = next else { continue };
            let v = *index.entry(g).or_insert_with(|| {
                vertices.push(g);
                succ[0].push(None);
                succ[1].push(None);
                queue.push_back(vertices.len() - 1);
                vertices.len() - 1
            });
            succ[op.slot()][u] = Some(v);
        }
    }
    let n = vertices.len();
    let mut pred: [Vec<Option<usize>>; 2] = [vec![None; n], vec![None; n]];
    for slot in 0..2 {
        for (u, s) in succ[slot].iter().enumerate() {
            if let Some(v) = s {
                pred[slot][*v] = Some(u);
            }
        }
    }
    log::debug!(
        "generated B({}, {}) with {n} vertices",
        bounds.h_cap,
        bounds.a_cap
    );
    Ok(CrystalGraph {
        bounds: *bounds,
        vertices,
        index,
        succ,
        pred,
    })
}

fn top_chains(a_cap: i64, eq_ab: bool, eq_bc: bool) -> Vec<(i64, i64, i64)> {
    let mut out = Vec::new();
    for a in (0..=a_cap).step_by(2) {
        for b in 0..=a {
            if eq_ab && b != a {
                continue;
            }
            for c in (0..=b).step_by(2) {
                if eq_bc && c != b {
                    continue;
                }
                out.push((a, b, c));
            }
        }
    }
    out
}

fn bottom_chains(h_cap: i64, eq: [bool; 3]) -> Vec<(i64, i64, i64, i64)> {
    let mut out = Vec::new();
    for x in 0..=h_cap {
        for y in 0..=x {
            if eq[0] && y != x {
                continue;
            }
            for z in 0..=y {
                if (eq[1] && z != y) || (y + z) % 2 != 0 {
                    continue;
                }
                for w in 0..=z {
                    if eq[2] && w != z {
                        continue;
                    }
                    out.push((x, y, z, w));
                }
            }
        }
    }
    out
}

/// Integer points of the five pattern polyhedra inside the interval, without using the operators.
pub fn enumerate_interval(bounds: &Bounds) -> Result<BTreeSet<Configuration>, CrystalError> {
    use model::EqualityPattern::*;
    if !bounds.is_interval() {
        return Err(CrystalError::NotInterval);
    }
    // (a=b, b=c, x=y, y=z, z=w) per pattern
    let shapes: [(model::EqualityPattern, [bool; 5]); 5] = [
        (A, [false, false, true, true, true]),
        (B1, [true, true, false, false, true]),
        (B2, [true, true, true, false, false]),
        (C1, [false, true, true, true, false]),
        (C2, [true, false, false, true, true]),
    ];
    let mut out = BTreeSet::new();
    for (_, eq) in shapes {
        let tops = top_chains(bounds.a_cap, eq[0], eq[1]);
        let bottoms = bottom_chains(bounds.h_cap, [eq[2], eq[3], eq[4]]);
        for &(a, b, c) in &tops {
            for &(x, y, z, w) in &bottoms {
                out.insert(Configuration::new([a, b, c, x, y, z, w]));
            }
        }
    }
    Ok(out)
}

/// `dim V(H λ1 + B λ2)` for `sp(4)` with `B = A/2`, by the Weyl dimension formula.
pub fn weyl_dimension(h: i64, a: i64) -> i64 {
    let b = a / 2;
    (h + 1) * (b + 1) * (h + b + 2) * (h + 2 * b + 3) / 6
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default)]
pub struct StringStats {
    pub t: u32,
    pub h: u32,
}

impl StringStats {
    pub fn length(&self) -> u32 {
        self.t + self.h
    }
}

pub fn string_stats(g: &CrystalGraph, v: usize, op: Op) -> Result<StringStats, CrystalError> {
    g.check(v)?;
    let mut s = StringStats::default();
    let mut u = v;
    while let Some(p) = g.pred(u, op) {
        s.t += 1;
        u = p;
    }
    u = v;
    while let Some(n) = g.succ(u, op) {
        s.h += 1;
        u = n;
    }
    Ok(s)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Weight {
    pub w1: i64,
    pub w2: i64,
}

/// A crystal with string statistics and labels on every edge.
#[derive(Clone, Debug)]
pub struct DecoratedCrystal {
    pub graph: CrystalGraph,
    /// `stats[v] = [red stats, green stats]`
    pub stats: Vec<[StringStats; 2]>,
    /// Label of the outgoing edge, indexed by tail vertex.
    labels: [Vec<Option<EdgeLabel>>; 2],
}

impl DecoratedCrystal {
    pub fn stats(&self, v: usize, op: Op) -> StringStats {
        self.stats[v][op.slot()]
    }

    pub fn label_out(&self, v: usize, op: Op) -> Option<EdgeLabel> {
        self.labels[op.slot()][v]
    }

    pub fn label_in(&self, v: usize, op: Op) -> Option<EdgeLabel> {
        self.graph.pred(v, op).and_then(|u| self.label_out(u, op))
    }

    /// `(tail, head, label)` for all edges of one color.
    pub fn labeled_edges(&self, op: Op) -> impl Iterator<Item = (usize, usize, EdgeLabel)> + '_ {
        self.graph
            .edges(op)
            .map(move |(u, v)| (u, v, self.labels[op.slot()][u].expect("decorated edge")))
    }
}

pub fn decorate(graph: CrystalGraph) -> Result<DecoratedCrystal, CrystalError> {
    let n = graph.len();
    let mut stats = Vec::with_capacity(n);
    for v in 0..n {
        stats.push([
            string_stats(&graph, v, Op::F1)?,
            string_stats(&graph, v, Op::F2)?,
        ]);
    }
    let mut labels: [Vec<Option<EdgeLabel>>; 2] = [vec![None; n], vec![None; n]];
    for op in [Op::F1, Op::F2] {
        for (u, v) in graph.edges(op) {
            let halves = match op {
                Op::F1 => 2 * (i64::from(stats[v][1].h) - i64::from(stats[u][1].h)),
                Op::F2 => i64::from(stats[v][0].h) - i64::from(stats[u][0].h),
            };
            let legal = match op {
                Op::F1 => halves == 0 || halves == 2,
                Op::F2 => (0..=2).contains(&halves),
            };
            if !legal {
                return Err(CrystalError::LabelOutOfRange {
                    color: op.color(),
                    src: u,
                    dst: v,
                    halves,
                });
            }
            labels[op.slot()][u] = Some(EdgeLabel(halves as u8));
        }
    }
    Ok(DecoratedCrystal {
        graph,
        stats,
        labels,
    })
}

pub fn generate_decorated(bounds: &Bounds) -> Result<DecoratedCrystal, CrystalError> {
    decorate(generate(bounds)?)
}

pub fn weight_of(g: &DecoratedCrystal, v: usize) -> Result<Weight, CrystalError> {
    g.graph.check(v)?;
    let [r, gr] = g.stats[v];
    Ok(Weight {
        w1: i64::from(r.h) - i64::from(r.t),
        w2: i64::from(gr.h) - i64::from(gr.t),
    })
}

pub fn fat_vertices(g: &CrystalGraph) -> Vec<usize> {
    (0..g.len()).filter(|&v| g.vertices[v].is_fat()).collect()
}

/// Critical vertex of a red string with its `(X, Y)` label.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Critical {
    pub vertex: usize,
    pub x: u32,
    pub y: u32,
}

/// The red string through `v`, from its first to its last vertex.
pub fn red_string(g: &CrystalGraph, v: usize) -> Result<Vec<usize>, CrystalError> {
    g.check(v)?;
    let mut s = v;
    while let Some(p) = g.pred(s, Op::F1) {
        s = p;
    }
    let mut out = vec![s];
    while let Some(n) = g.succ(*out.last().unwrap(), Op::F1) {
        out.push(n);
    }
    Ok(out)
}

/// Finds where the red labels switch from 0 to 1 on the red string through `v`.
pub fn critical_of_red_string(g: &DecoratedCrystal, v: usize) -> Result<Critical, CrystalError> {
    let string = red_string(&g.graph, v)?;
    let mut zeros = 0u32;
    let mut ones = 0u32;
    for &u in &string[..string.len() - 1] {
        match g.label_out(u, Op::F1) {
            Some(EdgeLabel::ZERO) if ones == 0 => zeros += 1,
            Some(EdgeLabel::ONE) => ones += 1,
            _ => return Err(CrystalError::NonMonotone(v)),
        }
    }
    Ok(Critical {
        vertex: string[zeros as usize],
        x: zeros,
        y: ones,
    })
}

/// Decorated crystal as a labeled [`ColoredGraph`], ids equal to positions.
pub fn to_colored(g: &DecoratedCrystal) -> ColoredGraph {
    let mut edges = Vec::with_capacity(g.graph.edge_count());
    for u in 0..g.graph.len() {
        for op in [Op::F1, Op::F2] {
            if let Some(v) = g.graph.succ(u, op) {
                edges.push(Edge::new(u, v, op.color(), g.label_out(u, op)));
            }
        }
    }
    ColoredGraph::new((0..g.graph.len()).collect(), edges)
}

/// Result of mapping the glued product `B(H,0) ⊛ B(0,A)` into `B(H,A)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProductEmbedding {
    pub glued_vertices: usize,
    pub expected_vertices: usize,
    pub target_vertices: usize,
    pub edges_mapped: usize,
    /// Image ids in `B(H, A)`, sorted.
    pub image: Vec<usize>,
}

pub fn embed_product(h: i64, a: i64) -> Result<ProductEmbedding, CrystalError> {
    let target = generate(&Bounds::interval(h, a)?)?;
    let left = generate(&Bounds::interval(h, 0)?)?;
    let right = generate(&Bounds::interval(0, a)?)?;
    let left_fat = fat_vertices(&left);
    let right_fat = fat_vertices(&right);

    // copies of the left factor sit at the top levels of the right factor's fat vertices
    let lift_left = |level: i64, f: &Configuration| Configuration {
        a: level,
        b: level,
        c: level,
        ..*f
    };
    let lift_right = |level: i64, f: &Configuration| Configuration {
        x: level,
        y: level,
        z: level,
        w: level,
        ..*f
    };

    let mut image: HashMap<Configuration, (char, usize, usize)> = HashMap::new();
    let mut glued = 0usize;
    let mut edges_mapped = 0usize;
    let mut place =
        |key: (char, usize, usize), f: Configuration, fat: bool| -> Result<(), CrystalError> {
            if target.id_of(&f).is_none() {
                return Err(CrystalError::Inclusion(format!(
                    "{f} is not a vertex of B({h}, {a})"
                )));
            }
            match image.get(&f) {
                None => {
                    image.insert(f, key);
                    glued += 1;
                }
                // a fat point of one copy meets the matching fat point of the other factor
                Some(prev) if fat && prev.0 != key.0 => {}
                Some(prev) => {
                    return Err(CrystalError::Inclusion(format!(
                        "{f} is the image of both {prev:?} and {key:?}"
                    )))
                }
            }
            Ok(())
        };

    for (ci, &rf) in right_fat.iter().enumerate() {
        let level = right.vertices[rf].a;
        for (v, f) in left.vertices.iter().enumerate() {
            place(('L', ci, v), lift_left(level, f), f.is_fat())?;
        }
    }
    for (ci, &lf) in left_fat.iter().enumerate() {
        let level = left.vertices[lf].x;
        for (v, f) in right.vertices.iter().enumerate() {
            place(('R', ci, v), lift_right(level, f), f.is_fat())?;
        }
    }

    let mut map_edges = |factor: &CrystalGraph,
                         lift: &dyn Fn(&Configuration) -> Configuration|
     -> Result<(), CrystalError> {
        for op in [Op::F1, Op::F2] {
            for (u, v) in factor.edges(op) {
                let (fu, fv) = (lift(&factor.vertices[u]), lift(&factor.vertices[v]));
                let tu = target.id_of(&fu).expect("placed");
                let tv = target.id_of(&fv).expect("placed");
                if target.succ(tu, op) != Some(tv) {
                    return Err(CrystalError::Inclusion(format!(
                        "{} edge {fu} -> {fv} is missing in B({h}, {a})",
                        op.color()
                    )));
                }
                edges_mapped += 1;
            }
        }
        Ok(())
    };
    for &rf in &right_fat {
        let level = right.vertices[rf].a;
        map_edges(&left, &|f| lift_left(level, f))?;
    }
    for &lf in &left_fat {
        let level = left.vertices[lf].x;
        map_edges(&right, &|f| lift_right(level, f))?;
    }

    let expected = left.len() * right_fat.len() + right.len() * left_fat.len()
        - left_fat.len() * right_fat.len();
    let mut ids: Vec<usize> = image
        .keys()
        .map(|f| target.id_of(f).expect("placed"))
        .collect();
    ids.sort_unstable();
    if glued != expected {
        return Err(CrystalError::Inclusion(format!(
            "glued product has {glued} points, expected {expected}"
        )));
    }
    Ok(ProductEmbedding {
        glued_vertices: glued,
        expected_vertices: expected,
        target_vertices: target.len(),
        edges_mapped,
        image: ids,
    })
}

/// Checks that `star` (translated back into the interval) maps every edge
/// `u -> v` to an edge `φ(v) -> φ(u)` of the same color, and returns `φ` on ids.
pub fn reversal_isomorphism(g: &CrystalGraph) -> Result<Vec<usize>, CrystalError> {
    let mut phi = Vec::with_capacity(g.len());
    for f in &g.vertices {
        let s = model::star_in_interval(f, &g.bounds);
        let id = g
            .id_of(&s)
            .ok_or_else(|| CrystalError::Reversal(format!("image {s} of {f} is not a vertex")))?;
        phi.push(id);
    }
    let distinct: BTreeSet<_> = phi.iter().collect();
    if distinct.len() != g.len() {
        return Err(CrystalError::Reversal("vertex map is not injective".into()));
    }
    for op in [Op::F1, Op::F2] {
        let mut count = 0;
        for (u, v) in g.edges(op) {
            if g.succ(phi[v], op) != Some(phi[u]) {
                return Err(CrystalError::Reversal(format!(
                    "{} edge {} -> {} has no reversed image",
                    op.color(),
                    g.vertices[u],
                    g.vertices[v]
                )));
            }
            count += 1;
        }
        if count != g.edges(op).count() {
            return Err(CrystalError::Reversal("edge counts differ".into()));
        }
    }
    Ok(phi)
}
