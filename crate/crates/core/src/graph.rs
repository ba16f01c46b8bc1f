//! Edge-colored digraphs with optional half-unit labels.
//!
//! This is the input type of the verifier and the common currency between the
//! generator, the sky view and the serialization layer. No invariants are
//! enforced on construction.

use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};

pub type VertexId = usize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Color {
    Red,
    Green,
    Blue,
}

impl Color {
    pub fn name(self) -> &'static str {
        match self {
            Color::Red => "red",
            Color::Green => "green",
            Color::Blue => "blue",
        }
    }
}

impl fmt::Display for Color {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// An edge label in half units: 0, 1 or 2 stand for 0, 1/2 and 1.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct EdgeLabel(pub u8);

impl EdgeLabel {
    pub const ZERO: EdgeLabel = EdgeLabel(0);
    pub const HALF: EdgeLabel = EdgeLabel(1);
    pub const ONE: EdgeLabel = EdgeLabel(2);

    pub fn halves(self) -> u8 {
        self.0
    }

    pub fn is_legal(self) -> bool {
        self.0 <= 2
    }

    /// `a -> 1 - a` in display units.
    pub fn dual(self) -> EdgeLabel {
        EdgeLabel(2u8.saturating_sub(self.0))
    }

    pub fn display(self) -> String {
        match self.0 {
            0 => "0".into(),
            1 => "1/2".into(),
            2 => "1".into(),
            h => format!("{h}/2"),
        }
    }
}

impl fmt::Display for EdgeLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.display())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Edge {
    pub src: VertexId,
    pub dst: VertexId,
    pub color: Color,
    pub label: Option<EdgeLabel>,
}

impl Edge {
    pub fn new(src: VertexId, dst: VertexId, color: Color, label: Option<EdgeLabel>) -> Self {
        Edge {
            src,
            dst,
            color,
            label,
        }
    }
}

impl fmt::Display for Edge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}-{}->{}", self.src, self.color, self.dst)?;
        if let Some(l) = self.label {
            write!(f, " [{l}]")?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ColoredGraph {
    pub vertices: Vec<VertexId>,
    pub edges: Vec<Edge>,
}

impl ColoredGraph {
    pub fn new(vertices: Vec<VertexId>, edges: Vec<Edge>) -> Self {
        ColoredGraph { vertices, edges }
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn labeled_count(&self) -> usize {
        self.edges.iter().filter(|e| e.label.is_some()).count()
    }

    /// Drops every label.
    pub fn unlabeled(&self) -> ColoredGraph {
        ColoredGraph {
            vertices: self.vertices.clone(),
            edges: self
                .edges
                .iter()
                .map(|e| Edge { label: None, ..*e })
                .collect(),
        }
    }
}

/// Dense adjacency over a [`ColoredGraph`] with positions `0..n`.
///
/// Built only when vertex ids are unique and every endpoint resolves.
#[derive(Clone, Debug)]
pub(crate) struct Adjacency {
    pub pos: HashMap<VertexId, usize>,
    pub ids: Vec<VertexId>,
    /// `out[v]` and `inc[v]` hold edge indices into the graph's edge list.
    pub out: Vec<Vec<usize>>,
    pub inc: Vec<Vec<usize>>,
}

impl Adjacency {
    pub fn build(g: &ColoredGraph) -> Result<Adjacency, String> {
        let mut pos = HashMap::with_capacity(g.vertices.len());
        for (i, v) in g.vertices.iter().enumerate() {
            if pos.insert(*v, i).is_some() {
                return Err(format!("duplicate vertex id {v}"));
            }
        }
        let n = g.vertices.len();
        let mut out = vec![Vec::new(); n];
        let mut inc = vec![Vec::new(); n];
        for (k, e) in g.edges.iter().enumerate() {
            let (Some(&s), Some(&d)) = (pos.get(&e.src), pos.get(&e.dst)) else {
                return Err(format!("edge {e} has an endpoint that is not a vertex"));
            };
            out[s].push(k);
            inc[d].push(k);
        }
        Ok(Adjacency {
            pos,
            ids: g.vertices.clone(),
            out,
            inc,
        })
    }

    pub fn len(&self) -> usize {
        self.ids.len()
    }
}
