//! JSON documents, DOT export and atomic file writes.

use std::collections::HashSet;
use std::fmt::Write as _;
use std::io::Write as _;
use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::crystal::{DecoratedCrystal, Op};
use crate::graph::{Color, ColoredGraph, Edge, EdgeLabel, VertexId};
use crate::model::Configuration;
use crate::sky::{SkyEdge, SkyGraph, SkyVertex};
use crate::verify::{AxiomReport, Violation};

#[derive(Debug, Error)]
pub enum IoError {
    #[error("cannot read {path}: {source}")]
    Read {
        path: String,
        source: std::io::Error,
    },
    #[error("cannot write {path}: {source}")]
    Write {
        path: String,
        source: std::io::Error,
    },
    #[error("malformed document: {0}")]
    Parse(#[from] serde_json::Error),
    #[error("invalid document: {0}")]
    Invalid(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Kind {
    Crystal,
    Sky,
    Generic,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Meta {
    pub kind: Kind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub h: Option<i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub a: Option<i64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VertexDoc {
    pub id: VertexId,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub config: Option<Configuration>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub xy: Option<[u32; 2]>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EdgeDoc {
    pub src: VertexId,
    pub dst: VertexId,
    pub color: Color,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label_halves: Option<u8>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphDocument {
    pub meta: Meta,
    pub vertices: Vec<VertexDoc>,
    pub edges: Vec<EdgeDoc>,
}

impl GraphDocument {
    /// Decorated crystal; edges sorted by tail with red before green.
    pub fn from_crystal(g: &DecoratedCrystal) -> Self {
        let b = g.graph.bounds;
        let vertices = g
            .graph
            .vertices
            .iter()
            .enumerate()
            .map(|(id, f)| VertexDoc {
                id,
                config: Some(*f),
                xy: None,
            })
            .collect();
        let mut edges = Vec::with_capacity(g.graph.edge_count());
        for u in 0..g.graph.len() {
            for op in [Op::F1, Op::F2] {
                if let Some(v) = g.graph.succ(u, op) {
                    edges.push(EdgeDoc {
                        src: u,
                        dst: v,
                        color: op.color(),
                        label_halves: g.label_out(u, op).map(EdgeLabel::halves),
                    });
                }
            }
        }
        GraphDocument {
            meta: Meta {
                kind: Kind::Crystal,
                h: Some(b.h_cap),
                a: Some(b.a_cap),
            },
            vertices,
            edges,
        }
    }

    pub fn from_sky(s: &SkyGraph, h: Option<i64>, a: Option<i64>) -> Self {
        GraphDocument {
            meta: Meta {
                kind: Kind::Sky,
                h,
                a,
            },
            vertices: s
                .vertices
                .iter()
                .enumerate()
                .map(|(id, v)| VertexDoc {
                    id,
                    config: None,
                    xy: Some([v.x, v.y]),
                })
                .collect(),
            edges: s
                .edges
                .iter()
                .map(|e| EdgeDoc {
                    src: e.src,
                    dst: e.dst,
                    color: e.color,
                    label_halves: Some(e.label.0),
                })
                .collect(),
        }
    }

    /// Unique ids, resolvable endpoints, colors allowed for the kind.
    pub fn validate(&self) -> Result<(), IoError> {
        let mut ids = HashSet::new();
        for v in &self.vertices {
            if !ids.insert(v.id) {
                return Err(IoError::Invalid(format!("duplicate vertex id {}", v.id)));
            }
        }
        for e in &self.edges {
            if !ids.contains(&e.src) || !ids.contains(&e.dst) {
                return Err(IoError::Invalid(format!(
                    "edge {}->{} has an unknown endpoint",
                    e.src, e.dst
                )));
            }
            let legal = match self.meta.kind {
                Kind::Crystal => e.color != Color::Blue,
                Kind::Sky => e.color != Color::Red,
                Kind::Generic => true,
            };
            if !legal {
                return Err(IoError::Invalid(format!(
                    "{} edge in a {:?} document",
                    e.color, self.meta.kind
                )));
            }
            if self.meta.kind == Kind::Sky && e.label_halves.is_none() {
                return Err(IoError::Invalid("sky edges need labels".into()));
            }
        }
        if self.meta.kind == Kind::Sky && self.vertices.iter().any(|v| v.xy.is_none()) {
            return Err(IoError::Invalid("sky vertices need xy labels".into()));
        }
        Ok(())
    }

    pub fn to_colored(&self) -> ColoredGraph {
        ColoredGraph::new(
            self.vertices.iter().map(|v| v.id).collect(),
            self.edges
                .iter()
                .map(|e| Edge::new(e.src, e.dst, e.color, e.label_halves.map(EdgeLabel)))
                .collect(),
        )
    }

    pub fn xy(&self) -> Vec<Option<(u32, u32)>> {
        self.vertices
            .iter()
            .map(|v| v.xy.map(|[x, y]| (x, y)))
            .collect()
    }

    /// Sky graph with positions as ids. Call after [`validate`](Self::validate).
    pub fn to_sky(&self) -> Result<SkyGraph, IoError> {
        let pos: std::collections::HashMap<VertexId, usize> = self
            .vertices
            .iter()
            .enumerate()
            .map(|(i, v)| (v.id, i))
            .collect();
        let vertices = self
            .vertices
            .iter()
            .map(|v| {
                let [x, y] =
                    v.xy.ok_or_else(|| IoError::Invalid(format!("vertex {} has no xy", v.id)))?;
                Ok(SkyVertex { x, y })
            })
            .collect::<Result<_, IoError>>()?;
        let edges = self
            .edges
            .iter()
            .map(|e| {
                let label = e
                    .label_halves
                    .ok_or_else(|| IoError::Invalid("unlabeled sky edge".into()))?;
                Ok(SkyEdge {
                    src: pos[&e.src],
                    dst: pos[&e.dst],
                    color: e.color,
                    label: EdgeLabel(label),
                })
            })
            .collect::<Result<_, IoError>>()?;
        Ok(SkyGraph { vertices, edges })
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("documents always serialize");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str) -> Result<Self, IoError> {
        let doc: GraphDocument = serde_json::from_str(text)?;
        doc.validate()?;
        Ok(doc)
    }

    pub fn read(path: &Path) -> Result<Self, IoError> {
        let text = std::fs::read_to_string(path).map_err(|source| IoError::Read {
            path: path.display().to_string(),
            source,
        })?;
        Self::from_json(&text)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReportStats {
    pub vertex_count: usize,
    pub edge_count: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dimension_expected: Option<i64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReportDocument {
    pub passed: bool,
    pub violations: Vec<Violation>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub warnings: Vec<Violation>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub stats: Option<ReportStats>,
}

impl ReportDocument {
    pub fn new(report: AxiomReport, stats: Option<ReportStats>) -> Self {
        ReportDocument {
            passed: report.passed(),
            violations: report.violations,
            warnings: report.warnings,
            stats,
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("reports always serialize");
        s.push('\n');
        s
    }
}

fn dot_label(l: Option<u8>) -> String {
    l.map(|h| EdgeLabel(h).display()).unwrap_or_default()
}

/// Graphviz rendering. Vertices are captioned with their configuration or `(X,Y)`.
pub fn export_dot(doc: &GraphDocument) -> String {
    let name = match doc.meta.kind {
        Kind::Crystal => "crystal",
        Kind::Sky => "sky",
        Kind::Generic => "graph",
    };
    let mut out = String::new();
    writeln!(out, "digraph {name} {{").unwrap();
    writeln!(out, "  node [shape=box, fontsize=10];").unwrap();
    for v in &doc.vertices {
        let caption = match (&v.config, &v.xy) {
            (Some(f), _) => f.to_string(),
            (None, Some([x, y])) => format!("({x},{y})"),
            (None, None) => v.id.to_string(),
        };
        writeln!(out, "  {} [label=\"{caption}\"];", v.id).unwrap();
    }
    for e in &doc.edges {
        writeln!(
            out,
            "  {} -> {} [color={}, label=\"{}\"];",
            e.src,
            e.dst,
            e.color,
            dot_label(e.label_halves)
        )
        .unwrap();
    }
    out.push_str("}\n");
    out
}

/// Writes through a temporary file in the target directory, then renames.
pub fn write_atomic(path: &Path, contents: &str) -> Result<(), IoError> {
    let err = |source: std::io::Error| IoError::Write {
        path: path.display().to_string(),
        source,
    };
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(err)?;
    tmp.write_all(contents.as_bytes()).map_err(err)?;
    tmp.flush().map_err(err)?;
    tmp.persist(path).map_err(|e| err(e.error))?;
    Ok(())
}
