//! Edge colorings and their JSON file form.

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{Edge, Graph, GraphError};

/// Color ordinal; `c_1` is `ColorId(1)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ColorId(pub u32);

impl fmt::Display for ColorId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "c{}", self.0)
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ColoringError {
    #[error("edge ({0}, {1}) has no color")]
    MissingEdge(String, String),
    #[error("edge ({0}, {1}) is colored more than once")]
    DuplicateEdge(String, String),
    #[error("color 0 is not a valid ordinal")]
    ZeroColor,
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// An assignment of one color to each edge.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Coloring {
    assignments: Vec<(Edge, ColorId)>,
    colors_used: usize,
}

impl Coloring {
    pub fn new(assignments: Vec<(Edge, ColorId)>) -> Self {
        let colors_used = assignments
            .iter()
            .map(|(_, c)| *c)
            .collect::<BTreeSet<_>>()
            .len();
        Coloring {
            assignments,
            colors_used,
        }
    }

    /// Colors listed in the graph's edge order.
    pub fn from_edge_colors(g: &Graph, colors: &[ColorId]) -> Self {
        assert_eq!(g.m(), colors.len());
        Coloring::new(
            g.edges()
                .iter()
                .copied()
                .zip(colors.iter().copied())
                .collect(),
        )
    }

    pub fn assignments(&self) -> &[(Edge, ColorId)] {
        &self.assignments
    }

    /// Number of distinct colors.
    pub fn colors_used(&self) -> usize {
        self.colors_used
    }

    /// Colors aligned with `g.edges()`. Every edge of `g` must be colored
    /// exactly once; assignments to edges outside `g` are rejected too.
    pub fn edge_colors(&self, g: &Graph) -> Result<Vec<ColorId>, ColoringError> {
        let mut out: Vec<Option<ColorId>> = vec![None; g.m()];
        for (e, c) in &self.assignments {
            let label = |e: &Edge| (g.label(e.u()).to_string(), g.label(e.v()).to_string());
            let Some(pos) = g.edge_position(e) else {
                let (a, b) = if g.has_vertex(e.u()) && g.has_vertex(e.v()) {
                    label(e)
                } else {
                    (e.u().to_string(), e.v().to_string())
                };
                return Err(GraphError::UnknownVertex(format!("edge ({a}, {b})")).into());
            };
            if out[pos].replace(*c).is_some() {
                let (a, b) = label(e);
                return Err(ColoringError::DuplicateEdge(a, b));
            }
        }
        out.into_iter()
            .zip(g.edges())
            .map(|(c, e)| {
                c.ok_or_else(|| {
                    ColoringError::MissingEdge(g.label(e.u()).into(), g.label(e.v()).into())
                })
            })
            .collect()
    }

    pub fn to_file(&self, g: &Graph) -> ColoringFile {
        ColoringFile {
            edges: self
                .assignments
                .iter()
                .map(|(e, c)| ColoredEdge {
                    u: g.label(e.u()).to_string(),
                    v: g.label(e.v()).to_string(),
                    color: *c,
                })
                .collect(),
            colors_used: self.colors_used,
        }
    }

    /// Resolves the labels of a coloring file against `g`.
    pub fn from_file(g: &Graph, file: &ColoringFile) -> Result<Self, ColoringError> {
        let mut seen = HashMap::new();
        let mut assignments = Vec::with_capacity(file.edges.len());
        for ce in &file.edges {
            if ce.color.0 == 0 {
                return Err(ColoringError::ZeroColor);
            }
            let e = g.edge_between(&ce.u, &ce.v)?;
            if !g.contains_edge(&e) {
                return Err(GraphError::UnknownVertex(format!("edge ({}, {})", ce.u, ce.v)).into());
            }
            if seen.insert(e, ce.color).is_some() {
                return Err(ColoringError::DuplicateEdge(ce.u.clone(), ce.v.clone()));
            }
            assignments.push((e, ce.color));
        }
        Ok(Coloring::new(assignments))
    }
}

/// `{"edges":[{"u":..,"v":..,"color":..}...],"colors_used":k}`
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ColoringFile {
    pub edges: Vec<ColoredEdge>,
    pub colors_used: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ColoredEdge {
    pub u: String,
    pub v: String,
    pub color: ColorId,
}
