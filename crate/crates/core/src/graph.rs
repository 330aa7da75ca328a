//! Simple undirected graphs over dense vertex indices.
//!
//! Vertices come into existence only through edges, so a [`Graph`] never holds
//! an isolated vertex. Indices are handed out in order of first appearance and
//! every vertex keeps the external label it was created with.

use std::collections::{BTreeSet, HashMap, VecDeque};
use std::fmt;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("self-loop on vertex {0}")]
    SelfLoop(String),
    #[error("duplicate edge ({0}, {1})")]
    DuplicateEdge(String, String),
    #[error("unknown vertex {0}")]
    UnknownVertex(String),
    #[error("graph is disconnected")]
    Disconnected,
}

/// Dense vertex index, `0..n` in order of first appearance.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VertexId(pub usize);

impl VertexId {
    pub fn index(self) -> usize {
        self.0
    }
}

impl fmt::Display for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}", self.0)
    }
}

/// Unordered vertex pair stored with the smaller index first.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Edge {
    u: VertexId,
    v: VertexId,
}

impl Edge {
    /// Returns `None` for a self-loop.
    pub fn new(a: VertexId, b: VertexId) -> Option<Self> {
        match a.cmp(&b) {
            std::cmp::Ordering::Less => Some(Edge { u: a, v: b }),
            std::cmp::Ordering::Greater => Some(Edge { u: b, v: a }),
            std::cmp::Ordering::Equal => None,
        }
    }

    pub fn u(&self) -> VertexId {
        self.u
    }

    pub fn v(&self) -> VertexId {
        self.v
    }

    pub fn endpoints(&self) -> (VertexId, VertexId) {
        (self.u, self.v)
    }
}

#[derive(Debug, Clone, Default)]
pub struct Graph {
    labels: Vec<String>,
    index: HashMap<String, VertexId>,
    adjacency: Vec<BTreeSet<usize>>,
    edges: Vec<Edge>,
    edge_index: HashMap<Edge, usize>,
}

impl Graph {
    pub fn new() -> Self {
        Self::default()
    }

    /// Builds a graph from labelled pairs, in order.
    pub fn from_pairs<I, S>(pairs: I) -> Result<Self, GraphError>
    where
        I: IntoIterator<Item = (S, S)>,
        S: AsRef<str>,
    {
        let mut g = Graph::new();
        for (a, b) in pairs {
            g.add_edge(a.as_ref(), b.as_ref())?;
        }
        Ok(g)
    }

    /// Number of vertices.
    pub fn n(&self) -> usize {
        self.labels.len()
    }

    /// Number of edges.
    pub fn m(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    /// Edges in insertion order; the position is the edge index.
    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge_position(&self, e: &Edge) -> Option<usize> {
        self.edge_index.get(e).copied()
    }

    pub fn contains_edge(&self, e: &Edge) -> bool {
        self.edge_index.contains_key(e)
    }

    pub fn vertex(&self, label: &str) -> Option<VertexId> {
        self.index.get(label).copied()
    }

    pub fn label(&self, v: VertexId) -> &str {
        &self.labels[v.0]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn vertices(&self) -> impl Iterator<Item = VertexId> {
        (0..self.n()).map(VertexId)
    }

    /// Neighbors in ascending index order.
    pub fn neighbors(&self, v: VertexId) -> impl Iterator<Item = VertexId> + '_ {
        self.adjacency[v.0].iter().map(|&w| VertexId(w))
    }

    pub fn has_vertex(&self, v: VertexId) -> bool {
        v.0 < self.n()
    }

    /// Canonical edge for a pair of labels already present in the graph.
    pub fn edge_between(&self, a: &str, b: &str) -> Result<Edge, GraphError> {
        let a_id = self
            .vertex(a)
            .ok_or_else(|| GraphError::UnknownVertex(a.to_string()))?;
        let b_id = self
            .vertex(b)
            .ok_or_else(|| GraphError::UnknownVertex(b.to_string()))?;
        Edge::new(a_id, b_id).ok_or_else(|| GraphError::SelfLoop(a.to_string()))
    }

    /// Inserts the edge `{a, b}`, allocating indices for unseen labels.
    ///
    /// The graph is left untouched when an error is returned.
    pub fn add_edge(&mut self, a: &str, b: &str) -> Result<Edge, GraphError> {
        if a == b {
            return Err(GraphError::SelfLoop(a.to_string()));
        }
        if let (Some(x), Some(y)) = (self.vertex(a), self.vertex(b)) {
            let e = Edge::new(x, y).expect("distinct labels map to distinct indices");
            if self.contains_edge(&e) {
                return Err(GraphError::DuplicateEdge(a.to_string(), b.to_string()));
            }
        }
        let x = self.intern(a);
        let y = self.intern(b);
        let e = Edge::new(x, y).expect("distinct labels map to distinct indices");
        self.adjacency[x.0].insert(y.0);
        self.adjacency[y.0].insert(x.0);
        self.edge_index.insert(e, self.edges.len());
        self.edges.push(e);
        Ok(e)
    }

    fn intern(&mut self, label: &str) -> VertexId {
        if let Some(&id) = self.index.get(label) {
            return id;
        }
        let id = VertexId(self.labels.len());
        self.labels.push(label.to_string());
        self.index.insert(label.to_string(), id);
        self.adjacency.push(BTreeSet::new());
        id
    }

    pub fn degree(&self, v: VertexId) -> Result<usize, GraphError> {
        self.adjacency
            .get(v.0)
            .map(BTreeSet::len)
            .ok_or_else(|| GraphError::UnknownVertex(v.to_string()))
    }

    /// Number of edges of the graph that share an endpoint with `e`, not
    /// counting `e` itself. `e` need not belong to the graph.
    pub fn adjacent_edge_count(&self, e: &Edge) -> Result<usize, GraphError> {
        let du = self.degree(e.u)?;
        let dv = self.degree(e.v)?;
        // In a simple graph the only edge touching both endpoints is e itself.
        let own = if self.contains_edge(e) { 2 } else { 0 };
        Ok(du + dv - own)
    }

    /// Like [`Graph::adjacent_edge_count`] but for a prospective edge given by
    /// labels; a label the graph has not seen yet contributes no edges.
    pub fn adjacent_edge_count_between(&self, a: &str, b: &str) -> usize {
        let deg = |l: &str| self.vertex(l).map_or(0, |v| self.adjacency[v.0].len());
        let own = match (self.vertex(a), self.vertex(b)) {
            (Some(x), Some(y)) => Edge::new(x, y)
                .filter(|e| self.contains_edge(e))
                .map_or(0, |_| 2),
            _ => 0,
        };
        deg(a) + deg(b) - own
    }

    pub fn is_connected(&self) -> bool {
        if self.n() <= 1 {
            return true;
        }
        self.bfs_distances(VertexId(0)).iter().all(Option::is_some)
    }

    /// Breadth-first hop counts from `source`; `None` marks unreachable vertices.
    pub fn bfs_distances(&self, source: VertexId) -> Vec<Option<usize>> {
        let mut dist = vec![None; self.n()];
        let mut queue = VecDeque::new();
        dist[source.0] = Some(0);
        queue.push_back(source.0);
        while let Some(x) = queue.pop_front() {
            let d = dist[x].unwrap();
            for &y in &self.adjacency[x] {
                if dist[y].is_none() {
                    dist[y] = Some(d + 1);
                    queue.push_back(y);
                }
            }
        }
        dist
    }

    /// Longest shortest-path distance over all vertex pairs.
    pub fn diameter(&self) -> Result<usize, GraphError> {
        let mut best = 0;
        for s in self.vertices() {
            for d in self.bfs_distances(s) {
                best = best.max(d.ok_or(GraphError::Disconnected)?);
            }
        }
        Ok(best)
    }

    /// Labelled edge list in insertion order, canonical orientation.
    pub fn labelled_edges(&self) -> Vec<(String, String)> {
        self.edges
            .iter()
            .map(|e| (self.label(e.u).to_string(), self.label(e.v).to_string()))
            .collect()
    }

    /// True when the graph has no cycle (assumes connectivity is checked separately).
    pub fn is_forest(&self) -> bool {
        let mut parent: Vec<usize> = (0..self.n()).collect();
        fn find(p: &mut [usize], x: usize) -> usize {
            let mut r = x;
            while p[r] != r {
                r = p[r];
            }
            let mut y = x;
            while p[y] != r {
                let next = p[y];
                p[y] = r;
                y = next;
            }
            r
        }
        for e in &self.edges {
            let (a, b) = (find(&mut parent, e.u.0), find(&mut parent, e.v.0));
            if a == b {
                return false;
            }
            parent[a] = b;
        }
        true
    }
}
