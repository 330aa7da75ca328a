//! Rainbow-connectivity checks and the exact rainbow connection number.
//!
//! Rainbow paths are searched over states `(vertex, set of colors used so far)`
//! with the color set held in a `u64` mask, so at most 64 distinct colors are
//! supported. [`rc_exact`] is an exponential backtracking search and is only
//! meant for small graphs; see [`SearchBudget`].

use std::collections::{HashMap, HashSet, VecDeque};
use std::time::{Duration, Instant};

use thiserror::Error;

use crate::coloring::{ColorId, Coloring, ColoringError};
use crate::generators::FamilyTag;
use crate::graph::{Graph, GraphError, VertexId};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum OracleError {
    #[error("incomplete coloring: {0}")]
    IncompleteColoring(#[from] ColoringError),
    #[error("coloring uses {0} distinct colors, at most 64 are supported")]
    TooManyColors(usize),
    #[error("unknown vertex {0}")]
    UnknownVertex(VertexId),
    #[error("graph is disconnected")]
    Disconnected,
    #[error("graph has no edges")]
    EmptyGraph,
    #[error("search budget exceeded: {0}")]
    BudgetExceeded(String),
}

impl From<GraphError> for OracleError {
    fn from(e: GraphError) -> Self {
        match e {
            GraphError::Disconnected => OracleError::Disconnected,
            other => OracleError::IncompleteColoring(other.into()),
        }
    }
}

/// Limits for [`rc_exact`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SearchBudget {
    pub max_edges: usize,
    pub max_time: Option<Duration>,
}

impl Default for SearchBudget {
    fn default() -> Self {
        SearchBudget {
            max_edges: 16,
            max_time: Some(Duration::from_secs(300)),
        }
    }
}

impl SearchBudget {
    pub fn with_max_edges(mut self, max_edges: usize) -> Self {
        self.max_edges = max_edges;
        self
    }

    pub fn with_max_time(mut self, max_time: Option<Duration>) -> Self {
        self.max_time = max_time;
        self
    }
}

/// Minimal color count together with the first coloring found that achieves it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RcResult {
    pub rc: usize,
    pub witness: Coloring,
}

/// Per-vertex `(neighbor, edge color bit)` lists in ascending neighbor order.
/// `None` marks an edge without a color yet.
struct ColoredAdjacency {
    adj: Vec<Vec<(usize, Option<u8>)>>,
}

impl ColoredAdjacency {
    fn new(g: &Graph, colors: &[Option<u8>]) -> Self {
        let mut adj = vec![Vec::new(); g.n()];
        for (e, c) in g.edges().iter().zip(colors) {
            adj[e.u().index()].push((e.v().index(), *c));
            adj[e.v().index()].push((e.u().index(), *c));
        }
        for list in &mut adj {
            list.sort_by_key(|(w, _)| *w);
        }
        ColoredAdjacency { adj }
    }

    /// Breadth-first search over `(vertex, used-color mask)` from `source`.
    /// Uncolored edges may be taken freely but count towards `max_len`.
    /// Returns which vertices are reachable by some admissible path.
    fn reachable(&self, source: usize, max_len: usize, stop_when_all: bool) -> Vec<bool> {
        let n = self.adj.len();
        let mut reached = vec![false; n];
        reached[source] = true;
        let mut remaining = n - 1;
        let mut seen: HashSet<(usize, u64)> = HashSet::new();
        let mut frontier = vec![(source, 0u64)];
        seen.insert((source, 0));
        let mut len = 0;
        while !frontier.is_empty() && len < max_len {
            len += 1;
            let mut next = Vec::new();
            for &(x, mask) in &frontier {
                for &(y, c) in &self.adj[x] {
                    let m2 = match c {
                        Some(bit) if mask & (1 << bit) != 0 => continue,
                        Some(bit) => mask | (1 << bit),
                        None => mask,
                    };
                    if seen.insert((y, m2)) {
                        if !reached[y] {
                            reached[y] = true;
                            remaining -= 1;
                        }
                        next.push((y, m2));
                    }
                }
            }
            if stop_when_all && remaining == 0 {
                break;
            }
            frontier = next;
        }
        reached
    }
}

/// Maps arbitrary color ordinals onto bits `0..k` in ascending ordinal order.
fn dense_colors(g: &Graph, coloring: &Coloring) -> Result<Vec<Option<u8>>, OracleError> {
    let colors = coloring.edge_colors(g)?;
    let mut distinct: Vec<ColorId> = colors.clone();
    distinct.sort();
    distinct.dedup();
    if distinct.len() > 64 {
        return Err(OracleError::TooManyColors(distinct.len()));
    }
    let bit: HashMap<ColorId, u8> = distinct
        .iter()
        .enumerate()
        .map(|(i, c)| (*c, i as u8))
        .collect();
    Ok(colors.iter().map(|c| Some(bit[c])).collect())
}

/// First unordered pair `(s, t)`, `s < t` in index order, joined by no rainbow path.
pub fn first_failing_pair(
    g: &Graph,
    coloring: &Coloring,
) -> Result<Option<(VertexId, VertexId)>, OracleError> {
    let colors = dense_colors(g, coloring)?;
    let adj = ColoredAdjacency::new(g, &colors);
    for s in 0..g.n() {
        let reached = adj.reachable(s, usize::MAX, true);
        if let Some(t) = (s + 1..g.n()).find(|&t| !reached[t]) {
            return Ok(Some((VertexId(s), VertexId(t))));
        }
    }
    Ok(None)
}

/// True iff every pair of vertices is joined by a path with pairwise distinct
/// edge colors.
pub fn is_rainbow_connected(g: &Graph, coloring: &Coloring) -> Result<bool, OracleError> {
    first_failing_pair(g, coloring).map(|p| p.is_none())
}

/// A shortest rainbow path from `u` to `v`, as a vertex sequence.
pub fn rainbow_witness(
    g: &Graph,
    coloring: &Coloring,
    u: VertexId,
    v: VertexId,
) -> Result<Option<Vec<VertexId>>, OracleError> {
    for x in [u, v] {
        if !g.has_vertex(x) {
            return Err(OracleError::UnknownVertex(x));
        }
    }
    let colors = dense_colors(g, coloring)?;
    let adj = ColoredAdjacency::new(g, &colors);
    let mut parent: HashMap<(usize, u64), (usize, u64)> = HashMap::new();
    let mut queue = VecDeque::from([(u.index(), 0u64)]);
    parent.insert((u.index(), 0), (usize::MAX, 0));
    while let Some((x, mask)) = queue.pop_front() {
        if x == v.index() {
            let mut path = vec![VertexId(x)];
            let mut state = (x, mask);
            while let Some(&(px, pm)) = parent.get(&state) {
                if px == usize::MAX {
                    break;
                }
                path.push(VertexId(px));
                state = (px, pm);
            }
            path.reverse();
            return Ok(Some(path));
        }
        for &(y, c) in &adj.adj[x] {
            let bit = 1u64 << c.expect("fully colored");
            if mask & bit != 0 {
                continue;
            }
            let next = (y, mask | bit);
            if let std::collections::hash_map::Entry::Vacant(slot) = parent.entry(next) {
                slot.insert((x, mask));
                queue.push_back(next);
            }
        }
    }
    Ok(None)
}

struct Search<'a> {
    g: &'a Graph,
    k: usize,
    colors: Vec<Option<u8>>,
    started: Instant,
    budget: SearchBudget,
    nodes: u64,
}

impl Search<'_> {
    /// Necessary condition for some completion of the current partial
    /// coloring to be rainbow connected: every pair is joined by a path of at
    /// most `k` edges whose colored edges are pairwise distinct. Exact once
    /// every edge is colored.
    fn completable(&self) -> bool {
        let adj = ColoredAdjacency::new(self.g, &self.colors);
        (0..self.g.n()).all(|s| {
            let reached = adj.reachable(s, self.k, true);
            reached[s + 1..].iter().all(|&r| r)
        })
    }

    fn check_clock(&mut self) -> Result<(), OracleError> {
        self.nodes += 1;
        if self.nodes.is_multiple_of(1024) {
            if let Some(limit) = self.budget.max_time {
                if self.started.elapsed() > limit {
                    return Err(OracleError::BudgetExceeded(format!(
                        "time limit of {:.1}s reached at k = {}",
                        limit.as_secs_f64(),
                        self.k
                    )));
                }
            }
        }
        Ok(())
    }

    /// Colors edges `pos..` with ordinals `0..k`, where ordinal `j` may only
    /// appear once `0..j` have all been used on earlier edges.
    fn extend(&mut self, pos: usize, used: usize) -> Result<bool, OracleError> {
        self.check_clock()?;
        if !self.completable() {
            return Ok(false);
        }
        if pos == self.colors.len() {
            return Ok(true);
        }
        let limit = (used + 1).min(self.k);
        for c in 0..limit {
            self.colors[pos] = Some(c as u8);
            if self.extend(pos + 1, used.max(c + 1))? {
                return Ok(true);
            }
        }
        self.colors[pos] = None;
        Ok(false)
    }
}

fn check_size(g: &Graph, budget: &SearchBudget) -> Result<(), OracleError> {
    if g.is_empty() {
        return Err(OracleError::EmptyGraph);
    }
    if g.m() > budget.max_edges {
        return Err(OracleError::BudgetExceeded(format!(
            "{} edges, limit is {}",
            g.m(),
            budget.max_edges
        )));
    }
    Ok(())
}

fn search_k(
    g: &Graph,
    k: usize,
    started: Instant,
    budget: SearchBudget,
) -> Result<Option<Coloring>, OracleError> {
    if k > 64 {
        return Err(OracleError::BudgetExceeded(format!(
            "{k} colors exceed the 64-color mask"
        )));
    }
    let mut search = Search {
        g,
        k,
        colors: vec![None; g.m()],
        started,
        budget,
        nodes: 0,
    };
    if !search.extend(0, 0)? {
        return Ok(None);
    }
    let colors: Vec<ColorId> = search
        .colors
        .iter()
        .map(|c| ColorId(c.unwrap() as u32 + 1))
        .collect();
    Ok(Some(Coloring::from_edge_colors(g, &colors)))
}

/// Decides whether `g` has a rainbow coloring with at most `k` colors and
/// returns the first one in search order.
pub fn rainbow_colorable(
    g: &Graph,
    k: usize,
    budget: SearchBudget,
) -> Result<Option<Coloring>, OracleError> {
    check_size(g, &budget)?;
    if !g.is_connected() {
        return Err(OracleError::Disconnected);
    }
    if k == 0 {
        return Ok(None);
    }
    search_k(g, k, Instant::now(), budget)
}

/// Exact rainbow connection number by backtracking over colorings, trying
/// `k = max(1, diam(g))` upwards.
pub fn rc_exact(g: &Graph, budget: SearchBudget) -> Result<RcResult, OracleError> {
    check_size(g, &budget)?;
    let diam = g.diameter()?;
    let started = Instant::now();
    for k in diam.max(1)..=g.m() {
        if let Some(witness) = search_k(g, k, started, budget)? {
            return Ok(RcResult { rc: k, witness });
        }
    }
    unreachable!("m distinct colors always rainbow-connect a connected graph")
}

/// Rainbow connection numbers known in closed form, where the family's
/// parameters are inside the range the formula is claimed for.
///
/// Complete bipartite graphs `K_{p,q}` with `2 <= p <= q` have rc 2 exactly
/// when `q <= 2^p`; larger `q` has no closed form here.
pub fn rc_closed_form(family: &FamilyTag) -> Option<usize> {
    match *family {
        FamilyTag::Path { n } if n >= 2 => Some(n - 1),
        FamilyTag::Tree { n, .. } if n >= 2 => Some(n - 1),
        FamilyTag::Star { n } if n >= 2 => Some(n - 1),
        FamilyTag::Cycle { n } if n >= 4 => Some(n.div_ceil(2)),
        FamilyTag::Wheel { n } if n >= 8 => Some(3),
        FamilyTag::Complete { n } if n >= 2 => Some(1),
        FamilyTag::CompleteBipartite { p, q } => {
            let (s, t) = (p.min(q), p.max(q));
            (s >= 2 && (s >= 63 || t <= 1usize << s)).then_some(2)
        }
        _ => None,
    }
}
