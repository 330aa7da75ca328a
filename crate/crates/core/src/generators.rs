//! Graph families, arrival orders and edge-list streams.
//!
//! Family graphs use the labels `1..=n`. Wheels put the hub at `1` and the rim
//! on `2..=n`; complete bipartite graphs put the left side on `1..=p` and the
//! right side on `p+1..=p+q`.

use std::fmt;
use std::io::BufRead;
use std::path::Path;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{Graph, GraphError, VertexId};

#[derive(Debug, Error)]
pub enum GenError {
    #[error("bad parameters: {0}")]
    BadParameters(String),
    #[error("graph is disconnected")]
    Disconnected,
}

#[derive(Debug, Error)]
pub enum StreamError {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("line {line}: self-loop on vertex {label}")]
    SelfLoop { line: usize, label: String },
    #[error("line {line}: duplicate edge ({u}, {v})")]
    DuplicateEdge { line: usize, u: String, v: String },
    #[error("line {line}: edge ({u}, {v}) does not touch the earlier edges")]
    DisconnectedPrefix { line: usize, u: String, v: String },
    #[error("empty edge stream")]
    Empty,
    #[error("{0}")]
    Io(#[from] std::io::Error),
}

impl StreamError {
    pub fn line(&self) -> Option<usize> {
        match self {
            StreamError::Parse { line, .. }
            | StreamError::SelfLoop { line, .. }
            | StreamError::DuplicateEdge { line, .. }
            | StreamError::DisconnectedPrefix { line, .. } => Some(*line),
            StreamError::Empty | StreamError::Io(_) => None,
        }
    }
}

/// A graph family with its parameters.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum FamilyTag {
    Path {
        n: usize,
    },
    /// Random tree built by sequential attachment, see [`make_random_tree`].
    Tree {
        n: usize,
        seed: u64,
    },
    Star {
        n: usize,
    },
    Cycle {
        n: usize,
    },
    Wheel {
        n: usize,
    },
    Complete {
        n: usize,
    },
    CompleteBipartite {
        p: usize,
        q: usize,
    },
}

impl FamilyTag {
    pub fn name(&self) -> &'static str {
        match self {
            FamilyTag::Path { .. } => "path",
            FamilyTag::Tree { .. } => "tree",
            FamilyTag::Star { .. } => "star",
            FamilyTag::Cycle { .. } => "cycle",
            FamilyTag::Wheel { .. } => "wheel",
            FamilyTag::Complete { .. } => "complete",
            FamilyTag::CompleteBipartite { .. } => "complete_bipartite",
        }
    }

    /// Total number of vertices.
    pub fn n(&self) -> usize {
        match *self {
            FamilyTag::Path { n }
            | FamilyTag::Tree { n, .. }
            | FamilyTag::Star { n }
            | FamilyTag::Cycle { n }
            | FamilyTag::Wheel { n }
            | FamilyTag::Complete { n } => n,
            FamilyTag::CompleteBipartite { p, q } => p + q,
        }
    }

    /// Parameters other than `n`, rendered as `key=value` pairs joined by `;`.
    pub fn params(&self) -> String {
        match self {
            FamilyTag::Tree { seed, .. } => format!("tree_seed={seed}"),
            FamilyTag::CompleteBipartite { p, q } => format!("p={p};q={q}"),
            _ => String::new(),
        }
    }

    /// Builds a tag from a family name and the CLI-style parameters.
    pub fn parse(
        name: &str,
        n: Option<usize>,
        p: Option<usize>,
        q: Option<usize>,
        seed: u64,
    ) -> Result<Self, GenError> {
        let need_n = || n.ok_or_else(|| GenError::BadParameters(format!("{name} needs n")));
        let tag = match name {
            "path" | "line" => FamilyTag::Path { n: need_n()? },
            "tree" => FamilyTag::Tree { n: need_n()?, seed },
            "star" => FamilyTag::Star { n: need_n()? },
            "cycle" => FamilyTag::Cycle { n: need_n()? },
            "wheel" => FamilyTag::Wheel { n: need_n()? },
            "complete" => FamilyTag::Complete { n: need_n()? },
            "complete_bipartite" | "bipartite" => {
                let (Some(p), Some(q)) = (p, q) else {
                    return Err(GenError::BadParameters(format!("{name} needs p and q")));
                };
                FamilyTag::CompleteBipartite { p, q }
            }
            other => return Err(GenError::BadParameters(format!("unknown family {other}"))),
        };
        tag.validate()?;
        Ok(tag)
    }

    pub fn validate(&self) -> Result<(), GenError> {
        let (ok, rule) = match *self {
            FamilyTag::Path { n } => (n >= 2, "path needs n >= 2"),
            FamilyTag::Tree { n, .. } => (n >= 2, "tree needs n >= 2"),
            FamilyTag::Star { n } => (n >= 2, "star needs n >= 2"),
            FamilyTag::Cycle { n } => (n >= 3, "cycle needs n >= 3"),
            FamilyTag::Wheel { n } => (n >= 4, "wheel needs n >= 4"),
            FamilyTag::Complete { n } => (n >= 2, "complete needs n >= 2"),
            FamilyTag::CompleteBipartite { p, q } => {
                (p >= 1 && q >= 1, "complete_bipartite needs p, q >= 1")
            }
        };
        if ok {
            Ok(())
        } else {
            Err(GenError::BadParameters(format!("{rule}, got {self}")))
        }
    }
}

impl fmt::Display for FamilyTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FamilyTag::CompleteBipartite { p, q } => write!(f, "complete_bipartite(p={p}, q={q})"),
            FamilyTag::Tree { n, seed } => write!(f, "tree(n={n}, seed={seed})"),
            other => write!(f, "{}(n={})", other.name(), other.n()),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OrderStrategy {
    Natural,
    Adversarial,
    Random,
    File,
}

impl OrderStrategy {
    pub fn name(&self) -> &'static str {
        match self {
            OrderStrategy::Natural => "natural",
            OrderStrategy::Adversarial => "adversarial",
            OrderStrategy::Random => "random",
            OrderStrategy::File => "file",
        }
    }

    pub fn parse(s: &str) -> Result<Self, GenError> {
        match s {
            "natural" => Ok(OrderStrategy::Natural),
            "adversarial" => Ok(OrderStrategy::Adversarial),
            "random" => Ok(OrderStrategy::Random),
            other => Err(GenError::BadParameters(format!("unknown order {other}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Provenance {
    pub family: Option<FamilyTag>,
    pub order: OrderStrategy,
    pub seed: Option<u64>,
}

/// Edge arrival sequence in which every prefix induces a connected simple graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EdgeStream {
    edges: Vec<(String, String)>,
    provenance: Provenance,
}

impl EdgeStream {
    /// Validates `edges` as a stream; line numbers in errors are 1-based positions.
    pub fn new(edges: Vec<(String, String)>, provenance: Provenance) -> Result<Self, StreamError> {
        let lines: Vec<usize> = (1..=edges.len()).collect();
        validate_stream(&edges, &lines)?;
        Ok(EdgeStream { edges, provenance })
    }

    pub fn edges(&self) -> &[(String, String)] {
        &self.edges
    }

    pub fn provenance(&self) -> &Provenance {
        &self.provenance
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    /// The graph formed by the whole stream, edges in arrival order.
    pub fn graph(&self) -> Graph {
        Graph::from_pairs(self.edges.iter().map(|(a, b)| (a.as_str(), b.as_str())))
            .expect("stream was validated")
    }

    /// Edge-list text: one `u v` pair per line.
    pub fn to_edge_list(&self) -> String {
        let mut out = String::new();
        for (a, b) in &self.edges {
            out.push_str(a);
            out.push(' ');
            out.push_str(b);
            out.push('\n');
        }
        out
    }
}

fn validate_stream(edges: &[(String, String)], lines: &[usize]) -> Result<(), StreamError> {
    let mut g = Graph::new();
    for ((a, b), &line) in edges.iter().zip(lines) {
        if !g.is_empty() && g.vertex(a).is_none() && g.vertex(b).is_none() {
            return Err(StreamError::DisconnectedPrefix {
                line,
                u: a.clone(),
                v: b.clone(),
            });
        }
        g.add_edge(a, b).map_err(|e| match e {
            GraphError::SelfLoop(label) => StreamError::SelfLoop { line, label },
            GraphError::DuplicateEdge(u, v) => StreamError::DuplicateEdge { line, u, v },
            other => StreamError::Parse {
                line,
                message: other.to_string(),
            },
        })?;
    }
    Ok(())
}

/// Parses one line of the edge-list format. Blank lines and `#` comments yield `None`.
pub fn parse_edge_line(text: &str, line: usize) -> Option<Result<(String, String), StreamError>> {
    let trimmed = text.trim();
    if trimmed.is_empty() || trimmed.starts_with('#') {
        return None;
    }
    let mut tokens = trimmed.split_whitespace();
    let parsed = match (tokens.next(), tokens.next(), tokens.next()) {
        (Some(a), Some(b), None) => Ok((a.to_string(), b.to_string())),
        _ => Err(StreamError::Parse {
            line,
            message: format!("expected two vertex labels, got {trimmed:?}"),
        }),
    };
    Some(parsed)
}

/// Reads and validates an edge list; file order is arrival order.
pub fn stream_from_reader<R: BufRead>(reader: R) -> Result<EdgeStream, StreamError> {
    let mut edges = Vec::new();
    let mut lines = Vec::new();
    for (i, text) in reader.lines().enumerate() {
        let text = text?;
        if let Some(pair) = parse_edge_line(&text, i + 1) {
            edges.push(pair?);
            lines.push(i + 1);
        }
    }
    validate_stream(&edges, &lines)?;
    if edges.is_empty() {
        return Err(StreamError::Empty);
    }
    Ok(EdgeStream {
        edges,
        provenance: Provenance {
            family: None,
            order: OrderStrategy::File,
            seed: None,
        },
    })
}

pub fn stream_from_file(path: impl AsRef<Path>) -> Result<EdgeStream, StreamError> {
    let file = std::fs::File::open(path)?;
    stream_from_reader(std::io::BufReader::new(file))
}

fn pairs_to_labels(pairs: &[(usize, usize)]) -> Vec<(String, String)> {
    pairs
        .iter()
        .map(|(a, b)| (a.to_string(), b.to_string()))
        .collect()
}

/// Tree on `1..=n` where vertex `i + 1` attaches to a uniform pick among `1..=i`.
fn random_tree_pairs(n: usize, seed: u64) -> Vec<(usize, usize)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (2..=n).map(|v| (rng.gen_range(1..v), v)).collect()
}

/// Edges of a family in their natural order, oriented as generated.
fn natural_pairs(family: &FamilyTag) -> Vec<(usize, usize)> {
    match *family {
        FamilyTag::Path { n } => (1..n).map(|i| (i, i + 1)).collect(),
        FamilyTag::Tree { n, seed } => random_tree_pairs(n, seed),
        FamilyTag::Star { n } => (2..=n).map(|i| (1, i)).collect(),
        FamilyTag::Cycle { n } => {
            let mut pairs: Vec<_> = (1..n).map(|i| (i, i + 1)).collect();
            pairs.push((n, 1));
            pairs
        }
        FamilyTag::Wheel { n } => {
            let mut pairs: Vec<_> = (2..=n).map(|i| (1, i)).collect();
            pairs.extend((2..n).map(|i| (i, i + 1)));
            pairs.push((n, 2));
            pairs
        }
        FamilyTag::Complete { n } => (1..=n)
            .flat_map(|i| (i + 1..=n).map(move |j| (i, j)))
            .collect(),
        FamilyTag::CompleteBipartite { p, q } => (1..=p)
            .flat_map(|i| (p + 1..=p + q).map(move |j| (i, j)))
            .collect(),
    }
}

pub fn make_graph(family: &FamilyTag) -> Result<Graph, GenError> {
    family.validate()?;
    Ok(
        Graph::from_pairs(pairs_to_labels(&natural_pairs(family)))
            .expect("family edges are simple"),
    )
}

pub fn make_random_tree(n: usize, seed: u64) -> Result<Graph, GenError> {
    make_graph(&FamilyTag::Tree { n, seed })
}

/// Random connected graph on `1..=n`: a random tree plus up to `extra` further
/// edges drawn uniformly from the absent pairs.
pub fn make_random_connected(n: usize, extra: usize, seed: u64) -> Result<Graph, GenError> {
    if n < 2 {
        return Err(GenError::BadParameters(format!(
            "random graph needs n >= 2, got {n}"
        )));
    }
    let mut g = make_random_tree(n, seed)?;
    let mut absent: Vec<(usize, usize)> = (1..=n)
        .flat_map(|i| (i + 1..=n).map(move |j| (i, j)))
        .filter(|(i, j)| {
            let e = g.edge_between(&i.to_string(), &j.to_string()).unwrap();
            !g.contains_edge(&e)
        })
        .collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x9E37_79B9_7F4A_7C15);
    absent.shuffle(&mut rng);
    for (i, j) in absent.into_iter().take(extra) {
        g.add_edge(&i.to_string(), &j.to_string()).unwrap();
    }
    Ok(g)
}

/// The family's edges in generation order.
pub fn order_natural(family: &FamilyTag) -> Result<EdgeStream, GenError> {
    family.validate()?;
    let seed = match family {
        FamilyTag::Tree { seed, .. } => Some(*seed),
        _ => None,
    };
    Ok(EdgeStream::new(
        pairs_to_labels(&natural_pairs(family)),
        Provenance {
            family: Some(*family),
            order: OrderStrategy::Natural,
            seed,
        },
    )
    .expect("natural orders keep prefixes connected"))
}

/// Worst-case arrival orders: cycles and complete graphs open with the
/// Hamiltonian path `1-2-..-n`, wheels with all spokes. The complete graph's
/// remaining edges follow in lexicographic order; trees arrive in depth-first
/// discovery order from vertex `1`.
pub fn order_adversarial(family: &FamilyTag) -> Result<EdgeStream, GenError> {
    family.validate()?;
    let pairs = match *family {
        FamilyTag::Path { .. }
        | FamilyTag::Star { .. }
        | FamilyTag::Cycle { .. }
        | FamilyTag::Wheel { .. } => natural_pairs(family),
        FamilyTag::Complete { n } => {
            let mut pairs: Vec<_> = (1..n).map(|i| (i, i + 1)).collect();
            pairs.extend((1..=n).flat_map(|i| (i + 2..=n).map(move |j| (i, j))));
            pairs
        }
        FamilyTag::Tree { .. } => {
            let g = make_graph(family)?;
            let mut seen = vec![false; g.n()];
            let mut pairs = Vec::new();
            let mut stack = vec![(VertexId(0), g.neighbors(VertexId(0)).collect::<Vec<_>>(), 0)];
            seen[0] = true;
            while let Some((v, nbrs, next)) = stack.last_mut() {
                if let Some(&w) = nbrs.get(*next) {
                    *next += 1;
                    if !seen[w.index()] {
                        seen[w.index()] = true;
                        pairs.push((g.label(*v).to_string(), g.label(w).to_string()));
                        let wn = g.neighbors(w).collect();
                        stack.push((w, wn, 0));
                    }
                } else {
                    stack.pop();
                }
            }
            let seed = match family {
                FamilyTag::Tree { seed, .. } => Some(*seed),
                _ => None,
            };
            return Ok(EdgeStream::new(
                pairs,
                Provenance {
                    family: Some(*family),
                    order: OrderStrategy::Adversarial,
                    seed,
                },
            )
            .expect("depth-first discovery keeps prefixes connected"));
        }
        FamilyTag::CompleteBipartite { .. } => {
            return Err(GenError::BadParameters(format!(
                "no adversarial order for {family}"
            )))
        }
    };
    Ok(EdgeStream::new(
        pairs_to_labels(&pairs),
        Provenance {
            family: Some(*family),
            order: OrderStrategy::Adversarial,
            seed: None,
        },
    )
    .expect("adversarial orders keep prefixes connected"))
}

/// Seeded connectivity-preserving permutation of `g`'s edges: the first edge
/// is uniform over all edges, each later one uniform over the unplaced edges
/// touching an already placed vertex.
pub fn order_random_connected(g: &Graph, seed: u64) -> Result<EdgeStream, GenError> {
    if !g.is_connected() {
        return Err(GenError::Disconnected);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut placed = vec![false; g.n()];
    let mut remaining: Vec<_> = g.edges().to_vec();
    let mut order = Vec::with_capacity(g.m());
    while !remaining.is_empty() {
        let frontier: Vec<usize> = if order.is_empty() {
            (0..remaining.len()).collect()
        } else {
            (0..remaining.len())
                .filter(|&i| placed[remaining[i].u().index()] || placed[remaining[i].v().index()])
                .collect()
        };
        let pick = frontier[rng.gen_range(0..frontier.len())];
        let e = remaining.remove(pick);
        placed[e.u().index()] = true;
        placed[e.v().index()] = true;
        order.push((g.label(e.u()).to_string(), g.label(e.v()).to_string()));
    }
    Ok(EdgeStream::new(
        order,
        Provenance {
            family: None,
            order: OrderStrategy::Random,
            seed: Some(seed),
        },
    )
    .expect("frontier draws keep prefixes connected"))
}

/// Random order of a family graph, tagged with the family.
pub fn order_random_family(family: &FamilyTag, seed: u64) -> Result<EdgeStream, GenError> {
    let g = make_graph(family)?;
    let s = order_random_connected(&g, seed)?;
    Ok(EdgeStream {
        edges: s.edges,
        provenance: Provenance {
            family: Some(*family),
            order: OrderStrategy::Random,
            seed: Some(seed),
        },
    })
}

pub fn order_for(
    family: &FamilyTag,
    order: OrderStrategy,
    seed: u64,
) -> Result<EdgeStream, GenError> {
    match order {
        OrderStrategy::Natural => order_natural(family),
        OrderStrategy::Adversarial => order_adversarial(family),
        OrderStrategy::Random => order_random_family(family, seed),
        OrderStrategy::File => Err(GenError::BadParameters(
            "file order cannot be generated".into(),
        )),
    }
}
