//! Least Recently Used Color (LRUC) online rainbow colorer.
//!
//! Edges arrive one at a time and every prefix of the stream must be connected.
//! Each edge is colored on arrival and the choice is never revisited:
//!
//! 1. the first edge gets `c_1`;
//! 2. an edge touching exactly one earlier edge gets a fresh color;
//! 3. an edge touching two or more earlier edges with an endpoint of degree 1
//!    (after insertion) gets a fresh color;
//! 4. any other edge gets the least recently used color.
//!
//! Every assignment, fresh or reused, counts as a use of that color.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::coloring::{ColorId, Coloring};
use crate::graph::{Edge, Graph, GraphError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LrucError {
    #[error("self-loop on vertex {0}")]
    SelfLoop(String),
    #[error("duplicate edge ({0}, {1})")]
    DuplicateEdge(String, String),
    #[error("edge ({0}, {1}) does not touch the graph seen so far")]
    DisconnectedPrefix(String, String),
    #[error("no edges observed")]
    EmptyStream,
}

impl From<GraphError> for LrucError {
    fn from(e: GraphError) -> Self {
        match e {
            GraphError::SelfLoop(v) => LrucError::SelfLoop(v),
            GraphError::DuplicateEdge(a, b) => LrucError::DuplicateEdge(a, b),
            other => unreachable!("graph insertion cannot fail with {other:?}"),
        }
    }
}

/// Which branch of the case ladder colored an edge.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CaseTag {
    FirstEdge,
    FreshAdjOne,
    FreshPendant,
    ReuseLru,
}

impl CaseTag {
    pub fn allocates(self) -> bool {
        !matches!(self, CaseTag::ReuseLru)
    }
}

/// Allocated colors ordered by last use, oldest first.
///
/// Every use is stamped with a fresh tick of a logical clock, so two colors
/// never share a position.
#[derive(Debug, Clone, Default)]
pub struct RecencyQueue {
    by_tick: BTreeMap<u64, ColorId>,
    last_tick: Vec<u64>,
    clock: u64,
}

impl RecencyQueue {
    pub fn len(&self) -> usize {
        self.by_tick.len()
    }

    pub fn is_empty(&self) -> bool {
        self.by_tick.is_empty()
    }

    /// Least recently used color.
    pub fn front(&self) -> Option<ColorId> {
        self.by_tick.values().next().copied()
    }

    /// Marks `color` as just used, inserting it if it is new. New colors must
    /// be allocated in ordinal order.
    pub fn touch(&mut self, color: ColorId) {
        let slot = color.0 as usize - 1;
        if slot == self.last_tick.len() {
            self.last_tick.push(self.clock);
        } else {
            let old = self.last_tick[slot];
            self.by_tick.remove(&old);
            self.last_tick[slot] = self.clock;
        }
        self.by_tick.insert(self.clock, color);
        self.clock += 1;
    }

    /// Colors from least to most recently used.
    pub fn iter(&self) -> impl Iterator<Item = ColorId> + '_ {
        self.by_tick.values().copied()
    }
}

/// One colored arrival.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Step {
    pub edge: Edge,
    pub color: ColorId,
    pub case: CaseTag,
}

#[derive(Debug, Clone, Default)]
pub struct LrucState {
    partial: Graph,
    assignments: Vec<(Edge, ColorId)>,
    queue: RecencyQueue,
    next_ordinal: u32,
}

impl LrucState {
    pub fn new() -> Self {
        LrucState {
            next_ordinal: 1,
            ..Default::default()
        }
    }

    pub fn graph(&self) -> &Graph {
        &self.partial
    }

    pub fn queue(&self) -> &RecencyQueue {
        &self.queue
    }

    pub fn colors_used(&self) -> usize {
        (self.next_ordinal - 1) as usize
    }

    pub fn edges_seen(&self) -> usize {
        self.assignments.len()
    }

    /// Colors the next arriving edge `{a, b}`.
    ///
    /// On error the state is unchanged.
    pub fn observe_edge(&mut self, a: &str, b: &str) -> Result<Step, LrucError> {
        if a == b {
            return Err(LrucError::SelfLoop(a.to_string()));
        }
        let first = self.partial.is_empty();
        if !first && self.partial.vertex(a).is_none() && self.partial.vertex(b).is_none() {
            return Err(LrucError::DisconnectedPrefix(a.to_string(), b.to_string()));
        }
        let adjacent = self.partial.adjacent_edge_count_between(a, b);
        let both_known = self.partial.vertex(a).is_some() && self.partial.vertex(b).is_some();
        let edge = self.partial.add_edge(a, b)?;

        let case = if first {
            CaseTag::FirstEdge
        } else if adjacent == 1 {
            // Two known endpoints would each bring an edge, and a single shared
            // edge would be this one again.
            debug_assert!(
                !both_known,
                "adjacent-to-one case on an edge between known vertices"
            );
            CaseTag::FreshAdjOne
        } else {
            let du = self.partial.degree(edge.u())?;
            let dv = self.partial.degree(edge.v())?;
            if du.min(dv) == 1 {
                CaseTag::FreshPendant
            } else {
                CaseTag::ReuseLru
            }
        };

        let color = if case.allocates() {
            let c = ColorId(self.next_ordinal);
            self.next_ordinal += 1;
            c
        } else {
            self.queue
                .front()
                .expect("a non-first edge always has colors to reuse")
        };
        self.queue.touch(color);
        self.assignments.push((edge, color));
        Ok(Step { edge, color, case })
    }

    /// The coloring of everything observed so far.
    pub fn finish(&self) -> Result<Coloring, LrucError> {
        if self.assignments.is_empty() {
            return Err(LrucError::EmptyStream);
        }
        Ok(Coloring::new(self.assignments.clone()))
    }
}

/// Runs LRUC over a whole stream of labelled pairs.
pub fn color_stream<I, S>(pairs: I) -> Result<(LrucState, Vec<Step>), LrucError>
where
    I: IntoIterator<Item = (S, S)>,
    S: AsRef<str>,
{
    let mut state = LrucState::new();
    let mut steps = Vec::new();
    for (a, b) in pairs {
        steps.push(state.observe_edge(a.as_ref(), b.as_ref())?);
    }
    Ok((state, steps))
}

/// JSON-lines trace record for one edge.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceRecord {
    pub u: String,
    pub v: String,
    pub color: ColorId,
    pub case: CaseTag,
}

/// Final line of a trace.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceFooter {
    pub colors_used: usize,
}
