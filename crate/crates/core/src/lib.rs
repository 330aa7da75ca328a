//! Online rainbow edge coloring.
//!
//! * [`lruc`]: the Least Recently Used Color online colorer.
//! * [`oracle`]: rainbow-connectivity checks and the exact rainbow connection number.
//! * [`generators`]: graph families, arrival orders and edge-list streams.
//! * [`harness`]: competitive-ratio experiments.

pub mod cli;
pub mod coloring;
pub mod generators;
pub mod graph;
pub mod harness;
pub mod lruc;
pub mod oracle;

pub use coloring::{ColorId, Coloring};
pub use generators::{EdgeStream, FamilyTag, OrderStrategy};
pub use graph::{Edge, Graph, VertexId};
pub use lruc::{CaseTag, LrucState};
pub use oracle::{RcResult, SearchBudget};
