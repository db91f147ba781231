//! Independent oracles, graph generators and trace recording.
//!
//! Nothing here shares code with the algorithms under test beyond the graph
//! types: [`brute_force_core`] peels literally from the k-core definition on
//! its own in-memory adjacency.

mod generate;
mod oracle;
mod trace;

pub use generate::{gen_random_graph, sample_graph_g9, GraphKind};
pub use oracle::{brute_force_core, locality_violations};
pub use trace::TraceTable;

use crate::error::{Error, Result};
use crate::store::NodeId;

/// A simple undirected graph held explicitly in memory.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EdgeList {
    pub n: usize,
    /// Each edge once, as `(u, v)` with `u < v`, ascending.
    pub edges: Vec<(NodeId, NodeId)>,
}

impl EdgeList {
    /// Normalizes orientation and order. Panics on self-loops or ids `>= n`.
    pub fn new(n: usize, edges: Vec<(NodeId, NodeId)>) -> Self {
        let mut edges: Vec<_> = edges
            .into_iter()
            .map(|(u, v)| {
                assert!(u != v, "self-loop on {u}");
                assert!((u.max(v) as usize) < n, "edge ({u}, {v}) out of range");
                (u.min(v), u.max(v))
            })
            .collect();
        edges.sort_unstable();
        edges.dedup();
        EdgeList { n, edges }
    }

    pub fn m(&self) -> usize {
        self.edges.len()
    }

    pub fn adjacency(&self) -> Vec<Vec<NodeId>> {
        let mut adj = vec![Vec::new(); self.n];
        for &(u, v) in &self.edges {
            adj[u as usize].push(v);
            adj[v as usize].push(u);
        }
        for list in &mut adj {
            list.sort_unstable();
        }
        adj
    }

    pub fn degrees(&self) -> Vec<u32> {
        let mut deg = vec![0; self.n];
        for &(u, v) in &self.edges {
            deg[u as usize] += 1;
            deg[v as usize] += 1;
        }
        deg
    }

    /// Edge-list text accepted by the converter.
    pub fn to_text(&self) -> String {
        self.edges
            .iter()
            .map(|(u, v)| format!("{u} {v}\n"))
            .collect()
    }
}

/// Positions where two core sequences differ, as `(node, a, b)`.
pub fn compare_cores(a: &[u32], b: &[u32]) -> Result<Vec<(NodeId, u32, u32)>> {
    if a.len() != b.len() {
        return Err(Error::InvalidArgument(format!(
            "core sequences differ in length: {} vs {}",
            a.len(),
            b.len()
        )));
    }
    Ok(a.iter()
        .zip(b)
        .enumerate()
        .filter(|(_, (x, y))| x != y)
        .map(|(v, (&x, &y))| (v as NodeId, x, y))
        .collect())
}
