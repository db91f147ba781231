use std::collections::HashSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::store::NodeId;
use crate::verify::EdgeList;

/// The nine-node example graph with core numbers `(3,3,3,3,2,2,2,2,1)`.
pub fn sample_graph_g9() -> EdgeList {
    EdgeList::new(
        9,
        vec![
            (0, 1),
            (0, 2),
            (0, 3),
            (1, 2),
            (1, 3),
            (2, 3),
            (2, 4),
            (3, 4),
            (3, 5),
            (3, 6),
            (4, 5),
            (5, 6),
            (5, 7),
            (5, 8),
            (6, 7),
        ],
    )
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum GraphKind {
    /// Every pair is an edge independently with probability `p`.
    ErdosRenyi { p: f64 },
    /// Preferential attachment: a clique on the first `edges_per_node + 1`
    /// nodes, then each new node links to `edges_per_node` distinct earlier
    /// nodes chosen proportionally to degree.
    Preferential { edges_per_node: usize },
}

/// Deterministic random graph for `seed`.
pub fn gen_random_graph(kind: GraphKind, n: usize, seed: u64) -> Result<EdgeList> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let edges = match kind {
        GraphKind::ErdosRenyi { p } => {
            if !(0.0..=1.0).contains(&p) {
                return Err(Error::InvalidArgument(format!(
                    "edge probability {p} not in [0, 1]"
                )));
            }
            erdos_renyi(&mut rng, n, p)
        }
        GraphKind::Preferential { edges_per_node } => {
            if edges_per_node == 0 {
                return Err(Error::InvalidArgument(
                    "edges_per_node must be at least 1".into(),
                ));
            }
            preferential(&mut rng, n, edges_per_node)
        }
    };
    Ok(EdgeList::new(n, edges))
}

// geometric skipping over the pairs (w, v), w < v, in row order
fn erdos_renyi(rng: &mut ChaCha8Rng, n: usize, p: f64) -> Vec<(NodeId, NodeId)> {
    let mut edges = Vec::new();
    if p <= 0.0 || n < 2 {
        return edges;
    }
    if p >= 1.0 {
        for v in 1..n {
            for w in 0..v {
                edges.push((w as NodeId, v as NodeId));
            }
        }
        return edges;
    }
    let lp = (1.0 - p).ln();
    let (mut v, mut w) = (1usize, -1i64);
    while v < n {
        let r: f64 = rng.random();
        w += 1 + ((1.0 - r).ln() / lp).floor() as i64;
        while w >= v as i64 && v < n {
            w -= v as i64;
            v += 1;
        }
        if v < n {
            edges.push((w as NodeId, v as NodeId));
        }
    }
    edges
}

fn preferential(rng: &mut ChaCha8Rng, n: usize, k: usize) -> Vec<(NodeId, NodeId)> {
    let seed_size = n.min(k + 1);
    let mut edges = Vec::new();
    let mut endpoints: Vec<NodeId> = Vec::new();
    for v in 0..seed_size {
        for u in 0..v {
            edges.push((u as NodeId, v as NodeId));
            endpoints.extend([u as NodeId, v as NodeId]);
        }
    }
    let mut targets = HashSet::with_capacity(k);
    for v in seed_size..n {
        targets.clear();
        while targets.len() < k {
            let t = endpoints[rng.random_range(0..endpoints.len())];
            targets.insert(t);
        }
        let mut sorted: Vec<_> = targets.iter().copied().collect();
        sorted.sort_unstable();
        for t in sorted {
            edges.push((t, v as NodeId));
            endpoints.extend([t, v as NodeId]);
        }
    }
    edges
}
