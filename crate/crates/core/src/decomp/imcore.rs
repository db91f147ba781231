use crate::decomp::{Counters, Observer, RunClock, RunReport};
use crate::error::Result;
use crate::store::{DiskGraph, NodeId};

/// In-memory peeling with bin sort (Batagelj–Zaversnik), O(m + n).
///
/// Loads the whole effective graph into memory, so it is meant for graphs
/// that fit; oversized inputs simply exhaust memory.
pub fn im_core(g: &mut DiskGraph) -> Result<(Vec<u32>, RunReport)> {
    im_core_observed(g, &mut ())
}

pub(crate) fn im_core_observed(
    g: &mut DiskGraph,
    obs: &mut dyn Observer,
) -> Result<(Vec<u32>, RunReport)> {
    let clock = RunClock::start(g);
    let n = g.n();

    // CSR copy of the effective graph
    let mut start = Vec::with_capacity(n + 1);
    let mut adj: Vec<NodeId> = Vec::with_capacity(2 * g.m() as usize);
    let mut list = Vec::new();
    start.push(0usize);
    for v in 0..n as NodeId {
        g.neighbors_into(v, &mut list)?;
        adj.extend_from_slice(&list);
        start.push(adj.len());
    }

    let mut deg: Vec<usize> = (0..n).map(|v| start[v + 1] - start[v]).collect();
    obs.started(&deg.iter().map(|&d| d as u32).collect::<Vec<_>>());
    obs.pass_started(1);
    let max_deg = deg.iter().copied().max().unwrap_or(0);

    // bin[d] = first position in `order` of nodes with current degree d
    let mut bin = vec![0usize; max_deg + 1];
    for &d in &deg {
        bin[d] += 1;
    }
    let mut first = 0;
    for b in bin.iter_mut() {
        let count = *b;
        *b = first;
        first += count;
    }
    let mut pos = vec![0usize; n];
    let mut order = vec![0 as NodeId; n];
    for v in 0..n {
        pos[v] = bin[deg[v]];
        order[pos[v]] = v as NodeId;
        bin[deg[v]] += 1;
    }
    for d in (1..=max_deg).rev() {
        bin[d] = bin[d - 1];
    }
    bin[0] = 0;

    for i in 0..n {
        let v = order[i] as usize;
        for &u in &adj[start[v]..start[v + 1]] {
            let u = u as usize;
            if deg[u] > deg[v] {
                // swap u to the front of its bin, then shrink the bin
                let du = deg[u];
                let pu = pos[u];
                let pw = bin[du];
                let w = order[pw] as usize;
                if u != w {
                    order.swap(pu, pw);
                    pos[u] = pw;
                    pos[w] = pu;
                }
                bin[du] += 1;
                deg[u] -= 1;
            }
        }
    }

    let core: Vec<u32> = deg.into_iter().map(|d| d as u32).collect();
    obs.pass_finished(1, &core);
    let counters = Counters {
        iterations: 1,
        node_computations: n as u64,
    };
    let report = clock.report(g, "imcore", counters, &core);
    Ok((core, report))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::store::StoreOptions;
    use crate::verify::{sample_graph_g9, EdgeList};

    fn run(edges: &EdgeList) -> Vec<u32> {
        let dir = tempfile::tempdir().unwrap();
        let mut g =
            DiskGraph::create(dir.path(), edges.n, &edges.edges, StoreOptions::default()).unwrap();
        im_core(&mut g).unwrap().0
    }

    #[test]
    fn g9() {
        assert_eq!(run(&sample_graph_g9()), vec![3, 3, 3, 3, 2, 2, 2, 2, 1]);
    }

    #[test]
    fn k4() {
        let k4 = EdgeList::new(4, vec![(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]);
        assert_eq!(run(&k4), vec![3; 4]);
    }

    #[test]
    fn path_and_isolated() {
        assert_eq!(run(&EdgeList::new(3, vec![(0, 1), (1, 2)])), vec![1; 3]);
        assert_eq!(run(&EdgeList::new(2, vec![])), vec![0, 0]);
        assert_eq!(run(&EdgeList::new(0, vec![])), Vec::<u32>::new());
    }
}
