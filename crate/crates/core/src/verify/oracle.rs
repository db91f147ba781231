use crate::store::NodeId;
use crate::verify::EdgeList;

/// Core numbers by literal peeling: for each `k`, start from the whole graph
/// and delete nodes of degree `< k` until none remain; the survivors form the
/// k-core. A node's core number is the last `k` whose k-core contains it.
pub fn brute_force_core(graph: &EdgeList) -> Vec<u32> {
    let adj = graph.adjacency();
    let n = graph.n;
    let mut core = vec![0u32; n];
    let mut k = 1u32;
    loop {
        let mut alive = vec![true; n];
        let mut deg: Vec<usize> = adj.iter().map(Vec::len).collect();
        let mut changed = true;
        while changed {
            changed = false;
            for v in 0..n {
                if alive[v] && deg[v] < k as usize {
                    alive[v] = false;
                    changed = true;
                    for &u in &adj[v] {
                        deg[u as usize] -= 1;
                    }
                }
            }
        }
        if !alive.iter().any(|&a| a) {
            break;
        }
        for v in 0..n {
            if alive[v] {
                core[v] = k;
            }
        }
        k += 1;
    }
    core
}

/// Nodes whose value is not `max k` such that at least `k` neighbors have a
/// value `>= k`. Empty exactly when `core` is the fixpoint of the locality
/// equation.
pub fn locality_violations(graph: &EdgeList, core: &[u32]) -> Vec<NodeId> {
    let adj = graph.adjacency();
    (0..graph.n)
        .filter(|&v| {
            let mut vals: Vec<u32> = adj[v].iter().map(|&u| core[u as usize]).collect();
            vals.sort_unstable_by(|a, b| b.cmp(a));
            // with values sorted descending, the best k is the largest i
            // (1-based) such that vals[i-1] >= i
            let best = vals
                .iter()
                .enumerate()
                .take_while(|&(i, &c)| c as usize > i)
                .count() as u32;
            best != core[v]
        })
        .map(|v| v as NodeId)
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::verify::sample_graph_g9;

    #[test]
    fn g9() {
        assert_eq!(
            brute_force_core(&sample_graph_g9()),
            vec![3, 3, 3, 3, 2, 2, 2, 2, 1]
        );
    }

    #[test]
    fn k4() {
        let k4 = EdgeList::new(4, vec![(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]);
        assert_eq!(brute_force_core(&k4), vec![3; 4]);
    }

    #[test]
    fn single_node() {
        assert_eq!(brute_force_core(&EdgeList::new(1, vec![])), vec![0]);
        assert!(brute_force_core(&EdgeList::new(0, vec![])).is_empty());
    }

    #[test]
    fn locality_accepts_true_cores_only() {
        let g = sample_graph_g9();
        let core = brute_force_core(&g);
        assert!(locality_violations(&g, &core).is_empty());
        let mut bad = core.clone();
        bad[8] = 2;
        assert_eq!(locality_violations(&g, &bad), vec![8]);
        // degrees are an upper bound, not a fixpoint
        assert!(!locality_violations(&g, &g.degrees()).is_empty());
    }
}
