//! Per-node recomputation kernels.

use crate::store::NodeId;

/// Largest `k <= c_old` such that at least `k` of the neighbor values are
/// `>= k`; 0 if there is none.
///
/// Neighbor values are clamped to `c_old` and bucketed, then the buckets are
/// summed from the top down, so the cost is linear in the number of
/// neighbors plus `c_old`.
pub fn local_core(c_old: u32, neighbor_cores: &[u32]) -> u32 {
    LocalCore::default().compute(c_old, neighbor_cores.iter().copied())
}

/// Number of neighbor values that are `>= core_v`.
pub fn compute_cnt(neighbor_cores: &[u32], core_v: u32) -> u32 {
    neighbor_cores.iter().filter(|&&c| c >= core_v).count() as u32
}

/// `compute_cnt` over neighbor ids against a core array.
pub(crate) fn count_at_least(nbrs: &[NodeId], core: &[u32], threshold: u32) -> u32 {
    nbrs.iter()
        .filter(|&&u| core[u as usize] >= threshold)
        .count() as u32
}

/// Reusable histogram for [`local_core`].
#[derive(Debug, Default)]
pub(crate) struct LocalCore {
    num: Vec<u32>,
}

impl LocalCore {
    pub fn compute(&mut self, c_old: u32, neighbor_cores: impl Iterator<Item = u32>) -> u32 {
        if c_old == 0 {
            return 0;
        }
        self.num.clear();
        self.num.resize(c_old as usize + 1, 0);
        for c in neighbor_cores {
            let i = c.min(c_old);
            self.num[i as usize] += 1;
        }
        let mut s = 0;
        for k in (1..=c_old).rev() {
            s += self.num[k as usize];
            if s >= k {
                return k;
            }
        }
        0
    }

    pub fn compute_for(&mut self, c_old: u32, nbrs: &[NodeId], core: &[u32]) -> u32 {
        self.compute(c_old, nbrs.iter().map(|&u| core[u as usize]))
    }
}
