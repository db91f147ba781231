use std::fmt::Write;

use crate::decomp::Observer;
use crate::store::NodeId;

/// Records the bound of every node after each pass and which nodes were
/// recomputed in it.
#[derive(Debug, Default, Clone)]
pub struct TraceTable {
    rows: Vec<Vec<u32>>,
    recomputed: Vec<Vec<NodeId>>,
    current: Vec<NodeId>,
}

impl TraceTable {
    /// Values before the first pass.
    pub fn initial(&self) -> Option<&[u32]> {
        self.rows.first().map(Vec::as_slice)
    }

    /// Values after each pass, starting with pass 1.
    pub fn passes(&self) -> &[Vec<u32>] {
        self.rows.get(1..).unwrap_or(&[])
    }

    /// Sorted ids recomputed in each pass; index 0 is pass 1.
    pub fn recomputed_sets(&self) -> Vec<Vec<NodeId>> {
        self.recomputed.clone()
    }

    /// Number of nodes whose value changed in each pass.
    pub fn changed_counts(&self) -> Vec<usize> {
        self.rows
            .windows(2)
            .map(|w| w[0].iter().zip(&w[1]).filter(|(a, b)| a != b).count())
            .collect()
    }

    /// One line per (pass, node), pass 0 holding the initial values.
    pub fn to_tsv(&self) -> String {
        let mut out = String::from("iteration\tnode\tcore\trecomputed\n");
        for (i, row) in self.rows.iter().enumerate() {
            let recomputed = if i == 0 {
                &[][..]
            } else {
                &self.recomputed[i - 1][..]
            };
            for (v, c) in row.iter().enumerate() {
                let hit = recomputed.binary_search(&(v as NodeId)).is_ok();
                writeln!(out, "{i}\t{v}\t{c}\t{}", u8::from(hit)).unwrap();
            }
        }
        out
    }
}

impl Observer for TraceTable {
    fn started(&mut self, cores: &[u32]) {
        self.rows = vec![cores.to_vec()];
        self.recomputed.clear();
    }

    fn pass_started(&mut self, _iteration: u64) {
        self.current.clear();
    }

    fn node_computed(&mut self, v: NodeId, _before: u32, _after: u32) {
        self.current.push(v);
    }

    fn pass_finished(&mut self, _iteration: u64, cores: &[u32]) {
        let mut set = std::mem::take(&mut self.current);
        set.sort_unstable();
        set.dedup();
        self.recomputed.push(set);
        self.rows.push(cores.to_vec());
    }
}
