//! Core decomposition.
//!
//! All semi-external algorithms start from `core(v) = deg(v)` and refine the
//! upper bounds with [`local_core`] until a fixpoint, reading one adjacency
//! list at a time from the [`DiskGraph`]. They differ in which nodes they
//! recompute per pass:
//!
//! * [`semi_core`] recomputes every node on every pass.
//! * [`semi_core_plus`] recomputes only nodes with a neighbor that changed.
//! * [`semi_core_star`] maintains `cnt(v)` and recomputes exactly the nodes
//!   whose bound must drop.
//!
//! [`im_core`] is the in-memory bin-sort peeling baseline.

mod imcore;
mod local;
mod scan;
mod semicore;

use std::time::Instant;

use serde::Serialize;

pub use imcore::im_core;
pub use local::{compute_cnt, local_core};
pub use scan::ScanRange;
pub use semicore::{
    semi_core, semi_core_plus, semi_core_star, semi_core_star_state, update_nbr_cnt,
};

pub(crate) use local::{count_at_least, LocalCore};
pub(crate) use semicore::converge_star;

use crate::error::{Error, Result};
use crate::store::{DiskGraph, IoStats, NodeId};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Algorithm {
    SemiCore,
    SemiCorePlus,
    SemiCoreStar,
    ImCore,
}

impl Algorithm {
    pub const ALL: [Algorithm; 4] = [
        Algorithm::SemiCore,
        Algorithm::SemiCorePlus,
        Algorithm::SemiCoreStar,
        Algorithm::ImCore,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Algorithm::SemiCore => "semicore",
            Algorithm::SemiCorePlus => "semicore-plus",
            Algorithm::SemiCoreStar => "semicore-star",
            Algorithm::ImCore => "imcore",
        }
    }

    pub fn is_semi_external(self) -> bool {
        !matches!(self, Algorithm::ImCore)
    }
}

impl std::str::FromStr for Algorithm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Algorithm::ALL
            .into_iter()
            .find(|a| a.name() == s)
            .ok_or_else(|| Error::InvalidArgument(format!("unknown algorithm {s:?}")))
    }
}

impl std::fmt::Display for Algorithm {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

/// Hooks into a running decomposition or maintenance loop.
///
/// Iterations are numbered from 1. `node_computed` fires once per node
/// computation with the node's bound before and after.
pub trait Observer {
    fn started(&mut self, _cores: &[u32]) {}
    fn pass_started(&mut self, _iteration: u64) {}
    fn node_computed(&mut self, _v: NodeId, _before: u32, _after: u32) {}
    fn pass_finished(&mut self, _iteration: u64, _cores: &[u32]) {}
}

impl Observer for () {}

/// Per-node state shared by the semi-external algorithms: the core upper
/// bounds and, for the `cnt`-guarded algorithms, the number of neighbors
/// whose bound is at least the node's own.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoreState {
    pub core: Vec<u32>,
    pub cnt: Vec<u32>,
}

impl CoreState {
    /// State for already known core numbers, with `cnt` computed by one
    /// sequential scan of the graph.
    pub fn from_cores(g: &mut DiskGraph, core: Vec<u32>) -> Result<Self> {
        if core.len() != g.n() {
            return Err(Error::InvalidArgument(format!(
                "{} core values for {} nodes",
                core.len(),
                g.n()
            )));
        }
        let cnt = recompute_cnt(g, &core)?;
        Ok(CoreState { core, cnt })
    }

    pub fn k_max(&self) -> u32 {
        self.core.iter().copied().max().unwrap_or(0)
    }

    /// Nodes whose stored `cnt` differs from a fresh count over the graph.
    pub fn cnt_mismatches(&self, g: &mut DiskGraph) -> Result<Vec<NodeId>> {
        let fresh = recompute_cnt(g, &self.core)?;
        Ok(fresh
            .iter()
            .zip(&self.cnt)
            .enumerate()
            .filter(|(_, (a, b))| a != b)
            .map(|(v, _)| v as NodeId)
            .collect())
    }
}

fn recompute_cnt(g: &mut DiskGraph, core: &[u32]) -> Result<Vec<u32>> {
    let mut nbrs = Vec::new();
    let mut cnt = Vec::with_capacity(core.len());
    for v in 0..g.n() as NodeId {
        g.neighbors_into(v, &mut nbrs)?;
        cnt.push(count_at_least(&nbrs, core, core[v as usize]));
    }
    Ok(cnt)
}

/// Summary of one decomposition run. I/O counters are deltas over the run.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunReport {
    pub algorithm: String,
    pub iterations: u64,
    pub node_computations: u64,
    pub read_ios: u64,
    pub write_ios: u64,
    pub elapsed_seconds: f64,
    pub k_max: u32,
}

#[derive(Debug, Default, Clone, Copy)]
pub(crate) struct Counters {
    pub iterations: u64,
    pub node_computations: u64,
}

pub(crate) struct RunClock {
    started: Instant,
    io: IoStats,
}

impl RunClock {
    pub fn start(g: &DiskGraph) -> Self {
        RunClock {
            started: Instant::now(),
            io: g.io_report(),
        }
    }

    pub fn io_delta(&self, g: &DiskGraph) -> IoStats {
        g.io_report().since(&self.io)
    }

    pub fn elapsed(&self) -> f64 {
        self.started.elapsed().as_secs_f64()
    }

    pub fn report(&self, g: &DiskGraph, algorithm: &str, c: Counters, cores: &[u32]) -> RunReport {
        let io = self.io_delta(g);
        RunReport {
            algorithm: algorithm.to_string(),
            iterations: c.iterations,
            node_computations: c.node_computations,
            read_ios: io.read_ios,
            write_ios: io.write_ios,
            elapsed_seconds: self.elapsed(),
            k_max: cores.iter().copied().max().unwrap_or(0),
        }
    }
}

/// Run `algorithm` on `g`.
pub fn decompose(g: &mut DiskGraph, algorithm: Algorithm) -> Result<(Vec<u32>, RunReport)> {
    decompose_observed(g, algorithm, &mut ())
}

/// Run `algorithm` on `g`, reporting progress to `observer`. The in-memory
/// baseline reports only its final result as a single pass.
pub fn decompose_observed(
    g: &mut DiskGraph,
    algorithm: Algorithm,
    observer: &mut dyn Observer,
) -> Result<(Vec<u32>, RunReport)> {
    match algorithm {
        Algorithm::SemiCore => semicore::semi_core_observed(g, observer),
        Algorithm::SemiCorePlus => semicore::semi_core_plus_observed(g, observer),
        Algorithm::SemiCoreStar => {
            semicore::semi_core_star_observed(g, observer).map(|(s, r)| (s.core, r))
        }
        Algorithm::ImCore => imcore::im_core_observed(g, observer),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn algorithm_names_round_trip() {
        for a in Algorithm::ALL {
            assert_eq!(a.name().parse::<Algorithm>().unwrap(), a);
        }
        assert!("semicore*".parse::<Algorithm>().is_err());
    }
}
