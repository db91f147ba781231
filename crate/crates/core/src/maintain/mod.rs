//! Incremental core maintenance under single-edge updates.
//!
//! Every operation takes a converged [`CoreState`] for the current graph
//! (for instance from [`semi_core_star_state`](crate::decomp::semi_core_star_state))
//! and leaves it converged for the updated graph. An update only moves core
//! numbers by one, and only for nodes whose old core equals the smaller
//! endpoint core.
//!
//! Calling these on a state that is not converged is a precondition
//! violation; the result is then unspecified (but memory safe).

mod delete;
mod insert;
mod insert_star;

use std::collections::HashMap;
use std::io::BufRead;
use std::str::FromStr;

use serde::Serialize;

pub use delete::semi_delete_star;
pub use insert::semi_insert;
pub use insert_star::{compute_cnt_star, semi_insert_star};

use delete::semi_delete_star_observed;
use insert::semi_insert_observed;
use insert_star::semi_insert_star_observed;

use crate::decomp::{CoreState, Counters, Observer, RunClock};
use crate::error::{Error, Result};
use crate::store::{DiskGraph, NodeId, UpdateKind};

/// Per-node progress of the one-phase insertion.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum NodeStatus {
    /// Not reached by the expansion.
    #[default]
    Untouched,
    /// Reached; its count has not been evaluated yet.
    Pending,
    /// Evaluated with enough support; its core is raised.
    Confirmed,
    /// Lost support after evaluation; its core is back to the old value.
    Rejected,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InsertAlgorithm {
    /// Candidate expansion, then a `cnt`-guarded convergence over the
    /// candidates.
    TwoPhase,
    /// Status propagation, no second phase.
    Star,
}

impl InsertAlgorithm {
    pub fn name(self) -> &'static str {
        match self {
            InsertAlgorithm::TwoPhase => "two-phase",
            InsertAlgorithm::Star => "star",
        }
    }
}

impl FromStr for InsertAlgorithm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "two-phase" => Ok(InsertAlgorithm::TwoPhase),
            "star" => Ok(InsertAlgorithm::Star),
            _ => Err(Error::InvalidArgument(format!(
                "unknown insert algorithm {s:?}"
            ))),
        }
    }
}

/// One edge update.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EdgeOp {
    pub kind: UpdateKind,
    pub u: NodeId,
    pub v: NodeId,
}

impl EdgeOp {
    pub fn insert(u: NodeId, v: NodeId) -> Self {
        EdgeOp {
            kind: UpdateKind::Insert,
            u,
            v,
        }
    }

    pub fn delete(u: NodeId, v: NodeId) -> Self {
        EdgeOp {
            kind: UpdateKind::Delete,
            u,
            v,
        }
    }
}

impl FromStr for EdgeOp {
    type Err = String;

    /// `"+ u v"` or `"- u v"`.
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        let toks: Vec<&str> = s.split_whitespace().collect();
        let [sign, u, v] = toks[..] else {
            return Err(format!("expected `+ u v` or `- u v`, got {s:?}"));
        };
        let kind = match sign {
            "+" => UpdateKind::Insert,
            "-" => UpdateKind::Delete,
            _ => return Err(format!("unknown operation {sign:?}")),
        };
        let parse = |t: &str| {
            t.parse::<NodeId>()
                .map_err(|e| format!("bad node id {t:?}: {e}"))
        };
        Ok(EdgeOp {
            kind,
            u: parse(u)?,
            v: parse(v)?,
        })
    }
}

/// Read an ops file: one op per line, blank lines and `#` comments ignored.
pub fn parse_ops<R: BufRead>(reader: R) -> Result<Vec<EdgeOp>> {
    let mut ops = Vec::new();
    for (i, line) in reader.lines().enumerate() {
        let line = line?;
        let t = line.trim();
        if t.is_empty() || t.starts_with('#') {
            continue;
        }
        let op = t.parse().map_err(|reason| Error::Parse {
            line: i + 1,
            reason,
        })?;
        ops.push(op);
    }
    Ok(ops)
}

/// Summary of one maintenance operation. I/O counters are deltas and
/// include the edge update itself (and any flush it triggered).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MaintainReport {
    pub operation: &'static str,
    pub algorithm: &'static str,
    #[serde(skip)]
    pub u: NodeId,
    #[serde(skip)]
    pub v: NodeId,
    pub iterations: u64,
    pub node_computations: u64,
    pub nodes_changed: u64,
    pub read_ios: u64,
    pub write_ios: u64,
    pub elapsed_seconds: f64,
    pub k_max: u32,
    /// Nodes whose core differs from before the update, ascending.
    #[serde(skip)]
    pub changed: Vec<NodeId>,
    /// Candidates raised in phase 1 (two-phase) or nodes confirmed at the
    /// end (star); empty for deletion.
    #[serde(skip)]
    pub expanded: Vec<NodeId>,
    /// Nodes rejected during the one-phase insertion.
    #[serde(skip)]
    pub rejected: Vec<NodeId>,
}

/// Apply `ops` in order. On failure, reports how many ops were applied;
/// the failing op itself has not modified the graph or the state.
pub fn apply_stream(
    g: &mut DiskGraph,
    state: &mut CoreState,
    ops: &[EdgeOp],
    algorithm: InsertAlgorithm,
) -> std::result::Result<Vec<MaintainReport>, StreamError> {
    let mut reports = Vec::with_capacity(ops.len());
    for (index, op) in ops.iter().enumerate() {
        let r = apply_op(g, state, *op, algorithm).map_err(|source| StreamError {
            index,
            op: *op,
            source,
        })?;
        reports.push(r);
    }
    Ok(reports)
}

/// Apply a single op.
pub fn apply_op(
    g: &mut DiskGraph,
    state: &mut CoreState,
    op: EdgeOp,
    algorithm: InsertAlgorithm,
) -> Result<MaintainReport> {
    apply_op_observed(g, state, op, algorithm, &mut ())
}

/// Apply a single op, reporting each pass to `observer`.
pub fn apply_op_observed(
    g: &mut DiskGraph,
    state: &mut CoreState,
    op: EdgeOp,
    algorithm: InsertAlgorithm,
    observer: &mut dyn Observer,
) -> Result<MaintainReport> {
    let (u, v) = (op.u, op.v);
    match (op.kind, algorithm) {
        (UpdateKind::Delete, _) => semi_delete_star_observed(g, state, u, v, observer),
        (UpdateKind::Insert, InsertAlgorithm::TwoPhase) => {
            semi_insert_observed(g, state, u, v, observer)
        }
        (UpdateKind::Insert, InsertAlgorithm::Star) => {
            semi_insert_star_observed(g, state, u, v, observer)
        }
    }
}

#[derive(Debug, thiserror::Error)]
#[error("op {index} ({op:?}): {source}")]
pub struct StreamError {
    /// Zero-based position of the failing op.
    pub index: usize,
    pub op: EdgeOp,
    #[source]
    pub source: Error,
}

fn check_state(g: &DiskGraph, state: &CoreState) -> Result<()> {
    if state.core.len() != g.n() || state.cnt.len() != g.n() {
        return Err(Error::InvalidArgument(format!(
            "state sized {}/{} for a graph with {} nodes",
            state.core.len(),
            state.cnt.len(),
            g.n()
        )));
    }
    Ok(())
}

pub(crate) struct Outcome {
    pub counters: Counters,
    pub changed: Vec<NodeId>,
    pub expanded: Vec<NodeId>,
    pub rejected: Vec<NodeId>,
}

pub(crate) fn finish_report(
    clock: &RunClock,
    g: &DiskGraph,
    state: &CoreState,
    op: EdgeOp,
    algorithm: &'static str,
    out: Outcome,
) -> MaintainReport {
    let io = clock.io_delta(g);
    MaintainReport {
        operation: match op.kind {
            UpdateKind::Insert => "insert",
            UpdateKind::Delete => "delete",
        },
        algorithm,
        u: op.u,
        v: op.v,
        iterations: out.counters.iterations,
        node_computations: out.counters.node_computations,
        nodes_changed: out.changed.len() as u64,
        read_ios: io.read_ios,
        write_ios: io.write_ios,
        elapsed_seconds: clock.elapsed(),
        k_max: state.k_max(),
        changed: out.changed,
        expanded: out.expanded,
        rejected: out.rejected,
    }
}

/// Forwards to an inner observer while remembering each node's value
/// before its first computation.
pub(crate) struct ChangeLog<'a> {
    inner: &'a mut dyn Observer,
    first: HashMap<NodeId, u32>,
}

impl<'a> ChangeLog<'a> {
    pub fn new(inner: &'a mut dyn Observer) -> Self {
        ChangeLog {
            inner,
            first: HashMap::new(),
        }
    }

    /// Nodes whose current value differs from the remembered one.
    pub fn changed(&self, core: &[u32]) -> Vec<NodeId> {
        let mut out: Vec<NodeId> = self
            .first
            .iter()
            .filter(|&(&v, &before)| core[v as usize] != before)
            .map(|(&v, _)| v)
            .collect();
        out.sort_unstable();
        out
    }
}

impl Observer for ChangeLog<'_> {
    fn started(&mut self, cores: &[u32]) {
        self.inner.started(cores);
    }

    fn pass_started(&mut self, iteration: u64) {
        self.inner.pass_started(iteration);
    }

    fn node_computed(&mut self, v: NodeId, before: u32, after: u32) {
        self.first.entry(v).or_insert(before);
        self.inner.node_computed(v, before, after);
    }

    fn pass_finished(&mut self, iteration: u64, cores: &[u32]) {
        self.inner.pass_finished(iteration, cores);
    }
}

#[cfg(test)]
pub(crate) mod testutil {
    use super::*;
    use crate::decomp::semi_core_star_state;
    use crate::store::StoreOptions;
    use crate::verify::{sample_graph_g9, EdgeList};

    pub fn converged(edges: &EdgeList) -> (tempfile::TempDir, DiskGraph, CoreState) {
        let dir = tempfile::tempdir().unwrap();
        let mut g =
            DiskGraph::create(dir.path(), edges.n, &edges.edges, StoreOptions::default()).unwrap();
        let (state, _) = semi_core_star_state(&mut g).unwrap();
        (dir, g, state)
    }

    /// G9 with (0, 1) removed and its converged state.
    pub fn g9_minus_01() -> (tempfile::TempDir, DiskGraph, CoreState) {
        let mut e = sample_graph_g9();
        e.edges.retain(|&x| x != (0, 1));
        converged(&e)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_ops_file() {
        let text = "# ops\n- 0 1\n\n+ 4 6\n";
        let ops = parse_ops(text.as_bytes()).unwrap();
        assert_eq!(ops, vec![EdgeOp::delete(0, 1), EdgeOp::insert(4, 6)]);
    }

    #[test]
    fn parse_ops_reports_line() {
        match parse_ops("+ 1 2\n* 1 2\n".as_bytes()) {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 2),
            other => panic!("unexpected {other:?}"),
        }
        assert!("+ 1".parse::<EdgeOp>().is_err());
        assert!("+ 1 x".parse::<EdgeOp>().is_err());
    }

    #[test]
    fn insert_algorithm_names() {
        for a in [InsertAlgorithm::TwoPhase, InsertAlgorithm::Star] {
            assert_eq!(a.name().parse::<InsertAlgorithm>().unwrap(), a);
        }
        assert!("fast".parse::<InsertAlgorithm>().is_err());
    }

    #[test]
    fn stream_g9_scenario() {
        let e = crate::verify::sample_graph_g9();
        let (_d, mut g, mut state) = testutil::converged(&e);
        let ops = [EdgeOp::delete(0, 1), EdgeOp::insert(4, 6)];
        let reports = apply_stream(&mut g, &mut state, &ops, InsertAlgorithm::Star).unwrap();
        assert_eq!(reports[0].node_computations, 4);
        assert_eq!(reports[1].node_computations, 5);
        assert_eq!(state.core, vec![2, 2, 2, 3, 3, 3, 3, 2, 1]);
    }

    #[test]
    fn stream_stops_at_invalid_op() {
        let e = crate::verify::sample_graph_g9();
        let (_d, mut g, mut state) = testutil::converged(&e);
        let before = state.clone();
        let ops = [EdgeOp::delete(0, 1), EdgeOp::delete(0, 1)];
        let err = apply_stream(&mut g, &mut state, &ops, InsertAlgorithm::TwoPhase).unwrap_err();
        assert_eq!(err.index, 1);
        assert!(matches!(err.source, Error::MissingEdge(0, 1)));
        assert_ne!(state, before);
        assert!(state.cnt_mismatches(&mut g).unwrap().is_empty());
    }

    #[test]
    fn wrong_state_size_is_rejected() {
        let e = crate::verify::sample_graph_g9();
        let (_d, mut g, _) = testutil::converged(&e);
        let mut state = CoreState {
            core: vec![0; 3],
            cnt: vec![0; 3],
        };
        assert!(semi_delete_star(&mut g, &mut state, 0, 1).is_err());
        assert_eq!(g.m(), 15);
    }
}
