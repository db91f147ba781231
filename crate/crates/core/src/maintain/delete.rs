use crate::decomp::{converge_star, CoreState, Counters, Observer, RunClock, ScanRange};
use crate::error::Result;
use crate::maintain::{check_state, finish_report, ChangeLog, EdgeOp, MaintainReport, Outcome};
use crate::store::{DiskGraph, NodeId, UpdateKind};

/// Delete `(u, v)` and restore converged cores and counts.
///
/// Old cores remain upper bounds after a deletion, so only the endpoint
/// counts need fixing before the `cnt`-guarded loop is rerun from the
/// affected endpoint(s).
pub fn semi_delete_star(
    g: &mut DiskGraph,
    state: &mut CoreState,
    u: NodeId,
    v: NodeId,
) -> Result<MaintainReport> {
    semi_delete_star_observed(g, state, u, v, &mut ())
}

pub(crate) fn semi_delete_star_observed(
    g: &mut DiskGraph,
    state: &mut CoreState,
    u: NodeId,
    v: NodeId,
    obs: &mut dyn Observer,
) -> Result<MaintainReport> {
    check_state(g, state)?;
    let clock = RunClock::start(g);
    g.apply_edge_update(UpdateKind::Delete, u, v)?;

    let (cu, cv) = (state.core[u as usize], state.core[v as usize]);
    let dec = |state: &mut CoreState, w: NodeId| {
        let c = &mut state.cnt[w as usize];
        *c = c.saturating_sub(1);
    };
    let range = if cu < cv {
        dec(state, u);
        ScanRange::between(u, u)
    } else if cv < cu {
        dec(state, v);
        ScanRange::between(v, v)
    } else {
        dec(state, u);
        dec(state, v);
        ScanRange::between(u.min(v), u.max(v))
    };

    let mut log = ChangeLog::new(obs);
    log.started(&state.core);
    let mut counters = Counters::default();
    converge_star(g, state, range, &mut log, &mut counters)?;
    let changed = log.changed(&state.core);
    Ok(finish_report(
        &clock,
        g,
        state,
        EdgeOp::delete(u, v),
        "semidelete-star",
        Outcome {
            counters,
            changed,
            expanded: Vec::new(),
            rejected: Vec::new(),
        },
    ))
}
