use crate::decomp::{
    converge_star, count_at_least, CoreState, Counters, Observer, RunClock, ScanRange,
};
use crate::error::Result;
use crate::maintain::{check_state, finish_report, ChangeLog, EdgeOp, MaintainReport, Outcome};
use crate::store::{DiskGraph, NodeId, UpdateKind};

/// Insert `(u, v)` in two phases.
///
/// Phase 1 raises every node reachable from the lower endpoint through
/// nodes of the same core by one, which makes all values upper bounds
/// again. Phase 2 reruns the `cnt`-guarded loop over the candidates' id
/// range. Iterations and computations of both phases are summed.
pub fn semi_insert(
    g: &mut DiskGraph,
    state: &mut CoreState,
    u: NodeId,
    v: NodeId,
) -> Result<MaintainReport> {
    semi_insert_observed(g, state, u, v, &mut ())
}

pub(crate) fn semi_insert_observed(
    g: &mut DiskGraph,
    state: &mut CoreState,
    u: NodeId,
    v: NodeId,
    obs: &mut dyn Observer,
) -> Result<MaintainReport> {
    check_state(g, state)?;
    let clock = RunClock::start(g);
    g.apply_edge_update(UpdateKind::Insert, u, v)?;
    let op = EdgeOp::insert(u, v);

    let (a, _) = bump_endpoint_counts(state, u, v);
    let c_old = state.core[a as usize];

    let mut log = ChangeLog::new(obs);
    log.started(&state.core);
    let mut counters = Counters::default();
    let n = g.n();
    let mut active = vec![false; n];
    active[a as usize] = true;
    let mut range = ScanRange::between(a, a);
    let mut nbrs = Vec::new();

    while range.update {
        range.begin_pass();
        counters.iterations += 1;
        log.pass_started(counters.iterations);
        let mut w = range.lo;
        while w < range.hi {
            if active[w] && state.core[w] == c_old {
                let wid = w as NodeId;
                state.core[w] = c_old + 1;
                g.neighbors_into(wid, &mut nbrs)?;
                state.cnt[w] = count_at_least(&nbrs, &state.core, c_old + 1);
                counters.node_computations += 1;
                log.node_computed(wid, c_old, c_old + 1);
                for &x in &nbrs {
                    if state.core[x as usize] == c_old + 1 {
                        state.cnt[x as usize] += 1;
                    }
                }
                for &x in &nbrs {
                    if state.core[x as usize] == c_old && !active[x as usize] {
                        active[x as usize] = true;
                        range.update_range(x, wid);
                    }
                }
            }
            w += 1;
        }
        range.end_pass();
        log.pass_finished(counters.iterations, &state.core);
    }

    let candidates: Vec<NodeId> = (0..n as NodeId).filter(|&w| active[w as usize]).collect();
    drop(active);
    let lo = candidates.first().copied().unwrap_or(a).min(a);
    let hi = candidates.last().copied().unwrap_or(a).max(a);
    converge_star(
        g,
        state,
        ScanRange::between(lo, hi),
        &mut log,
        &mut counters,
    )?;

    let changed = log.changed(&state.core);
    Ok(finish_report(
        &clock,
        g,
        state,
        op,
        "semiinsert",
        Outcome {
            counters,
            changed,
            expanded: candidates,
            rejected: Vec::new(),
        },
    ))
}

/// Orders the endpoints so the first has the smaller core (no swap on a
/// tie) and accounts for the new edge in their counts.
pub(crate) fn bump_endpoint_counts(
    state: &mut CoreState,
    u: NodeId,
    v: NodeId,
) -> (NodeId, NodeId) {
    let (a, b) = if state.core[u as usize] > state.core[v as usize] {
        (v, u)
    } else {
        (u, v)
    };
    state.cnt[a as usize] += 1;
    if state.core[a as usize] == state.core[b as usize] {
        state.cnt[b as usize] += 1;
    }
    (a, b)
}
