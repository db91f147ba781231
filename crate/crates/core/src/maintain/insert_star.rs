use crate::decomp::{count_at_least, CoreState, Counters, Observer, RunClock, ScanRange};
use crate::error::Result;
use crate::maintain::insert::bump_endpoint_counts;
use crate::maintain::{
    check_state, finish_report, ChangeLog, EdgeOp, MaintainReport, NodeStatus, Outcome,
};
use crate::store::{DiskGraph, NodeId, UpdateKind};

/// Optimistic support of a node at level `c_old + 1`: neighbors already
/// above `c_old`, plus neighbors at `c_old` that still have enough support
/// themselves and have not been rejected.
pub fn compute_cnt_star(
    state: &CoreState,
    status: &[NodeStatus],
    nbrs: &[NodeId],
    c_old: u32,
) -> u32 {
    nbrs.iter()
        .filter(|&&x| {
            let x = x as usize;
            let c = state.core[x];
            c > c_old || (c == c_old && state.cnt[x] > c_old && status[x] != NodeStatus::Rejected)
        })
        .count() as u32
}

/// Insert `(u, v)` in one phase.
///
/// Starting from the lower endpoint, nodes at the old core level are
/// evaluated against their optimistic support and either confirmed (raised
/// by one, expanding to supported neighbors) or later rejected when that
/// support falls below the new level. Confirmed nodes at termination are
/// exactly the nodes whose core increased.
pub fn semi_insert_star(
    g: &mut DiskGraph,
    state: &mut CoreState,
    u: NodeId,
    v: NodeId,
) -> Result<MaintainReport> {
    semi_insert_star_observed(g, state, u, v, &mut ())
}

pub(crate) fn semi_insert_star_observed(
    g: &mut DiskGraph,
    state: &mut CoreState,
    u: NodeId,
    v: NodeId,
    obs: &mut dyn Observer,
) -> Result<MaintainReport> {
    use NodeStatus::*;

    check_state(g, state)?;
    let clock = RunClock::start(g);
    g.apply_edge_update(UpdateKind::Insert, u, v)?;
    let op = EdgeOp::insert(u, v);

    let (a, _) = bump_endpoint_counts(state, u, v);
    let c_old = state.core[a as usize];
    let c_new = c_old + 1;

    let mut log = ChangeLog::new(obs);
    log.started(&state.core);
    let mut counters = Counters::default();
    let mut status = vec![Untouched; g.n()];
    status[a as usize] = Pending;
    let mut touched = vec![a];
    let mut range = ScanRange::between(a, a);
    let mut nbrs = Vec::new();

    while range.update {
        range.begin_pass();
        counters.iterations += 1;
        log.pass_started(counters.iterations);
        let mut w = range.lo;
        while w < range.hi {
            let wid = w as NodeId;
            let mut loaded = false;

            if status[w] == Pending {
                g.neighbors_into(wid, &mut nbrs)?;
                loaded = true;
                counters.node_computations += 1;
                state.cnt[w] = compute_cnt_star(state, &status, &nbrs, c_old);
                status[w] = Confirmed;
                state.core[w] = c_new;
                log.node_computed(wid, c_old, c_new);
                // confirmed neighbors already counted w in their own support
                for &x in &nbrs {
                    let x = x as usize;
                    if state.core[x] == c_new && status[x] != Confirmed {
                        state.cnt[x] += 1;
                    }
                }
                if state.cnt[w] >= c_new {
                    for &x in &nbrs {
                        let xi = x as usize;
                        if state.core[xi] == c_old
                            && state.cnt[xi] >= c_new
                            && status[xi] == Untouched
                        {
                            status[xi] = Pending;
                            touched.push(x);
                            range.update_range(x, wid);
                        }
                    }
                }
            }

            if status[w] == Confirmed && state.cnt[w] < c_new {
                if !loaded {
                    g.neighbors_into(wid, &mut nbrs)?;
                    counters.node_computations += 1;
                }
                state.cnt[w] = count_at_least(&nbrs, &state.core, c_old);
                status[w] = Rejected;
                state.core[w] = c_old;
                log.node_computed(wid, c_new, c_old);
                for &x in &nbrs {
                    let xi = x as usize;
                    if state.core[xi] == c_new && status[xi] != Confirmed {
                        state.cnt[xi] -= 1;
                    }
                }
                for &x in &nbrs {
                    let xi = x as usize;
                    if status[xi] == Confirmed {
                        state.cnt[xi] -= 1;
                        if state.cnt[xi] < c_new {
                            range.update_range(x, wid);
                        }
                    }
                }
            }
            w += 1;
        }
        range.end_pass();
        log.pass_finished(counters.iterations, &state.core);
    }

    debug_assert!(touched.iter().all(|&x| status[x as usize] != Pending));
    touched.sort_unstable();
    let confirmed: Vec<NodeId> = touched
        .iter()
        .copied()
        .filter(|&x| status[x as usize] == Confirmed)
        .collect();
    let rejected: Vec<NodeId> = touched
        .iter()
        .copied()
        .filter(|&x| status[x as usize] == Rejected)
        .collect();
    let changed = log.changed(&state.core);
    debug_assert_eq!(changed, confirmed);
    Ok(finish_report(
        &clock,
        g,
        state,
        op,
        "semiinsert-star",
        Outcome {
            counters,
            changed,
            expanded: confirmed,
            rejected,
        },
    ))
}
