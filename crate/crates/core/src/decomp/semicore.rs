use crate::decomp::{
    count_at_least, CoreState, Counters, LocalCore, Observer, RunClock, RunReport, ScanRange,
};
use crate::error::Result;
use crate::store::{DiskGraph, NodeId};

/// Full-scan decomposition: every pass recomputes every node, until a pass
/// changes nothing. The final confirming pass counts as an iteration.
pub fn semi_core(g: &mut DiskGraph) -> Result<(Vec<u32>, RunReport)> {
    semi_core_observed(g, &mut ())
}

pub(crate) fn semi_core_observed(
    g: &mut DiskGraph,
    obs: &mut dyn Observer,
) -> Result<(Vec<u32>, RunReport)> {
    let clock = RunClock::start(g);
    let n = g.n();
    let mut core = g.degrees();
    let mut counters = Counters::default();
    let mut nbrs = Vec::new();
    let mut lc = LocalCore::default();
    obs.started(&core);

    loop {
        counters.iterations += 1;
        obs.pass_started(counters.iterations);
        let mut update = false;
        for v in 0..n as NodeId {
            g.neighbors_into(v, &mut nbrs)?;
            let c_old = core[v as usize];
            let c_new = lc.compute_for(c_old, &nbrs, &core);
            core[v as usize] = c_new;
            counters.node_computations += 1;
            obs.node_computed(v, c_old, c_new);
            if c_new != c_old {
                update = true;
            }
        }
        obs.pass_finished(counters.iterations, &core);
        if !update {
            break;
        }
    }
    let report = clock.report(g, "semicore", counters, &core);
    Ok((core, report))
}

/// Decomposition that only recomputes nodes adjacent to a change in the
/// previous (or current) pass, confined to the window of such nodes.
pub fn semi_core_plus(g: &mut DiskGraph) -> Result<(Vec<u32>, RunReport)> {
    semi_core_plus_observed(g, &mut ())
}

pub(crate) fn semi_core_plus_observed(
    g: &mut DiskGraph,
    obs: &mut dyn Observer,
) -> Result<(Vec<u32>, RunReport)> {
    let clock = RunClock::start(g);
    let n = g.n();
    let mut core = g.degrees();
    let mut active = vec![true; n];
    let mut range = ScanRange::full(n);
    let mut counters = Counters::default();
    let mut nbrs = Vec::new();
    let mut lc = LocalCore::default();
    obs.started(&core);

    while range.update {
        range.begin_pass();
        counters.iterations += 1;
        obs.pass_started(counters.iterations);
        let mut v = range.lo;
        while v < range.hi {
            if active[v] {
                active[v] = false;
                let vid = v as NodeId;
                g.neighbors_into(vid, &mut nbrs)?;
                let c_old = core[v];
                let c_new = lc.compute_for(c_old, &nbrs, &core);
                core[v] = c_new;
                counters.node_computations += 1;
                obs.node_computed(vid, c_old, c_new);
                if c_new != c_old {
                    for &u in &nbrs {
                        active[u as usize] = true;
                        range.update_range(u, vid);
                    }
                }
            }
            v += 1;
        }
        range.end_pass();
        obs.pass_finished(counters.iterations, &core);
    }
    let report = clock.report(g, "semicore-plus", counters, &core);
    Ok((core, report))
}

/// Decomposition with `cnt`-guarded recomputation: after the first pass a
/// node is loaded only when `cnt(v) < core(v)`, and each such computation
/// lowers its bound.
pub fn semi_core_star(g: &mut DiskGraph) -> Result<(Vec<u32>, RunReport)> {
    semi_core_star_observed(g, &mut ()).map(|(s, r)| (s.core, r))
}

/// Like [`semi_core_star`], returning the converged [`CoreState`] (cores and
/// `cnt`) needed for incremental maintenance.
pub fn semi_core_star_state(g: &mut DiskGraph) -> Result<(CoreState, RunReport)> {
    semi_core_star_observed(g, &mut ())
}

pub(crate) fn semi_core_star_observed(
    g: &mut DiskGraph,
    obs: &mut dyn Observer,
) -> Result<(CoreState, RunReport)> {
    let clock = RunClock::start(g);
    let n = g.n();
    let mut state = CoreState {
        core: g.degrees(),
        // 0 forces every node with a positive degree into the first pass
        cnt: vec![0; n],
    };
    let mut counters = Counters::default();
    obs.started(&state.core);
    converge_star(g, &mut state, ScanRange::full(n), obs, &mut counters)?;
    let report = clock.report(g, "semicore-star", counters, &state.core);
    Ok((state, report))
}

/// The `cnt`-guarded convergence loop, starting from `range`. Every core
/// value in `state` must be an upper bound of the true core number and every
/// `cnt` outside the first-pass bootstrap must match its definition.
pub(crate) fn converge_star(
    g: &mut DiskGraph,
    state: &mut CoreState,
    mut range: ScanRange,
    obs: &mut dyn Observer,
    counters: &mut Counters,
) -> Result<()> {
    let mut nbrs = Vec::new();
    let mut lc = LocalCore::default();
    while range.update {
        range.begin_pass();
        counters.iterations += 1;
        obs.pass_started(counters.iterations);
        let mut v = range.lo;
        while v < range.hi {
            if state.cnt[v] < state.core[v] {
                let vid = v as NodeId;
                g.neighbors_into(vid, &mut nbrs)?;
                let c_old = state.core[v];
                let c_new = lc.compute_for(c_old, &nbrs, &state.core);
                state.core[v] = c_new;
                state.cnt[v] = count_at_least(&nbrs, &state.core, c_new);
                counters.node_computations += 1;
                obs.node_computed(vid, c_old, c_new);
                update_nbr_cnt(state, &nbrs, c_old, c_new);
                for &u in &nbrs {
                    if state.cnt[u as usize] < state.core[u as usize] {
                        range.update_range(u, vid);
                    }
                }
            }
            v += 1;
        }
        range.end_pass();
        obs.pass_finished(counters.iterations, &state.core);
    }
    Ok(())
}

/// After a node's bound dropped from `c_old` to `c_new`, decrement `cnt(u)`
/// of every neighbor `u` with `c_new < core(u) <= c_old`: exactly those
/// neighbors counted the node before the drop and no longer do.
pub fn update_nbr_cnt(state: &mut CoreState, nbrs: &[NodeId], c_old: u32, c_new: u32) {
    for &u in nbrs {
        let cu = state.core[u as usize];
        if cu > c_new && cu <= c_old {
            // first-pass nodes not yet visited still hold the 0 bootstrap
            let cnt = &mut state.cnt[u as usize];
            *cnt = cnt.saturating_sub(1);
        }
    }
}
