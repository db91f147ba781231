//! In-memory buffer of edge updates not yet folded into the stored tables.

use std::collections::{BTreeSet, HashMap};

use crate::store::NodeId;

pub const DEFAULT_BUFFER_CAPACITY: usize = 1 << 20;

/// Pending inserted and deleted neighbors per node.
///
/// Entries are kept symmetric (`u ∈ inserted(v)` iff `v ∈ inserted(u)`), and
/// an insert cancels a pending delete of the same edge and vice versa, so a
/// node never appears in both sets of another node.
#[derive(Debug, Clone)]
pub struct UpdateBuffer {
    inserted: HashMap<NodeId, BTreeSet<NodeId>>,
    deleted: HashMap<NodeId, BTreeSet<NodeId>>,
    pending: usize,
    capacity: usize,
}

impl UpdateBuffer {
    pub fn new(capacity: usize) -> Self {
        UpdateBuffer {
            inserted: HashMap::new(),
            deleted: HashMap::new(),
            pending: 0,
            capacity,
        }
    }

    /// Number of pending directed entries (two per buffered edge).
    pub fn pending_count(&self) -> usize {
        self.pending
    }

    pub fn capacity(&self) -> usize {
        self.capacity
    }

    pub fn is_empty(&self) -> bool {
        self.pending == 0
    }

    pub fn is_over_capacity(&self) -> bool {
        self.pending > self.capacity
    }

    pub fn inserted(&self, v: NodeId) -> Option<&BTreeSet<NodeId>> {
        self.inserted.get(&v)
    }

    pub fn deleted(&self, v: NodeId) -> Option<&BTreeSet<NodeId>> {
        self.deleted.get(&v)
    }

    pub fn is_inserted(&self, u: NodeId, v: NodeId) -> bool {
        self.inserted.get(&u).is_some_and(|s| s.contains(&v))
    }

    pub fn is_deleted(&self, u: NodeId, v: NodeId) -> bool {
        self.deleted.get(&u).is_some_and(|s| s.contains(&v))
    }

    /// Signed change of `v`'s degree relative to its stored list.
    pub fn degree_delta(&self, v: NodeId) -> i64 {
        let ins = self.inserted.get(&v).map_or(0, |s| s.len());
        let del = self.deleted.get(&v).map_or(0, |s| s.len());
        ins as i64 - del as i64
    }

    /// Record the insertion of an edge that is absent from the effective graph.
    pub fn record_insert(&mut self, u: NodeId, v: NodeId) {
        if self.is_deleted(u, v) {
            remove_pair(&mut self.deleted, u, v);
            self.pending -= 2;
        } else {
            add_pair(&mut self.inserted, u, v);
            self.pending += 2;
        }
    }

    /// Record the deletion of an edge that is present in the effective graph.
    pub fn record_delete(&mut self, u: NodeId, v: NodeId) {
        if self.is_inserted(u, v) {
            remove_pair(&mut self.inserted, u, v);
            self.pending -= 2;
        } else {
            add_pair(&mut self.deleted, u, v);
            self.pending += 2;
        }
    }

    pub fn clear(&mut self) {
        self.inserted.clear();
        self.deleted.clear();
        self.pending = 0;
    }

    /// Merge `stored` (ascending) with the pending changes of `v` into `out`.
    pub fn merge_into(&self, v: NodeId, stored: &[NodeId], out: &mut Vec<NodeId>) {
        out.clear();
        let deleted = self.deleted.get(&v);
        let mut inserted = self
            .inserted
            .get(&v)
            .into_iter()
            .flatten()
            .copied()
            .peekable();
        for &w in stored {
            while let Some(&i) = inserted.peek() {
                if i < w {
                    out.push(i);
                    inserted.next();
                } else {
                    break;
                }
            }
            if deleted.is_some_and(|d| d.contains(&w)) {
                continue;
            }
            out.push(w);
        }
        out.extend(inserted);
    }
}

fn add_pair(map: &mut HashMap<NodeId, BTreeSet<NodeId>>, u: NodeId, v: NodeId) {
    map.entry(u).or_default().insert(v);
    map.entry(v).or_default().insert(u);
}

fn remove_pair(map: &mut HashMap<NodeId, BTreeSet<NodeId>>, u: NodeId, v: NodeId) {
    for (a, b) in [(u, v), (v, u)] {
        if let Some(set) = map.get_mut(&a) {
            set.remove(&b);
            if set.is_empty() {
                map.remove(&a);
            }
        }
    }
}
