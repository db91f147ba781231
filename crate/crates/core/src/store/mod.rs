//! Disk-resident graph storage.
//!
//! A [`DiskGraph`] keeps the node table (offset and degree per node) in
//! memory and reads adjacency lists from the edge table on demand. Edge
//! updates go to an in-memory [`UpdateBuffer`] and are merged into every
//! adjacency read until the buffer overflows and is flushed to disk.

mod buffer;
mod build;
pub mod format;
mod io;

use std::fs::File;
use std::os::unix::fs::FileExt;
use std::path::{Path, PathBuf};

pub use buffer::{UpdateBuffer, DEFAULT_BUFFER_CAPACITY};
pub use build::{build_from_edge_list, BuildStats};
pub use format::{GraphHeader, NodeIndexEntry};
pub use io::{IoAccountant, IoStats, TableFile, DEFAULT_BLOCK_SIZE};

use crate::error::{Error, Result};
use format::{TableWriter, EDGES_FILE, ID_WIDTH, NODE_RECORD_LEN};

/// Dense node identifier in `[0, n)`.
pub type NodeId = u32;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum UpdateKind {
    Insert,
    Delete,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct StoreOptions {
    /// Block size `B` in bytes used for I/O accounting.
    pub block_size: u64,
    /// Pending directed entries tolerated before the buffer is flushed.
    pub buffer_capacity: usize,
}

impl Default for StoreOptions {
    fn default() -> Self {
        StoreOptions {
            block_size: DEFAULT_BLOCK_SIZE,
            buffer_capacity: DEFAULT_BUFFER_CAPACITY,
        }
    }
}

impl StoreOptions {
    pub fn validate(&self) -> Result<()> {
        if self.block_size < 64 || !self.block_size.is_power_of_two() {
            return Err(Error::InvalidArgument(format!(
                "block size must be a power of two >= 64, got {}",
                self.block_size
            )));
        }
        Ok(())
    }
}

pub struct DiskGraph {
    dir: PathBuf,
    header: GraphHeader,
    nodes: Vec<NodeIndexEntry>,
    edge_file: File,
    buffer: UpdateBuffer,
    io: IoAccountant,
    /// Net number of buffered edge insertions minus deletions.
    edge_delta: i64,
    raw: Vec<u8>,
    stored: Vec<NodeId>,
}

impl std::fmt::Debug for DiskGraph {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("DiskGraph")
            .field("dir", &self.dir)
            .field("header", &self.header)
            .field("pending", &self.buffer.pending_count())
            .field("io", &self.io.snapshot())
            .finish()
    }
}

impl DiskGraph {
    /// Open the tables in `dir`.
    pub fn open(dir: impl AsRef<Path>, options: StoreOptions) -> Result<Self> {
        options.validate()?;
        let dir = dir.as_ref().to_path_buf();
        let header = format::read_header(&dir)?;
        let nodes = format::read_node_table(&dir, &header)?;
        if header.n > NodeId::MAX as u64 + 1 {
            return Err(Error::Format {
                path: dir.join(format::META_FILE),
                reason: format!("{} nodes exceed 32-bit ids", header.n),
            });
        }
        let edge_path = dir.join(EDGES_FILE);
        let edge_file = File::open(&edge_path).map_err(|e| Error::storage(&edge_path, e))?;
        Ok(DiskGraph {
            dir,
            header,
            nodes,
            edge_file,
            buffer: UpdateBuffer::new(options.buffer_capacity),
            io: IoAccountant::new(options.block_size),
            edge_delta: 0,
            raw: Vec::new(),
            stored: Vec::new(),
        })
    }

    /// Write a simple undirected graph on nodes `0..n` to `dir` and open it.
    /// Self-loops, duplicate edges and out-of-range endpoints are rejected.
    pub fn create(
        dir: impl AsRef<Path>,
        n: usize,
        edges: &[(NodeId, NodeId)],
        options: StoreOptions,
    ) -> Result<Self> {
        options.validate()?;
        let mut adjacency: Vec<Vec<NodeId>> = vec![Vec::new(); n];
        for &(u, v) in edges {
            for w in [u, v] {
                if w as usize >= n {
                    return Err(Error::OutOfRange {
                        node: w as u64,
                        n: n as u64,
                    });
                }
            }
            if u == v {
                return Err(Error::SelfLoop(u));
            }
            adjacency[u as usize].push(v);
            adjacency[v as usize].push(u);
        }
        let mut writer = TableWriter::create(dir.as_ref())?;
        for (u, list) in adjacency.iter_mut().enumerate() {
            list.sort_unstable();
            if let Some(w) = list.windows(2).find(|w| w[0] == w[1]) {
                return Err(Error::DuplicateEdge(u as NodeId, w[0]));
            }
            writer.push_node(list)?;
        }
        writer.commit()?;
        Self::open(dir, options)
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    /// Number of nodes.
    pub fn n(&self) -> usize {
        self.header.n as usize
    }

    /// Current (effective) number of undirected edges.
    pub fn m(&self) -> u64 {
        (self.header.m as i64 + self.edge_delta) as u64
    }

    /// Header of the stored tables (excludes buffered updates).
    pub fn header(&self) -> GraphHeader {
        self.header
    }

    pub fn node_entry(&self, v: NodeId) -> Result<NodeIndexEntry> {
        self.check(v)?;
        Ok(self.nodes[v as usize])
    }

    /// Effective degree, answered from the resident node table and the
    /// buffer without touching the edge table.
    pub fn degree(&self, v: NodeId) -> Result<u32> {
        self.check(v)?;
        Ok(self.degree_unchecked(v))
    }

    fn degree_unchecked(&self, v: NodeId) -> u32 {
        (self.nodes[v as usize].degree as i64 + self.buffer.degree_delta(v)) as u32
    }

    pub fn degrees(&self) -> Vec<u32> {
        (0..self.n() as NodeId)
            .map(|v| self.degree_unchecked(v))
            .collect()
    }

    pub fn max_degree(&self) -> u32 {
        (0..self.n() as NodeId)
            .map(|v| self.degree_unchecked(v))
            .max()
            .unwrap_or(0)
    }

    pub fn buffer(&self) -> &UpdateBuffer {
        &self.buffer
    }

    pub fn io_report(&self) -> IoStats {
        self.io.snapshot()
    }

    /// Effective adjacency of `v`, ascending.
    pub fn neighbors(&mut self, v: NodeId) -> Result<Vec<NodeId>> {
        let mut out = Vec::new();
        self.neighbors_into(v, &mut out)?;
        Ok(out)
    }

    /// Like [`DiskGraph::neighbors`] but reuses `out`'s allocation.
    ///
    /// Charges one node-table record and the stored list's bytes as reads;
    /// sequential calls in id order therefore cost one pass over each table.
    pub fn neighbors_into(&mut self, v: NodeId, out: &mut Vec<NodeId>) -> Result<()> {
        self.check(v)?;
        let touched = self.buffer.inserted(v).is_some() || self.buffer.deleted(v).is_some();
        if touched {
            let mut stored = std::mem::take(&mut self.stored);
            let res = self.read_stored(v, &mut stored);
            if res.is_ok() {
                self.buffer.merge_into(v, &stored, out);
            }
            self.stored = stored;
            res
        } else {
            self.read_stored(v, out)
        }
    }

    fn read_stored(&mut self, v: NodeId, out: &mut Vec<NodeId>) -> Result<()> {
        let entry = self.nodes[v as usize];
        self.io.charge_read(
            TableFile::Nodes,
            v as u64 * NODE_RECORD_LEN as u64,
            NODE_RECORD_LEN as u64,
        );
        out.clear();
        if entry.degree == 0 {
            return Ok(());
        }
        let offset = entry.offset * ID_WIDTH as u64;
        let len = entry.degree as usize * ID_WIDTH as usize;
        self.raw.resize(len, 0);
        self.edge_file
            .read_exact_at(&mut self.raw, offset)
            .map_err(|e| Error::storage(self.dir.join(EDGES_FILE), e))?;
        self.io.charge_read(TableFile::Edges, offset, len as u64);
        out.extend(
            self.raw
                .chunks_exact(ID_WIDTH as usize)
                .map(|c| NodeId::from_le_bytes(c.try_into().unwrap())),
        );
        Ok(())
    }

    /// Whether `{u, v}` is in the effective graph.
    pub fn has_edge(&mut self, u: NodeId, v: NodeId) -> Result<bool> {
        self.check(u)?;
        self.check(v)?;
        if u == v {
            return Ok(false);
        }
        if self.buffer.is_inserted(u, v) {
            return Ok(true);
        }
        if self.buffer.is_deleted(u, v) {
            return Ok(false);
        }
        // probe the shorter stored list
        let (a, b) = if self.nodes[u as usize].degree <= self.nodes[v as usize].degree {
            (u, v)
        } else {
            (v, u)
        };
        let mut stored = std::mem::take(&mut self.stored);
        let res = self.read_stored(a, &mut stored);
        let found = stored.binary_search(&b).is_ok();
        self.stored = stored;
        res.map(|_| found)
    }

    /// Apply one edge update to the effective graph. Flushes when the buffer
    /// exceeds its capacity.
    pub fn apply_edge_update(&mut self, kind: UpdateKind, u: NodeId, v: NodeId) -> Result<()> {
        self.check(u)?;
        self.check(v)?;
        if u == v {
            return Err(Error::SelfLoop(u));
        }
        let present = self.has_edge(u, v)?;
        match kind {
            UpdateKind::Insert => {
                if present {
                    return Err(Error::DuplicateEdge(u, v));
                }
                self.buffer.record_insert(u, v);
                self.edge_delta += 1;
            }
            UpdateKind::Delete => {
                if !present {
                    return Err(Error::MissingEdge(u, v));
                }
                self.buffer.record_delete(u, v);
                self.edge_delta -= 1;
            }
        }
        if self.buffer.is_over_capacity() {
            self.flush()?;
        }
        Ok(())
    }

    /// Rewrite the tables to encode the effective graph and clear the buffer.
    ///
    /// New tables are written next to the old ones and renamed into place,
    /// so a failed flush leaves the previous tables readable.
    pub fn flush(&mut self) -> Result<()> {
        if self.buffer.is_empty() {
            return Ok(());
        }
        log::debug!(
            "flushing {} pending entries in {}",
            self.buffer.pending_count(),
            self.dir.display()
        );
        let mut writer = TableWriter::create(&self.dir)?;
        let mut list = Vec::new();
        for v in 0..self.n() as NodeId {
            self.neighbors_into(v, &mut list)?;
            writer.push_node(&list)?;
        }
        let written = writer.commit()?;
        self.io
            .charge_write(TableFile::Nodes, 0, written.node_bytes);
        self.io
            .charge_write(TableFile::Edges, 0, written.edge_bytes);
        self.io.charge_write(TableFile::Meta, 0, written.meta_bytes);
        self.io.reset_locality();

        let edge_path = self.dir.join(EDGES_FILE);
        self.edge_file = File::open(&edge_path).map_err(|e| Error::storage(&edge_path, e))?;
        self.header = written.header;
        self.nodes = format::read_node_table(&self.dir, &self.header)?;
        self.buffer.clear();
        self.edge_delta = 0;
        Ok(())
    }

    /// Every effective edge once as `(u, v)` with `u < v`, ascending.
    pub fn edge_list(&mut self) -> Result<Vec<(NodeId, NodeId)>> {
        let mut edges = Vec::with_capacity(self.m() as usize);
        let mut list = Vec::new();
        for u in 0..self.n() as NodeId {
            self.neighbors_into(u, &mut list)?;
            edges.extend(list.iter().filter(|&&v| v > u).map(|&v| (u, v)));
        }
        Ok(edges)
    }

    fn check(&self, v: NodeId) -> Result<()> {
        if (v as u64) < self.header.n {
            Ok(())
        } else {
            Err(Error::OutOfRange {
                node: v as u64,
                n: self.header.n,
            })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::verify::sample_graph_g9;

    fn g9(dir: &Path) -> DiskGraph {
        let g = sample_graph_g9();
        DiskGraph::create(dir, g.n, &g.edges, StoreOptions::default()).unwrap()
    }

    #[test]
    fn g9_adjacency() {
        let dir = tempfile::tempdir().unwrap();
        let mut g = g9(dir.path());
        assert_eq!(g.neighbors(5).unwrap(), vec![3, 4, 6, 7, 8]);
        assert_eq!(g.neighbors(8).unwrap(), vec![5]);
        assert_eq!(g.m(), 15);
        assert_eq!(g.degrees(), vec![3, 3, 4, 6, 3, 5, 3, 2, 1]);
    }

    #[test]
    fn out_of_range_is_rejected() {
        let dir = tempfile::tempdir().unwrap();
        let mut g = g9(dir.path());
        assert!(matches!(
            g.neighbors(9),
            Err(Error::OutOfRange { node: 9, n: 9 })
        ));
        assert!(g.apply_edge_update(UpdateKind::Insert, 0, 12).is_err());
    }

    #[test]
    fn isolated_node_has_no_neighbors() {
        let dir = tempfile::tempdir().unwrap();
        let mut g = DiskGraph::create(dir.path(), 3, &[(0, 1)], StoreOptions::default()).unwrap();
        assert!(g.neighbors(2).unwrap().is_empty());
    }

    #[test]
    fn delete_and_insert_through_buffer() {
        let dir = tempfile::tempdir().unwrap();
        let mut g = g9(dir.path());
        g.apply_edge_update(UpdateKind::Delete, 0, 1).unwrap();
        assert_eq!(g.neighbors(0).unwrap(), vec![2, 3]);
        assert_eq!(g.neighbors(1).unwrap(), vec![2, 3]);
        assert_eq!(g.m(), 14);

        g.apply_edge_update(UpdateKind::Insert, 7, 8).unwrap();
        assert_eq!(g.neighbors(8).unwrap(), vec![5, 7]);
        assert_eq!(g.degree(8).unwrap(), 2);
    }

    #[test]
    fn delete_then_insert_restores() {
        let dir = tempfile::tempdir().unwrap();
        let mut g = g9(dir.path());
        let before: Vec<_> = (0..9).map(|v| g.neighbors(v).unwrap()).collect();
        g.apply_edge_update(UpdateKind::Delete, 3, 5).unwrap();
        g.apply_edge_update(UpdateKind::Insert, 5, 3).unwrap();
        assert!(g.buffer().is_empty());
        assert!(g.buffer().inserted(3).is_none() && g.buffer().deleted(5).is_none());
        let after: Vec<_> = (0..9).map(|v| g.neighbors(v).unwrap()).collect();
        assert_eq!(before, after);
    }

    #[test]
    fn update_errors() {
        let dir = tempfile::tempdir().unwrap();
        let mut g = g9(dir.path());
        assert!(matches!(
            g.apply_edge_update(UpdateKind::Insert, 0, 1),
            Err(Error::DuplicateEdge(0, 1))
        ));
        assert!(matches!(
            g.apply_edge_update(UpdateKind::Delete, 0, 8),
            Err(Error::MissingEdge(0, 8))
        ));
        assert!(matches!(
            g.apply_edge_update(UpdateKind::Insert, 4, 4),
            Err(Error::SelfLoop(4))
        ));
        g.apply_edge_update(UpdateKind::Delete, 0, 1).unwrap();
        assert!(matches!(
            g.apply_edge_update(UpdateKind::Delete, 1, 0),
            Err(Error::MissingEdge(1, 0))
        ));
    }

    #[test]
    fn flush_rewrites_tables() {
        let dir = tempfile::tempdir().unwrap();
        let mut g = g9(dir.path());
        let w0 = g.io_report().write_ios;
        g.flush().unwrap();
        assert_eq!(g.io_report().write_ios, w0, "empty flush is a no-op");

        g.apply_edge_update(UpdateKind::Delete, 0, 1).unwrap();
        let before: Vec<_> = (0..9).map(|v| g.neighbors(v).unwrap()).collect();
        g.flush().unwrap();
        assert!(g.buffer().is_empty());
        assert_eq!(g.node_entry(0).unwrap().degree, 2);
        assert_eq!(g.header().m, 14);
        // nodes, edges and meta each fit in one 4 KiB block
        assert_eq!(g.io_report().write_ios, 3);
        let after: Vec<_> = (0..9).map(|v| g.neighbors(v).unwrap()).collect();
        assert_eq!(before, after);

        let mut reopened = DiskGraph::open(dir.path(), StoreOptions::default()).unwrap();
        assert_eq!(reopened.m(), 14);
        assert_eq!(reopened.neighbors(0).unwrap(), vec![2, 3]);
    }

    #[test]
    fn buffer_overflow_triggers_flush() {
        let dir = tempfile::tempdir().unwrap();
        let g = sample_graph_g9();
        let opts = StoreOptions {
            buffer_capacity: 3,
            ..StoreOptions::default()
        };
        let mut g = DiskGraph::create(dir.path(), g.n, &g.edges, opts).unwrap();
        g.apply_edge_update(UpdateKind::Delete, 0, 1).unwrap();
        assert_eq!(g.buffer().pending_count(), 2);
        assert_eq!(g.io_report().write_ios, 0);
        g.apply_edge_update(UpdateKind::Insert, 7, 8).unwrap();
        assert_eq!(g.buffer().pending_count(), 0);
        assert!(g.io_report().write_ios > 0);
        assert_eq!(g.header().m, 15);
        assert_eq!(g.neighbors(8).unwrap(), vec![5, 7]);
    }

    #[test]
    fn neighbors_never_writes() {
        let dir = tempfile::tempdir().unwrap();
        let mut g = g9(dir.path());
        for v in 0..9 {
            g.neighbors(v).unwrap();
        }
        let io = g.io_report();
        assert_eq!(io.write_ios, 0);
        // one block of node records and one of edges for a full pass
        assert_eq!(io.read_ios, 2);
    }

    #[test]
    fn create_rejects_bad_edges() {
        let dir = tempfile::tempdir().unwrap();
        let opts = StoreOptions::default();
        assert!(DiskGraph::create(dir.path(), 2, &[(0, 0)], opts).is_err());
        assert!(DiskGraph::create(dir.path(), 2, &[(0, 1), (1, 0)], opts).is_err());
        assert!(DiskGraph::create(dir.path(), 2, &[(0, 2)], opts).is_err());
    }

    #[test]
    fn options_validation() {
        let ok = StoreOptions::default();
        assert!(ok.validate().is_ok());
        for bad in [0, 32, 100, 4095] {
            let o = StoreOptions {
                block_size: bad,
                ..ok
            };
            assert!(o.validate().is_err(), "{bad}");
        }
    }
}
