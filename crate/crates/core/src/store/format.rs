//! On-disk layout.
//!
//! ```text
//! meta.bin   "SCGR" | version u32 | n u64 | m u64 | id_width u8 | 7 zero bytes
//! nodes.bin  n records of (offset u64, degree u32), offset in neighbor slots
//! edges.bin  2m u32 neighbor ids, each node's list ascending
//! ```
//!
//! All integers are little-endian.

use std::fs::{self, File};
use std::io::{BufWriter, Read, Write};
use std::path::{Path, PathBuf};

use crate::error::{Error, Result};
use crate::store::NodeId;

pub const MAGIC: [u8; 4] = *b"SCGR";
pub const VERSION: u32 = 1;
pub const ID_WIDTH: u8 = 4;
pub const META_LEN: usize = 32;
pub const NODE_RECORD_LEN: usize = 12;

pub const META_FILE: &str = "meta.bin";
pub const NODES_FILE: &str = "nodes.bin";
pub const EDGES_FILE: &str = "edges.bin";
pub const IDMAP_FILE: &str = "idmap.tsv";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GraphHeader {
    pub n: u64,
    pub m: u64,
}

impl GraphHeader {
    pub fn encode(&self) -> [u8; META_LEN] {
        let mut buf = [0u8; META_LEN];
        buf[0..4].copy_from_slice(&MAGIC);
        buf[4..8].copy_from_slice(&VERSION.to_le_bytes());
        buf[8..16].copy_from_slice(&self.n.to_le_bytes());
        buf[16..24].copy_from_slice(&self.m.to_le_bytes());
        buf[24] = ID_WIDTH;
        buf
    }

    pub fn decode(buf: &[u8], path: &Path) -> Result<Self> {
        let bad = |reason: &str| Error::Format {
            path: path.to_path_buf(),
            reason: reason.to_string(),
        };
        if buf.len() != META_LEN {
            return Err(bad("header must be 32 bytes"));
        }
        if buf[0..4] != MAGIC {
            return Err(bad("bad magic"));
        }
        let version = u32::from_le_bytes(buf[4..8].try_into().unwrap());
        if version != VERSION {
            return Err(bad(&format!("unsupported version {version}")));
        }
        if buf[24] != ID_WIDTH {
            return Err(bad(&format!("unsupported id width {}", buf[24])));
        }
        if buf[25..].iter().any(|&b| b != 0) {
            return Err(bad("reserved bytes must be zero"));
        }
        Ok(GraphHeader {
            n: u64::from_le_bytes(buf[8..16].try_into().unwrap()),
            m: u64::from_le_bytes(buf[16..24].try_into().unwrap()),
        })
    }
}

/// Node-table record: where a node's stored adjacency list starts (in
/// neighbor slots) and how long it is.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct NodeIndexEntry {
    pub offset: u64,
    pub degree: u32,
}

impl NodeIndexEntry {
    pub fn encode(&self) -> [u8; NODE_RECORD_LEN] {
        let mut buf = [0u8; NODE_RECORD_LEN];
        buf[0..8].copy_from_slice(&self.offset.to_le_bytes());
        buf[8..12].copy_from_slice(&self.degree.to_le_bytes());
        buf
    }

    pub fn decode(buf: &[u8]) -> Self {
        NodeIndexEntry {
            offset: u64::from_le_bytes(buf[0..8].try_into().unwrap()),
            degree: u32::from_le_bytes(buf[8..12].try_into().unwrap()),
        }
    }
}

pub fn read_header(dir: &Path) -> Result<GraphHeader> {
    let path = dir.join(META_FILE);
    let mut buf = Vec::with_capacity(META_LEN);
    File::open(&path)
        .and_then(|mut f| f.read_to_end(&mut buf))
        .map_err(|e| Error::storage(&path, e))?;
    GraphHeader::decode(&buf, &path)
}

/// Load and validate the node table against the header and the edge file.
pub fn read_node_table(dir: &Path, header: &GraphHeader) -> Result<Vec<NodeIndexEntry>> {
    let path = dir.join(NODES_FILE);
    let bytes = fs::read(&path).map_err(|e| Error::storage(&path, e))?;
    let bad = |reason: String| Error::Format {
        path: path.clone(),
        reason,
    };
    if bytes.len() as u64 != header.n * NODE_RECORD_LEN as u64 {
        return Err(bad(format!(
            "expected {} records, file holds {} bytes",
            header.n,
            bytes.len()
        )));
    }
    let table: Vec<NodeIndexEntry> = bytes
        .chunks_exact(NODE_RECORD_LEN)
        .map(NodeIndexEntry::decode)
        .collect();
    let mut expected = 0u64;
    for (v, entry) in table.iter().enumerate() {
        if entry.offset != expected {
            return Err(bad(format!(
                "node {v}: offset {} != {expected}",
                entry.offset
            )));
        }
        expected += entry.degree as u64;
    }
    if expected != 2 * header.m {
        return Err(bad(format!(
            "degree sum {expected} does not match 2m = {}",
            2 * header.m
        )));
    }
    let edges = dir.join(EDGES_FILE);
    let edge_len = fs::metadata(&edges)
        .map_err(|e| Error::storage(&edges, e))?
        .len();
    if edge_len != 2 * header.m * ID_WIDTH as u64 {
        return Err(Error::Format {
            path: edges,
            reason: format!(
                "expected {} slots, file holds {edge_len} bytes",
                2 * header.m
            ),
        });
    }
    Ok(table)
}

/// Byte counts of a freshly written table set.
#[derive(Debug, Clone, Copy)]
pub struct WrittenTables {
    pub header: GraphHeader,
    pub meta_bytes: u64,
    pub node_bytes: u64,
    pub edge_bytes: u64,
}

/// Streams per-node adjacency lists into temp files and atomically renames
/// them over the live tables on [`TableWriter::commit`]. Dropping an
/// uncommitted writer leaves the existing tables untouched.
pub struct TableWriter {
    dir: PathBuf,
    nodes: BufWriter<File>,
    edges: BufWriter<File>,
    next_offset: u64,
    node_count: u64,
    committed: bool,
}

impl TableWriter {
    pub fn create(dir: &Path) -> Result<Self> {
        fs::create_dir_all(dir).map_err(|e| Error::storage(dir, e))?;
        let open = |name: &str| -> Result<BufWriter<File>> {
            let path = tmp_path(dir, name);
            File::create(&path)
                .map(BufWriter::new)
                .map_err(|e| Error::storage(&path, e))
        };
        Ok(TableWriter {
            dir: dir.to_path_buf(),
            nodes: open(NODES_FILE)?,
            edges: open(EDGES_FILE)?,
            next_offset: 0,
            node_count: 0,
            committed: false,
        })
    }

    /// Append the next node's (sorted, duplicate-free) adjacency list.
    pub fn push_node(&mut self, neighbors: &[NodeId]) -> Result<()> {
        let entry = NodeIndexEntry {
            offset: self.next_offset,
            degree: neighbors.len() as u32,
        };
        self.nodes
            .write_all(&entry.encode())
            .map_err(|e| Error::storage(tmp_path(&self.dir, NODES_FILE), e))?;
        for &u in neighbors {
            self.edges
                .write_all(&u.to_le_bytes())
                .map_err(|e| Error::storage(tmp_path(&self.dir, EDGES_FILE), e))?;
        }
        self.next_offset += neighbors.len() as u64;
        self.node_count += 1;
        Ok(())
    }

    pub fn commit(mut self) -> Result<WrittenTables> {
        if !self.next_offset.is_multiple_of(2) {
            return Err(Error::InvalidArgument(format!(
                "odd number of neighbor slots ({}); adjacency is not symmetric",
                self.next_offset
            )));
        }
        let header = GraphHeader {
            n: self.node_count,
            m: self.next_offset / 2,
        };
        for (writer, name) in [(&mut self.nodes, NODES_FILE), (&mut self.edges, EDGES_FILE)] {
            writer
                .flush()
                .and_then(|_| writer.get_ref().sync_all())
                .map_err(|e| Error::storage(tmp_path(&self.dir, name), e))?;
        }
        let meta_tmp = tmp_path(&self.dir, META_FILE);
        fs::write(&meta_tmp, header.encode()).map_err(|e| Error::storage(&meta_tmp, e))?;

        // meta.bin goes last so a crash mid-commit never pairs a new header
        // with old tables of a different size
        for name in [EDGES_FILE, NODES_FILE, META_FILE] {
            let from = tmp_path(&self.dir, name);
            let to = self.dir.join(name);
            fs::rename(&from, &to).map_err(|e| Error::storage(&to, e))?;
        }
        self.committed = true;
        Ok(WrittenTables {
            header,
            meta_bytes: META_LEN as u64,
            node_bytes: self.node_count * NODE_RECORD_LEN as u64,
            edge_bytes: self.next_offset * ID_WIDTH as u64,
        })
    }
}

impl Drop for TableWriter {
    fn drop(&mut self) {
        if !self.committed {
            for name in [NODES_FILE, EDGES_FILE, META_FILE] {
                let _ = fs::remove_file(tmp_path(&self.dir, name));
            }
        }
    }
}

fn tmp_path(dir: &Path, name: &str) -> PathBuf {
    dir.join(format!("{name}.tmp"))
}
