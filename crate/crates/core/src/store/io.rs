//! Block-granular I/O accounting in the external-memory model.
//!
//! Every read or write against the graph files is charged in units of blocks
//! of `block_size` bytes. A per-file memo of the last block touched lets a
//! sequential pass issued as many small reads cost the same as one large
//! read.

use serde::Serialize;

pub const DEFAULT_BLOCK_SIZE: u64 = 4096;

/// The files that make up a stored graph.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TableFile {
    Meta,
    Nodes,
    Edges,
}

impl TableFile {
    fn slot(self) -> usize {
        match self {
            TableFile::Meta => 0,
            TableFile::Nodes => 1,
            TableFile::Edges => 2,
        }
    }
}

/// Snapshot of the accountant's counters.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct IoStats {
    pub block_size: u64,
    pub read_ios: u64,
    pub write_ios: u64,
    pub bytes_read: u64,
    pub bytes_written: u64,
}

impl IoStats {
    /// Counter deltas from `earlier` to `self`.
    pub fn since(&self, earlier: &IoStats) -> IoStats {
        IoStats {
            block_size: self.block_size,
            read_ios: self.read_ios - earlier.read_ios,
            write_ios: self.write_ios - earlier.write_ios,
            bytes_read: self.bytes_read - earlier.bytes_read,
            bytes_written: self.bytes_written - earlier.bytes_written,
        }
    }
}

#[derive(Debug, Clone)]
pub struct IoAccountant {
    block_size: u64,
    read_ios: u64,
    write_ios: u64,
    bytes_read: u64,
    bytes_written: u64,
    last_read_block: [Option<u64>; 3],
    last_write_block: [Option<u64>; 3],
}

impl Default for IoAccountant {
    fn default() -> Self {
        Self::new(DEFAULT_BLOCK_SIZE)
    }
}

impl IoAccountant {
    /// `block_size` must be non-zero; callers validate it beforehand.
    pub fn new(block_size: u64) -> Self {
        assert!(block_size > 0, "block size must be positive");
        IoAccountant {
            block_size,
            read_ios: 0,
            write_ios: 0,
            bytes_read: 0,
            bytes_written: 0,
            last_read_block: [None; 3],
            last_write_block: [None; 3],
        }
    }

    pub fn block_size(&self) -> u64 {
        self.block_size
    }

    /// Charge a contiguous read of `len` bytes at byte `offset` of `file`.
    pub fn charge_read(&mut self, file: TableFile, offset: u64, len: u64) {
        let blocks = charge(
            self.block_size,
            &mut self.last_read_block[file.slot()],
            offset,
            len,
        );
        self.read_ios += blocks;
        self.bytes_read += len;
    }

    /// Charge a contiguous write of `len` bytes at byte `offset` of `file`.
    pub fn charge_write(&mut self, file: TableFile, offset: u64, len: u64) {
        let blocks = charge(
            self.block_size,
            &mut self.last_write_block[file.slot()],
            offset,
            len,
        );
        self.write_ios += blocks;
        self.bytes_written += len;
    }

    /// Forget the last-block memos, e.g. after the files were replaced.
    pub fn reset_locality(&mut self) {
        self.last_read_block = [None; 3];
        self.last_write_block = [None; 3];
    }

    pub fn snapshot(&self) -> IoStats {
        IoStats {
            block_size: self.block_size,
            read_ios: self.read_ios,
            write_ios: self.write_ios,
            bytes_read: self.bytes_read,
            bytes_written: self.bytes_written,
        }
    }
}

fn charge(block_size: u64, memo: &mut Option<u64>, offset: u64, len: u64) -> u64 {
    if len == 0 {
        return 0;
    }
    let first = offset / block_size;
    let last = (offset + len - 1) / block_size;
    let mut blocks = last - first + 1;
    if *memo == Some(first) {
        blocks -= 1;
    }
    *memo = Some(last);
    blocks
}
