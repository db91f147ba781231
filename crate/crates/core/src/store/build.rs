//! Conversion from whitespace-separated edge lists (SNAP style).

use std::collections::BTreeSet;
use std::fs::File;
use std::io::{BufRead, BufWriter, Write};
use std::path::Path;

use crate::error::{Error, Result};
use crate::store::format::{TableWriter, IDMAP_FILE};
use crate::store::{DiskGraph, NodeId, StoreOptions};

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct BuildStats {
    pub n: u64,
    pub m: u64,
    pub skipped_self_loops: u64,
    pub skipped_duplicates: u64,
}

/// Convert an edge list into node/edge tables under `out_dir`.
///
/// Original ids are remapped densely in ascending order (every id that
/// appears on any edge line, self-loops included) and the mapping is written
/// to `idmap.tsv`. Self-loops and repeated edges in either orientation are
/// skipped and counted.
pub fn build_from_edge_list<R: BufRead>(
    input: R,
    out_dir: impl AsRef<Path>,
    options: StoreOptions,
) -> Result<(DiskGraph, BuildStats)> {
    options.validate()?;
    let out_dir = out_dir.as_ref();
    let mut stats = BuildStats::default();
    let mut pairs: Vec<(u64, u64)> = Vec::new();
    let mut ids = BTreeSet::new();

    for (idx, line) in input.lines().enumerate() {
        let line_no = idx + 1;
        let line = line?;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let mut tokens = trimmed.split_whitespace();
        let (Some(a), Some(b), None) = (tokens.next(), tokens.next(), tokens.next()) else {
            return Err(Error::Parse {
                line: line_no,
                reason: format!("expected two node ids, got {trimmed:?}"),
            });
        };
        let parse = |t: &str| {
            t.parse::<u64>().map_err(|e| Error::Parse {
                line: line_no,
                reason: format!("bad node id {t:?}: {e}"),
            })
        };
        let (u, v) = (parse(a)?, parse(b)?);
        ids.insert(u);
        ids.insert(v);
        if u == v {
            stats.skipped_self_loops += 1;
            continue;
        }
        pairs.push((u.min(v), u.max(v)));
    }

    if ids.len() as u64 > NodeId::MAX as u64 + 1 {
        return Err(Error::InvalidArgument(format!(
            "{} distinct node ids exceed 32-bit dense ids",
            ids.len()
        )));
    }
    let before = pairs.len();
    pairs.sort_unstable();
    pairs.dedup();
    stats.skipped_duplicates = (before - pairs.len()) as u64;
    stats.n = ids.len() as u64;
    stats.m = pairs.len() as u64;

    // originals are ascending in `ids`, so ranks are the dense ids
    let originals: Vec<u64> = ids.into_iter().collect();
    let dense = |orig: u64| originals.binary_search(&orig).unwrap() as NodeId;

    let n = originals.len();
    let mut degree = vec![0usize; n];
    for &(u, v) in &pairs {
        degree[dense(u) as usize] += 1;
        degree[dense(v) as usize] += 1;
    }
    let mut start = Vec::with_capacity(n + 1);
    start.push(0usize);
    for d in &degree {
        start.push(start.last().unwrap() + d);
    }
    let mut slots = vec![0 as NodeId; 2 * pairs.len()];
    let mut fill = start.clone();
    for &(u, v) in &pairs {
        let (du, dv) = (dense(u), dense(v));
        slots[fill[du as usize]] = dv;
        fill[du as usize] += 1;
        slots[fill[dv as usize]] = du;
        fill[dv as usize] += 1;
    }
    drop(pairs);

    let mut writer = TableWriter::create(out_dir)?;
    for v in 0..n {
        let list = &mut slots[start[v]..start[v + 1]];
        list.sort_unstable();
        writer.push_node(list)?;
    }
    writer.commit()?;
    write_idmap(out_dir, &originals)?;

    if stats.skipped_self_loops > 0 || stats.skipped_duplicates > 0 {
        log::warn!(
            "skipped {} self-loops and {} duplicate edges",
            stats.skipped_self_loops,
            stats.skipped_duplicates
        );
    }
    let graph = DiskGraph::open(out_dir, options)?;
    Ok((graph, stats))
}

fn write_idmap(dir: &Path, originals: &[u64]) -> Result<()> {
    let path = dir.join(IDMAP_FILE);
    let file = File::create(&path).map_err(|e| Error::storage(&path, e))?;
    let mut w = BufWriter::new(file);
    for (dense, orig) in originals.iter().enumerate() {
        writeln!(w, "{orig}\t{dense}").map_err(|e| Error::storage(&path, e))?;
    }
    w.flush().map_err(|e| Error::storage(&path, e))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::store::format::{EDGES_FILE, META_FILE, NODES_FILE};
    use std::fs;

    fn build(text: &str) -> (tempfile::TempDir, DiskGraph, BuildStats) {
        let dir = tempfile::tempdir().unwrap();
        let (g, stats) =
            build_from_edge_list(text.as_bytes(), dir.path(), StoreOptions::default()).unwrap();
        (dir, g, stats)
    }

    #[test]
    fn path_of_three() {
        let (dir, mut g, stats) = build("0 1\n1 2\n");
        assert_eq!((stats.n, stats.m), (3, 2));
        assert_eq!(g.degrees(), vec![1, 2, 1]);
        let offsets: Vec<u64> = (0..3).map(|v| g.node_entry(v).unwrap().offset).collect();
        assert_eq!(offsets, vec![0, 1, 3]);
        assert_eq!(g.neighbors(0).unwrap(), vec![1]);
        assert_eq!(g.neighbors(1).unwrap(), vec![0, 2]);
        assert_eq!(g.neighbors(2).unwrap(), vec![1]);

        // bit-exact tables
        let meta = fs::read(dir.path().join(META_FILE)).unwrap();
        let mut expected = b"SCGR".to_vec();
        expected.extend(1u32.to_le_bytes());
        expected.extend(3u64.to_le_bytes());
        expected.extend(2u64.to_le_bytes());
        expected.push(4);
        expected.extend([0u8; 7]);
        assert_eq!(meta, expected);

        let nodes = fs::read(dir.path().join(NODES_FILE)).unwrap();
        let mut expected = Vec::new();
        for (off, deg) in [(0u64, 1u32), (1, 2), (3, 1)] {
            expected.extend(off.to_le_bytes());
            expected.extend(deg.to_le_bytes());
        }
        assert_eq!(nodes, expected);

        let edges = fs::read(dir.path().join(EDGES_FILE)).unwrap();
        let expected: Vec<u8> = [1u32, 0, 2, 1]
            .iter()
            .flat_map(|x| x.to_le_bytes())
            .collect();
        assert_eq!(edges, expected);
    }

    #[test]
    fn comment_only_input_is_empty_graph() {
        let (_dir, g, stats) = build("# comment\n");
        assert_eq!((stats.n, stats.m), (0, 0));
        assert_eq!(g.n(), 0);
        assert_eq!(g.m(), 0);
    }

    #[test]
    fn self_loops_and_duplicates_are_skipped() {
        let (_dir, g, stats) = build("5 5\n0 1\n1 0\n");
        assert_eq!(stats.m, 1);
        assert_eq!(stats.skipped_self_loops, 1);
        assert_eq!(stats.skipped_duplicates, 1);
        // node 5 survives as an isolated node
        assert_eq!(g.n(), 3);
        assert_eq!(g.degrees(), vec![1, 1, 0]);
    }

    #[test]
    fn ids_are_remapped_in_ascending_order() {
        let (dir, mut g, _) = build("# SNAP header\n100\t7\n7 42\n\n");
        assert_eq!(g.n(), 3);
        // 7 -> 0, 42 -> 1, 100 -> 2
        assert_eq!(g.neighbors(0).unwrap(), vec![1, 2]);
        let idmap = fs::read_to_string(dir.path().join(IDMAP_FILE)).unwrap();
        assert_eq!(idmap, "7\t0\n42\t1\n100\t2\n");
    }

    #[test]
    fn parse_errors_carry_line_numbers() {
        let dir = tempfile::tempdir().unwrap();
        let err =
            build_from_edge_list("0 1\n1 x\n".as_bytes(), dir.path(), StoreOptions::default())
                .unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, .. }), "{err}");
        let err = build_from_edge_list("0 1 2\n".as_bytes(), dir.path(), StoreOptions::default())
            .unwrap_err();
        assert!(matches!(err, Error::Parse { line: 1, .. }), "{err}");
        let err = build_from_edge_list("7\n".as_bytes(), dir.path(), StoreOptions::default())
            .unwrap_err();
        assert!(matches!(err, Error::Parse { line: 1, .. }), "{err}");
    }
}
