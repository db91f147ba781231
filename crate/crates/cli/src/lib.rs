//! `semicore` command-line driver.
//!
//! Exit codes: 0 success, 1 domain or runtime error (bad edge update,
//! verification mismatch, unreadable graph), 2 usage error.

use std::ffi::OsString;
use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand};

use semicore::decomp::{decompose, decompose_observed, semi_core_star_state};
use semicore::maintain::{apply_op, parse_ops};
use semicore::store::{build_from_edge_list, DEFAULT_BLOCK_SIZE, DEFAULT_BUFFER_CAPACITY};
use semicore::verify::{
    brute_force_core, compare_cores, gen_random_graph, EdgeList, GraphKind, TraceTable,
};
use semicore::{Algorithm, DiskGraph, InsertAlgorithm, StoreOptions};

#[derive(Debug, Parser)]
#[command(
    name = "semicore",
    version,
    about = "Semi-external k-core decomposition"
)]
struct Cli {
    /// Block size in bytes for I/O accounting (power of two, at least 64).
    #[arg(long, global = true, default_value_t = DEFAULT_BLOCK_SIZE, value_parser = parse_block_size)]
    block_size: u64,

    /// Pending buffered edge entries tolerated before a flush.
    #[arg(long, global = true, default_value_t = DEFAULT_BUFFER_CAPACITY)]
    buffer_capacity: usize,

    /// Increase log verbosity (-v info, -vv debug).
    #[arg(short, long, global = true, action = clap::ArgAction::Count)]
    verbose: u8,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Convert a text edge list into a graph directory.
    Convert {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Compute core numbers.
    Decompose {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long, default_value = "semicore-star", value_parser = parse_algorithm)]
        algo: Algorithm,
        /// Write `id<TAB>core` lines here.
        #[arg(long)]
        cores: Option<PathBuf>,
        /// Write the JSON run report here instead of standard output.
        #[arg(long)]
        report: Option<PathBuf>,
        /// Write the per-iteration trace as TSV.
        #[arg(long)]
        trace: Option<PathBuf>,
    },
    /// Decompose, then apply edge updates one at a time.
    Update {
        #[arg(long)]
        graph: PathBuf,
        /// Lines of `+ u v` or `- u v`.
        #[arg(long)]
        ops: PathBuf,
        #[arg(long, default_value = "star", value_parser = parse_insert_algorithm)]
        insert_algo: InsertAlgorithm,
        /// Write the JSON array of per-op reports here instead of standard output.
        #[arg(long)]
        report: Option<PathBuf>,
        /// Write the final cores here.
        #[arg(long)]
        cores: Option<PathBuf>,
    },
    /// Check core numbers against a brute-force peeling of the graph.
    Verify {
        #[arg(long)]
        graph: PathBuf,
        /// Cores file to check; without it every algorithm is checked.
        #[arg(long)]
        cores: Option<PathBuf>,
    },
    /// Run every algorithm over generated graphs and write a TSV summary.
    Bench(BenchArgs),
}

#[derive(Debug, Args)]
struct BenchArgs {
    #[arg(long)]
    out: PathBuf,
    #[arg(long, default_value_t = 42)]
    seed: u64,
    /// Node counts of the generated graphs.
    #[arg(long, value_delimiter = ',', default_values_t = [1000usize, 10000])]
    nodes: Vec<usize>,
    /// Average degree of the generated graphs.
    #[arg(long, default_value_t = 10)]
    avg_degree: usize,
    /// Existing graph directories to include.
    #[arg(long)]
    graph: Vec<PathBuf>,
}

fn parse_block_size(s: &str) -> Result<u64, String> {
    let b: u64 = s.parse().map_err(|e| format!("{e}"))?;
    StoreOptions {
        block_size: b,
        ..StoreOptions::default()
    }
    .validate()
    .map_err(|e| e.to_string())?;
    Ok(b)
}

fn parse_algorithm(s: &str) -> Result<Algorithm, String> {
    s.parse().map_err(|e: semicore::Error| e.to_string())
}

fn parse_insert_algorithm(s: &str) -> Result<InsertAlgorithm, String> {
    s.parse().map_err(|e: semicore::Error| e.to_string())
}

/// Parse `argv` (program name first), run the command, return the exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    let level = match cli.verbose {
        0 => log::LevelFilter::Warn,
        1 => log::LevelFilter::Info,
        _ => log::LevelFilter::Debug,
    };
    let _ = env_logger::Builder::new().filter_level(level).try_init();

    let options = StoreOptions {
        block_size: cli.block_size,
        buffer_capacity: cli.buffer_capacity,
    };
    match execute(cli.command, options) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            1
        }
    }
}

fn execute(command: Command, options: StoreOptions) -> anyhow::Result<i32> {
    match command {
        Command::Convert { input, out } => {
            let reader = BufReader::new(
                File::open(&input).with_context(|| format!("opening {}", input.display()))?,
            );
            let (_, stats) = build_from_edge_list(reader, &out, options)?;
            eprintln!(
                "n={} m={} skipped_self_loops={} skipped_duplicates={}",
                stats.n, stats.m, stats.skipped_self_loops, stats.skipped_duplicates
            );
            Ok(0)
        }
        Command::Decompose {
            graph,
            algo,
            cores,
            report,
            trace,
        } => {
            let mut g = open(&graph, options)?;
            let mut table = TraceTable::default();
            let (core, run) = if trace.is_some() {
                decompose_observed(&mut g, algo, &mut table)?
            } else {
                decompose(&mut g, algo)?
            };
            log::info!("{} finished in {} iterations", algo, run.iterations);
            if let Some(path) = cores {
                write_cores(&path, &core)?;
            }
            if let Some(path) = trace {
                std::fs::write(&path, table.to_tsv())
                    .with_context(|| format!("writing {}", path.display()))?;
            }
            emit_json(report.as_deref(), &run)?;
            Ok(0)
        }
        Command::Update {
            graph,
            ops,
            insert_algo,
            report,
            cores,
        } => {
            let reader = BufReader::new(
                File::open(&ops).with_context(|| format!("opening {}", ops.display()))?,
            );
            let ops = parse_ops(reader)?;
            let mut g = open(&graph, options)?;
            let (mut state, _) = semi_core_star_state(&mut g)?;
            let mut reports = Vec::with_capacity(ops.len());
            let mut failure = None;
            for (i, op) in ops.iter().enumerate() {
                match apply_op(&mut g, &mut state, *op, insert_algo) {
                    Ok(r) => reports.push(r),
                    Err(e) => {
                        failure = Some(anyhow::Error::new(e).context(format!("op {}", i + 1)));
                        break;
                    }
                }
            }
            // persist whatever was applied so the directory matches the reports
            g.flush()?;
            emit_json(report.as_deref(), &reports)?;
            if let Some(path) = cores {
                write_cores(&path, &state.core)?;
            }
            match failure {
                Some(e) => Err(e),
                None => Ok(0),
            }
        }
        Command::Verify { graph, cores } => {
            let mut g = open(&graph, options)?;
            let edges = EdgeList::new(g.n(), g.edge_list()?);
            let expected = brute_force_core(&edges);
            let mut ok = true;
            match cores {
                Some(path) => {
                    let got = read_cores(&path, g.n())?;
                    ok &= report_diff(&path.display().to_string(), &expected, &got)?;
                }
                None => {
                    for algo in Algorithm::ALL {
                        let (got, _) = decompose(&mut g, algo)?;
                        ok &= report_diff(algo.name(), &expected, &got)?;
                    }
                }
            }
            if ok {
                println!("ok: {} nodes match", g.n());
                Ok(0)
            } else {
                Ok(1)
            }
        }
        Command::Bench(args) => bench(args, options),
    }
}

fn open(dir: &Path, options: StoreOptions) -> anyhow::Result<DiskGraph> {
    DiskGraph::open(dir, options).with_context(|| format!("opening graph {}", dir.display()))
}

fn emit_json<T: serde::Serialize + ?Sized>(path: Option<&Path>, value: &T) -> anyhow::Result<()> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    match path {
        Some(p) => std::fs::write(p, text).with_context(|| format!("writing {}", p.display()))?,
        None => print!("{text}"),
    }
    Ok(())
}

fn write_cores(path: &Path, core: &[u32]) -> anyhow::Result<()> {
    let file = File::create(path).with_context(|| format!("creating {}", path.display()))?;
    let mut w = BufWriter::new(file);
    for (v, c) in core.iter().enumerate() {
        writeln!(w, "{v}\t{c}")?;
    }
    w.flush()?;
    Ok(())
}

fn read_cores(path: &Path, n: usize) -> anyhow::Result<Vec<u32>> {
    let file = File::open(path).with_context(|| format!("opening {}", path.display()))?;
    let mut core = vec![None; n];
    for (i, line) in BufReader::new(file).lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let mut it = line.split('\t');
        let (Some(id), Some(c), None) = (it.next(), it.next(), it.next()) else {
            bail!("{}:{}: expected `id<TAB>core`", path.display(), i + 1);
        };
        let id: usize = id
            .trim()
            .parse()
            .with_context(|| format!("{}:{}", path.display(), i + 1))?;
        let c: u32 = c
            .trim()
            .parse()
            .with_context(|| format!("{}:{}", path.display(), i + 1))?;
        if id >= n {
            bail!(
                "{}:{}: node {id} out of range (n = {n})",
                path.display(),
                i + 1
            );
        }
        core[id] = Some(c);
    }
    core.into_iter()
        .enumerate()
        .map(|(v, c)| c.with_context(|| format!("{}: no value for node {v}", path.display())))
        .collect()
}

fn report_diff(label: &str, expected: &[u32], got: &[u32]) -> anyhow::Result<bool> {
    let diff = compare_cores(expected, got)?;
    for (v, want, have) in diff.iter().take(10) {
        eprintln!("{label}: node {v}: expected {want}, got {have}");
    }
    if diff.len() > 10 {
        eprintln!("{label}: {} more mismatches", diff.len() - 10);
    }
    Ok(diff.is_empty())
}

fn bench(args: BenchArgs, options: StoreOptions) -> anyhow::Result<i32> {
    if args.avg_degree == 0 {
        bail!("--avg-degree must be positive");
    }
    let scratch = tempfile::tempdir()?;
    let mut graphs: Vec<(String, PathBuf)> = Vec::new();
    for (i, &n) in args.nodes.iter().enumerate() {
        let p = if n > 1 {
            (args.avg_degree as f64 / (n - 1) as f64).min(1.0)
        } else {
            0.0
        };
        let kinds = [
            ("er", GraphKind::ErdosRenyi { p }),
            (
                "pa",
                GraphKind::Preferential {
                    edges_per_node: (args.avg_degree / 2).max(1),
                },
            ),
        ];
        for (tag, kind) in kinds {
            let seed = args.seed.wrapping_add(i as u64);
            let edges = gen_random_graph(kind, n, seed)?;
            let name = format!("{tag}-n{n}-d{}-s{seed}", args.avg_degree);
            let dir = scratch.path().join(&name);
            DiskGraph::create(&dir, edges.n, &edges.edges, options)?;
            graphs.push((name, dir));
        }
    }
    for dir in &args.graph {
        graphs.push((dir.display().to_string(), dir.clone()));
    }

    let file =
        File::create(&args.out).with_context(|| format!("creating {}", args.out.display()))?;
    let mut w = BufWriter::new(file);
    writeln!(
        w,
        "graph\talgorithm\tn\tm\tk_max\titerations\tnode_computations\tread_ios\twrite_ios\telapsed_seconds"
    )?;
    for (name, dir) in &graphs {
        for algo in Algorithm::ALL {
            // a fresh handle per run so earlier runs do not warm the block memo
            let mut g = open(dir, options)?;
            let (_, r) = decompose(&mut g, algo)?;
            writeln!(
                w,
                "{name}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{:.6}",
                r.algorithm,
                g.n(),
                g.m(),
                r.k_max,
                r.iterations,
                r.node_computations,
                r.read_ios,
                r.write_ios,
                r.elapsed_seconds
            )?;
            log::info!("{name} {} done", r.algorithm);
        }
    }
    w.flush()?;
    Ok(0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cores_file_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("c.tsv");
        write_cores(&path, &[3, 0, 2]).unwrap();
        assert_eq!(
            std::fs::read_to_string(&path).unwrap(),
            "0\t3\n1\t0\n2\t2\n"
        );
        assert_eq!(read_cores(&path, 3).unwrap(), vec![3, 0, 2]);
        assert!(read_cores(&path, 4).is_err());
        assert!(read_cores(&path, 2).is_err());
    }

    #[test]
    fn cores_file_rejects_garbage() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("c.tsv");
        std::fs::write(&path, "0 3\n").unwrap();
        assert!(read_cores(&path, 1).is_err());
        std::fs::write(&path, "0\tx\n").unwrap();
        assert!(read_cores(&path, 1).is_err());
    }

    #[test]
    fn block_size_parser() {
        assert_eq!(parse_block_size("4096"), Ok(4096));
        assert!(parse_block_size("100").is_err());
        assert!(parse_block_size("32").is_err());
        assert!(parse_block_size("big").is_err());
    }
}
