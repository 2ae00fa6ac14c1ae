//! Runs solvers over instance directories under a wall-clock limit.

use std::{
    fs,
    io::{self, Read},
    path::{Path, PathBuf},
    process::{Command, Stdio},
    thread,
    time::{Duration, Instant},
};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use steiner_core::{
    exact::solve_exact_with,
    greedy::greedy_steiner,
    multistart::multistart_with,
    steiner_ir::{ir_steiner_with, CacheMode, IrOptions},
    validate_tree,
    zelikovsky::{zelikovsky_with, GainRule, ZelikovskyOptions},
    Deadline, Edge, Error, SteinerInstance, SteinerTree,
};

use crate::{
    best_known::{BestKnown, BestKnownTable},
    record::{RunRecord, Status},
    stp::read_stp,
};

/// Expires a fixed time after construction.
#[derive(Debug, Clone, Copy)]
pub struct WallDeadline {
    start: Instant,
    limit: Duration,
}

impl WallDeadline {
    pub fn new(limit: Duration) -> Self {
        WallDeadline { start: Instant::now(), limit }
    }

    pub fn elapsed(&self) -> Duration {
        self.start.elapsed()
    }
}

impl Deadline for WallDeadline {
    fn expired(&self) -> bool {
        self.start.elapsed() >= self.limit
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, clap::ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Algo {
    Greedy,
    Zel,
    Dw,
    Ir,
    Msls,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AlgoSpec {
    pub algo: Algo,
    pub k: usize,
    pub seed: u64,
    pub restarts: usize,
    /// Share the component cache across subsets (IR only).
    pub ir_cache: bool,
    /// Rank triples by the two largest saves instead of largest plus smallest.
    pub zel_two_largest: bool,
}

impl AlgoSpec {
    pub fn new(algo: Algo) -> Self {
        AlgoSpec {
            algo,
            k: 3,
            seed: 0,
            restarts: steiner_core::multistart::DEFAULT_RESTARTS,
            ir_cache: true,
            zel_two_largest: false,
        }
    }

    pub fn ir(k: usize, seed: u64) -> Self {
        AlgoSpec { k, seed, ..AlgoSpec::new(Algo::Ir) }
    }

    pub fn label(&self) -> String {
        match self.algo {
            Algo::Greedy => "greedy".into(),
            Algo::Zel if self.zel_two_largest => "zel-two-largest".into(),
            Algo::Zel => "zel".into(),
            Algo::Dw => "dw".into(),
            Algo::Ir if self.ir_cache => format!("ir-k{}", self.k),
            Algo::Ir => format!("ir-k{}-nocache", self.k),
            Algo::Msls => "msls".into(),
        }
    }

    fn stamp(&self, mut r: RunRecord) -> RunRecord {
        match self.algo {
            Algo::Ir => {
                r.k = Some(self.k);
                r.seed = Some(self.seed);
            }
            Algo::Msls => {
                r.seed = Some(self.seed);
                r.restarts = Some(self.restarts);
            }
            _ => {}
        }
        r
    }
}

pub fn solve(instance: &SteinerInstance, spec: &AlgoSpec, deadline: &dyn Deadline) -> steiner_core::Result<SteinerTree> {
    match spec.algo {
        Algo::Greedy => Ok(greedy_steiner(instance)?.tree),
        Algo::Zel => {
            let mut options = ZelikovskyOptions::default();
            if spec.zel_two_largest {
                options.gain = GainRule::TwoLargest;
            }
            Ok(zelikovsky_with(instance, options, deadline)?.tree)
        }
        Algo::Dw => solve_exact_with(instance, deadline),
        Algo::Ir => {
            let mut options = IrOptions::new(spec.k, spec.seed);
            options.cache = if spec.ir_cache { CacheMode::Shared } else { CacheMode::Fresh };
            Ok(ir_steiner_with(instance, &options, deadline)?.tree)
        }
        Algo::Msls => Ok(multistart_with(instance, spec.restarts, spec.seed, deadline)?.tree),
    }
}

/// Runs `solver` under `timeout` and turns the outcome into a record. Trees
/// are revalidated against the instance; a tree that fails is an error.
pub fn run_solver<F>(
    instance: &SteinerInstance,
    best: Option<&BestKnown>,
    label: &str,
    timeout: Duration,
    solver: F,
) -> RunRecord
where
    F: FnOnce(&SteinerInstance, &dyn Deadline) -> steiner_core::Result<SteinerTree>,
{
    let deadline = WallDeadline::new(timeout);
    let result = solver(instance, &deadline);
    let seconds = deadline.elapsed().as_secs_f64();
    finish(instance, best, label, timeout, seconds, result)
}

fn finish(
    instance: &SteinerInstance,
    best: Option<&BestKnown>,
    label: &str,
    timeout: Duration,
    seconds: f64,
    result: steiner_core::Result<SteinerTree>,
) -> RunRecord {
    let class = best.map_or("", |b| b.class.as_str());
    let mut rec = RunRecord::new(&instance.name, class, label);
    rec.seconds = seconds;
    match result {
        _ if seconds > timeout.as_secs_f64() => rec.status = Status::Timeout,
        Err(Error::DeadlineExceeded) => rec.status = Status::Timeout,
        Err(e) => {
            rec.status = Status::Error;
            rec.message = Some(e.to_string());
        }
        Ok(tree) => match validate_tree(instance, &tree) {
            Ok(cost) => {
                rec = rec.with_cost(cost, best.map(|b| b.cost));
                if rec.ratio.is_some_and(|r| r < 1.0) {
                    log::warn!("{} on {}: cost {cost} beats the best known", label, instance.name);
                }
            }
            Err(e) => {
                log::error!("{} on {} returned an invalid tree: {e}", label, instance.name);
                rec.status = Status::Error;
                rec.message = Some(format!("INVALID TREE: {e}"));
            }
        },
    }
    rec
}

pub fn run_one(instance: &SteinerInstance, best: Option<&BestKnown>, spec: &AlgoSpec, timeout: Duration) -> RunRecord {
    let rec = run_solver(instance, best, &spec.label(), timeout, |inst, d| solve(inst, spec, d));
    spec.stamp(rec)
}

/// What the `solve` subcommand prints.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SolveOutput {
    pub status: Status,
    pub cost: Option<u64>,
    pub edges: Vec<(usize, usize, u64)>,
    pub message: Option<String>,
}

impl SolveOutput {
    pub fn from_result(result: steiner_core::Result<SteinerTree>) -> Self {
        match result {
            Ok(t) => SolveOutput {
                status: Status::Ok,
                cost: Some(t.cost),
                edges: t.edges.iter().map(|e| (e.u, e.v, e.weight)).collect(),
                message: None,
            },
            Err(Error::DeadlineExceeded) => {
                SolveOutput { status: Status::Timeout, cost: None, edges: Vec::new(), message: None }
            }
            Err(e) => SolveOutput { status: Status::Error, cost: None, edges: Vec::new(), message: Some(e.to_string()) },
        }
    }
}

/// Runs one pair in a child `steiner solve` process, killing it at the limit.
pub fn run_isolated(
    exe: &Path,
    path: &Path,
    instance: &SteinerInstance,
    best: Option<&BestKnown>,
    spec: &AlgoSpec,
    timeout: Duration,
) -> RunRecord {
    let label = spec.label();
    let mut cmd = Command::new(exe);
    cmd.arg("solve")
        .arg("--instance")
        .arg(path)
        .args(["--algo", &format!("{:?}", spec.algo).to_lowercase()])
        .args(["--k", &spec.k.to_string(), "--seed", &spec.seed.to_string()])
        .args(["--restarts", &spec.restarts.to_string()])
        .args(["--timeout-sec", &timeout.as_secs().max(1).to_string()]);
    if !spec.ir_cache {
        cmd.arg("--ir-no-cache");
    }
    if spec.zel_two_largest {
        cmd.arg("--zel-two-largest");
    }
    let start = Instant::now();
    let result = (|| -> io::Result<Option<String>> {
        let mut child = cmd.stdout(Stdio::piped()).stderr(Stdio::null()).spawn()?;
        let mut stdout = child.stdout.take().expect("piped");
        let reader = thread::spawn(move || {
            let mut s = String::new();
            stdout.read_to_string(&mut s).map(|_| s)
        });
        loop {
            if child.try_wait()?.is_some() {
                break;
            }
            if start.elapsed() > timeout {
                child.kill()?;
                child.wait()?;
                return Ok(None);
            }
            thread::sleep(Duration::from_millis(5));
        }
        reader.join().map_err(|_| io::Error::other("reader thread panicked"))?.map(Some)
    })();
    let seconds = start.elapsed().as_secs_f64();
    let outcome = match result {
        Ok(None) => Err(Error::DeadlineExceeded),
        Ok(Some(text)) => match serde_json::from_str::<SolveOutput>(&text) {
            Ok(out) => match out.status {
                Status::Ok => Ok(SteinerTree::from_edges(out.edges.iter().map(|&(u, v, w)| Edge::new(u, v, w)).collect())),
                Status::Timeout => Err(Error::DeadlineExceeded),
                Status::Error => Err(Error::InvalidState(out.message.unwrap_or_default())),
            },
            Err(e) => Err(Error::InvalidState(format!("unreadable solver output: {e}"))),
        },
        Err(e) => Err(Error::InvalidState(format!("could not run solver: {e}"))),
    };
    spec.stamp(finish(instance, best, &label, timeout, seconds, outcome))
}

/// Options shared by every pair of a suite run.
#[derive(Debug, Clone)]
pub struct SuiteConfig {
    pub timeout: Duration,
    pub jobs: usize,
    /// Run each pair in a child process of this executable.
    pub isolate: Option<PathBuf>,
}

pub fn list_instances(dir: &Path) -> io::Result<Vec<PathBuf>> {
    let mut paths: Vec<PathBuf> = fs::read_dir(dir)?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|e| e.eq_ignore_ascii_case("stp")))
        .collect();
    paths.sort();
    Ok(paths)
}

/// Every `.stp` file in `dir` against every spec. Records come back sorted
/// by (instance, algorithm).
pub fn run_suite(
    dir: &Path,
    table: &BestKnownTable,
    specs: &[AlgoSpec],
    config: &SuiteConfig,
) -> io::Result<Vec<RunRecord>> {
    let paths = list_instances(dir)?;
    let pool = rayon::ThreadPoolBuilder::new().num_threads(config.jobs.max(1)).build().map_err(io::Error::other)?;
    let mut records = pool.install(|| {
        let parsed: Vec<_> = paths.par_iter().map(|p| (p, read_stp(p))).collect();
        let pairs: Vec<_> = parsed.iter().flat_map(|item| specs.iter().map(move |s| (item, s))).collect();
        pairs
            .par_iter()
            .map(|((path, parsed), spec)| {
                let stem = path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
                let best = table.get(&stem);
                match parsed {
                    Ok(inst) => {
                        log::info!("{} on {}", spec.label(), inst.name);
                        match &config.isolate {
                            Some(exe) => run_isolated(exe, path, inst, best, spec, config.timeout),
                            None => run_one(inst, best, spec, config.timeout),
                        }
                    }
                    Err(e) => {
                        log::error!("{}: {e}", path.display());
                        let mut r = RunRecord::new(stem, best.map_or("", |b| b.class.as_str()), spec.label());
                        r.status = Status::Error;
                        r.message = Some(e.to_string());
                        spec.stamp(r)
                    }
                }
            })
            .collect::<Vec<_>>()
    });
    sort_records(&mut records);
    Ok(records)
}

pub fn sort_records(records: &mut [RunRecord]) {
    records.sort_by(|a, b| (&a.instance, &a.algorithm).cmp(&(&b.instance, &b.algorithm)));
}
