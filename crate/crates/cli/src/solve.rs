//! Solver dispatch, verification and result records.

use std::sync::Mutex;
use std::time::Instant;

use pointcover_core::curve_branch::{curve_cover, prepare_curve_cover, BranchConfig, BranchOutcome, CurvePlan};
use pointcover_core::ie::{extract_cover, ie_decide, ie_min_cover, Ground, DEFAULT_CAP};
use pointcover_core::kernel::{kernelize, Verdict};
use pointcover_core::oracle::{check_cover, oracle_decide, oracle_min_cover, ORACLE_CAP};
use pointcover_core::plane_branch::{plane_cover, prepare_plane_cover, PlanePlan};
use pointcover_core::stats::SearchStats;
use pointcover_core::{CoverObject, Family, Point};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::instance::{objects_in, objects_value, Instance, ObjectRecord};
use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Algorithm {
    Ie,
    Branch,
    Oracle,
    /// Oracle up to 12 points, inclusion-exclusion up to 26, else branch.
    Auto,
}

impl Algorithm {
    pub fn tag(self) -> &'static str {
        match self {
            Algorithm::Ie => "ie",
            Algorithm::Branch => "branch",
            Algorithm::Oracle => "oracle",
            Algorithm::Auto => "auto",
        }
    }

    /// The concrete solver `auto` picks for `n` points.
    pub fn resolve(self, n: usize) -> Algorithm {
        match self {
            Algorithm::Auto if n <= 12 => Algorithm::Oracle,
            Algorithm::Auto if n <= DEFAULT_CAP => Algorithm::Ie,
            Algorithm::Auto => Algorithm::Branch,
            a => a,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SolveOptions {
    pub algorithm: Algorithm,
    /// Overrides the instance's budget.
    pub k: Option<usize>,
    pub min: bool,
    pub witness: bool,
    pub verify: bool,
    /// Worker threads for the branching solvers' partitions; 1 runs them
    /// in order on the calling thread.
    pub threads: usize,
    pub base_case_factor: Option<(u64, u64)>,
    pub seed: u64,
    /// Record wall-clock time; off for byte-identical records.
    pub timing: bool,
    pub oracle_cap: usize,
    pub ie_cap: usize,
    pub node_limit: Option<u64>,
    pub memo: bool,
    pub debug_checks: bool,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions {
            algorithm: Algorithm::Auto,
            k: None,
            min: false,
            witness: false,
            verify: false,
            threads: 1,
            base_case_factor: None,
            seed: 0,
            timing: true,
            oracle_cap: ORACLE_CAP,
            ie_cap: DEFAULT_CAP,
            node_limit: None,
            memo: false,
            debug_checks: false,
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct RecordStats {
    pub nodes: u64,
    pub leaves: u64,
    pub rejected_leaves: u64,
    pub ie_subsets: u64,
    pub partitions: u64,
    pub max_depth: u32,
    pub wall_ms: Option<u64>,
}

impl RecordStats {
    fn absorb(&mut self, s: &SearchStats) {
        self.nodes += s.nodes_expanded;
        self.leaves += s.leaves_ie;
        self.rejected_leaves += s.leaves_rejected;
        self.ie_subsets += s.ie_subsets;
        self.partitions += s.partitions_tried;
        self.max_depth = self.max_depth.max(s.max_depth);
    }
}

/// The options a record was produced with.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConfigEcho {
    pub requested: String,
    pub min: bool,
    pub witness: bool,
    pub verify: bool,
    pub threads: usize,
    pub base_case_factor: Option<String>,
    pub memo: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ResultRecord {
    pub algorithm: String,
    pub family: String,
    pub n: usize,
    pub k: usize,
    pub decision: bool,
    pub opt: Option<usize>,
    pub witness: Option<Vec<ObjectRecord>>,
    /// Whether the oracle was run and agreed; absent when not run.
    pub verified: Option<bool>,
    pub stats: RecordStats,
    pub seed: u64,
    pub config: ConfigEcho,
}

impl ResultRecord {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("plain data serializes");
        s.push('\n');
        s
    }
}

struct Answer {
    decision: bool,
    opt: Option<usize>,
    witness: Option<Vec<CoverObject>>,
}

fn ground(family: Family, pts: &[Point]) -> Ground {
    match family {
        Family::Curve(f) => Ground::curve_points(f, pts.to_vec()),
        Family::Plane => Ground::space_points(pts),
    }
}

fn run_oracle(family: Family, pts: &[Point], k: usize, opts: &SolveOptions) -> Result<Answer, CliError> {
    if opts.min || opts.witness {
        let best = oracle_min_cover(family, pts, opts.oracle_cap)?;
        let decision = best.opt <= k;
        Ok(Answer {
            decision,
            opt: opts.min.then_some(best.opt),
            witness: (opts.witness && decision).then_some(best.witness),
        })
    } else {
        Ok(Answer { decision: oracle_decide(family, pts, k, opts.oracle_cap)?, opt: None, witness: None })
    }
}

fn run_ie(family: Family, pts: &[Point], k: usize, opts: &SolveOptions, stats: &mut RecordStats) -> Result<Answer, CliError> {
    let g = ground(family, pts);
    let out = ie_decide(&g, k, opts.ie_cap)?;
    stats.leaves += 1;
    stats.ie_subsets += out.subsets;
    let opt = if opts.min { Some(ie_min_cover(&g, opts.ie_cap)?) } else { None };
    let witness = if opts.witness && out.decision { Some(extract_cover(&g, k, opts.ie_cap)?) } else { None };
    Ok(Answer { decision: out.decision, opt, witness })
}

fn branch_config(inst: &Instance, opts: &SolveOptions, witness: bool) -> Result<BranchConfig, CliError> {
    let planted = if opts.debug_checks { objects_in(&inst.metadata, "planted")? } else { None };
    Ok(BranchConfig {
        base_case_factor: opts.base_case_factor,
        node_limit: opts.node_limit,
        witness,
        seed: opts.seed,
        debug_checks: opts.debug_checks,
        planted,
        memo: opts.memo,
    })
}

type PartitionRun<'a> = dyn Fn(&[usize], &mut SearchStats) -> pointcover_core::Result<Option<Vec<CoverObject>>> + Sync + 'a;

/// Runs the partitions on a pool; the witness comes from the first
/// accepting partition in order, so the decision and witness do not
/// depend on scheduling.
fn fan_out(parts: Vec<Vec<usize>>, threads: usize, run: &PartitionRun<'_>) -> Result<BranchOutcome, CliError> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| CliError::Invalid(format!("thread pool: {e}")))?;
    let stats = Mutex::new(SearchStats::default());
    let found = pool.install(|| {
        parts.par_iter().find_map_first(|p| {
            let mut st = SearchStats::default();
            let r = run(p, &mut st);
            stats.lock().expect("no panics while held").merge(&st);
            match r {
                Ok(None) => None,
                other => Some(other),
            }
        })
    });
    let stats = stats.into_inner().expect("no panics while held");
    match found {
        None => Ok(BranchOutcome { decision: false, witness: None, stats }),
        Some(Ok(w)) => Ok(BranchOutcome { decision: true, witness: w, stats }),
        Some(Err(e)) => Err(e.into()),
    }
}

fn branch_once(inst: &Instance, k: usize, opts: &SolveOptions, witness: bool) -> Result<BranchOutcome, CliError> {
    let cfg = branch_config(inst, opts, witness)?;
    let pts = &inst.points;
    if opts.threads <= 1 {
        return Ok(match inst.family {
            Family::Curve(f) => curve_cover(pts, f, k, &cfg)?,
            Family::Plane => plane_cover(pts, k, &cfg)?,
        });
    }
    let mut out = match inst.family {
        Family::Curve(f) => match prepare_curve_cover(pts, f, k, &cfg)? {
            CurvePlan::Decided(out) => out,
            CurvePlan::Search(s) => fan_out(s.partitions().collect(), opts.threads, &|p, st| s.run_partition(p, st))?,
        },
        Family::Plane => match prepare_plane_cover(pts, k, &cfg)? {
            PlanePlan::Decided(out) => out,
            PlanePlan::Search(s) => fan_out(s.partitions().collect(), opts.threads, &|p, st| s.run_partition(p, st))?,
        },
    };
    if !witness {
        out.witness = None;
    }
    Ok(out)
}

fn run_branch(inst: &Instance, k: usize, opts: &SolveOptions, stats: &mut RecordStats) -> Result<Answer, CliError> {
    let out = branch_once(inst, k, opts, opts.witness)?;
    stats.absorb(&out.stats);
    let opt = if opts.min {
        let mut opt = None;
        for j in 0..=inst.points.len() {
            let o = if j == k { out.clone() } else { branch_once(inst, j, opts, false)? };
            if j != k {
                stats.absorb(&o.stats);
            }
            if o.decision {
                opt = Some(j);
                break;
            }
        }
        Some(opt.ok_or_else(|| CliError::Mismatch("no budget up to n accepted".into()))?)
    } else {
        None
    };
    Ok(Answer { decision: out.decision, opt, witness: out.witness })
}

/// Runs `opts.algorithm` on `inst`, checks any witness, and with
/// `verify` cross-checks against the oracle when the instance is small
/// enough.
pub fn solve(inst: &Instance, opts: &SolveOptions) -> Result<ResultRecord, CliError> {
    let k = opts.k.unwrap_or(inst.k);
    let n = inst.points.len();
    let algorithm = opts.algorithm.resolve(n);
    let mut stats = RecordStats::default();
    let start = Instant::now();
    let answer = match algorithm {
        Algorithm::Oracle => run_oracle(inst.family, &inst.points, k, opts)?,
        Algorithm::Ie => run_ie(inst.family, &inst.points, k, opts, &mut stats)?,
        Algorithm::Branch => run_branch(inst, k, opts, &mut stats)?,
        Algorithm::Auto => unreachable!("resolved above"),
    };
    if opts.timing {
        stats.wall_ms = Some(start.elapsed().as_millis() as u64);
    }
    if let Some(w) = &answer.witness {
        if !check_cover(inst.family, &inst.points, w, k) {
            return Err(CliError::Mismatch(format!("{} returned a witness that does not cover", algorithm.tag())));
        }
    }
    if answer.decision && opts.witness && answer.witness.is_none() {
        return Err(CliError::Mismatch("accepted without a witness".into()));
    }
    let mut verified = None;
    if opts.verify && n <= opts.oracle_cap {
        let truth = oracle_min_cover(inst.family, &inst.points, opts.oracle_cap)?;
        if (truth.opt <= k) != answer.decision {
            return Err(CliError::Mismatch(format!(
                "{} says {}, oracle minimum is {} for k = {k}",
                algorithm.tag(),
                answer.decision,
                truth.opt
            )));
        }
        if let Some(opt) = answer.opt {
            if opt != truth.opt {
                return Err(CliError::Mismatch(format!("minimum {opt} but the oracle finds {}", truth.opt)));
            }
        }
        verified = Some(true);
    }
    Ok(ResultRecord {
        algorithm: algorithm.tag().to_string(),
        family: inst.family.tag().to_string(),
        n,
        k,
        decision: answer.decision,
        opt: answer.opt,
        witness: answer.witness.map(|w| w.iter().map(ObjectRecord::of).collect()),
        verified,
        stats,
        seed: opts.seed,
        config: ConfigEcho {
            requested: opts.algorithm.tag().to_string(),
            min: opts.min,
            witness: opts.witness,
            verify: opts.verify,
            threads: opts.threads,
            base_case_factor: opts.base_case_factor.map(|(p, q)| format!("{p}/{q}")),
            memo: opts.memo,
        },
    })
}

/// Kernelizes `inst` with its own budget; the result is a new instance
/// with the forced objects and verdict in its metadata.
pub fn kernelize_instance(inst: &Instance, k: usize, seed: u64) -> Result<Instance, CliError> {
    let kr = kernelize(inst.family, &inst.points, k, seed)?;
    let mut out = Instance::new(inst.family, kr.k, kr.points);
    let verdict = match kr.verdict {
        Verdict::Reduced => "reduced",
        Verdict::Rejected => "rejected",
    };
    out.metadata.insert("verdict".into(), Value::from(verdict));
    out.metadata.insert("forced".into(), objects_value(&kr.forced));
    out.metadata.insert("original_k".into(), Value::from(k));
    out.metadata.insert("seed".into(), Value::from(seed));
    Ok(out)
}

/// Parses a base-case factor written `p/q` or `p`.
pub fn parse_factor(s: &str) -> Result<(u64, u64), CliError> {
    let bad = || CliError::Invalid(format!("base-case factor {s:?} is not p/q with positive integers"));
    let (p, q) = s.split_once('/').unwrap_or((s, "1"));
    let p: u64 = p.parse().map_err(|_| bad())?;
    let q: u64 = q.parse().map_err(|_| bad())?;
    if p == 0 || q == 0 {
        return Err(bad());
    }
    Ok((p, q))
}
