//! Benchmark sweeps: generated instances times algorithms, one CSV row
//! per run.

use std::collections::BTreeMap;

use pointcover_core::combinatorics::binomial;
use pointcover_core::geometry::candidates_with_coverage;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::generate::{generate, GenParams, Model};
use crate::solve::{solve, Algorithm, SolveOptions};
use crate::CliError;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SuiteEntry {
    pub generator: GenParams,
    /// Each value replaces the generator's size: `n` for grid and
    /// uniform-random, `m` for the planted models.
    #[serde(default)]
    pub sizes: Vec<usize>,
    /// Budgets to ask for; the instance's own when empty.
    #[serde(default)]
    pub ks: Vec<usize>,
    pub algorithms: Vec<Algorithm>,
    #[serde(default = "one")]
    pub repetitions: usize,
    #[serde(default)]
    pub seed: u64,
}

fn one() -> usize {
    1
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Suite {
    #[serde(default)]
    pub entries: Vec<SuiteEntry>,
}

pub const HEADER: [&str; 16] = [
    "entry",
    "model",
    "family",
    "size",
    "rep",
    "seed",
    "n",
    "k",
    "algorithm",
    "decision",
    "nodes",
    "leaves",
    "ie_subsets",
    "candidates",
    "naive_bound",
    "wall_ms",
];

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
struct Row {
    /// Sort key: entry, size, repetition, budget, algorithm.
    key: (usize, usize, usize, usize, Algorithm),
    model: Model,
    family: String,
    seed: u64,
    n: usize,
    decision: String,
    nodes: u64,
    leaves: u64,
    ie_subsets: u64,
    candidates: usize,
    naive_bound: u128,
    wall_ms: Option<u64>,
}

struct Job {
    key: (usize, usize, usize, usize, Algorithm),
    params: GenParams,
    seed: u64,
}

fn resize(params: &GenParams, size: usize) -> GenParams {
    let mut p = params.clone();
    match p.model {
        Model::Grid | Model::UniformRandom => p.n = size,
        Model::OnCurves | Model::DegeneratePlane => p.m = Some(size),
    }
    p
}

fn run_job(job: &Job, base: &SolveOptions) -> Result<Row, CliError> {
    let (_, _, _, k, algorithm) = job.key;
    let inst = generate(&job.params, job.seed)?;
    let candidates = candidates_with_coverage(inst.family, &inst.points).len();
    let opts = SolveOptions { algorithm, k: Some(k), seed: job.seed, ..base.clone() };
    let mut row = Row {
        key: job.key,
        model: job.params.model,
        family: inst.family.tag().to_string(),
        seed: job.seed,
        n: inst.points.len(),
        decision: String::new(),
        nodes: 0,
        leaves: 0,
        ie_subsets: 0,
        candidates,
        naive_bound: binomial(candidates as u64, k as u64),
        wall_ms: None,
    };
    match solve(&inst, &opts) {
        Ok(rec) => {
            row.decision = if rec.decision { "yes" } else { "no" }.into();
            row.nodes = rec.stats.nodes;
            row.leaves = rec.stats.leaves;
            row.ie_subsets = rec.stats.ie_subsets;
            row.wall_ms = rec.stats.wall_ms;
        }
        Err(CliError::Cap(_)) => row.decision = "cap".into(),
        Err(e) => return Err(e),
    }
    Ok(row)
}

/// Runs every entry and returns the CSV text. Rows are sorted by entry,
/// size, repetition, budget and algorithm whatever the thread count.
/// Fails if two algorithms decide the same instance differently.
pub fn bench(suite: &Suite, base: &SolveOptions, threads: usize) -> Result<String, CliError> {
    let mut jobs = Vec::new();
    for (ei, e) in suite.entries.iter().enumerate() {
        let sizes = if e.sizes.is_empty() { vec![0] } else { e.sizes.clone() };
        for &size in &sizes {
            let params = if e.sizes.is_empty() { e.generator.clone() } else { resize(&e.generator, size) };
            for rep in 0..e.repetitions {
                let seed = e.seed.wrapping_add(rep as u64);
                let ks = if e.ks.is_empty() { vec![generate(&params, seed)?.k] } else { e.ks.clone() };
                for &k in &ks {
                    for &a in &e.algorithms {
                        jobs.push(Job { key: (ei, size, rep, k, a), params: params.clone(), seed });
                    }
                }
            }
        }
    }
    let base = SolveOptions { threads: 1, ..base.clone() };
    let mut rows: Vec<Row> = if threads <= 1 {
        jobs.iter().map(|j| run_job(j, &base)).collect::<Result<_, _>>()?
    } else {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .map_err(|e| CliError::Invalid(format!("thread pool: {e}")))?;
        pool.install(|| jobs.par_iter().map(|j| run_job(j, &base)).collect::<Result<_, _>>())?
    };
    rows.sort();

    let mut decided: BTreeMap<(usize, usize, usize, usize), (&str, Algorithm)> = BTreeMap::new();
    for r in &rows {
        if r.decision == "cap" {
            continue;
        }
        let (e, s, rep, k, a) = r.key;
        if let Some((d, other)) = decided.insert((e, s, rep, k), (&r.decision, a)) {
            if d != r.decision {
                return Err(CliError::Mismatch(format!(
                    "entry {e} size {s} rep {rep} k {k}: {} says {}, {} says {d}",
                    a.tag(),
                    r.decision,
                    other.tag()
                )));
            }
        }
    }

    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(HEADER).map_err(csv_err)?;
    for r in &rows {
        let (e, size, rep, k, a) = r.key;
        w.write_record([
            e.to_string(),
            r.model.tag().to_string(),
            r.family.clone(),
            size.to_string(),
            rep.to_string(),
            r.seed.to_string(),
            r.n.to_string(),
            k.to_string(),
            a.tag().to_string(),
            r.decision.clone(),
            r.nodes.to_string(),
            r.leaves.to_string(),
            r.ie_subsets.to_string(),
            r.candidates.to_string(),
            r.naive_bound.to_string(),
            r.wall_ms.map(|x| x.to_string()).unwrap_or_default(),
        ])
        .map_err(csv_err)?;
    }
    let bytes = w.into_inner().map_err(|e| CliError::Io(e.into_error()))?;
    Ok(String::from_utf8(bytes).expect("ascii fields"))
}

fn csv_err(e: csv::Error) -> CliError {
    CliError::Io(std::io::Error::other(e))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn quiet() -> SolveOptions {
        SolveOptions { timing: false, ..Default::default() }
    }

    #[test]
    fn empty_suite_is_header_only() {
        let out = bench(&Suite::default(), &quiet(), 1).unwrap();
        assert_eq!(out.trim_end(), HEADER.join(","));
    }

    #[test]
    fn grid_sweep_agrees() {
        let suite: Suite = serde_json::from_str(
            r#"{"entries":[{"generator":{"model":"grid"},"sizes":[2,3,4],
                "algorithms":["ie","branch","oracle"]}]}"#,
        )
        .unwrap();
        let out = bench(&suite, &quiet(), 1).unwrap();
        let lines: Vec<&str> = out.lines().collect();
        assert_eq!(lines.len(), 1 + 9);
        for size in 2..=4 {
            let decisions: Vec<&str> = lines[1..]
                .iter()
                .map(|l| l.split(',').collect::<Vec<_>>())
                .filter(|f| f[3] == size.to_string())
                .map(|f| f[9])
                .collect();
            assert_eq!(decisions, ["yes"; 3], "size {size}");
        }
        assert_eq!(out, bench(&suite, &quiet(), 3).unwrap());
    }

    #[test]
    fn explicit_budgets() {
        let suite: Suite = serde_json::from_str(
            r#"{"entries":[{"generator":{"model":"grid","n":3},"ks":[2,3],
                "algorithms":["branch","oracle"],"repetitions":2,"seed":5}]}"#,
        )
        .unwrap();
        let out = bench(&suite, &quiet(), 1).unwrap();
        let rows: Vec<Vec<&str>> = out.lines().skip(1).map(|l| l.split(',').collect()).collect();
        assert_eq!(rows.len(), 8);
        assert!(rows.iter().all(|r| r[9] == if r[7] == "2" { "no" } else { "yes" }));
    }
}
