//! Experiment orchestration: seeded parallel Monte Carlo sweeps behind a
//! JSON config, CSV persistence, quantitative checks, and the verification
//! suite.
//!
//! Determinism contract: an identical config (including `master_seed`)
//! yields byte-identical CSV rows at any parallelism level. Per-repetition
//! generators are derived by keyed hashing of (master_seed, problem, n,
//! repetition), never by sequential splitting, and aggregation always runs
//! in repetition-index order.

pub mod checks;
pub mod verify;

use std::fs::File;
use std::io::{Read, Write};
use std::path::Path;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::knn::{aggregate_errors, repetition_error, KSchedule, TieBreakPolicy};
use crate::problem::{build_problem, ProblemSpec};

fn default_parallelism() -> usize {
    1
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct ExperimentConfig {
    pub problem: ProblemSpec,
    pub n_grid: Vec<usize>,
    pub schedule: KSchedule,
    pub policy: TieBreakPolicy,
    pub repetitions: usize,
    pub test_draws: usize,
    pub master_seed: u64,
    #[serde(default = "default_parallelism")]
    pub parallelism: usize,
    pub output_path: String,
    /// Off by default: with timing off, `wall_ms` is written as 0 and the
    /// CSV is byte-identical across runs and parallelism levels.
    #[serde(default)]
    pub record_timing: bool,
}

impl ExperimentConfig {
    pub fn validate(&self) -> Result<()> {
        if self.n_grid.is_empty() {
            return Err(Error::Config("n_grid must be nonempty".into()));
        }
        if !self.n_grid.windows(2).all(|w| w[0] < w[1]) {
            return Err(Error::Config("n_grid must be strictly increasing".into()));
        }
        if self.n_grid[0] == 0 {
            return Err(Error::Config("n must be positive".into()));
        }
        if self.repetitions < 2 {
            return Err(Error::Config("repetitions must be >= 2".into()));
        }
        if self.test_draws == 0 {
            return Err(Error::Config("test_draws must be >= 1".into()));
        }
        if self.parallelism == 0 {
            return Err(Error::Config("parallelism must be >= 1".into()));
        }
        for &n in &self.n_grid {
            let k = self.schedule.k_for(n);
            if k == 0 || k > n {
                return Err(Error::Config(format!("schedule gives k = {k} at n = {n}")));
            }
        }
        Ok(())
    }

    pub fn from_json(json: &str) -> Result<Self> {
        let config: ExperimentConfig = serde_json::from_str(json)?;
        config.validate()?;
        Ok(config)
    }

    pub fn from_json_file<P: AsRef<Path>>(path: P) -> Result<Self> {
        let mut buf = String::new();
        File::open(path)?.read_to_string(&mut buf)?;
        Self::from_json(&buf)
    }
}

/// One Monte Carlo error estimate.
///
/// `excess_risk = err_mean - bayes_error`; it can dip below zero only by
/// statistical noise, never materially below `-3 * err_sem`.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct ResultRow {
    pub problem_name: String,
    pub n: usize,
    pub k: usize,
    #[serde(rename = "R")]
    pub repetitions: usize,
    #[serde(rename = "M")]
    pub test_draws: usize,
    pub err_mean: f64,
    pub err_sem: f64,
    pub bayes_error: f64,
    pub excess_risk: f64,
    pub wall_ms: u64,
    pub master_seed: u64,
}

/// Runs the configured sweep: one row per n in the grid.
///
/// Repetitions execute on a fixed-size worker pool; each repetition derives
/// its own generator substream, and rows aggregate repetition errors in
/// index order, so the output is invariant under scheduling.
pub fn run_experiment(config: &ExperimentConfig) -> Result<Vec<ResultRow>> {
    config.validate()?;
    let problem = build_problem(&config.problem)?;
    let bayes = problem.bayes_error();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(config.parallelism)
        .build()
        .map_err(|e| Error::Config(format!("worker pool: {e}")))?;

    let mut rows = Vec::with_capacity(config.n_grid.len());
    for &n in &config.n_grid {
        let k = config.schedule.k_for(n);
        let start = Instant::now();
        let rep_errors: Vec<f64> = pool.install(|| {
            (0..config.repetitions)
                .into_par_iter()
                .map(|rep| {
                    repetition_error(
                        &problem,
                        n,
                        k,
                        config.policy,
                        config.master_seed,
                        rep,
                        config.test_draws,
                    )
                })
                .collect::<Result<Vec<f64>>>()
        })?;
        let (err_mean, err_sem) = aggregate_errors(&rep_errors);
        let wall_ms = if config.record_timing { start.elapsed().as_millis() as u64 } else { 0 };
        rows.push(ResultRow {
            problem_name: problem.name().to_string(),
            n,
            k,
            repetitions: config.repetitions,
            test_draws: config.test_draws,
            err_mean,
            err_sem,
            bayes_error: bayes,
            excess_risk: err_mean - bayes,
            wall_ms,
            master_seed: config.master_seed,
        });
    }
    Ok(rows)
}

pub fn write_rows<W: Write>(w: W, rows: &[ResultRow]) -> Result<()> {
    let mut wtr = csv::Writer::from_writer(w);
    for row in rows {
        wtr.serialize(row)?;
    }
    wtr.flush()?;
    Ok(())
}

pub fn write_rows_to_path<P: AsRef<Path>>(path: P, rows: &[ResultRow]) -> Result<()> {
    let file = File::create(path)?;
    write_rows(file, rows)
}

pub fn read_rows<R: Read>(r: R) -> Result<Vec<ResultRow>> {
    let mut rdr = csv::Reader::from_reader(r);
    let mut rows = Vec::new();
    for rec in rdr.deserialize() {
        rows.push(rec?);
    }
    Ok(rows)
}

pub fn read_rows_from_path<P: AsRef<Path>>(path: P) -> Result<Vec<ResultRow>> {
    read_rows(File::open(path)?)
}

/// CSV bytes for the rows; what `run_experiment` + `write_rows` would put on
/// disk, used by the reproducibility checks.
pub fn rows_to_csv_bytes(rows: &[ResultRow]) -> Result<Vec<u8>> {
    let mut buf = Vec::new();
    write_rows(&mut buf, rows)?;
    Ok(buf)
}
