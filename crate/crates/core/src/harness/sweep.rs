use std::path::PathBuf;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::instance::Instance;
use crate::streaming::{Preset, RECOMMENDED_OPT_CAP};

use super::report::{emit_report, ReportFormat};
use super::trial::{compute_opt, resolve_config, run_trial, Algorithm, TrialOptions, TrialRecord};

#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    pub algorithms: Vec<Algorithm>,
    pub seeds: Vec<u64>,
    pub preset: Preset,
    /// Overrides the instance's matchoid parameter when choosing presets.
    pub p: Option<usize>,
    pub c: Option<f64>,
    pub q: Option<f64>,
    pub opt_cap: usize,
    pub timing: bool,
    pub output: Option<(PathBuf, ReportFormat)>,
}

impl SweepSpec {
    pub fn new(
        algorithms: Vec<Algorithm>,
        seeds: impl IntoIterator<Item = u64>,
        preset: Preset,
    ) -> Self {
        SweepSpec {
            algorithms,
            seeds: seeds.into_iter().collect(),
            preset,
            p: None,
            c: None,
            q: None,
            opt_cap: RECOMMENDED_OPT_CAP,
            timing: false,
            output: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TrialFailure {
    pub algorithm: Algorithm,
    pub seed: u64,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AlgorithmSummary {
    pub algorithm: Algorithm,
    pub trials: usize,
    pub mean_value: f64,
    /// Standard error of `mean_value`; zero with fewer than two trials.
    pub stderr: f64,
    pub mean_ratio: Option<f64>,
    pub mean_queries_per_element: f64,
    pub max_peak_elements: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepResult {
    /// Sorted by `(algorithm, seed)`.
    pub records: Vec<TrialRecord>,
    pub failures: Vec<TrialFailure>,
    pub summaries: Vec<AlgorithmSummary>,
    pub opt: Option<f64>,
}

/// Per-algorithm aggregates, in algorithm order. Records are folded in
/// `(algorithm, seed)` order whatever order they are passed in.
pub fn summarize(records: &[TrialRecord]) -> Vec<AlgorithmSummary> {
    let mut records: Vec<&TrialRecord> = records.iter().collect();
    records.sort_by_key(|r| (r.algorithm, r.seed));
    Algorithm::ALL
        .into_iter()
        .filter_map(|algorithm| {
            let rows: Vec<&TrialRecord> = records
                .iter()
                .copied()
                .filter(|r| r.algorithm == algorithm)
                .collect();
            if rows.is_empty() {
                return None;
            }
            let n = rows.len() as f64;
            let mean_value = rows.iter().map(|r| r.value).sum::<f64>() / n;
            let stderr = if rows.len() < 2 {
                0.0
            } else {
                let var = rows
                    .iter()
                    .map(|r| (r.value - mean_value).powi(2))
                    .sum::<f64>()
                    / (n - 1.0);
                (var / n).sqrt()
            };
            let ratios: Vec<f64> = rows.iter().filter_map(|r| r.ratio).collect();
            let mean_ratio =
                (!ratios.is_empty()).then(|| ratios.iter().sum::<f64>() / ratios.len() as f64);
            Some(AlgorithmSummary {
                algorithm,
                trials: rows.len(),
                mean_value,
                stderr,
                mean_ratio,
                mean_queries_per_element: rows
                    .iter()
                    .map(|r| r.avg_queries_per_element)
                    .sum::<f64>()
                    / n,
                max_peak_elements: rows.iter().map(|r| r.peak_elements).max().unwrap_or(0),
            })
        })
        .collect()
}

/// Runs every `(algorithm, seed)` pair in parallel. A failing trial is
/// recorded and the sweep carries on; configuration errors abort it.
/// OPT is computed once, when the instance is small enough.
pub fn run_sweep(instance: &Instance, spec: &SweepSpec) -> Result<SweepResult> {
    if spec.algorithms.is_empty() {
        return Err(Error::Config("a sweep needs at least one algorithm".into()));
    }
    if spec.seeds.is_empty() {
        return Err(Error::Config("a sweep needs at least one seed".into()));
    }
    let p = spec.p.unwrap_or_else(|| instance.matchoid.p());
    let mut algorithms = spec.algorithms.clone();
    algorithms.sort_unstable();
    algorithms.dedup();
    // validate configurations up front
    for &a in &algorithms {
        resolve_config(a, spec.preset, p, spec.c, spec.q, 0)?;
    }

    let opt_run = (instance.n() <= spec.opt_cap)
        .then(|| compute_opt(instance, spec.opt_cap))
        .transpose()?;
    let opt = opt_run.as_ref().map(|(_, v, _)| *v);
    let options = TrialOptions {
        opt_cap: spec.opt_cap,
        opt,
        timing: spec.timing,
    };

    let jobs: Vec<(Algorithm, u64)> = algorithms
        .iter()
        .flat_map(|&a| spec.seeds.iter().map(move |&s| (a, s)))
        .collect();
    let outcomes: Vec<std::result::Result<TrialRecord, TrialFailure>> = jobs
        .par_iter()
        .map(|&(algorithm, seed)| {
            resolve_config(algorithm, spec.preset, p, spec.c, spec.q, seed)
                .and_then(|config| run_trial(instance, algorithm, &config, &options))
                .map_err(|e| TrialFailure {
                    algorithm,
                    seed,
                    message: e.to_string(),
                })
        })
        .collect();

    let mut records = Vec::new();
    let mut failures = Vec::new();
    for outcome in outcomes {
        match outcome {
            Ok(r) => records.push(r),
            Err(f) => failures.push(f),
        }
    }
    records.sort_by_key(|r| (r.algorithm, r.seed));
    failures.sort_by_key(|f| (f.algorithm, f.seed));

    if let Some((path, format)) = &spec.output {
        emit_report(&records, *format, path)?;
    }
    Ok(SweepResult {
        summaries: summarize(&records),
        records,
        failures,
        opt,
    })
}
