use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use samplestream::harness::{
    audit_lemma1, emit_report, gen_instance, resolve_config, run_sweep, run_trial, verify_instance,
    write_csv, write_json, Algorithm, GenKind, GenParams, ReportFormat, SweepSpec, TrialOptions,
    TrialRecord,
};
use samplestream::matchoid::RECOMMENDED_K_CAP;
use samplestream::matroids::RECOMMENDED_AXIOM_CAP;
use samplestream::objectives::RECOMMENDED_SUBMODULAR_CAP;
use samplestream::streaming::RECOMMENDED_OPT_CAP;
use samplestream::{load_instance, Instance, Preset};

/// Subsampled streaming submodular maximization under p-matchoid constraints.
#[derive(Debug, Parser)]
#[command(name = "samplestream", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Generate a synthetic instance file.
    Gen {
        #[arg(long)]
        kind: GenKind,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        params: GenArgs,
        /// Write here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run one algorithm once and print its record.
    Run {
        #[arg(long)]
        instance: PathBuf,
        #[arg(long, default_value = "sample")]
        algo: Algorithm,
        #[command(flatten)]
        tuning: Tuning,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        output: Output,
    },
    /// Run algorithms over many seeds and report every trial.
    Sweep {
        #[command(flatten)]
        source: Source,
        /// Algorithms to run; repeat or separate with commas.
        #[arg(long, value_delimiter = ',', default_value = "sample")]
        algo: Vec<Algorithm>,
        #[command(flatten)]
        tuning: Tuning,
        /// Number of seeds.
        #[arg(long, default_value_t = 100)]
        seeds: u64,
        /// First seed.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        output: Output,
    },
    /// Check the eviction bounds, acceptances and feasibility over many seeds.
    Audit {
        #[arg(long)]
        instance: PathBuf,
        #[command(flatten)]
        tuning: Tuning,
        #[arg(long, default_value_t = 100)]
        seeds: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Also check peak memory against 3k when n is at most this.
        #[arg(long, default_value_t = RECOMMENDED_K_CAP)]
        k_cap: usize,
    },
    /// Exhaustively check matroid axioms and submodularity of a small instance.
    Verify {
        #[arg(long)]
        instance: PathBuf,
        #[arg(long, default_value_t = RECOMMENDED_AXIOM_CAP)]
        axiom_cap: usize,
        #[arg(long, default_value_t = RECOMMENDED_SUBMODULAR_CAP)]
        submodular_cap: usize,
    },
}

#[derive(Debug, Args)]
struct GenArgs {
    #[arg(long, default_value_t = GenParams::default().n)]
    n: usize,
    #[arg(long, default_value_t = GenParams::default().items)]
    items: usize,
    #[arg(long, default_value_t = GenParams::default().cover_size)]
    cover_size: usize,
    #[arg(long, default_value_t = GenParams::default().rank)]
    rank: usize,
    #[arg(long, default_value_t = GenParams::default().vertices)]
    vertices: usize,
    #[arg(long, default_value_t = GenParams::default().edges)]
    edges: usize,
    #[arg(long, default_value_t = GenParams::default().b)]
    b: usize,
    #[arg(long, default_value_t = GenParams::default().blocks)]
    blocks: usize,
    #[arg(long, default_value_t = GenParams::default().cap)]
    cap: usize,
    #[arg(long, default_value_t = GenParams::default().dim)]
    dim: usize,
    /// Shuffle the arrival order with the seed.
    #[arg(long)]
    shuffle: bool,
}

impl From<&GenArgs> for GenParams {
    fn from(a: &GenArgs) -> Self {
        GenParams {
            n: a.n,
            items: a.items,
            cover_size: a.cover_size,
            rank: a.rank,
            vertices: a.vertices,
            edges: a.edges,
            b: a.b,
            blocks: a.blocks,
            cap: a.cap,
            dim: a.dim,
            shuffle: a.shuffle,
        }
    }
}

#[derive(Debug, Args)]
struct Source {
    #[arg(long, conflicts_with = "gen")]
    instance: Option<PathBuf>,
    /// Generate the instance instead of loading it.
    #[arg(long)]
    gen: Option<GenKind>,
    #[arg(long, default_value_t = 0)]
    gen_seed: u64,
    #[command(flatten)]
    params: GenArgs,
}

impl Source {
    fn load(&self) -> Result<Instance> {
        match (&self.instance, self.gen) {
            (Some(path), _) => open(path),
            (None, Some(kind)) => {
                Ok(gen_instance(kind, &GenParams::from(&self.params), self.gen_seed)?.build()?)
            }
            (None, None) => bail!("either --instance or --gen is required"),
        }
    }
}

#[derive(Debug, Args)]
struct Tuning {
    /// Defaults to `monotone` when the objective is monotone.
    #[arg(long)]
    preset: Option<Preset>,
    /// Overrides the matchoid parameter used by the preset.
    #[arg(long)]
    p: Option<usize>,
    #[arg(long)]
    q: Option<f64>,
    #[arg(long)]
    c: Option<f64>,
    #[arg(long, default_value_t = RECOMMENDED_OPT_CAP)]
    opt_cap: usize,
    /// Record wall-clock time (makes output irreproducible).
    #[arg(long)]
    timing: bool,
}

impl Tuning {
    fn preset(&self, instance: &Instance) -> Preset {
        self.preset.unwrap_or(if instance.objective.is_monotone() {
            Preset::Monotone
        } else {
            Preset::Nonmonotone
        })
    }

    fn p(&self, instance: &Instance) -> usize {
        self.p.unwrap_or_else(|| instance.matchoid.p())
    }
}

#[derive(Debug, Args)]
struct Output {
    #[arg(long)]
    out: Option<PathBuf>,
    /// Defaults to the extension of `--out`, else csv.
    #[arg(long)]
    format: Option<ReportFormat>,
}

impl Output {
    fn write(&self, records: &[TrialRecord]) -> Result<()> {
        let format = self
            .format
            .or_else(|| self.out.as_deref().map(ReportFormat::from_path))
            .unwrap_or(ReportFormat::Csv);
        match &self.out {
            Some(path) => emit_report(records, format, path)?,
            None => {
                let stdout = io::stdout().lock();
                match format {
                    ReportFormat::Csv => write_csv(records, stdout)?,
                    ReportFormat::Json => write_json(records, stdout)?,
                }
            }
        }
        Ok(())
    }
}

fn open(path: &Path) -> Result<Instance> {
    load_instance(path).with_context(|| format!("loading {}", path.display()))
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}

/// Returns `Ok(false)` when the command ran but found a problem.
fn run(cli: Cli) -> Result<bool> {
    match cli.command {
        Command::Gen {
            kind,
            seed,
            params,
            out,
        } => {
            let spec = gen_instance(kind, &GenParams::from(&params), seed)?;
            match out {
                Some(path) => spec.write(&path)?,
                None => writeln!(io::stdout(), "{}", spec.to_json_string())?,
            }
            Ok(true)
        }
        Command::Run {
            instance,
            algo,
            tuning,
            seed,
            output,
        } => {
            let instance = open(&instance)?;
            let config = resolve_config(
                algo,
                tuning.preset(&instance),
                tuning.p(&instance),
                tuning.c,
                tuning.q,
                seed,
            )?;
            let options = TrialOptions {
                opt_cap: tuning.opt_cap,
                opt: None,
                timing: tuning.timing,
            };
            let record = run_trial(&instance, algo, &config, &options)?;
            output.write(&[record])?;
            Ok(true)
        }
        Command::Sweep {
            source,
            algo,
            tuning,
            seeds,
            seed,
            output,
        } => {
            let instance = source.load()?;
            let mut spec = SweepSpec::new(algo, seed..seed + seeds, tuning.preset(&instance));
            spec.p = tuning.p;
            spec.c = tuning.c;
            spec.q = tuning.q;
            spec.opt_cap = tuning.opt_cap;
            spec.timing = tuning.timing;
            let result = run_sweep(&instance, &spec)?;
            output.write(&result.records)?;
            for s in &result.summaries {
                eprintln!(
                    "{}: {} trials, mean value {:.6} (stderr {:.6}), {:.3} queries/element, peak {}",
                    s.algorithm, s.trials, s.mean_value, s.stderr, s.mean_queries_per_element, s.max_peak_elements
                );
            }
            for f in &result.failures {
                eprintln!("failed: {} seed {}: {}", f.algorithm, f.seed, f.message);
            }
            Ok(result.failures.is_empty())
        }
        Command::Audit {
            instance,
            tuning,
            seeds,
            seed,
            k_cap,
        } => {
            let instance = open(&instance)?;
            let config = resolve_config(
                Algorithm::SampleAudit,
                tuning.preset(&instance),
                tuning.p(&instance),
                tuning.c,
                tuning.q,
                seed,
            )?;
            let k = (instance.n() <= k_cap)
                .then(|| instance.matchoid.max_feasible_size(k_cap))
                .transpose()?;
            let report = audit_lemma1(&instance, &config, seed..seed + seeds, k)?;
            for v in &report.violations {
                println!("violation: seed {} [{}] {}", v.seed, v.check, v.detail);
                if let Some(trace) = &v.trace {
                    println!("  accepted {:?}", instance.ids_of(&trace.ever_in_solution));
                    for acc in &trace.acceptances {
                        println!(
                            "  step {}: {} gain {} evicting {:?} cost {}",
                            acc.arrival_index,
                            instance.universe.id(acc.element),
                            acc.gain,
                            instance.ids_of(&acc.evicted),
                            acc.evicted_cost
                        );
                    }
                }
            }
            println!(
                "audit: {} runs, {} violations (c = {}, q = {}{})",
                report.runs.len(),
                report.violations.len(),
                config.c,
                config.q,
                k.map(|k| format!(", k = {k}")).unwrap_or_default()
            );
            Ok(report.passed())
        }
        Command::Verify {
            instance,
            axiom_cap,
            submodular_cap,
        } => {
            let instance = open(&instance)?;
            let report = verify_instance(&instance, axiom_cap, submodular_cap)?;
            for (l, r) in &report.matroids {
                let kind = instance.matchoid.matroid(*l).kind();
                println!(
                    "matroid {l} ({kind}): {} independent sets over {} elements, {} violations",
                    r.independent_sets,
                    r.ground_size,
                    r.violations.len()
                );
                for v in r.violations.iter().take(5) {
                    println!("  {v:?}");
                }
            }
            for l in &report.skipped_matroids {
                println!("matroid {l}: skipped, ground set above {axiom_cap}");
            }
            match &report.objective {
                Some(r) => {
                    println!(
                        "objective ({}): {} comparisons, {} skipped as singular, {} violations",
                        instance.objective.kind(),
                        r.comparisons,
                        r.skipped_singular,
                        r.violations.len()
                    );
                    for v in r.violations.iter().take(5) {
                        println!("  {v:?}");
                    }
                }
                None => println!("objective: skipped, n above {submodular_cap}"),
            }
            Ok(report.passed())
        }
    }
}
