//! `ptsat bench`: the three-algorithm benchmark over an instance suite.

use std::path::PathBuf;

use anyhow::Result;
use clap::Args;

use crate::bench::run_bench;
use crate::config::{AlgorithmId, BenchConfig, BenchConfigFile, InstanceSpec, Profile};

#[derive(Args, Debug)]
pub struct BenchArgs {
    /// JSON config document; flags override its fields.
    #[arg(long, env = "PTSAT_CONFIG")]
    pub config: Option<PathBuf>,
    /// Baseline parameter profile: desk or paper.
    #[arg(long, env = "PTSAT_PROFILE")]
    pub profile: Option<String>,
    #[arg(long, env = "PTSAT_SEED")]
    pub seed: Option<u64>,
    /// Worker threads (0 = all cores). Never affects the results.
    #[arg(long, env = "PTSAT_WORKERS")]
    pub workers: Option<usize>,
    /// Repeats per (instance, algorithm).
    #[arg(long, env = "PTSAT_GAMMA")]
    pub gamma: Option<u64>,
    /// Comma-separated algorithms to run.
    #[arg(long, value_delimiter = ',')]
    pub algorithms: Option<Vec<String>>,
    /// Record episode traces as JSON lines.
    #[arg(long, env = "PTSAT_TRACE")]
    pub trace: bool,
    #[arg(long, env = "PTSAT_OUT_DIR")]
    pub out_dir: Option<PathBuf>,
    /// Extra DIMACS instances appended to the config's list.
    pub instances: Vec<PathBuf>,
}

impl BenchArgs {
    /// Applies precedence: profile defaults, then the config file, then
    /// flags (which clap already fed from PTSAT_* variables).
    pub fn resolve(&self) -> Result<BenchConfig> {
        let mut file = match &self.config {
            Some(path) => BenchConfigFile::load(path)?,
            None => BenchConfigFile::default(),
        };
        if let Some(profile) = &self.profile {
            file.profile = Some(Profile::parse(profile)?);
        }
        let mut config = file.resolve();
        if let Some(seed) = self.seed {
            config.seed = seed;
        }
        if let Some(workers) = self.workers {
            config.workers = workers;
        }
        if let Some(gamma) = self.gamma {
            config.gamma = gamma;
        }
        if let Some(names) = &self.algorithms {
            config.algorithms = names
                .iter()
                .map(|n| AlgorithmId::parse(n))
                .collect::<Result<_>>()?;
        }
        if self.trace {
            config.trace = true;
        }
        for path in &self.instances {
            config.instances.push(InstanceSpec::Path {
                path: path.clone(),
                group: None,
                name: None,
            });
        }
        Ok(config)
    }
}

pub fn run(args: &BenchArgs) -> Result<i32> {
    let config = args.resolve()?;
    let outcome = run_bench(&config, args.out_dir.as_deref())?;
    let solved_rows = outcome.rows.iter().filter(|r| r.solved > 0).count();
    println!(
        "bench complete: {} rows over {} instances ({} rows with at least one solved repeat)",
        outcome.rows.len(),
        config.instances.len(),
        solved_rows
    );
    for group in &outcome.summary.groups {
        println!(
            "group {} / {}: per-problem {:.1}%, per-group {:.1}%",
            group.group,
            group.algorithm,
            group.per_problem_success_rate,
            group.per_group_success_rate
        );
    }
    if let Some(dir) = &args.out_dir {
        println!("tables written to {}", dir.display());
    }
    Ok(0)
}
