//! The benchmark engine behind `ptsat bench`.
//!
//! Repeats are independent tasks with seeds derived from
//! `(master seed, instance name, algorithm tag, repeat index, replica slot)`,
//! so results are identical for any worker count and any execution order.
//! Rows are written in (instance, algorithm) order and flushed as each
//! instance completes; raw per-repeat records are archived next to the
//! tables so every reported number can be recomputed.

use std::collections::BTreeMap;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use anyhow::{anyhow, bail, Context, Result};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use ptsat::cnf::{parse_dimacs, Formula, SearchState};
use ptsat::generator::{self, PlantedSpec};
use ptsat::kernels::{run_episode, KernelKind};
use ptsat::metrics::{
    improvement, its99, per_group_success_rate, per_problem_success_rate, RepeatSet, RunRecord,
};
use ptsat::ptic::{run_ptic, run_standard_pt, PticOptions, TraceEvent, STREAM_REPLICA};
use ptsat::report::{self, ResultRow};
use ptsat::rng::{derive_seed, fold_bytes, Rng};
use ptsat::schedule::TemperatureSchedule;

use crate::config::{AlgorithmId, BenchConfig, GenerateSpec, InstanceSpec};

/// A loaded benchmark input.
#[derive(Clone, Debug)]
pub struct BenchInstance {
    pub name: String,
    pub group: String,
    pub formula: Arc<Formula>,
}

/// One repeat's archived outcome. The trace, when recorded, is written to
/// its own JSONL file named after (instance, algorithm, repeat).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RepeatOutcome {
    pub record: RunRecord,
    pub successful_slot: Option<usize>,
    pub successful_q: Option<u64>,
}

/// Raw archive for one (instance, algorithm) pass.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RawArchive {
    pub instance: String,
    pub group: String,
    pub algorithm: String,
    pub tau: u64,
    /// True for the second walksat pass at the escalated cap.
    pub escalated: bool,
    pub repeats: Vec<RepeatOutcome>,
}

impl RawArchive {
    pub fn repeat_set(&self) -> RepeatSet {
        RepeatSet::new(self.repeats.iter().map(|r| r.record).collect())
            .expect("archive repeats share one budget")
    }

    pub fn file_stem(&self) -> String {
        let suffix = if self.escalated { "__escalated" } else { "" };
        format!(
            "{}__{}{}",
            sanitize(&self.instance),
            sanitize(&self.algorithm),
            suffix
        )
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GroupSummary {
    pub group: String,
    pub algorithm: String,
    pub instances: usize,
    pub gamma: u64,
    pub per_problem_success_rate: f64,
    pub per_group_success_rate: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub seed: u64,
    pub subject: String,
    pub baseline: String,
    pub groups: Vec<GroupSummary>,
}

#[derive(Clone, Debug)]
pub struct BenchOutcome {
    pub rows: Vec<ResultRow>,
    pub archives: Vec<RawArchive>,
    pub summary: Summary,
}

/// Per-algorithm parameters with schedules resolved, validated up front so
/// worker tasks cannot fail.
struct ResolvedParams {
    walksat_eta: f64,
    walksat_cap: u64,
    walksat_escalated_cap: Option<u64>,
    pa_schedule: TemperatureSchedule,
    pa_cap: u64,
    ptic_schedule: TemperatureSchedule,
    ptic_steps: u64,
    ptic_episodes: u64,
    stdpt_schedule: TemperatureSchedule,
    stdpt_sweeps: u64,
}

impl ResolvedParams {
    fn from_config(config: &BenchConfig) -> Result<Self> {
        let resolved = ResolvedParams {
            walksat_eta: config.walksat.eta,
            walksat_cap: config.walksat.max_iterations,
            walksat_escalated_cap: config.walksat.escalated_max_iterations,
            pa_schedule: config.pa_walksat.schedule.resolve()?,
            pa_cap: config.pa_walksat.max_iterations,
            ptic_schedule: config.ptic.schedule.resolve()?,
            ptic_steps: config.ptic.steps_per_episode,
            ptic_episodes: config.ptic.max_episodes,
            stdpt_schedule: config.standard_pt.schedule.resolve()?,
            stdpt_sweeps: config.standard_pt.max_sweeps,
        };
        if !(0.0..=1.0).contains(&resolved.walksat_eta) {
            bail!("walk probability {} outside [0, 1]", resolved.walksat_eta);
        }
        if resolved.walksat_cap == 0 || resolved.pa_cap == 0 {
            bail!("iteration caps must be positive");
        }
        if let Some(cap) = resolved.walksat_escalated_cap {
            if cap <= resolved.walksat_cap {
                bail!(
                    "escalated cap {cap} must exceed the base cap {}",
                    resolved.walksat_cap
                );
            }
        }
        if resolved.ptic_steps == 0 || resolved.ptic_episodes == 0 || resolved.stdpt_sweeps == 0 {
            bail!("episode budgets must be positive");
        }
        if !resolved.pa_schedule.fits_walk_probability() {
            bail!("pa-walksat schedule temperatures must lie in (0, 1]");
        }
        if !resolved.ptic_schedule.fits_walk_probability() {
            bail!("ptic-walksat schedule temperatures must lie in (0, 1]");
        }
        Ok(resolved)
    }
}

fn sanitize(name: &str) -> String {
    name.chars()
        .map(|c| {
            if c.is_ascii_alphanumeric() || matches!(c, '.' | '_' | '-') {
                c
            } else {
                '_'
            }
        })
        .collect()
}

pub fn load_formula(path: &Path) -> Result<Formula> {
    let file = fs::File::open(path).with_context(|| format!("opening {}", path.display()))?;
    parse_dimacs(std::io::BufReader::new(file))
        .with_context(|| format!("parsing {}", path.display()))
}

fn planted_spec_from(generate: &GenerateSpec) -> Result<PlantedSpec> {
    if let Some(preset) = &generate.preset {
        return generator::preset(preset, generate.seed)
            .ok_or_else(|| anyhow!("unknown generator preset `{preset}`"));
    }
    match (
        generate.num_vars,
        generate.num_clauses,
        generate.clause_size,
    ) {
        (Some(n), Some(m), Some(k)) => Ok(PlantedSpec::new(n, m, k, generate.seed)),
        _ => bail!("generator spec needs either a preset or num_vars + num_clauses + clause_size"),
    }
}

/// Loads files and runs generator specs, assigning names and groups.
pub fn resolve_instances(specs: &[InstanceSpec]) -> Result<Vec<BenchInstance>> {
    let mut instances = Vec::with_capacity(specs.len());
    for spec in specs {
        let instance = match spec {
            InstanceSpec::Path { path, group, name } => {
                let formula = load_formula(path)?;
                let name = name.clone().unwrap_or_else(|| {
                    path.file_stem()
                        .map(|s| s.to_string_lossy().into_owned())
                        .unwrap_or_else(|| path.display().to_string())
                });
                BenchInstance {
                    name,
                    group: group.clone().unwrap_or_else(|| "ungrouped".to_string()),
                    formula: Arc::new(formula),
                }
            }
            InstanceSpec::Generate {
                generate,
                group,
                name,
            } => {
                let spec = planted_spec_from(generate)?;
                let (formula, _) = generator::generate_planted(&spec)
                    .map_err(|e| anyhow!("generating instance: {e}"))?;
                let default_name = match &generate.preset {
                    Some(p) => format!("{p}-s{}", generate.seed),
                    None => format!(
                        "planted-n{}-m{}-k{}-s{}",
                        spec.num_vars, spec.num_clauses, spec.clause_size, generate.seed
                    ),
                };
                BenchInstance {
                    name: name.clone().unwrap_or(default_name),
                    group: group
                        .clone()
                        .or_else(|| generate.preset.clone())
                        .unwrap_or_else(|| "planted".to_string()),
                    formula: Arc::new(formula),
                }
            }
        };
        instances.push(instance);
    }
    let mut names: Vec<&str> = instances.iter().map(|i| i.name.as_str()).collect();
    names.sort_unstable();
    if let Some(dup) = names.windows(2).find(|w| w[0] == w[1]) {
        bail!("duplicate instance name `{}`", dup[0]);
    }
    Ok(instances)
}

fn run_repeat(
    algorithm: AlgorithmId,
    instance: &BenchInstance,
    params: &ResolvedParams,
    master_seed: u64,
    repeat: u64,
    cap_override: Option<u64>,
    want_trace: bool,
) -> (RepeatOutcome, Option<Vec<TraceEvent>>) {
    let run_seed = derive_seed(
        master_seed,
        &[
            fold_bytes(0, instance.name.as_bytes()),
            algorithm.seed_tag(),
            repeat,
        ],
    );
    match algorithm {
        AlgorithmId::Walksat => {
            let cap = cap_override.unwrap_or(params.walksat_cap);
            let mut rng = Rng::derived(run_seed, &[STREAM_REPLICA, 0]);
            let mut state = SearchState::random(instance.formula.clone(), &mut rng);
            let outcome = run_episode(
                &mut state,
                KernelKind::WalkSat,
                params.walksat_eta,
                cap,
                &mut rng,
            );
            (
                RepeatOutcome {
                    record: RunRecord {
                        solved: outcome.solved,
                        iterations_used: outcome.steps_taken,
                        budget: cap,
                    },
                    successful_slot: None,
                    successful_q: outcome.solved.then_some(outcome.steps_taken),
                },
                None,
            )
        }
        AlgorithmId::PaWalksat => {
            let temps = params.pa_schedule.temps();
            let kappa = temps.len() as u64;
            let cap = params.pa_cap;
            // Coldest replicas first: they solve soonest, and once a winner
            // exists the others only need its step count as budget. The
            // visit order cannot change the outcome because each slot has
            // its own stream and the winner is the minimum over slots.
            let mut order: Vec<usize> = (0..temps.len()).collect();
            order.sort_by(|&a, &b| temps[a].partial_cmp(&temps[b]).expect("temps are finite"));
            let mut best_q: Option<u64> = None;
            for slot in order {
                if best_q == Some(0) {
                    break;
                }
                let budget = best_q.unwrap_or(cap);
                let mut rng = Rng::derived(run_seed, &[STREAM_REPLICA, slot as u64]);
                let mut state = SearchState::random(instance.formula.clone(), &mut rng);
                let outcome = run_episode(
                    &mut state,
                    KernelKind::WalkSat,
                    temps[slot],
                    budget,
                    &mut rng,
                );
                if outcome.solved {
                    best_q =
                        Some(best_q.map_or(outcome.steps_taken, |b| b.min(outcome.steps_taken)));
                }
            }
            let tau = kappa * cap;
            (
                RepeatOutcome {
                    record: RunRecord {
                        solved: best_q.is_some(),
                        iterations_used: best_q.map_or(tau, |q| kappa * q),
                        budget: tau,
                    },
                    successful_slot: None,
                    successful_q: best_q,
                },
                None,
            )
        }
        AlgorithmId::PticWalksat => {
            let mut options = PticOptions::new(
                KernelKind::WalkSat,
                params.ptic_schedule.clone(),
                params.ptic_steps,
                params.ptic_episodes,
                run_seed,
            );
            options.record_trace = want_trace;
            let result =
                run_ptic(&instance.formula, &options).expect("parameters validated up front");
            let tau =
                params.ptic_schedule.kappa() as u64 * params.ptic_steps * params.ptic_episodes;
            (
                RepeatOutcome {
                    record: RunRecord {
                        solved: result.solved,
                        iterations_used: result.total_iterations,
                        budget: tau,
                    },
                    successful_slot: result.successful_slot,
                    successful_q: result.successful_q,
                },
                want_trace.then_some(result.trace),
            )
        }
        AlgorithmId::StandardPt => {
            let result = run_standard_pt(
                &instance.formula,
                params.stdpt_schedule.clone(),
                params.stdpt_sweeps,
                run_seed,
                want_trace,
            )
            .expect("parameters validated up front");
            let tau = params.stdpt_schedule.kappa() as u64
                * instance.formula.num_vars() as u64
                * params.stdpt_sweeps;
            (
                RepeatOutcome {
                    record: RunRecord {
                        solved: result.solved,
                        iterations_used: result.total_iterations,
                        budget: tau,
                    },
                    successful_slot: result.successful_slot,
                    successful_q: result.successful_q,
                },
                want_trace.then_some(result.trace),
            )
        }
    }
}

struct OutputWriter {
    root: PathBuf,
}

impl OutputWriter {
    fn new(root: &Path) -> Result<Self> {
        fs::create_dir_all(root.join("raw"))?;
        fs::create_dir_all(root.join("traces"))?;
        Ok(OutputWriter {
            root: root.to_path_buf(),
        })
    }

    /// Atomic replace so a crash never leaves a half-written table.
    fn write_atomic(&self, relative: &str, bytes: &[u8]) -> Result<()> {
        let path = self.root.join(relative);
        let tmp = self.root.join(format!("{relative}.tmp"));
        fs::write(&tmp, bytes).with_context(|| format!("writing {}", tmp.display()))?;
        fs::rename(&tmp, &path).with_context(|| format!("replacing {}", path.display()))?;
        Ok(())
    }

    fn flush_rows(&self, rows: &[ResultRow]) -> Result<()> {
        self.write_atomic("results.csv", report::csv_string(rows).as_bytes())
    }

    fn write_archive(&self, archive: &RawArchive) -> Result<()> {
        let mut body = serde_json::to_string_pretty(archive)?;
        body.push('\n');
        self.write_atomic(
            &format!("raw/{}.json", archive.file_stem()),
            body.as_bytes(),
        )
    }

    fn write_trace(
        &self,
        archive: &RawArchive,
        repeat: usize,
        events: &[TraceEvent],
    ) -> Result<()> {
        let path = self
            .root
            .join("traces")
            .join(format!("{}__r{repeat}.jsonl", archive.file_stem()));
        let mut file =
            fs::File::create(&path).with_context(|| format!("creating {}", path.display()))?;
        for event in events {
            serde_json::to_writer(&mut file, event)?;
            file.write_all(b"\n")?;
        }
        Ok(())
    }
}

/// Runs the full benchmark. With an output directory the result tables,
/// raw archives, and traces are written there; the outcome is returned
/// either way.
pub fn run_bench(config: &BenchConfig, out_dir: Option<&Path>) -> Result<BenchOutcome> {
    if config.instances.is_empty() {
        bail!("no instances configured");
    }
    if config.algorithms.is_empty() {
        bail!("no algorithms configured");
    }
    for &algorithm in &config.algorithms {
        if config.gamma_for(algorithm) == 0 {
            bail!("{algorithm} has zero repeats configured");
        }
    }
    let params = ResolvedParams::from_config(config)?;
    let instances = resolve_instances(&config.instances)?;
    let writer = out_dir.map(OutputWriter::new).transpose()?;

    let run = || run_inner(config, &params, &instances, writer.as_ref());
    let outcome = if config.workers > 0 {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(config.workers)
            .build()
            .context("building worker pool")?;
        pool.install(run)?
    } else {
        run()?
    };

    if let Some(writer) = &writer {
        writer.write_atomic(
            "results.json",
            report::json_string(&outcome.rows).as_bytes(),
        )?;
        let mut body = serde_json::to_string_pretty(&outcome.summary)?;
        body.push('\n');
        writer.write_atomic("summary.json", body.as_bytes())?;
    }
    Ok(outcome)
}

fn run_inner(
    config: &BenchConfig,
    params: &ResolvedParams,
    instances: &[BenchInstance],
    writer: Option<&OutputWriter>,
) -> Result<BenchOutcome> {
    let mut rows: Vec<ResultRow> = Vec::new();
    let mut archives: Vec<RawArchive> = Vec::new();

    for instance in instances {
        let mut instance_archives: Vec<RawArchive> = Vec::new();
        for &algorithm in &config.algorithms {
            let gamma = config.gamma_for(algorithm);
            let mut passes: Vec<(Option<u64>, bool)> = vec![(None, false)];
            while let Some((cap_override, escalated)) = passes.pop() {
                let outcomes: Vec<(RepeatOutcome, Option<Vec<TraceEvent>>)> = (0..gamma)
                    .into_par_iter()
                    .map(|repeat| {
                        run_repeat(
                            algorithm,
                            instance,
                            params,
                            config.seed,
                            repeat,
                            cap_override,
                            config.trace,
                        )
                    })
                    .collect();
                let archive = RawArchive {
                    instance: instance.name.clone(),
                    group: instance.group.clone(),
                    algorithm: algorithm.as_str().to_string(),
                    tau: outcomes[0].0.record.budget,
                    escalated,
                    repeats: outcomes.iter().map(|(o, _)| o.clone()).collect(),
                };
                if let Some(writer) = writer {
                    writer.write_archive(&archive)?;
                    for (repeat, (_, trace)) in outcomes.iter().enumerate() {
                        if let Some(events) = trace {
                            if !events.is_empty() {
                                writer.write_trace(&archive, repeat, events)?;
                            }
                        }
                    }
                }
                let none_solved = archive.repeats.iter().all(|r| !r.record.solved);
                instance_archives.push(archive);
                // one escalation pass for the plain walksat baseline
                if algorithm == AlgorithmId::Walksat && !escalated && none_solved {
                    if let Some(cap) = params.walksat_escalated_cap {
                        passes.push((Some(cap), true));
                    }
                }
            }
        }

        // rows for this instance, improvement on the subject row
        let final_its = |algorithm: AlgorithmId| {
            instance_archives
                .iter()
                .rfind(|a| a.algorithm == algorithm.as_str())
                .and_then(|a| its99(&a.repeat_set()).as_u64())
        };
        let subject_its = final_its(config.subject);
        let baseline_its = final_its(config.baseline);
        for archive in &instance_archives {
            let set = archive.repeat_set();
            let is_final_subject = archive.algorithm == config.subject.as_str()
                && instance_archives
                    .iter()
                    .rfind(|a| a.algorithm == archive.algorithm)
                    .map(|a| a.escalated)
                    == Some(archive.escalated);
            let (delta, bucket) = match (is_final_subject, subject_its, baseline_its) {
                (true, Some(subject), Some(baseline)) => {
                    let (delta, bucket) = improvement(subject, baseline);
                    (Some(delta), Some(bucket))
                }
                _ => (None, None),
            };
            rows.push(ResultRow {
                instance: archive.instance.clone(),
                group: archive.group.clone(),
                algorithm: archive.algorithm.clone(),
                gamma: set.gamma(),
                solved: set.solved_count(),
                tau: archive.tau,
                its: its99(&set).as_u64(),
                delta_vs_baseline: delta,
                bucket,
            });
        }
        archives.append(&mut instance_archives);
        if let Some(writer) = writer {
            writer.flush_rows(&rows)?;
        }
    }

    let summary = summarize(config, &archives)?;
    Ok(BenchOutcome {
        rows,
        archives,
        summary,
    })
}

/// Success rates per (group, algorithm) over each instance's final attempt.
fn summarize(config: &BenchConfig, archives: &[RawArchive]) -> Result<Summary> {
    let mut by_key: BTreeMap<(String, String), BTreeMap<String, &RawArchive>> = BTreeMap::new();
    for archive in archives {
        // later (escalated) attempts replace the base attempt
        by_key
            .entry((archive.group.clone(), archive.algorithm.clone()))
            .or_default()
            .insert(archive.instance.clone(), archive);
    }
    let mut groups = Vec::new();
    for ((group, algorithm), instances) in by_key {
        let sets: Vec<RepeatSet> = instances.values().map(|a| a.repeat_set()).collect();
        groups.push(GroupSummary {
            group,
            algorithm,
            instances: sets.len(),
            gamma: sets[0].gamma(),
            per_problem_success_rate: per_problem_success_rate(&sets)?,
            per_group_success_rate: per_group_success_rate(&sets)?,
        });
    }
    Ok(Summary {
        seed: config.seed,
        subject: config.subject.as_str().to_string(),
        baseline: config.baseline.as_str().to_string(),
        groups,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::{BenchConfig, Profile, ScheduleSpec};

    fn tiny_config() -> BenchConfig {
        let mut config = BenchConfig::for_profile(Profile::Desk);
        config.seed = 11;
        config.gamma = 4;
        config.walksat.max_iterations = 2_000;
        config.walksat.escalated_max_iterations = Some(4_000);
        config.pa_walksat.max_iterations = 2_000;
        config.pa_walksat.schedule = ScheduleSpec::Temps(vec![1.0, 0.5, 0.1]);
        config.ptic.schedule = ScheduleSpec::Temps(vec![1.0, 0.5, 0.1]);
        config.ptic.steps_per_episode = 200;
        config.ptic.max_episodes = 10;
        config.standard_pt.max_sweeps = 50;
        config.instances = vec![
            InstanceSpec::Generate {
                generate: GenerateSpec {
                    preset: None,
                    num_vars: Some(20),
                    num_clauses: Some(60),
                    clause_size: Some(3),
                    seed: 5,
                },
                group: Some("tiny".into()),
                name: Some("tiny-a".into()),
            },
            InstanceSpec::Generate {
                generate: GenerateSpec {
                    preset: None,
                    num_vars: Some(20),
                    num_clauses: Some(60),
                    clause_size: Some(3),
                    seed: 6,
                },
                group: Some("tiny".into()),
                name: Some("tiny-b".into()),
            },
        ];
        config
    }

    #[test]
    fn bench_rows_cover_every_pair_and_recompute() {
        let config = tiny_config();
        let outcome = run_bench(&config, None).unwrap();
        // 2 instances x 3 algorithms, no escalation expected on easy inputs
        assert_eq!(outcome.rows.len(), 6);
        for archive in &outcome.archives {
            let set = archive.repeat_set();
            let row = outcome
                .rows
                .iter()
                .find(|r| {
                    r.instance == archive.instance
                        && r.algorithm == archive.algorithm
                        && r.tau == archive.tau
                })
                .expect("row for archive");
            assert_eq!(row.gamma, set.gamma());
            assert_eq!(row.solved, set.solved_count());
            assert_eq!(row.its, its99(&set).as_u64());
        }
        // subject rows carry the improvement ratio when both sides solved
        let subject_rows: Vec<_> = outcome
            .rows
            .iter()
            .filter(|r| r.algorithm == "ptic-walksat")
            .collect();
        assert_eq!(subject_rows.len(), 2);
        for row in subject_rows {
            assert!(row.delta_vs_baseline.is_some());
            assert!(row.bucket.is_some());
        }
    }

    #[test]
    fn identical_config_identical_outcome_any_worker_count() {
        let mut config = tiny_config();
        config.workers = 1;
        let one = run_bench(&config, None).unwrap();
        config.workers = 4;
        let four = run_bench(&config, None).unwrap();
        assert_eq!(one.rows, four.rows);
        assert_eq!(one.archives, four.archives);
        assert_eq!(one.summary, four.summary);
    }

    #[test]
    fn escalation_produces_a_second_row() {
        let mut config = tiny_config();
        // unsatisfiable instance forces the walksat escalation pass
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("unsat.cnf");
        fs::write(&path, "p cnf 1 2\n1 0\n-1 0\n").unwrap();
        config.instances = vec![InstanceSpec::Path {
            path,
            group: Some("unsat".into()),
            name: None,
        }];
        config.walksat.max_iterations = 50;
        config.walksat.escalated_max_iterations = Some(100);
        config.algorithms = vec![AlgorithmId::Walksat];
        let outcome = run_bench(&config, None).unwrap();
        assert_eq!(outcome.rows.len(), 2);
        assert_eq!(outcome.rows[0].tau, 50);
        assert_eq!(outcome.rows[1].tau, 100);
        assert!(outcome.archives[1].escalated);
        assert!(outcome.rows.iter().all(|r| r.its.is_none()));
        // summary reflects the final (escalated) attempt
        assert_eq!(outcome.summary.groups.len(), 1);
        assert_eq!(outcome.summary.groups[0].per_group_success_rate, 0.0);
    }

    #[test]
    fn pa_walksat_uses_optimistic_halt_accounting() {
        let mut config = tiny_config();
        config.algorithms = vec![AlgorithmId::PaWalksat];
        let outcome = run_bench(&config, None).unwrap();
        for archive in &outcome.archives {
            for repeat in &archive.repeats {
                if repeat.record.solved {
                    let q = repeat.successful_q.unwrap();
                    assert_eq!(repeat.record.iterations_used, 3 * q);
                } else {
                    assert_eq!(repeat.record.iterations_used, archive.tau);
                }
            }
        }
    }

    #[test]
    fn files_are_written_and_recomputable() {
        let dir = tempfile::tempdir().unwrap();
        let config = tiny_config();
        let outcome = run_bench(&config, Some(dir.path())).unwrap();
        let csv = fs::read_to_string(dir.path().join("results.csv")).unwrap();
        assert_eq!(csv, report::csv_string(&outcome.rows));
        let rows =
            report::rows_from_json(&fs::read_to_string(dir.path().join("results.json")).unwrap())
                .unwrap();
        assert_eq!(rows, outcome.rows);
        let summary: Summary =
            serde_json::from_str(&fs::read_to_string(dir.path().join("summary.json")).unwrap())
                .unwrap();
        assert_eq!(summary, outcome.summary);
        for archive in &outcome.archives {
            let path = dir
                .path()
                .join("raw")
                .join(format!("{}.json", archive.file_stem()));
            let loaded: RawArchive =
                serde_json::from_str(&fs::read_to_string(path).unwrap()).unwrap();
            assert_eq!(&loaded, archive);
        }
    }
}
