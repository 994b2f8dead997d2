//! Benchmark configuration: profiles, the JSON config document, and the
//! precedence rules (CLI flags over environment over file over profile).

use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{anyhow, bail, Context, Result};
use serde::{Deserialize, Serialize};

use ptsat::schedule::{self, TemperatureSchedule};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum AlgorithmId {
    Walksat,
    PaWalksat,
    PticWalksat,
    StandardPt,
}

impl AlgorithmId {
    pub fn as_str(self) -> &'static str {
        match self {
            AlgorithmId::Walksat => "walksat",
            AlgorithmId::PaWalksat => "pa-walksat",
            AlgorithmId::PticWalksat => "ptic-walksat",
            AlgorithmId::StandardPt => "standard-pt",
        }
    }

    /// Stable key part for seed derivation; never reordered.
    pub fn seed_tag(self) -> u64 {
        match self {
            AlgorithmId::Walksat => 1,
            AlgorithmId::PaWalksat => 2,
            AlgorithmId::PticWalksat => 3,
            AlgorithmId::StandardPt => 4,
        }
    }

    pub fn parse(name: &str) -> Result<Self> {
        match name {
            "walksat" => Ok(AlgorithmId::Walksat),
            "pa-walksat" => Ok(AlgorithmId::PaWalksat),
            "ptic-walksat" => Ok(AlgorithmId::PticWalksat),
            "standard-pt" => Ok(AlgorithmId::StandardPt),
            other => bail!("unknown algorithm `{other}`"),
        }
    }
}

impl std::fmt::Display for AlgorithmId {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// How a config names a temperature ladder.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ScheduleSpec {
    /// A named preset, e.g. `paper-tuned-7`.
    Preset(String),
    /// Explicit temperatures.
    Temps(Vec<f64>),
    Uniform {
        kappa: usize,
        t_min: f64,
        t_max: f64,
    },
    InverseLinear {
        kappa: usize,
        t_min: f64,
        t_max: f64,
    },
}

impl ScheduleSpec {
    pub fn resolve(&self) -> Result<TemperatureSchedule> {
        match self {
            ScheduleSpec::Preset(name) => {
                schedule::preset(name).ok_or_else(|| anyhow!("unknown schedule preset `{name}`"))
            }
            ScheduleSpec::Temps(temps) => {
                TemperatureSchedule::new(temps.clone()).map_err(Into::into)
            }
            ScheduleSpec::Uniform {
                kappa,
                t_min,
                t_max,
            } => schedule::uniform_schedule(*kappa, *t_min, *t_max).map_err(Into::into),
            ScheduleSpec::InverseLinear {
                kappa,
                t_min,
                t_max,
            } => schedule::inverse_linear_schedule(*kappa, *t_min, *t_max).map_err(Into::into),
        }
    }

    /// Flag syntax: a preset name, an inline JSON array of temperatures, or
    /// `@path` to a JSON schedule file.
    pub fn parse_flag(text: &str) -> Result<Self> {
        if let Some(path) = text.strip_prefix('@') {
            let body = fs::read_to_string(path)
                .with_context(|| format!("reading schedule file {path}"))?;
            let temps: Vec<f64> = serde_json::from_str(&body).with_context(|| {
                format!("schedule file {path} is not a JSON array of temperatures")
            })?;
            Ok(ScheduleSpec::Temps(temps))
        } else if text.trim_start().starts_with('[') {
            let temps: Vec<f64> =
                serde_json::from_str(text).context("inline schedule is not a JSON array")?;
            Ok(ScheduleSpec::Temps(temps))
        } else {
            Ok(ScheduleSpec::Preset(text.to_string()))
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PticParams {
    pub schedule: ScheduleSpec,
    pub steps_per_episode: u64,
    pub max_episodes: u64,
    /// Overrides the global repeat count for this algorithm.
    pub gamma: Option<u64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WalksatParams {
    pub eta: f64,
    pub max_iterations: u64,
    /// Second-chance cap used when no repeat solves at `max_iterations`.
    pub escalated_max_iterations: Option<u64>,
    pub gamma: Option<u64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PaWalksatParams {
    pub schedule: ScheduleSpec,
    pub max_iterations: u64,
    pub gamma: Option<u64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StandardPtParams {
    pub schedule: ScheduleSpec,
    pub max_sweeps: u64,
    pub gamma: Option<u64>,
}

/// One benchmark input: an on-disk DIMACS file or a generator spec.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum InstanceSpec {
    Path {
        path: PathBuf,
        #[serde(default)]
        group: Option<String>,
        #[serde(default)]
        name: Option<String>,
    },
    Generate {
        generate: GenerateSpec,
        #[serde(default)]
        group: Option<String>,
        #[serde(default)]
        name: Option<String>,
    },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GenerateSpec {
    #[serde(default)]
    pub preset: Option<String>,
    #[serde(default)]
    pub num_vars: Option<usize>,
    #[serde(default)]
    pub num_clauses: Option<usize>,
    #[serde(default)]
    pub clause_size: Option<usize>,
    pub seed: u64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Profile {
    /// Reduced repeats and budgets for laptop-scale runs.
    Desk,
    /// The full published protocol budgets; not part of routine testing.
    Paper,
}

impl Profile {
    pub fn parse(name: &str) -> Result<Self> {
        match name {
            "desk" => Ok(Profile::Desk),
            "paper" => Ok(Profile::Paper),
            other => bail!("unknown profile `{other}` (expected desk or paper)"),
        }
    }
}

/// Fully resolved benchmark configuration.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BenchConfig {
    pub profile: Profile,
    pub seed: u64,
    /// Worker threads; 0 uses the rayon default. Never affects results.
    pub workers: usize,
    pub gamma: u64,
    pub algorithms: Vec<AlgorithmId>,
    /// The algorithm whose rows carry the improvement ratio.
    pub subject: AlgorithmId,
    /// The algorithm the subject is compared against.
    pub baseline: AlgorithmId,
    pub trace: bool,
    pub ptic: PticParams,
    pub walksat: WalksatParams,
    pub pa_walksat: PaWalksatParams,
    pub standard_pt: StandardPtParams,
    pub instances: Vec<InstanceSpec>,
}

impl BenchConfig {
    pub fn for_profile(profile: Profile) -> Self {
        let tuned = ScheduleSpec::Preset("paper-tuned-7".to_string());
        let mh_ladder = ScheduleSpec::Temps(vec![2.0, 0.5, 0.1]);
        match profile {
            Profile::Desk => BenchConfig {
                profile,
                seed: 0,
                workers: 0,
                gamma: 20,
                algorithms: vec![
                    AlgorithmId::Walksat,
                    AlgorithmId::PaWalksat,
                    AlgorithmId::PticWalksat,
                ],
                subject: AlgorithmId::PticWalksat,
                baseline: AlgorithmId::Walksat,
                trace: false,
                ptic: PticParams {
                    schedule: tuned.clone(),
                    steps_per_episode: 1_000,
                    max_episodes: 100,
                    gamma: None,
                },
                walksat: WalksatParams {
                    eta: 0.5,
                    max_iterations: 100_000,
                    escalated_max_iterations: Some(200_000),
                    gamma: None,
                },
                pa_walksat: PaWalksatParams {
                    schedule: tuned,
                    max_iterations: 100_000,
                    gamma: None,
                },
                standard_pt: StandardPtParams {
                    schedule: mh_ladder,
                    max_sweeps: 1_000,
                    gamma: None,
                },
                instances: Vec::new(),
            },
            Profile::Paper => BenchConfig {
                profile,
                seed: 0,
                workers: 0,
                gamma: 100,
                algorithms: vec![
                    AlgorithmId::Walksat,
                    AlgorithmId::PaWalksat,
                    AlgorithmId::PticWalksat,
                ],
                subject: AlgorithmId::PticWalksat,
                baseline: AlgorithmId::Walksat,
                trace: false,
                ptic: PticParams {
                    schedule: tuned.clone(),
                    steps_per_episode: 6_270,
                    max_episodes: 1_000,
                    gamma: None,
                },
                walksat: WalksatParams {
                    eta: 0.5,
                    max_iterations: 500_000,
                    escalated_max_iterations: Some(1_000_000),
                    gamma: Some(5_000),
                },
                pa_walksat: PaWalksatParams {
                    schedule: tuned,
                    max_iterations: 6_270_000,
                    gamma: None,
                },
                standard_pt: StandardPtParams {
                    schedule: mh_ladder,
                    max_sweeps: 1_000,
                    gamma: None,
                },
                instances: Vec::new(),
            },
        }
    }

    pub fn gamma_for(&self, algorithm: AlgorithmId) -> u64 {
        let per_algorithm = match algorithm {
            AlgorithmId::Walksat => self.walksat.gamma,
            AlgorithmId::PaWalksat => self.pa_walksat.gamma,
            AlgorithmId::PticWalksat => self.ptic.gamma,
            AlgorithmId::StandardPt => self.standard_pt.gamma,
        };
        per_algorithm.unwrap_or(self.gamma)
    }
}

/// Partial document accepted in `--config` files. Any present field
/// overrides the profile default; CLI flags override both.
#[derive(Clone, Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BenchConfigFile {
    pub profile: Option<Profile>,
    pub seed: Option<u64>,
    pub workers: Option<usize>,
    pub gamma: Option<u64>,
    pub algorithms: Option<Vec<AlgorithmId>>,
    pub subject: Option<AlgorithmId>,
    pub baseline: Option<AlgorithmId>,
    pub trace: Option<bool>,
    pub ptic: Option<PticParamsFile>,
    pub walksat: Option<WalksatParamsFile>,
    pub pa_walksat: Option<PaWalksatParamsFile>,
    pub standard_pt: Option<StandardPtParamsFile>,
    pub instances: Option<Vec<InstanceSpec>>,
}

#[derive(Clone, Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PticParamsFile {
    pub schedule: Option<ScheduleSpec>,
    pub steps_per_episode: Option<u64>,
    pub max_episodes: Option<u64>,
    pub gamma: Option<u64>,
}

#[derive(Clone, Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WalksatParamsFile {
    pub eta: Option<f64>,
    pub max_iterations: Option<u64>,
    pub escalated_max_iterations: Option<u64>,
    pub gamma: Option<u64>,
}

#[derive(Clone, Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PaWalksatParamsFile {
    pub schedule: Option<ScheduleSpec>,
    pub max_iterations: Option<u64>,
    pub gamma: Option<u64>,
}

#[derive(Clone, Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StandardPtParamsFile {
    pub schedule: Option<ScheduleSpec>,
    pub max_sweeps: Option<u64>,
    pub gamma: Option<u64>,
}

impl BenchConfigFile {
    pub fn load(path: &Path) -> Result<Self> {
        let body = fs::read_to_string(path)
            .with_context(|| format!("reading config {}", path.display()))?;
        serde_json::from_str(&body).with_context(|| format!("parsing config {}", path.display()))
    }

    /// Overlays this document onto its profile's defaults.
    pub fn resolve(self) -> BenchConfig {
        let mut config = BenchConfig::for_profile(self.profile.unwrap_or(Profile::Desk));
        if let Some(v) = self.seed {
            config.seed = v;
        }
        if let Some(v) = self.workers {
            config.workers = v;
        }
        if let Some(v) = self.gamma {
            config.gamma = v;
        }
        if let Some(v) = self.algorithms {
            config.algorithms = v;
        }
        if let Some(v) = self.subject {
            config.subject = v;
        }
        if let Some(v) = self.baseline {
            config.baseline = v;
        }
        if let Some(v) = self.trace {
            config.trace = v;
        }
        if let Some(p) = self.ptic {
            if let Some(v) = p.schedule {
                config.ptic.schedule = v;
            }
            if let Some(v) = p.steps_per_episode {
                config.ptic.steps_per_episode = v;
            }
            if let Some(v) = p.max_episodes {
                config.ptic.max_episodes = v;
            }
            if p.gamma.is_some() {
                config.ptic.gamma = p.gamma;
            }
        }
        if let Some(p) = self.walksat {
            if let Some(v) = p.eta {
                config.walksat.eta = v;
            }
            if let Some(v) = p.max_iterations {
                config.walksat.max_iterations = v;
            }
            if p.escalated_max_iterations.is_some() {
                config.walksat.escalated_max_iterations = p.escalated_max_iterations;
            }
            if p.gamma.is_some() {
                config.walksat.gamma = p.gamma;
            }
        }
        if let Some(p) = self.pa_walksat {
            if let Some(v) = p.schedule {
                config.pa_walksat.schedule = v;
            }
            if let Some(v) = p.max_iterations {
                config.pa_walksat.max_iterations = v;
            }
            if p.gamma.is_some() {
                config.pa_walksat.gamma = p.gamma;
            }
        }
        if let Some(p) = self.standard_pt {
            if let Some(v) = p.schedule {
                config.standard_pt.schedule = v;
            }
            if let Some(v) = p.max_sweeps {
                config.standard_pt.max_sweeps = v;
            }
            if p.gamma.is_some() {
                config.standard_pt.gamma = p.gamma;
            }
        }
        if let Some(v) = self.instances {
            config.instances = v;
        }
        config
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn file_overrides_profile_defaults() {
        let doc = r#"{
            "profile": "desk",
            "seed": 9,
            "gamma": 5,
            "walksat": {"max_iterations": 1234},
            "instances": [{"path": "a.cnf", "group": "g"}]
        }"#;
        let file: BenchConfigFile = serde_json::from_str(doc).unwrap();
        let config = file.resolve();
        assert_eq!(config.seed, 9);
        assert_eq!(config.gamma, 5);
        assert_eq!(config.walksat.max_iterations, 1234);
        assert_eq!(config.walksat.eta, 0.5); // profile default retained
        assert_eq!(config.instances.len(), 1);
    }

    #[test]
    fn unknown_fields_are_rejected() {
        assert!(serde_json::from_str::<BenchConfigFile>(r#"{"sedd": 1}"#).is_err());
    }

    #[test]
    fn schedule_spec_forms() {
        let spec: ScheduleSpec = serde_json::from_str(r#"{"preset": "paper-tuned-7"}"#).unwrap();
        assert_eq!(spec.resolve().unwrap().kappa(), 7);
        let spec: ScheduleSpec = serde_json::from_str(r#"{"temps": [1.0, 0.1]}"#).unwrap();
        assert_eq!(spec.resolve().unwrap().temps(), &[1.0, 0.1]);
        let spec: ScheduleSpec =
            serde_json::from_str(r#"{"inverse-linear": {"kappa": 3, "t_min": 0.1, "t_max": 1.0}}"#)
                .unwrap();
        assert_eq!(spec.resolve().unwrap().kappa(), 3);
        let spec = ScheduleSpec::parse_flag("[1.0, 0.5]").unwrap();
        assert_eq!(spec, ScheduleSpec::Temps(vec![1.0, 0.5]));
        let spec = ScheduleSpec::parse_flag("paper-tuned-7").unwrap();
        assert_eq!(spec, ScheduleSpec::Preset("paper-tuned-7".into()));
    }

    #[test]
    fn instance_spec_forms() {
        let spec: InstanceSpec = serde_json::from_str(r#"{"path": "x.cnf"}"#).unwrap();
        assert!(matches!(spec, InstanceSpec::Path { .. }));
        let spec: InstanceSpec = serde_json::from_str(
            r#"{"generate": {"preset": "group-3", "seed": 4}, "name": "g3-4"}"#,
        )
        .unwrap();
        assert!(matches!(spec, InstanceSpec::Generate { .. }));
    }

    #[test]
    fn per_algorithm_gamma_override() {
        let mut config = BenchConfig::for_profile(Profile::Paper);
        assert_eq!(config.gamma_for(AlgorithmId::Walksat), 5_000);
        assert_eq!(config.gamma_for(AlgorithmId::PticWalksat), 100);
        config.walksat.gamma = None;
        assert_eq!(config.gamma_for(AlgorithmId::Walksat), 100);
    }
}
