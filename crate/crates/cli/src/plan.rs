//! Experiment plans: a TOML file naming the datasets, learners, rankers and
//! cross-validation settings of a run.
//!
//! ```toml
//! seed = 1
//! k = 10
//! out = "results"
//! classifiers = ["smo", "logistic", "multiclass", "mlp"]
//! rankers = ["info_gain", "chi_squared", "correlation", "one_r", "relief_f"]
//!
//! [[datasets]]
//! name = "adult"
//! group = "adult"
//! path = "data/Autism-Adult-Data.arff"
//!
//! [[datasets]]
//! name = "child-synth"
//! group = "child"
//! synth = { n = 500, label_noise = 0.0 }
//!
//! [smo]
//! c = 1.0
//! ```
//!
//! Relative paths (dataset files and `out`) are resolved against the
//! directory holding the plan file.

use std::collections::HashSet;
use std::fs;
use std::path::{Path, PathBuf};

use asd_screen_core::featsel::ReliefOptions;
use asd_screen_core::learn::{LearnerKind, LogisticConfig, MlpConfig, SmoConfig};
use asd_screen_core::{AgeGroup, LearnerConfig, RankingMethod, SynthConfig};
use serde::Deserialize;

use crate::error::{CliError, CliResult};

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct PlanFile {
    seed: Option<u64>,
    k: Option<usize>,
    out: Option<PathBuf>,
    #[serde(default)]
    classifiers: Vec<String>,
    rankers: Option<Vec<String>>,
    #[serde(default)]
    datasets: Vec<DatasetEntry>,
    #[serde(default)]
    smo: SmoConfig,
    #[serde(default)]
    logistic: LogisticConfig,
    #[serde(default)]
    mlp: MlpConfig,
    #[serde(default)]
    relief: ReliefOptions,
    #[serde(default)]
    timing: bool,
    #[serde(default)]
    save_models: bool,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct DatasetEntry {
    name: String,
    group: String,
    path: Option<PathBuf>,
    synth: Option<SynthEntry>,
}

#[derive(Clone, Debug, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SynthEntry {
    #[serde(default = "default_synth_n")]
    pub n: usize,
    #[serde(default)]
    pub label_noise: f64,
    pub item_rates: Option<[f64; 10]>,
    /// Defaults to the plan seed plus the dataset's position in the plan.
    pub seed: Option<u64>,
}

fn default_synth_n() -> usize {
    500
}

#[derive(Clone, Debug, PartialEq)]
pub enum DatasetSource {
    /// `resolved` is used for reading, `display` (as written in the plan)
    /// for reports.
    File { resolved: PathBuf, display: String },
    Synth(SynthEntry),
}

#[derive(Clone, Debug, PartialEq)]
pub struct DatasetSpec {
    pub name: String,
    pub group: AgeGroup,
    pub source: DatasetSource,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ExperimentPlan {
    pub seed: u64,
    pub k: usize,
    pub out: PathBuf,
    pub classifiers: Vec<LearnerKind>,
    pub rankers: Vec<RankingMethod>,
    pub datasets: Vec<DatasetSpec>,
    pub smo: SmoConfig,
    pub logistic: LogisticConfig,
    pub mlp: MlpConfig,
    pub relief: ReliefOptions,
    /// Report wall-clock seconds; off by default so outputs are reproducible.
    pub timing: bool,
    pub save_models: bool,
}

/// Command-line values that take precedence over the file.
#[derive(Clone, Debug, Default)]
pub struct Overrides {
    pub seed: Option<u64>,
    pub out: Option<PathBuf>,
    pub k: Option<usize>,
}

impl ExperimentPlan {
    pub fn load(path: &Path, overrides: &Overrides) -> CliResult<Self> {
        let text = fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        let base = path.parent().unwrap_or(Path::new("."));
        Self::parse(&text, base, overrides)
    }

    /// Parses plan text; relative paths are joined onto `base`.
    pub fn parse(text: &str, base: &Path, overrides: &Overrides) -> CliResult<Self> {
        let file: PlanFile = toml::from_str(text).map_err(|e| CliError::plan(e.to_string()))?;

        let classifiers = file
            .classifiers
            .iter()
            .map(|s| s.parse::<LearnerKind>())
            .collect::<Result<Vec<_>, _>>()
            .map_err(|e| CliError::plan(e.to_string()))?;
        let rankers = match &file.rankers {
            Some(list) => list
                .iter()
                .map(|s| s.parse::<RankingMethod>())
                .collect::<Result<Vec<_>, _>>()
                .map_err(|e| CliError::plan(e.to_string()))?,
            None => RankingMethod::ALL.to_vec(),
        };

        let mut datasets = Vec::with_capacity(file.datasets.len());
        for entry in file.datasets {
            let group = entry
                .group
                .parse::<AgeGroup>()
                .map_err(|e| CliError::plan(format!("dataset `{}`: {e}", entry.name)))?;
            let source = match (entry.path, entry.synth) {
                (Some(p), None) => DatasetSource::File {
                    display: p.display().to_string(),
                    resolved: base.join(p),
                },
                (None, Some(s)) => DatasetSource::Synth(s),
                _ => {
                    return Err(CliError::plan(format!(
                        "dataset `{}` needs exactly one of `path` or `synth`",
                        entry.name
                    )))
                }
            };
            datasets.push(DatasetSpec {
                name: entry.name,
                group,
                source,
            });
        }

        let seed = overrides.seed.or(file.seed).unwrap_or(1);
        for (i, d) in datasets.iter_mut().enumerate() {
            if let DatasetSource::Synth(s) = &mut d.source {
                s.seed.get_or_insert(seed.wrapping_add(i as u64));
            }
        }
        let out = match &overrides.out {
            Some(dir) => dir.clone(),
            None => base.join(file.out.unwrap_or_else(|| PathBuf::from("out"))),
        };
        let plan = ExperimentPlan {
            seed,
            k: overrides.k.or(file.k).unwrap_or(10),
            out,
            classifiers,
            rankers,
            datasets,
            smo: file.smo,
            logistic: file.logistic,
            mlp: file.mlp,
            relief: file.relief,
            timing: file.timing,
            save_models: file.save_models,
        };
        plan.validate()?;
        Ok(plan)
    }

    pub fn validate(&self) -> CliResult<()> {
        if self.datasets.is_empty() {
            return Err(CliError::plan("no datasets"));
        }
        if self.classifiers.is_empty() {
            return Err(CliError::plan("no classifiers"));
        }
        if self.rankers.is_empty() {
            return Err(CliError::plan("no rankers"));
        }
        if self.k < 2 {
            return Err(CliError::plan(format!("k must be at least 2, got {}", self.k)));
        }
        let mut names = HashSet::new();
        for d in &self.datasets {
            if d.name.is_empty() || d.name.contains(['/', '\\']) {
                return Err(CliError::plan(format!("bad dataset name `{}`", d.name)));
            }
            if !names.insert(d.name.as_str()) {
                return Err(CliError::plan(format!("duplicate dataset name `{}`", d.name)));
            }
            if let DatasetSource::Synth(s) = &d.source {
                let config = self.synth_config(d.group, s);
                if config.n == 0 {
                    return Err(CliError::plan(format!("dataset `{}`: n must be positive", d.name)));
                }
                if config.item_rates.iter().any(|p| !(0.0..=1.0).contains(p)) {
                    return Err(CliError::plan(format!("dataset `{}`: item rates must lie in [0, 1]", d.name)));
                }
                if !(0.0..1.0).contains(&config.label_noise) {
                    return Err(CliError::plan(format!("dataset `{}`: label_noise must lie in [0, 1)", d.name)));
                }
            }
        }
        let mut seen = HashSet::new();
        if let Some(dup) = self.classifiers.iter().find(|c| !seen.insert(**c)) {
            return Err(CliError::plan(format!("classifier `{dup}` listed twice")));
        }
        let mut seen = HashSet::new();
        if let Some(dup) = self.rankers.iter().find(|r| !seen.insert(**r)) {
            return Err(CliError::plan(format!("ranker `{dup}` listed twice")));
        }
        Ok(())
    }

    pub fn synth_config(&self, group: AgeGroup, entry: &SynthEntry) -> SynthConfig {
        let mut config = SynthConfig::new(group, entry.n, entry.seed.unwrap_or(self.seed)).with_noise(entry.label_noise);
        if let Some(rates) = entry.item_rates {
            config = config.with_rates(rates);
        }
        config
    }

    /// Hyper-parameters for `kind` as configured in the plan.
    pub fn learner(&self, kind: LearnerKind) -> LearnerConfig {
        match kind {
            LearnerKind::Smo => LearnerConfig::Smo(self.smo),
            LearnerKind::Logistic => LearnerConfig::Logistic(self.logistic),
            LearnerKind::Multiclass => LearnerConfig::Multiclass(self.logistic),
            LearnerKind::Mlp => LearnerConfig::Mlp(self.mlp),
        }
    }
}
