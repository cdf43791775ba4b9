use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;

use super::folds::stratified_folds;
use super::metrics::{error_metrics, ConfusionMatrix, ErrorMetrics, ErrorVariant};
use crate::error::{Error, Result};
use crate::featsel::{top_k, FeatureRanking};
use crate::learn::{LearnerConfig, LearnerKind};
use crate::tabular::{ClassLabel, Dataset, Encoder};

/// Pooled held-out results of one cross-validation run.
///
/// `errors` are the primary error measures (toolkit normalization): computed
/// from hard 0/1 predictions for SMO and from `P(yes)` for the probabilistic
/// learners. `paper_errors` uses the alternative RAE normalization on the same
/// predictions, and `hard_errors` always uses hard predictions.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EvalReport {
    pub classifier: LearnerKind,
    pub features: Vec<String>,
    pub fold_count: usize,
    pub seed: u64,
    pub confusion: ConfusionMatrix,
    pub accuracy: f64,
    pub precision: Option<f64>,
    pub recall: Option<f64>,
    pub f_measure: Option<f64>,
    pub errors: ErrorMetrics,
    pub paper_errors: ErrorMetrics,
    pub hard_errors: ErrorMetrics,
    /// Held-out `P(yes)` per record, in dataset order.
    pub probabilities: Vec<f64>,
    /// Wall-clock seconds; excluded from [`EvalReport::without_timing`].
    pub seconds: f64,
}

impl EvalReport {
    /// A copy with the timing zeroed, for comparing results across runs.
    pub fn without_timing(&self) -> EvalReport {
        EvalReport {
            seconds: 0.0,
            ..self.clone()
        }
    }

    /// The same report attributed to a different learner name; used when two
    /// learners are compared result for result.
    pub fn relabeled(&self, classifier: LearnerKind) -> EvalReport {
        EvalReport {
            classifier,
            ..self.clone()
        }
    }
}

/// Seed of the learner trained on fold `fold`.
pub fn fold_seed(seed: u64, fold: usize) -> u64 {
    // splitmix64 finalizer
    let mut z = seed ^ (fold as u64 + 1).wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

struct FoldOutput {
    rows: Vec<usize>,
    hard: Vec<ClassLabel>,
    proba: Vec<f64>,
}

fn run_fold<S: AsRef<str> + Sync>(
    data: &Dataset,
    config: &LearnerConfig,
    features: &[S],
    train: &[usize],
    test: &[usize],
    seed: u64,
) -> Result<FoldOutput> {
    let train_data = data.subset(train);
    let encoder = Encoder::fit(&train_data, features)?;
    let scheme = config.label_scheme();
    let matrix = encoder.transform(&train_data, scheme)?;
    let model = config.with_seed(seed).fit_matrix(&matrix)?;
    let held_out = encoder.transform(&data.subset(test), scheme)?;
    let mut out = FoldOutput {
        rows: test.to_vec(),
        hard: Vec::with_capacity(test.len()),
        proba: Vec::with_capacity(test.len()),
    };
    for i in 0..held_out.nrows() {
        let x = held_out.row(i);
        out.hard.push(model.predict_row(&x));
        out.proba.push(model.proba_row(&x));
    }
    Ok(out)
}

/// Stratified `k`-fold cross-validation of `config` restricted to
/// `features`. The encoder is fitted on each training fold only; folds run
/// concurrently and are pooled by record index.
pub fn cross_validate<S: AsRef<str> + Sync>(
    data: &Dataset,
    config: &LearnerConfig,
    features: &[S],
    k: usize,
    seed: u64,
) -> Result<EvalReport> {
    if features.is_empty() {
        return Err(Error::EmptySelection);
    }
    let (no, yes) = data.class_counts()?;
    if no == 0 || yes == 0 {
        return Err(Error::SingleClass);
    }
    let start = Instant::now();
    let folds = stratified_folds(data, k, seed)?;
    let outputs = (0..k)
        .into_par_iter()
        .map(|f| {
            run_fold(
                data,
                config,
                features,
                &folds.train_indices(f),
                &folds.test_indices(f),
                fold_seed(seed, f),
            )
        })
        .collect::<Result<Vec<_>>>()?;

    let n = data.len();
    let mut hard = vec![ClassLabel::No; n];
    let mut proba = vec![0.0; n];
    for out in &outputs {
        for (j, &row) in out.rows.iter().enumerate() {
            hard[row] = out.hard[j];
            proba[row] = out.proba[j];
        }
    }
    let actual = data.labels()?;
    let confusion = ConfusionMatrix::from_labels(&hard, &actual)?;
    let actual01: Vec<f64> = actual.iter().map(|l| l.index() as f64).collect();
    let hard01: Vec<f64> = hard.iter().map(|l| l.index() as f64).collect();
    let primary = if config.kind() == LearnerKind::Smo {
        &hard01
    } else {
        &proba
    };
    let metrics = confusion.metrics();
    Ok(EvalReport {
        classifier: config.kind(),
        features: features.iter().map(|s| s.as_ref().to_string()).collect(),
        fold_count: k,
        seed,
        confusion,
        accuracy: metrics.accuracy.unwrap_or_default(),
        precision: metrics.precision,
        recall: metrics.recall,
        f_measure: metrics.f_measure,
        errors: error_metrics(primary, &actual01, ErrorVariant::Toolkit)?,
        paper_errors: error_metrics(primary, &actual01, ErrorVariant::Paper)?,
        hard_errors: error_metrics(&hard01, &actual01, ErrorVariant::Toolkit)?,
        probabilities: proba,
        seconds: start.elapsed().as_secs_f64(),
    })
}

/// One point of an incremental-attribute curve.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CurvePoint {
    pub m: usize,
    pub accuracy: f64,
    pub f_measure: Option<f64>,
}

/// Cross-validates on the top `m` ranked attributes for `m = 1..=len`.
pub fn attribute_curve(
    data: &Dataset,
    ranking: &FeatureRanking,
    config: &LearnerConfig,
    k: usize,
    seed: u64,
) -> Result<Vec<CurvePoint>> {
    (1..=ranking.entries.len())
        .map(|m| {
            let report = cross_validate(data, config, &top_k(ranking, m)?, k, seed)?;
            Ok(CurvePoint {
                m,
                accuracy: report.accuracy,
                f_measure: report.f_measure,
            })
        })
        .collect()
}
