//! The plan-driven subcommands. Each writes its tables under the plan's
//! output directory and returns the paths it wrote, in order.

use std::fs;
use std::path::{Path, PathBuf};

use asd_screen_core::eval::{attribute_curve, cross_validate};
use asd_screen_core::featsel::{rank, top_k};
use asd_screen_core::learn::LearnerKind;
use asd_screen_core::screening::{demographic_summary, generate, response_summary, Demographic};
use asd_screen_core::stats::correlation_table;
use asd_screen_core::tabular::{parse_arff, parse_csv_inferred, preprocess_with_summary, serialize_csv};
use asd_screen_core::{AgeGroup, Dataset, EvalReport, GroupProfile, RankingMethod, TrainedModel};
use log::{info, warn};

use crate::error::{CliError, CliResult};
use crate::plan::{DatasetSource, DatasetSpec, ExperimentPlan};
use crate::report::{fixed, markdown, num, opt, opt_fixed, write_text, Table, NA};

/// A dataset ready for analysis, with what preprocessing removed.
#[derive(Clone, Debug)]
pub struct Loaded {
    pub name: String,
    pub group: AgeGroup,
    pub source: String,
    pub data: Dataset,
    pub dropped_attributes: Vec<String>,
    pub removed_records: usize,
}

/// Reads and preprocesses a file, or generates the synthetic set.
pub fn load_dataset(plan: &ExperimentPlan, spec: &DatasetSpec) -> CliResult<Loaded> {
    let (data, source, dropped_attributes, removed_records) = match &spec.source {
        DatasetSource::File { resolved, display } => {
            let (data, dropped, removed) = read_dataset(resolved)?;
            (data, display.clone(), dropped, removed)
        }
        DatasetSource::Synth(entry) => {
            let config = plan.synth_config(spec.group, entry);
            let data = generate(&config).map_err(|e| CliError::plan(format!("dataset `{}`: {e}", spec.name)))?;
            let source = format!(
                "synthetic n={} label_noise={} seed={}",
                config.n, config.label_noise, config.seed
            );
            (data, source, Vec::new(), 0)
        }
    };
    let data = data.with_group(spec.group);
    if let Err(e) = GroupProfile::for_group(spec.group).check(&data) {
        warn!("dataset `{}`: {e}", spec.name);
    }
    info!("loaded `{}`: {} records, {} attributes", spec.name, data.len(), data.schema().len());
    Ok(Loaded {
        name: spec.name.clone(),
        group: spec.group,
        source,
        data,
        dropped_attributes,
        removed_records,
    })
}

/// Parses `.arff` or `.csv` by extension and preprocesses the result,
/// returning the dropped attribute names and removed record count as well.
fn read_dataset(path: &Path) -> CliResult<(Dataset, Vec<String>, usize)> {
    let raw = parse_file(path)?;
    let (data, summary) = preprocess_with_summary(&raw).map_err(|e| CliError::Parse {
        path: path.display().to_string(),
        source: e,
    })?;
    Ok((data, summary.dropped_attributes, summary.removed_records))
}

/// Parses a data file without preprocessing.
pub fn parse_file(path: &Path) -> CliResult<Dataset> {
    let text = fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    let is_arff = path
        .extension()
        .is_some_and(|x| x.eq_ignore_ascii_case("arff"));
    let parsed = if is_arff {
        parse_arff(&text)
    } else {
        parse_csv_inferred(&text)
    };
    parsed.map_err(|e| CliError::Parse {
        path: path.display().to_string(),
        source: e,
    })
}

fn load_all(plan: &ExperimentPlan) -> CliResult<Vec<Loaded>> {
    plan.datasets.iter().map(|d| load_dataset(plan, d)).collect()
}

fn out_path(plan: &ExperimentPlan, file: &str) -> PathBuf {
    plan.out.join(file)
}

fn write(plan: &ExperimentPlan, file: &str, table: &Table) -> CliResult<PathBuf> {
    let path = out_path(plan, file);
    table.write(&path)?;
    Ok(path)
}

pub fn ingest(plan: &ExperimentPlan) -> CliResult<Vec<PathBuf>> {
    let mut table = Table::new([
        "dataset",
        "group",
        "source",
        "records",
        "attributes",
        "removed_records",
        "dropped_attributes",
        "no",
        "yes",
    ]);
    for d in load_all(plan)? {
        let (no, yes) = d
            .data
            .class_counts()
            .map_err(|e| CliError::eval(&d.name, e))?;
        table.push(vec![
            d.name.clone(),
            d.group.to_string(),
            d.source.clone(),
            d.data.len().to_string(),
            d.data.schema().len().to_string(),
            d.removed_records.to_string(),
            d.dropped_attributes.join(";"),
            no.to_string(),
            yes.to_string(),
        ]);
    }
    Ok(vec![write(plan, "ingest.csv", &table)?])
}

pub fn analyze(plan: &ExperimentPlan) -> CliResult<Vec<PathBuf>> {
    let mut correlation = Table::new(["dataset", "variable", "r", "p", "n", "strength"]);
    let mut demographics = Table::new(["dataset", "attribute", "category", "yes", "no"]);
    let mut responses = Table::new(["dataset", "item", "one_yes", "one_no", "zero_yes", "zero_no"]);
    for d in load_all(plan)? {
        let fail = |e| CliError::eval(&d.name, e);
        for row in correlation_table(&d.data).map_err(fail)? {
            correlation.push(vec![
                d.name.clone(),
                row.variable.to_string(),
                num(row.result.r),
                num(row.result.p),
                row.result.n.to_string(),
                row.strength.as_str().to_string(),
            ]);
        }
        for attr in Demographic::ALL {
            for cell in demographic_summary(&d.data, attr).map_err(fail)? {
                demographics.push(vec![
                    d.name.clone(),
                    attr.as_str().to_string(),
                    cell.category,
                    cell.yes.to_string(),
                    cell.no.to_string(),
                ]);
            }
        }
        for item in response_summary(&d.data).map_err(fail)? {
            responses.push(vec![
                d.name.clone(),
                item.item.clone(),
                item.one_yes.to_string(),
                item.one_no.to_string(),
                item.zero_yes.to_string(),
                item.zero_no.to_string(),
            ]);
        }
    }
    Ok(vec![
        write(plan, "correlation.csv", &correlation)?,
        write(plan, "demographics.csv", &demographics)?,
        write(plan, "responses.csv", &responses)?,
    ])
}

pub fn rank_features(plan: &ExperimentPlan) -> CliResult<Vec<PathBuf>> {
    let mut table = Table::new(["dataset", "method", "rank", "attribute", "score"]);
    for d in load_all(plan)? {
        for &method in &plan.rankers {
            let ranking = rank(&d.data, method, &plan.relief)
                .map_err(|e| CliError::eval(format!("{} {method}", d.name), e))?;
            for (i, entry) in ranking.entries.iter().enumerate() {
                table.push(vec![
                    d.name.clone(),
                    method.to_string(),
                    (i + 1).to_string(),
                    entry.attribute.clone(),
                    num(entry.score),
                ]);
            }
        }
    }
    Ok(vec![write(plan, "rankings.csv", &table)?])
}

/// Cross-validates `kind` on every feature of `d`.
pub fn evaluate_one(plan: &ExperimentPlan, d: &Loaded, kind: LearnerKind) -> CliResult<EvalReport> {
    let features = d.data.feature_names();
    let report = cross_validate(&d.data, &plan.learner(kind), &features, plan.k, plan.seed)
        .map_err(|e| CliError::eval(format!("{} {kind}", d.name), e))?;
    info!("{} {kind}: accuracy {:.4}", d.name, report.accuracy);
    Ok(report)
}

pub const EVALUATION_COLUMNS: [&str; 18] = [
    "dataset",
    "classifier",
    "features",
    "k",
    "accuracy",
    "precision",
    "recall",
    "f",
    "mae",
    "rmse",
    "rae",
    "rrse",
    "seconds",
    "rae_u1",
    "hard_mae",
    "hard_rmse",
    "hard_rae",
    "hard_rrse",
];

fn pct(v: f64) -> String {
    fixed(v * 100.0, 4)
}

fn pct_opt(v: Option<f64>) -> String {
    opt_fixed(v.map(|v| v * 100.0), 4)
}

/// `evaluation.csv` holds every metric and error on the percent scale;
/// `errors.md` repeats the error columns with two decimals.
pub fn evaluate(plan: &ExperimentPlan) -> CliResult<Vec<PathBuf>> {
    let mut table = Table::new(EVALUATION_COLUMNS);
    let mut errors = Table::new(["Dataset", "Classifier", "MAE", "RMSE", "RAE", "RRSE"]);
    let mut written = Vec::new();
    for d in load_all(plan)? {
        for &kind in &plan.classifiers {
            let r = evaluate_one(plan, &d, kind)?;
            let seconds = if plan.timing { num(r.seconds) } else { NA.to_string() };
            table.push(vec![
                d.name.clone(),
                kind.to_string(),
                r.features.len().to_string(),
                r.fold_count.to_string(),
                pct(r.accuracy),
                pct_opt(r.precision),
                pct_opt(r.recall),
                pct_opt(r.f_measure),
                pct(r.errors.mae),
                pct(r.errors.rmse),
                pct_opt(r.errors.rae),
                pct_opt(r.errors.rrse),
                seconds,
                pct_opt(r.paper_errors.rae),
                pct(r.hard_errors.mae),
                pct(r.hard_errors.rmse),
                pct_opt(r.hard_errors.rae),
                pct_opt(r.hard_errors.rrse),
            ]);
            let e = r.errors.percent();
            errors.push(vec![
                d.name.clone(),
                kind.title().to_string(),
                fixed(e.mae, 2),
                fixed(e.rmse, 2),
                opt_fixed(e.rae, 2),
                opt_fixed(e.rrse, 2),
            ]);
            if plan.save_models {
                written.push(save_model(plan, &d, kind)?);
            }
        }
    }
    written.insert(0, write(plan, "evaluation.csv", &table)?);
    let md_path = out_path(plan, "errors.md");
    write_text(&md_path, &markdown(&errors))?;
    written.insert(1, md_path);
    Ok(written)
}

fn save_model(plan: &ExperimentPlan, d: &Loaded, kind: LearnerKind) -> CliResult<PathBuf> {
    let model = TrainedModel::fit(&d.data, &d.data.feature_names(), &plan.learner(kind))
        .map_err(|e| CliError::eval(format!("{} {kind}", d.name), e))?;
    let path = out_path(plan, &format!("models/{}_{}.json", d.name, kind));
    let json = model.to_json().map_err(|e| CliError::eval(&d.name, e))?;
    write_text(&path, &json)?;
    Ok(path)
}

/// Incremental-attribute curve of the plan's SMO settings over `ranker`.
pub fn curve(plan: &ExperimentPlan, ranker: RankingMethod) -> CliResult<Vec<PathBuf>> {
    let mut table = Table::new(["dataset", "ranker", "m", "attribute", "accuracy", "f_measure"]);
    let config = plan.learner(LearnerKind::Smo);
    for d in load_all(plan)? {
        let fail = |e| CliError::eval(format!("{} {ranker}", d.name), e);
        let ranking = rank(&d.data, ranker, &plan.relief).map_err(fail)?;
        let order = top_k(&ranking, ranking.entries.len()).map_err(fail)?;
        for point in attribute_curve(&d.data, &ranking, &config, plan.k, plan.seed).map_err(fail)? {
            table.push(vec![
                d.name.clone(),
                ranker.to_string(),
                point.m.to_string(),
                order[point.m - 1].clone(),
                num(point.accuracy),
                opt(point.f_measure),
            ]);
        }
    }
    Ok(vec![write(plan, &format!("curve_{ranker}.csv"), &table)?])
}

/// Published results of earlier screening studies, copied verbatim:
/// (approach, group, recall, accuracy in percent).
pub const LITERATURE: [(&str, AgeGroup, &str, &str); 5] = [
    ("Thabtah et al. (logistic regression / rules-based ML)", AgeGroup::Child, "0.91", "91"),
    ("Thabtah et al. (logistic regression / rules-based ML)", AgeGroup::Adolescent, "0.99", "99.91"),
    ("Thabtah et al. (logistic regression / rules-based ML)", AgeGroup::Adult, "0.97", "97.58"),
    ("Basu et al. (SVM)", AgeGroup::Adult, "1", "100"),
    ("McNamara et al. (decision tree / random forest)", AgeGroup::Adult, "0.93", "91.74"),
];

pub fn compare(plan: &ExperimentPlan) -> CliResult<Vec<PathBuf>> {
    let mut table = Table::new(["approach", "kind", "dataset", "group", "recall", "accuracy"]);
    for (approach, group, recall, accuracy) in LITERATURE {
        table.push(vec![
            approach.to_string(),
            "literature".to_string(),
            NA.to_string(),
            group.to_string(),
            recall.to_string(),
            accuracy.to_string(),
        ]);
    }
    for d in load_all(plan)? {
        let r = evaluate_one(plan, &d, LearnerKind::Smo)?;
        table.push(vec![
            "This pipeline (SMO)".to_string(),
            "computed".to_string(),
            d.name.clone(),
            d.group.to_string(),
            opt_fixed(r.recall, 4),
            fixed(r.accuracy * 100.0, 2),
        ]);
    }
    Ok(vec![write(plan, "compare.csv", &table)?])
}

/// Writes each synthetic dataset of the plan as `<name>.csv`.
pub fn synth(plan: &ExperimentPlan) -> CliResult<Vec<PathBuf>> {
    let mut written = Vec::new();
    for spec in &plan.datasets {
        if let DatasetSource::Synth(entry) = &spec.source {
            let data = generate(&plan.synth_config(spec.group, entry))
                .map_err(|e| CliError::plan(format!("dataset `{}`: {e}", spec.name)))?;
            let path = out_path(plan, &format!("{}.csv", spec.name));
            write_text(&path, &serialize_csv(&data))?;
            written.push(path);
        }
    }
    if written.is_empty() {
        return Err(CliError::plan("no synthetic datasets in plan"));
    }
    Ok(written)
}

/// Applies a saved model to every record of a data file.
pub fn predict(model_path: &Path, data_path: &Path, out: &Path) -> CliResult<PathBuf> {
    let model = TrainedModel::load(model_path).map_err(|e| CliError::Parse {
        path: model_path.display().to_string(),
        source: e,
    })?;
    let data = parse_file(data_path)?;
    let mut table = Table::new(["record", "prediction", "probability"]);
    for (i, record) in data.records().iter().enumerate() {
        let fail = |e| CliError::eval(format!("record {}", i + 1), e);
        let label = model.predict(record).map_err(fail)?;
        let p = model.predict_proba(record).map_err(fail)?;
        table.push(vec![(i + 1).to_string(), label.to_string(), num(p)]);
    }
    let path = out.join("predictions.csv");
    table.write(&path)?;
    Ok(path)
}
