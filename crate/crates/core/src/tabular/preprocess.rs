use super::{canonical_name, Dataset};
use crate::error::Result;

/// Canonical names (see [`canonical_name`]) of attributes removed before
/// analysis: case id, prior app use, who completed the test, language, reason
/// for screening, age description, screening type and the summed score. The
/// public files spell several of these differently, so aliases are included.
const DROPPED: &[&str] = &[
    "case",
    "caseno",
    "usedappbefore",
    "user",
    "relation",
    "whocompletedthetest",
    "whoiscompletingthetest",
    "language",
    "languagespoken",
    "whytaken",
    "whytakenthescreening",
    "agedesc",
    "screeningtype",
    "screeningmethodtype",
    "score",
    "result",
    "screeningscore",
    "qchat10score",
];

pub fn is_dropped_attribute(name: &str) -> bool {
    DROPPED.contains(&canonical_name(name).as_str())
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct PreprocessSummary {
    pub dropped_attributes: Vec<String>,
    pub removed_records: usize,
}

/// Drops the non-informative and leaking attributes, then removes every record
/// with a missing cell. Idempotent.
pub fn preprocess(raw: &Dataset) -> Result<Dataset> {
    preprocess_with_summary(raw).map(|(data, _)| data)
}

pub fn preprocess_with_summary(raw: &Dataset) -> Result<(Dataset, PreprocessSummary)> {
    raw.class_index()?;
    let (keep, dropped): (Vec<usize>, Vec<usize>) =
        (0..raw.schema().len()).partition(|&i| !is_dropped_attribute(&raw.schema()[i].name));
    let projected = raw.project(&keep);
    let complete: Vec<_> = projected
        .records()
        .iter()
        .filter(|r| !r.has_missing())
        .cloned()
        .collect();
    let summary = PreprocessSummary {
        dropped_attributes: dropped
            .iter()
            .map(|&i| raw.schema()[i].name.clone())
            .collect(),
        removed_records: projected.len() - complete.len(),
    };
    Ok((projected.with_records(complete), summary))
}
