//! Attribute rankers: information gain, chi-squared, correlation, OneR and
//! ReliefF. Every ranker scores each non-class attribute and sorts by score
//! descending with ties broken by schema order.

use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::stats::{chi_squared, entropy, pearson_r};
use crate::tabular::{AttributeKind, Dataset};

/// Equal-width bins used when a nominal view of a numeric attribute is needed.
pub const NUMERIC_BINS: usize = 10;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RankingMethod {
    InfoGain,
    ChiSquared,
    Correlation,
    OneR,
    ReliefF,
}

impl RankingMethod {
    pub const ALL: [RankingMethod; 5] = [
        RankingMethod::InfoGain,
        RankingMethod::ChiSquared,
        RankingMethod::Correlation,
        RankingMethod::OneR,
        RankingMethod::ReliefF,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            RankingMethod::InfoGain => "info_gain",
            RankingMethod::ChiSquared => "chi_squared",
            RankingMethod::Correlation => "correlation",
            RankingMethod::OneR => "one_r",
            RankingMethod::ReliefF => "relief_f",
        }
    }

    pub fn title(self) -> &'static str {
        match self {
            RankingMethod::InfoGain => "Information Gain",
            RankingMethod::ChiSquared => "Chi Squared",
            RankingMethod::Correlation => "Correlation",
            RankingMethod::OneR => "One R",
            RankingMethod::ReliefF => "Relief F",
        }
    }
}

impl fmt::Display for RankingMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for RankingMethod {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let canon: String = s
            .chars()
            .filter(char::is_ascii_alphanumeric)
            .map(|c| c.to_ascii_lowercase())
            .collect();
        match canon.as_str() {
            "infogain" | "informationgain" | "ig" => Ok(RankingMethod::InfoGain),
            "chisquared" | "chi2" | "chi" => Ok(RankingMethod::ChiSquared),
            "correlation" | "corr" => Ok(RankingMethod::Correlation),
            "oner" => Ok(RankingMethod::OneR),
            "relieff" | "relief" => Ok(RankingMethod::ReliefF),
            _ => Err(Error::InvalidParameter(format!("unknown ranking method `{s}`"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RankEntry {
    pub attribute: String,
    pub score: f64,
}

/// One ranker's ordering of the non-class attributes.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FeatureRanking {
    pub method: RankingMethod,
    pub entries: Vec<RankEntry>,
}

impl FeatureRanking {
    /// Sorts `(name, score)` pairs, given in schema order, by score descending.
    ///
    /// Scores are rounded to 12 decimals first so that summation-order noise
    /// cannot reorder attributes whose exact scores tie.
    pub fn from_scores(method: RankingMethod, scored: Vec<(String, f64)>) -> Self {
        let mut entries: Vec<RankEntry> = scored
            .into_iter()
            .map(|(attribute, score)| RankEntry {
                attribute,
                score: canonical_score(score),
            })
            .collect();
        // stable: equal scores keep schema order
        entries.sort_by(|a, b| b.score.total_cmp(&a.score));
        FeatureRanking { method, entries }
    }

    pub fn attributes(&self) -> Vec<String> {
        self.entries.iter().map(|e| e.attribute.clone()).collect()
    }

    pub fn score_of(&self, attribute: &str) -> Option<f64> {
        self.entries
            .iter()
            .find(|e| e.attribute == attribute)
            .map(|e| e.score)
    }

    /// Rows of `(method, rank, attribute, score)` with a header, ranks from 1.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("method,rank,attribute,score\n");
        for (i, e) in self.entries.iter().enumerate() {
            out.push_str(&format!(
                "{},{},{},{:.6}\n",
                self.method,
                i + 1,
                csv_field(&e.attribute),
                e.score
            ));
        }
        out
    }
}

fn canonical_score(score: f64) -> f64 {
    let rounded = (score * 1e12).round() / 1e12;
    // no negative zero
    rounded + 0.0
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

/// The first `k` attributes of a ranking, in rank order.
pub fn top_k(ranking: &FeatureRanking, k: usize) -> Result<Vec<String>> {
    if k == 0 || k > ranking.entries.len() {
        return Err(Error::InvalidParameter(format!(
            "k = {k} outside 1..={}",
            ranking.entries.len()
        )));
    }
    Ok(ranking.entries[..k].iter().map(|e| e.attribute.clone()).collect())
}

/// ReliefF settings: neighbours per class, optional sample size, and the seed
/// used only when sampling.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default)]
pub struct ReliefOptions {
    pub neighbors: usize,
    /// `None` uses every instance.
    pub sample: Option<usize>,
    pub seed: u64,
}

impl Default for ReliefOptions {
    fn default() -> Self {
        ReliefOptions {
            neighbors: 10,
            sample: None,
            seed: 1,
        }
    }
}

/// Runs the ranker named by `method`.
pub fn rank(data: &Dataset, method: RankingMethod, relief: &ReliefOptions) -> Result<FeatureRanking> {
    match method {
        RankingMethod::InfoGain => rank_info_gain(data),
        RankingMethod::ChiSquared => rank_chi_squared(data),
        RankingMethod::Correlation => rank_correlation(data),
        RankingMethod::OneR => rank_one_r(data),
        RankingMethod::ReliefF => rank_relief_f(data, relief),
    }
}

struct Prepared {
    features: Vec<usize>,
    /// 0 = no, 1 = yes
    classes: Vec<usize>,
}

fn prepare(data: &Dataset) -> Result<Prepared> {
    if data.is_empty() {
        return Err(Error::EmptyDataset);
    }
    let class = data.class_index()?;
    let classes = data.labels()?.into_iter().map(|l| l.index()).collect();
    let features: Vec<usize> = (0..data.schema().len()).filter(|&i| i != class).collect();
    for &f in &features {
        if let Some(row) = data.records().iter().position(|r| r.values[f].is_missing()) {
            return Err(Error::MissingValue {
                attribute: data.schema()[f].name.clone(),
                record: row,
            });
        }
    }
    Ok(Prepared { features, classes })
}

fn raw_column(data: &Dataset, col: usize) -> Vec<f64> {
    data.records()
        .iter()
        .map(|r| r.values[col].as_f64().unwrap_or_default())
        .collect()
}

/// Nominal codes of a column; numeric columns are cut into equal-width bins
/// over the observed range.
fn discretize(data: &Dataset, col: usize) -> (Vec<usize>, usize) {
    let attr = &data.schema()[col];
    if attr.is_nominal() {
        let codes = data
            .records()
            .iter()
            .map(|r| r.values[col].as_level().unwrap_or_default())
            .collect();
        return (codes, attr.level_count());
    }
    let values = raw_column(data, col);
    let min = values.iter().copied().fold(f64::INFINITY, f64::min);
    let max = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let width = (max - min) / NUMERIC_BINS as f64;
    let codes = values
        .iter()
        .map(|&v| {
            if width > 0.0 {
                (((v - min) / width) as usize).min(NUMERIC_BINS - 1)
            } else {
                0
            }
        })
        .collect();
    (codes, NUMERIC_BINS)
}

/// Contingency counts `[level][class]`, keeping only observed levels.
fn contingency(codes: &[usize], levels: usize, classes: &[usize]) -> Vec<Vec<usize>> {
    let mut table = vec![vec![0usize; 2]; levels];
    for (&c, &y) in codes.iter().zip(classes) {
        table[c][y] += 1;
    }
    table.retain(|row| row.iter().any(|&v| v > 0));
    table
}

fn score_with<F>(data: &Dataset, method: RankingMethod, score: F) -> Result<FeatureRanking>
where
    F: Fn(&Dataset, usize, &[usize]) -> Result<f64>,
{
    let prepared = prepare(data)?;
    let scored = prepared
        .features
        .iter()
        .map(|&f| Ok((data.schema()[f].name.clone(), score(data, f, &prepared.classes)?)))
        .collect::<Result<Vec<_>>>()?;
    Ok(FeatureRanking::from_scores(method, scored))
}

/// Information gain `H(class) - sum_v P(a = v) H(class | a = v)`.
pub fn rank_info_gain(data: &Dataset) -> Result<FeatureRanking> {
    score_with(data, RankingMethod::InfoGain, |data, col, classes| {
        let (codes, levels) = discretize(data, col);
        let table = contingency(&codes, levels, classes);
        let class_counts = [
            table.iter().map(|r| r[0]).sum::<usize>(),
            table.iter().map(|r| r[1]).sum::<usize>(),
        ];
        let n = classes.len() as f64;
        let mut conditional = 0.0;
        for row in &table {
            let weight = row.iter().sum::<usize>() as f64 / n;
            conditional += weight * entropy(row)?;
        }
        Ok((entropy(&class_counts)? - conditional).max(0.0))
    })
}

/// Chi-squared statistic of the attribute-by-class table; 0 when either
/// margin has a single observed value.
pub fn rank_chi_squared(data: &Dataset) -> Result<FeatureRanking> {
    score_with(data, RankingMethod::ChiSquared, |data, col, classes| {
        let (codes, levels) = discretize(data, col);
        let table = contingency(&codes, levels, classes);
        let both_classes = (0..2).all(|c| table.iter().any(|r| r[c] > 0));
        if table.len() < 2 || !both_classes {
            return Ok(0.0);
        }
        chi_squared(&table)
    })
}

/// Absolute Pearson correlation with the 0/1 class. Multi-valued nominal
/// attributes average the |r| of their level indicators weighted by level
/// frequency. Constant columns score 0.
pub fn rank_correlation(data: &Dataset) -> Result<FeatureRanking> {
    score_with(data, RankingMethod::Correlation, |data, col, classes| {
        let y: Vec<f64> = classes.iter().map(|&c| c as f64).collect();
        let abs_r = |x: &[f64]| match pearson_r(x, &y) {
            Ok(r) => Ok(r.abs()),
            Err(Error::ConstantInput(_)) | Err(Error::TooFewSamples { .. }) => Ok(0.0),
            Err(e) => Err(e),
        };
        let attr = &data.schema()[col];
        if attr.kind != AttributeKind::Categorical {
            return abs_r(&raw_column(data, col));
        }
        let (codes, levels) = discretize(data, col);
        let n = codes.len() as f64;
        let mut total = 0.0;
        for level in 0..levels {
            let indicator: Vec<f64> = codes.iter().map(|&c| f64::from(c == level)).collect();
            let count = indicator.iter().sum::<f64>();
            if count > 0.0 {
                total += count / n * abs_r(&indicator)?;
            }
        }
        Ok(total)
    })
}

/// Training accuracy of the one-attribute rule mapping each value to its
/// majority class (ties go to `no`).
pub fn rank_one_r(data: &Dataset) -> Result<FeatureRanking> {
    score_with(data, RankingMethod::OneR, |data, col, classes| {
        let (codes, levels) = discretize(data, col);
        let table = contingency(&codes, levels, classes);
        let correct: usize = table
            .iter()
            .map(|row| if row[1] > row[0] { row[1] } else { row[0] })
            .sum();
        Ok(correct as f64 / classes.len() as f64)
    })
}

/// Per-attribute difference function of ReliefF.
struct DiffTable {
    /// column-major: values[a][i]
    values: Vec<Vec<f64>>,
    nominal: Vec<bool>,
    range: Vec<f64>,
}

impl DiffTable {
    fn new(data: &Dataset, features: &[usize]) -> Self {
        let values: Vec<Vec<f64>> = features.iter().map(|&f| raw_column(data, f)).collect();
        let nominal = features.iter().map(|&f| data.schema()[f].is_nominal()).collect();
        let range = values
            .iter()
            .map(|col| {
                let min = col.iter().copied().fold(f64::INFINITY, f64::min);
                let max = col.iter().copied().fold(f64::NEG_INFINITY, f64::max);
                max - min
            })
            .collect();
        DiffTable {
            values,
            nominal,
            range,
        }
    }

    fn diff(&self, a: usize, i: usize, j: usize) -> f64 {
        let (x, y) = (self.values[a][i], self.values[a][j]);
        if self.nominal[a] {
            f64::from(x != y)
        } else if self.range[a] > 0.0 {
            (x - y).abs() / self.range[a]
        } else {
            0.0
        }
    }

    fn distance(&self, i: usize, j: usize) -> f64 {
        (0..self.values.len()).map(|a| self.diff(a, i, j)).sum()
    }
}

/// Picks the `k` nearest of `candidates` (pairs of distance and index). When
/// several candidates tie at the k-th distance they share the remaining
/// weight equally, so the result does not depend on record order.
fn nearest_weighted(mut candidates: Vec<(f64, usize)>, k: usize) -> Vec<(usize, f64)> {
    candidates.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
    let boundary = candidates[k - 1].0;
    let closer = candidates.iter().take_while(|c| c.0 < boundary).count();
    let tied = candidates.iter().filter(|c| c.0 == boundary).count();
    let share = (k - closer) as f64 / tied as f64;
    candidates
        .into_iter()
        .take_while(|c| c.0 <= boundary)
        .map(|(d, j)| (j, if d < boundary { 1.0 } else { share }))
        .collect()
}

/// ReliefF weights: for each sampled instance the `k` nearest hits pull each
/// attribute's weight down by their difference and the `k` nearest misses
/// push it up, each term scaled by `1 / (m k)`. Rank by weight descending.
pub fn rank_relief_f(data: &Dataset, options: &ReliefOptions) -> Result<FeatureRanking> {
    let prepared = prepare(data)?;
    let k = options.neighbors;
    if k == 0 {
        return Err(Error::InvalidParameter("ReliefF needs k >= 1".into()));
    }
    let n = data.len();
    for class in 0..2 {
        let members = prepared.classes.iter().filter(|&&c| c == class).count();
        if members < k + 1 {
            return Err(Error::TooFewSamples {
                needed: k + 1,
                got: members,
            });
        }
    }
    let sampled: Vec<usize> = match options.sample {
        None => (0..n).collect(),
        Some(m) if m == 0 || m > n => {
            return Err(Error::InvalidParameter(format!("sample size {m} outside 1..={n}")))
        }
        Some(m) => {
            let mut order: Vec<usize> = (0..n).collect();
            order.shuffle(&mut ChaCha8Rng::seed_from_u64(options.seed));
            let mut picked = order[..m].to_vec();
            picked.sort_unstable();
            picked
        }
    };
    let m = sampled.len() as f64;
    let table = DiffTable::new(data, &prepared.features);
    let d = prepared.features.len();
    let scale = 1.0 / (m * k as f64);
    let classes = &prepared.classes;

    let contributions: Vec<Vec<f64>> = sampled
        .par_iter()
        .map(|&i| {
            let (mut hits, mut misses) = (Vec::new(), Vec::new());
            for j in (0..n).filter(|&j| j != i) {
                let entry = (table.distance(i, j), j);
                if classes[j] == classes[i] {
                    hits.push(entry);
                } else {
                    misses.push(entry);
                }
            }
            let mut delta = vec![0.0; d];
            for (j, w) in nearest_weighted(hits, k) {
                for (a, slot) in delta.iter_mut().enumerate() {
                    *slot -= w * table.diff(a, i, j) * scale;
                }
            }
            // binary class: the prior ratio P(C) / (1 - P(class_i)) is 1
            for (j, w) in nearest_weighted(misses, k) {
                for (a, slot) in delta.iter_mut().enumerate() {
                    *slot += w * table.diff(a, i, j) * scale;
                }
            }
            delta
        })
        .collect();

    let mut weights = vec![0.0; d];
    for delta in &contributions {
        for (w, x) in weights.iter_mut().zip(delta) {
            *w += x;
        }
    }
    let scored = prepared
        .features
        .iter()
        .zip(weights)
        .map(|(&f, w)| (data.schema()[f].name.clone(), w))
        .collect();
    Ok(FeatureRanking::from_scores(RankingMethod::ReliefF, scored))
}
