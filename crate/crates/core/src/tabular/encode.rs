use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use super::{AttributeKind, AttributeSchema, ClassLabel, Dataset, Record, Value};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum LabelScheme {
    /// `no = -1`, `yes = +1`, for margin learners.
    PlusMinusOne,
    /// `no = 0`, `yes = 1`, for probabilistic learners.
    ZeroOne,
}

impl LabelScheme {
    pub fn encode(self, label: ClassLabel) -> f64 {
        match (self, label) {
            (LabelScheme::PlusMinusOne, ClassLabel::No) => -1.0,
            (LabelScheme::ZeroOne, ClassLabel::No) => 0.0,
            (_, ClassLabel::Yes) => 1.0,
        }
    }
}

/// Where a matrix column came from.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ColumnOrigin {
    pub attribute: String,
    /// Set for one-hot columns of categorical attributes.
    pub category: Option<String>,
}

/// Numeric learner input: an `n x d` matrix, an `n`-vector of labels and the
/// provenance of every column.
#[derive(Clone, Debug, PartialEq)]
pub struct EncodedMatrix {
    pub rows: DMatrix<f64>,
    pub labels: Vec<f64>,
    pub column_map: Vec<ColumnOrigin>,
}

impl EncodedMatrix {
    /// Builds a matrix from raw rows; columns are named `x0`, `x1`, ...
    pub fn from_rows(rows: &[Vec<f64>], labels: Vec<f64>) -> Result<Self> {
        let n = rows.len();
        if n != labels.len() {
            return Err(Error::LengthMismatch {
                left: n,
                right: labels.len(),
            });
        }
        let d = rows.first().map_or(0, Vec::len);
        if let Some(bad) = rows.iter().find(|r| r.len() != d) {
            return Err(Error::LengthMismatch {
                left: d,
                right: bad.len(),
            });
        }
        Ok(EncodedMatrix {
            rows: DMatrix::from_fn(n, d, |i, j| rows[i][j]),
            labels,
            column_map: (0..d)
                .map(|j| ColumnOrigin {
                    attribute: format!("x{j}"),
                    category: None,
                })
                .collect(),
        })
    }

    pub fn nrows(&self) -> usize {
        self.rows.nrows()
    }

    pub fn ncols(&self) -> usize {
        self.rows.ncols()
    }

    pub fn row(&self, i: usize) -> Vec<f64> {
        self.rows.row(i).iter().copied().collect()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "rule", rename_all = "snake_case")]
enum ColumnRule {
    Identity { source: usize },
    MinMax { source: usize, min: f64, max: f64 },
    OneHot { source: usize, level: usize },
}

/// Column layout and scaling fitted on one dataset and replayable on others
/// with the same schema (e.g. a held-out fold).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Encoder {
    schema: Vec<AttributeSchema>,
    rules: Vec<ColumnRule>,
    origins: Vec<ColumnOrigin>,
}

impl Encoder {
    /// Fits the layout for `selected` attributes on `data`.
    ///
    /// Columns follow schema order regardless of the order of `selected`;
    /// categorical attributes expand to one column per declared category,
    /// including categories absent from `data`. Numeric columns are min-max
    /// scaled with `data`'s own range; a constant column maps to 0.
    pub fn fit<S: AsRef<str>>(data: &Dataset, selected: &[S]) -> Result<Self> {
        if selected.is_empty() {
            return Err(Error::EmptySelection);
        }
        if data.is_empty() {
            return Err(Error::EmptyDataset);
        }
        let mut indices = Vec::with_capacity(selected.len());
        for name in selected {
            let name = name.as_ref();
            let idx = data
                .attribute_index(name)
                .ok_or_else(|| Error::UnknownAttribute(name.to_string()))?;
            if data.schema()[idx].kind == AttributeKind::Class {
                return Err(Error::InvalidParameter(format!(
                    "class attribute `{name}` cannot be a feature"
                )));
            }
            indices.push(idx);
        }
        indices.sort_unstable();
        indices.dedup();

        let mut rules = Vec::new();
        let mut origins = Vec::new();
        for &source in &indices {
            let attr = &data.schema()[source];
            let mut column = Vec::with_capacity(data.len());
            for (row, record) in data.records().iter().enumerate() {
                match record.values[source].as_f64() {
                    Some(v) => column.push(v),
                    None => {
                        return Err(Error::MissingValue {
                            attribute: attr.name.clone(),
                            record: row,
                        })
                    }
                }
            }
            let origin = |category: Option<String>| ColumnOrigin {
                attribute: attr.name.clone(),
                category,
            };
            match attr.kind {
                AttributeKind::BinaryItem => {
                    rules.push(ColumnRule::Identity { source });
                    origins.push(origin(None));
                }
                AttributeKind::Numeric => {
                    let min = column.iter().copied().fold(f64::INFINITY, f64::min);
                    let max = column.iter().copied().fold(f64::NEG_INFINITY, f64::max);
                    rules.push(ColumnRule::MinMax { source, min, max });
                    origins.push(origin(None));
                }
                AttributeKind::Categorical => {
                    for (level, category) in attr.categories.iter().enumerate() {
                        rules.push(ColumnRule::OneHot { source, level });
                        origins.push(origin(Some(category.clone())));
                    }
                }
                AttributeKind::Class => unreachable!("class rejected above"),
            }
        }
        Ok(Encoder {
            schema: data.schema().to_vec(),
            rules,
            origins,
        })
    }

    pub fn ncols(&self) -> usize {
        self.rules.len()
    }

    pub fn column_map(&self) -> &[ColumnOrigin] {
        &self.origins
    }

    pub fn schema(&self) -> &[AttributeSchema] {
        &self.schema
    }

    /// Encodes one record conforming to the fit-time schema.
    pub fn encode_record(&self, record: &Record) -> Result<Vec<f64>> {
        if record.values.len() != self.schema.len() {
            return Err(Error::SchemaMismatch(format!(
                "record has {} cells, model expects {}",
                record.values.len(),
                self.schema.len()
            )));
        }
        self.rules
            .iter()
            .map(|rule| {
                let source = match rule {
                    ColumnRule::Identity { source }
                    | ColumnRule::MinMax { source, .. }
                    | ColumnRule::OneHot { source, .. } => *source,
                };
                let value = record.values[source];
                let raw = value.as_f64().ok_or_else(|| Error::MissingValue {
                    attribute: self.schema[source].name.clone(),
                    record: 0,
                })?;
                Ok(match *rule {
                    ColumnRule::Identity { .. } => raw,
                    ColumnRule::MinMax { min, max, .. } => {
                        if max > min {
                            (raw - min) / (max - min)
                        } else {
                            0.0
                        }
                    }
                    ColumnRule::OneHot { level, .. } => {
                        if value == Value::Nominal(level) {
                            1.0
                        } else {
                            0.0
                        }
                    }
                })
            })
            .collect()
    }

    /// Encodes every record of `data` together with its labels.
    pub fn transform(&self, data: &Dataset, scheme: LabelScheme) -> Result<EncodedMatrix> {
        if data.schema() != self.schema.as_slice() {
            return Err(Error::SchemaMismatch(
                "dataset schema differs from the fit-time schema".to_string(),
            ));
        }
        let labels = data.labels()?;
        let mut rows = DMatrix::zeros(data.len(), self.ncols());
        for (i, record) in data.records().iter().enumerate() {
            let encoded = self.encode_record(record).map_err(|e| match e {
                Error::MissingValue { attribute, .. } => Error::MissingValue {
                    attribute,
                    record: i,
                },
                other => other,
            })?;
            for (j, v) in encoded.into_iter().enumerate() {
                rows[(i, j)] = v;
            }
        }
        Ok(EncodedMatrix {
            rows,
            labels: labels.into_iter().map(|l| scheme.encode(l)).collect(),
            column_map: self.origins.clone(),
        })
    }
}

/// Fits an [`Encoder`] on `data` and applies it to the same data.
pub fn encode<S: AsRef<str>>(
    data: &Dataset,
    selected: &[S],
    scheme: LabelScheme,
) -> Result<EncodedMatrix> {
    Encoder::fit(data, selected)?.transform(data, scheme)
}
