//! Dataset representation, ARFF/CSV parsing, preprocessing and numeric encoding.

mod arff;
mod csv_io;
mod encode;
mod preprocess;

use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use arff::parse_arff;
pub use csv_io::{infer_csv_schema, parse_csv, parse_csv_inferred, serialize_csv};
pub use encode::{encode, ColumnOrigin, EncodedMatrix, Encoder, LabelScheme};
pub use preprocess::{is_dropped_attribute, preprocess, preprocess_with_summary, PreprocessSummary};

/// The four screening age groups.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AgeGroup {
    Toddler,
    Child,
    Adolescent,
    Adult,
}

impl AgeGroup {
    pub const ALL: [AgeGroup; 4] = [
        AgeGroup::Toddler,
        AgeGroup::Child,
        AgeGroup::Adolescent,
        AgeGroup::Adult,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            AgeGroup::Toddler => "toddler",
            AgeGroup::Child => "child",
            AgeGroup::Adolescent => "adolescent",
            AgeGroup::Adult => "adult",
        }
    }
}

impl fmt::Display for AgeGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for AgeGroup {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match canonical_name(s).as_str() {
            "toddler" => Ok(AgeGroup::Toddler),
            "child" => Ok(AgeGroup::Child),
            "adolescent" => Ok(AgeGroup::Adolescent),
            "adult" => Ok(AgeGroup::Adult),
            _ => Err(Error::InvalidParameter(format!("unknown age group `{s}`"))),
        }
    }
}

/// Binary class of every screening record.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ClassLabel {
    No,
    Yes,
}

impl ClassLabel {
    pub fn from_index(index: usize) -> Option<Self> {
        match index {
            0 => Some(ClassLabel::No),
            1 => Some(ClassLabel::Yes),
            _ => None,
        }
    }

    pub fn index(self) -> usize {
        match self {
            ClassLabel::No => 0,
            ClassLabel::Yes => 1,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            ClassLabel::No => "no",
            ClassLabel::Yes => "yes",
        }
    }

    pub fn is_yes(self) -> bool {
        self == ClassLabel::Yes
    }
}

impl fmt::Display for ClassLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum AttributeKind {
    /// A questionnaire item taking exactly the values 0 and 1.
    BinaryItem,
    Numeric,
    /// Enumerated string values, listed in [`AttributeSchema::categories`].
    Categorical,
    /// The target, taking exactly the values `no` and `yes`.
    Class,
}

const BINARY_LEVELS: [&str; 2] = ["0", "1"];
const CLASS_LEVELS: [&str; 2] = ["no", "yes"];

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AttributeSchema {
    pub name: String,
    pub kind: AttributeKind,
    /// Declared values; non-empty exactly when `kind` is `Categorical`.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub categories: Vec<String>,
}

impl AttributeSchema {
    pub fn binary_item(name: impl Into<String>) -> Self {
        Self::plain(name, AttributeKind::BinaryItem)
    }

    pub fn numeric(name: impl Into<String>) -> Self {
        Self::plain(name, AttributeKind::Numeric)
    }

    pub fn class(name: impl Into<String>) -> Self {
        Self::plain(name, AttributeKind::Class)
    }

    pub fn categorical<S: Into<String>>(
        name: impl Into<String>,
        categories: impl IntoIterator<Item = S>,
    ) -> Self {
        AttributeSchema {
            name: name.into(),
            kind: AttributeKind::Categorical,
            categories: categories.into_iter().map(Into::into).collect(),
        }
    }

    fn plain(name: impl Into<String>, kind: AttributeKind) -> Self {
        AttributeSchema {
            name: name.into(),
            kind,
            categories: Vec::new(),
        }
    }

    pub fn is_nominal(&self) -> bool {
        self.kind != AttributeKind::Numeric
    }

    /// Number of distinct values of a nominal attribute (0 for numeric).
    pub fn level_count(&self) -> usize {
        match self.kind {
            AttributeKind::BinaryItem | AttributeKind::Class => 2,
            AttributeKind::Categorical => self.categories.len(),
            AttributeKind::Numeric => 0,
        }
    }

    pub fn level_name(&self, index: usize) -> Option<&str> {
        match self.kind {
            AttributeKind::BinaryItem => BINARY_LEVELS.get(index).copied(),
            AttributeKind::Class => CLASS_LEVELS.get(index).copied(),
            AttributeKind::Categorical => self.categories.get(index).map(String::as_str),
            AttributeKind::Numeric => None,
        }
    }

    /// Resolves a textual nominal value to its level index.
    ///
    /// Class values match case-insensitively; categorical values match
    /// exactly first and case-insensitively as a fallback.
    pub fn level_index(&self, text: &str) -> Option<usize> {
        let text = text.trim();
        match self.kind {
            AttributeKind::BinaryItem => match text {
                "0" => Some(0),
                "1" => Some(1),
                _ => None,
            },
            AttributeKind::Class => CLASS_LEVELS
                .iter()
                .position(|level| level.eq_ignore_ascii_case(text)),
            AttributeKind::Categorical => self
                .categories
                .iter()
                .position(|c| c == text)
                .or_else(|| {
                    self.categories
                        .iter()
                        .position(|c| c.eq_ignore_ascii_case(text))
                }),
            AttributeKind::Numeric => None,
        }
    }

    /// Parses one textual cell. `?` and the empty string are missing.
    pub fn parse_cell(&self, text: &str) -> Option<Value> {
        let text = text.trim();
        if text.is_empty() || text == "?" {
            return Some(Value::Missing);
        }
        match self.kind {
            AttributeKind::Numeric => text
                .parse::<f64>()
                .ok()
                .filter(|v| v.is_finite())
                .map(Value::Numeric),
            _ => self.level_index(text).map(Value::Nominal),
        }
    }

    /// Renders a cell back to text; missing cells render as `?`.
    pub fn format_cell(&self, value: &Value) -> String {
        match value {
            Value::Missing => "?".to_string(),
            Value::Numeric(v) => v.to_string(),
            Value::Nominal(i) => self.level_name(*i).unwrap_or("?").to_string(),
        }
    }

    fn conforms(&self, value: &Value) -> bool {
        match (self.kind, value) {
            (_, Value::Missing) => true,
            (AttributeKind::Numeric, Value::Numeric(v)) => v.is_finite(),
            (AttributeKind::Numeric, Value::Nominal(_)) => false,
            (_, Value::Nominal(i)) => *i < self.level_count(),
            (_, Value::Numeric(_)) => false,
        }
    }
}

/// One cell of a record.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub enum Value {
    Missing,
    Numeric(f64),
    /// Level index into the attribute's value list.
    Nominal(usize),
}

impl Value {
    pub fn is_missing(&self) -> bool {
        matches!(self, Value::Missing)
    }

    /// Numeric view of the cell: the number itself, or the level index.
    pub fn as_f64(&self) -> Option<f64> {
        match *self {
            Value::Missing => None,
            Value::Numeric(v) => Some(v),
            Value::Nominal(i) => Some(i as f64),
        }
    }

    pub fn as_level(&self) -> Option<usize> {
        match *self {
            Value::Nominal(i) => Some(i),
            _ => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Record {
    pub values: Vec<Value>,
}

impl Record {
    pub fn new(values: Vec<Value>) -> Self {
        Record { values }
    }

    pub fn has_missing(&self) -> bool {
        self.values.iter().any(Value::is_missing)
    }
}

/// Lower-cased name with every non-alphanumeric character removed.
///
/// `"Used_App_Before"`, `"used app before"` and `"USED-APP-BEFORE"` all
/// canonicalize to `"usedappbefore"`.
pub fn canonical_name(name: &str) -> String {
    name.chars()
        .filter(char::is_ascii_alphanumeric)
        .map(|c| c.to_ascii_lowercase())
        .collect()
}

/// Questionnaire item number (1..=10) for names like `A3` or `A3_Score`.
pub fn item_number(name: &str) -> Option<u8> {
    let canon = canonical_name(name);
    let rest = canon.strip_prefix('a')?;
    let digits = rest.strip_suffix("score").unwrap_or(rest);
    if digits.is_empty() || !digits.chars().all(|c| c.is_ascii_digit()) {
        return None;
    }
    digits.parse::<u8>().ok().filter(|n| (1..=10).contains(n))
}

/// A schema plus its records for one screening table.
#[derive(Clone, Debug, PartialEq)]
pub struct Dataset {
    schema: Vec<AttributeSchema>,
    records: Vec<Record>,
    group: Option<AgeGroup>,
}

impl Dataset {
    /// Builds a dataset, checking every schema and record invariant.
    pub fn new(
        schema: Vec<AttributeSchema>,
        records: Vec<Record>,
        group: Option<AgeGroup>,
    ) -> Result<Self> {
        validate_schema(&schema)?;
        for (row, record) in records.iter().enumerate() {
            if record.values.len() != schema.len() {
                return Err(Error::SchemaMismatch(format!(
                    "record {row} has {} cells, schema has {} attributes",
                    record.values.len(),
                    schema.len()
                )));
            }
            for (attr, value) in schema.iter().zip(&record.values) {
                if !attr.conforms(value) {
                    return Err(Error::SchemaMismatch(format!(
                        "record {row}: value {value:?} does not fit attribute `{}`",
                        attr.name
                    )));
                }
            }
        }
        Ok(Dataset {
            schema,
            records,
            group,
        })
    }

    pub fn schema(&self) -> &[AttributeSchema] {
        &self.schema
    }

    pub fn records(&self) -> &[Record] {
        &self.records
    }

    pub fn group(&self) -> Option<AgeGroup> {
        self.group
    }

    pub fn with_group(mut self, group: AgeGroup) -> Self {
        self.group = Some(group);
        self
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    pub fn attribute_index(&self, name: &str) -> Option<usize> {
        self.schema.iter().position(|a| a.name == name)
    }

    pub fn attribute(&self, name: &str) -> Option<&AttributeSchema> {
        self.attribute_index(name).map(|i| &self.schema[i])
    }

    pub fn class_index(&self) -> Result<usize> {
        self.schema
            .iter()
            .position(|a| a.kind == AttributeKind::Class)
            .ok_or(Error::MissingClass)
    }

    /// Names of every non-class attribute in schema order.
    pub fn feature_names(&self) -> Vec<String> {
        self.schema
            .iter()
            .filter(|a| a.kind != AttributeKind::Class)
            .map(|a| a.name.clone())
            .collect()
    }

    /// Class label of every record; fails on a missing class cell.
    pub fn labels(&self) -> Result<Vec<ClassLabel>> {
        let class = self.class_index()?;
        self.records
            .iter()
            .enumerate()
            .map(|(row, r)| {
                r.values[class]
                    .as_level()
                    .and_then(ClassLabel::from_index)
                    .ok_or_else(|| Error::MissingValue {
                        attribute: self.schema[class].name.clone(),
                        record: row,
                    })
            })
            .collect()
    }

    /// `(no, yes)` record counts.
    pub fn class_counts(&self) -> Result<(usize, usize)> {
        let labels = self.labels()?;
        let yes = labels.iter().filter(|l| l.is_yes()).count();
        Ok((labels.len() - yes, yes))
    }

    /// A dataset holding the given rows, in the given order.
    pub fn subset(&self, rows: &[usize]) -> Dataset {
        Dataset {
            schema: self.schema.clone(),
            records: rows.iter().map(|&i| self.records[i].clone()).collect(),
            group: self.group,
        }
    }

    /// Keeps only the attributes at `keep` (schema order preserved).
    pub(crate) fn project(&self, keep: &[usize]) -> Dataset {
        Dataset {
            schema: keep.iter().map(|&i| self.schema[i].clone()).collect(),
            records: self
                .records
                .iter()
                .map(|r| Record::new(keep.iter().map(|&i| r.values[i]).collect()))
                .collect(),
            group: self.group,
        }
    }

    pub(crate) fn with_records(&self, records: Vec<Record>) -> Dataset {
        Dataset {
            schema: self.schema.clone(),
            records,
            group: self.group,
        }
    }
}

fn validate_schema(schema: &[AttributeSchema]) -> Result<()> {
    let mut seen = HashSet::new();
    let mut classes = 0;
    for attr in schema {
        if !seen.insert(attr.name.as_str()) {
            return Err(Error::SchemaMismatch(format!(
                "duplicate attribute `{}`",
                attr.name
            )));
        }
        let categorical = attr.kind == AttributeKind::Categorical;
        if categorical == attr.categories.is_empty() {
            return Err(Error::SchemaMismatch(format!(
                "attribute `{}`: categories must be non-empty iff categorical",
                attr.name
            )));
        }
        if attr.kind == AttributeKind::Class {
            classes += 1;
        }
    }
    if classes > 1 {
        return Err(Error::SchemaMismatch(
            "more than one class attribute".to_string(),
        ));
    }
    Ok(())
}
