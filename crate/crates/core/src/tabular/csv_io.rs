use csv::{ReaderBuilder, StringRecord, Terminator, Trim, WriterBuilder};

use super::{canonical_name, item_number, AttributeSchema, Dataset, Record};
use crate::error::{Error, Result};

/// Data rows paired with their 1-based line numbers.
type NumberedRows = Vec<(usize, StringRecord)>;

fn read_rows(text: &str) -> Result<(Vec<String>, NumberedRows)> {
    let mut reader = ReaderBuilder::new()
        .has_headers(true)
        .flexible(true)
        .trim(Trim::All)
        .from_reader(text.as_bytes());
    let header = reader
        .headers()
        .map_err(|e| Error::parse(1, e.to_string()))?
        .iter()
        .map(str::to_string)
        .collect::<Vec<_>>();
    if header.is_empty() || header.iter().all(String::is_empty) {
        return Err(Error::parse(1, "missing header row"));
    }
    let mut rows = Vec::new();
    for result in reader.records() {
        let record = result.map_err(|e| {
            let line = e.position().map_or(0, |p| p.line() as usize);
            Error::parse(line, e.to_string())
        })?;
        let line = record.position().map_or(0, |p| p.line() as usize);
        rows.push((line, record));
    }
    Ok((header, rows))
}

/// Parses CSV text against a known schema. The header must list the schema
/// names in order; empty cells and `?` are missing.
pub fn parse_csv(text: &str, schema: &[AttributeSchema]) -> Result<Dataset> {
    let (header, rows) = read_rows(text)?;
    let expected: Vec<&str> = schema.iter().map(|a| a.name.as_str()).collect();
    if header != expected {
        return Err(Error::parse(
            1,
            format!("header {header:?} does not match schema {expected:?}"),
        ));
    }
    let mut records = Vec::with_capacity(rows.len());
    for (line, row) in rows {
        if row.len() != schema.len() {
            return Err(Error::parse(
                line,
                format!("expected {} values, found {}", schema.len(), row.len()),
            ));
        }
        let values = schema
            .iter()
            .zip(row.iter())
            .map(|(attr, cell)| {
                attr.parse_cell(cell).ok_or_else(|| {
                    Error::parse(
                        line,
                        format!("value `{cell}` not allowed for attribute `{}`", attr.name),
                    )
                })
            })
            .collect::<Result<Vec<_>>>()?;
        records.push(Record::new(values));
    }
    Dataset::new(schema.to_vec(), records, None)
}

/// Infers a schema from CSV contents.
///
/// Columns named like a questionnaire item (`A3`, `A3_Score`) holding only
/// 0/1 become binary items; all-numeric columns become numeric; a column whose
/// canonical name starts with `class` (or a trailing yes/no column) is the
/// class; everything else is categorical with levels in order of appearance.
pub fn infer_csv_schema(text: &str) -> Result<Vec<AttributeSchema>> {
    let (header, rows) = read_rows(text)?;
    for (line, row) in &rows {
        if row.len() != header.len() {
            return Err(Error::parse(
                *line,
                format!("expected {} values, found {}", header.len(), row.len()),
            ));
        }
    }
    let column = |j: usize| {
        rows.iter()
            .map(move |(_, r)| &r[j])
            .filter(|c| !c.is_empty() && *c != "?")
    };
    let is_yes_no = |j: usize| {
        column(j).all(|c| c.eq_ignore_ascii_case("yes") || c.eq_ignore_ascii_case("no"))
    };

    let class_pos = header
        .iter()
        .position(|h| canonical_name(h).starts_with("class"))
        .or_else(|| (header.len() > 1 && is_yes_no(header.len() - 1)).then(|| header.len() - 1));

    let mut schema = Vec::with_capacity(header.len());
    for (j, name) in header.iter().enumerate() {
        let attr = if Some(j) == class_pos {
            AttributeSchema::class(name.clone())
        } else if item_number(name).is_some() && column(j).all(|c| c == "0" || c == "1") {
            AttributeSchema::binary_item(name.clone())
        } else if column(j).all(|c| c.parse::<f64>().is_ok_and(f64::is_finite)) {
            AttributeSchema::numeric(name.clone())
        } else {
            let mut levels: Vec<String> = Vec::new();
            for c in column(j) {
                if !levels.iter().any(|l| l == c) {
                    levels.push(c.to_string());
                }
            }
            AttributeSchema::categorical(name.clone(), levels)
        };
        schema.push(attr);
    }
    Ok(schema)
}

/// [`infer_csv_schema`] followed by [`parse_csv`].
pub fn parse_csv_inferred(text: &str) -> Result<Dataset> {
    let schema = infer_csv_schema(text)?;
    parse_csv(text, &schema)
}

/// Writes a dataset as CSV: a header row of attribute names, one row per
/// record, missing cells as `?`, class values as `no`/`yes`, `\n` line ends.
pub fn serialize_csv(data: &Dataset) -> String {
    let mut writer = WriterBuilder::new()
        .terminator(Terminator::Any(b'\n'))
        .from_writer(Vec::new());
    let write = |w: &mut csv::Writer<Vec<u8>>, fields: Vec<String>| {
        w.write_record(&fields).expect("writing to memory cannot fail");
    };
    write(
        &mut writer,
        data.schema().iter().map(|a| a.name.clone()).collect(),
    );
    for record in data.records() {
        let fields = data
            .schema()
            .iter()
            .zip(&record.values)
            .map(|(attr, v)| attr.format_cell(v))
            .collect();
        write(&mut writer, fields);
    }
    let bytes = writer.into_inner().expect("in-memory writer flush");
    String::from_utf8(bytes).expect("csv output is utf-8")
}
