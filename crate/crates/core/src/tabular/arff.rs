//! Reader for the subset of the attribute-relation file format used by the
//! public screening tables: `@relation`, nominal/numeric/string attributes,
//! a dense `@data` section and `?` for missing cells.

use super::{canonical_name, AttributeSchema, Dataset, Record, Value};
use crate::error::{Error, Result};

enum DeclaredType {
    Nominal(Vec<String>),
    Numeric,
    Text,
}

struct Declaration {
    name: String,
    ty: DeclaredType,
    line: usize,
}

/// Parses an ARFF document into a [`Dataset`] (with no age group set).
///
/// Nominal attributes declared as `{0,1}` become [`AttributeKind::BinaryItem`](super::AttributeKind::BinaryItem).
/// The class is the attribute whose canonical name starts with `class`, or
/// failing that a trailing `{no,yes}` attribute; it must take the values
/// `no`/`yes` in any letter case. `string` attributes become categorical with
/// levels in order of first appearance.
pub fn parse_arff(text: &str) -> Result<Dataset> {
    let mut relation_seen = false;
    let mut decls: Vec<Declaration> = Vec::new();
    let mut rows: Vec<(usize, Vec<Option<String>>)> = Vec::new();
    let mut in_data = false;

    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('%') {
            continue;
        }
        if in_data {
            if line.starts_with('{') {
                return Err(Error::parse(line_no, "sparse data rows are not supported"));
            }
            let cells = split_values(line).map_err(|m| Error::parse(line_no, m))?;
            if cells.len() != decls.len() {
                return Err(Error::parse(
                    line_no,
                    format!("expected {} values, found {}", decls.len(), cells.len()),
                ));
            }
            rows.push((line_no, cells));
            continue;
        }

        let (keyword, rest) = split_keyword(line);
        match keyword.to_ascii_lowercase().as_str() {
            "@relation" => {
                if relation_seen {
                    return Err(Error::parse(line_no, "duplicate @relation"));
                }
                if rest.is_empty() {
                    return Err(Error::parse(line_no, "@relation needs a name"));
                }
                relation_seen = true;
            }
            "@attribute" => {
                if !relation_seen {
                    return Err(Error::parse(line_no, "@attribute before @relation"));
                }
                decls.push(parse_declaration(rest, line_no)?);
            }
            "@data" => {
                if !relation_seen {
                    return Err(Error::parse(line_no, "@data before @relation"));
                }
                if decls.is_empty() {
                    return Err(Error::parse(line_no, "no attributes declared"));
                }
                in_data = true;
            }
            other => {
                return Err(Error::parse(
                    line_no,
                    format!("unexpected header line starting with `{other}`"),
                ));
            }
        }
    }

    if !in_data {
        return Err(Error::parse(
            text.lines().count().max(1),
            "missing @data section",
        ));
    }

    let class_pos = find_class(&decls);
    let mut schema = Vec::with_capacity(decls.len());
    for (pos, decl) in decls.iter().enumerate() {
        schema.push(build_attribute(decl, Some(pos) == class_pos, pos, &rows)?);
    }

    let mut records = Vec::with_capacity(rows.len());
    for (line_no, cells) in &rows {
        let mut values = Vec::with_capacity(cells.len());
        for (attr, cell) in schema.iter().zip(cells) {
            let value = match cell {
                None => Value::Missing,
                Some(text) => attr.parse_cell(text).ok_or_else(|| {
                    Error::parse(
                        *line_no,
                        format!("value `{text}` not allowed for attribute `{}`", attr.name),
                    )
                })?,
            };
            values.push(value);
        }
        records.push(Record::new(values));
    }

    Dataset::new(schema, records, None)
}

fn split_keyword(line: &str) -> (&str, &str) {
    match line.find(char::is_whitespace) {
        Some(i) => (&line[..i], line[i..].trim()),
        None => (line, ""),
    }
}

fn parse_declaration(rest: &str, line: usize) -> Result<Declaration> {
    let (name, ty_text) = if let Some(quote) = rest.chars().next().filter(|c| *c == '\'' || *c == '"') {
        let body = &rest[1..];
        let end = body
            .find(quote)
            .ok_or_else(|| Error::parse(line, "unterminated quoted attribute name"))?;
        (body[..end].to_string(), body[end + 1..].trim())
    } else {
        let (name, ty) = split_keyword(rest);
        (name.to_string(), ty)
    };
    if name.is_empty() || ty_text.is_empty() {
        return Err(Error::parse(line, "@attribute needs a name and a type"));
    }

    let ty = if let Some(inner) = ty_text.strip_prefix('{') {
        let inner = inner
            .strip_suffix('}')
            .ok_or_else(|| Error::parse(line, "unterminated nominal value list"))?;
        let values: Vec<String> = split_values(inner)
            .map_err(|m| Error::parse(line, m))?
            .into_iter()
            .map(|v| v.ok_or_else(|| Error::parse(line, "`?` is not a nominal value")))
            .collect::<Result<_>>()?;
        if values.is_empty() {
            return Err(Error::parse(line, "empty nominal value list"));
        }
        DeclaredType::Nominal(values)
    } else {
        match ty_text.to_ascii_lowercase().as_str() {
            "numeric" | "real" | "integer" => DeclaredType::Numeric,
            "string" => DeclaredType::Text,
            other => {
                return Err(Error::parse(line, format!("unsupported attribute type `{other}`")));
            }
        }
    };
    Ok(Declaration { name, ty, line })
}

fn is_yes_no(values: &[String]) -> bool {
    values.len() == 2
        && values.iter().any(|v| v.eq_ignore_ascii_case("yes"))
        && values.iter().any(|v| v.eq_ignore_ascii_case("no"))
}

fn find_class(decls: &[Declaration]) -> Option<usize> {
    decls
        .iter()
        .position(|d| canonical_name(&d.name).starts_with("class"))
        .or_else(|| match decls.last() {
            Some(Declaration {
                ty: DeclaredType::Nominal(values),
                ..
            }) if is_yes_no(values) => Some(decls.len() - 1),
            _ => None,
        })
}

fn build_attribute(
    decl: &Declaration,
    is_class: bool,
    pos: usize,
    rows: &[(usize, Vec<Option<String>>)],
) -> Result<AttributeSchema> {
    if is_class {
        return match &decl.ty {
            DeclaredType::Nominal(values) if is_yes_no(values) => {
                Ok(AttributeSchema::class(decl.name.clone()))
            }
            _ => Err(Error::parse(
                decl.line,
                format!("class attribute `{}` must be nominal {{no,yes}}", decl.name),
            )),
        };
    }
    Ok(match &decl.ty {
        DeclaredType::Numeric => AttributeSchema::numeric(decl.name.clone()),
        DeclaredType::Nominal(values) => {
            let mut sorted: Vec<&str> = values.iter().map(String::as_str).collect();
            sorted.sort_unstable();
            if sorted == ["0", "1"] {
                AttributeSchema::binary_item(decl.name.clone())
            } else {
                AttributeSchema::categorical(decl.name.clone(), values.iter().cloned())
            }
        }
        DeclaredType::Text => {
            let mut levels: Vec<String> = Vec::new();
            for cell in rows.iter().filter_map(|(_, cells)| cells[pos].as_ref()) {
                if !levels.iter().any(|l| l == cell) {
                    levels.push(cell.clone());
                }
            }
            if levels.is_empty() {
                return Err(Error::parse(
                    decl.line,
                    format!("string attribute `{}` has no observed values", decl.name),
                ));
            }
            AttributeSchema::categorical(decl.name.clone(), levels)
        }
    })
}

/// Splits a comma-separated list honouring single/double quotes and
/// backslash escapes. Unquoted `?` becomes `None`.
fn split_values(s: &str) -> std::result::Result<Vec<Option<String>>, String> {
    let mut out = Vec::new();
    let mut chars = s.chars().peekable();
    loop {
        while chars.peek().is_some_and(|c| c.is_whitespace()) {
            chars.next();
        }
        let mut token = String::new();
        let mut quoted = false;
        if let Some(&q) = chars.peek().filter(|c| **c == '\'' || **c == '"') {
            quoted = true;
            chars.next();
            let mut closed = false;
            while let Some(c) = chars.next() {
                match c {
                    '\\' => {
                        if let Some(escaped) = chars.next() {
                            token.push(escaped);
                        }
                    }
                    c if c == q => {
                        closed = true;
                        break;
                    }
                    c => token.push(c),
                }
            }
            if !closed {
                return Err("unterminated quoted value".to_string());
            }
            while chars.peek().is_some_and(|c| c.is_whitespace()) {
                chars.next();
            }
            if chars.peek().is_some_and(|c| *c != ',') {
                return Err("unexpected text after quoted value".to_string());
            }
        } else {
            while let Some(&c) = chars.peek() {
                if c == ',' {
                    break;
                }
                token.push(c);
                chars.next();
            }
        }
        let token = token.trim().to_string();
        if !quoted && token.is_empty() {
            return Err("empty value".to_string());
        }
        out.push(if !quoted && token == "?" { None } else { Some(token) });
        match chars.next() {
            Some(',') => continue,
            None => break,
            Some(c) => return Err(format!("unexpected character `{c}`")),
        }
    }
    Ok(out)
}
