//! Categorical attribute tables (CSV with a header row) and their ordinal
//! dictionaries.

use std::collections::HashMap;
use std::fs::File;
use std::io::Read;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{NhqError, Result};

/// One attribute: its name and its values, where a value's code is its
/// position in `values`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AttributeColumn {
    pub name: String,
    pub values: Vec<String>,
}

impl AttributeColumn {
    pub fn cardinality(&self) -> u32 {
        self.values.len() as u32
    }

    fn code_of(&self, value: &str) -> Option<u32> {
        self.values.iter().position(|v| v == value).map(|p| p as u32)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct AttributeSchema {
    pub columns: Vec<AttributeColumn>,
}

impl AttributeSchema {
    /// Schema for generated data: columns `a0, a1, ...` with values `"0"`,
    /// `"1"`, ... so that a value's text is its code.
    pub fn synthetic(cardinalities: &[u32]) -> Self {
        Self {
            columns: cardinalities
                .iter()
                .enumerate()
                .map(|(i, &c)| AttributeColumn {
                    name: format!("a{i}"),
                    values: (0..c).map(|v| v.to_string()).collect(),
                })
                .collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.columns.len()
    }

    pub fn is_empty(&self) -> bool {
        self.columns.is_empty()
    }

    pub fn cardinalities(&self) -> Vec<u32> {
        self.columns.iter().map(AttributeColumn::cardinality).collect()
    }

    pub fn names(&self) -> Vec<&str> {
        self.columns.iter().map(|c| c.name.as_str()).collect()
    }

    pub fn encode<S: AsRef<str>>(&self, row: &[S]) -> Result<Vec<u32>> {
        if row.len() != self.len() {
            return Err(NhqError::DimensionMismatch {
                expected: self.len(),
                found: row.len(),
            });
        }
        self.columns
            .iter()
            .zip(row)
            .map(|(c, v)| {
                c.code_of(v.as_ref())
                    .ok_or_else(|| NhqError::Data(format!("value {:?} not in the dictionary of {}", v.as_ref(), c.name)))
            })
            .collect()
    }

    pub fn decode(&self, codes: &[u32]) -> Result<Vec<String>> {
        if codes.len() != self.len() {
            return Err(NhqError::DimensionMismatch {
                expected: self.len(),
                found: codes.len(),
            });
        }
        self.columns
            .iter()
            .zip(codes)
            .map(|(c, &code)| {
                c.values
                    .get(code as usize)
                    .cloned()
                    .ok_or_else(|| NhqError::Data(format!("code {code} out of range for {}", c.name)))
            })
            .collect()
    }
}

pub fn read_attributes(path: impl AsRef<Path>, schema: Option<&AttributeSchema>) -> Result<(Vec<Vec<u32>>, AttributeSchema)> {
    let path = path.as_ref();
    let file = File::open(path).map_err(|e| NhqError::io(path, e))?;
    read_attributes_from(file, path, schema)
}

/// Parses a header row of attribute names and one row per object.
///
/// Without `schema`, each column's dictionary assigns codes in first-seen
/// order. With `schema`, headers must match and unseen values are errors.
pub fn read_attributes_from<R: Read>(
    reader: R,
    path: &Path,
    schema: Option<&AttributeSchema>,
) -> Result<(Vec<Vec<u32>>, AttributeSchema)> {
    let format_err = |offset: u64, message: String| NhqError::Format {
        path: path.to_path_buf(),
        offset,
        message,
    };
    let csv_err = |e: csv::Error| {
        let offset = e.position().map_or(0, |p| p.byte());
        format_err(offset, e.to_string())
    };
    let mut rdr = csv::ReaderBuilder::new().has_headers(true).trim(csv::Trim::All).from_reader(reader);
    let headers: Vec<String> = rdr.headers().map_err(csv_err)?.iter().map(str::to_owned).collect();
    if headers.is_empty() || headers.iter().all(String::is_empty) {
        return Err(format_err(0, "missing header row".into()));
    }
    if let Some(s) = schema {
        if s.names() != headers.iter().map(String::as_str).collect::<Vec<_>>() {
            return Err(NhqError::Data(format!(
                "header {headers:?} does not match schema columns {:?}",
                s.names()
            )));
        }
    }

    let mut columns: Vec<AttributeColumn> = match schema {
        Some(s) => s.columns.clone(),
        None => headers
            .iter()
            .map(|h| AttributeColumn {
                name: h.clone(),
                values: Vec::new(),
            })
            .collect(),
    };
    let mut lookup: Vec<HashMap<String, u32>> = columns
        .iter()
        .map(|c| c.values.iter().enumerate().map(|(i, v)| (v.clone(), i as u32)).collect())
        .collect();

    let mut rows = Vec::new();
    for rec in rdr.records() {
        let rec = rec.map_err(csv_err)?;
        let offset = rec.position().map_or(0, |p| p.byte());
        let mut codes = Vec::with_capacity(columns.len());
        for (j, value) in rec.iter().enumerate() {
            let code = match lookup[j].get(value) {
                Some(&c) => c,
                None if schema.is_some() => {
                    return Err(NhqError::Data(format!(
                        "{}: value {value:?} of column {} at byte {offset} is not in the schema",
                        path.display(),
                        columns[j].name
                    )));
                }
                None => {
                    let c = columns[j].values.len() as u32;
                    columns[j].values.push(value.to_owned());
                    lookup[j].insert(value.to_owned(), c);
                    c
                }
            };
            codes.push(code);
        }
        rows.push(codes);
    }
    Ok((rows, AttributeSchema { columns }))
}

/// Writes decoded attribute rows with a header row.
pub fn write_attributes(path: impl AsRef<Path>, rows: &[Vec<u32>], schema: &AttributeSchema) -> Result<()> {
    let path = path.as_ref();
    let file = File::create(path).map_err(|e| NhqError::io(path, e))?;
    let mut w = csv::Writer::from_writer(file);
    let werr = |e: csv::Error| NhqError::io(path, std::io::Error::other(e));
    w.write_record(schema.names()).map_err(werr)?;
    for r in rows {
        w.write_record(schema.decode(r)?).map_err(werr)?;
    }
    w.flush().map_err(|e| NhqError::io(path, e))
}
