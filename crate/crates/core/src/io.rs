//! JSON system documents and CSV ingestion.
//!
//! A document holds one universe, a list of quantities over it and optional
//! named systems. Dense tables list sign indices in tuple-rank order
//! (lexicographic in universe order, leftmost coordinate most significant);
//! sparse tables give `entries` plus a `default` sign index.

use std::collections::{HashMap, HashSet};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quantity::{Quantity, SignSet};
use crate::system::System;
use crate::universe::Universe;

pub const SCHEMA_VERSION: &str = "1";

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SystemDocument {
    pub schema_version: String,
    pub universe: Vec<String>,
    pub quantities: Vec<QuantityRecord>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub systems: Vec<SystemRecord>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QuantityRecord {
    pub name: String,
    pub arity: usize,
    pub signs: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub table: Option<Vec<u32>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub entries: Option<Vec<EntryRecord>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub default: Option<u32>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EntryRecord {
    pub tuple: Vec<String>,
    pub sign: u32,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SystemRecord {
    pub name: String,
    pub measures: Vec<String>,
    #[serde(default)]
    pub strict: bool,
    /// Restricts the system to a subset of the universe.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub vertices: Option<Vec<String>>,
}

/// A validated document turned into library values.
#[derive(Debug, Clone)]
pub struct Model {
    pub universe: Universe,
    pub quantities: Vec<Quantity>,
    pub systems: Vec<(String, System)>,
}

impl Model {
    pub fn quantity(&self, name: &str) -> Result<&Quantity> {
        self.quantities
            .iter()
            .find(|q| q.name() == name)
            .ok_or_else(|| Error::NotFound(format!("quantity `{name}`")))
    }

    pub fn system(&self, name: &str) -> Result<&System> {
        self.systems
            .iter()
            .find(|(n, _)| n == name)
            .map(|(_, s)| s)
            .ok_or_else(|| Error::NotFound(format!("system `{name}`")))
    }

    /// The first declared system, or one measuring with every quantity.
    pub fn default_system(&self) -> Result<System> {
        match self.systems.first() {
            Some((_, s)) => Ok(s.clone()),
            None => System::new(self.universe.clone(), self.quantities.clone(), false),
        }
    }
}

fn invalid(context: impl Into<String>) -> impl FnOnce(Error) -> Error {
    let context = context.into();
    move |source| Error::Validation {
        context,
        source: Box::new(source),
    }
}

impl QuantityRecord {
    pub fn dense(q: &Quantity) -> Self {
        QuantityRecord {
            name: q.name().to_string(),
            arity: q.arity(),
            signs: q.signs().signs().to_vec(),
            table: Some(q.table().to_vec()),
            entries: None,
            default: None,
        }
    }

    fn build(&self, universe: &Universe) -> Result<Quantity> {
        let signs = SignSet::new(self.signs.iter().cloned())?;
        let table = match (&self.table, &self.entries, self.default) {
            (Some(table), None, None) => table.clone(),
            (None, Some(entries), Some(default)) => {
                let mut table = vec![default; universe.tuple_count(self.arity)?];
                let mut seen = HashSet::new();
                for e in entries {
                    if e.tuple.len() != self.arity {
                        return Err(Error::ArityMismatch {
                            expected: self.arity,
                            found: e.tuple.len(),
                        });
                    }
                    let rank = universe.rank(&e.tuple)?;
                    if !seen.insert(rank) {
                        return Err(Error::DuplicateAssignment(e.tuple.join(",")));
                    }
                    table[rank] = e.sign;
                }
                table
            }
            _ => {
                return Err(Error::Malformed(
                    "a quantity needs either `table` or `entries` with `default`".into(),
                ))
            }
        };
        Quantity::from_table(
            self.name.clone(),
            universe.clone(),
            self.arity,
            signs,
            table,
        )
    }
}

impl SystemDocument {
    pub fn from_parts(
        universe: &Universe,
        quantities: &[Quantity],
        systems: Vec<SystemRecord>,
    ) -> Self {
        SystemDocument {
            schema_version: SCHEMA_VERSION.to_string(),
            universe: universe.ids().to_vec(),
            quantities: quantities.iter().map(QuantityRecord::dense).collect(),
            systems,
        }
    }

    /// Checks every invariant and builds the quantities and systems.
    pub fn build(&self) -> Result<Model> {
        if self.schema_version != SCHEMA_VERSION {
            return Err(Error::Malformed(format!(
                "unsupported schema_version `{}`",
                self.schema_version
            )));
        }
        let universe = Universe::new(self.universe.iter().cloned()).map_err(invalid("universe"))?;
        let mut names = HashSet::new();
        let mut quantities = Vec::with_capacity(self.quantities.len());
        for rec in &self.quantities {
            let ctx = format!("quantity `{}`", rec.name);
            if !names.insert(rec.name.as_str()) {
                return Err(invalid(ctx)(Error::DuplicateName(rec.name.clone())));
            }
            quantities.push(rec.build(&universe).map_err(invalid(ctx))?);
        }
        let by_name: HashMap<&str, &Quantity> = quantities.iter().map(|q| (q.name(), q)).collect();
        let mut system_names = HashSet::new();
        let mut systems = Vec::with_capacity(self.systems.len());
        for rec in &self.systems {
            let ctx = format!("system `{}`", rec.name);
            if !system_names.insert(rec.name.as_str()) {
                return Err(invalid(ctx)(Error::DuplicateName(rec.name.clone())));
            }
            let system = (|| {
                let vertices = match &rec.vertices {
                    Some(v) => Universe::new(v.iter().cloned())?,
                    None => universe.clone(),
                };
                let measures = rec
                    .measures
                    .iter()
                    .map(|m| {
                        let q = by_name
                            .get(m.as_str())
                            .ok_or_else(|| Error::Malformed(format!("unknown quantity `{m}`")))?;
                        if rec.vertices.is_some() {
                            q.restrict(&vertices)
                        } else {
                            Ok((*q).clone())
                        }
                    })
                    .collect::<Result<Vec<_>>>()?;
                System::new(vertices, measures, rec.strict)
            })()
            .map_err(invalid(ctx))?;
            systems.push((rec.name.clone(), system));
        }
        Ok(Model {
            universe,
            quantities,
            systems,
        })
    }

    /// Canonical serialization: stable field order, pretty printed, with a
    /// trailing newline.
    pub fn to_json(&self) -> String {
        let mut out = serde_json::to_string_pretty(self).expect("documents serialize");
        out.push('\n');
        out
    }
}

/// Parses and validates a document.
pub fn parse_system_file(bytes: &[u8]) -> Result<SystemDocument> {
    let doc: SystemDocument = serde_json::from_slice(bytes).map_err(|e| Error::Parse {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    doc.build()?;
    Ok(doc)
}

pub fn load(bytes: &[u8]) -> Result<(SystemDocument, Model)> {
    let doc = parse_system_file(bytes)?;
    let model = doc.build()?;
    Ok((doc, model))
}

#[derive(Debug, Clone)]
pub struct Ingested {
    pub document: SystemDocument,
    pub warnings: Vec<String>,
}

/// Reads a CSV table with a header row as one unary quantity per non-key
/// column. Rows are the objects: keyed by `key_column` when given,
/// otherwise by row index. Cells are opaque strings; each sign is written
/// `column:value`.
pub fn ingest_csv(bytes: &[u8], key_column: Option<&str>) -> Result<Ingested> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .from_reader(bytes);
    let headers: Vec<String> = reader
        .headers()
        .map_err(|e| Error::Io(e.to_string()))?
        .iter()
        .map(str::to_string)
        .collect();
    let key = key_column
        .map(|k| {
            headers
                .iter()
                .position(|h| h == k)
                .ok_or_else(|| Error::UnknownColumn(k.to_string()))
        })
        .transpose()?;
    let mut rows: Vec<Vec<String>> = Vec::new();
    for record in reader.records() {
        let record = record.map_err(|e| match e.kind() {
            csv::ErrorKind::UnequalLengths {
                pos,
                expected_len,
                len,
            } => Error::RaggedRows {
                row: pos.as_ref().map_or(0, |p| p.record() as usize),
                found: *len as usize,
                expected: *expected_len as usize,
            },
            _ => Error::Io(e.to_string()),
        })?;
        rows.push(record.iter().map(str::to_string).collect());
    }
    let mut ids = Vec::with_capacity(rows.len());
    let mut seen = HashSet::new();
    for (i, row) in rows.iter().enumerate() {
        let id = match key {
            Some(k) => row[k].clone(),
            None => i.to_string(),
        };
        if !seen.insert(id.clone()) {
            return Err(Error::DuplicateKey(id));
        }
        ids.push(id);
    }
    let universe = Universe::new(ids)?;
    let mut quantities = Vec::new();
    let mut warnings = Vec::new();
    for (c, header) in headers.iter().enumerate() {
        if Some(c) == key {
            continue;
        }
        let q = Quantity::from_rule(header.clone(), universe.clone(), 1, |t| {
            let row = universe.position(t[0]).expect("own universe");
            format!("{header}:{}", rows[row][c])
        })?;
        if q.is_constant() {
            warnings.push(format!("column `{header}` is constant"));
        }
        quantities.push(q);
    }
    Ok(Ingested {
        document: SystemDocument::from_parts(&universe, &quantities, Vec::new()),
        warnings,
    })
}
