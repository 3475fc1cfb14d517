//! Rendering of command results as JSON, CSV or a directory of DOT files.

use std::collections::BTreeSet;
use std::io::Write;
use std::path::Path;

use anyhow::{bail, Context, Result};
use phi4_core::json::Envelope;
use phi4_core::CanonicalKey;
use serde::Serialize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Format {
    Json,
    Csv,
    DotDir,
}

/// Header plus rows of already formatted cells.
#[derive(Default)]
pub struct Table {
    pub header: Vec<&'static str>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(header: &[&'static str]) -> Self {
        Table {
            header: header.to_vec(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }
}

pub struct Output {
    pub result: serde_json::Value,
    pub table: Option<Table>,
    pub graphs: BTreeSet<CanonicalKey>,
    /// False when a verification inside the command failed.
    pub passed: bool,
}

impl Output {
    pub fn new(result: impl Serialize) -> Result<Self> {
        Ok(Output {
            result: serde_json::to_value(result)?,
            table: None,
            graphs: BTreeSet::new(),
            passed: true,
        })
    }

    pub fn with_table(mut self, table: Table) -> Self {
        self.table = Some(table);
        self
    }

    pub fn with_graphs(mut self, graphs: impl IntoIterator<Item = CanonicalKey>) -> Self {
        self.graphs.extend(graphs.into_iter().filter(|k| !k.is_unit()));
        self
    }

    pub fn with_status(mut self, passed: bool) -> Self {
        self.passed = passed;
        self
    }
}

pub fn write_json<C: Serialize>(out: &mut impl Write, config: &C, result: &serde_json::Value) -> Result<()> {
    writeln!(out, "{}", Envelope::new(config, result).to_string_pretty()?)?;
    Ok(())
}

pub fn write_csv(out: &mut impl Write, table: &Table) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(&table.header)?;
    for row in &table.rows {
        w.write_record(row)?;
    }
    w.flush()?;
    Ok(())
}

/// One `<key>.dot` file per class; returns the written file names.
pub fn write_dot_dir(dir: &Path, graphs: &BTreeSet<CanonicalKey>) -> Result<Vec<String>> {
    if graphs.is_empty() {
        bail!("this command produces no diagram classes to export");
    }
    std::fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    let mut names = Vec::new();
    for key in graphs {
        let name = format!("{}.dot", key.to_hex());
        std::fs::write(dir.join(&name), key.to_graph().to_dot())
            .with_context(|| format!("writing {name}"))?;
        names.push(name);
    }
    Ok(names)
}
