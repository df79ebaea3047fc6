//! Report envelopes, output rendering and file input.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use clap::ValueEnum;
use kstlist_core::graph::{Graph, GraphFormat};
use serde::Serialize;
use serde_json::Value;

pub const FORMAT_VERSION: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Human,
    Json,
    Csv,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum FileFormat {
    #[value(name = "edgelist")]
    EdgeList,
    Json,
}

impl FileFormat {
    pub fn core(self) -> GraphFormat {
        match self {
            FileFormat::EdgeList => GraphFormat::EdgeList,
            FileFormat::Json => GraphFormat::Json,
        }
    }

    /// `json` for `.json` paths, the edge-list format otherwise.
    pub fn for_path(path: &Path) -> FileFormat {
        match path.extension().and_then(|e| e.to_str()) {
            Some(ext) if ext.eq_ignore_ascii_case("json") => FileFormat::Json,
            _ => FileFormat::EdgeList,
        }
    }
}

/// Every parameter that determines a report's content. Thread counts are
/// left out: they do not change results in deterministic mode.
#[derive(Clone, Debug, Serialize)]
pub struct RunConfig {
    pub subcommand: &'static str,
    pub params: BTreeMap<&'static str, Value>,
}

impl RunConfig {
    pub fn new(subcommand: &'static str) -> RunConfig {
        RunConfig {
            subcommand,
            params: BTreeMap::new(),
        }
    }

    pub fn set(&mut self, key: &'static str, value: impl Serialize) -> &mut RunConfig {
        self.params.insert(key, serde_json::to_value(value).expect("parameters serialize"));
        self
    }
}

#[derive(Serialize)]
pub struct Report<'a, T: Serialize> {
    pub format_version: u32,
    pub config: &'a RunConfig,
    pub result: &'a T,
}

pub fn json_report<T: Serialize>(config: &RunConfig, result: &T) -> String {
    let report = Report {
        format_version: FORMAT_VERSION,
        config,
        result,
    };
    let mut text = serde_json::to_string_pretty(&report).expect("reports serialize");
    text.push('\n');
    text
}

/// Writes `text` to `out`, or to standard output.
pub fn emit(out: Option<&PathBuf>, text: &str) -> Result<()> {
    match out {
        Some(path) => fs::write(path, text).with_context(|| format!("writing {}", path.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

pub fn read_text(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

pub fn read_graph(path: &Path, format: Option<FileFormat>) -> Result<Graph> {
    let format = format.unwrap_or_else(|| FileFormat::for_path(path));
    let parsed = Graph::parse(&read_text(path)?, format.core()).with_context(|| format!("parsing {}", path.display()))?;
    for w in &parsed.warnings {
        eprintln!("warning: {}: {w}", path.display());
    }
    Ok(parsed.graph)
}

pub fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T> {
    serde_json::from_str(&read_text(path)?).with_context(|| format!("parsing {}", path.display()))
}

pub fn write_graph(path: &Path, g: &Graph) -> Result<()> {
    let text = g.to_text(FileFormat::for_path(path).core());
    fs::write(path, text).with_context(|| format!("writing {}", path.display()))
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    fs::write(path, text).with_context(|| format!("writing {}", path.display()))
}
