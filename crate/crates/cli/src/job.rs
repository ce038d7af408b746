//! Job files, input loading and the provenance block.

use std::collections::BTreeMap;
use std::fmt;
use std::path::{Path, PathBuf};

use elq_core::model::{Concept, Database, Individual, Label, LabeledExampleSet, ModelError, Ontology, PointedDatabase};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

/// A failure with its exit code: 1 for domain errors, 2 for usage and
/// parse errors.
#[derive(Debug)]
pub struct CliError {
    pub code: u8,
    pub message: String,
}

impl CliError {
    pub fn usage(message: impl Into<String>) -> Self {
        CliError {
            code: 2,
            message: message.into(),
        }
    }

    pub fn domain(message: impl Into<String>) -> Self {
        CliError {
            code: 1,
            message: message.into(),
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

pub type Result<T> = std::result::Result<T, CliError>;

/// Prefixes a model error with its file; positionless errors point at 1:1.
pub fn parse_error(file: &str, e: ModelError) -> CliError {
    match e {
        ModelError::Syntax { line, column, message } => CliError::usage(format!("{file}:{line}:{column}: {message}")),
        other => CliError::usage(format!("{file}:1:1: {other}")),
    }
}

pub fn parse_concept(text: &str, what: &str) -> Result<Concept> {
    text.parse().map_err(|e| parse_error(what, e))
}

pub fn parse_individual(text: &str) -> Result<Individual> {
    Individual::new(text).map_err(|e| CliError::usage(e.to_string()))
}

/// Every input file read, with its digest, for the provenance block.
#[derive(Debug, Default)]
pub struct Inputs {
    files: BTreeMap<String, String>,
}

impl Inputs {
    pub fn read(&mut self, path: &Path) -> Result<String> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::domain(format!("{}: {e}", path.display())))?;
        self.files.insert(path.display().to_string(), format!("{:x}", Sha256::digest(text.as_bytes())));
        Ok(text)
    }

    pub fn database(&mut self, path: &Path) -> Result<Database> {
        let text = self.read(path)?;
        Database::parse(&text).map_err(|e| parse_error(&path.display().to_string(), e))
    }

    pub fn ontology(&mut self, path: Option<&Path>) -> Result<Ontology> {
        match path {
            None => Ok(Ontology::new()),
            Some(p) => {
                let text = self.read(p)?;
                Ontology::parse(&text).map_err(|e| parse_error(&p.display().to_string(), e))
            }
        }
    }

    pub fn provenance(&self, seed: u64) -> Value {
        let inputs: Vec<Value> = self.files.iter().map(|(p, h)| json!({ "path": p, "sha256": h })).collect();
        json!({
            "tool": "elq-forge",
            "version": env!("CARGO_PKG_VERSION"),
            "seed": seed,
            "command": std::env::args().skip(1).collect::<Vec<_>>(),
            "inputs": inputs,
        })
    }
}

#[derive(Clone, Debug, Default, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct JobOptions {
    pub max_rounds: Option<u32>,
    pub timeout_s: Option<f64>,
    pub schedule: Option<String>,
    pub symmetry: Option<bool>,
    /// Unraveling depth for the product baseline.
    pub depth: Option<usize>,
    pub max_frontier: Option<usize>,
}

#[derive(Clone, Debug, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct JobExample {
    pub db: PathBuf,
    pub individual: String,
    pub label: String,
}

/// `{ontology, examples, target?, options}`; paths are relative to the
/// job file.
#[derive(Clone, Debug, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct JobFile {
    #[serde(default)]
    pub ontology: Option<PathBuf>,
    pub examples: Vec<JobExample>,
    #[serde(default)]
    pub target: Option<String>,
    #[serde(default)]
    pub options: JobOptions,
}

pub struct Job {
    pub examples: LabeledExampleSet,
    pub ontology: Ontology,
    pub target: Option<Concept>,
    pub options: JobOptions,
}

fn label(s: &str, file: &str) -> Result<Label> {
    match s {
        "+" | "positive" => Ok(Label::Positive),
        "-" | "negative" => Ok(Label::Negative),
        _ => Err(CliError::usage(format!("{file}: label {s:?} must be '+' or '-'"))),
    }
}

pub fn load_job(path: &Path, inputs: &mut Inputs) -> Result<Job> {
    let name = path.display().to_string();
    let text = inputs.read(path)?;
    let raw: JobFile = serde_json::from_str(&text)
        .map_err(|e| CliError::usage(format!("{name}:{}:{}: {e}", e.line(), e.column())))?;
    let base = path.parent().unwrap_or(Path::new("."));
    let ontology = inputs.ontology(raw.ontology.as_ref().map(|p| base.join(p)).as_deref())?;
    let mut examples = LabeledExampleSet::new();
    let mut cache: BTreeMap<PathBuf, Database> = BTreeMap::new();
    for ex in &raw.examples {
        let p = base.join(&ex.db);
        let db = match cache.get(&p) {
            Some(db) => db.clone(),
            None => {
                let db = inputs.database(&p)?;
                cache.insert(p.clone(), db.clone());
                db
            }
        };
        let root = parse_individual(&ex.individual)?;
        examples.push(PointedDatabase::new(db, root), label(&ex.label, &name)?);
    }
    let target = raw.target.as_deref().map(|t| parse_concept(t, &format!("{name} (target)"))).transpose()?;
    Ok(Job {
        examples,
        ontology,
        target,
        options: raw.options,
    })
}
