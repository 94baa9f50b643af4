//! Dataset ingestion: line-delimited JSON records validated into [`Sample`]s.
//!
//! The on-disk record is deliberately dataset-agnostic:
//!
//! ```json
//! {"id": "s1", "code": "...", "language": "java",
//!  "reference": "...", "target_language": "python", "tests": [...]}
//! ```
//!
//! `reference`, `target_language`, and `tests` are optional; translation
//! records must carry `target_language`. Records violating sample
//! invariants are rejected with their line numbers.

use std::collections::BTreeSet;
use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::metrics::TestCase;
use crate::orchestrator::Sample;
use crate::record::TaskKind;

/// Summary header for an ingested dataset.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Manifest {
    pub name: String,
    pub task_kind: TaskKind,
    pub count: usize,
}

/// A validated, in-memory dataset.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    pub samples: Vec<Sample>,
    pub manifest: Manifest,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum IngestError {
    #[error("line {line}: {message}")]
    ParseError { line: usize, message: String },
    #[error("line {line}: duplicate sample id `{id}`")]
    DuplicateId { line: usize, id: String },
    #[error("failed to read dataset: {0}")]
    Io(String),
}

/// On-disk record shape.
#[derive(Debug, Deserialize)]
struct RawRecord {
    id: String,
    code: String,
    language: String,
    #[serde(default)]
    reference: Option<String>,
    #[serde(default)]
    target_language: Option<String>,
    #[serde(default)]
    tests: Vec<TestCase>,
}

impl RawRecord {
    fn into_sample(self, task_kind: TaskKind) -> Result<Sample, String> {
        let sample = Sample {
            sample_id: self.id,
            task_kind,
            source_code: self.code,
            source_language: self.language,
            target_language: self.target_language,
            reference: self.reference,
            tests: self.tests,
        };
        sample.validate()?;
        Ok(sample)
    }
}

/// Parse a line-delimited dataset file, validating every record. The first
/// violation is reported with its 1-based line number.
pub fn ingest_dataset(path: &Path, task_kind: TaskKind) -> Result<Dataset, IngestError> {
    let text = std::fs::read_to_string(path).map_err(|e| IngestError::Io(e.to_string()))?;
    let name = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "dataset".to_string());
    let mut samples = Vec::new();
    let mut seen = BTreeSet::new();
    for (idx, line) in text.lines().enumerate() {
        let line_no = idx + 1;
        if line.trim().is_empty() {
            continue;
        }
        let raw: RawRecord =
            serde_json::from_str(line).map_err(|e| IngestError::ParseError {
                line: line_no,
                message: e.to_string(),
            })?;
        if !seen.insert(raw.id.clone()) {
            return Err(IngestError::DuplicateId {
                line: line_no,
                id: raw.id,
            });
        }
        let sample = raw
            .into_sample(task_kind)
            .map_err(|message| IngestError::ParseError {
                line: line_no,
                message,
            })?;
        samples.push(sample);
    }
    if samples.is_empty() {
        log::warn!("dataset {} contains no samples", path.display());
    }
    let manifest = Manifest {
        name,
        task_kind,
        count: samples.len(),
    };
    Ok(Dataset { samples, manifest })
}
