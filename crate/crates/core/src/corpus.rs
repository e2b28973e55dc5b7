//! The teleoperated-driving case study shipped under `corpus/`.

use std::path::{Path, PathBuf};

use thiserror::Error;

use crate::diagnostic::{has_errors, Diagnostic};
use crate::dsl::{parse, SourceFile};
use crate::model::StpaModel;

/// Declaration counts the corpus is expected to produce.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ExpectedCounts {
    pub losses: usize,
    pub hazards: usize,
    pub constraints: usize,
    pub entities: usize,
    pub variables: usize,
    pub domain_sizes: [usize; 5],
    pub ucas: usize,
    pub causal_factors: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CorpusManifest {
    /// Load order; later files reference declarations of earlier ones.
    pub files: [&'static str; 6],
    pub expected_counts: ExpectedCounts,
}

pub const MANIFEST: CorpusManifest = CorpusManifest {
    files: [
        "purpose.stpa",
        "structure_abstract.stpa",
        "structure_detailed.stpa",
        "variables.stpa",
        "ucas_brake.stpa",
        "causal_factors.stpa",
    ],
    expected_counts: ExpectedCounts {
        losses: 2,
        hazards: 4,
        constraints: 2,
        entities: 15,
        variables: 5,
        domain_sizes: [2, 4, 2, 2, 2],
        ucas: 17,
        causal_factors: 30,
    },
};

#[derive(Debug, Error)]
pub enum CorpusError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("corpus has {} error diagnostic(s); first: {}", .0.iter().filter(|d| d.is_error()).count(), .0.iter().find(|d| d.is_error()).map(ToString::to_string).unwrap_or_default())]
    Invalid(Vec<Diagnostic>),
}

/// Directory of the corpus in a source checkout.
pub fn corpus_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../corpus")
}

/// Paths of the corpus files in load order.
pub fn corpus_files(dir: &Path) -> Vec<PathBuf> {
    MANIFEST.files.iter().map(|f| dir.join(f)).collect()
}

/// Source files of the corpus in `dir`, with paths shown as `corpus/<name>`.
pub fn read_corpus(dir: &Path) -> Result<Vec<SourceFile>, CorpusError> {
    MANIFEST
        .files
        .iter()
        .map(|name| {
            let path = dir.join(name);
            let text = std::fs::read_to_string(&path).map_err(|source| CorpusError::Io { path, source })?;
            Ok(SourceFile::new(format!("corpus/{name}"), text))
        })
        .collect()
}

pub fn load_corpus_from(dir: &Path) -> Result<StpaModel, CorpusError> {
    let (model, diags) = parse(&read_corpus(dir)?);
    if has_errors(&diags) {
        return Err(CorpusError::Invalid(diags));
    }
    Ok(model)
}

pub fn load_corpus() -> Result<StpaModel, CorpusError> {
    load_corpus_from(&corpus_dir())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn missing_directory_fails_to_load() {
        let err = load_corpus_from(Path::new("/nonexistent/stpa-corpus")).unwrap_err();
        assert!(matches!(err, CorpusError::Io { .. }));
        assert!(err.to_string().contains("purpose.stpa"));
    }
}
