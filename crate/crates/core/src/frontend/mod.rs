//! Source frontend: Java-like files in, [`ClassModel`] out.

mod lexer;
mod parser;

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use walkdir::WalkDir;

pub use lexer::{tokenize, Token, TokenKind, KEYWORDS};
pub use parser::{parse_unit, SourceUnit, IMPLICIT_ROOT};

use crate::error::{Error, FrontendError};
use crate::model::{self, ClassDecl, ClassModel};

/// Default extension filter for source discovery.
pub const DEFAULT_EXTENSION: &str = "java";

/// Tokenizes and parses one file's contents.
pub fn parse_source(source: &str, path: &str) -> Result<SourceUnit, FrontendError> {
    tokenize(source)
        .and_then(|tokens| parse_unit(&tokens, path))
        .map_err(|source| FrontendError::Syntax {
            path: path.to_string(),
            source,
        })
}

/// Merges units into one validated model. The result does not depend on the
/// order of `units`.
pub fn build_model(units: &[SourceUnit]) -> Result<ClassModel, FrontendError> {
    let mut sorted: Vec<&SourceUnit> = units.iter().collect();
    sorted.sort_by(|a, b| a.path.cmp(&b.path));

    let mut owners: BTreeMap<&str, &str> = BTreeMap::new();
    let mut classes: Vec<ClassDecl> = Vec::new();
    for unit in sorted {
        for class in &unit.declared_classes {
            if let Some(first) = owners.insert(&class.name, &unit.path) {
                return Err(FrontendError::DuplicateClass {
                    name: class.name.clone(),
                    first: first.to_string(),
                    second: unit.path.clone(),
                });
            }
            classes.push(class.clone());
        }
    }
    // Receivers and superclasses are already names; anything undeclared lands
    // in `externals` when the model is finalized.
    Ok(model::finalize(classes)?)
}

/// Files under `roots` whose extension matches `extension`, sorted. A root that
/// is itself a file is taken as-is.
pub fn discover_sources(roots: &[PathBuf], extension: &str) -> Result<Vec<PathBuf>, Error> {
    let ext = extension.trim_start_matches('.');
    let mut files = Vec::new();
    for root in roots {
        if root.is_file() {
            files.push(root.clone());
            continue;
        }
        if !root.exists() {
            return Err(Error::Io {
                path: root.clone(),
                source: std::io::Error::new(
                    std::io::ErrorKind::NotFound,
                    "no such file or directory",
                ),
            });
        }
        for entry in WalkDir::new(root).follow_links(true) {
            let entry = entry.map_err(|e| Error::Io {
                path: e
                    .path()
                    .map(Path::to_path_buf)
                    .unwrap_or_else(|| root.clone()),
                source: e.into(),
            })?;
            if entry.file_type().is_file()
                && entry.path().extension().and_then(|e| e.to_str()) == Some(ext)
            {
                files.push(entry.into_path());
            }
        }
    }
    files.sort();
    files.dedup();
    Ok(files)
}

/// Reads and parses files in parallel, then merges them.
pub fn model_from_files(files: &[PathBuf]) -> Result<ClassModel, Error> {
    let units = files
        .par_iter()
        .map(|path| {
            let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
                path: path.clone(),
                source,
            })?;
            parse_source(&text, &path.display().to_string()).map_err(Error::from)
        })
        .collect::<Result<Vec<_>, Error>>()?;
    Ok(build_model(&units)?)
}
