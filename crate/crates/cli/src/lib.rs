//! Manifest loading, check evaluation and reporting behind the `tsmap`
//! command line tool.

pub mod checks;
pub mod fixtures;
pub mod manifest;
pub mod report;
pub mod runner;

use manifest::{Manifest, ManifestError};

/// Loads a manifest from a path or from `builtin:NAME`.
pub fn load(source: &str) -> Result<Manifest, ManifestError> {
    match source.strip_prefix("builtin:") {
        Some(name) => {
            let text = fixtures::builtin(name).ok_or_else(|| {
                let names: Vec<&str> = fixtures::BUILTIN.iter().map(|(n, _)| *n).collect();
                ManifestError::Invalid(format!("no builtin manifest `{name}` (available: {})", names.join(", ")))
            })?;
            Manifest::from_str(text)
        }
        None => Manifest::from_path(source),
    }
}
