//! Regression fixtures for computed table values.
//!
//! A degree's counts are written the first time they are computed and
//! compared on every later run.

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use hgs_core::grouplib::GROUPLIB_VERSION;
use hgs_core::hgs::ALGORITHM_VERSION;
use serde::{Deserialize, Serialize};

use crate::commands::CliError;

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct FixtureRow {
    pub trans_classes: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub no_hgs: Option<usize>,
    /// How the values were obtained, e.g. `"computed"`.
    pub origin: String,
    pub grouplib_version: u32,
    pub algorithm_version: u32,
}

#[derive(Debug, Serialize, Deserialize)]
struct FixtureFile {
    format: String,
    degrees: BTreeMap<u64, FixtureRow>,
}

fn load(path: &Path) -> Result<FixtureFile, CliError> {
    match fs::read_to_string(path) {
        Ok(text) => {
            let f: FixtureFile = serde_json::from_str(&text).map_err(|e| {
                CliError::usage(format!("malformed fixture file {}: {e}", path.display()))
            })?;
            if f.format != "hgs-fixtures" {
                return Err(CliError::usage(format!(
                    "{} is not a fixture file",
                    path.display()
                )));
            }
            Ok(f)
        }
        Err(e) if e.kind() == std::io::ErrorKind::NotFound => Ok(FixtureFile {
            format: "hgs-fixtures".into(),
            degrees: BTreeMap::new(),
        }),
        Err(e) => Err(CliError::resource(format!(
            "cannot read {}: {e}",
            path.display()
        ))),
    }
}

/// Compares against the stored row for `degree`, filling in anything not yet
/// recorded. Returns the mismatches.
pub fn check_or_seed(
    path: &Path,
    degree: u64,
    trans_classes: usize,
    no_hgs: Option<usize>,
) -> Result<Vec<String>, CliError> {
    let mut file = load(path)?;
    let mut mismatches = Vec::new();
    let mut changed = false;
    match file.degrees.get_mut(&degree) {
        Some(row) => {
            if row.trans_classes != trans_classes {
                mismatches.push(format!(
                    "degree {degree}: {trans_classes} transitive classes, fixture has {}",
                    row.trans_classes
                ));
            }
            match (row.no_hgs, no_hgs) {
                (Some(a), Some(b)) if a != b => mismatches.push(format!(
                    "degree {degree}: {b} no-HGS entries, fixture has {a}"
                )),
                (None, Some(b)) if mismatches.is_empty() => {
                    row.no_hgs = Some(b);
                    changed = true;
                }
                _ => {}
            }
        }
        None => {
            file.degrees.insert(
                degree,
                FixtureRow {
                    trans_classes,
                    no_hgs,
                    origin: "computed".into(),
                    grouplib_version: GROUPLIB_VERSION,
                    algorithm_version: ALGORITHM_VERSION,
                },
            );
            changed = true;
        }
    }
    if changed {
        if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
            fs::create_dir_all(parent).map_err(|e| CliError::resource(e.to_string()))?;
        }
        let mut text =
            serde_json::to_string_pretty(&file).map_err(|e| CliError::resource(e.to_string()))?;
        text.push('\n');
        fs::write(path, text)
            .map_err(|e| CliError::resource(format!("cannot write {}: {e}", path.display())))?;
    }
    Ok(mismatches)
}
