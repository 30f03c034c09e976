//! Pair files: `{"degree": n, "G": [...], "H": [...], "one_based": false}`.
//!
//! Each permutation is either an image array or a cycle string.

use std::path::Path;

use hgs_core::{PermGroup, Permutation};
use serde::Deserialize;
use serde_json::Value;

use crate::commands::CliError;

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawPair {
    degree: usize,
    #[serde(rename = "G")]
    g: Vec<Value>,
    #[serde(rename = "H")]
    h: Vec<Value>,
    #[serde(default)]
    one_based: bool,
}

pub struct PairInput {
    pub g: PermGroup,
    pub h: PermGroup,
}

fn perm(
    v: &Value,
    degree: usize,
    one_based: bool,
    what: &str,
    i: usize,
) -> Result<Permutation, CliError> {
    let parsed = match v {
        Value::String(s) => Permutation::parse(s, degree, one_based),
        Value::Array(_) => Permutation::parse(&v.to_string(), degree, one_based),
        _ => {
            return Err(CliError::usage(format!(
                "{what}[{i}]: expected an image array or a cycle string"
            )))
        }
    };
    parsed.map_err(|e| CliError::usage(format!("{what}[{i}]: {e}")))
}

pub fn parse_pair(text: &str) -> Result<PairInput, CliError> {
    let raw: RawPair = serde_json::from_str(text)
        .map_err(|e| CliError::usage(format!("malformed pair file: {e}")))?;
    if raw.degree == 0 {
        return Err(CliError::usage("degree must be positive"));
    }
    let gens = |vals: &[Value], what: &str| -> Result<Vec<Permutation>, CliError> {
        vals.iter()
            .enumerate()
            .map(|(i, v)| perm(v, raw.degree, raw.one_based, what, i))
            .collect()
    };
    let g = PermGroup::new(raw.degree, gens(&raw.g, "G")?)
        .map_err(|e| CliError::usage(format!("G: {e}")))?;
    let h = PermGroup::new(raw.degree, gens(&raw.h, "H")?)
        .map_err(|e| CliError::usage(format!("H: {e}")))?;
    if !g.contains_group(&h) {
        return Err(CliError::usage("H is not a subgroup of G"));
    }
    Ok(PairInput { g, h })
}

pub fn read_pair(path: &Path) -> Result<PairInput, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::usage(format!("cannot read {}: {e}", path.display())))?;
    parse_pair(&text)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mixed_notation() {
        let p = parse_pair(
            r#"{"degree": 4, "G": ["(1,2,3,4)", [2,1,4,3]], "H": ["(1,3)"], "one_based": true}"#,
        );
        let p = p.ok().unwrap();
        assert_eq!(p.g.order(), 8);
        assert_eq!(p.h.order(), 2);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(parse_pair("{").is_err());
        assert!(parse_pair(r#"{"degree": 3, "G": ["(0,1,2)"], "H": ["(0,1)"]}"#).is_err());
        assert!(parse_pair(r#"{"degree": 3, "G": [7], "H": []}"#).is_err());
        assert!(parse_pair(r#"{"degree": 3, "G": [], "H": [], "extra": 1}"#).is_err());
    }
}
