//! Input file schemas. All JSON indices are 0-based and matrices are arrays
//! of integer row arrays.

use std::collections::BTreeMap;
use std::path::Path;

use serde::Deserialize;

use rinf_core::IntMatrix;

#[derive(Debug, Deserialize)]
pub struct GroupInputFile {
    pub degree: usize,
    pub generators: Vec<Vec<Vec<i64>>>,
    /// Declared facts with provenance notes; echoed into certificates as
    /// assumptions, never used as verified facts.
    #[serde(default)]
    pub declared: BTreeMap<String, serde_json::Value>,
}

#[derive(Debug, Deserialize)]
pub struct TorusInputFile {
    pub matrix: Vec<Vec<i64>>,
}

#[derive(Debug, Deserialize)]
pub struct FiniteInputFile {
    pub table: Vec<Vec<usize>>,
    pub automorphism: Vec<usize>,
}

pub fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T, String> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| format!("cannot read {}: {e}", path.display()))?;
    serde_json::from_str(&text).map_err(|e| format!("cannot parse {}: {e}", path.display()))
}

pub fn parse_matrix(rows: &[Vec<i64>]) -> Result<IntMatrix, String> {
    let c = rows.first().map(Vec::len).unwrap_or(0);
    if rows.is_empty() || c == 0 || rows.iter().any(|r| r.len() != c) {
        return Err("matrix rows are empty or ragged".to_string());
    }
    let refs: Vec<&[i64]> = rows.iter().map(Vec::as_slice).collect();
    Ok(IntMatrix::from_i64_rows(&refs))
}

impl GroupInputFile {
    pub fn generator_matrices(&self) -> Result<Vec<IntMatrix>, String> {
        self.generators
            .iter()
            .enumerate()
            .map(|(i, rows)| {
                let m = parse_matrix(rows).map_err(|e| format!("generator {i}: {e}"))?;
                if m.rows() != self.degree || m.cols() != self.degree {
                    return Err(format!(
                        "generator {i} is {}x{}, expected degree {}",
                        m.rows(),
                        m.cols(),
                        self.degree
                    ));
                }
                Ok(m)
            })
            .collect()
    }

    /// Declared facts as strings, for the certificate's assumption block.
    pub fn assumptions(&self) -> BTreeMap<String, String> {
        self.declared
            .iter()
            .map(|(k, v)| {
                let rendered = match v {
                    serde_json::Value::String(s) => s.clone(),
                    other => other.to_string(),
                };
                (k.clone(), rendered)
            })
            .collect()
    }
}
