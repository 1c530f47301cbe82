//! The JSON run report emitted by `solve` and consumed by `verify`.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DualSets {
    pub a: Vec<usize>,
    pub b: Vec<usize>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RunReport {
    pub alg: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub oracle: Option<String>,
    pub instance_sha256: String,
    pub n: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub eps: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub delta: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    pub solution: Vec<usize>,
    pub size: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub weight: Option<i64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub scales: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub dual: Option<DualSets>,
    /// Additive slack the dual is declared to satisfy (0 = tight).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub certified_slack: Option<u64>,
    pub queries_ind: u64,
    pub queries_rank: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rounds: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub coverage: Option<Vec<f64>>,
    pub wall_ms: u64,
}

impl RunReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serialization cannot fail")
    }

    pub fn from_path(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        serde_json::from_str(&text).map_err(|e| Error::Schema {
            path: format!("{}:{}:{}", path.display(), e.line(), e.column()),
            message: e.to_string(),
        })
    }
}
