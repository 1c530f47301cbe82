//! Instance JSON schema and construction of oracle handles from it.

use std::path::Path;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::matroid::MatroidHandle;

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum MatroidSpec {
    Uniform {
        k: usize,
    },
    Partition {
        blocks: Vec<Vec<usize>>,
        capacities: Vec<usize>,
    },
    Graphic {
        num_vertices: usize,
        edges: Vec<(usize, usize)>,
    },
    Linear {
        p: u64,
        columns: Vec<Vec<u64>>,
    },
    Truncate {
        k: usize,
        inner: Box<MatroidSpec>,
    },
    FreeExtend {
        d: usize,
        inner: Box<MatroidSpec>,
    },
    Restrict {
        subset: Vec<usize>,
        inner: Box<MatroidSpec>,
    },
}

impl MatroidSpec {
    pub fn build(&self, n: usize, path: &str) -> Result<MatroidHandle> {
        let schema = |message: String| Error::Schema {
            path: path.to_string(),
            message,
        };
        match self {
            MatroidSpec::Uniform { k } => Ok(MatroidHandle::uniform(n, *k)),
            MatroidSpec::Partition { blocks, capacities } => {
                MatroidHandle::partition(n, blocks, capacities).map_err(|e| schema(e.to_string()))
            }
            MatroidSpec::Graphic {
                num_vertices,
                edges,
            } => {
                if edges.len() != n {
                    return Err(schema(format!(
                        "graphic matroid has {} edges, expected n = {n}",
                        edges.len()
                    )));
                }
                MatroidHandle::graphic(*num_vertices, edges).map_err(|e| schema(e.to_string()))
            }
            MatroidSpec::Linear { p, columns } => {
                if columns.len() != n {
                    return Err(schema(format!(
                        "linear matroid has {} columns, expected n = {n}",
                        columns.len()
                    )));
                }
                MatroidHandle::linear(*p, columns).map_err(|e| schema(e.to_string()))
            }
            MatroidSpec::Truncate { k, inner } => {
                Ok(inner.build(n, &format!("{path}.inner"))?.truncate(*k))
            }
            MatroidSpec::FreeExtend { d, inner } => {
                Ok(inner.build(n, &format!("{path}.inner"))?.free_extend(*d))
            }
            MatroidSpec::Restrict { subset, inner } => inner
                .build(n, &format!("{path}.inner"))?
                .restrict(subset)
                .map_err(|e| schema(e.to_string())),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Instance {
    pub n: usize,
    pub matroid1: MatroidSpec,
    pub matroid2: MatroidSpec,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub weights: Option<Vec<i64>>,
}

impl Instance {
    pub fn matroids(&self) -> Result<(MatroidHandle, MatroidHandle)> {
        let m1 = self.matroid1.build(self.n, "matroid1")?;
        let m2 = self.matroid2.build(self.n, "matroid2")?;
        if m1.ground() != m2.ground() {
            return Err(Error::Schema {
                path: "matroid2".into(),
                message: "ground set differs from matroid1".into(),
            });
        }
        if let Some(w) = &self.weights {
            let need = m1.universe();
            if w.len() < need {
                return Err(Error::Schema {
                    path: "weights".into(),
                    message: format!("{} weights given, {need} element ids used", w.len()),
                });
            }
        }
        Ok((m1, m2))
    }

    pub fn from_json(text: &str, path: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Schema {
            path: format!("{path}:{}:{}", e.line(), e.column()),
            message: e.to_string(),
        })
    }

    pub fn from_path(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Self::from_json(&text, &path.display().to_string())
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("instance serialization cannot fail")
    }

    /// Hash of the canonical (compact) JSON encoding.
    pub fn sha256(&self) -> String {
        let compact = serde_json::to_string(self).expect("instance serialization cannot fail");
        let digest = Sha256::digest(compact.as_bytes());
        digest.iter().map(|b| format!("{b:02x}")).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trips_through_json() {
        let inst = Instance {
            n: 4,
            matroid1: MatroidSpec::Uniform { k: 2 },
            matroid2: MatroidSpec::Partition {
                blocks: vec![vec![0, 1], vec![2, 3]],
                capacities: vec![1, 1],
            },
            weights: Some(vec![3, 1, 4, 1]),
        };
        let back = Instance::from_json(&inst.to_json(), "<test>").unwrap();
        assert_eq!(back.sha256(), inst.sha256());
        let (m1, m2) = back.matroids().unwrap();
        assert_eq!(m1.raw_matroid_rank(), 2);
        assert_eq!(m2.raw_matroid_rank(), 2);
    }

    #[test]
    fn schema_error_carries_path() {
        let bad =
            r#"{"n": 2, "matroid1": {"type": "uniform"}, "matroid2": {"type": "uniform", "k": 1}}"#;
        match Instance::from_json(bad, "inst.json") {
            Err(Error::Schema { path, .. }) => assert!(path.starts_with("inst.json")),
            other => panic!("expected schema error, got {other:?}"),
        }
    }

    #[test]
    fn mismatched_partition_rejected() {
        let inst = Instance {
            n: 3,
            matroid1: MatroidSpec::Partition {
                blocks: vec![vec![0, 1]],
                capacities: vec![1],
            },
            matroid2: MatroidSpec::Uniform { k: 1 },
            weights: None,
        };
        assert!(matches!(inst.matroids(), Err(Error::Schema { .. })));
    }

    #[test]
    fn wrapper_specs_build() {
        let inst = Instance {
            n: 3,
            matroid1: MatroidSpec::Truncate {
                k: 1,
                inner: Box::new(MatroidSpec::Uniform { k: 3 }),
            },
            matroid2: MatroidSpec::Uniform { k: 2 },
            weights: None,
        };
        // truncation keeps the ground set, so the pair is valid
        let (m1, _) = inst.matroids().unwrap();
        assert_eq!(m1.raw_matroid_rank(), 1);
    }
}
