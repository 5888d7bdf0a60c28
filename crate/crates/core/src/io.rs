//! JSON instance and allocation files.
//!
//! An instance file holds `m`, `n`, the row-major `weights`, and optionally
//! `expertise` and `revenue` (then `weights` must equal their product),
//! `bounds`, the generator `seed` and an `id`. An allocation file is an
//! array of `m` arrays of zero-based product indices. See `docs/` for the
//! schemas.

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::instance::{Allocation, CardinalityBounds, Instance};
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InstanceFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub id: Option<String>,
    pub m: usize,
    pub n: usize,
    pub weights: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub expertise: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub revenue: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bounds: Option<CardinalityBounds>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

impl InstanceFile {
    pub fn from_instance(inst: &Instance) -> Self {
        InstanceFile {
            id: None,
            m: inst.resellers(),
            n: inst.products(),
            weights: inst.weights().to_vec(),
            expertise: inst.expertise().map(<[f64]>::to_vec),
            revenue: inst.revenue().map(<[f64]>::to_vec),
            bounds: None,
            seed: None,
        }
    }

    /// Validates the contents and builds the instance.
    pub fn instance(&self) -> Result<Instance> {
        if let Some(b) = &self.bounds {
            b.validate()?;
        }
        Instance::with_decomposition(self.m, self.n, self.weights.clone(), self.expertise.clone(), self.revenue.clone())
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("instance files always serialise");
        s.push('\n');
        s
    }
}

fn parse_json<T: for<'de> Deserialize<'de>>(text: &str, path: &Path) -> Result<T> {
    serde_json::from_str(text).map_err(|source| Error::Parse { path: path.to_path_buf(), source })
}

pub fn parse_instance_file(text: &str, path: &Path) -> Result<InstanceFile> {
    let file: InstanceFile = parse_json(text, path)?;
    file.instance()?;
    Ok(file)
}

pub fn read_instance_file(path: &Path) -> Result<InstanceFile> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_instance_file(&text, path)
}

pub fn write_instance_file(path: &Path, file: &InstanceFile) -> Result<()> {
    fs::write(path, file.to_json()).map_err(|e| Error::io(path, e))
}

/// One bundle per line, e.g. `[\n  [0,2],\n  [1]\n]`.
pub fn allocation_json(alloc: &Allocation) -> String {
    let lines: Vec<String> = alloc
        .to_vecs()
        .iter()
        .map(|b| format!("  {}", serde_json::to_string(b).expect("index lists serialise")))
        .collect();
    if lines.is_empty() {
        "[]\n".to_string()
    } else {
        format!("[\n{}\n]\n", lines.join(",\n"))
    }
}

/// Parses an allocation over `n` products; indices must be in range and
/// distinct within a bundle.
pub fn parse_allocation(text: &str, n: usize, path: &Path) -> Result<Allocation> {
    let bundles: Vec<Vec<usize>> = parse_json(text, path)?;
    Allocation::from_bundles(n, bundles)
}

pub fn read_allocation(path: &Path, n: usize) -> Result<Allocation> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_allocation(&text, n, path)
}

pub fn write_allocation(path: &Path, alloc: &Allocation) -> Result<()> {
    fs::write(path, allocation_json(alloc)).map_err(|e| Error::io(path, e))
}
