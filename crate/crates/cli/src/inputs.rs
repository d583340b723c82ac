//! JSON inputs of `level-witness`.

use std::path::Path;

use anyhow::{Context, Result};
use serde::de::DeserializeOwned;
use serde::Deserialize;
use trilevel::json::{AlgebraSpec, ComplexJson, ElementJson};
use trilevel::module::ModuleJson;

/// Two generators; seeded random witnesses with the given layer counts are
/// built from each and multiplied.
#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TensorInput {
    pub algebra: AlgebraSpec,
    pub left: ComplexJson,
    pub right: ComplexJson,
    #[serde(default = "one")]
    pub left_layers: usize,
    #[serde(default = "one")]
    pub right_layers: usize,
}

/// `X` and the ring elements whose Koszul object is built from it.
#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
pub struct KoszulInput {
    pub algebra: AlgebraSpec,
    pub object: ComplexJson,
    pub elements: Vec<ElementJson>,
}

/// A module, for the Loewy and resolution modes.
#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModuleInput {
    pub algebra: AlgebraSpec,
    pub module: ModuleJson,
    /// Highest homological degree of a resolution.
    #[serde(default = "default_cap")]
    pub cap: usize,
}

fn one() -> usize {
    1
}

pub fn default_cap() -> usize {
    4
}

/// Reads and parses a JSON file; parse errors carry line and column.
pub fn read<T: DeserializeOwned>(path: &Path) -> Result<T> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))
}
