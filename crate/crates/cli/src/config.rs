use std::path::{Path, PathBuf};

use serde::Deserialize;

use crate::cli::{Format, Preset};

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Config {
    pub space: Option<String>,
    pub tol: Option<f64>,
    pub seed: Option<u64>,
    pub format: Option<Format>,
    #[serde(default)]
    pub verdict: Sets,
    #[serde(default)]
    pub geodesic: GeodesicSection,
    #[serde(default)]
    pub bounds: BoundsSection,
    #[serde(default)]
    pub infinite: InfiniteSection,
}

#[derive(Debug, Default, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Sets {
    #[serde(default)]
    pub a: Vec<String>,
    #[serde(default)]
    pub b: Vec<String>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GeodesicSection {
    #[serde(default)]
    pub a: Vec<String>,
    #[serde(default)]
    pub b: Vec<String>,
    pub t_grid: Option<usize>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BoundsSection {
    #[serde(default)]
    pub a: Vec<String>,
    #[serde(default)]
    pub b: Vec<String>,
    pub truncation: Option<usize>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InfiniteSection {
    pub preset: Option<Preset>,
    pub k: Option<usize>,
    pub ratio: Option<f64>,
    pub shift: Option<f64>,
    pub path: Option<PathBuf>,
}

pub fn load(path: &Path) -> Result<Config, String> {
    let text = std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    toml::from_str(&text).map_err(|e| format!("{}: {e}", path.display()))
}
