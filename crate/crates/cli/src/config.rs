//! Optional TOML config file. Every key mirrors a long flag (dashes become
//! underscores); a flag given on the command line wins over the file, and the
//! file wins over profile defaults.

use std::path::Path;

use serde::Deserialize;

use crate::fail::Failure;

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub threads: Option<usize>,
    pub preset: Option<String>,
    pub presets: Option<Vec<String>>,
    pub which: Option<String>,
    pub profile: Option<String>,
    pub field: Option<String>,
    pub lambda: Option<f64>,
    pub eps: Option<f64>,
    pub tau: Option<f64>,
    pub noise_level: Option<f64>,
    pub seed: Option<u64>,
    pub epochs: Option<u64>,
    pub iterations: Option<u64>,
    pub checkpoint: Option<u64>,
    pub trials: Option<usize>,
    pub m: Option<usize>,
    pub n: Option<usize>,
    pub rank: Option<usize>,
    pub sparsity: Option<usize>,
    pub sv_lo: Option<f64>,
    pub sv_hi: Option<f64>,
    pub samples: Option<usize>,
}

impl FileConfig {
    pub fn load(path: &Path) -> Result<Self, Failure> {
        let text = std::fs::read_to_string(path).map_err(|e| Failure::input(format!("{}: {e}", path.display())))?;
        toml::from_str(&text).map_err(|e| {
            let line = e
                .span()
                .map(|s| text[..s.start.min(text.len())].matches('\n').count() + 1)
                .unwrap_or(1);
            Failure::input(format!("{}:{line}: {}", path.display(), e.message()))
        })
    }
}
