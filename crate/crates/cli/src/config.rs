//! Flat key/value config file. Keys mirror the long flag names; a flag
//! given on the command line always wins over the file, and the file wins
//! over built-in defaults.

use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use serde::Deserialize;

#[derive(Clone, Debug, Default, Deserialize, PartialEq)]
#[serde(rename_all = "kebab-case", deny_unknown_fields)]
pub struct FileConfig {
    pub workers: Option<usize>,
    pub log: Option<String>,

    pub input_format: Option<String>,
    pub lev_min: Option<usize>,
    pub lev_max: Option<usize>,
    pub max_len: Option<usize>,
    pub norm_min: Option<f64>,
    pub norm_max: Option<f64>,
    pub contractions: Option<PathBuf>,
    pub sample: Option<usize>,
    pub sample_mode: Option<String>,
    pub seed: Option<u64>,

    pub train_per_class: Option<usize>,
    pub val_rows: Option<usize>,

    pub cleaned_count: Option<usize>,
    pub discarded_count: Option<usize>,

    pub mode: Option<String>,
    pub format: Option<String>,

    pub bins: Option<usize>,
    pub rows: Option<usize>,
}

impl FileConfig {
    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path)
            .with_context(|| format!("reading config {}", path.display()))?;
        Self::parse(&text).with_context(|| format!("parsing config {}", path.display()))
    }

    pub fn parse(text: &str) -> Result<Self> {
        Ok(toml::from_str(text)?)
    }
}

/// Flag value, else file value, else default.
pub fn pick<T>(flag: Option<T>, file: Option<T>, default: T) -> T {
    flag.or(file).unwrap_or(default)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_flat_document() {
        let cfg =
            FileConfig::parse("lev-min = 5\nnorm-max = 0.4\nsample-mode = \"random\"\n").unwrap();
        assert_eq!(cfg.lev_min, Some(5));
        assert_eq!(cfg.norm_max, Some(0.4));
        assert_eq!(cfg.sample_mode.as_deref(), Some("random"));
        assert_eq!(cfg.lev_max, None);
    }

    #[test]
    fn rejects_unknown_keys() {
        assert!(FileConfig::parse("lev_min = 5\n").is_err());
    }

    #[test]
    fn precedence() {
        assert_eq!(pick(Some(1), Some(2), 3), 1);
        assert_eq!(pick(None, Some(2), 3), 2);
        assert_eq!(pick(None, None, 3), 3);
    }
}
