//! Layered configuration: built-in defaults, then the `CHESSDYN_TB_DIR`
//! environment variable, then an optional key=value config file, with
//! command-line flags overriding everything at resolution time.

use std::fs;
use std::path::{Path, PathBuf};

use chessdyn_core::embedding::Metric;
use thiserror::Error;

use crate::report::ReportFormat;

/// Defaults the per-command flags fall back to.
#[derive(Clone, Debug)]
pub struct CliConfig {
    pub tablebase_dir: Option<PathBuf>,
    pub default_metric: Metric,
    pub default_seed: u64,
    pub ply_cap: u32,
    pub report_format: ReportFormat,
}

impl Default for CliConfig {
    fn default() -> CliConfig {
        CliConfig {
            tablebase_dir: None,
            default_metric: Metric::Hamming,
            default_seed: 0,
            ply_cap: 512,
            report_format: ReportFormat::Json,
        }
    }
}

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("config file {path}: {source}")]
    Unreadable {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("config line {line}: expected key=value, got {text:?}")]
    Syntax { line: usize, text: String },
    #[error("config line {line}: unknown key {key:?}")]
    UnknownKey { line: usize, key: String },
    #[error("config line {line}: {message}")]
    BadValue { line: usize, message: String },
    #[error("ply_cap must be at least 1")]
    PlyCapZero,
}

/// Reads the effective configuration, consulting `path` when given.
pub fn load_config(path: Option<&Path>) -> Result<CliConfig, ConfigError> {
    let mut config = CliConfig::default();
    if let Some(dir) = std::env::var_os("CHESSDYN_TB_DIR") {
        config.tablebase_dir = Some(PathBuf::from(dir));
    }
    if let Some(path) = path {
        let text = fs::read_to_string(path).map_err(|source| ConfigError::Unreadable {
            path: path.to_path_buf(),
            source,
        })?;
        apply_file(&mut config, &text)?;
    }
    if config.ply_cap == 0 {
        return Err(ConfigError::PlyCapZero);
    }
    Ok(config)
}

fn apply_file(config: &mut CliConfig, text: &str) -> Result<(), ConfigError> {
    for (index, raw) in text.lines().enumerate() {
        let line = index + 1;
        let trimmed = raw.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let Some((key, value)) = trimmed.split_once('=') else {
            return Err(ConfigError::Syntax {
                line,
                text: trimmed.to_string(),
            });
        };
        let (key, value) = (key.trim(), value.trim());
        let bad = |message: String| ConfigError::BadValue { line, message };
        match key {
            "tablebase_dir" => config.tablebase_dir = Some(PathBuf::from(value)),
            "default_metric" => config.default_metric = value.parse().map_err(bad)?,
            "default_seed" => {
                config.default_seed = value
                    .parse()
                    .map_err(|_| bad(format!("bad seed {value:?}")))?;
            }
            "ply_cap" => {
                config.ply_cap = value
                    .parse()
                    .map_err(|_| bad(format!("bad ply cap {value:?}")))?;
            }
            "report_format" => config.report_format = value.parse().map_err(bad)?,
            other => {
                return Err(ConfigError::UnknownKey {
                    line,
                    key: other.to_string(),
                });
            }
        }
    }
    Ok(())
}
