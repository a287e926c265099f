//! Run configuration: defaults, config-file keys, flag overrides.
//!
//! The config file is plain `key = value` text; `#` starts a comment.
//! Recognized keys match the field names below. Flags override file
//! values.

use std::path::PathBuf;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OutputFormat {
    Csv,
    Json,
}

impl OutputFormat {
    pub fn parse(s: &str) -> Result<Self, String> {
        match s {
            "csv" => Ok(OutputFormat::Csv),
            "json" => Ok(OutputFormat::Json),
            other => Err(format!("unknown format `{other}` (expected csv or json)")),
        }
    }
}

#[derive(Clone, Debug)]
pub struct RunConfig {
    pub zeros_path: Option<PathBuf>,
    pub max_precision_bits: u32,
    pub workers: usize,
    pub output_format: OutputFormat,
    pub cache_dir: Option<PathBuf>,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            zeros_path: None,
            max_precision_bits: 4096,
            workers: std::thread::available_parallelism().map_or(1, |n| n.get()),
            output_format: OutputFormat::Csv,
            cache_dir: None,
        }
    }
}

impl RunConfig {
    pub fn load(path: &std::path::Path) -> Result<Self, String> {
        let body = std::fs::read_to_string(path)
            .map_err(|e| format!("cannot read config {}: {e}", path.display()))?;
        let mut cfg = RunConfig::default();
        for (idx, line) in body.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| format!("{}:{}: expected key = value", path.display(), idx + 1))?;
            let (key, value) = (key.trim(), value.trim());
            match key {
                "zeros_path" => cfg.zeros_path = Some(PathBuf::from(value)),
                "max_precision_bits" => {
                    cfg.max_precision_bits = value
                        .parse()
                        .map_err(|_| format!("bad max_precision_bits `{value}`"))?;
                }
                "workers" => {
                    cfg.workers = value.parse().map_err(|_| format!("bad workers `{value}`"))?;
                }
                "output_format" => cfg.output_format = OutputFormat::parse(value)?,
                "cache_dir" => cfg.cache_dir = Some(PathBuf::from(value)),
                other => return Err(format!("unknown config key `{other}`")),
            }
        }
        if cfg.workers < 1 {
            return Err("workers must be >= 1".into());
        }
        if cfg.max_precision_bits < 64 {
            return Err("max_precision_bits must be >= 64".into());
        }
        Ok(cfg)
    }
}
