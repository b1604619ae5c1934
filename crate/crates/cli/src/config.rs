//! `--config` file: a JSON object whose keys mirror the command-line flags.

use std::path::{Path, PathBuf};

use gtc::verify::Tolerances;
use serde::Deserialize;

#[derive(Clone, Debug, Default, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    /// When present it must name the subcommand being run.
    pub command: Option<String>,
    pub max_n: Option<usize>,
    pub trivariate_cap: Option<usize>,
    pub seed: Option<u64>,
    pub output: Option<PathBuf>,
    pub format: Option<String>,
    #[serde(default)]
    pub tolerances: Tolerances,
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self, String> {
        let text = std::fs::read_to_string(path).map_err(|e| format!("cannot read {}: {e}", path.display()))?;
        Self::parse(&text)
    }

    pub fn parse(text: &str) -> Result<Self, String> {
        let cfg: RunConfig = serde_json::from_str(text).map_err(|e| format!("bad config: {e}"))?;
        for (name, cap) in [("max_n", cfg.max_n), ("trivariate_cap", cfg.trivariate_cap)] {
            if cap == Some(0) {
                return Err(format!("bad config: {name} must be positive"));
            }
        }
        Ok(cfg)
    }

    pub fn check_command(&self, name: &str) -> Result<(), String> {
        match &self.command {
            Some(c) if c != name => Err(format!("config is for `{c}`, not `{name}`")),
            _ => Ok(()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_and_rejects() {
        let c = RunConfig::parse(r#"{"command": "table", "max_n": 10, "tolerances": {"ratio": 0.5}}"#).unwrap();
        assert_eq!(c.max_n, Some(10));
        assert_eq!(c.tolerances.ratio, 0.5);
        assert!(c.check_command("table").is_ok());
        assert!(c.check_command("count").is_err());
        assert!(RunConfig::parse(r#"{"max_m": 10}"#).is_err());
        assert!(RunConfig::parse(r#"{"max_n": 0}"#).is_err());
        assert_eq!(RunConfig::parse("{}").unwrap(), RunConfig::default());
    }
}
