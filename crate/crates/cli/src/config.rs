//! Optional key=value configuration for default bounds and k_final.
//! CLI flags override config values.

use mukai_walls::walls::Bounds;
use num_bigint::BigInt;
use std::path::Path;

#[derive(Debug, Clone, Default)]
pub struct Config {
    pub c_max: Option<u64>,
    pub s_max: Option<u64>,
    pub k_final: Option<BigInt>,
}

pub const DEFAULT_BOUNDS: Bounds = Bounds {
    c_max: 100,
    s_max: 10_000,
};

impl Config {
    /// Lines of `key=value`; blank lines and `#` comments ignored.
    /// Keys: c_max, s_max, k_final.
    pub fn parse(text: &str) -> Result<Config, String> {
        let mut cfg = Config::default();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let Some((key, value)) = line.split_once('=') else {
                return Err(format!("line {}: expected key=value", lineno + 1));
            };
            let (key, value) = (key.trim(), value.trim());
            match key {
                "c_max" => {
                    cfg.c_max =
                        Some(value.parse().map_err(|e| format!("line {}: {e}", lineno + 1))?)
                }
                "s_max" => {
                    cfg.s_max =
                        Some(value.parse().map_err(|e| format!("line {}: {e}", lineno + 1))?)
                }
                "k_final" => {
                    cfg.k_final =
                        Some(value.parse().map_err(|e| format!("line {}: {e}", lineno + 1))?)
                }
                other => return Err(format!("line {}: unknown key \"{other}\"", lineno + 1)),
            }
        }
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Config, String> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| format!("cannot read {}: {e}", path.display()))?;
        Config::parse(&text)
    }

    pub fn bounds_or_default(&self) -> Bounds {
        Bounds {
            c_max: self.c_max.unwrap_or(DEFAULT_BOUNDS.c_max),
            s_max: self.s_max.unwrap_or(DEFAULT_BOUNDS.s_max),
        }
    }
}
