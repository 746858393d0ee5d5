//! Run configuration: defaults, plain-text `key = value` files, and flag
//! overrides, merged in that order.

use std::path::{Path, PathBuf};

#[derive(Clone, Debug)]
pub struct RunConfig {
    pub modes: u32,
    pub emax: u64,
    pub exact: bool,
    pub level_c: i64,
    pub level_k: i64,
    pub window: i64,
    pub quad_order: usize,
    pub tolerance: f64,
    pub out: PathBuf,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            modes: 3,
            emax: 8,
            exact: true,
            level_c: 1,
            level_k: 1,
            window: 8,
            quad_order: 64,
            tolerance: 1e-8,
            out: PathBuf::from("."),
        }
    }
}

impl RunConfig {
    pub fn apply_file(&mut self, path: &Path) -> Result<(), String> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| format!("cannot read config {}: {e}", path.display()))?;
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| format!("line {}: expected key = value", lineno + 1))?;
            let key = key.trim();
            let value = value.trim();
            let parse = |what: &str| format!("line {}: bad {what} value '{value}'", lineno + 1);
            match key {
                "modes" => self.modes = value.parse().map_err(|_| parse("modes"))?,
                "emax" => self.emax = value.parse().map_err(|_| parse("emax"))?,
                "mode" => match value {
                    "exact" => self.exact = true,
                    "float" => self.exact = false,
                    _ => return Err(parse("mode (exact|float)")),
                },
                "level_c" => self.level_c = value.parse().map_err(|_| parse("level_c"))?,
                "level_k" => self.level_k = value.parse().map_err(|_| parse("level_k"))?,
                "window" => self.window = value.parse().map_err(|_| parse("window"))?,
                "quad_order" => {
                    self.quad_order = value.parse().map_err(|_| parse("quad_order"))?
                }
                "tolerance" => self.tolerance = value.parse().map_err(|_| parse("tolerance"))?,
                "out" => self.out = PathBuf::from(value),
                _ => return Err(format!("line {}: unknown key '{key}'", lineno + 1)),
            }
        }
        Ok(())
    }

    pub fn validate(&self) -> Result<(), String> {
        if self.modes == 0 {
            return Err("modes must be positive".into());
        }
        if self.level_c < 1 {
            return Err("level_c must be at least 1".into());
        }
        if self.window < 1 {
            return Err("window must be positive".into());
        }
        if self.quad_order < 2 {
            return Err("quad_order must be at least 2".into());
        }
        if self.tolerance < 0.0 {
            return Err("tolerance must be nonnegative".into());
        }
        Ok(())
    }

    pub fn mode_name(&self) -> &'static str {
        if self.exact {
            "exact"
        } else {
            "float"
        }
    }
}
