//! Run configuration: budgets, output format, parallelism, seed.

use serde::Serialize;

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum OutputFormat {
    Text,
    Json,
}

#[derive(Clone, Debug, Serialize)]
pub struct RunConfig {
    /// Cap on enumeration candidates (subspaces, ideals, types).
    pub enumeration_cap: u128,
    /// Cap on exhaustive solver assignments p^#vars.
    pub solve_cap: u128,
    /// Cap on materialized group order.
    pub group_cap: u128,
    /// Dimension cap for algebra construction.
    pub construction_dim_cap: usize,
    /// Dimension cap for exhaustive routines (ideal search etc.).
    pub exhaustive_dim_cap: usize,
    pub threads: usize,
    pub seed: u64,
    pub format: OutputFormat,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            enumeration_cap: 10_000_000,
            solve_cap: 10_000_000,
            group_cap: 100_000,
            construction_dim_cap: 24,
            exhaustive_dim_cap: 12,
            threads: 1,
            seed: 0,
            format: OutputFormat::Text,
        }
    }
}

impl RunConfig {
    /// Apply TERRITOIRE_BUDGET: either a single integer replacing the
    /// enumeration and solve caps, or comma-separated `name=value` pairs
    /// with names enum, solve, group.
    pub fn apply_env(&mut self) -> Result<()> {
        let Ok(raw) = std::env::var("TERRITOIRE_BUDGET") else {
            return Ok(());
        };
        self.apply_budget_string(&raw)
    }

    pub fn apply_budget_string(&mut self, raw: &str) -> Result<()> {
        let raw = raw.trim();
        if raw.is_empty() {
            return Ok(());
        }
        if let Ok(single) = raw.parse::<u128>() {
            if single == 0 {
                return Err(Error::Other("budget caps must be positive".into()));
            }
            self.enumeration_cap = single;
            self.solve_cap = single;
            return Ok(());
        }
        for part in raw.split(',') {
            let Some((name, value)) = part.split_once('=') else {
                return Err(Error::Other(format!(
                    "cannot parse budget entry {part:?}; expected name=value"
                )));
            };
            let value: u128 = value.trim().parse().map_err(|_| {
                Error::Other(format!("cannot parse budget value in {part:?}"))
            })?;
            if value == 0 {
                return Err(Error::Other("budget caps must be positive".into()));
            }
            match name.trim() {
                "enum" => self.enumeration_cap = value,
                "solve" => self.solve_cap = value,
                "group" => self.group_cap = value,
                other => {
                    return Err(Error::Other(format!(
                        "unknown budget name {other:?}; expected enum, solve or group"
                    )))
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn budget_string_forms() {
        let mut cfg = RunConfig::default();
        cfg.apply_budget_string("12345").unwrap();
        assert_eq!(cfg.enumeration_cap, 12345);
        assert_eq!(cfg.solve_cap, 12345);

        let mut cfg = RunConfig::default();
        cfg.apply_budget_string("enum=5,group=7").unwrap();
        assert_eq!(cfg.enumeration_cap, 5);
        assert_eq!(cfg.group_cap, 7);
        assert_eq!(cfg.solve_cap, 10_000_000);

        assert!(RunConfig::default().apply_budget_string("bogus=1").is_err());
        assert!(RunConfig::default().apply_budget_string("0").is_err());
    }
}
