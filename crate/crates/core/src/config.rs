//! Run configuration: flat `key = value` files with `--set key=value`
//! overrides. Every report embeds the full configuration.

use serde::{Deserialize, Serialize};

use crate::dynamics::ray::TraceParams;
use crate::error::{Error, Result};
use crate::modulus::GridParams;
use crate::nest::{NestBudgets, DEFAULT_SATELLITE_BUDGET};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub trace: TraceParams,
    pub grid: GridParams,
    pub budgets: NestBudgets,
    /// Iterates of `f^q` searched for the escape of the critical orbit.
    pub escape_budget: usize,
    /// Largest rotation denominator tried when detecting the alpha cycle.
    pub q_max: u32,
    /// Threshold of the quasi-additivity law.
    pub delta0: f64,
    /// Threshold of the covering lemma.
    pub epsilon: f64,
    pub eta: f64,
    /// Lower bound the a-priori moduli are compared with.
    pub floor: f64,
    pub jobs: usize,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            trace: TraceParams::default(),
            grid: GridParams::default(),
            budgets: NestBudgets::default(),
            escape_budget: DEFAULT_SATELLITE_BUDGET,
            q_max: 12,
            delta0: 0.1,
            epsilon: 0.05,
            eta: 0.5,
            floor: 0.01,
            jobs: 1,
        }
    }
}

fn parse<T: std::str::FromStr>(key: &str, value: &str) -> Result<T> {
    value
        .parse()
        .map_err(|_| Error::Parse(format!("bad value {value:?} for {key}")))
}

/// Keys, their documentation, and a getter for the current value.
type KeyDoc = (&'static str, &'static str, fn(&RunConfig) -> String);

const KEYS: &[KeyDoc] = &[
    ("trace.substeps", "ladder sub-steps per halving of the potential", |c| c.trace.substeps.to_string()),
    ("trace.newton_tol", "relative Newton tolerance of ray samples", |c| c.trace.newton_tol.to_string()),
    ("trace.landing_tol", "distance at which a ray counts as landed", |c| c.trace.landing_tol.to_string()),
    ("trace.top_level", "potential of the depth-0 equipotential", |c| c.trace.top_level.to_string()),
    ("trace.max_dyadic_levels", "halvings of the potential before giving up", |c| c.trace.max_dyadic_levels.to_string()),
    ("precision", "double or extended (double-double) Newton arithmetic", |c| c.trace.precision.to_string()),
    ("grid.longest", "cells along the longest side of the fine grid", |c| c.grid.longest.to_string()),
    ("grid.coarse", "cells along the longest side of the control grid (reset to half of grid.longest if not smaller)", |c| c.grid.coarse.to_string()),
    ("grid.tolerance", "relative residual of the linear solver", |c| c.grid.tolerance.to_string()),
    ("grid.max_iterations", "iteration cap of the linear solver", |c| c.grid.max_iterations.to_string()),
    ("budget.return", "iterates searched for one return to a nest piece", |c| c.budgets.return_budget.to_string()),
    ("budget.renorm_returns", "returns checked before declaring renormalizability", |c| c.budgets.renorm_returns.to_string()),
    ("budget.max_levels", "deepest nest level built", |c| c.budgets.max_levels.to_string()),
    ("budget.escape", "iterates of f^q searched for the escape of 0", |c| c.escape_budget.to_string()),
    ("q_max", "largest rotation denominator tried for the alpha cycle", |c| c.q_max.to_string()),
    ("delta0", "quasi-additivity threshold (unspecified in theory)", |c| c.delta0.to_string()),
    ("epsilon", "covering lemma threshold (unspecified in theory)", |c| c.epsilon.to_string()),
    ("eta", "collar parameter of both laws", |c| c.eta.to_string()),
    ("floor", "lower bound for the a-priori moduli", |c| c.floor.to_string()),
    ("jobs", "worker threads for sweeps", |c| c.jobs.to_string()),
];

impl RunConfig {
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        let v = value.trim();
        match key.trim() {
            "trace.substeps" => self.trace.substeps = parse(key, v)?,
            "trace.newton_tol" => self.trace.newton_tol = parse(key, v)?,
            "trace.landing_tol" => self.trace.landing_tol = parse(key, v)?,
            "trace.top_level" => self.trace.top_level = parse(key, v)?,
            "trace.max_dyadic_levels" => self.trace.max_dyadic_levels = parse(key, v)?,
            "precision" => self.trace.precision = v.parse()?,
            "grid.longest" => {
                self.grid.longest = parse(key, v)?;
                if self.grid.coarse >= self.grid.longest {
                    self.grid.coarse = self.grid.longest / 2;
                }
            }
            "grid.coarse" => self.grid.coarse = parse(key, v)?,
            "grid.tolerance" => self.grid.tolerance = parse(key, v)?,
            "grid.max_iterations" => self.grid.max_iterations = parse(key, v)?,
            "budget.return" => self.budgets.return_budget = parse(key, v)?,
            "budget.renorm_returns" => self.budgets.renorm_returns = parse(key, v)?,
            "budget.max_levels" => self.budgets.max_levels = parse(key, v)?,
            "budget.escape" => self.escape_budget = parse(key, v)?,
            "q_max" => self.q_max = parse(key, v)?,
            "delta0" => self.delta0 = parse(key, v)?,
            "epsilon" => self.epsilon = parse(key, v)?,
            "eta" => self.eta = parse(key, v)?,
            "floor" => self.floor = parse(key, v)?,
            "jobs" => self.jobs = parse(key, v)?,
            other => return Err(Error::Parse(format!("unknown configuration key {other:?}"))),
        }
        self.validate()
    }

    /// Applies `key = value` lines; `#` starts a comment.
    pub fn apply_text(&mut self, text: &str) -> Result<()> {
        for (i, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap().trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| Error::Parse(format!("line {}: expected key = value", i + 1)))?;
            self.set(k, v)?;
        }
        Ok(())
    }

    /// Applies a `key=value` override.
    pub fn apply_override(&mut self, kv: &str) -> Result<()> {
        let (k, v) = kv
            .split_once('=')
            .ok_or_else(|| Error::Parse(format!("expected key=value, got {kv:?}")))?;
        self.set(k, v)
    }

    fn validate(&self) -> Result<()> {
        if !(0.0 < self.eta && self.eta < 1.0) {
            return Err(Error::Argument(format!("eta must lie in (0, 1), got {}", self.eta)));
        }
        if self.trace.substeps == 0 || self.grid.longest < 4 || self.grid.coarse < 4 || self.jobs == 0 {
            return Err(Error::Argument("sizes and counts must be positive".into()));
        }
        if self.grid.coarse >= self.grid.longest {
            return Err(Error::Argument("grid.coarse must be smaller than grid.longest".into()));
        }
        Ok(())
    }

    /// The configuration as a `key = value` file.
    pub fn to_text(&self) -> String {
        KEYS.iter().map(|(k, _, get)| format!("{k} = {}\n", get(self))).collect()
    }

    /// Reference page of all keys with their defaults.
    pub fn reference() -> String {
        let d = RunConfig::default();
        let mut out = String::from("| key | default | meaning |\n|---|---|---|\n");
        for (k, doc, get) in KEYS {
            out.push_str(&format!("| `{k}` | `{}` | {doc} |\n", get(&d)));
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn text_round_trip() {
        let mut c = RunConfig::default();
        c.apply_text("grid.longest = 256\n# comment\neta=0.25 # inline\nprecision = extended\n")
            .unwrap();
        assert_eq!(c.grid.longest, 256);
        assert_eq!(c.grid.coarse, 128);
        assert_eq!(c.eta, 0.25);
        let mut d = RunConfig::default();
        d.apply_text(&c.to_text()).unwrap();
        assert_eq!(c, d);
    }

    #[test]
    fn bad_input_is_rejected() {
        let mut c = RunConfig::default();
        assert!(matches!(c.set("nope", "1"), Err(Error::Parse(_))));
        assert!(matches!(c.set("grid.longest", "many"), Err(Error::Parse(_))));
        assert!(matches!(c.apply_override("eta=2"), Err(Error::Argument(_))));
        assert!(c.apply_text("just words").is_err());
        assert!(matches!(c.set("grid.coarse", "1024"), Err(Error::Argument(_))));
    }

    #[test]
    fn reference_lists_every_key() {
        let r = RunConfig::reference();
        assert_eq!(r.lines().count(), KEYS.len() + 2);
        assert!(r.contains("`delta0` | `0.1`"));
    }
}
