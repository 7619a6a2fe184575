//! The single JSON document that drives `evolve`.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::evolution::{GaConfig, Schedule};
use crate::genome::GenomeLayout;
use crate::trial::TrialSpec;

pub const DEFAULT_CHECKPOINT_INTERVAL: u64 = 50;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IoConfig {
    #[serde(default)]
    pub output_dir: Option<PathBuf>,
    /// Write a checkpoint every this many generations.
    #[serde(default = "default_interval")]
    pub checkpoint_interval: u64,
}

fn default_interval() -> u64 {
    DEFAULT_CHECKPOINT_INTERVAL
}

impl Default for IoConfig {
    fn default() -> Self {
        IoConfig {
            output_dir: None,
            checkpoint_interval: DEFAULT_CHECKPOINT_INTERVAL,
        }
    }
}

/// Only `trial.dt_ms` is mandatory; everything else has a default.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub trial: TrialSpec,
    #[serde(default)]
    pub ga: GaConfig,
    #[serde(default)]
    pub schedule: Schedule,
    #[serde(default)]
    pub layout: GenomeLayout,
    #[serde(default)]
    pub io: IoConfig,
    /// Overrides `ga.master_seed` when present.
    #[serde(default)]
    pub seed: Option<u64>,
    #[serde(default)]
    pub threads: Option<usize>,
}

impl RunConfig {
    /// Parses and validates. The `seed` shorthand is folded into
    /// `ga.master_seed`, so the result is the effective configuration.
    pub fn from_json(text: &str, origin: &str) -> Result<Self> {
        let mut cfg: RunConfig = serde_json::from_str(text).map_err(|source| Error::Json {
            path: origin.to_string(),
            source,
        })?;
        cfg.normalize();
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        RunConfig::from_json(&text, &path.display().to_string())
    }

    pub fn normalize(&mut self) {
        if let Some(seed) = self.seed {
            self.ga.master_seed = seed;
        }
        self.seed = Some(self.ga.master_seed);
    }

    pub fn validate(&self) -> Result<()> {
        self.ga.validate()?;
        self.schedule.validate()?;
        self.layout.topology.validate()?;
        for &target in &self.schedule.stages {
            self.trial.with_target(target).plan()?;
        }
        if self.io.checkpoint_interval == 0 {
            return Err(Error::config("io.checkpoint_interval must be at least 1"));
        }
        if self.threads == Some(0) {
            return Err(Error::config("threads must be at least 1"));
        }
        Ok(())
    }
}
