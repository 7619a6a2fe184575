//! How often random genomes already show self-sustained activity.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::evolution::{individual_rng, Parallelism};
use crate::genome::{decode, random_genome_from, GenomeLayout};
use crate::trial::{evaluate_fitness, TrialPlan};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Bucket {
    SilentOrBrief,
    StoppedInWindow,
    SustainedFullTrial,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct LandscapeCounts {
    pub silent_or_brief: u64,
    pub stopped_in_window: u64,
    pub sustained_full_trial: u64,
}

impl LandscapeCounts {
    pub fn total(&self) -> u64 {
        self.silent_or_brief + self.stopped_in_window + self.sustained_full_trial
    }

    fn add(&mut self, b: Bucket) {
        match b {
            Bucket::SilentOrBrief => self.silent_or_brief += 1,
            Bucket::StoppedInWindow => self.stopped_in_window += 1,
            Bucket::SustainedFullTrial => self.sustained_full_trial += 1,
        }
    }
}

/// Step thresholds separating the buckets.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LandscapeThresholds {
    /// A last spike strictly after this step stopped "late enough".
    pub target_stop_step: u64,
    /// A last spike at or after this step counts as the whole trial.
    pub full_trial_step: u64,
}

impl LandscapeThresholds {
    pub fn for_plan(plan: &TrialPlan) -> Self {
        LandscapeThresholds {
            target_stop_step: plan.target_stop_step,
            full_trial_step: plan.total_steps - plan.total_steps / 100,
        }
    }

    pub fn classify(&self, last_output_spike: Option<u64>) -> Bucket {
        match last_output_spike {
            Some(x) if x >= self.full_trial_step => Bucket::SustainedFullTrial,
            Some(x) if x > self.target_stop_step => Bucket::StoppedInWindow,
            _ => Bucket::SilentOrBrief,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LandscapeSample {
    pub n_sampled: u64,
    pub seed: u64,
    pub counts: LandscapeCounts,
    pub thresholds: LandscapeThresholds,
}

/// Evaluates `n` uniform random genomes. Genome `i` is drawn from the same
/// stream the GA uses for its initial population, so a sample and a fresh
/// population with equal seeds share their first members.
pub fn sample_landscape(
    n: u64,
    plan: &TrialPlan,
    layout: GenomeLayout,
    seed: u64,
    parallelism: Parallelism,
) -> Result<LandscapeSample> {
    if n == 0 {
        return Err(Error::config("landscape sample size must be at least 1"));
    }
    let thresholds = LandscapeThresholds::for_plan(plan);
    let one = |i: u64| -> Result<Bucket> {
        let genome = random_genome_from(layout, &mut individual_rng(seed, 0, i as usize));
        let (last, _) = evaluate_fitness(&decode(&genome)?, plan)?;
        Ok(thresholds.classify(last))
    };
    let buckets: Vec<Bucket> = match parallelism {
        Parallelism::Sequential => (0..n).map(one).collect::<Result<_>>()?,
        Parallelism::Parallel => (0..n).into_par_iter().map(one).collect::<Result<_>>()?,
    };
    let mut counts = LandscapeCounts::default();
    for b in buckets {
        counts.add(b);
    }
    Ok(LandscapeSample {
        n_sampled: n,
        seed,
        counts,
        thresholds,
    })
}
