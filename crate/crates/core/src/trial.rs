//! The memory experiment: stimulate, let the network run on its own, and
//! score when the output neuron fell silent.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::snn::{
    LastSpike, Network, SimClock, Simulator, SpikeCoupling, SpikeLog, StimulusSpec, DEFAULT_DT_MS,
};

/// Width of the late-side Gaussian, in steps.
pub const LATE_SIGMA_STEPS: f64 = 1e3;
/// Early-side Gaussian width as a fraction of the target stop step.
pub const EARLY_SIGMA_FRACTION: f64 = 0.35;

/// Trial protocol, in seconds. Converted to steps once by [`TrialSpec::plan`].
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TrialSpec {
    #[serde(default = "default_stimulation")]
    pub stimulation_s: f64,
    #[serde(default = "default_sustain")]
    pub target_sustain_s: f64,
    #[serde(default = "default_silence")]
    pub silence_window_s: f64,
    pub dt_ms: f64,
    #[serde(default)]
    pub stimulus: StimulusSpec,
    #[serde(default)]
    pub coupling: SpikeCoupling,
}

fn default_stimulation() -> f64 {
    1.0
}
fn default_sustain() -> f64 {
    2.0
}
fn default_silence() -> f64 {
    4.0
}

impl Default for TrialSpec {
    fn default() -> Self {
        TrialSpec {
            stimulation_s: default_stimulation(),
            target_sustain_s: default_sustain(),
            silence_window_s: default_silence(),
            dt_ms: DEFAULT_DT_MS,
            stimulus: StimulusSpec::default(),
            coupling: SpikeCoupling::default(),
        }
    }
}

impl TrialSpec {
    pub fn with_target(mut self, target_sustain_s: f64) -> Self {
        self.target_sustain_s = target_sustain_s;
        self
    }

    pub fn total_s(&self) -> f64 {
        self.stimulation_s + self.target_sustain_s + self.silence_window_s
    }

    pub fn target_stop_s(&self) -> f64 {
        self.stimulation_s + self.target_sustain_s
    }

    /// Validates the protocol and resolves every duration into steps.
    pub fn plan(&self) -> Result<TrialPlan> {
        let clock = SimClock::new(self.dt_ms)?;
        self.stimulus.validate()?;
        let stimulation_steps = clock.seconds_to_steps(self.stimulation_s)?;
        let sustain_steps = clock.seconds_to_steps(self.target_sustain_s)?;
        let silence_steps = clock.seconds_to_steps(self.silence_window_s)?;
        if stimulation_steps + sustain_steps == 0 {
            return Err(Error::config("target stop time must be positive"));
        }
        let target_stop_step = stimulation_steps + sustain_steps;
        Ok(TrialPlan {
            spec: *self,
            clock,
            stimulation_steps,
            target_stop_step,
            total_steps: target_stop_step + silence_steps,
        })
    }
}

/// A validated protocol with all times in steps.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TrialPlan {
    pub spec: TrialSpec,
    pub clock: SimClock,
    pub stimulation_steps: u64,
    pub target_stop_step: u64,
    pub total_steps: u64,
}

impl TrialPlan {
    pub fn simulator<'a>(&self, network: &'a Network) -> Simulator<'a> {
        Simulator::new(network, self.clock)
            .stimulus(self.spec.stimulus, self.stimulation_steps)
            .coupling(self.spec.coupling)
    }

    pub fn step_to_s(&self, step: u64) -> f64 {
        self.clock.step_to_s(step)
    }

    /// Step at which `seconds` falls, rejecting non-integral conversions.
    pub fn step_at(&self, seconds: f64) -> Result<u64> {
        self.clock.seconds_to_steps(seconds)
    }

    /// Fitness of a run whose last output spike was `last_output_spike`.
    /// A run without output spikes counts as a last spike at step 0.
    pub fn score(&self, last_output_spike: Option<u64>) -> f64 {
        fitness(last_output_spike.unwrap_or(0), self.target_stop_step)
            .expect("plan guarantees a positive stop step")
    }
}

/// Two-sided Gaussian score of the last output spike `x` around the target
/// stop step `s`: width `0.35 s` before the target, `1000` steps after it.
///
/// The result is kept strictly positive: values that would underflow are
/// floored at `f64::MIN_POSITIVE`.
pub fn fitness(x: u64, s: u64) -> Result<f64> {
    if s == 0 {
        return Err(Error::config("target stop step must be positive"));
    }
    let (xf, sf) = (x as f64, s as f64);
    let sigma = if x <= s {
        EARLY_SIGMA_FRACTION * sf
    } else {
        LATE_SIGMA_STEPS
    };
    let d = xf - sf;
    Ok((-(d * d) / (2.0 * sigma * sigma)).exp().max(f64::MIN_POSITIVE))
}

#[derive(Clone, Debug, PartialEq)]
pub struct TrialRecord {
    pub spike_log: SpikeLog,
    pub last_output_spike_step: Option<u64>,
    pub fitness: f64,
}

/// Exported form of a [`TrialRecord`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrialSummary {
    pub last_output_spike_step: Option<u64>,
    pub last_output_spike_s: Option<f64>,
    pub fitness: f64,
    pub total_spikes: usize,
}

impl TrialRecord {
    pub fn summary(&self, plan: &TrialPlan) -> TrialSummary {
        TrialSummary {
            last_output_spike_step: self.last_output_spike_step,
            last_output_spike_s: self.last_output_spike_step.map(|s| plan.step_to_s(s)),
            fitness: self.fitness,
            total_spikes: self.spike_log.len(),
        }
    }
}

/// Runs the full protocol and keeps the whole spike log.
pub fn evaluate(network: &Network, plan: &TrialPlan) -> Result<TrialRecord> {
    evaluate_with(plan.simulator(network), network, plan)
}

/// Same as [`evaluate`] on a pre-configured simulator (e.g. with pruned neurons).
pub fn evaluate_with(sim: Simulator<'_>, network: &Network, plan: &TrialPlan) -> Result<TrialRecord> {
    let spike_log = sim.run_log(plan.total_steps)?;
    let last = spike_log.last_spike_in(network.topology().outputs());
    Ok(TrialRecord {
        spike_log,
        last_output_spike_step: last,
        fitness: plan.score(last),
    })
}

/// Last output spike and fitness, without keeping the log.
pub fn evaluate_fitness(network: &Network, plan: &TrialPlan) -> Result<(Option<u64>, f64)> {
    let mut tracker = LastSpike::new(network.topology().outputs());
    plan.simulator(network).run(plan.total_steps, &mut tracker)?;
    Ok((tracker.last, plan.score(tracker.last)))
}
