//! Deactivating neurons mid-trial and sorting them by the effect.

use std::fmt::Write as _;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::stats::mean_std;
use crate::error::{Error, Result};
use crate::evolution::Parallelism;
use crate::snn::{LastSpike, Network, NeuronKind};
use crate::trial::{evaluate_with, TrialPlan, TrialRecord};

/// Spacing of the default pruning grid, in seconds.
pub const PRUNE_INTERVAL_S: f64 = 0.1;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PruningResult {
    pub neuron_id: usize,
    pub pruning_times_s: Vec<f64>,
    /// Last output spike of each pruned run. A run whose output never fired
    /// is reported at 0 s, matching the fitness convention.
    pub last_spike_times_s: Vec<f64>,
    pub mean_s: f64,
    /// Population standard deviation.
    pub stddev_s: f64,
}

/// Pruning times every 0.1 s from the end of stimulation up to (excluding)
/// the target stop. For the 2 s task that is 1.0, 1.1, ..., 2.9.
pub fn default_prune_times(plan: &TrialPlan) -> Vec<f64> {
    let interval = plan
        .step_at(PRUNE_INTERVAL_S)
        .expect("0.1 s is a whole number of steps for any valid dt");
    (plan.stimulation_steps..plan.target_stop_step)
        .step_by(interval as usize)
        .map(|s| plan.step_to_s(s))
        .collect()
}

fn last_output_spike(network: &Network, plan: &TrialPlan, neurons: &[usize], step: u64) -> Result<Option<u64>> {
    let mut sim = plan.simulator(network);
    for &n in neurons {
        sim = sim.suppress(n, step);
    }
    let mut tracker = LastSpike::new(network.topology().outputs());
    sim.run(plan.total_steps, &mut tracker)?;
    Ok(tracker.last)
}

fn check_neurons(network: &Network, neurons: &[usize]) -> Result<()> {
    match neurons.iter().find(|&&n| n >= network.len()) {
        Some(n) => Err(Error::config(format!(
            "neuron {n} does not exist in a {}-neuron network",
            network.len()
        ))),
        None => Ok(()),
    }
}

/// Prunes each of `neurons` alone at each of `times_s` and records when the
/// output fell silent. Results follow the order of `neurons`.
pub fn prune_sweep(
    network: &Network,
    plan: &TrialPlan,
    neurons: &[usize],
    times_s: &[f64],
    parallelism: Parallelism,
) -> Result<Vec<PruningResult>> {
    check_neurons(network, neurons)?;
    let steps = times_s
        .iter()
        .map(|&t| {
            let s = plan.step_at(t)?;
            if s > plan.total_steps {
                return Err(Error::config(format!("pruning time {t} s is past the end of the trial")));
            }
            Ok(s)
        })
        .collect::<Result<Vec<u64>>>()?;

    let cells: Vec<(usize, u64)> = neurons
        .iter()
        .flat_map(|&n| steps.iter().map(move |&s| (n, s)))
        .collect();
    let run = |&(n, s): &(usize, u64)| -> Result<f64> {
        let last = last_output_spike(network, plan, &[n], s)?;
        Ok(plan.step_to_s(last.unwrap_or(0)))
    };
    let lasts: Vec<f64> = match parallelism {
        Parallelism::Sequential => cells.iter().map(run).collect::<Result<_>>()?,
        Parallelism::Parallel => cells.par_iter().map(run).collect::<Result<_>>()?,
    };

    Ok(neurons
        .iter()
        .zip(lasts.chunks(steps.len().max(1)))
        .map(|(&neuron_id, chunk)| {
            let (mean_s, stddev_s) = mean_std(chunk).unwrap_or((f64::NAN, f64::NAN));
            PruningResult {
                neuron_id,
                pruning_times_s: times_s.to_vec(),
                last_spike_times_s: chunk.to_vec(),
                mean_s,
                stddev_s,
            }
        })
        .collect())
}

/// `neuron_id,prune_time_s,last_spike_s` rows.
pub fn pruning_csv(results: &[PruningResult]) -> String {
    let mut out = String::from("neuron_id,prune_time_s,last_spike_s\n");
    for r in results {
        for (t, l) in r.pruning_times_s.iter().zip(&r.last_spike_times_s) {
            let _ = writeln!(out, "{},{},{}", r.neuron_id, t, l);
        }
    }
    out
}

/// Runs the trial with every neuron of `neurons` pruned from `time_s` on.
pub fn prune_group(network: &Network, plan: &TrialPlan, neurons: &[usize], time_s: f64) -> Result<TrialRecord> {
    check_neurons(network, neurons)?;
    let step = plan.step_at(time_s)?;
    let mut sim = plan.simulator(network);
    for &n in neurons {
        sim = sim.suppress(n, step);
    }
    evaluate_with(sim, network, plan)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GroupLabel {
    /// Removing it kills the activity before the target.
    Sustaining,
    /// Removing it keeps the network from stopping.
    Stopping,
    Inactive,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GroupLabels {
    pub margin_s: f64,
    pub labels: Vec<(usize, GroupLabel)>,
}

/// Sizes of each group split by neuron kind.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct GroupComposition {
    pub excitatory: usize,
    pub inhibitory: usize,
}

impl GroupComposition {
    pub fn total(&self) -> usize {
        self.excitatory + self.inhibitory
    }

    pub fn inhibitory_fraction(&self) -> f64 {
        self.inhibitory as f64 / self.total() as f64
    }

    pub fn excitatory_fraction(&self) -> f64 {
        self.excitatory as f64 / self.total() as f64
    }
}

impl GroupLabels {
    pub fn members(&self, label: GroupLabel) -> Vec<usize> {
        self.labels
            .iter()
            .filter(|(_, l)| *l == label)
            .map(|(n, _)| *n)
            .collect()
    }

    pub fn composition(&self, network: &Network, label: GroupLabel) -> GroupComposition {
        let mut c = GroupComposition::default();
        for n in self.members(label) {
            match network.kind(n) {
                NeuronKind::Excitatory => c.excitatory += 1,
                NeuronKind::Inhibitory => c.inhibitory += 1,
            }
        }
        c
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("neuron_id,label\n");
        for (n, l) in &self.labels {
            let name = match l {
                GroupLabel::Sustaining => "sustaining",
                GroupLabel::Stopping => "stopping",
                GroupLabel::Inactive => "inactive",
            };
            let _ = writeln!(out, "{n},{name}");
        }
        out
    }
}

/// Labels each pruned neuron by where its mean last spike falls relative to
/// the target stop time. `margin_s` defaults to a quarter of the sustain
/// duration.
pub fn classify_groups(results: &[PruningResult], plan: &TrialPlan, margin_s: Option<f64>) -> GroupLabels {
    let margin_s = margin_s.unwrap_or(0.25 * plan.spec.target_sustain_s);
    let stop = plan.step_to_s(plan.target_stop_step);
    let labels = results
        .iter()
        .map(|r| {
            let label = if r.mean_s > stop + margin_s {
                GroupLabel::Stopping
            } else if r.mean_s < stop - margin_s {
                GroupLabel::Sustaining
            } else {
                GroupLabel::Inactive
            };
            (r.neuron_id, label)
        })
        .collect();
    GroupLabels { margin_s, labels }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::trial::TrialSpec;

    fn result(neuron_id: usize, mean_s: f64) -> PruningResult {
        PruningResult {
            neuron_id,
            pruning_times_s: vec![1.0],
            last_spike_times_s: vec![mean_s],
            mean_s,
            stddev_s: 0.0,
        }
    }

    #[test]
    fn default_times_for_two_seconds() {
        let plan = TrialSpec::default().plan().unwrap();
        let t = default_prune_times(&plan);
        assert_eq!(t.len(), 20);
        assert_eq!(t[0], 1.0);
        assert_eq!(t[19], 2.9);
        assert_eq!(t[3], 1.3);
    }

    #[test]
    fn classification_boundaries() {
        let plan = TrialSpec::default().plan().unwrap(); // stop at 3 s, margin 0.5
        let g = classify_groups(&[result(5, 7.0), result(6, 1.9), result(7, 3.0)], &plan, None);
        assert_eq!(g.margin_s, 0.5);
        assert_eq!(
            g.labels,
            vec![
                (5, GroupLabel::Stopping),
                (6, GroupLabel::Sustaining),
                (7, GroupLabel::Inactive)
            ]
        );
        assert_eq!(g.members(GroupLabel::Stopping), vec![5]);
    }

    #[test]
    fn pruning_csv_rows() {
        let csv = pruning_csv(&[result(5, 7.0)]);
        assert_eq!(csv, "neuron_id,prune_time_s,last_spike_s\n5,1,7\n");
    }
}
