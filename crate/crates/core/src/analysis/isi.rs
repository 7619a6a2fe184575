//! Inter-spike interval statistics per neuron.

use std::ops::Range;

use serde::Serialize;

use super::stats::mean_std;
use crate::snn::SpikeLog;
use crate::trial::TrialPlan;

/// Named protocol phases.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Phase {
    Stimulated,
    SelfSustained,
}

impl Phase {
    /// Step range `[start, end)` of the phase under `plan`.
    pub fn window(self, plan: &TrialPlan) -> Range<u64> {
        match self {
            Phase::Stimulated => 0..plan.stimulation_steps,
            Phase::SelfSustained => plan.stimulation_steps..plan.target_stop_step,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct NeuronIsi {
    pub neuron: usize,
    pub isis_ms: Vec<f64>,
    pub mean_ms: f64,
    /// Population standard deviation.
    pub std_ms: f64,
    /// `std_ms - mean_ms`.
    pub deviation_ms: f64,
    /// `std_ms / mean_ms`.
    pub cv: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct IsiStats {
    pub window: Range<u64>,
    pub neurons: Vec<NeuronIsi>,
    /// Neurons with fewer than two spikes in the window.
    pub insufficient: Vec<usize>,
}

impl IsiStats {
    pub fn get(&self, neuron: usize) -> Option<&NeuronIsi> {
        self.neurons.iter().find(|n| n.neuron == neuron)
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("neuron,n_isi,mean_ms,std_ms,deviation_ms,cv\n");
        for n in &self.neurons {
            out.push_str(&format!(
                "{},{},{},{},{},{}\n",
                n.neuron,
                n.isis_ms.len(),
                n.mean_ms,
                n.std_ms,
                n.deviation_ms,
                n.cv
            ));
        }
        for n in &self.insufficient {
            out.push_str(&format!("{n},0,undef,undef,undef,undef\n"));
        }
        out
    }
}

/// ISIs between consecutive spikes that both fall in `window`, for every
/// neuron in `neurons`.
pub fn isi_stats(log: &SpikeLog, window: Range<u64>, dt_ms: f64, neurons: Range<usize>) -> IsiStats {
    let mut per_neuron: Vec<Vec<u64>> = vec![Vec::new(); neurons.len()];
    for e in log.events() {
        let n = e.neuron as usize;
        if window.contains(&e.step) && neurons.contains(&n) {
            per_neuron[n - neurons.start].push(e.step);
        }
    }
    let mut stats = IsiStats {
        window,
        neurons: Vec::new(),
        insufficient: Vec::new(),
    };
    for (offset, steps) in per_neuron.iter().enumerate() {
        let neuron = neurons.start + offset;
        if steps.len() < 2 {
            stats.insufficient.push(neuron);
            continue;
        }
        let isis_ms: Vec<f64> = steps
            .windows(2)
            .map(|w| (w[1] - w[0]) as f64 * dt_ms)
            .collect();
        let (mean_ms, std_ms) = mean_std(&isis_ms).expect("non-empty");
        stats.neurons.push(NeuronIsi {
            neuron,
            mean_ms,
            std_ms,
            deviation_ms: std_ms - mean_ms,
            cv: std_ms / mean_ms,
            isis_ms,
        });
    }
    stats
}
