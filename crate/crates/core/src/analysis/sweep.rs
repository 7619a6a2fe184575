//! Sensitivity of the stopping time to individual synapse strengths.

use std::fmt::Write as _;

use rayon::prelude::*;
use serde::Serialize;

use super::stats::{mean, pearson};
use crate::error::{Error, Result};
use crate::evolution::Parallelism;
use crate::snn::{LastSpike, Network};
use crate::trial::TrialPlan;

/// Magnitudes 0.00, 0.05, ..., 1.00.
pub fn default_grid() -> Vec<f64> {
    (0..=20).map(|k| k as f64 / 20.0).collect()
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SynapseSweep {
    pub pre: usize,
    pub post: usize,
    /// Grid magnitudes carrying the synapse's sign.
    pub strengths: Vec<f64>,
    pub last_spike_s: Vec<f64>,
    /// `|pearson(strengths, last_spike_s)|`; `None` when undefined.
    pub correlation: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CorrelationMap {
    pub grid: Vec<f64>,
    pub entries: Vec<SynapseSweep>,
}

impl CorrelationMap {
    pub fn get(&self, pre: usize, post: usize) -> Option<&SynapseSweep> {
        self.entries.iter().find(|e| e.pre == pre && e.post == post)
    }

    /// Mean defined correlation of the synapses entering each post-synaptic
    /// neuron, in ascending neuron order. Columns with no defined entry are
    /// left out.
    pub fn column_means(&self) -> Vec<(usize, f64)> {
        let mut posts: Vec<usize> = self.entries.iter().map(|e| e.post).collect();
        posts.sort_unstable();
        posts.dedup();
        posts
            .into_iter()
            .filter_map(|post| {
                let cs: Vec<f64> = self
                    .entries
                    .iter()
                    .filter(|e| e.post == post)
                    .filter_map(|e| e.correlation)
                    .collect();
                mean(&cs).map(|m| (post, m))
            })
            .collect()
    }

    /// Largest column mean over the median column mean.
    pub fn column_contrast(&self) -> Option<f64> {
        let mut m: Vec<f64> = self.column_means().into_iter().map(|(_, c)| c).collect();
        if m.is_empty() {
            return None;
        }
        m.sort_by(f64::total_cmp);
        let median = if m.len() % 2 == 1 {
            m[m.len() / 2]
        } else {
            0.5 * (m[m.len() / 2 - 1] + m[m.len() / 2])
        };
        Some(m[m.len() - 1] / median)
    }

    /// `pre,post,c` rows with `undef` for undefined correlations.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("pre,post,c\n");
        for e in &self.entries {
            match e.correlation {
                Some(c) => {
                    let _ = writeln!(out, "{},{},{}", e.pre, e.post, c);
                }
                None => {
                    let _ = writeln!(out, "{},{},undef", e.pre, e.post);
                }
            }
        }
        out
    }
}

/// Sweeps the magnitude of every synapse in `synapses` (all synapses when
/// `None`) over `grid`, keeping its sign and every other weight fixed.
pub fn weight_sweep(
    network: &Network,
    plan: &TrialPlan,
    grid: &[f64],
    synapses: Option<&[(usize, usize)]>,
    parallelism: Parallelism,
) -> Result<CorrelationMap> {
    if grid.is_empty() {
        return Err(Error::config("sweep grid is empty"));
    }
    if let Some(v) = grid.iter().find(|v| !(0.0..=1.0).contains(*v)) {
        return Err(Error::config(format!("sweep magnitude {v} outside [0, 1]")));
    }
    let topo = *network.topology();
    let pairs: Vec<(usize, usize)> = match synapses {
        Some(s) => {
            if let Some(&(a, b)) = s.iter().find(|&&(a, b)| !topo.has_edge(a, b)) {
                return Err(Error::config(format!("no synapse {a} -> {b}")));
            }
            s.to_vec()
        }
        None => topo.synapses().collect(),
    };

    let one = |&(pre, post): &(usize, usize)| -> Result<SynapseSweep> {
        let mut net = network.clone();
        let sign = network.kind(pre).sign();
        let mut last_spike_s = Vec::with_capacity(grid.len());
        for &m in grid {
            net.set_magnitude(pre, post, m)?;
            let mut tracker = LastSpike::new(topo.outputs());
            plan.simulator(&net).run(plan.total_steps, &mut tracker)?;
            last_spike_s.push(plan.step_to_s(tracker.last.unwrap_or(0)));
        }
        let strengths: Vec<f64> = grid.iter().map(|m| sign * m).collect();
        let correlation = pearson(&strengths, &last_spike_s).map(f64::abs);
        Ok(SynapseSweep {
            pre,
            post,
            strengths,
            last_spike_s,
            correlation,
        })
    };
    let entries = match parallelism {
        Parallelism::Sequential => pairs.iter().map(one).collect::<Result<_>>()?,
        Parallelism::Parallel => pairs.par_iter().map(one).collect::<Result<_>>()?,
    };
    Ok(CorrelationMap {
        grid: grid.to_vec(),
        entries,
    })
}
