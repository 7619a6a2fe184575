//! Per-synapse spread of weights across several evolved genomes.

use std::fmt::Write as _;

use serde::Serialize;

use super::stats::mean_std;
use crate::error::{Error, Result};
use crate::genome::{decode, Genome};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct WeightDeviationMap {
    /// `(pre, post, population std of the signed weight)` in canonical
    /// synapse order.
    pub entries: Vec<(usize, usize, f64)>,
}

impl WeightDeviationMap {
    pub fn get(&self, pre: usize, post: usize) -> Option<f64> {
        self.entries
            .iter()
            .find(|&&(a, b, _)| a == pre && b == post)
            .map(|e| e.2)
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("pre,post,stddev\n");
        for (a, b, s) in &self.entries {
            let _ = writeln!(out, "{a},{b},{s}");
        }
        out
    }
}

pub fn weight_deviation(genomes: &[Genome]) -> Result<WeightDeviationMap> {
    if genomes.len() < 2 {
        return Err(Error::config("need ≥ 2 genomes"));
    }
    let layout = genomes[0].layout;
    if genomes.iter().any(|g| g.layout != layout) {
        return Err(Error::config("genomes have different layouts"));
    }
    let nets = genomes.iter().map(decode).collect::<Result<Vec<_>>>()?;
    let entries = layout
        .topology
        .synapses()
        .map(|(a, b)| {
            let ws: Vec<f64> = nets.iter().map(|n| n.weight(a, b)).collect();
            (a, b, mean_std(&ws).expect("at least two genomes").1)
        })
        .collect();
    Ok(WeightDeviationMap { entries })
}
