//! Binned spike rasters and per-step population counts.

use std::fmt::Write as _;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::snn::SpikeLog;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct RasterBin {
    pub bin: u64,
    pub neuron: u32,
    pub count: u32,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Raster {
    pub bin_ms: f64,
    /// Nonzero bins sorted by `(bin, neuron)`.
    pub rows: Vec<RasterBin>,
    /// `(step, spikes in that step)` for every step with at least one spike.
    pub step_totals: Vec<(u64, u32)>,
}

impl Raster {
    pub fn to_csv(&self) -> String {
        let mut out = String::from("bin_index,neuron_id,spike_count\n");
        for r in &self.rows {
            let _ = writeln!(out, "{},{},{}", r.bin, r.neuron, r.count);
        }
        out
    }

    pub fn step_totals_csv(&self) -> String {
        let mut out = String::from("step,spike_count\n");
        for (s, c) in &self.step_totals {
            let _ = writeln!(out, "{s},{c}");
        }
        out
    }
}

/// Bins `log` into windows of `bin_ms`. Step `s` falls in bin
/// `floor(s * dt / bin_ms)`, computed in integer arithmetic when the bin is
/// a whole number of steps.
pub fn export_raster(log: &SpikeLog, bin_ms: f64, dt_ms: f64) -> Result<Raster> {
    if !(bin_ms > 0.0 && bin_ms.is_finite()) {
        return Err(Error::config(format!("raster bin must be positive, got {bin_ms}")));
    }
    if !(dt_ms > 0.0 && dt_ms.is_finite()) {
        return Err(Error::config(format!("time step must be positive, got {dt_ms}")));
    }
    let ratio = bin_ms / dt_ms;
    let whole = ratio.round();
    let bin_of = |step: u64| -> u64 {
        if (ratio - whole).abs() < 1e-9 && whole >= 1.0 {
            step / whole as u64
        } else {
            (step as f64 * dt_ms / bin_ms).floor() as u64
        }
    };

    let mut rows: Vec<RasterBin> = Vec::new();
    let mut step_totals: Vec<(u64, u32)> = Vec::new();
    let mut keyed: Vec<(u64, u32)> = log.events().iter().map(|e| (bin_of(e.step), e.neuron)).collect();
    keyed.sort_unstable();
    for (bin, neuron) in keyed {
        match rows.last_mut() {
            Some(r) if r.bin == bin && r.neuron == neuron => r.count += 1,
            _ => rows.push(RasterBin { bin, neuron, count: 1 }),
        }
    }
    for e in log.events() {
        match step_totals.last_mut() {
            Some((s, c)) if *s == e.step => *c += 1,
            _ => step_totals.push((e.step, 1)),
        }
    }
    Ok(Raster {
        bin_ms,
        rows,
        step_totals,
    })
}
