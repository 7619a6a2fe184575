//! Binned raster and per-step spike counts of a champion trial, as CSV.
//!
//! `cargo run --release --example raster_export -- [out_dir]`

use snn_memory::analysis::export_raster;
use snn_memory::genome::{decode, Genome};
use snn_memory::trial::{evaluate, TrialSpec};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let out = std::env::args().nth(1).unwrap_or_else(|| ".".into());
    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/tests/fixtures/champion_2s.json");
    let net = decode(&Genome::load(path)?)?;
    let plan = TrialSpec::default().plan()?;
    let rec = evaluate(&net, &plan)?;
    let raster = export_raster(&rec.spike_log, 3.5, plan.clock.dt_ms())?;

    let sustain = plan.stimulation_steps..plan.target_stop_step;
    let peak = raster
        .step_totals
        .iter()
        .filter(|(s, _)| sustain.contains(s))
        .map(|&(_, c)| c)
        .max()
        .unwrap_or(0);
    println!("{} raster rows, peak spikes in one step during sustain: {peak}", raster.rows.len());

    let dir = std::path::Path::new(&out);
    std::fs::write(dir.join("raster.csv"), raster.to_csv())?;
    std::fs::write(dir.join("spike_counts.csv"), raster.step_totals_csv())?;
    println!("wrote raster.csv and spike_counts.csv to {}", dir.display());
    Ok(())
}
