//! Run the stimulate / sustain / silence protocol on one genome.
//!
//! `cargo run --release --example run_trial -- [genome.json]`
//! Without an argument the shipped 2 s champion is used.

use snn_memory::genome::{decode, Genome};
use snn_memory::trial::{evaluate, TrialSpec};

fn main() -> snn_memory::Result<()> {
    let path = std::env::args().nth(1).unwrap_or_else(|| {
        concat!(env!("CARGO_MANIFEST_DIR"), "/tests/fixtures/champion_2s.json").to_string()
    });
    let net = decode(&Genome::load(&path)?)?;
    let plan = TrialSpec::default().plan()?;
    let rec = evaluate(&net, &plan)?;
    let summary = rec.summary(&plan);
    println!("genome: {path}");
    let last = summary
        .last_output_spike_s
        .map_or_else(|| "none".to_string(), |s| format!("{s:.4} s"));
    println!(
        "target stop {:.3} s, last output spike {last}, fitness {:.5}, {} spikes total",
        plan.step_to_s(plan.target_stop_step),
        summary.fitness,
        summary.total_spikes
    );
    Ok(())
}
