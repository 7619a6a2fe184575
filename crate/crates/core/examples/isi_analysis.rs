//! Inter-spike interval regularity during stimulation and self-sustained
//! activity.
//!
//! `cargo run --release --example isi_analysis -- [genome.json]`

use snn_memory::analysis::{isi_stats, Phase};
use snn_memory::genome::{decode, Genome};
use snn_memory::trial::{evaluate, TrialSpec};

fn main() -> snn_memory::Result<()> {
    let path = std::env::args().nth(1).unwrap_or_else(|| {
        concat!(env!("CARGO_MANIFEST_DIR"), "/tests/fixtures/champion_2s.json").to_string()
    });
    let net = decode(&Genome::load(&path)?)?;
    let plan = TrialSpec::default().plan()?;
    let rec = evaluate(&net, &plan)?;

    for phase in [Phase::Stimulated, Phase::SelfSustained] {
        let stats = isi_stats(&rec.spike_log, phase.window(&plan), plan.clock.dt_ms(), net.topology().hidden());
        let mut cvs: Vec<f64> = stats.neurons.iter().map(|n| n.cv).collect();
        cvs.sort_by(f64::total_cmp);
        let mean_isi =
            stats.neurons.iter().map(|n| n.mean_ms).sum::<f64>() / stats.neurons.len().max(1) as f64;
        println!(
            "{phase:?}: {} neurons with ISIs, mean ISI {mean_isi:.2} ms, CV median {:.3} max {:.3}, {} too sparse",
            stats.neurons.len(),
            cvs.get(cvs.len() / 2).copied().unwrap_or(f64::NAN),
            cvs.last().copied().unwrap_or(f64::NAN),
            stats.insufficient.len()
        );
    }
    Ok(())
}
