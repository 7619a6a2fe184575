//! Prune every hidden neuron of a champion during the sustain period and
//! split the neurons into functional groups.
//!
//! `cargo run --release --example pruning_groups -- [genome.json]`

use snn_memory::analysis::{classify_groups, default_prune_times, prune_group, prune_sweep, GroupLabel};
use snn_memory::evolution::Parallelism;
use snn_memory::genome::{decode, Genome};
use snn_memory::trial::TrialSpec;

fn main() -> snn_memory::Result<()> {
    let path = std::env::args().nth(1).unwrap_or_else(|| {
        concat!(env!("CARGO_MANIFEST_DIR"), "/tests/fixtures/champion_2s.json").to_string()
    });
    let net = decode(&Genome::load(&path)?)?;
    let plan = TrialSpec::default().plan()?;
    let hidden: Vec<usize> = net.topology().hidden().collect();
    let times = default_prune_times(&plan);
    let results = prune_sweep(&net, &plan, &hidden, &times, Parallelism::Parallel)?;
    let groups = classify_groups(&results, &plan, None);

    for label in [GroupLabel::Sustaining, GroupLabel::Stopping, GroupLabel::Inactive] {
        let c = groups.composition(&net, label);
        let means: Vec<f64> = results
            .iter()
            .filter(|r| groups.labels.contains(&(r.neuron_id, label)))
            .map(|r| r.mean_s)
            .collect();
        let avg = means.iter().sum::<f64>() / means.len().max(1) as f64;
        println!(
            "{label:?}: {} neurons ({} excitatory, {} inhibitory), mean last spike {avg:.3} s",
            c.total(),
            c.excitatory,
            c.inhibitory
        );
    }

    for label in [GroupLabel::Stopping, GroupLabel::Sustaining] {
        let rec = prune_group(&net, &plan, &groups.members(label), 2.0)?;
        let last = rec
            .last_output_spike_step
            .map_or_else(|| "none".to_string(), |s| format!("{:.4} s", plan.step_to_s(s)));
        println!("whole {label:?} group pruned at 2.0 s -> last output spike {last}");
    }
    Ok(())
}
