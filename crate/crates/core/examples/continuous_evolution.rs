//! Continuous evolution over a schedule of targets, with a checkpoint taken
//! halfway and resumed. The resumed run reproduces the uninterrupted one.
//!
//! `cargo run --release --example continuous_evolution`

use snn_memory::evolution::{Checkpoint, Evolution, GaConfig, Schedule};
use snn_memory::genome::GenomeLayout;
use snn_memory::snn::Topology;
use snn_memory::trial::TrialSpec;

fn main() -> snn_memory::Result<()> {
    let cfg = GaConfig {
        population_size: 32,
        max_generations: 300,
        success_fitness: 0.9,
        master_seed: 3,
        ..GaConfig::default()
    };
    let schedule = Schedule::new(vec![0.3, 0.4, 0.5])?;
    let trial = TrialSpec {
        silence_window_s: 1.5,
        ..TrialSpec::default()
    };
    let layout = GenomeLayout::new(Topology::new(5, 20, 1)?);
    let fresh = || Evolution::new(cfg.clone(), schedule.clone(), trial, layout);

    let mut evo = fresh()?;
    evo.run_until(20)?;
    let json = serde_json::to_string(&evo.checkpoint()).expect("checkpoint serializes");
    println!("checkpoint at generation {} ({} bytes)", evo.generation(), json.len());
    let cp: Checkpoint = serde_json::from_str(&json).expect("checkpoint parses");
    let mut resumed = Evolution::resume(cp)?;
    resumed.run()?;

    let mut reference = fresh()?;
    reference.run()?;

    print!("{}", resumed.log().markers_csv());
    for c in resumed.champions() {
        println!(
            "stage {} ({} s): generation {}, fitness {:.4}",
            c.stage, c.target_sustain_s, c.generation, c.fitness
        );
    }
    println!("resumed log identical to uninterrupted run: {}", resumed.log() == reference.log());
    Ok(())
}
