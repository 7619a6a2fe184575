//! A desk-scale evolution: 20 hidden neurons learning to stop 0.5 s after
//! the stimulus ends.
//!
//! `cargo run --release --example desk_evolution -- [seed]`

use snn_memory::evolution::{Evolution, GaConfig, Schedule};
use snn_memory::genome::GenomeLayout;
use snn_memory::snn::Topology;
use snn_memory::trial::TrialSpec;

fn main() -> snn_memory::Result<()> {
    let seed = std::env::args().nth(1).map_or(0, |s| s.parse().expect("seed"));
    let cfg = GaConfig {
        population_size: 64,
        max_generations: 2000,
        success_fitness: 0.9,
        master_seed: seed,
        ..GaConfig::default()
    };
    let trial = TrialSpec {
        target_sustain_s: 0.5,
        silence_window_s: 2.0,
        ..TrialSpec::default()
    };
    let layout = GenomeLayout::new(Topology::new(5, 20, 1)?);
    let mut evo = Evolution::new(cfg, Schedule::new(vec![0.5])?, trial, layout)?;
    while evo.step()? {
        let r = evo.log().records.last().expect("one record per step");
        if r.generation % 10 == 0 {
            println!("generation {:4}  best {:.4}  mean {:.4}", r.generation, r.best_fitness, r.mean_fitness);
        }
    }
    match evo.champions().first() {
        Some(c) => println!("solved at generation {} with fitness {:.4}", c.generation, c.fitness),
        None => println!("no individual reached the threshold ({:?})", evo.status()),
    }
    Ok(())
}
