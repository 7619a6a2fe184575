//! Spread of each synapse's weight across several genomes.
//!
//! `cargo run --example weight_deviation -- a.json b.json [...]`
//! Without arguments, compares three random genomes.

use snn_memory::analysis::weight_deviation;
use snn_memory::genome::{random_genome, Genome, GenomeLayout};

fn main() -> snn_memory::Result<()> {
    let paths: Vec<String> = std::env::args().skip(1).collect();
    let genomes = if paths.is_empty() {
        (0..3).map(|s| random_genome(GenomeLayout::default(), s)).collect()
    } else {
        paths.iter().map(Genome::load).collect::<snn_memory::Result<Vec<_>>>()?
    };
    let map = weight_deviation(&genomes)?;
    let mut sorted = map.entries.clone();
    sorted.sort_by(|a, b| b.2.total_cmp(&a.2));
    let nonzero = sorted.iter().filter(|e| e.2 > 0.0).count();
    println!("{} genomes, {nonzero} of {} synapses vary", genomes.len(), sorted.len());
    for (pre, post, sd) in sorted.iter().take(5) {
        println!("{pre:3} -> {post:3}: std {sd:.4}");
    }
    Ok(())
}
