//! Build a random genome, decode it and round-trip it through JSON.

use snn_memory::genome::{decode, random_genome, Genome, GenomeLayout};
use snn_memory::snn::NeuronKind;

fn main() -> snn_memory::Result<()> {
    let layout = GenomeLayout::default();
    println!(
        "layout: {} nature genes + {} synapse genes = {}",
        layout.kind_gene_count(),
        layout.synapse_gene_count(),
        layout.total()
    );

    let genome = random_genome(layout, 7);
    let net = decode(&genome)?;
    let topo = net.topology();
    let inhibitory = topo
        .hidden()
        .filter(|&h| net.kind(h) == NeuronKind::Inhibitory)
        .count();
    println!("hidden neurons: {} inhibitory / {}", inhibitory, topo.n_hidden);

    let (pre, post) = (topo.hidden().start, topo.outputs().start);
    let idx = layout.synapse_gene_index(pre, post).expect("edge exists");
    println!(
        "synapse {pre} -> {post}: gene[{idx}] = {:.4}, weight = {:.4} ({:?} pre)",
        genome.genes[idx],
        net.weight(pre, post),
        net.kind(pre)
    );

    let back = Genome::from_json(&genome.to_json(), "memory")?;
    println!("JSON round trip exact: {}", back == genome);
    Ok(())
}
