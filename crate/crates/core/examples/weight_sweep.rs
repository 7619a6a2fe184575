//! Correlation between single-synapse strength and the stopping time.
//!
//! Sweeps the synapses entering the first few hidden neurons by default;
//! pass `all` to sweep all 3905 (slow).
//!
//! `cargo run --release --example weight_sweep -- [all]`

use snn_memory::analysis::{default_grid, weight_sweep};
use snn_memory::evolution::Parallelism;
use snn_memory::genome::{decode, Genome};
use snn_memory::trial::TrialSpec;

fn main() -> snn_memory::Result<()> {
    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/tests/fixtures/champion_2s.json");
    let net = decode(&Genome::load(path)?)?;
    let plan = TrialSpec::default().plan()?;
    let topo = *net.topology();

    let all = std::env::args().nth(1).as_deref() == Some("all");
    let subset: Vec<(usize, usize)> = topo
        .synapses()
        .filter(|&(_, post)| all || (topo.hidden().start..topo.hidden().start + 3).contains(&post))
        .collect();
    let map = weight_sweep(&net, &plan, &default_grid(), Some(&subset), Parallelism::Parallel)?;

    let defined = map.entries.iter().filter(|e| e.correlation.is_some()).count();
    println!("{} synapses swept, {defined} with a defined correlation", map.entries.len());
    for (post, c) in map.column_means() {
        println!("post {post}: mean C = {c:.3}");
    }
    if let Some(best) = map
        .entries
        .iter()
        .filter(|e| e.correlation.is_some())
        .max_by(|a, b| a.correlation.partial_cmp(&b.correlation).expect("finite"))
    {
        println!("strongest: {} -> {} with C = {:.3}", best.pre, best.post, best.correlation.unwrap_or(0.0));
    }
    Ok(())
}
