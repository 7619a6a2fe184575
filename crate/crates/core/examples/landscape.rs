//! How rare self-sustaining networks are among random genomes.
//!
//! `cargo run --release --example landscape -- [n] [seed]`

use snn_memory::analysis::sample_landscape;
use snn_memory::evolution::Parallelism;
use snn_memory::genome::GenomeLayout;
use snn_memory::trial::TrialSpec;

fn main() -> snn_memory::Result<()> {
    let mut args = std::env::args().skip(1);
    let n = args.next().map_or(1000, |s| s.parse().expect("n"));
    let seed = args.next().map_or(0, |s| s.parse().expect("seed"));
    let plan = TrialSpec::default().plan()?;
    let sample = sample_landscape(n, &plan, GenomeLayout::default(), seed, Parallelism::Parallel)?;
    let pct = |k: u64| 100.0 * k as f64 / n as f64;
    let c = sample.counts;
    println!("n = {n}, seed = {seed}");
    println!("  silent or brief        {:6} ({:.2}%)", c.silent_or_brief, pct(c.silent_or_brief));
    println!("  stopped after target   {:6} ({:.2}%)", c.stopped_in_window, pct(c.stopped_in_window));
    println!("  sustained whole trial  {:6} ({:.2}%)", c.sustained_full_trial, pct(c.sustained_full_trial));
    Ok(())
}
