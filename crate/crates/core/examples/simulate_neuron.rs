//! A single regular-spiking neuron under constant drive.
//!
//! `cargo run --example simulate_neuron -- 10`

use snn_memory::snn::{step_neuron, NeuronParams};

fn main() {
    let current: f64 = std::env::args().nth(1).map_or(10.0, |s| s.parse().expect("current"));
    let dt = 0.1;
    let params = NeuronParams::REGULAR_SPIKING;
    let mut state = params.initial_state();
    let mut spikes = Vec::new();
    for step in 0..10_000u64 {
        let (next, spiked) = step_neuron(state, &params, current, dt).expect("finite dynamics");
        state = next;
        if spiked {
            spikes.push(step as f64 * dt);
        }
    }
    println!("I = {current}: {} spikes in 1 s", spikes.len());
    let first: Vec<String> = spikes.iter().take(8).map(|t| format!("{t:.1}")).collect();
    println!("first spike times (ms): {}", first.join(", "));
    if spikes.len() > 1 {
        let last_isi = spikes[spikes.len() - 1] - spikes[spikes.len() - 2];
        println!("steady-state ISI: {last_isi:.1} ms");
    }
}
