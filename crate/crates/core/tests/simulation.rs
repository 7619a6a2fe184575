//! Cross-module invariants of the simulator and the analyses.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use snn_memory::analysis::stats::pearson;
use snn_memory::analysis::{export_raster, isi_stats, prune_group, weight_sweep};
use snn_memory::evolution::{evaluate_population, Parallelism};
use snn_memory::genome::{decode, random_genome, Genome, GenomeLayout};
use snn_memory::snn::{Network, NeuronKind, NeuronParams, SimClock, Simulator, StimulusPattern, StimulusSpec, Topology};
use snn_memory::trial::{evaluate, TrialSpec};

const FIXTURE: &str = concat!(env!("CARGO_MANIFEST_DIR"), "/tests/fixtures/champion_2s.json");

fn random_network(rng: &mut ChaCha8Rng) -> Network {
    let topo = Topology::new(rng.random_range(1..4), rng.random_range(0..12), 1).unwrap();
    let layout = GenomeLayout::new(topo);
    let scale: f64 = rng.random_range(0.2..1.0);
    let genes = (0..layout.total())
        .map(|i| if i < layout.kind_gene_count() { rng.random() } else { scale * rng.random::<f64>() })
        .collect();
    decode(&Genome::new(layout, genes).unwrap()).unwrap()
}

#[test]
fn early_exit_never_changes_the_log() {
    let mut rng = ChaCha8Rng::seed_from_u64(1234);
    let clock = SimClock::new(0.1).unwrap();
    let mut exited_early = 0;
    for _ in 0..150 {
        let net = random_network(&mut rng);
        let pattern = if rng.random_bool(0.5) {
            StimulusPattern::Constant
        } else {
            StimulusPattern::Periodic { on_steps: rng.random_range(1..200), off_steps: rng.random_range(1..200) }
        };
        let stim = StimulusSpec { amplitude: rng.random_range(0.0..20.0), pattern };
        let stim_steps = rng.random_range(0..3000);
        let total = stim_steps + rng.random_range(1..60_000);
        let mut sim = Simulator::new(&net, clock).stimulus(stim, stim_steps);
        if rng.random_bool(0.3) {
            sim = sim.suppress(rng.random_range(0..net.len()), rng.random_range(0..total));
        }
        let fast = sim.clone().early_exit(true);
        let full = sim.early_exit(false);
        let mut log_fast = snn_memory::snn::SpikeLog::new();
        let steps = fast.run(total, &mut log_fast).unwrap();
        if steps < total {
            exited_early += 1;
        }
        assert_eq!(log_fast, full.run_log(total).unwrap());
    }
    assert!(exited_early > 10, "early exit never triggered ({exited_early})");
}

#[test]
fn pruned_log_matches_before_pruning_step() {
    let net = decode(&Genome::load(FIXTURE).unwrap()).unwrap();
    let plan = TrialSpec::default().plan().unwrap();
    let base = evaluate(&net, &plan).unwrap();
    for (neuron, t) in [(10usize, 1.5), (30, 2.2), (64, 1.0)] {
        let pruned = prune_group(&net, &plan, &[neuron], t).unwrap();
        let cut = plan.step_at(t).unwrap();
        let before = |log: &snn_memory::snn::SpikeLog| -> Vec<_> {
            log.events().iter().filter(|e| e.step < cut).copied().collect()
        };
        assert_eq!(before(&base.spike_log), before(&pruned.spike_log));
        assert!(pruned.spike_log.spike_steps(neuron).iter().all(|&s| s < cut));
    }
    let empty = prune_group(&net, &plan, &[], 1.5).unwrap();
    assert_eq!(empty, base);
}

#[test]
fn input_pruning_after_stimulation_is_a_no_op() {
    let net = decode(&Genome::load(FIXTURE).unwrap()).unwrap();
    let plan = TrialSpec::default().plan().unwrap();
    let base = evaluate(&net, &plan).unwrap();
    for input in net.topology().inputs() {
        let rec = prune_group(&net, &plan, &[input], 1.0).unwrap();
        assert_eq!(rec.last_output_spike_step, base.last_output_spike_step);
    }
}

#[test]
fn isi_and_raster_agree_on_counts() {
    let net = decode(&Genome::load(FIXTURE).unwrap()).unwrap();
    let plan = TrialSpec::default().plan().unwrap();
    let rec = evaluate(&net, &plan).unwrap();
    let isi = isi_stats(&rec.spike_log, 0..plan.total_steps, 0.1, 0..net.len());
    let raster = export_raster(&rec.spike_log, 3.5, 0.1).unwrap();
    let mut raster_counts = vec![0u64; net.len()];
    for r in &raster.rows {
        raster_counts[r.neuron as usize] += u64::from(r.count);
    }
    for n in &isi.neurons {
        assert_eq!(n.isis_ms.len() as u64 + 1, raster_counts[n.neuron]);
    }
    for &n in &isi.insufficient {
        assert!(raster_counts[n] < 2);
    }
    let total: u64 = raster.step_totals.iter().map(|&(_, c)| u64::from(c)).sum();
    assert_eq!(total, rec.spike_log.len() as u64);
}

#[test]
fn population_evaluation_edge_cases() {
    let plan = TrialSpec::default().plan().unwrap();
    assert!(evaluate_population(&[], &plan, Parallelism::Parallel).is_empty());
    let g = random_genome(GenomeLayout::default(), 3);
    let f: Vec<f64> = evaluate_population(&[g.clone(), g.clone(), g], &plan, Parallelism::Parallel)
        .into_iter()
        .map(Result::unwrap)
        .collect();
    assert!(f[0] == f[1] && f[1] == f[2]);
}

#[test]
fn sweep_marks_flat_synapses_undefined_and_matches_oracle() {
    // 1 input -> 1 hidden -> 1 output; the output hears nothing when the
    // hidden -> output weight is zero, so sweeping input -> hidden is flat.
    let topo = Topology::new(1, 1, 1).unwrap();
    let kinds = vec![NeuronKind::Excitatory; 3];
    let mut net = Network::with_kinds(topo, kinds, NeuronParams::default()).unwrap();
    net.set_weight(0, 1, 1.0).unwrap();
    let spec = TrialSpec { stimulation_s: 0.1, target_sustain_s: 0.1, silence_window_s: 0.1, ..Default::default() };
    let plan = spec.plan().unwrap();
    let grid = [0.0, 0.25, 0.5, 0.75, 1.0];
    let map = weight_sweep(&net, &plan, &grid, Some(&[(0, 1)]), Parallelism::Sequential).unwrap();
    assert_eq!(map.entries[0].correlation, None);

    // driving the output directly gives a defined, oracle-consistent value
    let map = weight_sweep(&net, &plan, &grid, Some(&[(0, 2), (1, 2)]), Parallelism::Parallel).unwrap();
    for e in &map.entries {
        assert_eq!(e.correlation, pearson(&e.strengths, &e.last_spike_s).map(f64::abs));
    }
    let direct = map.get(0, 2).unwrap();
    assert!(direct.correlation.unwrap() > 0.5);
    // original network untouched
    assert_eq!(net.weight(0, 2), 0.0);
}
