//! Acceptance gate. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any criterion fails.

use std::path::Path;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use snn_memory::analysis::stats::pearson;
use snn_memory::analysis::{
    classify_groups, default_prune_times, isi_stats, prune_sweep, sample_landscape, GroupLabel, Phase,
};
use snn_memory::evolution::{evaluate_population, Checkpoint, Evolution, GaConfig, Parallelism, Schedule};
use snn_memory::genome::{decode, random_genome, Genome, GenomeLayout};
use snn_memory::snn::{NeuronKind, SimClock, SpikeEvent, SpikeLog, Simulator, StimulusSpec, Topology};
use snn_memory::trial::{evaluate, fitness, TrialSpec};

const CHAMPION_FIXTURE: &str = "tests/fixtures/champion_2s.json";

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        pass,
        detail: detail.into(),
    }
}

// ---------------------------------------------------------------- 1

fn fitness_formula() -> Outcome {
    let a = fitness(30000, 30000).unwrap();
    let b = fitness(31000, 30000).unwrap();
    let c = fitness(0, 30000).unwrap();
    let pass = a == 1.0 && (b - (-0.5f64).exp()).abs() < 1e-12 && (c - (-1.0f64 / 0.245).exp()).abs() < 1e-12;
    outcome(pass, format!("f(30000)={a} f(31000)={b:.12} f(0)={c:.12}"))
}

// ---------------------------------------------------------------- 2

/// Textbook forward-Euler regular-spiking neuron, kept separate from the
/// library on purpose.
fn scalar_oracle(current: f64, dt: f64, steps: u64) -> Vec<u64> {
    let (a, b, c, d) = (0.02, 0.2, -65.0, 6.0);
    let mut v: f64 = -65.0;
    let mut u: f64 = b * v;
    let mut spikes = Vec::new();
    for step in 0..steps {
        let dv = 0.04 * v * v + 5.0 * v + 140.0 - u + current;
        let du = a * (b * v - u);
        v += dt * dv;
        u += dt * du;
        if v >= 30.0 {
            spikes.push(step);
            v = c;
            u += d;
        }
    }
    spikes
}

fn integrator_oracle() -> Outcome {
    let steps = 20_000;
    let expected = scalar_oracle(10.0, 0.1, steps);
    // one lone input neuron driven for the whole horizon
    let topo = Topology::new(1, 0, 1).unwrap();
    let net = snn_memory::snn::Network::silent(topo).unwrap();
    let clock = SimClock::new(0.1).unwrap();
    let log = Simulator::new(&net, clock)
        .stimulus(StimulusSpec::default(), steps)
        .early_exit(false)
        .run_log(steps)
        .unwrap();
    let got = log.spike_steps(0);
    outcome(
        got == expected && !got.is_empty(),
        format!("{} spikes, first at step {:?}, oracle agrees={}", got.len(), got.first(), got == expected),
    )
}

// ---------------------------------------------------------------- 3

fn genome_arithmetic() -> Outcome {
    let layout = GenomeLayout::default();
    let counts_ok =
        layout.synapse_gene_count() == 3905 && layout.kind_gene_count() == 60 && layout.total() == 3965;
    let mut violations = 0usize;
    for seed in 0..1000 {
        let g = random_genome(layout, seed);
        let net = decode(&g).unwrap();
        let topo = layout.topology;
        let mut n_syn = 0;
        for (pre, post) in topo.synapses() {
            n_syn += 1;
            let w = net.weight(pre, post);
            let gene = g.genes[layout.synapse_gene_index(pre, post).unwrap()];
            let expected = match net.kind(pre) {
                NeuronKind::Excitatory => gene,
                NeuronKind::Inhibitory => -gene,
            };
            let kind_ok = topo.hidden().contains(&pre)
                || net.kind(pre) == NeuronKind::Excitatory;
            if w != expected || !kind_ok {
                violations += 1;
            }
        }
        if n_syn != 3905 {
            violations += 1;
        }
    }
    outcome(
        counts_ok && violations == 0,
        format!(
            "synapses={} kind genes={} total={} sign-law violations over 1000 genomes={violations}",
            layout.synapse_gene_count(),
            layout.kind_gene_count(),
            layout.total()
        ),
    )
}

// ---------------------------------------------------------------- 4

fn desk_layout() -> GenomeLayout {
    GenomeLayout::new(Topology::new(5, 20, 1).unwrap())
}

fn desk_trial() -> TrialSpec {
    TrialSpec {
        stimulation_s: 1.0,
        target_sustain_s: 0.5,
        silence_window_s: 2.0,
        ..TrialSpec::default()
    }
}

fn determinism() -> Outcome {
    let cfg = GaConfig {
        population_size: 16,
        max_generations: 8,
        success_fitness: 0.6,
        master_seed: 11,
        ..GaConfig::default()
    };
    let schedule = Schedule::new(vec![0.5, 0.6]).unwrap();
    let new = || Evolution::new(cfg.clone(), schedule.clone(), desk_trial(), desk_layout()).unwrap();

    let mut whole = new();
    whole.run().unwrap();

    let mut first = new();
    first.run_until(5).unwrap();
    let text = serde_json::to_string(&first.checkpoint()).unwrap();
    let cp: Checkpoint = serde_json::from_str(&text).unwrap();
    let mut resumed = Evolution::resume(cp).unwrap();
    resumed.run().unwrap();

    let mut sequential = new().parallelism(Parallelism::Sequential);
    sequential.run().unwrap();

    let resume_ok = whole.log() == resumed.log()
        && whole.champions() == resumed.champions()
        && whole.population() == resumed.population();
    let seq_ok = whole.log() == sequential.log();

    let genomes: Vec<Genome> = (0..24).map(|s| random_genome(GenomeLayout::default(), 500 + s)).collect();
    let plan = TrialSpec::default().plan().unwrap();
    let bits = |p| -> Vec<u64> {
        evaluate_population(&genomes, &plan, p)
            .into_iter()
            .map(|r| r.unwrap().to_bits())
            .collect()
    };
    let eval_ok = bits(Parallelism::Parallel) == bits(Parallelism::Sequential);

    outcome(
        resume_ok && seq_ok && eval_ok,
        format!(
            "{} generations; resumed==uninterrupted: {resume_ok}; sequential GA==parallel GA: {seq_ok}; \
             parallel==sequential fitness vector (24 genomes): {eval_ok}",
            whole.log().records.len()
        ),
    )
}

// ---------------------------------------------------------------- 5

fn desk_evolvability() -> Outcome {
    let mut notes = Vec::new();
    for seed in 0..5u64 {
        let cfg = GaConfig {
            population_size: 64,
            max_generations: 2000,
            success_fitness: 0.9,
            master_seed: seed,
            ..GaConfig::default()
        };
        let t = Instant::now();
        let mut evo = Evolution::new(cfg, Schedule::new(vec![0.5]).unwrap(), desk_trial(), desk_layout()).unwrap();
        evo.run().unwrap();
        let best = evo.log().records.iter().map(|r| r.best_fitness).fold(0.0, f64::max);
        let gens = evo.log().records.len();
        notes.push(format!("seed {seed}: best {best:.4} after {gens} generations ({:.0?})", t.elapsed()));
        if best > 0.9 {
            return outcome(true, notes.join("; "));
        }
    }
    outcome(false, notes.join("; "))
}

// ---------------------------------------------------------------- 6

fn landscape_rarity() -> Outcome {
    let plan = TrialSpec::default().plan().unwrap();
    let t = Instant::now();
    let s = sample_landscape(10_000, &plan, GenomeLayout::default(), 2024, Parallelism::Parallel).unwrap();
    let n = s.n_sampled as f64;
    let full = s.counts.sustained_full_trial as f64 / n;
    let window = s.counts.stopped_in_window as f64 / n;
    outcome(
        full <= 0.01 && window <= 0.001 && s.counts.total() == s.n_sampled,
        format!(
            "n=10000: sustained_full_trial={} ({:.3}%), stopped_in_window={} ({:.3}%), silent_or_brief={} ({:.0?})",
            s.counts.sustained_full_trial,
            100.0 * full,
            s.counts.stopped_in_window,
            100.0 * window,
            s.counts.silent_or_brief,
            t.elapsed()
        ),
    )
}

// ---------------------------------------------------------------- 7

fn two_pass_mean_std(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let m = xs.iter().sum::<f64>() / n;
    let var = xs.iter().map(|x| (x - m) * (x - m)).sum::<f64>() / n;
    (m, var.sqrt())
}

fn two_pass_pearson(x: &[f64], y: &[f64]) -> f64 {
    let (mx, _) = two_pass_mean_std(x);
    let (my, _) = two_pass_mean_std(y);
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = x.iter().map(|a| (a - mx) * (a - mx)).sum();
    let syy: f64 = y.iter().map(|b| (b - my) * (b - my)).sum();
    sxy / (sxx * syy).sqrt()
}

fn statistics_oracles() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(77);
    let mut worst: f64 = 0.0;
    let dt = 0.1;
    for _ in 0..100 {
        let n_spikes = rng.random_range(2..200);
        let mut step = rng.random_range(0..50u64);
        let mut steps = Vec::with_capacity(n_spikes);
        for _ in 0..n_spikes {
            steps.push(step);
            step += rng.random_range(1..400u64);
        }
        let log = SpikeLog::from_events(steps.iter().map(|&s| SpikeEvent { step: s, neuron: 0 }).collect()).unwrap();
        let stats = isi_stats(&log, 0..u64::MAX, dt, 0..1);
        let got = stats.get(0).unwrap();
        let isis: Vec<f64> = steps.windows(2).map(|w| (w[1] - w[0]) as f64 * dt).collect();
        let (m, s) = two_pass_mean_std(&isis);
        worst = worst
            .max((got.cv - s / m).abs())
            .max((got.deviation_ms - (s - m)).abs())
            .max((got.mean_ms - m).abs());

        let len = rng.random_range(3..300);
        let x: Vec<f64> = (0..len).map(|_| rng.random_range(-5.0..5.0)).collect();
        let y: Vec<f64> = x.iter().map(|v| 0.3 * v + rng.random_range(-2.0..2.0)).collect();
        worst = worst.max((pearson(&x, &y).unwrap() - two_pass_pearson(&x, &y)).abs());
    }
    outcome(worst <= 1e-9, format!("max |library - brute force| over 100 trains / vector pairs = {worst:.3e}"))
}

// ---------------------------------------------------------------- 8

fn conditional_replication() -> Option<Outcome> {
    if !Path::new(CHAMPION_FIXTURE).exists() {
        return None;
    }
    let genome = Genome::load(CHAMPION_FIXTURE).unwrap();
    let net = decode(&genome).unwrap();
    let plan = TrialSpec::default().plan().unwrap();
    let rec = evaluate(&net, &plan).unwrap();

    let hidden: Vec<usize> = net.topology().hidden().collect();
    let results =
        prune_sweep(&net, &plan, &hidden, &default_prune_times(&plan), Parallelism::Parallel).unwrap();
    let groups = classify_groups(&results, &plan, None);
    let stopping = groups.composition(&net, GroupLabel::Stopping);
    let sustaining = groups.composition(&net, GroupLabel::Sustaining);
    let two_groups = stopping.total() > 0 && sustaining.total() > 0;
    let composition_ok =
        two_groups && stopping.inhibitory_fraction() >= 0.9 && sustaining.excitatory_fraction() >= 0.9;

    let window = Phase::SelfSustained.window(&plan);
    let isi = isi_stats(&rec.spike_log, window.clone(), plan.clock.dt_ms(), 0..net.len());
    let max_cv = isi.neurons.iter().map(|n| n.cv).fold(0.0, f64::max);
    let n_cv_high = isi.neurons.iter().filter(|n| n.cv >= 0.1).count();
    let cv_ok = !isi.neurons.is_empty() && max_cv < 0.1;

    let width = (window.end - window.start) as usize;
    let mut per_step = vec![0u32; width];
    for e in rec.spike_log.events() {
        if window.contains(&e.step) {
            per_step[(e.step - window.start) as usize] += 1;
        }
    }
    let mean = |c: &[u32]| c.iter().map(|&x| f64::from(x)).sum::<f64>() / c.len() as f64;
    let whole = mean(&per_step);
    let tail = mean(&per_step[width - width / 10..]);
    let decay_ok = whole > 0.0 && tail >= 0.5 * whole;

    Some(outcome(
        composition_ok && cv_ok && decay_ok,
        format!(
            "last output spike {:.4} s, fitness {:.4}; stopping group {}I/{}E, sustaining group {}I/{}E \
             (composition ok: {composition_ok}); max CV {max_cv:.3}, {n_cv_high}/{} neurons with CV >= 0.1 \
             (ok: {cv_ok}); spikes/step last 10% {tail:.2} vs window {whole:.2} (ok: {decay_ok})",
            plan.step_to_s(rec.last_output_spike_step.unwrap_or(0)),
            rec.fitness,
            stopping.inhibitory,
            stopping.excitatory,
            sustaining.inhibitory,
            sustaining.excitatory,
            isi.neurons.len(),
        ),
    ))
}

fn main() {
    let criteria: [(&str, fn() -> Option<Outcome>); 8] = [
        ("1 fitness formula", || Some(fitness_formula())),
        ("2 integrator oracle", || Some(integrator_oracle())),
        ("3 genome arithmetic", || Some(genome_arithmetic())),
        ("4 determinism", || Some(determinism())),
        ("5 desk-scale evolvability", || Some(desk_evolvability())),
        ("6 landscape rarity", || Some(landscape_rarity())),
        ("7 statistics oracles", || Some(statistics_oracles())),
        ("8 conditional replication", conditional_replication),
    ];
    let mut failed = 0;
    for (name, check) in criteria {
        let t = Instant::now();
        match check() {
            Some(o) => {
                if !o.pass {
                    failed += 1;
                }
                println!(
                    "criterion {name}: {} ({:.1?}) {}",
                    if o.pass { "PASS" } else { "FAIL" },
                    t.elapsed(),
                    o.detail
                );
            }
            None => println!("criterion {name}: SKIP (no champion fixture at {CHAMPION_FIXTURE})"),
        }
    }
    if failed > 0 {
        println!("{failed} acceptance criteria failed");
        std::process::exit(1);
    }
    println!("all acceptance criteria passed");
}
