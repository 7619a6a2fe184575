//! End-to-end checks of the command-line layer, run in-process.

use std::path::{Path, PathBuf};

use snn_memory::cli::{
    cmd_analyze, run_from_args, AnalyzeCommand, Manifest, WdevArgs, EXIT_CONFIG, EXIT_IO, EXIT_OK,
    EXIT_STAGE_FAILED,
};
use snn_memory::genome::{Genome, GenomeLayout};
use snn_memory::trial::fitness;

const FIXTURE: &str = concat!(env!("CARGO_MANIFEST_DIR"), "/tests/fixtures/champion_2s.json");

fn run(args: &[&str]) -> i32 {
    let mut full = vec!["snn-memory"];
    full.extend_from_slice(args);
    run_from_args(full)
}

fn p(path: &Path) -> &str {
    path.to_str().expect("utf-8 temp path")
}

fn small_config(dir: &Path, success: f64, max_generations: u64) -> PathBuf {
    let path = dir.join("config.json");
    let text = format!(
        r#"{{
  "trial": {{"dt_ms": 0.1, "stimulation_s": 0.1, "silence_window_s": 0.1}},
  "ga": {{"population_size": 8, "max_generations": {max_generations}, "success_fitness": {success}}},
  "schedule": [0.1, 0.2],
  "layout": {{"n_inputs": 2, "n_hidden": 4, "n_outputs": 1}},
  "io": {{"checkpoint_interval": 2}},
  "seed": 9
}}"#
    );
    std::fs::write(&path, text).unwrap();
    path
}

fn data_rows(path: &Path) -> Vec<String> {
    std::fs::read_to_string(path)
        .unwrap()
        .lines()
        .filter(|l| !l.starts_with('#'))
        .skip(1)
        .map(str::to_string)
        .collect()
}

#[test]
fn missing_dt_is_a_config_error_without_artifacts() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("bad.json");
    std::fs::write(&cfg, r#"{"trial": {"target_sustain_s": 2.0}}"#).unwrap();
    let out = dir.path().join("out");
    assert_eq!(run(&["evolve", "--config", p(&cfg), "--out", p(&out)]), EXIT_CONFIG);
    assert!(!out.exists());
}

#[test]
fn presatisfied_stages_complete_with_champions() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = small_config(dir.path(), 0.0, 5);
    let out = dir.path().join("out");
    assert_eq!(run(&["evolve", "--config", p(&cfg), "--out", p(&out)]), EXIT_OK);
    assert!(out.join("champion_stage00_0.1s.json").exists());
    assert!(out.join("champion_stage01_0.2s.json").exists());
    assert_eq!(data_rows(&out.join("evolution_log.csv")).len(), 2);
    let manifest = Manifest::load(&out).unwrap();
    manifest.verify(&out).unwrap();
    let mut listed: Vec<&str> = manifest.files.iter().map(|f| f.path.as_str()).collect();
    listed.push("manifest.json");
    listed.sort_unstable();
    let mut present: Vec<String> = std::fs::read_dir(&out)
        .unwrap()
        .map(|e| e.unwrap().file_name().into_string().unwrap())
        .collect();
    present.sort_unstable();
    assert_eq!(listed, present);
}

#[test]
fn exhausted_stage_keeps_partial_artifacts() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = small_config(dir.path(), 2.0, 3);
    let out = dir.path().join("out");
    assert_eq!(run(&["evolve", "--config", p(&cfg), "--out", p(&out)]), EXIT_STAGE_FAILED);
    assert_eq!(data_rows(&out.join("evolution_log.csv")).len(), 3);
    assert!(data_rows(&out.join("stage_markers.csv"))[0].ends_with("exhausted"));
    assert!(out.join("checkpoint.json").exists());
}

#[test]
fn resumed_run_matches_uninterrupted_run() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = small_config(dir.path(), 0.3, 6);
    let whole = dir.path().join("whole");
    let part = dir.path().join("part");
    let code = run(&["evolve", "--config", p(&cfg), "--out", p(&whole)]);
    assert_eq!(run(&["evolve", "--config", p(&cfg), "--out", p(&part), "--stop-after", "3"]), EXIT_OK);
    let ckpt = part.join("checkpoint.json");
    assert_eq!(run(&["evolve", "--resume", p(&ckpt), "--out", p(&part)]), code);
    assert_eq!(
        data_rows(&whole.join("evolution_log.csv")),
        data_rows(&part.join("evolution_log.csv"))
    );
    assert_eq!(
        data_rows(&whole.join("stage_markers.csv")),
        data_rows(&part.join("stage_markers.csv"))
    );
}

#[test]
fn run_on_all_zero_genome() {
    let dir = tempfile::tempdir().unwrap();
    let layout = GenomeLayout::default();
    let g = Genome::new(layout, vec![0.0; layout.total()]).unwrap();
    let path = dir.path().join("zero.json");
    g.save(&path).unwrap();
    let out = dir.path().join("out");
    assert_eq!(run(&["run", "--genome", p(&path), "--out", p(&out)]), EXIT_OK);
    let rec: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(out.join("record.json")).unwrap()).unwrap();
    assert_eq!(rec["fitness"].as_f64().unwrap(), fitness(0, 30000).unwrap());
    assert!(rec["last_output_spike_step"].is_null());
}

#[test]
fn run_is_byte_identical_and_rasters() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a");
    let b = dir.path().join("b");
    for out in [&a, &b] {
        assert_eq!(
            run(&["run", "--genome", FIXTURE, "--out", p(out), "--raster-bin-ms", "3.5"]),
            EXIT_OK
        );
    }
    for f in ["record.json", "raster.csv", "spike_counts.csv", "manifest.json"] {
        assert_eq!(std::fs::read(a.join(f)).unwrap(), std::fs::read(b.join(f)).unwrap(), "{f}");
    }
    let rows = data_rows(&a.join("raster.csv"));
    // 7 s of 3.5 ms bins
    let max_bin: u64 = rows.iter().map(|r| r.split(',').next().unwrap().parse::<u64>().unwrap()).max().unwrap();
    assert!(max_bin < 2000);
    assert!(rows.len() > 100);
}

#[test]
fn missing_genome_is_an_io_error() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("out");
    let missing = dir.path().join("nope.json");
    assert_eq!(run(&["run", "--genome", p(&missing), "--out", p(&out)]), EXIT_IO);
}

#[test]
fn wdev_needs_two_genomes() {
    let dir = tempfile::tempdir().unwrap();
    let err = cmd_analyze(AnalyzeCommand::Wdev(WdevArgs {
        genomes: vec![FIXTURE.into()],
        out: dir.path().join("out"),
    }))
    .unwrap_err();
    assert!(err.to_string().contains("need ≥ 2 genomes"), "{err}");
    assert_eq!(
        run(&["analyze", "wdev", "--genome", FIXTURE, "--out", p(&dir.path().join("o"))]),
        EXIT_CONFIG
    );
    let out = dir.path().join("two");
    assert_eq!(
        run(&["analyze", "wdev", "--genome", FIXTURE, "--genome", FIXTURE, "--out", p(&out)]),
        EXIT_OK
    );
    let rows = data_rows(&out.join("weight_deviation.csv"));
    assert_eq!(rows.len(), 3905);
    assert!(rows.iter().all(|r| r.ends_with(",0")));
}

#[test]
fn sample_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let mut outputs = Vec::new();
    for name in ["a", "b"] {
        let out = dir.path().join(name);
        assert_eq!(
            run(&["analyze", "sample", "--n", "200", "--seed", "7", "--out", p(&out)]),
            EXIT_OK
        );
        outputs.push(std::fs::read(out.join("landscape.json")).unwrap());
    }
    assert_eq!(outputs[0], outputs[1]);
    let v: serde_json::Value = serde_json::from_slice(&outputs[0]).unwrap();
    let c = &v["counts"];
    let total: u64 = ["silent_or_brief", "stopped_in_window", "sustained_full_trial"]
        .iter()
        .map(|k| c[k].as_u64().unwrap())
        .sum();
    assert_eq!(total, 200);
}

#[test]
fn prune_and_groups_on_champion() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("groups");
    assert_eq!(run(&["analyze", "groups", "--genome", FIXTURE, "--out", p(&out)]), EXIT_OK);
    assert_eq!(data_rows(&out.join("pruning.csv")).len(), 60 * 20);
    let labels = data_rows(&out.join("groups.csv"));
    assert_eq!(labels.len(), 60);
    assert!(labels.iter().any(|l| l.ends_with("stopping")));
    assert!(labels.iter().any(|l| l.ends_with("sustaining")));
}

#[test]
fn isi_and_sweep_subcommands() {
    let dir = tempfile::tempdir().unwrap();
    let isi = dir.path().join("isi");
    assert_eq!(
        run(&["analyze", "isi", "--genome", FIXTURE, "--window", "stimulated", "--out", p(&isi)]),
        EXIT_OK
    );
    assert_eq!(data_rows(&isi.join("isi.csv")).len(), 66);

    let sweep = dir.path().join("sweep");
    assert_eq!(
        run(&[
            "analyze", "sweep", "--genome", FIXTURE, "--synapses", "5:6,0:5", "--grid", "0,0.5,1", "--out",
            p(&sweep)
        ]),
        EXIT_OK
    );
    let rows = data_rows(&sweep.join("correlation.csv"));
    assert_eq!(rows.len(), 2);
    assert!(rows[0].starts_with("5,6,"));

    let bad = dir.path().join("bad");
    assert_eq!(
        run(&["analyze", "sweep", "--genome", FIXTURE, "--synapses", "65:0", "--out", p(&bad)]),
        EXIT_CONFIG
    );
}

#[test]
fn unknown_flags_are_usage_errors() {
    assert_eq!(run(&["evolve", "--bogus"]), EXIT_CONFIG);
    assert_eq!(run(&["evolve"]), EXIT_CONFIG);
}
