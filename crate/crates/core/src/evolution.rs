//! Generational real-coded GA with a continuous schedule of target durations.
//!
//! Every stochastic choice made for offspring `i` of generation `g` is drawn
//! from a ChaCha8 stream keyed by `(master_seed, g, i)`, so results do not
//! depend on evaluation order or thread count, and a run restored from a
//! checkpoint continues exactly as the uninterrupted one would.

use std::fmt::Write as _;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::genome::{decode, random_genome_from, Genome, GenomeLayout};
use crate::trial::{evaluate_fitness, TrialPlan, TrialSpec};

pub const CHECKPOINT_SCHEMA_VERSION: u32 = 1;

/// Words of ChaCha keystream reserved per individual within a stream.
const INDIVIDUAL_WORD_SPAN: u32 = 40;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GaConfig {
    pub population_size: usize,
    pub tournament_size: usize,
    pub elite_count: usize,
    pub crossover_rate: f64,
    pub per_gene_mutation_rate: f64,
    pub mutation_sigma: f64,
    /// Generation budget for each stage of the schedule.
    pub max_generations: u64,
    pub success_fitness: f64,
    pub master_seed: u64,
}

impl Default for GaConfig {
    fn default() -> Self {
        GaConfig {
            population_size: 100,
            tournament_size: 3,
            elite_count: 1,
            crossover_rate: 0.9,
            per_gene_mutation_rate: 0.01,
            mutation_sigma: 0.05,
            max_generations: 10_000,
            success_fitness: 0.99,
            master_seed: 0,
        }
    }
}

impl GaConfig {
    pub fn validate(&self) -> Result<()> {
        let prob = |name: &str, p: f64| {
            if (0.0..=1.0).contains(&p) {
                Ok(())
            } else {
                Err(Error::config(format!("{name} must be in [0, 1], got {p}")))
            }
        };
        prob("crossover_rate", self.crossover_rate)?;
        prob("per_gene_mutation_rate", self.per_gene_mutation_rate)?;
        if self.population_size < 1 || self.tournament_size < 1 || self.max_generations < 1 {
            return Err(Error::config(
                "population_size, tournament_size and max_generations must be at least 1",
            ));
        }
        if self.elite_count >= self.population_size {
            return Err(Error::config("elite_count must be below population_size"));
        }
        if !(self.mutation_sigma >= 0.0 && self.mutation_sigma.is_finite()) {
            return Err(Error::config("mutation_sigma must be a finite non-negative value"));
        }
        if !self.success_fitness.is_finite() {
            return Err(Error::config("success_fitness must be finite"));
        }
        Ok(())
    }
}

/// Ordered target sustain durations (seconds). The schedule advances when the
/// best individual reaches `success_fitness`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Schedule {
    pub stages: Vec<f64>,
}

impl Default for Schedule {
    fn default() -> Self {
        Schedule {
            stages: (2..=11).map(f64::from).collect(),
        }
    }
}

impl Schedule {
    pub fn new(stages: Vec<f64>) -> Result<Self> {
        let s = Schedule { stages };
        s.validate()?;
        Ok(s)
    }

    pub fn validate(&self) -> Result<()> {
        if self.stages.is_empty() {
            return Err(Error::config("schedule needs at least one stage"));
        }
        if self.stages.iter().any(|s| !(*s > 0.0 && s.is_finite())) {
            return Err(Error::config("schedule stages must be positive"));
        }
        if self.stages.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::config("schedule stages must be strictly increasing"));
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Parallelism {
    Sequential,
    /// Rayon's current pool.
    #[default]
    Parallel,
}

/// Fitness of every genome on `plan`, in input order. A genome that fails to
/// decode or simulate yields its error in place of a fitness.
pub fn evaluate_population(
    genomes: &[Genome],
    plan: &TrialPlan,
    parallelism: Parallelism,
) -> Vec<Result<f64>> {
    let eval = |g: &Genome| -> Result<f64> {
        let net = decode(g)?;
        Ok(evaluate_fitness(&net, plan)?.1)
    };
    match parallelism {
        Parallelism::Sequential => genomes.iter().map(eval).collect(),
        Parallelism::Parallel => genomes.par_iter().map(eval).collect(),
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GenerationRecord {
    pub generation: u64,
    pub stage: usize,
    pub stage_target_s: f64,
    pub best_fitness: f64,
    pub mean_fitness: f64,
    /// Population index of the best individual.
    pub best_index: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StageOutcome {
    Solved,
    Exhausted,
}

/// Emitted at the generation where a stage ended.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StageMarker {
    pub generation: u64,
    pub stage: usize,
    pub stage_target_s: f64,
    pub outcome: StageOutcome,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct EvolutionLog {
    pub records: Vec<GenerationRecord>,
    pub markers: Vec<StageMarker>,
}

impl EvolutionLog {
    /// `generation,stage_target_s,best_fitness,mean_fitness` rows.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("generation,stage_target_s,best_fitness,mean_fitness\n");
        for r in &self.records {
            let _ = writeln!(
                out,
                "{},{},{},{}",
                r.generation, r.stage_target_s, r.best_fitness, r.mean_fitness
            );
        }
        out
    }

    pub fn markers_csv(&self) -> String {
        let mut out = String::from("generation,stage,stage_target_s,outcome\n");
        for m in &self.markers {
            let outcome = match m.outcome {
                StageOutcome::Solved => "solved",
                StageOutcome::Exhausted => "exhausted",
            };
            let _ = writeln!(
                out,
                "{},{},{},{}",
                m.generation, m.stage, m.stage_target_s, outcome
            );
        }
        out
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Champion {
    pub stage: usize,
    pub target_sustain_s: f64,
    pub generation: u64,
    pub fitness: f64,
    pub genome: Genome,
}

#[derive(Clone, Debug, PartialEq)]
pub struct EvolutionResult {
    pub champions: Vec<Champion>,
    pub log: EvolutionLog,
    /// Stage whose generation budget ran out, if any.
    pub failed_stage: Option<usize>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Running,
    Completed,
    Failed,
}

/// Resumable GA state.
#[derive(Clone, Debug)]
pub struct Evolution {
    config: GaConfig,
    schedule: Schedule,
    template: TrialSpec,
    layout: GenomeLayout,
    parallelism: Parallelism,
    plans: Vec<TrialPlan>,
    population: Vec<Genome>,
    generation: u64,
    stage: usize,
    stage_generations: u64,
    log: EvolutionLog,
    champions: Vec<Champion>,
    status: Status,
}

/// RNG for individual `index` of `stream`; stream 0 seeds the initial
/// population, stream `g + 1` breeds generation `g + 1` from `g`.
pub fn individual_rng(master_seed: u64, stream: u64, index: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(master_seed);
    rng.set_stream(stream);
    rng.set_word_pos((index as u128) << INDIVIDUAL_WORD_SPAN);
    rng
}

impl Evolution {
    /// Starts from a uniformly random population.
    pub fn new(
        config: GaConfig,
        schedule: Schedule,
        template: TrialSpec,
        layout: GenomeLayout,
    ) -> Result<Self> {
        config.validate()?;
        let population = (0..config.population_size)
            .map(|i| random_genome_from(layout, &mut individual_rng(config.master_seed, 0, i)))
            .collect();
        Self::with_population(config, schedule, template, layout, population)
    }

    /// Starts from a caller-supplied population.
    pub fn with_population(
        config: GaConfig,
        schedule: Schedule,
        template: TrialSpec,
        layout: GenomeLayout,
        population: Vec<Genome>,
    ) -> Result<Self> {
        config.validate()?;
        schedule.validate()?;
        if population.len() != config.population_size {
            return Err(Error::config(format!(
                "population has {} genomes, config expects {}",
                population.len(),
                config.population_size
            )));
        }
        for g in &population {
            if g.layout != layout {
                return Err(Error::config("population genome layout differs from config"));
            }
            decode(g)?;
        }
        let plans = schedule
            .stages
            .iter()
            .map(|&t| template.with_target(t).plan())
            .collect::<Result<Vec<_>>>()?;
        Ok(Evolution {
            config,
            schedule,
            template,
            layout,
            parallelism: Parallelism::default(),
            plans,
            population,
            generation: 0,
            stage: 0,
            stage_generations: 0,
            log: EvolutionLog::default(),
            champions: Vec::new(),
            status: Status::Running,
        })
    }

    pub fn parallelism(mut self, parallelism: Parallelism) -> Self {
        self.parallelism = parallelism;
        self
    }

    pub fn status(&self) -> Status {
        self.status
    }

    pub fn generation(&self) -> u64 {
        self.generation
    }

    pub fn stage(&self) -> usize {
        self.stage
    }

    pub fn population(&self) -> &[Genome] {
        &self.population
    }

    pub fn log(&self) -> &EvolutionLog {
        &self.log
    }

    pub fn champions(&self) -> &[Champion] {
        &self.champions
    }

    /// Evaluates the current population, logs it, and then either advances
    /// the schedule (keeping the population as is) or breeds the next
    /// generation. Returns whether the run is still going.
    pub fn step(&mut self) -> Result<bool> {
        if self.status != Status::Running {
            return Ok(false);
        }
        let plan = self.plans[self.stage];
        let target = self.schedule.stages[self.stage];
        let fitness: Vec<f64> = evaluate_population(&self.population, &plan, self.parallelism)
            .into_iter()
            .enumerate()
            .map(|(i, r)| match r {
                Ok(f) => f,
                Err(e) => {
                    log::warn!("generation {} individual {i} failed: {e}", self.generation);
                    0.0
                }
            })
            .collect();

        let best_index = argmax(&fitness);
        let best_fitness = fitness[best_index];
        let mean_fitness = fitness.iter().sum::<f64>() / fitness.len() as f64;
        self.log.records.push(GenerationRecord {
            generation: self.generation,
            stage: self.stage,
            stage_target_s: target,
            best_fitness,
            mean_fitness,
            best_index,
        });
        log::debug!(
            "gen {} stage {target}s best {best_fitness:.6} mean {mean_fitness:.6}",
            self.generation
        );

        let this_generation = self.generation;
        self.generation += 1;
        self.stage_generations += 1;

        if best_fitness >= self.config.success_fitness {
            self.champions.push(Champion {
                stage: self.stage,
                target_sustain_s: target,
                generation: this_generation,
                fitness: best_fitness,
                genome: self.population[best_index].clone(),
            });
            self.log.markers.push(StageMarker {
                generation: this_generation,
                stage: self.stage,
                stage_target_s: target,
                outcome: StageOutcome::Solved,
            });
            log::info!("stage {target}s solved at generation {this_generation}");
            self.stage += 1;
            self.stage_generations = 0;
            if self.stage == self.schedule.stages.len() {
                self.status = Status::Completed;
            }
            return Ok(self.status == Status::Running);
        }

        if self.stage_generations >= self.config.max_generations {
            self.log.markers.push(StageMarker {
                generation: this_generation,
                stage: self.stage,
                stage_target_s: target,
                outcome: StageOutcome::Exhausted,
            });
            log::warn!("stage {target}s exhausted its generation budget");
            self.status = Status::Failed;
            return Ok(false);
        }

        self.population = self.breed(&fitness);
        Ok(true)
    }

    /// Steps until the run completes or fails.
    pub fn run(&mut self) -> Result<()> {
        while self.step()? {}
        Ok(())
    }

    /// Steps until `generation` evaluations have happened or the run ends.
    pub fn run_until(&mut self, generation: u64) -> Result<()> {
        while self.generation < generation && self.step()? {}
        Ok(())
    }

    pub fn into_result(self) -> EvolutionResult {
        EvolutionResult {
            failed_stage: (self.status == Status::Failed).then_some(self.stage),
            champions: self.champions,
            log: self.log,
        }
    }

    fn breed(&self, fitness: &[f64]) -> Vec<Genome> {
        let cfg = &self.config;
        let mut order: Vec<usize> = (0..fitness.len()).collect();
        order.sort_by(|&a, &b| fitness[b].total_cmp(&fitness[a]).then(a.cmp(&b)));

        let stream = self.generation; // already advanced: breeds generation `stream`
        let normal = Normal::new(0.0, cfg.mutation_sigma).expect("sigma validated");
        let mut next: Vec<Genome> = order[..cfg.elite_count]
            .iter()
            .map(|&i| self.population[i].clone())
            .collect();
        let offspring: Vec<Genome> = (cfg.elite_count..cfg.population_size)
            .into_par_iter()
            .map(|i| {
                let mut rng = individual_rng(cfg.master_seed, stream, i);
                let a = tournament(fitness, cfg.tournament_size, &mut rng);
                let b = tournament(fitness, cfg.tournament_size, &mut rng);
                let pa = &self.population[a].genes;
                let pb = &self.population[b].genes;
                let mut genes = if rng.random::<f64>() < cfg.crossover_rate {
                    pa.iter()
                        .zip(pb)
                        .map(|(&x, &y)| if rng.random::<bool>() { x } else { y })
                        .collect()
                } else {
                    pa.clone()
                };
                for g in genes.iter_mut() {
                    if rng.random::<f64>() < cfg.per_gene_mutation_rate {
                        *g = (*g + normal.sample(&mut rng)).clamp(0.0, 1.0);
                    }
                }
                Genome {
                    layout: self.layout,
                    genes,
                }
            })
            .collect();
        next.extend(offspring);
        next
    }

    pub fn checkpoint(&self) -> Checkpoint {
        Checkpoint {
            schema_version: CHECKPOINT_SCHEMA_VERSION,
            config: self.config.clone(),
            schedule: self.schedule.clone(),
            template: self.template,
            layout: self.layout,
            generation: self.generation,
            stage: self.stage,
            stage_generations: self.stage_generations,
            status: self.status,
            rng: RngState {
                algorithm: "chacha8".into(),
                master_seed: self.config.master_seed,
                next_stream: self.generation,
            },
            population: self.population.iter().map(|g| g.genes.clone()).collect(),
            champions: self
                .champions
                .iter()
                .map(|c| SavedChampion {
                    stage: c.stage,
                    target_sustain_s: c.target_sustain_s,
                    generation: c.generation,
                    fitness: c.fitness,
                    genes: c.genome.genes.clone(),
                })
                .collect(),
            log: self.log.clone(),
        }
    }

    pub fn resume(cp: Checkpoint) -> Result<Self> {
        if cp.schema_version != CHECKPOINT_SCHEMA_VERSION {
            return Err(Error::config(format!(
                "unsupported checkpoint schema_version {}",
                cp.schema_version
            )));
        }
        if cp.rng.master_seed != cp.config.master_seed || cp.rng.next_stream != cp.generation {
            return Err(Error::config("checkpoint RNG state inconsistent with its generation"));
        }
        let layout = cp.layout;
        let population = cp
            .population
            .into_iter()
            .map(|genes| Genome::new(layout, genes))
            .collect::<Result<Vec<_>>>()?;
        let mut evo =
            Evolution::with_population(cp.config, cp.schedule, cp.template, layout, population)?;
        if cp.stage > evo.schedule.stages.len() {
            return Err(Error::config("checkpoint stage out of range"));
        }
        evo.generation = cp.generation;
        evo.stage = cp.stage;
        evo.stage_generations = cp.stage_generations;
        evo.status = cp.status;
        evo.log = cp.log;
        evo.champions = cp
            .champions
            .into_iter()
            .map(|c| {
                Ok(Champion {
                    stage: c.stage,
                    target_sustain_s: c.target_sustain_s,
                    generation: c.generation,
                    fitness: c.fitness,
                    genome: Genome::new(layout, c.genes)?,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(evo)
    }
}

fn argmax(values: &[f64]) -> usize {
    let mut best = 0;
    for (i, &v) in values.iter().enumerate() {
        if v > values[best] {
            best = i;
        }
    }
    best
}

fn tournament<R: Rng>(fitness: &[f64], size: usize, rng: &mut R) -> usize {
    let mut winner = rng.random_range(0..fitness.len());
    for _ in 1..size {
        let c = rng.random_range(0..fitness.len());
        if fitness[c] > fitness[winner] || (fitness[c] == fitness[winner] && c < winner) {
            winner = c;
        }
    }
    winner
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RngState {
    pub algorithm: String,
    pub master_seed: u64,
    /// ChaCha stream that breeds the next generation.
    pub next_stream: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SavedChampion {
    pub stage: usize,
    pub target_sustain_s: f64,
    pub generation: u64,
    pub fitness: f64,
    pub genes: Vec<f64>,
}

/// Everything needed to continue a run bit-identically.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Checkpoint {
    pub schema_version: u32,
    pub config: GaConfig,
    pub schedule: Schedule,
    pub template: TrialSpec,
    pub layout: GenomeLayout,
    pub generation: u64,
    pub stage: usize,
    pub stage_generations: u64,
    pub status: Status,
    pub rng: RngState,
    pub population: Vec<Vec<f64>>,
    pub champions: Vec<SavedChampion>,
    pub log: EvolutionLog,
}

/// Runs the whole schedule from a random population.
pub fn evolve(
    config: &GaConfig,
    schedule: &Schedule,
    trial_template: &TrialSpec,
    layout: GenomeLayout,
) -> Result<EvolutionResult> {
    let mut evo = Evolution::new(config.clone(), schedule.clone(), *trial_template, layout)?;
    evo.run()?;
    Ok(evo.into_result())
}
