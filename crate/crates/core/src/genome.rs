//! Flat real-valued genome and its decoding into a [`Network`].
//!
//! Gene order: one nature gene per hidden neuron (hidden index order),
//! followed by one magnitude gene per synapse in [`Topology::synapses`]
//! order. A hidden neuron is inhibitory when its nature gene is strictly
//! below 0.5. A synapse weight is its gene value, negated when the
//! pre-synaptic neuron is inhibitory.

use std::path::Path;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::snn::{Network, NeuronKind, NeuronParams, Topology};

pub const GENOME_SCHEMA_VERSION: u32 = 1;

/// Threshold on a nature gene; values strictly below it are inhibitory.
pub const INHIBITORY_BELOW: f64 = 0.5;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct GenomeLayout {
    pub topology: Topology,
}

impl GenomeLayout {
    pub fn new(topology: Topology) -> Self {
        GenomeLayout { topology }
    }

    pub fn kind_gene_count(&self) -> usize {
        self.topology.n_hidden
    }

    pub fn synapse_gene_count(&self) -> usize {
        self.topology.synapse_count()
    }

    pub fn total(&self) -> usize {
        self.kind_gene_count() + self.synapse_gene_count()
    }

    /// Position of the gene encoding `pre → post`, if that synapse exists.
    pub fn synapse_gene_index(&self, pre: usize, post: usize) -> Option<usize> {
        let t = &self.topology;
        if !t.has_edge(pre, post) {
            return None;
        }
        let (ni, nh, no) = (t.n_inputs, t.n_hidden, t.n_outputs);
        let base = self.kind_gene_count();
        let hidden0 = t.hidden().start;
        let out0 = t.outputs().start;
        let idx = if pre < ni {
            if post < out0 {
                base + pre * nh + (post - hidden0)
            } else {
                base + ni * nh + pre * no + (post - out0)
            }
        } else {
            let a = pre - hidden0;
            let block = base + ni * (nh + no);
            if post < out0 {
                let b = post - hidden0;
                block + a * (nh - 1) + if b < a { b } else { b - 1 }
            } else {
                block + nh * (nh - 1) + a * no + (post - out0)
            }
        };
        Some(idx)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Genome {
    pub layout: GenomeLayout,
    pub genes: Vec<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub enum Violation {
    Length { expected: usize, got: usize },
    OutOfRange { index: usize, value: f64 },
}

impl Genome {
    /// Builds a genome, rejecting it if it breaks the layout.
    pub fn new(layout: GenomeLayout, genes: Vec<f64>) -> Result<Self> {
        let g = Genome { layout, genes };
        g.check()?;
        Ok(g)
    }

    pub fn len(&self) -> usize {
        self.genes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.genes.is_empty()
    }

    fn check(&self) -> Result<()> {
        match validate(self) {
            Ok(()) => Ok(()),
            Err(v) => Err(match &v[0] {
                Violation::Length { expected, got } => Error::Encoding {
                    index: None,
                    message: format!("expected {expected} genes, got {got}"),
                },
                Violation::OutOfRange { index, value } => Error::Encoding {
                    index: Some(*index),
                    message: format!("gene value {value} outside [0, 1]"),
                },
            }),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&GenomeFile {
            schema_version: GENOME_SCHEMA_VERSION,
            layout: self.layout,
            genes: self.genes.clone(),
        })
        .expect("genome serializes")
    }

    pub fn from_json(text: &str, origin: &str) -> Result<Self> {
        let file: GenomeFile = serde_json::from_str(text).map_err(|source| Error::Json {
            path: origin.to_string(),
            source,
        })?;
        if file.schema_version != GENOME_SCHEMA_VERSION {
            return Err(Error::config(format!(
                "{origin}: unsupported genome schema_version {}",
                file.schema_version
            )));
        }
        file.layout.topology.validate()?;
        Genome::new(file.layout, file.genes)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Genome::from_json(&text, &path.display().to_string())
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        std::fs::write(path, self.to_json()).map_err(|e| Error::io(path, e))
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct GenomeFile {
    schema_version: u32,
    layout: GenomeLayout,
    genes: Vec<f64>,
}

/// Lists every length and range problem of `genome`.
pub fn validate(genome: &Genome) -> std::result::Result<(), Vec<Violation>> {
    let mut out = Vec::new();
    let expected = genome.layout.total();
    if genome.genes.len() != expected {
        out.push(Violation::Length {
            expected,
            got: genome.genes.len(),
        });
    }
    for (index, &value) in genome.genes.iter().enumerate() {
        if !(0.0..=1.0).contains(&value) {
            out.push(Violation::OutOfRange { index, value });
        }
    }
    if out.is_empty() {
        Ok(())
    } else {
        Err(out)
    }
}

/// Decodes a genome into a runnable network with regular-spiking neurons.
pub fn decode(genome: &Genome) -> Result<Network> {
    genome.check()?;
    let layout = genome.layout;
    let topo = layout.topology;
    let n_kind = layout.kind_gene_count();

    let mut kinds = vec![NeuronKind::Excitatory; topo.len()];
    for (h, &g) in topo.hidden().zip(&genome.genes[..n_kind]) {
        if g < INHIBITORY_BELOW {
            kinds[h] = NeuronKind::Inhibitory;
        }
    }
    let mut net = Network::with_kinds(topo, kinds, NeuronParams::default())?;
    for ((pre, post), &g) in topo.synapses().zip(&genome.genes[n_kind..]) {
        net.set_magnitude(pre, post, g)?;
    }
    Ok(net)
}

/// Fills a genome with i.i.d. uniform genes drawn from `rng`.
pub fn random_genome_from<R: Rng + ?Sized>(layout: GenomeLayout, rng: &mut R) -> Genome {
    let genes = (0..layout.total()).map(|_| rng.random::<f64>()).collect();
    Genome { layout, genes }
}

/// Uniform random genome from a ChaCha8 stream seeded with `seed`.
pub fn random_genome(layout: GenomeLayout, seed: u64) -> Genome {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    random_genome_from(layout, &mut rng)
}
