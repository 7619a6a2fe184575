use thiserror::Error;

/// Errors produced by the simulator, the genome codec and the experiment drivers.
#[derive(Debug, Error)]
pub enum Error {
    /// A neuron state or input current went non-finite during integration.
    #[error("simulation fault at step {step}, neuron {neuron}: v={v}, u={u}, I={current}")]
    SimulationFault {
        step: u64,
        neuron: usize,
        v: f64,
        u: f64,
        current: f64,
    },

    #[error("invalid configuration: {0}")]
    Config(String),

    /// Genome does not match its layout; `index` names the first offending gene.
    #[error("genome encoding error at index {index:?}: {message}")]
    Encoding {
        index: Option<usize>,
        message: String,
    },

    #[error("invalid network: {0}")]
    Network(String),

    #[error("I/O error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },

    #[error("malformed JSON in {path}: {source}")]
    Json {
        path: String,
        #[source]
        source: serde_json::Error,
    },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    pub(crate) fn config(msg: impl Into<String>) -> Self {
        Error::Config(msg.into())
    }

    pub(crate) fn io(path: impl AsRef<std::path::Path>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.as_ref().display().to_string(),
            source,
        }
    }
}
