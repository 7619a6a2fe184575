//! Evolving Izhikevich spiking networks that hold activity for a fixed
//! duration after a stimulus and then fall silent on their own.

pub mod analysis;
pub mod cli;
pub mod error;
pub mod evolution;
pub mod genome;
pub mod snn;
pub mod trial;

pub use error::{Error, Result};
