//! Post-hoc studies of evolved networks.

mod isi;
mod landscape;
mod pruning;
mod raster;
pub mod stats;
mod sweep;
mod wdev;

pub use isi::{isi_stats, IsiStats, NeuronIsi, Phase};
pub use landscape::{sample_landscape, Bucket, LandscapeCounts, LandscapeSample, LandscapeThresholds};
pub use pruning::{
    classify_groups, default_prune_times, prune_group, prune_sweep, pruning_csv, GroupComposition, GroupLabel,
    GroupLabels, PruningResult, PRUNE_INTERVAL_S,
};
pub use raster::{export_raster, Raster, RasterBin};
pub use sweep::{default_grid, weight_sweep, CorrelationMap, SynapseSweep};
pub use wdev::{weight_deviation, WeightDeviationMap};
