//! Experiment orchestration: configuration, the experiment runners and
//! deterministic CSV/JSON output with a hashed manifest.

mod config;
mod output;
mod run;

pub use config::{
    ClassLParams, Experiment, ExperimentConfig, FigureParams, NikishinParams, NodeCircle, ProbeSettings,
};
pub use output::{sha256_hex, write_outputs, Artifact, FileEntry, Format, Manifest, RunOutput};
pub use run::{compute_experiment, exit_code, run_experiment};
