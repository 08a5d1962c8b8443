//! Experiment orchestration: configs, staged runs and run directories.
//!
//! A run directory holds `config.json`, `params.json`, `metrics.csv`,
//! `series/*.csv` and `bloch/*.csv`. Metrics are recomputed from the stored
//! parameters, never carried over from training state.

pub mod artifact;
pub mod config;
pub mod problem;
pub mod run;

pub use artifact::{
    export_artifact, read_metrics, summarize, BlochRow, GameReport, MetricRow, QaeParams, RunArtifact, StageSummary,
    TrainedParams,
};
pub use config::{sub_seed, EntangledGrid, Experiment, ExperimentConfig, Gates, InitScheme, QganStageConfig, Stage, SEED_ENV};
pub use problem::{entangled_ensemble, entangled_state, EvalPoint, Problem};
pub use run::{
    compute_metrics, latent_ensemble, recompute_metrics, run_baseline_qgan, run_entangled_demo, run_experiment,
    run_game, run_molecule_qgaa, run_with_problem,
};
