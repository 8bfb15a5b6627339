//! End-to-end workflow: synthetic data, training, CRF inference, evaluation
//! and one-at-a-time parameter sweeps.

mod commands;
mod config;
mod experiment;
mod sweep;

pub use commands::{
    cmd_eval, cmd_infer, cmd_sweep, cmd_synth, cmd_train, EvalSummary, InferSummary, TrainSummary,
    FILE_CUBE, FILE_LABELS, FILE_LOSS, FILE_MARGINALS, FILE_METRICS, FILE_METRICS_TABLE,
    FILE_MODEL, FILE_PRED, FILE_SWEEP, FILE_TEST_LABELS,
};
pub use config::{NormalizeScope, Preset, RunConfig, CONFIG_KEYS};
pub use experiment::{
    aggregate, loss_history_csv, mean_and_sample_std, prepare_cube, run_experiment, training_set,
    Aggregate, ExperimentOutcome,
};
pub use sweep::{sweep_cached, SweepParam, SweepRow, SweepSpec};
