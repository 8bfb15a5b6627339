use std::fs;
use std::path::PathBuf;
use std::time::Instant;

use super::config::{NormalizeScope, RunConfig};
use super::experiment::{
    aggregate, aggregate_csv, aggregate_table, loss_history_csv, pixel_accuracy, prepare_cube,
    run_experiment, train_config, training_set, Aggregate,
};
use super::sweep::{sweep_cached, sweep_csv, SweepRow, SweepSpec};
use crate::crf;
use crate::dml::{self, Checkpoint};
use crate::error::{Error, Result};
use crate::hsi::{self, HsiCube, LabelMap};
use crate::metrics::{self, MetricsReport};

pub const FILE_CUBE: &str = "cube.hsic";
pub const FILE_LABELS: &str = "labels.pgm";
pub const FILE_MODEL: &str = "model.dmlw1";
pub const FILE_LOSS: &str = "loss.csv";
pub const FILE_TEST_LABELS: &str = "test_labels.pgm";
pub const FILE_PRED: &str = "pred.pgm";
pub const FILE_MARGINALS: &str = "marginals.hsic";
pub const FILE_METRICS: &str = "metrics.csv";
pub const FILE_METRICS_TABLE: &str = "metrics.txt";
pub const FILE_SWEEP: &str = "sweep.csv";

fn out_dir(cfg: &RunConfig) -> Result<PathBuf> {
    fs::create_dir_all(&cfg.out)?;
    Ok(cfg.out.clone())
}

fn load_inputs(cfg: &RunConfig) -> Result<(HsiCube, LabelMap)> {
    let cube = hsi::read_cube(cfg.require(&cfg.cube, "cube")?)?;
    let labels = hsi::read_pgm(cfg.require(&cfg.labels, "labels")?)?;
    if cube.height() != labels.height() || cube.width() != labels.width() {
        return Err(Error::Shape(format!(
            "cube is {}x{} but labels are {}x{}",
            cube.height(),
            cube.width(),
            labels.height(),
            labels.width()
        )));
    }
    Ok((cube, labels))
}

/// Normalizes the cube the same way training did.
fn normalized_for_inference(cfg: &RunConfig, cube: &HsiCube) -> Result<HsiCube> {
    match cfg.normalize {
        NormalizeScope::Full => Ok(hsi::normalize(cube)),
        NormalizeScope::Train => {
            // the training split is reproduced from labels and seed
            let labels = hsi::read_pgm(cfg.require(&cfg.labels, "labels")?)?;
            let split = hsi::split_train_test(&labels, cfg.per_class, cfg.seed)?;
            Ok(prepare_cube(cube, cfg.normalize, Some(&split.train)))
        }
    }
}

/// Writes a synthetic cube and its label map.
pub fn cmd_synth(cfg: &RunConfig) -> Result<(PathBuf, PathBuf)> {
    let dir = out_dir(cfg)?;
    let (cube, labels) = hsi::synth_scene(&cfg.synth)?;
    let (cube_path, label_path) = (dir.join(FILE_CUBE), dir.join(FILE_LABELS));
    hsi::write_cube(&cube_path, &cube)?;
    hsi::write_pgm(&label_path, &labels)?;
    Ok((cube_path, label_path))
}

#[derive(Debug, Clone)]
pub struct TrainSummary {
    pub checkpoint: PathBuf,
    pub train_samples: usize,
    pub test_pixels: usize,
    /// Accuracy of the written checkpoint on the real training pixels.
    pub train_oa: f64,
    pub final_loss: Option<dml::EpochLoss>,
}

pub fn cmd_train(cfg: &RunConfig) -> Result<TrainSummary> {
    cfg.validate()?;
    let (cube, labels) = load_inputs(cfg)?;
    let split = hsi::split_train_test(&labels, cfg.per_class, cfg.seed)?;
    let normalized = prepare_cube(&cube, cfg.normalize, Some(&split.train));
    let set = training_set(&normalized, &labels, &split, cfg, cfg.seed)?;
    let outcome = dml::train(&set, &train_config(cfg, cfg.seed))?;

    let dir = out_dir(cfg)?;
    let checkpoint = Checkpoint {
        params: outcome.params,
        centers: outcome.state.centers,
    };
    let model_path = dir.join(FILE_MODEL);
    dml::write_checkpoint(&model_path, &checkpoint)?;
    fs::write(dir.join(FILE_LOSS), loss_history_csv(&outcome.history))?;
    hsi::write_pgm(
        dir.join(FILE_TEST_LABELS),
        &labels.restricted_to(&split.test),
    )?;

    let saved = dml::read_checkpoint(&model_path)?;
    let (_, prob) = dml::extract(&saved.params, &normalized)?;
    Ok(TrainSummary {
        checkpoint: model_path,
        train_samples: set.len(),
        test_pixels: split.test.len(),
        train_oa: pixel_accuracy(&prob.labels(), &labels, &split.train),
        final_loss: outcome.history.last().copied(),
    })
}

#[derive(Debug, Clone)]
pub struct InferSummary {
    pub labels: LabelMap,
    pub filter_size: Option<usize>,
    pub extraction_secs: f64,
    pub inference_secs: f64,
}

impl InferSummary {
    pub fn total_secs(&self) -> f64 {
        self.extraction_secs + self.inference_secs
    }

    pub fn timing_line(&self) -> String {
        format!(
            "timing: extraction {:.3} s, inference {:.3} s, total {:.3} s",
            self.extraction_secs,
            self.inference_secs,
            self.total_secs()
        )
    }
}

/// Features and probabilities from the checkpoint, then CRF inference
/// unless disabled.
pub fn cmd_infer(cfg: &RunConfig) -> Result<InferSummary> {
    let cube = hsi::read_cube(cfg.require(&cfg.cube, "cube")?)?;
    let ckpt = dml::read_checkpoint(cfg.require(&cfg.checkpoint, "checkpoint")?)?;
    let normalized = normalized_for_inference(cfg, &cube)?;

    let started = Instant::now();
    let (features, prob) = dml::extract(&ckpt.params, &normalized)?;
    let extraction_secs = started.elapsed().as_secs_f64();

    let started = Instant::now();
    let (labels, marginals, filter_size) = if cfg.crf_enabled {
        let params = cfg.crf_for(&cube);
        let (labels, q) = crf::infer(&prob, &features, &params)?;
        (labels, q.to_cube()?, Some(params.filter_size))
    } else {
        let q = crf::MarginalField::from_prob(&prob);
        (q.labels(), q.to_cube()?, None)
    };
    let inference_secs = started.elapsed().as_secs_f64();

    let dir = out_dir(cfg)?;
    hsi::write_pgm(dir.join(FILE_PRED), &labels)?;
    hsi::write_cube(dir.join(FILE_MARGINALS), &marginals)?;
    Ok(InferSummary {
        labels,
        filter_size,
        extraction_secs,
        inference_secs,
    })
}

#[derive(Debug, Clone)]
pub enum EvalSummary {
    Single(MetricsReport),
    Repeated { runs: usize, rows: Vec<Aggregate> },
}

/// Scores a prediction against groundtruth, or with `repeats > 1` reruns
/// training and inference per seed and reports mean and sample deviation.
pub fn cmd_eval(cfg: &RunConfig) -> Result<EvalSummary> {
    cfg.validate()?;
    if cfg.repeats == 1 {
        let pred = hsi::read_pgm(cfg.require(&cfg.pred, "pred")?)?;
        let gt = hsi::read_pgm(cfg.require(&cfg.labels, "labels")?)?;
        let report = metrics::report(&metrics::confusion(&pred, &gt)?)?;
        let dir = out_dir(cfg)?;
        fs::write(dir.join(FILE_METRICS), report.to_csv())?;
        fs::write(dir.join(FILE_METRICS_TABLE), report.to_table())?;
        return Ok(EvalSummary::Single(report));
    }

    let (cube, labels) = load_inputs(cfg)?;
    let mut runs = Vec::with_capacity(cfg.repeats);
    for r in 0..cfg.repeats as u64 {
        let seed = if cfg.fixed_seed {
            cfg.seed
        } else {
            cfg.seed + r
        };
        let outcome = run_experiment(&cube, &labels, cfg, seed)?;
        runs.push((outcome.dml, outcome.crf));
    }
    let rows = aggregate(&runs);
    let dir = out_dir(cfg)?;
    fs::write(dir.join(FILE_METRICS), aggregate_csv(&rows))?;
    fs::write(
        dir.join(FILE_METRICS_TABLE),
        aggregate_table(&rows, cfg.repeats),
    )?;
    Ok(EvalSummary::Repeated {
        runs: cfg.repeats,
        rows,
    })
}

/// One-at-a-time CRF parameter sweep on cached network outputs.
pub fn cmd_sweep(cfg: &RunConfig) -> Result<Vec<SweepRow>> {
    let name = cfg
        .sweep_param
        .as_deref()
        .ok_or_else(|| Error::Usage("--param is required".into()))?;
    let spec = SweepSpec::new(name, cfg.sweep_values.clone())?;
    let (cube, gt) = load_inputs(cfg)?;
    let ckpt = dml::read_checkpoint(cfg.require(&cfg.checkpoint, "checkpoint")?)?;
    let normalized = normalized_for_inference(cfg, &cube)?;
    let (features, prob) = dml::extract(&ckpt.params, &normalized)?;
    let rows = sweep_cached(&prob, &features, &gt, &cfg.crf_for(&cube), &spec)?;
    fs::write(out_dir(cfg)?.join(FILE_SWEEP), sweep_csv(&rows))?;
    Ok(rows)
}
