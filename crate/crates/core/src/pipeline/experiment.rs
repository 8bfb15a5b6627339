use std::fmt::Write as _;
use std::time::Instant;

use super::config::{NormalizeScope, RunConfig};
use crate::crf;
use crate::dml::{self, Checkpoint, EpochLoss, FeatureMap, ProbabilityMap, TrainConfig};
use crate::error::Result;
use crate::hsi::{self, BandStats, HsiCube, LabelMap, SampleSet, Split};
use crate::metrics::{self, MetricsReport};

/// Normalizes with whole-cube statistics, or training-pixel statistics when
/// the scope says so and `train_pixels` is given.
pub fn prepare_cube(
    cube: &HsiCube,
    scope: NormalizeScope,
    train_pixels: Option<&[usize]>,
) -> HsiCube {
    match (scope, train_pixels) {
        (NormalizeScope::Train, Some(px)) => BandStats::from_cube(cube, Some(px)).apply(cube),
        _ => hsi::normalize(cube),
    }
}

/// Real training spectra followed by their virtual mixtures.
pub fn training_set(
    cube: &HsiCube,
    labels: &LabelMap,
    split: &Split,
    cfg: &RunConfig,
    seed: u64,
) -> Result<SampleSet> {
    let real = SampleSet::from_pixels(cube, labels, &split.train)?;
    hsi::generate_virtual_samples(&real, &cfg.augment(seed.wrapping_add(1)))
}

pub(crate) fn train_config(cfg: &RunConfig, seed: u64) -> TrainConfig {
    TrainConfig {
        seed: seed.wrapping_add(2),
        ..cfg.train.clone()
    }
}

/// Fraction of `pixels` whose predicted label matches `labels`.
pub(crate) fn pixel_accuracy(pred: &[u32], labels: &LabelMap, pixels: &[usize]) -> f64 {
    let hits = pixels
        .iter()
        .filter(|&&p| pred[p] == labels.labels()[p])
        .count();
    hits as f64 / pixels.len().max(1) as f64
}

/// Everything one seeded train + infer + evaluate run produces.
#[derive(Debug, Clone)]
pub struct ExperimentOutcome {
    pub seed: u64,
    pub split: Split,
    pub checkpoint: Checkpoint,
    pub history: Vec<EpochLoss>,
    /// Accuracy on the real (non-virtual) training pixels.
    pub train_oa: f64,
    pub features: FeatureMap,
    pub prob: ProbabilityMap,
    pub dml_labels: LabelMap,
    pub crf_labels: LabelMap,
    /// Scores on the test pixels.
    pub dml: MetricsReport,
    pub crf: MetricsReport,
    pub extraction_secs: f64,
    pub inference_secs: f64,
}

/// Runs the full workflow in memory for one seed.
pub fn run_experiment(
    cube: &HsiCube,
    labels: &LabelMap,
    cfg: &RunConfig,
    seed: u64,
) -> Result<ExperimentOutcome> {
    let split = hsi::split_train_test(labels, cfg.per_class, seed)?;
    let normalized = prepare_cube(cube, cfg.normalize, Some(&split.train));
    let set = training_set(&normalized, labels, &split, cfg, seed)?;
    let outcome = dml::train(&set, &train_config(cfg, seed))?;

    let started = Instant::now();
    let (features, prob) = dml::extract(&outcome.params, &normalized)?;
    let extraction_secs = started.elapsed().as_secs_f64();

    let dml_pred = prob.labels();
    let train_oa = pixel_accuracy(&dml_pred, labels, &split.train);
    let dml_labels = LabelMap::with_classes(
        labels.height(),
        labels.width(),
        prob.classes() as u32,
        dml_pred,
    )?;

    let started = Instant::now();
    let (crf_labels, _) = crf::infer(&prob, &features, &cfg.crf_for(cube))?;
    let inference_secs = started.elapsed().as_secs_f64();

    let test_gt = labels.restricted_to(&split.test);
    let dml_report = metrics::report(&metrics::confusion(&dml_labels, &test_gt)?)?;
    let crf_report = metrics::report(&metrics::confusion(&crf_labels, &test_gt)?)?;
    Ok(ExperimentOutcome {
        seed,
        split,
        checkpoint: Checkpoint {
            params: outcome.params,
            centers: outcome.state.centers,
        },
        history: outcome.history,
        train_oa,
        features,
        prob,
        dml_labels,
        crf_labels,
        dml: dml_report,
        crf: crf_report,
        extraction_secs,
        inference_secs,
    })
}

/// Mean and `n - 1` standard deviation; the deviation of one value is 0.
pub fn mean_and_sample_std(values: &[f64]) -> (f64, f64) {
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    if values.len() < 2 {
        return (mean, 0.0);
    }
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, var.sqrt())
}

/// One `mean +- std` cell of a repeated-run summary.
#[derive(Debug, Clone, PartialEq)]
pub struct Aggregate {
    pub method: &'static str,
    pub metric: &'static str,
    pub mean: f64,
    pub std: f64,
}

pub fn aggregate(runs: &[(MetricsReport, MetricsReport)]) -> Vec<Aggregate> {
    let mut rows = Vec::new();
    for (method, pick) in [
        (
            "dml",
            (|r: &(MetricsReport, MetricsReport)| r.0.clone()) as fn(&_) -> MetricsReport,
        ),
        ("dml_crf", |r| r.1.clone()),
    ] {
        let reports: Vec<MetricsReport> = runs.iter().map(pick).collect();
        for (metric, get) in [
            (
                "oa",
                (|r: &MetricsReport| r.oa) as fn(&MetricsReport) -> f64,
            ),
            ("aa", |r| r.aa),
            ("kappa", |r| r.kappa),
        ] {
            let values: Vec<f64> = reports.iter().map(get).collect();
            let (mean, std) = mean_and_sample_std(&values);
            rows.push(Aggregate {
                method,
                metric,
                mean,
                std,
            });
        }
    }
    rows
}

pub(crate) fn aggregate_csv(rows: &[Aggregate]) -> String {
    let mut out = String::from("method,metric,mean,std\n");
    for r in rows {
        let _ = writeln!(out, "{},{},{},{}", r.method, r.metric, r.mean, r.std);
    }
    out
}

/// Two-column `mean +- std` table; OA and AA in percent.
pub(crate) fn aggregate_table(rows: &[Aggregate], runs: usize) -> String {
    let cell = |method: &str, metric: &str| {
        let r = rows
            .iter()
            .find(|r| r.method == method && r.metric == metric)
            .expect("aggregate row");
        if metric == "kappa" {
            format!("{:.4} ± {:.4}", r.mean, r.std)
        } else {
            format!("{:.2} ± {:.2}", 100.0 * r.mean, 100.0 * r.std)
        }
    };
    let mut out = format!("averaged over {runs} runs\n");
    let _ = writeln!(out, "{:<8} {:>18} {:>18}", "", "DML", "DML-CRF");
    for (metric, name) in [("oa", "OA(%)"), ("aa", "AA(%)"), ("kappa", "kappa")] {
        let _ = writeln!(
            out,
            "{:<8} {:>18} {:>18}",
            name,
            cell("dml", metric),
            cell("dml_crf", metric)
        );
    }
    out
}

pub fn loss_history_csv(history: &[EpochLoss]) -> String {
    let mut out = String::from("epoch,softmax_loss,center_loss,joint_loss\n");
    for e in history {
        let _ = writeln!(out, "{},{},{},{}", e.epoch, e.softmax, e.center, e.joint);
    }
    out
}
