//! Train the feature network on the synthetic scene with and without the
//! center loss and compare how tightly each class clusters.
//!
//! cargo run --release --example train_dml [epochs]

use dmlcrf::dml::{self, train};
use dmlcrf::hsi::{split_train_test, synth_scene, SynthConfig};
use dmlcrf::pipeline::{loss_history_csv, prepare_cube, training_set, RunConfig};

fn main() -> dmlcrf::Result<()> {
    let epochs = std::env::args()
        .nth(1)
        .and_then(|s| s.parse().ok())
        .unwrap_or(100);
    let (cube, labels) = synth_scene(&SynthConfig::default())?;
    let mut cfg = RunConfig::default();
    cfg.train.epochs = epochs;

    let split = split_train_test(&labels, cfg.per_class, 0)?;
    let cube = prepare_cube(&cube, cfg.normalize, Some(&split.train));
    let set = training_set(&cube, &labels, &split, &cfg, 0)?;
    println!(
        "{} training samples ({} real)",
        set.len(),
        split.train.len()
    );

    for lambda in [1.0, 0.0] {
        let tc = dml::TrainConfig {
            lambda,
            ..cfg.train.clone()
        };
        let out = train(&set, &tc)?;
        let last = out.history.last().expect("at least one epoch");
        let scatter = dml::mean_center_distance(&out.params, &set)?;
        let means = dml::class_mean_features(&out.params, &set)?;
        let mut gap = f64::MAX;
        for (i, a) in means.iter().enumerate() {
            for b in &means[i + 1..] {
                gap = gap.min(
                    a.iter()
                        .zip(b)
                        .map(|(x, y)| (x - y).powi(2))
                        .sum::<f64>()
                        .sqrt(),
                );
            }
        }
        println!(
            "lambda {lambda}: softmax {:.4} center {:.4}, scatter {scatter:.4}, closest class means {gap:.4}",
            last.softmax, last.center
        );
        if lambda > 0.0 {
            let csv = loss_history_csv(&out.history);
            for line in csv.lines().take(4) {
                println!("  {line}");
            }
        }
    }
    Ok(())
}
