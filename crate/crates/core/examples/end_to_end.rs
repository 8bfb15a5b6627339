//! Full workflow on a synthetic scene: train with and without center loss,
//! then compare network-only and CRF-refined accuracy on the test pixels.
//!
//! cargo run --release --example end_to_end [noise] [seed]

use dmlcrf::dml;
use dmlcrf::hsi::{synth_scene, SynthConfig};
use dmlcrf::pipeline::{run_experiment, training_set, RunConfig};

fn main() -> dmlcrf::Result<()> {
    let mut args = std::env::args().skip(1);
    let noise: f64 = args
        .next()
        .and_then(|s| s.parse().ok())
        .unwrap_or(SynthConfig::default().noise_level);
    let seed: u64 = args.next().and_then(|s| s.parse().ok()).unwrap_or(0);

    let (cube, labels) = synth_scene(&SynthConfig {
        noise_level: noise,
        seed,
        ..Default::default()
    })?;
    println!(
        "scene {}x{}x{}, {} classes, noise {noise}",
        cube.height(),
        cube.width(),
        cube.bands(),
        labels.classes()
    );

    for lambda in [1.0, 0.0] {
        let mut cfg = RunConfig::default();
        cfg.train.lambda = lambda;
        let out = run_experiment(&cube, &labels, &cfg, seed)?;
        let normalized = dmlcrf::hsi::normalize(&cube);
        let set = training_set(&normalized, &labels, &out.split, &cfg, seed)?;
        let scatter = dml::mean_center_distance(&out.checkpoint.params, &set)?;
        println!("lambda = {lambda}");
        println!("  training OA        {:.4}", out.train_oa);
        println!("  feature scatter    {scatter:.4}");
        println!(
            "  DML      OA {:.4}  AA {:.4}  kappa {:.4}",
            out.dml.oa, out.dml.aa, out.dml.kappa
        );
        println!(
            "  DML-CRF  OA {:.4}  AA {:.4}  kappa {:.4}",
            out.crf.oa, out.crf.aa, out.crf.kappa
        );
        println!(
            "  extraction {:.3} s, crf {:.3} s",
            out.extraction_secs, out.inference_secs
        );
    }
    Ok(())
}
