//! One-at-a-time sweeps of the five kernel parameters over a 4x range around
//! their anchors, plus a filter-size sweep, on cached network outputs.
//!
//! cargo run --release --example parameter_sweep

use dmlcrf::crf::CrfParams;
use dmlcrf::hsi::{synth_scene, SynthConfig};
use dmlcrf::pipeline::{run_experiment, sweep_cached, RunConfig, SweepParam, SweepSpec};

fn main() -> dmlcrf::Result<()> {
    let (cube, labels) = synth_scene(&SynthConfig::default())?;
    let cfg = RunConfig::default();
    let run = run_experiment(&cube, &labels, &cfg, 0)?;
    let test_gt = labels.restricted_to(&run.split.test);
    let base = CrfParams::default();
    println!(
        "DML-only OA {:.4}, anchored DML-CRF OA {:.4}",
        run.dml.oa, run.crf.oa
    );

    let factors = [0.25, 0.5, 1.0, 2.0, 4.0];
    for param in &SweepParam::ALL[..5] {
        let spec = SweepSpec::scaled(*param, &base, &factors);
        let rows = sweep_cached(&run.prob, &run.features, &test_gt, &base, &spec)?;
        let oas: Vec<f64> = rows.iter().map(|r| r.oa).collect();
        let spread = oas.iter().cloned().fold(f64::MIN, f64::max)
            - oas.iter().cloned().fold(f64::MAX, f64::min);
        print!("{:<12}", param.name());
        for r in &rows {
            print!(" {:>8}:{:.4}", r.value, r.oa);
        }
        println!("   spread {:.2} pp", 100.0 * spread);
    }

    let spec = SweepSpec::new("k", vec![1.0, 3.0, 5.0, 7.0, 9.0, 15.0])?;
    print!("{:<12}", "k");
    for r in sweep_cached(&run.prob, &run.features, &test_gt, &base, &spec)? {
        print!(" {:>3}:{:.4}/{:.4}", r.value, r.oa, r.aa);
    }
    println!();
    Ok(())
}
