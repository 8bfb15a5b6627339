//! Desk-scale acceptance suite. Each test prints one PASS/FAIL line.
//!
//! cargo test --release --test acceptance -- --nocapture --test-threads 1

mod common;

use std::sync::OnceLock;
use std::time::Instant;

use common::*;
use dmlcrf::crf::{brute_force_trace, infer, infer_trace, unary_from_prob, CrfParams};
use dmlcrf::dml::{self, backward, CenterLossForm, TrainState};
use dmlcrf::hsi::{synth_scene, HsiCube, LabelMap, SynthConfig};
use dmlcrf::metrics::{report, ConfusionMatrix};
use dmlcrf::pipeline::{
    prepare_cube, run_experiment, sweep_cached, training_set, ExperimentOutcome, RunConfig,
    SweepParam, SweepSpec,
};
use rand::Rng;

fn verdict(id: u32, name: &str, pass: bool, detail: String) {
    println!(
        "criterion {id} {name}: {} ({detail})",
        if pass { "PASS" } else { "FAIL" }
    );
}

struct Scene {
    cube: HsiCube,
    labels: LabelMap,
    with_center: ExperimentOutcome,
    secs: f64,
}

fn scene() -> &'static Scene {
    static SCENE: OnceLock<Scene> = OnceLock::new();
    SCENE.get_or_init(|| {
        let started = Instant::now();
        let (cube, labels) = synth_scene(&SynthConfig::default()).unwrap();
        let with_center = run_experiment(&cube, &labels, &RunConfig::default(), 0).unwrap();
        Scene {
            cube,
            labels,
            with_center,
            secs: started.elapsed().as_secs_f64(),
        }
    })
}

/// Weight `i` of layer `l`, continuing into the bias past the weights.
fn param_mut(layers: &mut [dml::Layer], l: usize, i: usize) -> &mut f64 {
    let n_w = layers[l].weights.len();
    if i < n_w {
        &mut layers[l].weights[i]
    } else {
        &mut layers[l].bias[i - n_w]
    }
}

#[test]
fn criterion_1_gradient_oracle() {
    let started = Instant::now();
    let h = 1e-4;
    let mut worst: f64 = 0.0;
    let mut checked = 0usize;
    let nets = 24;
    for seed in 0..nets {
        let form = if seed % 2 == 0 {
            CenterLossForm::Norm
        } else {
            CenterLossForm::Squared
        };
        let inst = grad_instance(seed, form);
        let spectra: Vec<&[f64]> = inst.xs.iter().map(Vec::as_slice).collect();
        let state = TrainState {
            centers: inst.centers.clone(),
            velocity: Vec::new(),
            epoch: 0,
            seed,
        };
        let grads = backward(&inst.params, &spectra, &inst.ys, &state, &inst.cfg).unwrap();
        let loss = |layers: &[dml::Layer]| {
            oracle_loss(
                layers,
                &inst.xs,
                &inst.ys,
                &inst.centers,
                inst.cfg.lambda,
                form,
            )
        };
        let mut layers = inst.params.layers().to_vec();
        for l in 0..layers.len() {
            let n_w = layers[l].weights.len();
            for i in 0..n_w + layers[l].bias.len() {
                let orig = *param_mut(&mut layers, l, i);
                *param_mut(&mut layers, l, i) = orig + h;
                let up = loss(&layers);
                *param_mut(&mut layers, l, i) = orig - h;
                let down = loss(&layers);
                *param_mut(&mut layers, l, i) = orig;
                let numeric = (up - down) / (2.0 * h);
                let analytic = if i < n_w {
                    grads[l].weights[i]
                } else {
                    grads[l].bias[i - n_w]
                };
                let scale = analytic.abs().max(numeric.abs());
                if scale > 0.0 {
                    worst = worst.max((analytic - numeric).abs() / scale);
                }
                checked += 1;
            }
        }
    }
    let secs = started.elapsed().as_secs_f64();
    let pass = worst < 1e-4 && secs < 10.0;
    verdict(
        1,
        "gradient oracle",
        pass,
        format!("{nets} nets, {checked} components, worst relative error {worst:.2e}, {secs:.2}s"),
    );
    assert!(pass);
}

#[test]
fn criterion_2_dense_oracle() {
    let started = Instant::now();
    let mut worst: f64 = 0.0;
    let instances = 12;
    for seed in 0..instances {
        let mut r = rng(100 + seed);
        let prob = random_prob(&mut r, 6, 6, 3);
        let feats = random_features(&mut r, 6, 6, 4, 2.0);
        let params = random_crf(&mut r, 6);
        let windowed = infer_trace(&prob, &feats, &params).unwrap();
        let dense = brute_force_trace(&prob, &feats, &params).unwrap();
        assert_eq!(windowed.len(), 5);
        for (a, b) in windowed.iter().zip(&dense) {
            worst = worst.max(a.max_abs_diff(b));
        }
    }
    let secs = started.elapsed().as_secs_f64();
    let pass = worst <= 1e-5 && secs < 10.0;
    verdict(
        2,
        "dense-oracle equivalence",
        pass,
        format!("{instances} instances, 5 iterations, worst max-abs {worst:.2e}, {secs:.2}s"),
    );
    assert!(pass);
}

#[test]
fn criterion_3_degenerate_crf() {
    let mut mismatches = 0usize;
    let instances = 30;
    for seed in 0..instances {
        let mut r = rng(200 + seed);
        let (h, w, c) = (
            r.random_range(1..12),
            r.random_range(1..12),
            r.random_range(2..6),
        );
        let prob = random_prob(&mut r, h, w, c);
        let feats = random_features(&mut r, h, w, 3, 5.0);
        let params = CrfParams {
            w_app: 0.0,
            w_smo: 0.0,
            filter_size: 2 * r.random_range(0..5) + 1,
            iterations: r.random_range(1..8),
            ..CrfParams::default()
        };
        let (labels, _) = infer(&prob, &feats, &params).unwrap();
        let unary = unary_from_prob(&prob);
        for (i, &l) in labels.labels().iter().enumerate() {
            let u = unary.pixel(i);
            let best = (0..c).fold(0, |b, k| if u[k] < u[b] { k } else { b });
            if l as usize != best + 1 {
                mismatches += 1;
            }
        }
    }
    let pass = mismatches == 0;
    verdict(
        3,
        "degenerate-CRF identity",
        pass,
        format!("{instances} instances, {mismatches} mismatched pixels"),
    );
    assert!(pass);
}

#[test]
fn criterion_4_center_loss_effect() {
    let s = scene();
    let started = Instant::now();
    let mut cfg = RunConfig::default();
    cfg.train.lambda = 0.0;
    let without = run_experiment(&s.cube, &s.labels, &cfg, 0).unwrap();
    let secs = s.secs + started.elapsed().as_secs_f64();

    let base = RunConfig::default();
    let normalized = prepare_cube(&s.cube, base.normalize, Some(&s.with_center.split.train));
    let set = training_set(&normalized, &s.labels, &s.with_center.split, &base, 0).unwrap();
    let scatter_on = dml::mean_center_distance(&s.with_center.checkpoint.params, &set).unwrap();
    let scatter_off = dml::mean_center_distance(&without.checkpoint.params, &set).unwrap();
    let (dml_oa, crf_oa) = (s.with_center.dml.oa, s.with_center.crf.oa);

    let pass = scatter_on < scatter_off && crf_oa >= dml_oa && secs < 300.0;
    verdict(
        4,
        "center-loss effect",
        pass,
        format!(
            "scatter {scatter_on:.4} (lambda 1) vs {scatter_off:.4} (lambda 0); OA {crf_oa:.4} DML-CRF vs {dml_oa:.4} DML; {secs:.1}s"
        ),
    );
    assert!(pass);
}

#[test]
fn criterion_5_metric_formulas() {
    let worked = report(&ConfusionMatrix::from_counts(2, vec![40, 10, 20, 30]).unwrap()).unwrap();
    let perfect = report(&ConfusionMatrix::from_counts(2, vec![50, 0, 0, 50]).unwrap()).unwrap();
    let chance = report(&ConfusionMatrix::from_counts(2, vec![50, 0, 50, 0]).unwrap()).unwrap();

    // independent evaluation of the worked example
    let (p_o, p_p, p_g) = (
        70.0 / 100.0,
        [60.0 / 100.0, 40.0 / 100.0],
        [50.0 / 100.0, 50.0 / 100.0],
    );
    let p_e = p_p[0] * p_g[0] + p_p[1] * p_g[1];
    let kappa = (p_o - p_e) / (1.0 - p_e);
    let aa = (40.0 / 50.0 + 30.0 / 50.0) / 2.0;

    let close = |a: f64, b: f64| (a - b).abs() < 1e-12;
    let pass = close(worked.oa, p_o)
        && close(worked.kappa, kappa)
        && close(worked.kappa, 0.4)
        && close(worked.aa, aa)
        && close(worked.aa, 0.7)
        && (perfect.oa, perfect.aa, perfect.kappa) == (1.0, 1.0, 1.0)
        && close(chance.oa, 0.5)
        && close(chance.kappa, 0.0);
    verdict(
        5,
        "metric formulas",
        pass,
        format!(
            "worked oa {:.4} aa {:.4} kappa {:.4}; perfect kappa {}; chance kappa {}",
            worked.oa, worked.aa, worked.kappa, perfect.kappa, chance.kappa
        ),
    );
    assert!(pass);
}

#[test]
fn criterion_6_robustness_sweep() {
    let s = scene();
    let run = &s.with_center;
    let test_gt = s.labels.restricted_to(&run.split.test);
    let base = RunConfig::default().crf_for(&s.cube);
    let factors = [0.25, 0.5, 1.0, 2.0, 4.0];
    let mut spreads = Vec::new();
    for param in [
        SweepParam::WApp,
        SweepParam::WSmo,
        SweepParam::ThetaAlpha,
        SweepParam::ThetaBeta,
        SweepParam::ThetaGamma,
    ] {
        let spec = SweepSpec::scaled(param, &base, &factors);
        let rows = sweep_cached(&run.prob, &run.features, &test_gt, &base, &spec).unwrap();
        let hi = rows.iter().map(|r| r.oa).fold(f64::MIN, f64::max);
        let lo = rows.iter().map(|r| r.oa).fold(f64::MAX, f64::min);
        spreads.push((param.name(), 100.0 * (hi - lo)));
    }
    let worst = spreads.iter().map(|s| s.1).fold(0.0, f64::max);
    let pass = worst <= 2.0;
    let detail = spreads
        .iter()
        .map(|(n, s)| format!("{n} {s:.2}pp"))
        .collect::<Vec<_>>()
        .join(", ");
    verdict(6, "robustness sweep", pass, detail);
    assert!(pass);
}

/// Mean of five seeded runs on a converted real scene in `$var/cube.hsic`
/// and `$var/labels.pgm`, or `None` when the variable is unset.
fn real_scene(var: &str) -> Option<Vec<ExperimentOutcome>> {
    let dir = std::path::PathBuf::from(std::env::var_os(var)?);
    let cube = dmlcrf::hsi::read_cube(dir.join("cube.hsic")).unwrap();
    let labels = dmlcrf::hsi::read_pgm(dir.join("labels.pgm")).unwrap();
    let cfg = RunConfig::default();
    Some(
        (0..5)
            .map(|s| run_experiment(&cube, &labels, &cfg, s).unwrap())
            .collect(),
    )
}

fn mean(runs: &[ExperimentOutcome], f: impl Fn(&ExperimentOutcome) -> f64) -> f64 {
    runs.iter().map(f).sum::<f64>() / runs.len() as f64
}

#[test]
#[ignore = "needs DMLCRF_PAVIA pointing at a converted Pavia University scene"]
fn criterion_7_pavia_university() {
    let Some(runs) = real_scene("DMLCRF_PAVIA") else {
        println!("criterion 7 pavia university: SKIPPED (DMLCRF_PAVIA unset)");
        return;
    };
    let (dml_oa, crf_oa) = (
        mean(&runs, |r| 100.0 * r.dml.oa),
        mean(&runs, |r| 100.0 * r.crf.oa),
    );
    let (aa, kappa) = (
        mean(&runs, |r| 100.0 * r.crf.aa),
        mean(&runs, |r| r.crf.kappa),
    );
    let pass = (dml_oa - 93.67).abs() <= 1.5
        && (crf_oa - 99.10).abs() <= 1.0
        && (aa - 98.72).abs() <= 1.0
        && (kappa - 0.9880).abs() <= 0.012;
    verdict(
        7,
        "pavia university",
        pass,
        format!("DML OA {dml_oa:.2}, DML-CRF OA {crf_oa:.2} AA {aa:.2} kappa {kappa:.4}"),
    );
    assert!(pass);
}

#[test]
#[ignore = "needs DMLCRF_SALINAS pointing at a converted Salinas scene"]
fn criterion_8_salinas() {
    let Some(runs) = real_scene("DMLCRF_SALINAS") else {
        println!("criterion 8 salinas: SKIPPED (DMLCRF_SALINAS unset)");
        return;
    };
    let (oa, aa) = (
        mean(&runs, |r| 100.0 * r.crf.oa),
        mean(&runs, |r| 100.0 * r.crf.aa),
    );
    let pass = (oa - 98.12).abs() <= 1.0 && (aa - 99.26).abs() <= 0.8;
    verdict(8, "salinas", pass, format!("DML-CRF OA {oa:.2} AA {aa:.2}"));
    assert!(pass);
}

#[test]
#[ignore = "slow; run with --release"]
fn criterion_9_inference_timing() {
    let mut r = rng(9);
    let (h, w) = (610, 340);
    let prob = random_prob(&mut r, h, w, 9);
    let feats = random_features(&mut r, h, w, 32, 1.0);
    let params = CrfParams::default();
    let started = Instant::now();
    infer(&prob, &feats, &params).unwrap();
    let secs = started.elapsed().as_secs_f64();
    let threads = rayon::current_num_threads();
    let pass = secs <= 300.0;
    verdict(
        9,
        "inference timing",
        pass,
        format!("{h}x{w}, C=9, k=7, 5 iterations: {secs:.2}s on {threads} threads (target 60s on 8 cores)"),
    );
    assert!(pass);
}
