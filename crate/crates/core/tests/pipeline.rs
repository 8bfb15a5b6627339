use dmlcrf::crf::{infer, CrfParams};
use dmlcrf::dml::extract;
use dmlcrf::hsi::{synth_scene, HsiCube, LabelMap, SynthConfig};
use dmlcrf::metrics::{confusion, report};
use dmlcrf::pipeline::{
    aggregate, prepare_cube, run_experiment, sweep_cached, ExperimentOutcome, RunConfig,
    SweepParam, SweepSpec,
};

fn small_scene() -> (HsiCube, LabelMap) {
    synth_scene(&SynthConfig {
        height: 30,
        width: 30,
        bands: 8,
        classes: 3,
        seed: 4,
        ..SynthConfig::default()
    })
    .unwrap()
}

fn small_config() -> RunConfig {
    let mut cfg = RunConfig::default();
    cfg.apply_text(
        "per_class = 20\nvirtual_per_class = 20\nepochs = 15\nhidden_dims = 16,16\nfeature_dim = 8",
    )
    .unwrap();
    cfg
}

fn small_run(seed: u64) -> (HsiCube, LabelMap, ExperimentOutcome) {
    let (cube, labels) = small_scene();
    let run = run_experiment(&cube, &labels, &small_config(), seed).unwrap();
    (cube, labels, run)
}

#[test]
fn cached_sweep_matches_recomputation() {
    let (cube, labels, run) = small_run(0);
    let gt = labels.restricted_to(&run.split.test);
    let base = CrfParams::default();
    let normalized = prepare_cube(&cube, small_config().normalize, Some(&run.split.train));
    for param in SweepParam::ALL {
        let spec = match param {
            SweepParam::FilterSize => SweepSpec::new("k", vec![1.0, 3.0, 5.0, 7.0]).unwrap(),
            p => SweepSpec::scaled(p, &base, &[0.25, 1.0, 4.0]),
        };
        let rows = sweep_cached(&run.prob, &run.features, &gt, &base, &spec).unwrap();
        assert_eq!(rows.len(), spec.values.len());
        for (row, &v) in rows.iter().zip(&spec.values) {
            let (feats, prob) = extract(&run.checkpoint.params, &normalized).unwrap();
            let params = param.set(&base, v).unwrap();
            let (pred, _) = infer(&prob, &feats, &params).unwrap();
            let r = report(&confusion(&pred, &gt).unwrap()).unwrap();
            assert_eq!((row.oa, row.aa), (r.oa, r.aa), "{} = {v}", param.name());
        }
    }
}

#[test]
fn unit_window_equals_no_crf() {
    let (_, labels, run) = small_run(1);
    let gt = labels.restricted_to(&run.split.test);
    let spec = SweepSpec::new("k", vec![1.0]).unwrap();
    let row = sweep_cached(&run.prob, &run.features, &gt, &CrfParams::default(), &spec).unwrap()[0];
    assert_eq!(row.oa, run.dml.oa);
    assert_eq!(row.aa, run.dml.aa);
}

#[test]
fn experiment_is_deterministic() {
    let (_, _, a) = small_run(3);
    let (_, _, b) = small_run(3);
    assert_eq!(a.checkpoint, b.checkpoint);
    assert_eq!(a.crf_labels, b.crf_labels);
    assert_eq!(a.history, b.history);
    assert!(a.train_oa >= 0.95, "training OA {}", a.train_oa);
}

#[test]
fn repeated_runs_aggregate() {
    let runs: Vec<_> = (0..3)
        .map(|s| {
            let (_, _, r) = small_run(s);
            (r.dml, r.crf)
        })
        .collect();
    let rows = aggregate(&runs);
    assert_eq!(rows.len(), 6);
    let oa = rows
        .iter()
        .find(|r| r.method == "dml" && r.metric == "oa")
        .unwrap();
    let values: Vec<f64> = runs.iter().map(|r| r.0.oa).collect();
    let mean = values.iter().sum::<f64>() / 3.0;
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / 2.0;
    assert!((oa.mean - mean).abs() < 1e-12 && (oa.std - var.sqrt()).abs() < 1e-12);

    let same = vec![runs[0].clone(); 4];
    assert!(aggregate(&same).iter().all(|r| r.std == 0.0));
}
