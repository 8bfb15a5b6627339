#![allow(dead_code)]

use dmlcrf::crf::CrfParams;
use dmlcrf::dml::{CenterLossForm, FeatureMap, Layer, MlpParams, ProbabilityMap, TrainConfig};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Plain-loop forward pass: ReLU on every layer below the feature layer,
/// identity on the feature layer and the head.
pub fn oracle_forward(layers: &[Layer], x: &[f64]) -> (Vec<f64>, Vec<f64>) {
    let mut a = x.to_vec();
    let mut feature = Vec::new();
    for (l, layer) in layers.iter().enumerate() {
        let mut z = vec![0.0; layer.rows];
        for r in 0..layer.rows {
            let mut s = layer.bias[r];
            for c in 0..layer.cols {
                s += layer.weights[r * layer.cols + c] * a[c];
            }
            z[r] = s;
        }
        if l + 2 < layers.len() {
            z.iter_mut().for_each(|v| *v = v.max(0.0));
        }
        if l + 2 == layers.len() {
            feature = z.clone();
        }
        a = z;
    }
    (feature, a)
}

/// Batch-mean cross-entropy plus `lambda` times the batch-mean center term.
pub fn oracle_loss(
    layers: &[Layer],
    xs: &[Vec<f64>],
    ys: &[u32],
    centers: &[Vec<f64>],
    lambda: f64,
    form: CenterLossForm,
) -> f64 {
    let mut total = 0.0;
    for (x, &y) in xs.iter().zip(ys) {
        let (f, logits) = oracle_forward(layers, x);
        let m = logits.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        let lse = m + logits.iter().map(|v| (v - m).exp()).sum::<f64>().ln();
        let ce = lse - logits[y as usize - 1];
        let d2: f64 = f
            .iter()
            .zip(&centers[y as usize - 1])
            .map(|(a, b)| (a - b).powi(2))
            .sum();
        let lc = match form {
            CenterLossForm::Norm => d2.sqrt(),
            CenterLossForm::Squared => 0.5 * d2,
        };
        total += ce + lambda * lc;
    }
    total / xs.len() as f64
}

pub struct GradInstance {
    pub params: MlpParams,
    pub xs: Vec<Vec<f64>>,
    pub ys: Vec<u32>,
    pub centers: Vec<Vec<f64>>,
    pub cfg: TrainConfig,
}

/// Random 4-5-5-3-2 network with a batch of four.
pub fn grad_instance(seed: u64, form: CenterLossForm) -> GradInstance {
    let mut r = rng(seed);
    let dims = [4, 5, 5, 3, 2];
    let mut params = MlpParams::init(&dims, &mut r).unwrap();
    for layer in params.layers_mut() {
        for b in layer.bias.iter_mut() {
            *b = r.random_range(-0.5..0.5);
        }
    }
    let xs: Vec<Vec<f64>> = (0..4)
        .map(|_| (0..4).map(|_| r.random_range(-2.0..2.0)).collect())
        .collect();
    let ys: Vec<u32> = (0..4).map(|_| r.random_range(1..=2)).collect();
    let centers: Vec<Vec<f64>> = (0..2)
        .map(|_| (0..3).map(|_| r.random_range(-1.0..1.0)).collect())
        .collect();
    let cfg = TrainConfig {
        lambda: r.random_range(0.1..2.0),
        center_loss_form: form,
        hidden_dims: vec![5, 5],
        feature_dim: 3,
        ..TrainConfig::default()
    };
    GradInstance {
        params,
        xs,
        ys,
        centers,
        cfg,
    }
}

pub fn random_prob(r: &mut ChaCha8Rng, h: usize, w: usize, c: usize) -> ProbabilityMap {
    let mut values = Vec::with_capacity(h * w * c);
    for _ in 0..h * w {
        let raw: Vec<f64> = (0..c).map(|_| r.random_range(0.01..1.0)).collect();
        let s: f64 = raw.iter().sum();
        values.extend(raw.iter().map(|v| v / s));
    }
    ProbabilityMap::new(h, w, c, values).unwrap()
}

pub fn random_features(r: &mut ChaCha8Rng, h: usize, w: usize, f: usize, scale: f64) -> FeatureMap {
    let values = (0..h * w * f)
        .map(|_| r.random_range(-scale..scale))
        .collect();
    FeatureMap::new(h, w, f, values).unwrap()
}

/// Random kernel parameters around the defaults with a window covering the image.
pub fn random_crf(r: &mut ChaCha8Rng, side: usize) -> CrfParams {
    CrfParams {
        w_app: r.random_range(0.5..10.0),
        w_smo: r.random_range(0.5..5.0),
        theta_alpha: r.random_range(0.05..1.0),
        theta_beta: r.random_range(0.5..5.0),
        theta_gamma: r.random_range(0.5..5.0),
        filter_size: 2 * side + 1,
        iterations: 5,
        ..CrfParams::default()
    }
}
