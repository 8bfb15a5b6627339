use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::loss::{softmax_loss, CenterLossForm};
use super::net::{Layer, MlpParams};
use crate::error::{Error, Result};
use crate::hsi::SampleSet;

#[derive(Debug, Clone, PartialEq)]
pub struct TrainConfig {
    /// Weight of the center loss in `L = Ls + lambda * Lc`.
    pub lambda: f64,
    /// Damping of the per-batch center update, in `(0, 1]`.
    pub center_rate: f64,
    pub learning_rate: f64,
    pub momentum: f64,
    pub batch_size: usize,
    pub epochs: usize,
    pub seed: u64,
    pub center_loss_form: CenterLossForm,
    pub hidden_dims: Vec<usize>,
    pub feature_dim: usize,
}

impl Default for TrainConfig {
    fn default() -> Self {
        Self {
            lambda: 1.0,
            center_rate: 0.5,
            learning_rate: 0.01,
            momentum: 0.9,
            batch_size: 64,
            epochs: 400,
            seed: 0,
            center_loss_form: CenterLossForm::Norm,
            hidden_dims: vec![128, 64],
            feature_dim: 32,
        }
    }
}

impl TrainConfig {
    pub fn layer_dims(&self, bands: usize, classes: usize) -> Vec<usize> {
        let mut dims = vec![bands];
        dims.extend(&self.hidden_dims);
        dims.extend([self.feature_dim, classes]);
        dims
    }

    fn validate(&self) -> Result<()> {
        if !(self.learning_rate > 0.0) {
            return Err(Error::Usage("learning_rate must be > 0".into()));
        }
        if self.batch_size == 0 {
            return Err(Error::Usage("batch_size must be >= 1".into()));
        }
        if !(self.lambda >= 0.0) {
            return Err(Error::Usage("lambda must be >= 0".into()));
        }
        if !(self.center_rate > 0.0 && self.center_rate <= 1.0) {
            return Err(Error::Usage("center_rate must lie in (0, 1]".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrainState {
    /// `centers[c - 1]` is the feature center of class `c`.
    pub centers: Vec<Vec<f64>>,
    /// Momentum buffers shaped like the network layers.
    pub velocity: Vec<Layer>,
    pub epoch: usize,
    pub seed: u64,
}

/// Batch-mean loss components.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LossParts {
    pub softmax: f64,
    pub center: f64,
    pub joint: f64,
}

/// Per-sample means over one epoch.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EpochLoss {
    pub epoch: usize,
    pub softmax: f64,
    pub center: f64,
    pub joint: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrainOutcome {
    pub params: MlpParams,
    pub state: TrainState,
    pub history: Vec<EpochLoss>,
}

/// Joint loss `mean(Ls) + lambda * mean(Lc)` of a batch against fixed centers.
pub fn batch_loss(
    params: &MlpParams,
    spectra: &[&[f64]],
    labels: &[u32],
    centers: &[Vec<f64>],
    cfg: &TrainConfig,
) -> Result<LossParts> {
    let mut features = Vec::with_capacity(spectra.len());
    let mut ls = 0.0;
    for (x, &y) in spectra.iter().zip(labels) {
        let fwd = params.forward(x)?;
        ls += softmax_loss(&fwd.prob, y);
        features.push(fwd.feature().to_vec());
    }
    let lc = super::center_loss(&features, labels, centers, cfg.center_loss_form)?;
    let n = spectra.len() as f64;
    Ok(LossParts {
        softmax: ls / n,
        center: lc / n,
        joint: (ls + cfg.lambda * lc) / n,
    })
}

struct BatchPass {
    grads: Vec<Layer>,
    features: Vec<Vec<f64>>,
    loss: LossParts,
}

fn backprop(
    params: &MlpParams,
    spectra: &[&[f64]],
    labels: &[u32],
    centers: &[Vec<f64>],
    cfg: &TrainConfig,
) -> Result<BatchPass> {
    if spectra.is_empty() {
        return Err(Error::Data("empty batch".into()));
    }
    let layers = params.layers();
    let acts = params.activations();
    let head = layers.len() - 1;
    let n = spectra.len() as f64;
    let mut grads: Vec<Layer> = layers
        .iter()
        .map(|l| Layer::zeros(l.rows, l.cols))
        .collect();
    let mut features = Vec::with_capacity(spectra.len());
    let (mut ls, mut lc) = (0.0, 0.0);

    for (x, &y) in spectra.iter().zip(labels) {
        let fwd = params.forward(x)?;
        let class = y as usize - 1;
        let center = centers
            .get(class)
            .ok_or_else(|| Error::State(format!("no center for class {y}")))?;
        ls += softmax_loss(&fwd.prob, y);

        // dL/dlogits for the batch-mean cross-entropy
        let mut delta: Vec<f64> = fwd.prob.iter().map(|p| p / n).collect();
        delta[class] -= 1.0 / n;

        for l in (0..=head).rev() {
            let layer = &layers[l];
            let input = &fwd.inputs[l];
            let g = &mut grads[l];
            for (r, &d) in delta.iter().enumerate() {
                g.bias[r] += d;
                for (gw, &xi) in g.weights[r * layer.cols..(r + 1) * layer.cols]
                    .iter_mut()
                    .zip(input)
                {
                    *gw += d * xi;
                }
            }
            if l == 0 {
                break;
            }
            let mut below = vec![0.0; layer.cols];
            for (r, &d) in delta.iter().enumerate() {
                for (b, &w) in below
                    .iter_mut()
                    .zip(&layer.weights[r * layer.cols..(r + 1) * layer.cols])
                {
                    *b += d * w;
                }
            }
            if l == head {
                // the center term enters at the feature layer output
                let f = &fwd.inputs[head];
                let d2: f64 = f.iter().zip(center).map(|(a, c)| (a - c) * (a - c)).sum();
                lc += cfg.center_loss_form.value(d2);
                let scale = match cfg.center_loss_form {
                    CenterLossForm::Norm if d2 > 0.0 => cfg.lambda / (n * d2.sqrt()),
                    CenterLossForm::Norm => 0.0,
                    CenterLossForm::Squared => cfg.lambda / n,
                };
                for ((b, &a), &c) in below.iter_mut().zip(f).zip(center) {
                    *b += scale * (a - c);
                }
            }
            let act = acts[l - 1];
            for (b, &z) in below.iter_mut().zip(&fwd.pre[l - 1]) {
                *b *= act.slope(z);
            }
            delta = below;
        }
        features.push(fwd.feature().to_vec());
    }
    Ok(BatchPass {
        grads,
        features,
        loss: LossParts {
            softmax: ls / n,
            center: lc / n,
            joint: (ls + cfg.lambda * lc) / n,
        },
    })
}

/// Gradients of the joint batch loss with respect to every weight and bias.
/// Centers are treated as constants.
pub fn backward(
    params: &MlpParams,
    spectra: &[&[f64]],
    labels: &[u32],
    state: &TrainState,
    cfg: &TrainConfig,
) -> Result<Vec<Layer>> {
    Ok(backprop(params, spectra, labels, &state.centers, cfg)?.grads)
}

/// Damped move of each class center present in the batch toward its features:
/// `c -= rate * sum(c - f) / (1 + count)`.
pub fn update_centers<F: AsRef<[f64]>>(
    centers: &mut [Vec<f64>],
    features: &[F],
    labels: &[u32],
    rate: f64,
) {
    let dim = centers.first().map_or(0, Vec::len);
    let mut delta = vec![vec![0.0; dim]; centers.len()];
    let mut count = vec![0usize; centers.len()];
    for (f, &y) in features.iter().zip(labels) {
        let c = y as usize - 1;
        count[c] += 1;
        for ((d, &ci), &fi) in delta[c].iter_mut().zip(&centers[c]).zip(f.as_ref()) {
            *d += ci - fi;
        }
    }
    for ((center, d), &k) in centers.iter_mut().zip(&delta).zip(&count) {
        if k == 0 {
            continue;
        }
        let denom = 1.0 + k as f64;
        for (ci, di) in center.iter_mut().zip(d) {
            *ci -= rate * di / denom;
        }
    }
}

/// Mean feature of each class over the set (zero vector for an absent class).
pub fn class_mean_features(params: &MlpParams, set: &SampleSet) -> Result<Vec<Vec<f64>>> {
    let f = params.feature_dim();
    let mut sums = vec![vec![0.0; f]; set.class_count() as usize];
    let mut counts = vec![0usize; sums.len()];
    for (x, y) in set.iter() {
        let fwd = params.forward(x)?;
        let c = y as usize - 1;
        counts[c] += 1;
        for (s, v) in sums[c].iter_mut().zip(fwd.feature()) {
            *s += v;
        }
    }
    for (s, &k) in sums.iter_mut().zip(&counts) {
        if k > 0 {
            s.iter_mut().for_each(|v| *v /= k as f64);
        }
    }
    Ok(sums)
}

/// Mean Euclidean distance of each sample's feature to its class mean feature.
pub fn mean_center_distance(params: &MlpParams, set: &SampleSet) -> Result<f64> {
    let means = class_mean_features(params, set)?;
    let mut total = 0.0;
    for (x, y) in set.iter() {
        let fwd = params.forward(x)?;
        let c = &means[y as usize - 1];
        total += fwd
            .feature()
            .iter()
            .zip(c)
            .map(|(a, b)| (a - b) * (a - b))
            .sum::<f64>()
            .sqrt();
    }
    Ok(total / set.len().max(1) as f64)
}

/// Minibatch SGD with momentum on the joint loss. Deterministic given the seed.
pub fn train(set: &SampleSet, cfg: &TrainConfig) -> Result<TrainOutcome> {
    cfg.validate()?;
    if set.is_empty() {
        return Err(Error::Data("training set is empty".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let dims = cfg.layer_dims(set.dimension(), set.class_count() as usize);
    let mut params = MlpParams::init(&dims, &mut rng)?;
    let mut state = TrainState {
        centers: class_mean_features(&params, set)?,
        velocity: params
            .layers()
            .iter()
            .map(|l| Layer::zeros(l.rows, l.cols))
            .collect(),
        epoch: 0,
        seed: cfg.seed,
    };
    let mut history = Vec::with_capacity(cfg.epochs);
    let mut order: Vec<usize> = (0..set.len()).collect();

    for epoch in 1..=cfg.epochs {
        order.shuffle(&mut rng);
        let (mut ls, mut lc, mut lj) = (0.0, 0.0, 0.0);
        for batch in order.chunks(cfg.batch_size) {
            let spectra: Vec<&[f64]> = batch.iter().map(|&i| set.spectrum(i)).collect();
            let labels: Vec<u32> = batch.iter().map(|&i| set.label(i)).collect();
            let pass = backprop(&params, &spectra, &labels, &state.centers, cfg)?;
            let k = batch.len() as f64;
            ls += pass.loss.softmax * k;
            lc += pass.loss.center * k;
            lj += pass.loss.joint * k;

            for ((layer, v), g) in params
                .layers_mut()
                .iter_mut()
                .zip(&mut state.velocity)
                .zip(&pass.grads)
            {
                for ((w, vw), gw) in layer.weights.iter_mut().zip(&mut v.weights).zip(&g.weights) {
                    *vw = cfg.momentum * *vw - cfg.learning_rate * gw;
                    *w += *vw;
                }
                for ((b, vb), gb) in layer.bias.iter_mut().zip(&mut v.bias).zip(&g.bias) {
                    *vb = cfg.momentum * *vb - cfg.learning_rate * gb;
                    *b += *vb;
                }
            }
            update_centers(&mut state.centers, &pass.features, &labels, cfg.center_rate);
        }
        let n = set.len() as f64;
        let record = EpochLoss {
            epoch,
            softmax: ls / n,
            center: lc / n,
            joint: lj / n,
        };
        if !record.joint.is_finite() {
            return Err(Error::Divergence { epoch });
        }
        history.push(record);
        state.epoch = epoch;
    }
    Ok(TrainOutcome {
        params,
        state,
        history,
    })
}
