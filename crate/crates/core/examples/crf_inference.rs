//! CRF inference on its own: corrupt a label map into noisy class
//! probabilities, then let the windowed mean-field clean it up.
//!
//! cargo run --release --example crf_inference [flip_rate] [k]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use dmlcrf::crf::{self, CrfParams};
use dmlcrf::dml::{FeatureMap, ProbabilityMap};
use dmlcrf::hsi::{synth_scene, LabelMap, SynthConfig};
use dmlcrf::metrics::{confusion, report};

fn main() -> dmlcrf::Result<()> {
    let mut args = std::env::args().skip(1);
    let flip: f64 = args.next().and_then(|s| s.parse().ok()).unwrap_or(0.1);
    let k: usize = args.next().and_then(|s| s.parse().ok()).unwrap_or(7);

    let (_, gt) = synth_scene(&SynthConfig::default())?;
    let (h, w, c) = (gt.height(), gt.width(), gt.classes() as usize);
    let mut rng = ChaCha8Rng::seed_from_u64(1);

    // confident but sometimes wrong per-pixel distributions
    let mut prob = Vec::with_capacity(h * w * c);
    for &label in gt.labels() {
        let mut row = vec![0.05 / (c - 1) as f64; c];
        let hot = if rng.random_bool(flip) {
            rng.random_range(0..c)
        } else {
            label as usize - 1
        };
        row[hot] = 0.95;
        prob.extend(row);
    }
    let prob = ProbabilityMap::new(h, w, c, prob)?;
    // one-hot class embedding scaled well past theta_beta
    let mut feats = Vec::with_capacity(h * w * c);
    for &label in gt.labels() {
        feats.extend((0..c).map(|i| if i + 1 == label as usize { 200.0 } else { 0.0 }));
    }
    let features = FeatureMap::new(h, w, c, feats)?;

    let before = LabelMap::with_classes(h, w, c as u32, prob.labels())?;
    let flat = FeatureMap::new(h, w, 1, vec![0.0; h * w])?;
    let params = CrfParams::default().with_filter_size(k);
    let (spatial_only, _) = crf::infer(&prob, &flat, &params)?;
    let (with_features, _) = crf::infer(&prob, &features, &params)?;

    let oa = |m: &LabelMap| report(&confusion(m, &gt).unwrap()).unwrap().oa;
    println!("k = {k}, flip rate {flip}");
    println!("  unary argmax OA            {:.4}", oa(&before));
    println!("  CRF, uninformative features {:.4}", oa(&spatial_only));
    println!("  CRF, class-separated feats  {:.4}", oa(&with_features));
    Ok(())
}
