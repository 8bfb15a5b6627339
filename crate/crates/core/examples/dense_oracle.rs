//! Windowed inference against the all-pairs reference on small random
//! images. With a window that covers the whole image the two agree to
//! rounding; smaller windows show what truncation costs.
//!
//! cargo run --release --example dense_oracle

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use dmlcrf::crf::{brute_force_trace, infer_trace, CrfParams};
use dmlcrf::dml::{FeatureMap, ProbabilityMap};

fn main() -> dmlcrf::Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let (h, w, c, f) = (8, 8, 3, 4);
    let mut probs = Vec::new();
    for _ in 0..h * w {
        let raw: Vec<f64> = (0..c).map(|_| rng.random_range(0.05..1.0)).collect();
        let s: f64 = raw.iter().sum();
        probs.extend(raw.iter().map(|v| v / s));
    }
    let prob = ProbabilityMap::new(h, w, c, probs)?;
    let feats = FeatureMap::new(
        h,
        w,
        f,
        (0..h * w * f)
            .map(|_| rng.random_range(-1.0..1.0))
            .collect(),
    )?;
    let base = CrfParams {
        theta_beta: 1.0,
        w_app: 2.0,
        w_smo: 1.0,
        ..CrfParams::default()
    };
    let dense = brute_force_trace(&prob, &feats, &base)?;

    println!("{:>3} {:>12} {:>12}", "k", "first iter", "last iter");
    for k in [1, 3, 5, 7, 9, 15] {
        let trace = infer_trace(&prob, &feats, &base.clone().with_filter_size(k))?;
        let first = trace[0].max_abs_diff(&dense[0]);
        let last = trace.last().unwrap().max_abs_diff(dense.last().unwrap());
        println!("{k:>3} {first:>12.3e} {last:>12.3e}");
    }
    Ok(())
}
