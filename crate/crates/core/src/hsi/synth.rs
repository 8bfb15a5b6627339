use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use super::{HsiCube, LabelMap};
use crate::error::{Error, Result};

/// Parameters of a synthetic blocky scene.
#[derive(Debug, Clone, PartialEq)]
pub struct SynthConfig {
    pub height: usize,
    pub width: usize,
    pub bands: usize,
    pub classes: u32,
    /// Per-band standard deviation of the pixel noise.
    pub noise_level: f64,
    pub seed: u64,
}

impl Default for SynthConfig {
    fn default() -> Self {
        Self {
            height: 64,
            width: 64,
            bands: 16,
            classes: 5,
            noise_level: 1.0,
            seed: 0,
        }
    }
}

const MAX_LAYOUT_ATTEMPTS: usize = 200;

/// Generates a label map tiled by random rectangles and a cube
/// whose spectra are `class mean + N(0, noise_level^2)` per band.
///
/// Class means are at least `4 * noise_level` apart in Euclidean distance.
pub fn synth_scene(cfg: &SynthConfig) -> Result<(HsiCube, LabelMap)> {
    if cfg.classes < 2 {
        return Err(Error::Usage(
            "a synthetic scene needs at least 2 classes".into(),
        ));
    }
    if !(cfg.noise_level >= 0.0 && cfg.noise_level.is_finite()) {
        return Err(Error::Usage("noise level must be finite and >= 0".into()));
    }
    if cfg.height == 0 || cfg.width == 0 || cfg.bands == 0 {
        return Err(Error::Usage("scene dimensions must be positive".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let labels = layout(cfg, &mut rng);
    let means = class_means(cfg, &mut rng);

    let mut values = Vec::with_capacity(labels.len() * cfg.bands);
    for &l in &labels {
        let mean = &means[l as usize - 1];
        for &m in mean {
            let z: f64 = rng.sample(StandardNormal);
            values.push(m + cfg.noise_level * z);
        }
    }
    let cube = HsiCube::new(cfg.height, cfg.width, cfg.bands, values)?;
    let labels = LabelMap::with_classes(cfg.height, cfg.width, cfg.classes, labels)?;
    Ok((cube, labels))
}

fn layout(cfg: &SynthConfig, rng: &mut ChaCha8Rng) -> Vec<u32> {
    let (h, w, c) = (cfg.height, cfg.width, cfg.classes as usize);
    let n = h * w;
    let min_share = n / (2 * c);
    let min_side = (h.min(w) / 6).max(1);
    let mut labels = vec![0u32; n];
    for _ in 0..MAX_LAYOUT_ATTEMPTS {
        let mut regions = Vec::new();
        partition(Rect { r0: 0, c0: 0, h, w }, min_side, rng, &mut regions);
        for rect in &regions {
            let class = rng.random_range(1..=cfg.classes);
            for r in rect.r0..rect.r0 + rect.h {
                labels[r * w + rect.c0..r * w + rect.c0 + rect.w].fill(class);
            }
        }
        let mut counts = vec![0usize; c];
        for &l in &labels {
            counts[l as usize - 1] += 1;
        }
        if counts.iter().all(|&k| k >= min_share) {
            break;
        }
    }
    labels
}

#[derive(Debug, Clone, Copy)]
struct Rect {
    r0: usize,
    c0: usize,
    h: usize,
    w: usize,
}

/// Guillotine partition: split the longer side at a random cut while both
/// halves keep at least `min_side`; stop at random once a region is small.
fn partition(rect: Rect, min_side: usize, rng: &mut ChaCha8Rng, out: &mut Vec<Rect>) {
    let split_rows = rect.h >= rect.w;
    let side = if split_rows { rect.h } else { rect.w };
    let small = side < 4 * min_side;
    if side < 2 * min_side || (small && rng.random_bool(0.5)) {
        out.push(rect);
        return;
    }
    let cut = rng.random_range(min_side..=side - min_side);
    let (a, b) = if split_rows {
        (
            Rect { h: cut, ..rect },
            Rect {
                r0: rect.r0 + cut,
                h: rect.h - cut,
                ..rect
            },
        )
    } else {
        (
            Rect { w: cut, ..rect },
            Rect {
                c0: rect.c0 + cut,
                w: rect.w - cut,
                ..rect
            },
        )
    };
    partition(a, min_side, rng, out);
    partition(b, min_side, rng, out);
}

fn class_means(cfg: &SynthConfig, rng: &mut ChaCha8Rng) -> Vec<Vec<f64>> {
    let mut means: Vec<Vec<f64>> = (0..cfg.classes)
        .map(|_| (0..cfg.bands).map(|_| rng.sample(StandardNormal)).collect())
        .collect();
    let mut closest = f64::INFINITY;
    for i in 0..means.len() {
        for j in i + 1..means.len() {
            closest = closest.min(distance(&means[i], &means[j]));
        }
    }
    let required = 4.0 * cfg.noise_level;
    if closest < required && closest > 0.0 {
        let scale = required / closest;
        means.iter_mut().flatten().for_each(|m| *m *= scale);
    }
    means
}

fn distance(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).powi(2))
        .sum::<f64>()
        .sqrt()
}
