use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{HsiCube, LabelMap};
use crate::error::{Error, Result};

/// Labeled spectra. Class ids run `1..=class_count`.
#[derive(Debug, Clone, PartialEq)]
pub struct SampleSet {
    dimension: usize,
    class_count: u32,
    spectra: Vec<f64>,
    labels: Vec<u32>,
}

impl SampleSet {
    pub fn new(dimension: usize, class_count: u32) -> Self {
        Self {
            dimension,
            class_count,
            spectra: Vec::new(),
            labels: Vec::new(),
        }
    }

    /// Gathers the spectra of `pixels`; every listed pixel must be labeled.
    pub fn from_pixels(cube: &HsiCube, labels: &LabelMap, pixels: &[usize]) -> Result<Self> {
        if cube.height() != labels.height() || cube.width() != labels.width() {
            return Err(Error::Shape(format!(
                "cube is {}x{}, labels are {}x{}",
                cube.height(),
                cube.width(),
                labels.height(),
                labels.width()
            )));
        }
        let mut set = SampleSet::new(cube.bands(), labels.classes());
        for &p in pixels {
            set.push(cube.spectrum(p), labels.labels()[p])?;
        }
        Ok(set)
    }

    pub fn push(&mut self, spectrum: &[f64], class: u32) -> Result<()> {
        if spectrum.len() != self.dimension {
            return Err(Error::Shape(format!(
                "spectrum has {} bands, set expects {}",
                spectrum.len(),
                self.dimension
            )));
        }
        if class == 0 || class > self.class_count {
            return Err(Error::Data(format!(
                "class id {class} outside 1..={}",
                self.class_count
            )));
        }
        if spectrum.iter().any(|v| !v.is_finite()) {
            return Err(Error::Data("non-finite spectrum".into()));
        }
        self.spectra.extend_from_slice(spectrum);
        self.labels.push(class);
        Ok(())
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn class_count(&self) -> u32 {
        self.class_count
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn spectrum(&self, i: usize) -> &[f64] {
        &self.spectra[i * self.dimension..(i + 1) * self.dimension]
    }

    pub fn label(&self, i: usize) -> u32 {
        self.labels[i]
    }

    pub fn labels(&self) -> &[u32] {
        &self.labels
    }

    pub fn iter(&self) -> impl Iterator<Item = (&[f64], u32)> + '_ {
        self.spectra
            .chunks_exact(self.dimension)
            .zip(self.labels.iter().copied())
    }

    /// Indices of the samples of each class, `result[c - 1]` for class `c`.
    pub fn members_by_class(&self) -> Vec<Vec<usize>> {
        let mut members = vec![Vec::new(); self.class_count as usize];
        for (i, &l) in self.labels.iter().enumerate() {
            members[l as usize - 1].push(i);
        }
        members
    }
}

/// Training and test pixel indices, each sorted ascending.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Split {
    pub train: Vec<usize>,
    pub test: Vec<usize>,
}

/// Draws `per_class` training pixels from every class `1..=labels.classes()`;
/// all other labeled pixels form the test set.
pub fn split_train_test(labels: &LabelMap, per_class: usize, seed: u64) -> Result<Split> {
    let classes = labels.classes() as usize;
    let mut members = vec![Vec::new(); classes];
    for p in labels.labeled_pixels() {
        members[labels.labels()[p] as usize - 1].push(p);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut split = Split {
        train: Vec::with_capacity(per_class * classes),
        test: Vec::new(),
    };
    for (c, mut pixels) in members.into_iter().enumerate() {
        if pixels.len() < per_class {
            return Err(Error::InsufficientData {
                class: c as u32 + 1,
                available: pixels.len(),
                required: per_class,
            });
        }
        pixels.shuffle(&mut rng);
        split.train.extend_from_slice(&pixels[..per_class]);
        split.test.extend_from_slice(&pixels[per_class..]);
    }
    split.train.sort_unstable();
    split.test.sort_unstable();
    Ok(split)
}

#[derive(Debug, Clone, PartialEq)]
pub struct AugmentConfig {
    pub virtual_per_class: usize,
    pub mix_low: f64,
    pub mix_high: f64,
    pub seed: u64,
}

impl Default for AugmentConfig {
    fn default() -> Self {
        Self {
            virtual_per_class: 200,
            mix_low: 0.0,
            mix_high: 1.0,
            seed: 0,
        }
    }
}

/// Appends `q * x1 + (1 - q) * x2` mixtures of distinct same-class spectra.
pub fn generate_virtual_samples(set: &SampleSet, cfg: &AugmentConfig) -> Result<SampleSet> {
    if !(0.0 <= cfg.mix_low && cfg.mix_low <= cfg.mix_high && cfg.mix_high <= 1.0) {
        return Err(Error::Usage(format!(
            "mixing bounds must satisfy 0 <= low <= high <= 1, got [{}, {}]",
            cfg.mix_low, cfg.mix_high
        )));
    }
    let mut out = set.clone();
    if cfg.virtual_per_class == 0 {
        return Ok(out);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut mixed = vec![0.0; set.dimension()];
    for (c, members) in set.members_by_class().iter().enumerate() {
        let class = c as u32 + 1;
        if members.len() < 2 {
            return Err(Error::InsufficientData {
                class,
                available: members.len(),
                required: 2,
            });
        }
        for _ in 0..cfg.virtual_per_class {
            let a = rng.random_range(0..members.len());
            let mut b = rng.random_range(0..members.len() - 1);
            if b >= a {
                b += 1;
            }
            let q = if cfg.mix_low == cfg.mix_high {
                cfg.mix_low
            } else {
                rng.random_range(cfg.mix_low..=cfg.mix_high)
            };
            mix(
                set.spectrum(members[a]),
                set.spectrum(members[b]),
                q,
                &mut mixed,
            );
            out.push(&mixed, class)?;
        }
    }
    Ok(out)
}

fn mix(x1: &[f64], x2: &[f64], q: f64, out: &mut [f64]) {
    for ((o, &a), &b) in out.iter_mut().zip(x1).zip(x2) {
        // clamp absorbs rounding so the result stays inside the segment
        *o = (b + q * (a - b)).clamp(a.min(b), a.max(b));
    }
}
