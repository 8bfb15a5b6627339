use std::ops::Deref;

use rayon::prelude::*;

use super::net::MlpParams;
use crate::error::{Error, Result};
use crate::field::Field;
use crate::hsi::HsiCube;

/// Per-pixel embedding `f(x)`.
#[derive(Debug, Clone, PartialEq)]
pub struct FeatureMap(Field);

impl FeatureMap {
    pub fn new(height: usize, width: usize, dim: usize, values: Vec<f64>) -> Result<Self> {
        Field::new(height, width, dim, values).map(Self)
    }

    pub fn dim(&self) -> usize {
        self.0.depth()
    }
}

impl Deref for FeatureMap {
    type Target = Field;
    fn deref(&self) -> &Field {
        &self.0
    }
}

/// Per-pixel class distribution.
#[derive(Debug, Clone, PartialEq)]
pub struct ProbabilityMap(Field);

impl ProbabilityMap {
    /// Rejects rows that are negative or do not sum to 1 within 1e-6.
    pub fn new(height: usize, width: usize, classes: usize, values: Vec<f64>) -> Result<Self> {
        let field = Field::new(height, width, classes, values)?;
        for (i, px) in field.pixels().enumerate() {
            let sum: f64 = px.iter().sum();
            if px.iter().any(|&p| p < 0.0) || (sum - 1.0).abs() > 1e-6 {
                return Err(Error::Data(format!(
                    "pixel {i} is not a probability distribution"
                )));
            }
        }
        Ok(Self(field))
    }

    pub fn classes(&self) -> usize {
        self.0.depth()
    }

    /// Class id (1-based) of the most probable class per pixel.
    pub fn labels(&self) -> Vec<u32> {
        self.0.argmax().into_iter().map(|c| c as u32 + 1).collect()
    }
}

impl Deref for ProbabilityMap {
    type Target = Field;
    fn deref(&self) -> &Field {
        &self.0
    }
}

/// Runs the network on every pixel of a normalized cube.
pub fn extract(params: &MlpParams, cube: &HsiCube) -> Result<(FeatureMap, ProbabilityMap)> {
    if cube.bands() != params.input_dim() {
        return Err(Error::Shape(format!(
            "cube has {} bands, network expects {}",
            cube.bands(),
            params.input_dim()
        )));
    }
    let (fdim, classes) = (params.feature_dim(), params.class_count());
    let n = cube.pixel_count();
    let mut features = vec![0.0; n * fdim];
    let mut probs = vec![0.0; n * classes];
    features
        .par_chunks_mut(fdim)
        .zip(probs.par_chunks_mut(classes))
        .enumerate()
        .try_for_each(|(p, (f, q))| -> Result<()> {
            let fwd = params.forward(cube.spectrum(p))?;
            f.copy_from_slice(fwd.feature());
            q.copy_from_slice(&fwd.prob);
            Ok(())
        })?;
    let (h, w) = (cube.height(), cube.width());
    Ok((
        FeatureMap::new(h, w, fdim, features)?,
        ProbabilityMap::new(h, w, classes, probs)?,
    ))
}
