//! Dense `height x width x depth` arrays of per-pixel vectors.

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct Field {
    height: usize,
    width: usize,
    depth: usize,
    values: Vec<f64>,
}

impl Field {
    pub fn new(height: usize, width: usize, depth: usize, values: Vec<f64>) -> Result<Self> {
        if values.len() != height * width * depth {
            return Err(Error::Length {
                expected: height * width * depth,
                found: values.len(),
            });
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::Data("field contains non-finite values".into()));
        }
        Ok(Self {
            height,
            width,
            depth,
            values,
        })
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn pixel_count(&self) -> usize {
        self.height * self.width
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn pixel(&self, i: usize) -> &[f64] {
        &self.values[i * self.depth..(i + 1) * self.depth]
    }

    pub fn pixels(&self) -> std::slice::ChunksExact<'_, f64> {
        self.values.chunks_exact(self.depth)
    }

    pub fn same_grid(&self, other: &Field) -> bool {
        self.height == other.height && self.width == other.width
    }

    /// Index of the largest entry of each pixel; ties go to the lowest index.
    pub fn argmax(&self) -> Vec<usize> {
        self.pixels()
            .map(|px| {
                px.iter()
                    .enumerate()
                    .fold((0, f64::NEG_INFINITY), |(bi, bv), (i, &v)| {
                        if v > bv {
                            (i, v)
                        } else {
                            (bi, bv)
                        }
                    })
                    .0
            })
            .collect()
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }
}
