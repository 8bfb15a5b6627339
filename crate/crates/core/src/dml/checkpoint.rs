use std::fs;
use std::path::Path;

use super::net::{Layer, MlpParams};
use crate::error::{Error, Result};

pub const CHECKPOINT_MAGIC: &[u8; 5] = b"DMLW1";

/// Trained network weights plus the class feature centers.
#[derive(Debug, Clone, PartialEq)]
pub struct Checkpoint {
    pub params: MlpParams,
    pub centers: Vec<Vec<f64>>,
}

impl Checkpoint {
    /// DMLW1 layout, all numbers little-endian, reals narrowed to `f32`.
    pub fn to_bytes(&self) -> Vec<u8> {
        let mut out = CHECKPOINT_MAGIC.to_vec();
        let layers = self.params.layers();
        out.extend_from_slice(&(layers.len() as u32).to_le_bytes());
        for layer in layers {
            out.extend_from_slice(&(layer.rows as u32).to_le_bytes());
            out.extend_from_slice(&(layer.cols as u32).to_le_bytes());
            for &v in layer.weights.iter().chain(&layer.bias) {
                out.extend_from_slice(&(v as f32).to_le_bytes());
            }
        }
        for &v in self.centers.iter().flatten() {
            out.extend_from_slice(&(v as f32).to_le_bytes());
        }
        out
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<Self> {
        let mut r = Reader { bytes, pos: 0 };
        if r.take(5)? != CHECKPOINT_MAGIC {
            return Err(Error::Format("missing DMLW1 magic".into()));
        }
        let count = r.u32()? as usize;
        let mut layers = Vec::with_capacity(count);
        for _ in 0..count {
            let rows = r.u32()? as usize;
            let cols = r.u32()? as usize;
            let weights = r.reals(rows * cols)?;
            let bias = r.reals(rows)?;
            layers.push(Layer {
                rows,
                cols,
                weights,
                bias,
            });
        }
        let params = MlpParams::from_layers(layers)?;
        let (classes, fdim) = (params.class_count(), params.feature_dim());
        let centers = r
            .reals(classes * fdim)?
            .chunks_exact(fdim)
            .map(<[f64]>::to_vec)
            .collect();
        if r.pos != bytes.len() {
            return Err(Error::Format(format!(
                "{} trailing bytes after checkpoint",
                bytes.len() - r.pos
            )));
        }
        Ok(Checkpoint { params, centers })
    }
}

struct Reader<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Reader<'a> {
    fn take(&mut self, n: usize) -> Result<&'a [u8]> {
        let end = self.pos + n;
        let slice = self
            .bytes
            .get(self.pos..end)
            .ok_or_else(|| Error::Format("truncated checkpoint".into()))?;
        self.pos = end;
        Ok(slice)
    }

    fn u32(&mut self) -> Result<u32> {
        Ok(u32::from_le_bytes(self.take(4)?.try_into().unwrap()))
    }

    fn reals(&mut self, n: usize) -> Result<Vec<f64>> {
        let raw = self.take(4 * n)?;
        let vals: Vec<f64> = raw
            .chunks_exact(4)
            .map(|c| f32::from_le_bytes(c.try_into().unwrap()) as f64)
            .collect();
        if vals.iter().any(|v| !v.is_finite()) {
            return Err(Error::Data("checkpoint contains non-finite weights".into()));
        }
        Ok(vals)
    }
}

pub fn read_checkpoint(path: impl AsRef<Path>) -> Result<Checkpoint> {
    Checkpoint::from_bytes(&fs::read(path)?)
}

pub fn write_checkpoint(path: impl AsRef<Path>, ckpt: &Checkpoint) -> Result<()> {
    fs::write(path, ckpt.to_bytes())?;
    Ok(())
}
