use std::fs;
use std::path::Path;

use crate::error::{Error, Result};

pub const CUBE_MAGIC: &[u8; 5] = b"HSIC1";
const HEADER_LEN: usize = 5 + 3 * 4;

/// An `height x width x bands` volume stored band-interleaved-by-pixel.
#[derive(Debug, Clone, PartialEq)]
pub struct HsiCube {
    height: usize,
    width: usize,
    bands: usize,
    values: Vec<f64>,
}

impl HsiCube {
    pub fn new(height: usize, width: usize, bands: usize, values: Vec<f64>) -> Result<Self> {
        if height == 0 || width == 0 || bands == 0 {
            return Err(Error::Shape(format!(
                "cube dimensions must be positive, got {height}x{width}x{bands}"
            )));
        }
        let expected = height * width * bands;
        if values.len() != expected {
            return Err(Error::Length {
                expected,
                found: values.len(),
            });
        }
        if let Some(pos) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::Data(format!("non-finite value at offset {pos}")));
        }
        Ok(Self {
            height,
            width,
            bands,
            values,
        })
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn bands(&self) -> usize {
        self.bands
    }

    pub fn pixel_count(&self) -> usize {
        self.height * self.width
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Spectrum of the pixel with row-major index `pixel`.
    pub fn spectrum(&self, pixel: usize) -> &[f64] {
        &self.values[pixel * self.bands..(pixel + 1) * self.bands]
    }

    pub fn get(&self, row: usize, col: usize, band: usize) -> f64 {
        self.values[(row * self.width + col) * self.bands + band]
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    /// Encodes the cube in HSIC1 layout. Values are narrowed to `f32`.
    pub fn to_bytes(&self) -> Vec<u8> {
        let mut out = Vec::with_capacity(HEADER_LEN + 4 * self.values.len());
        out.extend_from_slice(CUBE_MAGIC);
        for dim in [self.height, self.width, self.bands] {
            out.extend_from_slice(&(dim as u32).to_le_bytes());
        }
        for &v in &self.values {
            out.extend_from_slice(&(v as f32).to_le_bytes());
        }
        out
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<Self> {
        if bytes.len() < CUBE_MAGIC.len() || &bytes[..CUBE_MAGIC.len()] != CUBE_MAGIC {
            return Err(Error::Format("missing HSIC1 magic".into()));
        }
        if bytes.len() < HEADER_LEN {
            return Err(Error::Format("truncated HSIC1 header".into()));
        }
        let dim = |i: usize| {
            let at = 5 + 4 * i;
            u32::from_le_bytes(bytes[at..at + 4].try_into().unwrap()) as usize
        };
        let (height, width, bands) = (dim(0), dim(1), dim(2));
        let expected = height * width * bands;
        let payload = &bytes[HEADER_LEN..];
        if payload.len() != 4 * expected {
            return Err(Error::Length {
                expected,
                found: payload.len() / 4,
            });
        }
        let values = payload
            .chunks_exact(4)
            .map(|c| f32::from_le_bytes(c.try_into().unwrap()) as f64)
            .collect();
        HsiCube::new(height, width, bands, values)
    }
}

pub fn read_cube(path: impl AsRef<Path>) -> Result<HsiCube> {
    HsiCube::from_bytes(&fs::read(path)?)
}

pub fn write_cube(path: impl AsRef<Path>, cube: &HsiCube) -> Result<()> {
    fs::write(path, cube.to_bytes())?;
    Ok(())
}
