use super::HsiCube;

/// Bands whose population variance falls below this are treated as constant.
const VARIANCE_FLOOR: f64 = 1e-12;

/// Per-band mean and standard deviation.
#[derive(Debug, Clone, PartialEq)]
pub struct BandStats {
    pub mean: Vec<f64>,
    /// Zero marks a constant band.
    pub std: Vec<f64>,
}

impl BandStats {
    /// Statistics over all pixels, or over `pixels` when given (train-only normalization).
    pub fn from_cube(cube: &HsiCube, pixels: Option<&[usize]>) -> Self {
        let bands = cube.bands();
        let all: Vec<usize>;
        let pixels = match pixels {
            Some(p) => p,
            None => {
                all = (0..cube.pixel_count()).collect();
                &all
            }
        };
        let n = pixels.len().max(1) as f64;
        let mut mean = vec![0.0; bands];
        for &p in pixels {
            for (m, v) in mean.iter_mut().zip(cube.spectrum(p)) {
                *m += v;
            }
        }
        mean.iter_mut().for_each(|m| *m /= n);

        let mut var = vec![0.0; bands];
        for &p in pixels {
            for ((acc, v), m) in var.iter_mut().zip(cube.spectrum(p)).zip(&mean) {
                let d = v - m;
                *acc += d * d;
            }
        }
        let std = var
            .into_iter()
            .map(|s| s / n)
            .map(|v| if v < VARIANCE_FLOOR { 0.0 } else { v.sqrt() })
            .collect();
        BandStats { mean, std }
    }

    pub fn apply(&self, cube: &HsiCube) -> HsiCube {
        let bands = cube.bands();
        let mut values = cube.values().to_vec();
        for px in values.chunks_exact_mut(bands) {
            for ((v, m), s) in px.iter_mut().zip(&self.mean).zip(&self.std) {
                *v = if *s == 0.0 { 0.0 } else { (*v - m) / s };
            }
        }
        HsiCube::new(cube.height(), cube.width(), bands, values)
            .expect("normalization preserves shape and finiteness")
    }
}

/// Zero mean, unit population variance per band over the whole cube.
/// Constant bands become all zeros.
pub fn normalize(cube: &HsiCube) -> HsiCube {
    BandStats::from_cube(cube, None).apply(cube)
}
