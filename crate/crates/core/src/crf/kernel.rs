use rayon::prelude::*;

use super::params::{CrfParams, PositionScale, WindowShape};
use crate::dml::FeatureMap;

/// Scale factors turning pixel offsets into kernel coordinates.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Geometry {
    pub app_scale: f64,
    pub smo_scale: f64,
}

impl Geometry {
    pub fn new(height: usize, width: usize, params: &CrfParams) -> Self {
        let normalized = 1.0
            / (height.saturating_sub(1))
                .max(width.saturating_sub(1))
                .max(1) as f64;
        let pick = |s: PositionScale| match s {
            PositionScale::Normalized => normalized,
            PositionScale::Pixels => 1.0,
        };
        Self {
            app_scale: pick(params.app_positions),
            smo_scale: pick(params.smo_positions),
        }
    }

    /// Positions already expressed in kernel units.
    pub fn identity() -> Self {
        Self {
            app_scale: 1.0,
            smo_scale: 1.0,
        }
    }
}

fn sq_dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

/// Appearance and smoothness kernels between two pixels. Positions are
/// `(row, col)` in pixel units and rescaled by `geom`.
pub fn kernel_values(
    pos_i: [f64; 2],
    pos_j: [f64; 2],
    f_i: &[f64],
    f_j: &[f64],
    params: &CrfParams,
    geom: &Geometry,
) -> (f64, f64) {
    let d2 = sq_dist(&pos_i, &pos_j);
    let app = (-d2 * geom.app_scale * geom.app_scale
        / (2.0 * params.theta_alpha * params.theta_alpha)
        - sq_dist(f_i, f_j) / (2.0 * params.theta_beta * params.theta_beta))
        .exp();
    let smo = (-d2 * geom.smo_scale * geom.smo_scale
        / (2.0 * params.theta_gamma * params.theta_gamma))
        .exp();
    (app, smo)
}

/// Precomputed kernel values of every pixel against its window neighbors.
///
/// Neighbors are visited in a fixed offset order, so per-pixel sums are
/// reproducible regardless of how pixels are split across threads.
#[derive(Debug, Clone, PartialEq)]
pub struct KernelWindow {
    height: usize,
    width: usize,
    offsets: Vec<(isize, isize)>,
    /// Smoothness kernel per offset; it depends on geometry only.
    smo: Vec<f64>,
    /// Appearance kernel per (pixel, offset); 0 where the neighbor is out of bounds.
    app: Vec<f64>,
}

impl KernelWindow {
    pub fn offsets(&self) -> &[(isize, isize)] {
        &self.offsets
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn width(&self) -> usize {
        self.width
    }

    fn neighbor(&self, pixel: usize, (dr, dc): (isize, isize)) -> Option<usize> {
        let r = (pixel / self.width) as isize + dr;
        let c = (pixel % self.width) as isize + dc;
        if r < 0 || c < 0 || r >= self.height as isize || c >= self.width as isize {
            None
        } else {
            Some(r as usize * self.width + c as usize)
        }
    }

    /// In-bounds neighbors of `pixel` as `(index, k_app, k_smo)`.
    pub fn neighbors(&self, pixel: usize) -> impl Iterator<Item = (usize, f64, f64)> + '_ {
        let n = self.offsets.len();
        let app = &self.app[pixel * n..(pixel + 1) * n];
        self.offsets
            .iter()
            .zip(app)
            .zip(&self.smo)
            .filter_map(move |((&off, &a), &s)| self.neighbor(pixel, off).map(|j| (j, a, s)))
    }
}

/// Kernel values for each pixel against every in-bounds neighbor inside the
/// filter window, self excluded.
pub fn build_windows(features: &FeatureMap, params: &CrfParams) -> KernelWindow {
    let (h, w) = (features.height(), features.width());
    let geom = Geometry::new(h, w, params);
    let r = params.radius() as isize;
    let mut offsets = Vec::new();
    for dr in -r..=r {
        for dc in -r..=r {
            let inside = match params.window {
                WindowShape::Square => true,
                WindowShape::Diamond => dr.abs() + dc.abs() <= r,
            };
            if inside && (dr, dc) != (0, 0) {
                offsets.push((dr, dc));
            }
        }
    }
    let origin = [0.0, 0.0];
    let smo = offsets
        .iter()
        .map(|&(dr, dc)| kernel_values(origin, [dr as f64, dc as f64], &[], &[], params, &geom).1)
        .collect();
    let mut window = KernelWindow {
        height: h,
        width: w,
        offsets,
        smo,
        app: Vec::new(),
    };
    let n = window.offsets.len();
    let mut app = vec![0.0; h * w * n];
    if n > 0 {
        app.par_chunks_mut(n).enumerate().for_each(|(i, row)| {
            let pi = [(i / w) as f64, (i % w) as f64];
            for (slot, &off) in row.iter_mut().zip(&window.offsets) {
                if let Some(j) = window.neighbor(i, off) {
                    let pj = [(j / w) as f64, (j % w) as f64];
                    *slot =
                        kernel_values(pi, pj, features.pixel(i), features.pixel(j), params, &geom)
                            .0;
                }
            }
        });
    }
    window.app = app;
    window
}
