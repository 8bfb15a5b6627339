//! Mean-field inference for a CRF with Gaussian edge potentials.
//!
//! Unaries are `-log p` of the network's class probabilities. The pairwise
//! term is a Potts compatibility times
//! `w_app * k_app + w_smo * k_smo`, where `k_app` is a Gaussian over pixel
//! position and feature distance and `k_smo` a Gaussian over position only.
//! Messages are truncated to a `k x k` window around each pixel, which turns
//! each update into a local, convolution-like sweep. [`brute_force_infer`]
//! sums over every pixel pair instead and serves as the reference.

mod dense;
mod kernel;
mod mean_field;
mod params;
mod unary;

pub use dense::{brute_force_infer, brute_force_trace, DENSE_PIXEL_LIMIT};
pub use kernel::{build_windows, kernel_values, Geometry, KernelWindow};
pub use mean_field::{infer, infer_trace, mean_field_step, MarginalField};
pub use params::{CrfParams, PositionScale, WindowShape};
pub use unary::{unary_from_prob, UnaryField};
