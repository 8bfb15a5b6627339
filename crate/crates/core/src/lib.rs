//! Hyperspectral pixel classification with center-loss spectral features and
//! a windowed mean-field CRF.
//!
//! The pipeline has two stages. A small fully-connected network is trained on
//! individual spectra under a joint cross-entropy + center loss, which pulls
//! same-class features together in Euclidean space. Its per-pixel class
//! probabilities become CRF unary potentials, and its features drive the
//! appearance kernel of a Gaussian-edge CRF whose mean-field updates are
//! truncated to a `k x k` window around each pixel.
//!
//! Module map:
//!
//! * [`hsi`] - cubes, label maps, normalization, sampling, virtual samples, synthetic scenes
//! * [`dml`] - the feature network, losses, manual backpropagation, training, checkpoints
//! * [`crf`] - unaries, kernels, windowed and dense mean-field inference
//! * [`metrics`] - confusion matrix, OA / AA / kappa
//! * [`pipeline`] - run configuration and the `synth | train | infer | eval | sweep` commands

pub mod crf;
pub mod dml;
pub mod error;
pub mod field;
pub mod hsi;
pub mod metrics;
pub mod pipeline;

pub use error::{Error, Result};
