//! Hyperspectral cubes, label maps and the training-set plumbing around them.

mod cube;
mod labels;
mod normalize;
mod sampling;
mod synth;

pub use cube::{read_cube, write_cube, HsiCube, CUBE_MAGIC};
pub use labels::{read_pgm, write_pgm, LabelMap};
pub use normalize::{normalize, BandStats};
pub use sampling::{generate_virtual_samples, split_train_test, AugmentConfig, SampleSet, Split};
pub use synth::{synth_scene, SynthConfig};
