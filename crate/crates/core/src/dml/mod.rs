//! Spectral feature network trained with joint softmax + center loss.
//!
//! The network is `B -> d1 -> d2 -> F -> C`: ReLU hidden layers, a linear
//! feature layer whose output is the embedding `f(x)`, and a linear
//! classification head followed by softmax. Center loss acts on `f(x)`.

mod checkpoint;
mod extract;
mod loss;
mod net;
mod train;

pub use checkpoint::{read_checkpoint, write_checkpoint, Checkpoint, CHECKPOINT_MAGIC};
pub use extract::{extract, FeatureMap, ProbabilityMap};
pub use loss::{center_loss, softmax, softmax_loss, CenterLossForm, PROB_FLOOR};
pub use net::{Activation, Forward, Layer, MlpParams};
pub use train::{
    backward, batch_loss, class_mean_features, mean_center_distance, train, update_centers,
    EpochLoss, LossParts, TrainConfig, TrainOutcome, TrainState,
};
