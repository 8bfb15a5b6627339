use rand::Rng;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Activation {
    Relu,
    Identity,
}

impl Activation {
    fn apply(self, x: f64) -> f64 {
        match self {
            Activation::Relu => x.max(0.0),
            Activation::Identity => x,
        }
    }

    /// Derivative with respect to the pre-activation.
    pub(crate) fn slope(self, pre: f64) -> f64 {
        match self {
            Activation::Relu if pre <= 0.0 => 0.0,
            _ => 1.0,
        }
    }
}

/// Fully-connected layer, `rows` outputs by `cols` inputs, row-major weights.
#[derive(Debug, Clone, PartialEq)]
pub struct Layer {
    pub rows: usize,
    pub cols: usize,
    pub weights: Vec<f64>,
    pub bias: Vec<f64>,
}

impl Layer {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            weights: vec![0.0; rows * cols],
            bias: vec![0.0; rows],
        }
    }

    fn glorot(rows: usize, cols: usize, rng: &mut impl Rng) -> Self {
        let limit = (6.0 / (rows + cols) as f64).sqrt();
        let weights = (0..rows * cols)
            .map(|_| rng.random_range(-limit..limit))
            .collect();
        Self {
            rows,
            cols,
            weights,
            bias: vec![0.0; rows],
        }
    }

    pub(crate) fn affine(&self, input: &[f64], out: &mut Vec<f64>) {
        out.clear();
        out.extend(
            self.weights
                .chunks_exact(self.cols)
                .zip(&self.bias)
                .map(|(row, b)| row.iter().zip(input).map(|(w, x)| w * x).sum::<f64>() + b),
        );
    }

    pub fn parameter_count(&self) -> usize {
        self.weights.len() + self.bias.len()
    }
}

/// Network weights. The second-to-last layer produces the feature vector,
/// the last layer produces class logits.
#[derive(Debug, Clone, PartialEq)]
pub struct MlpParams {
    layers: Vec<Layer>,
    activations: Vec<Activation>,
}

/// Activations of one forward pass, kept for backpropagation.
#[derive(Debug, Clone, PartialEq)]
pub struct Forward {
    /// `inputs[l]` is the input of layer `l`; the last entry is the logits.
    pub inputs: Vec<Vec<f64>>,
    /// Pre-activation outputs of every layer.
    pub pre: Vec<Vec<f64>>,
    pub prob: Vec<f64>,
}

impl Forward {
    pub fn feature(&self) -> &[f64] {
        &self.inputs[self.inputs.len() - 2]
    }

    pub fn logits(&self) -> &[f64] {
        &self.inputs[self.inputs.len() - 1]
    }
}

impl MlpParams {
    /// Builds from explicit layers. Layers before the feature layer use ReLU.
    pub fn from_layers(layers: Vec<Layer>) -> Result<Self> {
        if layers.len() < 2 {
            return Err(Error::Shape(
                "network needs at least a feature layer and a classification head".into(),
            ));
        }
        for (l, layer) in layers.iter().enumerate() {
            if layer.weights.len() != layer.rows * layer.cols || layer.bias.len() != layer.rows {
                return Err(Error::Shape(format!(
                    "layer {l} buffers do not match {}x{}",
                    layer.rows, layer.cols
                )));
            }
            if l > 0 && layer.cols != layers[l - 1].rows {
                return Err(Error::Shape(format!(
                    "layer {l} expects {} inputs but layer {} produces {}",
                    layer.cols,
                    l - 1,
                    layers[l - 1].rows
                )));
            }
        }
        let mut activations = vec![Activation::Relu; layers.len() - 2];
        activations.extend([Activation::Identity, Activation::Identity]);
        Ok(Self {
            layers,
            activations,
        })
    }

    /// Scaled-uniform initialization for dims `[B, d1, .., F, C]`.
    pub fn init(dims: &[usize], rng: &mut impl Rng) -> Result<Self> {
        if dims.len() < 3 || dims.contains(&0) {
            return Err(Error::Shape(format!("invalid layer dims {dims:?}")));
        }
        let layers = dims
            .windows(2)
            .map(|w| Layer::glorot(w[1], w[0], rng))
            .collect();
        Self::from_layers(layers)
    }

    pub fn zeros(dims: &[usize]) -> Result<Self> {
        if dims.len() < 3 {
            return Err(Error::Shape(format!("invalid layer dims {dims:?}")));
        }
        Self::from_layers(dims.windows(2).map(|w| Layer::zeros(w[1], w[0])).collect())
    }

    pub fn layers(&self) -> &[Layer] {
        &self.layers
    }

    pub fn layers_mut(&mut self) -> &mut [Layer] {
        &mut self.layers
    }

    pub fn activations(&self) -> &[Activation] {
        &self.activations
    }

    pub fn dims(&self) -> Vec<usize> {
        std::iter::once(self.layers[0].cols)
            .chain(self.layers.iter().map(|l| l.rows))
            .collect()
    }

    pub fn input_dim(&self) -> usize {
        self.layers[0].cols
    }

    pub fn feature_dim(&self) -> usize {
        self.layers[self.layers.len() - 1].cols
    }

    pub fn class_count(&self) -> usize {
        self.layers[self.layers.len() - 1].rows
    }

    pub fn forward(&self, spectrum: &[f64]) -> Result<Forward> {
        if spectrum.len() != self.input_dim() {
            return Err(Error::Shape(format!(
                "spectrum has {} bands, network expects {}",
                spectrum.len(),
                self.input_dim()
            )));
        }
        let mut inputs = Vec::with_capacity(self.layers.len() + 1);
        let mut pre = Vec::with_capacity(self.layers.len());
        inputs.push(spectrum.to_vec());
        for (layer, act) in self.layers.iter().zip(&self.activations) {
            let mut z = Vec::with_capacity(layer.rows);
            layer.affine(inputs.last().unwrap(), &mut z);
            inputs.push(z.iter().map(|&v| act.apply(v)).collect());
            pre.push(z);
        }
        let prob = super::softmax(inputs.last().unwrap());
        Ok(Forward { inputs, pre, prob })
    }
}
