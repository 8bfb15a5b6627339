use std::fs;
use std::path::{Path, PathBuf};

use crate::crf::{CrfParams, PositionScale, WindowShape};
use crate::dml::{CenterLossForm, TrainConfig};
use crate::error::{Error, Result};
use crate::hsi::{AugmentConfig, HsiCube, SynthConfig};

/// Anchored CRF settings for the two public benchmark scenes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Preset {
    /// Pavia University, `k = 7`.
    Pavia,
    /// Salinas, `k = 15`.
    Salinas,
}

impl Preset {
    pub fn filter_size(self) -> usize {
        match self {
            Preset::Pavia => 7,
            Preset::Salinas => 15,
        }
    }

    pub fn crf_params(self) -> CrfParams {
        CrfParams::default().with_filter_size(self.filter_size())
    }

    /// Recognizes the published scene shapes (after band removal).
    pub fn detect(cube: &HsiCube) -> Option<Preset> {
        match (cube.height(), cube.width(), cube.bands()) {
            (610, 340, 103) => Some(Preset::Pavia),
            (512, 217, 204) => Some(Preset::Salinas),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum NormalizeScope {
    /// Band statistics over the whole cube.
    #[default]
    Full,
    /// Band statistics over the training pixels only.
    Train,
}

/// Every knob of the workflow. Built from defaults, then a `key = value`
/// file, then command-line flags.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub cube: Option<PathBuf>,
    pub labels: Option<PathBuf>,
    pub checkpoint: Option<PathBuf>,
    pub pred: Option<PathBuf>,
    pub out: PathBuf,
    pub seed: u64,
    pub per_class: usize,
    /// `None` means one virtual sample per real training sample.
    pub virtual_per_class: Option<usize>,
    pub mix_low: f64,
    pub mix_high: f64,
    pub normalize: NormalizeScope,
    pub train: TrainConfig,
    pub crf: CrfParams,
    pub crf_enabled: bool,
    pub preset: Option<Preset>,
    filter_size_set: bool,
    pub repeats: usize,
    /// Reuse `seed` for every repeat instead of `seed..seed + repeats`.
    pub fixed_seed: bool,
    pub synth: SynthConfig,
    pub sweep_param: Option<String>,
    pub sweep_values: Vec<f64>,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            cube: None,
            labels: None,
            checkpoint: None,
            pred: None,
            out: PathBuf::from("out"),
            seed: 0,
            per_class: 200,
            virtual_per_class: None,
            mix_low: 0.0,
            mix_high: 1.0,
            normalize: NormalizeScope::Full,
            train: TrainConfig::default(),
            crf: CrfParams::default(),
            crf_enabled: true,
            preset: None,
            filter_size_set: false,
            repeats: 1,
            fixed_seed: false,
            synth: SynthConfig::default(),
            sweep_param: None,
            sweep_values: Vec::new(),
        }
    }
}

/// Keys understood by [`RunConfig::apply`]; also the command-line flag names.
pub const CONFIG_KEYS: &[&str] = &[
    "cube",
    "labels",
    "checkpoint",
    "pred",
    "out",
    "seed",
    "per_class",
    "virtual_per_class",
    "mix_low",
    "mix_high",
    "normalize",
    "lambda",
    "center_rate",
    "learning_rate",
    "momentum",
    "batch_size",
    "epochs",
    "center_loss_form",
    "hidden_dims",
    "feature_dim",
    "w_app",
    "w_smo",
    "theta_alpha",
    "theta_beta",
    "theta_gamma",
    "filter_size",
    "iterations",
    "window",
    "app_positions",
    "smo_positions",
    "crf",
    "preset",
    "repeats",
    "fixed_seed",
    "height",
    "width",
    "bands",
    "classes",
    "noise",
    "param",
    "values",
];

fn parse<T: std::str::FromStr>(key: &str, value: &str) -> Result<T> {
    value
        .parse()
        .map_err(|_| Error::Usage(format!("invalid value {value:?} for {key}")))
}

fn parse_bool(key: &str, value: &str) -> Result<bool> {
    match value {
        "on" | "true" | "yes" | "1" => Ok(true),
        "off" | "false" | "no" | "0" => Ok(false),
        _ => Err(Error::Usage(format!(
            "invalid value {value:?} for {key}, expected on/off"
        ))),
    }
}

fn parse_list<T: std::str::FromStr>(key: &str, value: &str) -> Result<Vec<T>> {
    value
        .split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| parse(key, s))
        .collect()
}

fn parse_scale(key: &str, value: &str) -> Result<PositionScale> {
    match value {
        "normalized" => Ok(PositionScale::Normalized),
        "pixels" => Ok(PositionScale::Pixels),
        _ => Err(Error::Usage(format!("{key} must be normalized or pixels"))),
    }
}

impl RunConfig {
    pub fn apply(&mut self, key: &str, value: &str) -> Result<()> {
        let value = value.trim();
        match key {
            "cube" => self.cube = Some(value.into()),
            "labels" => self.labels = Some(value.into()),
            "checkpoint" => self.checkpoint = Some(value.into()),
            "pred" => self.pred = Some(value.into()),
            "out" => self.out = value.into(),
            "seed" => {
                self.seed = parse(key, value)?;
                self.synth.seed = self.seed;
            }
            "per_class" => self.per_class = parse(key, value)?,
            "virtual_per_class" => self.virtual_per_class = Some(parse(key, value)?),
            "mix_low" => self.mix_low = parse(key, value)?,
            "mix_high" => self.mix_high = parse(key, value)?,
            "normalize" => {
                self.normalize = match value {
                    "full" => NormalizeScope::Full,
                    "train" => NormalizeScope::Train,
                    _ => return Err(Error::Usage("normalize must be full or train".into())),
                }
            }
            "lambda" => self.train.lambda = parse(key, value)?,
            "center_rate" => self.train.center_rate = parse(key, value)?,
            "learning_rate" => self.train.learning_rate = parse(key, value)?,
            "momentum" => self.train.momentum = parse(key, value)?,
            "batch_size" => self.train.batch_size = parse(key, value)?,
            "epochs" => self.train.epochs = parse(key, value)?,
            "center_loss_form" => {
                self.train.center_loss_form = match value {
                    "norm" => CenterLossForm::Norm,
                    "squared" => CenterLossForm::Squared,
                    _ => {
                        return Err(Error::Usage(
                            "center_loss_form must be norm or squared".into(),
                        ))
                    }
                }
            }
            "hidden_dims" => self.train.hidden_dims = parse_list(key, value)?,
            "feature_dim" => self.train.feature_dim = parse(key, value)?,
            "w_app" => self.crf.w_app = parse(key, value)?,
            "w_smo" => self.crf.w_smo = parse(key, value)?,
            "theta_alpha" => self.crf.theta_alpha = parse(key, value)?,
            "theta_beta" => self.crf.theta_beta = parse(key, value)?,
            "theta_gamma" => self.crf.theta_gamma = parse(key, value)?,
            "filter_size" => {
                self.crf.filter_size = parse(key, value)?;
                self.filter_size_set = true;
            }
            "iterations" => self.crf.iterations = parse(key, value)?,
            "window" => {
                self.crf.window = match value {
                    "square" => WindowShape::Square,
                    "diamond" => WindowShape::Diamond,
                    _ => return Err(Error::Usage("window must be square or diamond".into())),
                }
            }
            "app_positions" => self.crf.app_positions = parse_scale(key, value)?,
            "smo_positions" => self.crf.smo_positions = parse_scale(key, value)?,
            "crf" => self.crf_enabled = parse_bool(key, value)?,
            "preset" => {
                self.preset = Some(match value {
                    "pavia" => Preset::Pavia,
                    "salinas" => Preset::Salinas,
                    _ => return Err(Error::Usage("preset must be pavia or salinas".into())),
                })
            }
            "repeats" => self.repeats = parse(key, value)?,
            "fixed_seed" => self.fixed_seed = parse_bool(key, value)?,
            "height" => self.synth.height = parse(key, value)?,
            "width" => self.synth.width = parse(key, value)?,
            "bands" => self.synth.bands = parse(key, value)?,
            "classes" => self.synth.classes = parse(key, value)?,
            "noise" => self.synth.noise_level = parse(key, value)?,
            "param" => self.sweep_param = Some(value.to_string()),
            "values" => self.sweep_values = parse_list(key, value)?,
            _ => return Err(Error::Usage(format!("unknown configuration key {key:?}"))),
        }
        Ok(())
    }

    /// Applies `key = value` lines; blank lines and `#` comments are skipped.
    pub fn apply_text(&mut self, text: &str) -> Result<()> {
        for (n, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| Error::Usage(format!("config line {} is not key = value", n + 1)))?;
            self.apply(key.trim(), value)?;
        }
        Ok(())
    }

    pub fn apply_file(&mut self, path: impl AsRef<Path>) -> Result<()> {
        let text = fs::read_to_string(path.as_ref()).map_err(|e| {
            Error::Usage(format!(
                "cannot read config {}: {e}",
                path.as_ref().display()
            ))
        })?;
        self.apply_text(&text)
    }

    pub fn validate(&self) -> Result<()> {
        if self.repeats == 0 {
            return Err(Error::Usage("repeats must be >= 1".into()));
        }
        if self.per_class == 0 {
            return Err(Error::Usage("per_class must be >= 1".into()));
        }
        Ok(())
    }

    /// CRF parameters for `cube`: an explicit filter size wins, then the
    /// preset, then a preset recognized from the cube shape.
    pub fn crf_for(&self, cube: &HsiCube) -> CrfParams {
        let mut params = self.crf.clone();
        if !self.filter_size_set {
            if let Some(preset) = self.preset.or_else(|| Preset::detect(cube)) {
                params.filter_size = preset.filter_size();
            }
        }
        params
    }

    pub fn augment(&self, seed: u64) -> AugmentConfig {
        AugmentConfig {
            virtual_per_class: self.virtual_per_class.unwrap_or(self.per_class),
            mix_low: self.mix_low,
            mix_high: self.mix_high,
            seed,
        }
    }

    pub(crate) fn require<'a>(&self, path: &'a Option<PathBuf>, key: &str) -> Result<&'a Path> {
        path.as_deref()
            .ok_or_else(|| Error::Usage(format!("--{key} is required")))
    }
}
