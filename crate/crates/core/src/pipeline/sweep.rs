use std::fmt::Write as _;

use crate::crf::{self, CrfParams};
use crate::dml::{FeatureMap, ProbabilityMap};
use crate::error::{Error, Result};
use crate::hsi::LabelMap;
use crate::metrics;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepParam {
    WApp,
    WSmo,
    ThetaAlpha,
    ThetaBeta,
    ThetaGamma,
    FilterSize,
}

impl SweepParam {
    pub const ALL: [SweepParam; 6] = [
        SweepParam::WApp,
        SweepParam::WSmo,
        SweepParam::ThetaAlpha,
        SweepParam::ThetaBeta,
        SweepParam::ThetaGamma,
        SweepParam::FilterSize,
    ];

    pub fn parse(name: &str) -> Result<Self> {
        Ok(match name {
            "w_app" => SweepParam::WApp,
            "w_smo" => SweepParam::WSmo,
            "theta_alpha" => SweepParam::ThetaAlpha,
            "theta_beta" => SweepParam::ThetaBeta,
            "theta_gamma" => SweepParam::ThetaGamma,
            "k" | "filter_size" => SweepParam::FilterSize,
            _ => {
                return Err(Error::Usage(format!(
                    "cannot sweep unknown parameter {name:?}"
                )))
            }
        })
    }

    pub fn name(self) -> &'static str {
        match self {
            SweepParam::WApp => "w_app",
            SweepParam::WSmo => "w_smo",
            SweepParam::ThetaAlpha => "theta_alpha",
            SweepParam::ThetaBeta => "theta_beta",
            SweepParam::ThetaGamma => "theta_gamma",
            SweepParam::FilterSize => "k",
        }
    }

    /// `base` with this parameter replaced by `value`.
    pub fn set(self, base: &CrfParams, value: f64) -> Result<CrfParams> {
        let mut p = base.clone();
        match self {
            SweepParam::WApp => p.w_app = value,
            SweepParam::WSmo => p.w_smo = value,
            SweepParam::ThetaAlpha => p.theta_alpha = value,
            SweepParam::ThetaBeta => p.theta_beta = value,
            SweepParam::ThetaGamma => p.theta_gamma = value,
            SweepParam::FilterSize => {
                if value < 1.0 || value.fract() != 0.0 || (value as usize).is_multiple_of(2) {
                    return Err(Error::Usage(format!(
                        "filter size must be an odd positive integer, got {value}"
                    )));
                }
                p.filter_size = value as usize;
            }
        }
        p.validate()?;
        Ok(p)
    }
}

/// One parameter varied over `values`, everything else at the anchors.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    pub param: SweepParam,
    pub values: Vec<f64>,
}

impl SweepSpec {
    pub fn new(name: &str, values: Vec<f64>) -> Result<Self> {
        let spec = SweepSpec {
            param: SweepParam::parse(name)?,
            values,
        };
        if spec.values.is_empty() {
            return Err(Error::Usage("sweep needs at least one value".into()));
        }
        for &v in &spec.values {
            spec.param.set(&CrfParams::default(), v)?;
        }
        Ok(spec)
    }

    /// Anchor times `factors`, e.g. `[0.25, 0.5, 1, 2, 4]`.
    pub fn scaled(param: SweepParam, base: &CrfParams, factors: &[f64]) -> Self {
        let anchor = match param {
            SweepParam::WApp => base.w_app,
            SweepParam::WSmo => base.w_smo,
            SweepParam::ThetaAlpha => base.theta_alpha,
            SweepParam::ThetaBeta => base.theta_beta,
            SweepParam::ThetaGamma => base.theta_gamma,
            SweepParam::FilterSize => base.filter_size as f64,
        };
        SweepSpec {
            param,
            values: factors.iter().map(|f| anchor * f).collect(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepRow {
    pub value: f64,
    pub oa: f64,
    pub aa: f64,
}

/// Runs CRF inference per sweep point on precomputed network outputs and
/// scores each against `gt`.
pub fn sweep_cached(
    prob: &ProbabilityMap,
    features: &FeatureMap,
    gt: &LabelMap,
    base: &CrfParams,
    spec: &SweepSpec,
) -> Result<Vec<SweepRow>> {
    spec.values
        .iter()
        .map(|&value| {
            let params = spec.param.set(base, value)?;
            let (labels, _) = crf::infer(prob, features, &params)?;
            let r = metrics::report(&metrics::confusion(&labels, gt)?)?;
            Ok(SweepRow {
                value,
                oa: r.oa,
                aa: r.aa,
            })
        })
        .collect()
}

pub(crate) fn sweep_csv(rows: &[SweepRow]) -> String {
    let mut out = String::from("value,oa,aa\n");
    for r in rows {
        let _ = writeln!(out, "{},{},{}", r.value, r.oa, r.aa);
    }
    out
}
