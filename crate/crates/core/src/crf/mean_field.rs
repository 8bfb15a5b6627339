use std::ops::Deref;

use rayon::prelude::*;

use super::kernel::{build_windows, KernelWindow};
use super::params::CrfParams;
use super::unary::{unary_from_prob, UnaryField};
use crate::dml::{FeatureMap, ProbabilityMap};
use crate::error::{Error, Result};
use crate::field::Field;
use crate::hsi::{HsiCube, LabelMap};

/// Approximate per-pixel label marginals `Q`.
#[derive(Debug, Clone, PartialEq)]
pub struct MarginalField(Field);

impl MarginalField {
    pub fn from_prob(prob: &ProbabilityMap) -> Self {
        Self((**prob).clone())
    }

    pub(crate) fn from_field(field: Field) -> Self {
        Self(field)
    }

    pub fn classes(&self) -> usize {
        self.0.depth()
    }

    /// Per-pixel argmax as a label map with ids `1..=C`, ties to the lowest id.
    pub fn labels(&self) -> LabelMap {
        let labels = self.0.argmax().into_iter().map(|c| c as u32 + 1).collect();
        LabelMap::with_classes(self.height(), self.width(), self.classes() as u32, labels)
            .expect("argmax ids are within the class count")
    }

    /// Largest absolute entry-wise difference.
    pub fn max_abs_diff(&self, other: &MarginalField) -> f64 {
        self.values()
            .iter()
            .zip(other.values())
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }

    pub fn to_cube(&self) -> Result<HsiCube> {
        HsiCube::new(
            self.height(),
            self.width(),
            self.depth(),
            self.values().to_vec(),
        )
    }
}

impl Deref for MarginalField {
    type Target = Field;
    fn deref(&self) -> &Field {
        &self.0
    }
}

/// `Q+(l) ~ exp(-u(l) - pairwise(l))`, normalized in place.
pub(crate) fn normalize_update(unary: &[f64], pairwise: &[f64], out: &mut [f64]) {
    let mut max = f64::NEG_INFINITY;
    for ((o, u), e) in out.iter_mut().zip(unary).zip(pairwise) {
        *o = -u - e;
        max = max.max(*o);
    }
    let mut sum = 0.0;
    for o in out.iter_mut() {
        *o = (*o - max).exp();
        sum += *o;
    }
    out.iter_mut().for_each(|o| *o /= sum);
}

/// One simultaneous mean-field update over all pixels.
pub fn mean_field_step(
    q: &MarginalField,
    unary: &UnaryField,
    windows: &KernelWindow,
    params: &CrfParams,
) -> MarginalField {
    let classes = q.classes();
    let mut next = vec![0.0; q.values().len()];
    next.par_chunks_mut(classes)
        .enumerate()
        .for_each(|(i, out)| {
            let mut message = vec![0.0; classes];
            for (j, k_app, k_smo) in windows.neighbors(i) {
                let w = params.w_app * k_app + params.w_smo * k_smo;
                for (m, qj) in message.iter_mut().zip(q.pixel(j)) {
                    *m += w * qj;
                }
            }
            // Potts: a label pays for the message mass on every other label
            let total: f64 = message.iter().sum();
            let pairwise: Vec<f64> = message.iter().map(|m| total - m).collect();
            normalize_update(unary.pixel(i), &pairwise, out);
        });
    MarginalField(
        Field::new(q.height(), q.width(), classes, next)
            .expect("normalized exponentials are finite"),
    )
}

fn check_shapes(prob: &ProbabilityMap, features: &FeatureMap) -> Result<()> {
    if !prob.same_grid(features) {
        return Err(Error::Shape(format!(
            "probabilities are {}x{}, features are {}x{}",
            prob.height(),
            prob.width(),
            features.height(),
            features.width()
        )));
    }
    Ok(())
}

/// Marginals after each of the `params.iterations` windowed updates.
pub fn infer_trace(
    prob: &ProbabilityMap,
    features: &FeatureMap,
    params: &CrfParams,
) -> Result<Vec<MarginalField>> {
    params.validate()?;
    check_shapes(prob, features)?;
    let unary = unary_from_prob(prob);
    let windows = build_windows(features, params);
    let mut trace = Vec::with_capacity(params.iterations);
    let mut q = MarginalField::from_prob(prob);
    for _ in 0..params.iterations {
        q = mean_field_step(&q, &unary, &windows, params);
        trace.push(q.clone());
    }
    Ok(trace)
}

/// Windowed mean-field inference initialized at `prob`.
pub fn infer(
    prob: &ProbabilityMap,
    features: &FeatureMap,
    params: &CrfParams,
) -> Result<(LabelMap, MarginalField)> {
    params.validate()?;
    check_shapes(prob, features)?;
    let unary = unary_from_prob(prob);
    let windows = build_windows(features, params);
    let mut q = MarginalField::from_prob(prob);
    for _ in 0..params.iterations {
        q = mean_field_step(&q, &unary, &windows, params);
    }
    Ok((q.labels(), q))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dml::softmax;

    fn probs(h: usize, w: usize, c: usize, vals: Vec<f64>) -> ProbabilityMap {
        ProbabilityMap::new(h, w, c, vals).unwrap()
    }

    #[test]
    fn zero_weights_give_softmax_of_negative_unary() {
        let prob = probs(1, 3, 2, vec![0.9, 0.1, 0.3, 0.7, 0.5, 0.5]);
        let feats = FeatureMap::new(1, 3, 1, vec![0.0, 1.0, 2.0]).unwrap();
        let p = CrfParams {
            w_app: 0.0,
            w_smo: 0.0,
            iterations: 3,
            ..Default::default()
        };
        let (labels, q) = infer(&prob, &feats, &p).unwrap();
        assert_eq!(labels.labels(), &[1, 2, 1]);
        for i in 0..3 {
            for (a, b) in q.pixel(i).iter().zip(prob.pixel(i)) {
                assert!((a - b).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn single_pixel_is_unary_softmax() {
        let prob = probs(1, 1, 3, vec![0.2, 0.5, 0.3]);
        let feats = FeatureMap::new(1, 1, 2, vec![1.0, 1.0]).unwrap();
        let (_, q) = infer(&prob, &feats, &CrfParams::default()).unwrap();
        let u: Vec<f64> = prob.pixel(0).iter().map(|p| p.ln()).collect();
        for (a, b) in q.pixel(0).iter().zip(softmax(&u)) {
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn two_pixel_hand_computation() {
        // pixels at (0,0) and (0,1), one feature each
        let prob = probs(1, 2, 2, vec![0.8, 0.2, 0.4, 0.6]);
        let feats = FeatureMap::new(1, 2, 1, vec![0.0, 3.0]).unwrap();
        let p = CrfParams {
            w_app: 2.0,
            w_smo: 0.5,
            theta_alpha: 1.5,
            theta_beta: 2.0,
            theta_gamma: 1.0,
            filter_size: 3,
            iterations: 1,
            app_positions: super::super::PositionScale::Pixels,
            ..Default::default()
        };
        let (_, q) = infer(&prob, &feats, &p).unwrap();

        let k_app = f64::exp(-1.0 / (2.0 * 2.25) - 9.0 / 8.0);
        let k_smo = f64::exp(-0.5);
        let w = 2.0 * k_app + 0.5 * k_smo;
        // pixel 0 receives w * Q_1; energy of label l is w * Q_1(other)
        let e0 = [w * 0.6, w * 0.4];
        let a = [0.8f64.ln() - e0[0], 0.2f64.ln() - e0[1]];
        let z = a[0].exp() + a[1].exp();
        assert!((q.pixel(0)[0] - a[0].exp() / z).abs() < 1e-12);
        let e1 = [w * 0.2, w * 0.8];
        let b = [0.4f64.ln() - e1[0], 0.6f64.ln() - e1[1]];
        let z = b[0].exp() + b[1].exp();
        assert!((q.pixel(1)[1] - b[1].exp() / z).abs() < 1e-12);
    }

    #[test]
    fn shape_mismatch() {
        let prob = probs(1, 2, 2, vec![0.5; 4]);
        let feats = FeatureMap::new(2, 1, 1, vec![0.0; 2]).unwrap();
        assert!(matches!(
            infer(&prob, &feats, &CrfParams::default()),
            Err(Error::Shape(_))
        ));
    }

    #[test]
    fn ties_go_to_lowest_class() {
        let q = MarginalField::from_prob(&probs(1, 1, 3, vec![0.4, 0.4, 0.2]));
        assert_eq!(q.labels().labels(), &[1]);
    }
}
