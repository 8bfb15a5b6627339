use crate::error::{Error, Result};

/// Lower clamp applied to probabilities before taking logs.
pub const PROB_FLOOR: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum CenterLossForm {
    /// `||f - c||_2` per sample.
    #[default]
    Norm,
    /// `0.5 * ||f - c||_2^2` per sample.
    Squared,
}

impl CenterLossForm {
    pub(crate) fn value(self, dist_sq: f64) -> f64 {
        match self {
            CenterLossForm::Norm => dist_sq.sqrt(),
            CenterLossForm::Squared => 0.5 * dist_sq,
        }
    }
}

pub fn softmax(logits: &[f64]) -> Vec<f64> {
    let max = logits.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let mut out: Vec<f64> = logits.iter().map(|&z| (z - max).exp()).collect();
    let sum: f64 = out.iter().sum();
    out.iter_mut().for_each(|p| *p /= sum);
    out
}

/// Cross-entropy of a distribution against class id `label` (1-based).
pub fn softmax_loss(prob: &[f64], label: u32) -> f64 {
    -prob[label as usize - 1].max(PROB_FLOOR).ln()
}

/// Sum over samples of the distance between each feature and its class center.
/// `centers[c - 1]` belongs to class `c`.
pub fn center_loss<F: AsRef<[f64]>>(
    features: &[F],
    labels: &[u32],
    centers: &[Vec<f64>],
    form: CenterLossForm,
) -> Result<f64> {
    let mut total = 0.0;
    for (f, &y) in features.iter().zip(labels) {
        let c = y
            .checked_sub(1)
            .and_then(|i| centers.get(i as usize))
            .ok_or_else(|| Error::State(format!("no center for class {y}")))?;
        let f = f.as_ref();
        if c.len() != f.len() {
            return Err(Error::Shape(format!(
                "center of class {y} has length {}, feature has {}",
                c.len(),
                f.len()
            )));
        }
        let d2: f64 = f.iter().zip(c).map(|(a, b)| (a - b) * (a - b)).sum();
        total += form.value(d2);
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn softmax_of_equal_logits() {
        assert_eq!(softmax(&[0.0, 0.0]), vec![0.5, 0.5]);
    }

    #[test]
    fn softmax_loss_values() {
        assert_eq!(softmax_loss(&[0.0, 1.0, 0.0], 2), 0.0);
        assert!((softmax_loss(&[0.25; 4], 3) - 4f64.ln()).abs() < 1e-12);
        assert!((softmax_loss(&[1.0, 0.0], 2) - 27.631021115928547).abs() < 1e-9);
    }

    #[test]
    fn center_loss_three_four_five() {
        let l = center_loss(&[[3.0, 4.0]], &[1], &[vec![0.0, 0.0]], CenterLossForm::Norm).unwrap();
        assert_eq!(l, 5.0);
        let l = center_loss(
            &[[3.0, 4.0]],
            &[1],
            &[vec![0.0, 0.0]],
            CenterLossForm::Squared,
        )
        .unwrap();
        assert_eq!(l, 12.5);
    }

    #[test]
    fn center_loss_zero_at_centers() {
        let centers = vec![vec![1.0, 2.0], vec![-1.0, 0.5]];
        let feats = [[1.0, 2.0], [-1.0, 0.5], [1.0, 2.0]];
        let l = center_loss(&feats, &[1, 2, 1], &centers, CenterLossForm::Norm).unwrap();
        assert_eq!(l, 0.0);
    }

    #[test]
    fn center_loss_missing_center() {
        let err = center_loss(&[[0.0]], &[3], &[vec![0.0]], CenterLossForm::Norm).unwrap_err();
        assert!(matches!(err, Error::State(_)));
    }

    #[test]
    fn center_loss_is_sum_of_sample_norms() {
        let centers = vec![vec![0.5, -0.25, 2.0]];
        let a = [1.25, 0.75, -0.5];
        let b = [-2.0, 0.0, 1.0];
        let norm = |f: &[f64]| {
            f.iter()
                .zip(&centers[0])
                .map(|(x, c)| (x - c) * (x - c))
                .sum::<f64>()
                .sqrt()
        };
        let l = center_loss(&[a, b], &[1, 1], &centers, CenterLossForm::Norm).unwrap();
        assert!((l - (norm(&a) + norm(&b))).abs() < 1e-12);
    }

    proptest! {
        #[test]
        fn softmax_is_a_shift_invariant_distribution(
            logits in prop::collection::vec(-10.0f64..10.0, 2..8),
            shift in -100.0f64..100.0,
        ) {
            let p = softmax(&logits);
            prop_assert!((p.iter().sum::<f64>() - 1.0).abs() < 1e-9);
            prop_assert!(p.iter().all(|&v| v > 0.0 && v < 1.0));
            let shifted: Vec<f64> = logits.iter().map(|z| z + shift).collect();
            for (a, b) in p.iter().zip(softmax(&shifted)) {
                prop_assert!((a - b).abs() < 1e-9);
            }
        }

        #[test]
        fn center_loss_nonnegative(
            feats in prop::collection::vec(prop::collection::vec(-5.0f64..5.0, 3), 1..6),
        ) {
            let labels = vec![1; feats.len()];
            let centers = vec![vec![0.1, 0.2, 0.3]];
            let l = center_loss(&feats, &labels, &centers, CenterLossForm::Norm).unwrap();
            prop_assert!(l >= 0.0);
        }
    }
}
