use super::kernel::{kernel_values, Geometry};
use super::mean_field::{normalize_update, MarginalField};
use super::params::CrfParams;
use super::unary::unary_from_prob;
use crate::dml::{FeatureMap, ProbabilityMap};
use crate::error::{Error, Result};
use crate::field::Field;
use crate::hsi::LabelMap;

/// Largest image, in pixels, accepted by the quadratic-cost dense routine.
pub const DENSE_PIXEL_LIMIT: usize = 4096;

/// Mean-field marginals after every iteration with messages summed over all
/// pixel pairs. `filter_size` and `window` are ignored.
pub fn brute_force_trace(
    prob: &ProbabilityMap,
    features: &FeatureMap,
    params: &CrfParams,
) -> Result<Vec<MarginalField>> {
    let (h, w, classes) = (prob.height(), prob.width(), prob.classes());
    let n = h * w;
    if n > DENSE_PIXEL_LIMIT {
        return Err(Error::TooLarge {
            pixels: n,
            limit: DENSE_PIXEL_LIMIT,
        });
    }
    if !prob.same_grid(features) {
        return Err(Error::Shape(
            "probabilities and features differ in size".into(),
        ));
    }
    if params.iterations == 0 {
        return Err(Error::Usage("iterations must be >= 1".into()));
    }
    let geom = Geometry::new(h, w, params);
    let pos = |i: usize| [(i / w) as f64, (i % w) as f64];

    // symmetric pair weights, i < j
    let mut weight = vec![0.0; n * n];
    for i in 0..n {
        for j in i + 1..n {
            let (a, s) = kernel_values(
                pos(i),
                pos(j),
                features.pixel(i),
                features.pixel(j),
                params,
                &geom,
            );
            let wij = params.w_app * a + params.w_smo * s;
            weight[i * n + j] = wij;
            weight[j * n + i] = wij;
        }
    }

    let unary = unary_from_prob(prob);
    let mut q: Vec<f64> = prob.values().to_vec();
    let mut trace = Vec::with_capacity(params.iterations);
    for _ in 0..params.iterations {
        let mut message = vec![0.0; n * classes];
        for i in 0..n {
            for j in i + 1..n {
                let wij = weight[i * n + j];
                for l in 0..classes {
                    message[i * classes + l] += wij * q[j * classes + l];
                    message[j * classes + l] += wij * q[i * classes + l];
                }
            }
        }
        let mut next = vec![0.0; n * classes];
        let mut energy = vec![0.0; classes];
        for i in 0..n {
            let m = &message[i * classes..(i + 1) * classes];
            for (l, e) in energy.iter_mut().enumerate() {
                *e = (0..classes).filter(|&o| o != l).map(|o| m[o]).sum();
            }
            normalize_update(
                unary.pixel(i),
                &energy,
                &mut next[i * classes..(i + 1) * classes],
            );
        }
        q = next;
        trace.push(MarginalField::from_field(Field::new(
            h,
            w,
            classes,
            q.clone(),
        )?));
    }
    Ok(trace)
}

/// Dense mean-field inference over all pixel pairs, for small images.
pub fn brute_force_infer(
    prob: &ProbabilityMap,
    features: &FeatureMap,
    params: &CrfParams,
) -> Result<(LabelMap, MarginalField)> {
    let q = brute_force_trace(prob, features, params)?
        .pop()
        .expect("at least one iteration");
    Ok((q.labels(), q))
}
