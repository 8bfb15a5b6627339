use std::ops::Deref;

use crate::dml::{ProbabilityMap, PROB_FLOOR};
use crate::error::Result;
use crate::field::Field;
use crate::hsi::HsiCube;

/// Per-pixel, per-class cost `-log p`.
#[derive(Debug, Clone, PartialEq)]
pub struct UnaryField(Field);

impl UnaryField {
    pub fn classes(&self) -> usize {
        self.0.depth()
    }

    /// Classes as bands, for debugging dumps.
    pub fn to_cube(&self) -> Result<HsiCube> {
        HsiCube::new(
            self.height(),
            self.width(),
            self.depth(),
            self.values().to_vec(),
        )
    }
}

impl Deref for UnaryField {
    type Target = Field;
    fn deref(&self) -> &Field {
        &self.0
    }
}

pub fn unary_from_prob(prob: &ProbabilityMap) -> UnaryField {
    let values = prob
        .values()
        .iter()
        .map(|&p| -p.max(PROB_FLOOR).ln())
        .collect();
    UnaryField(
        Field::new(prob.height(), prob.width(), prob.depth(), values)
            .expect("clamped log of a valid distribution is finite"),
    )
}
