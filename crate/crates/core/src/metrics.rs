//! Confusion-matrix accuracy measures: OA, AA, Cohen's kappa.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::hsi::LabelMap;

/// Counts indexed `[groundtruth - 1][predicted - 1]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConfusionMatrix {
    classes: usize,
    counts: Vec<u64>,
}

impl ConfusionMatrix {
    pub fn from_counts(classes: usize, counts: Vec<u64>) -> Result<Self> {
        if counts.len() != classes * classes {
            return Err(Error::Length {
                expected: classes * classes,
                found: counts.len(),
            });
        }
        Ok(Self { classes, counts })
    }

    pub fn classes(&self) -> usize {
        self.classes
    }

    pub fn get(&self, truth: usize, predicted: usize) -> u64 {
        self.counts[(truth - 1) * self.classes + predicted - 1]
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().sum()
    }

    fn row_sum(&self, i: usize) -> u64 {
        self.counts[i * self.classes..(i + 1) * self.classes]
            .iter()
            .sum()
    }

    fn col_sum(&self, j: usize) -> u64 {
        (0..self.classes)
            .map(|i| self.counts[i * self.classes + j])
            .sum()
    }

    fn trace(&self) -> u64 {
        (0..self.classes)
            .map(|i| self.counts[i * self.classes + i])
            .sum()
    }
}

/// Tallies `pred` against `gt` over the pixels where `gt` is labeled.
pub fn confusion(pred: &LabelMap, gt: &LabelMap) -> Result<ConfusionMatrix> {
    if pred.height() != gt.height() || pred.width() != gt.width() {
        return Err(Error::Shape(format!(
            "prediction is {}x{}, groundtruth is {}x{}",
            pred.height(),
            pred.width(),
            gt.height(),
            gt.width()
        )));
    }
    let classes = pred.classes().max(gt.classes()) as usize;
    let mut counts = vec![0u64; classes * classes];
    for (i, (&p, &g)) in pred.labels().iter().zip(gt.labels()).enumerate() {
        if g == 0 {
            continue;
        }
        if p == 0 {
            return Err(Error::Data(format!(
                "pixel {i} is labeled in groundtruth but not predicted"
            )));
        }
        counts[(g as usize - 1) * classes + p as usize - 1] += 1;
    }
    ConfusionMatrix::from_counts(classes, counts)
}

#[derive(Debug, Clone, PartialEq)]
pub struct MetricsReport {
    pub oa: f64,
    pub aa: f64,
    pub kappa: f64,
    /// Recall per class; `None` for classes absent from groundtruth.
    pub per_class: Vec<Option<f64>>,
    pub total_samples: u64,
}

pub fn report(cm: &ConfusionMatrix) -> Result<MetricsReport> {
    let total = cm.total();
    if total == 0 {
        return Err(Error::EmptyReport);
    }
    let n = total as f64;
    let oa = cm.trace() as f64 / n;
    let per_class: Vec<Option<f64>> = (0..cm.classes)
        .map(|i| {
            let row = cm.row_sum(i);
            (row > 0).then(|| cm.counts[i * cm.classes + i] as f64 / row as f64)
        })
        .collect();
    let present: Vec<f64> = per_class.iter().flatten().copied().collect();
    let aa = present.iter().sum::<f64>() / present.len() as f64;
    let chance: f64 = (0..cm.classes)
        .map(|i| (cm.col_sum(i) as f64 / n) * (cm.row_sum(i) as f64 / n))
        .sum();
    let kappa = if (1.0 - chance).abs() < 1e-15 {
        if cm.trace() == total {
            1.0
        } else {
            0.0
        }
    } else {
        (oa - chance) / (1.0 - chance)
    };
    Ok(MetricsReport {
        oa,
        aa,
        kappa,
        per_class,
        total_samples: total,
    })
}

impl MetricsReport {
    /// `metric,value` rows.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("metric,value\n");
        let _ = writeln!(out, "oa,{}", self.oa);
        let _ = writeln!(out, "aa,{}", self.aa);
        let _ = writeln!(out, "kappa,{}", self.kappa);
        let _ = writeln!(out, "total_samples,{}", self.total_samples);
        for (i, acc) in self.per_class.iter().enumerate() {
            match acc {
                Some(a) => writeln!(out, "class_{},{}", i + 1, a),
                None => writeln!(out, "class_{},", i + 1),
            }
            .unwrap();
        }
        out
    }

    /// Aligned text table: OA and AA in percent, kappa as a fraction.
    pub fn to_table(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "{:<10} {:>10}", "metric", "value");
        let _ = writeln!(out, "{:<10} {:>10.2}", "OA(%)", 100.0 * self.oa);
        let _ = writeln!(out, "{:<10} {:>10.2}", "AA(%)", 100.0 * self.aa);
        let _ = writeln!(out, "{:<10} {:>10.4}", "kappa", self.kappa);
        for (i, acc) in self.per_class.iter().enumerate() {
            let label = format!("class {}", i + 1);
            match acc {
                Some(a) => writeln!(out, "{label:<10} {:>10.2}", 100.0 * a),
                None => writeln!(out, "{label:<10} {:>10}", "-"),
            }
            .unwrap();
        }
        out
    }
}
