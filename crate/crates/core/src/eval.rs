//! Confusion matrices and the macro recognition-accuracy metric.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// N x N count matrix; `counts[i][j]` is the number of samples of true
/// class `i` predicted as class `j`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConfusionMatrix {
    n_classes: usize,
    counts: Vec<u64>,
}

impl ConfusionMatrix {
    pub fn new(n_classes: usize) -> Self {
        ConfusionMatrix {
            n_classes,
            counts: vec![0; n_classes * n_classes],
        }
    }

    pub fn from_counts(n_classes: usize, counts: Vec<u64>) -> Result<Self> {
        if counts.len() != n_classes * n_classes {
            return Err(Error::DimensionMismatch {
                expected: n_classes * n_classes,
                got: counts.len(),
            });
        }
        Ok(ConfusionMatrix { n_classes, counts })
    }

    pub fn n_classes(&self) -> usize {
        self.n_classes
    }

    #[inline]
    pub fn get(&self, truth: usize, pred: usize) -> u64 {
        self.counts[truth * self.n_classes + pred]
    }

    #[inline]
    pub fn add(&mut self, truth: usize, pred: usize) {
        self.counts[truth * self.n_classes + pred] += 1;
    }

    /// Number of test samples of true class `k`.
    pub fn row_total(&self, k: usize) -> u64 {
        self.counts[k * self.n_classes..(k + 1) * self.n_classes]
            .iter()
            .sum()
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().sum()
    }

    pub fn trace(&self) -> u64 {
        (0..self.n_classes).map(|k| self.get(k, k)).sum()
    }

    /// CSV with one integer row per class, no header.
    pub fn write_csv(&self, path: &Path) -> Result<()> {
        let mut w = BufWriter::new(File::create(path)?);
        for i in 0..self.n_classes {
            let row: Vec<String> = (0..self.n_classes)
                .map(|j| self.get(i, j).to_string())
                .collect();
            writeln!(w, "{}", row.join(","))?;
        }
        Ok(())
    }

    pub fn read_csv(path: &Path) -> Result<Self> {
        let display = path.display().to_string();
        let text = std::fs::read_to_string(path)?;
        let mut rows: Vec<Vec<u64>> = Vec::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            let row: Vec<u64> = line
                .split(',')
                .map(|t| t.trim().parse::<u64>())
                .collect::<std::result::Result<_, _>>()
                .map_err(|_| {
                    Error::format(&display, format!("line {}: bad count", lineno + 1))
                })?;
            rows.push(row);
        }
        let n = rows.len();
        if n == 0 {
            return Err(Error::format(&display, "empty confusion matrix"));
        }
        for row in &rows {
            if row.len() != n {
                return Err(Error::format(&display, "matrix is not square"));
            }
        }
        Ok(ConfusionMatrix {
            n_classes: n,
            counts: rows.into_iter().flatten().collect(),
        })
    }
}

/// Tally a confusion matrix from parallel prediction/truth slices.
pub fn confusion(preds: &[usize], truth: &[usize], n_classes: usize) -> Result<ConfusionMatrix> {
    if preds.len() != truth.len() {
        return Err(Error::DimensionMismatch {
            expected: truth.len(),
            got: preds.len(),
        });
    }
    let mut m = ConfusionMatrix::new(n_classes);
    for (&p, &t) in preds.iter().zip(truth) {
        if p >= n_classes {
            return Err(Error::LabelOutOfRange {
                label: p,
                classes: n_classes,
            });
        }
        if t >= n_classes {
            return Err(Error::LabelOutOfRange {
                label: t,
                classes: n_classes,
            });
        }
        m.add(t, p);
    }
    Ok(m)
}

/// Macro recognition accuracy in percent: the mean over classes of
/// per-class recall `C_kk / row_total(k)`, times 100. Classes with no
/// test samples are skipped and the divisor shrinks accordingly.
pub fn macro_accuracy(c: &ConfusionMatrix) -> Result<f64> {
    let mut sum = 0.0f64;
    let mut populated = 0usize;
    for k in 0..c.n_classes() {
        let row = c.row_total(k);
        if row == 0 {
            continue;
        }
        sum += c.get(k, k) as f64 / row as f64;
        populated += 1;
    }
    if populated == 0 {
        return Err(Error::EmptyMatrix);
    }
    Ok(sum / populated as f64 * 100.0)
}

/// Per-class stats for [`EvalReport`].
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ClassStats {
    pub class: usize,
    pub support: u64,
    pub correct: u64,
    /// None for classes with no test samples.
    pub recall: Option<f64>,
}

/// Aggregated evaluation results; serializes to JSON.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct EvalReport {
    pub n_classes: usize,
    pub total: u64,
    /// trace / total, in percent.
    pub overall_accuracy: f64,
    /// Mean per-class recall over populated classes, in percent.
    pub macro_accuracy: f64,
    pub per_class: Vec<ClassStats>,
}

/// Build the full evaluation report for a confusion matrix. An
/// all-empty matrix reports zero accuracies rather than failing.
pub fn report(c: &ConfusionMatrix) -> EvalReport {
    let total = c.total();
    let overall = if total == 0 {
        0.0
    } else {
        c.trace() as f64 / total as f64 * 100.0
    };
    let per_class: Vec<ClassStats> = (0..c.n_classes())
        .map(|k| {
            let support = c.row_total(k);
            let correct = c.get(k, k);
            ClassStats {
                class: k,
                support,
                correct,
                recall: (support > 0).then(|| correct as f64 / support as f64),
            }
        })
        .collect();
    EvalReport {
        n_classes: c.n_classes(),
        total,
        overall_accuracy: overall,
        macro_accuracy: macro_accuracy(c).unwrap_or(0.0),
        per_class,
    }
}
