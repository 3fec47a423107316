use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Percentages with one column per true label and one row per identified label, so
/// every non-empty column sums to 100.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConfusionMatrix {
    labels: Vec<String>,
    /// `cells[identified][truth]`.
    cells: Vec<Vec<f64>>,
}

fn label_index(labels: &[String], value: &str) -> Result<usize> {
    labels.iter().position(|l| l == value).ok_or_else(|| Error::UnknownLabel {
        field: "emotion",
        value: value.to_string(),
    })
}

impl ConfusionMatrix {
    /// Builds the matrix from `(truth, identified)` pairs. A declared label that never
    /// occurs as truth gets an all-zero column.
    pub fn from_pairs<S: AsRef<str>>(labels: &[String], pairs: &[(S, S)]) -> Result<Self> {
        if pairs.is_empty() {
            return Err(Error::EmptyResults);
        }
        let k = labels.len();
        let mut counts = vec![vec![0.0; k]; k];
        for (truth, identified) in pairs {
            let c = label_index(labels, truth.as_ref())?;
            let r = label_index(labels, identified.as_ref())?;
            counts[r][c] += 1.0;
        }
        Self::from_counts(labels.to_vec(), counts)
    }

    /// Normalizes each column of `counts[identified][truth]` to percentages.
    pub fn from_counts(labels: Vec<String>, counts: Vec<Vec<f64>>) -> Result<Self> {
        let k = labels.len();
        if k == 0 {
            return Err(Error::EmptyResults);
        }
        if counts.len() != k || counts.iter().any(|row| row.len() != k) {
            return Err(Error::DimensionMismatch {
                expected: k,
                actual: counts.len(),
            });
        }
        if counts.iter().flatten().any(|&c| !(c >= 0.0) || !c.is_finite()) {
            return Err(Error::InvalidSpec("confusion counts must be finite and non-negative".into()));
        }
        let mut cells = counts;
        for c in 0..k {
            let total: f64 = (0..k).map(|r| cells[r][c]).sum();
            if total > 0.0 {
                for row in cells.iter_mut() {
                    row[c] = 100.0 * row[c] / total;
                }
            }
        }
        Ok(Self { labels, cells })
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn cells(&self) -> &[Vec<f64>] {
        &self.cells
    }

    pub fn cell(&self, identified: usize, truth: usize) -> f64 {
        self.cells[identified][truth]
    }

    pub fn column_sums(&self) -> Vec<f64> {
        (0..self.labels.len())
            .map(|c| self.cells.iter().map(|row| row[c]).sum())
            .collect()
    }

    /// Rows are identified labels, columns true labels, values rounded to two decimals.
    pub fn write_tsv(&self, path: impl AsRef<Path>) -> Result<()> {
        let mut out = String::from("identified\\true");
        for l in &self.labels {
            out.push('\t');
            out.push_str(l);
        }
        out.push('\n');
        for (label, row) in self.labels.iter().zip(&self.cells) {
            out.push_str(label);
            for v in row {
                out.push_str(&format!("\t{v:.2}"));
            }
            out.push('\n');
        }
        super::write_text(path, &out)
    }
}

pub fn confusion_matrix<S: AsRef<str>>(labels: &[String], results: &[(S, S)]) -> Result<ConfusionMatrix> {
    ConfusionMatrix::from_pairs(labels, results)
}

/// Mean of the diagonal, in percent.
pub fn average_diagonal(cm: &ConfusionMatrix) -> f64 {
    let k = cm.labels.len();
    (0..k).map(|i| cm.cells[i][i]).sum::<f64>() / k as f64
}
