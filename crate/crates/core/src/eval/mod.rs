//! Confusion matrices, per-emotion and per-gender accuracy tables, the pooled-deviation
//! t statistic and the fusion-weight sweep.

mod confusion;
mod report;
mod sweep;
mod table;
mod ttest;

use std::path::Path;

use crate::error::{Error, Result};

pub use confusion::{average_diagonal, confusion_matrix, ConfusionMatrix};
pub use report::{evaluate_results, Evaluation};
pub use sweep::{alpha_sweep, default_alphas, AlphaSweep};
pub use table::{performance_table, PerformanceRow, PerformanceTable, SpeakerOutcome};
pub use ttest::{pooled_t, round_to, TTestResult, T_CRITICAL_005};

fn write_text(path: impl AsRef<Path>, text: &str) -> Result<()> {
    let path = path.as_ref();
    std::fs::write(path, text).map_err(|e| Error::io(path, e))
}
