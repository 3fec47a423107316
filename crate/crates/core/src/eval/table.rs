use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::corpus::Gender;
use crate::error::{Error, Result};
use crate::math::{mean, sample_sd};

/// One identification outcome, as needed for a per-emotion, per-gender table.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SpeakerOutcome<'a> {
    pub true_speaker: &'a str,
    pub identified_speaker: &'a str,
    pub emotion: &'a str,
    pub gender: Gender,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PerformanceRow {
    pub emotion: String,
    /// Accuracy in percent; `None` when no utterance of that gender was scored.
    pub male: Option<f64>,
    pub female: Option<f64>,
    /// Mean of the available gender cells.
    pub average: f64,
    pub count: usize,
}

/// Speaker identification accuracy per emotion and gender, with the mean and sample
/// standard deviation (n - 1) of the per-emotion averages.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PerformanceTable {
    pub rows: Vec<PerformanceRow>,
    pub mean: f64,
    pub sd: f64,
}

impl PerformanceTable {
    /// Builds a table from already computed cells `(emotion, male, female)`.
    pub fn from_cells(cells: &[(&str, Option<f64>, Option<f64>)]) -> Result<Self> {
        let rows = cells
            .iter()
            .map(|&(emotion, male, female)| {
                let present: Vec<f64> = male.into_iter().chain(female).collect();
                if present.is_empty() {
                    return Err(Error::EmptyResults);
                }
                Ok(PerformanceRow {
                    emotion: emotion.to_string(),
                    male,
                    female,
                    average: mean(&present),
                    count: 0,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Self::from_rows(rows)
    }

    fn from_rows(rows: Vec<PerformanceRow>) -> Result<Self> {
        if rows.is_empty() {
            return Err(Error::EmptyResults);
        }
        let averages: Vec<f64> = rows.iter().map(|r| r.average).collect();
        Ok(Self {
            mean: mean(&averages),
            sd: sample_sd(&averages),
            rows,
        })
    }

    pub fn averages(&self) -> Vec<f64> {
        self.rows.iter().map(|r| r.average).collect()
    }

    /// Columns `emotion, male, female, average, count`, then `mean` and `sd` rows.
    /// Percentages are rounded to two decimals; an absent gender cell is left empty.
    pub fn write_tsv(&self, path: impl AsRef<Path>) -> Result<()> {
        let cell = |v: Option<f64>| v.map(|x| format!("{x:.2}")).unwrap_or_default();
        let mut out = String::from("emotion\tmale\tfemale\taverage\tcount\n");
        for r in &self.rows {
            out.push_str(&format!(
                "{}\t{}\t{}\t{:.2}\t{}\n",
                r.emotion,
                cell(r.male),
                cell(r.female),
                r.average,
                r.count
            ));
        }
        out.push_str(&format!("mean\t\t\t{:.2}\t\n", self.mean));
        out.push_str(&format!("sd\t\t\t{:.2}\t\n", self.sd));
        super::write_text(path, &out)
    }
}

/// Groups outcomes by emotion (in `emotions` order) and gender. Emotions without any
/// outcome are left out.
pub fn performance_table(emotions: &[String], outcomes: &[SpeakerOutcome]) -> Result<PerformanceTable> {
    if outcomes.is_empty() {
        return Err(Error::EmptyResults);
    }
    // (correct, total) per (emotion, gender)
    let mut tally: BTreeMap<(usize, Gender), (usize, usize)> = BTreeMap::new();
    for o in outcomes {
        let e = emotions.iter().position(|x| x == o.emotion).ok_or_else(|| Error::UnknownLabel {
            field: "emotion",
            value: o.emotion.to_string(),
        })?;
        let t = tally.entry((e, o.gender)).or_default();
        t.0 += usize::from(o.true_speaker == o.identified_speaker);
        t.1 += 1;
    }
    let accuracy = |e: usize, g: Gender| tally.get(&(e, g)).map(|&(c, n)| 100.0 * c as f64 / n as f64);
    let count = |e: usize| [Gender::Male, Gender::Female].iter().filter_map(|&g| tally.get(&(e, g))).map(|t| t.1).sum();
    let rows = (0..emotions.len())
        .filter(|&e| count(e) > 0)
        .map(|e| {
            let (male, female) = (accuracy(e, Gender::Male), accuracy(e, Gender::Female));
            let present: Vec<f64> = male.into_iter().chain(female).collect();
            PerformanceRow {
                emotion: emotions[e].clone(),
                male,
                female,
                average: mean(&present),
                count: count(e),
            }
        })
        .collect();
    PerformanceTable::from_rows(rows)
}
