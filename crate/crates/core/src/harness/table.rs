use std::fmt::Write as _;
use std::path::Path;

use crate::error::Result;
use crate::fmt::sig9;

#[derive(Debug, Clone, PartialEq)]
pub struct TableRow {
    pub config: String,
    pub accuracy: f64,
    pub flops_ratio: f64,
    /// Fraction of the unpruned network's node-unit weights.
    pub weights_remaining: f64,
    pub reward: f64,
}

/// One row per completed run, plus free-text notes emitted as `#` lines after
/// the CSV body.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ExperimentTable {
    pub rows: Vec<TableRow>,
    pub notes: Vec<String>,
}

impl ExperimentTable {
    pub const HEADER: &'static str = "config,accuracy,flops_ratio,weights_remaining,reward";

    pub fn row(&self, config: &str) -> Option<&TableRow> {
        self.rows.iter().find(|r| r.config == config)
    }

    pub fn note(&mut self, text: impl Into<String>) {
        self.notes.push(text.into());
    }

    pub fn to_csv(&self) -> String {
        let mut out = format!("{}\n", Self::HEADER);
        for r in &self.rows {
            let _ = writeln!(
                out,
                "{},{},{},{},{}",
                r.config,
                sig9(r.accuracy),
                sig9(r.flops_ratio),
                sig9(r.weights_remaining),
                sig9(r.reward)
            );
        }
        for n in &self.notes {
            let _ = writeln!(out, "# {n}");
        }
        out
    }

    pub fn write_csv(&self, path: impl AsRef<Path>) -> Result<()> {
        std::fs::write(path, self.to_csv())?;
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_layout() {
        let mut t = ExperimentTable::default();
        t.rows.push(TableRow {
            config: "baseline".into(),
            accuracy: 0.5,
            flops_ratio: 1.0,
            weights_remaining: 1.0,
            reward: 0.0,
        });
        t.note("seeds 1");
        assert_eq!(t.to_csv(), "config,accuracy,flops_ratio,weights_remaining,reward\nbaseline,0.5,1,1,0\n# seeds 1\n");
        assert!(t.row("baseline").is_some());
    }
}
