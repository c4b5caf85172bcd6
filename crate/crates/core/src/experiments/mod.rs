//! Configuration-driven experiment runs that emit CSV tables.

mod commands;
mod config;

use std::io;
use std::path::{Path, PathBuf};

use thiserror::Error;

pub use commands::{cmd_allocate, cmd_bounds, cmd_feedback, cmd_simulate, INVERSION_REL_TOL};
pub use config::{ExperimentConfig, Sweep};

use crate::montecarlo::Parallelism;

#[derive(Debug, Error)]
pub enum ExperimentError {
    #[error("config field {field}: {message}")]
    Config { field: String, message: String },

    #[error("cannot read config {}: {source}", path.display())]
    ReadConfig { path: PathBuf, source: io::Error },

    #[error("malformed config: {0}")]
    Parse(#[from] serde_json::Error),

    #[error(transparent)]
    Model(#[from] crate::Error),

    #[error("cannot write {}: {source}", path.display())]
    Write { path: PathBuf, source: csv::Error },
}

impl ExperimentError {
    /// 2 for bad configuration, 3 when a density inversion fails, 1 for I/O.
    pub fn exit_code(&self) -> i32 {
        match self {
            ExperimentError::Config { .. } | ExperimentError::ReadConfig { .. } | ExperimentError::Parse(_) => 2,
            ExperimentError::Model(crate::Error::NonConvergence(_)) => 3,
            ExperimentError::Model(_) => 2,
            ExperimentError::Write { .. } => 1,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    Bounds,
    Simulate,
    Allocate,
    Feedback,
}

/// A header plus rows of already formatted cells.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub header: Vec<&'static str>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub(crate) fn new(header: &[&'static str]) -> Self {
        Self {
            header: header.to_vec(),
            rows: Vec::new(),
        }
    }

    pub(crate) fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    /// Value of `column` in every row, parsed back to `f64`. Empty cells are `None`.
    pub fn column(&self, column: &str) -> Option<Vec<Option<f64>>> {
        let j = self.header.iter().position(|h| *h == column)?;
        Some(self.rows.iter().map(|r| r[j].parse().ok()).collect())
    }

    pub fn write<W: io::Write>(&self, out: W) -> csv::Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(&self.header)?;
        for row in &self.rows {
            w.write_record(row)?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn to_csv_string(&self) -> String {
        let mut buf = Vec::new();
        self.write(&mut buf).expect("writing to memory cannot fail");
        String::from_utf8(buf).expect("csv output is utf-8")
    }

    pub fn write_file(&self, path: &Path) -> Result<(), ExperimentError> {
        let file = std::fs::File::create(path).map_err(|e| ExperimentError::Write {
            path: path.to_path_buf(),
            source: e.into(),
        })?;
        self.write(file).map_err(|source| ExperimentError::Write {
            path: path.to_path_buf(),
            source,
        })
    }
}

/// Tables produced by one command: the main sweep and an optional summary.
#[derive(Debug, Clone, PartialEq)]
pub struct CommandOutput {
    pub table: Table,
    pub summary: Option<Table>,
}

pub fn run(command: Command, config: &ExperimentConfig, par: Parallelism) -> Result<CommandOutput, ExperimentError> {
    match command {
        Command::Bounds => cmd_bounds(config).map(|table| CommandOutput { table, summary: None }),
        Command::Simulate => cmd_simulate(config, par).map(|table| CommandOutput { table, summary: None }),
        Command::Allocate => cmd_allocate(config).map(|(table, summary)| CommandOutput {
            table,
            summary: Some(summary),
        }),
        Command::Feedback => cmd_feedback(config, par).map(|table| CommandOutput { table, summary: None }),
    }
}

/// Path of the summary written next to `out`: `<stem>_summary.csv`.
pub fn summary_path(out: &Path) -> PathBuf {
    let stem = out.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    out.with_file_name(format!("{stem}_summary.csv"))
}
