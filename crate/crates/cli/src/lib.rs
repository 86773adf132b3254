//! Library side of the `dc-lab` command-line tool: the on-disk family format,
//! weight parsing and the sweep table.

pub mod document;
pub mod sweep;

use thiserror::Error;

pub use document::FamilyDocument;
pub use sweep::SweepRow;

/// Exit status for success or a passing verification.
pub const EXIT_OK: i32 = 0;
/// Exit status for a family that fails verification.
pub const EXIT_VERIFY_FAIL: i32 = 1;
/// Exit status for bad arguments, unreadable input or unwritable output.
pub const EXIT_INPUT: i32 = 2;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Input(String),
    #[error(transparent)]
    Core(#[from] dc_lab_core::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        EXIT_INPUT
    }
}

/// Parses a weight given as a decimal (`0.6`) or a fraction (`3/5`).
pub fn parse_weight(text: &str) -> Result<f64, CliError> {
    let bad = || CliError::Input(format!("cannot parse weight '{text}'"));
    let value = match text.split_once('/') {
        Some((n, d)) => {
            let n: f64 = n.trim().parse().map_err(|_| bad())?;
            let d: f64 = d.trim().parse().map_err(|_| bad())?;
            if d == 0.0 {
                return Err(bad());
            }
            n / d
        }
        None => text.trim().parse().map_err(|_| bad())?,
    };
    if value.is_finite() {
        Ok(value)
    } else {
        Err(bad())
    }
}

pub fn parse_weights(texts: &[String]) -> Result<Vec<f64>, CliError> {
    texts.iter().map(|t| parse_weight(t)).collect()
}
