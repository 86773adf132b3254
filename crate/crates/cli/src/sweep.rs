use std::io::Write;

use dc_lab_core::search::RegionMap;
use serde::Serialize;

use crate::CliError;

/// One CSV row per grid cell. Field order is the column order.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SweepRow {
    pub lambda0: f64,
    pub lambda1: f64,
    pub lambda2: f64,
    pub entropy_bits: f64,
    pub wcsg_bound: usize,
    pub n_max_estimate: usize,
    /// Empty when every searched size was accepted.
    pub best_objective_at_refusal: Option<f64>,
    pub seed: u64,
}

pub fn rows(map: &RegionMap) -> Vec<SweepRow> {
    map.cells
        .iter()
        .map(|c| SweepRow {
            lambda0: c.lambdas[0],
            lambda1: c.lambdas[1],
            lambda2: c.lambdas[2],
            entropy_bits: c.entropy_bits,
            wcsg_bound: c.wcsg_bound,
            n_max_estimate: c.result.n_max_estimate,
            best_objective_at_refusal: c.result.best_objective_at_refusal(),
            seed: c.seed,
        })
        .collect()
}

pub fn write_csv<W: Write>(rows: &[SweepRow], out: W) -> Result<(), CliError> {
    let mut w = csv::Writer::from_writer(out);
    for r in rows {
        w.serialize(r)
            .map_err(|e| CliError::Input(format!("cannot write CSV: {e}")))?;
    }
    w.flush()
        .map_err(|e| CliError::Input(format!("cannot write CSV: {e}")))
}
