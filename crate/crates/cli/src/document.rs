use std::path::Path;

use dc_lab_core::{ComplexMatrix, EncodingFamily, UnitaryMatrix};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::CliError;

pub const SCHEMA_VERSION: u32 = 1;

/// JSON form of an [`EncodingFamily`]. Each member is a row-major list of
/// `[re, im]` pairs.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FamilyDocument {
    pub schema_version: u32,
    pub d: usize,
    pub label: String,
    pub target_lambda0: Option<f64>,
    pub members: Vec<Vec<[f64; 2]>>,
}

impl FamilyDocument {
    pub fn from_family(f: &EncodingFamily) -> Self {
        let members = f
            .members()
            .iter()
            .map(|u| u.as_slice().iter().map(|z| [z.re, z.im]).collect())
            .collect();
        Self {
            schema_version: SCHEMA_VERSION,
            d: f.dim(),
            label: f.label().to_string(),
            target_lambda0: f.target_lambda0(),
            members,
        }
    }

    pub fn to_family(&self) -> Result<EncodingFamily, CliError> {
        if self.schema_version != SCHEMA_VERSION {
            return Err(CliError::Input(format!(
                "unsupported schema version {} (expected {SCHEMA_VERSION})",
                self.schema_version
            )));
        }
        let d = self.d;
        let members = self
            .members
            .iter()
            .enumerate()
            .map(|(i, entries)| {
                if entries.len() != d * d {
                    return Err(CliError::Input(format!(
                        "member {i} has {} entries, expected {}",
                        entries.len(),
                        d * d
                    )));
                }
                let data = entries
                    .iter()
                    .map(|[re, im]| Complex64::new(*re, *im))
                    .collect();
                let m = ComplexMatrix::new(d, d, data)
                    .map_err(|e| CliError::Input(format!("member {i}: {e}")))?;
                UnitaryMatrix::new(m).map_err(|e| CliError::Input(format!("member {i}: {e}")))
            })
            .collect::<Result<Vec<_>, _>>()?;
        EncodingFamily::new(members, self.label.clone(), self.target_lambda0)
            .map_err(|e| CliError::Input(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("documents always serialise")
    }

    pub fn from_json(text: &str) -> Result<Self, CliError> {
        serde_json::from_str(text).map_err(|e| CliError::Input(format!("malformed document: {e}")))
    }

    pub fn read(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Input(format!("cannot read {}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    pub fn write(&self, path: &Path) -> Result<(), CliError> {
        std::fs::write(path, self.to_json() + "\n")
            .map_err(|e| CliError::Input(format!("cannot write {}: {e}", path.display())))
    }
}
