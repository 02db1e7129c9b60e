//! JSON problem files.
//!
//! ```json
//! {"alpha": 0.75, "T": 1.0, "n_time": 128, "L": 3.14159, "M": 4,
//!  "g_coeffs": [1, 0, 0, 0], "forcing": "zero"}
//! ```
//!
//! `forcing` is `"zero"`, `{"constant": c}` with c a number or one value per
//! mode, or `{"samples": [[f_1(t_0), ..], ..]}` with one row per mode on any
//! uniform grid over [0, T].

use serde::{Deserialize, Serialize};
use subdiff::fracops::{GridFunction, TimeGrid};
use subdiff::norms::{ModeTrajectories, SpectralField};
use subdiff::spectral::{Forcing, ProblemSpec};

use crate::error::{invalid, CliResult};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemFile {
    pub alpha: f64,
    #[serde(rename = "T")]
    pub t_end: f64,
    pub n_time: usize,
    #[serde(rename = "L")]
    pub length: f64,
    #[serde(rename = "M")]
    pub modes: usize,
    pub g_coeffs: Vec<f64>,
    pub forcing: ForcingSpec,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ForcingSpec {
    Zero,
    Constant(ConstantForcing),
    Samples(Vec<Vec<f64>>),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ConstantForcing {
    Uniform(f64),
    PerMode(Vec<f64>),
}

impl ProblemFile {
    pub fn parse(text: &str) -> CliResult<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn read(path: &std::path::Path) -> CliResult<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| invalid(format!("cannot read {}: {e}", path.display())))?;
        Self::parse(&text)
    }

    pub fn into_problem(self) -> CliResult<ProblemSpec> {
        let grid = TimeGrid::new(self.t_end, self.n_time)?;
        if self.modes == 0 {
            return Err(invalid("M must be at least 1"));
        }
        if self.g_coeffs.len() != self.modes {
            return Err(invalid(format!(
                "g_coeffs has {} entries but M = {}",
                self.g_coeffs.len(),
                self.modes
            )));
        }
        let g = SpectralField::new(self.length, self.g_coeffs)?;
        let forcing = match self.forcing {
            ForcingSpec::Zero => Forcing::Zero,
            ForcingSpec::Constant(ConstantForcing::Uniform(c)) => {
                Forcing::Constant(vec![c; self.modes])
            }
            ForcingSpec::Constant(ConstantForcing::PerMode(c)) => Forcing::Constant(c),
            ForcingSpec::Samples(rows) => {
                if rows.len() != self.modes {
                    return Err(invalid(format!(
                        "samples has {} rows but M = {}",
                        rows.len(),
                        self.modes
                    )));
                }
                let len = rows[0].len();
                if len < 3 || rows.iter().any(|r| r.len() != len) {
                    return Err(invalid("sample rows must share a length of at least 3"));
                }
                let sample_grid = TimeGrid::new(self.t_end, len - 1)?;
                let modes = rows
                    .into_iter()
                    .map(|r| GridFunction::new(sample_grid, r))
                    .collect::<Result<Vec<_>, _>>()?;
                Forcing::Samples(ModeTrajectories::new(self.length, modes)?)
            }
        };
        Ok(ProblemSpec::new(self.alpha, grid, g, forcing)?)
    }
}
