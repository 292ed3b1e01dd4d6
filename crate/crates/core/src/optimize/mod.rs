//! Numerical minimum widths under orthogonality constraints, and the
//! experiments built from them: period scans, portions of long evolutions,
//! random-spacing trials and the even-`N` threshold study.
//!
//! Every reported width is dimensionless: the width in cycles per time step
//! times the average separation `tau` of the orthogonal states.

mod experiments;
mod search;
mod width;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::exec::Execution;
use crate::lp::SolverOptions;
use crate::spectrum::WeightDistribution;

pub use experiments::{
    portion_min, scan_period, spacing_ratio, stochastic_equal_spacing, stochastic_trial, threshold_scan, TrialSpacing,
};
pub use search::golden_section;
pub use width::{column_limit, max_probability, min_width_numeric};

/// Knobs shared by every numeric experiment.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SearchOptions {
    /// Highest grid frequency offered to the LP, in units of `1 / min_gap`
    /// (cycles per smallest separation). `None` uses every phase of the period.
    /// If the capped grid is infeasible the full grid is tried.
    pub band_limit: Option<f64>,
    pub solver: SolverOptions,
    pub execution: Execution,
}

impl Default for SearchOptions {
    fn default() -> Self {
        Self {
            band_limit: Some(2.0),
            solver: SolverOptions::default(),
            execution: Execution::default(),
        }
    }
}

impl SearchOptions {
    pub fn with_execution(mut self, execution: Execution) -> Self {
        self.execution = execution;
        self
    }
}

/// Result of one numeric experiment, or one curve/table of them.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentResult {
    /// The full input record.
    pub params: Value,
    pub value: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<WeightDistribution>,
    /// Matching closed-form bound, when there is one.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub analytic_ref: Option<f64>,
    /// Abscissa of the minimum for curve outputs, refined by a parabola
    /// through the lowest sample and its neighbours.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub argmin: Option<f64>,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

impl ExperimentResult {
    pub(crate) fn single(params: Value, value: f64, witness: Option<WeightDistribution>) -> Self {
        Self {
            params,
            value,
            witness,
            analytic_ref: None,
            argmin: None,
            columns: Vec::new(),
            rows: Vec::new(),
        }
    }

    /// Values of one named column.
    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let idx = self.columns.iter().position(|c| c == name)?;
        Some(self.rows.iter().map(|r| r[idx]).collect())
    }
}
