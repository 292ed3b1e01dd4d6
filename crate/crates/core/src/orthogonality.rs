//! Linear constraint systems on the probabilities `p_n = |a_n|^2`.
//!
//! Orthogonality of the states at times `t_m`, `t_k` means
//! `sum_n p_n exp(2 pi i n (t_m - t_k) / T) = delta_mk`. Each distinct nonzero
//! separation `s` contributes a cosine row and a sine row with right-hand
//! side zero; normalization adds a row of ones.
//!
//! Shifting every index up by one multiplies each separation sum by the unit
//! phase `exp(2 pi i s / T)`, so zero constraints stay zero. Any feasible
//! distribution can therefore be translated along the grid, and the lowest
//! grid frequency can be taken as zero without loss of generality.

use std::f64::consts::TAU;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lp::{LinearProgram, Sense};
use crate::spectrum::{FrequencyGrid, StateTimes, WeightDistribution};

/// Rows with no entry above this magnitude carry no constraint.
const ZERO_ROW: f64 = 1e-14;
/// Rows equal up to sign within this tolerance are duplicates.
const DUPLICATE_ROW: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "row", content = "separation", rename_all = "snake_case")]
pub enum RowLabel {
    Normalization,
    Cos(u64),
    Sin(u64),
    Mean,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConstraintRow {
    pub label: RowLabel,
    pub coeffs: Vec<f64>,
    pub rhs: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConstraintSystem {
    grid: FrequencyGrid,
    rows: Vec<ConstraintRow>,
    candidate_rows: usize,
}

impl ConstraintSystem {
    pub fn grid(&self) -> FrequencyGrid {
        self.grid
    }

    pub fn rows(&self) -> &[ConstraintRow] {
        &self.rows
    }

    /// Rows before zero and duplicate rows were pruned: `1 + 2 |separations|`.
    pub fn candidate_rows(&self) -> usize {
        self.candidate_rows
    }

    /// Appends an extra equality row (e.g. a fixed mean).
    pub fn with_row(mut self, label: RowLabel, coeffs: Vec<f64>, rhs: f64) -> Result<Self> {
        if coeffs.len() != self.grid.len() {
            return Err(Error::MalformedLp(format!(
                "row has {} entries, grid has {}",
                coeffs.len(),
                self.grid.len()
            )));
        }
        self.rows.push(ConstraintRow { label, coeffs, rhs });
        Ok(self)
    }

    pub fn to_lp(&self, objective: Vec<f64>, sense: Sense) -> Result<LinearProgram> {
        LinearProgram::new(
            objective,
            self.rows.iter().map(|r| r.coeffs.clone()).collect(),
            self.rows.iter().map(|r| r.rhs).collect(),
            sense,
        )
    }

    /// `max |row . p - rhs|` over all rows.
    pub fn residual(&self, dense: &[f64]) -> f64 {
        self.rows
            .iter()
            .map(|r| {
                let lhs: f64 = r.coeffs.iter().zip(dense).map(|(a, p)| a * p).sum();
                (lhs - r.rhs).abs()
            })
            .fold(0.0, f64::max)
    }
}

/// `(cos, sin)` of `2 pi phase / period`, exact at multiples of a quarter turn.
fn unit_phase(phase: u64, period: u64) -> (f64, f64) {
    let p = phase as u128;
    let t = period as u128;
    if (4 * p).is_multiple_of(t) {
        match (4 * p / t) % 4 {
            0 => (1.0, 0.0),
            1 => (0.0, 1.0),
            2 => (-1.0, 0.0),
            _ => (0.0, -1.0),
        }
    } else {
        let angle = TAU * (phase as f64 / period as f64);
        (angle.cos(), angle.sin())
    }
}

fn phase_index(n: u64, s: u64, period: u64) -> u64 {
    ((n as u128 * s as u128) % period as u128) as u64
}

/// Orthogonality constraints for `times` on the grid `0..=n_max` of the
/// times' period.
pub fn build_system(times: &StateTimes, n_max: u64) -> Result<ConstraintSystem> {
    let period = times.period();
    let grid = FrequencyGrid::new(period, n_max).map_err(|_| {
        Error::InvalidGrid(format!(
            "n_max = {n_max} >= T = {period}: extra columns repeat phases and cannot affect orthogonality"
        ))
    })?;
    let seps = times.separations();
    let len = grid.len();

    let mut rows = vec![ConstraintRow {
        label: RowLabel::Normalization,
        coeffs: vec![1.0; len],
        rhs: 1.0,
    }];
    for &s in &seps {
        let mut cos_row = Vec::with_capacity(len);
        let mut sin_row = Vec::with_capacity(len);
        for n in 0..=n_max {
            let (c, si) = unit_phase(phase_index(n, s, period), period);
            cos_row.push(c);
            sin_row.push(si);
        }
        for (label, coeffs) in [(RowLabel::Cos(s), cos_row), (RowLabel::Sin(s), sin_row)] {
            if coeffs.iter().all(|v| v.abs() <= ZERO_ROW) {
                continue;
            }
            let duplicate = rows.iter().any(|r| r.rhs == 0.0 && same_up_to_sign(&r.coeffs, &coeffs));
            if !duplicate {
                rows.push(ConstraintRow {
                    label,
                    coeffs,
                    rhs: 0.0,
                });
            }
        }
    }
    Ok(ConstraintSystem {
        grid,
        rows,
        candidate_rows: 1 + 2 * seps.len(),
    })
}

fn same_up_to_sign(a: &[f64], b: &[f64]) -> bool {
    let same = a.iter().zip(b).all(|(x, y)| (x - y).abs() <= DUPLICATE_ROW);
    same || a.iter().zip(b).all(|(x, y)| (x + y).abs() <= DUPLICATE_ROW)
}

/// `c_n = |n/T - center|^M`.
pub fn moment_objective(grid: FrequencyGrid, center: f64, moment: f64) -> Vec<f64> {
    (0..=grid.n_max())
        .map(|n| (grid.frequency(n) - center).abs().powf(moment))
        .collect()
}

/// Indicator of grid frequencies inside `[lo, hi]`, inclusive with `1e-12` slack.
pub fn range_objective(grid: FrequencyGrid, lo: f64, hi: f64) -> Vec<f64> {
    (0..=grid.n_max())
        .map(|n| {
            let f = grid.frequency(n);
            if f >= lo - 1e-12 && f <= hi + 1e-12 {
                1.0
            } else {
                0.0
            }
        })
        .collect()
}

/// Row fixing the mean frequency: entries `n/T`, right-hand side `center`.
pub fn mean_constraint_row(grid: FrequencyGrid, center: f64) -> (Vec<f64>, f64) {
    ((0..=grid.n_max()).map(|n| grid.frequency(n)).collect(), center)
}

/// Largest deviation of `<psi(t_m)|psi(t_k)>` from `delta_mk`, summed
/// directly in complex arithmetic.
pub fn orthogonality_defect(times: &StateTimes, dist: &WeightDistribution) -> f64 {
    let period = dist.grid().period();
    let mut worst: f64 = 0.0;
    for &a in times.times() {
        for &b in times.times() {
            let s = (a as i128 - b as i128).rem_euclid(period as i128) as u64;
            let sum: Complex64 = dist
                .weights()
                .iter()
                .map(|&(n, p)| {
                    let (c, si) = unit_phase(phase_index(n, s, period), period);
                    Complex64::new(c, si) * p
                })
                .sum();
            let target = if a == b { 1.0 } else { 0.0 };
            worst = worst.max((sum - target).norm());
        }
    }
    worst
}
