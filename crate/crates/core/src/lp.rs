//! Dense two-phase primal simplex for `A x = b, x >= 0`.
//!
//! The orthogonality systems this crate builds have few rows (tens) and up to
//! a few thousand columns, so a full dense tableau with full pricing is
//! adequate. Pricing is Dantzig's most-negative reduced cost; after
//! [`SolverOptions::bland_after`] consecutive degenerate pivots the solver
//! switches to Bland's smallest-index rule until the objective moves again.
//!
//! Orthogonality rows all have zero right-hand side, which makes nearly every
//! vertex degenerate. Pivoting therefore runs on a right-hand side shifted by
//! distinct amounts of order [`SolverOptions::perturbation`], and the ratio
//! test is Harris's two-pass rule; the reported solution and the phase-one
//! infeasibility are evaluated on the unshifted right-hand side.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Sense {
    Minimize,
    Maximize,
}

/// `optimize c.x  s.t.  A x = b, x >= 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearProgram {
    objective: Vec<f64>,
    /// Row-major, `rows x objective.len()`.
    matrix: Vec<f64>,
    rhs: Vec<f64>,
    sense: Sense,
}

impl LinearProgram {
    pub fn new(objective: Vec<f64>, rows: Vec<Vec<f64>>, rhs: Vec<f64>, sense: Sense) -> Result<Self> {
        let n = objective.len();
        if n == 0 {
            return Err(Error::MalformedLp("no variables".into()));
        }
        if rows.is_empty() {
            return Err(Error::MalformedLp("no constraint rows".into()));
        }
        if rows.len() != rhs.len() {
            return Err(Error::MalformedLp(format!(
                "{} rows but {} right-hand sides",
                rows.len(),
                rhs.len()
            )));
        }
        let mut matrix = Vec::with_capacity(rows.len() * n);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != n {
                return Err(Error::MalformedLp(format!(
                    "row {i} has {} entries, expected {n}",
                    row.len()
                )));
            }
            matrix.extend_from_slice(row);
        }
        let finite = |v: &[f64]| v.iter().all(|x| x.is_finite());
        if !finite(&objective) || !finite(&matrix) || !finite(&rhs) {
            return Err(Error::MalformedLp("non-finite entry".into()));
        }
        Ok(Self {
            objective,
            matrix,
            rhs,
            sense,
        })
    }

    pub fn num_vars(&self) -> usize {
        self.objective.len()
    }

    pub fn num_rows(&self) -> usize {
        self.rhs.len()
    }

    pub fn objective(&self) -> &[f64] {
        &self.objective
    }

    pub fn rhs(&self) -> &[f64] {
        &self.rhs
    }

    pub fn sense(&self) -> Sense {
        self.sense
    }

    pub fn row(&self, i: usize) -> &[f64] {
        let n = self.num_vars();
        &self.matrix[i * n..(i + 1) * n]
    }

    /// `max_i |(A x - b)_i|`.
    pub fn residual(&self, x: &[f64]) -> f64 {
        (0..self.num_rows())
            .map(|i| {
                let ax: f64 = self.row(i).iter().zip(x).map(|(a, x)| a * x).sum();
                (ax - self.rhs[i]).abs()
            })
            .fold(0.0, f64::max)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LpStatus {
    Optimal,
    Infeasible,
    Unbounded,
    IterationLimit,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LpSolution {
    pub status: LpStatus,
    pub objective_value: f64,
    pub x: Vec<f64>,
    pub iterations: usize,
    /// Basic variable per retained row (redundant rows are dropped).
    pub basis: Vec<usize>,
}

impl LpSolution {
    /// Converts a non-optimal status into the matching error.
    pub fn into_result(self) -> Result<Self> {
        match self.status {
            LpStatus::Optimal => Ok(self),
            LpStatus::Infeasible => Err(Error::Infeasible("orthogonality system has no solution".into())),
            LpStatus::Unbounded => Err(Error::Unbounded),
            LpStatus::IterationLimit => Err(Error::IterationLimit(self.iterations)),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverOptions {
    /// Feasibility and optimality tolerance.
    pub tol: f64,
    /// Smallest admissible pivot magnitude.
    pub pivot_tol: f64,
    pub max_iters: usize,
    /// Consecutive degenerate pivots before switching to Bland's rule.
    pub bland_after: usize,
    /// Scale of the distinct shifts added to every right-hand side; the
    /// reported solution uses the unshifted values.
    pub perturbation: f64,
}

impl Default for SolverOptions {
    fn default() -> Self {
        Self {
            tol: 1e-9,
            pivot_tol: 1e-10,
            max_iters: 50_000,
            bland_after: 50,
            perturbation: 1e-10,
        }
    }
}

/// Solves with default pivot settings and the given tolerance and pivot budget.
pub fn solve(lp: &LinearProgram, tol: f64, max_iters: usize) -> LpSolution {
    solve_with(
        lp,
        &SolverOptions {
            tol,
            max_iters,
            ..SolverOptions::default()
        },
    )
}

pub fn solve_with(lp: &LinearProgram, opts: &SolverOptions) -> LpSolution {
    Tableau::phase_one(lp, opts.perturbation).run(lp, opts)
}

struct Tableau {
    rows: usize,
    /// Columns excluding rhs.
    cols: usize,
    /// Row-major `rows x (cols + 2)`: the perturbed rhs that drives pivoting,
    /// then the original rhs carried along for the reported solution.
    data: Vec<f64>,
    /// Reduced costs of the active objective, last entry is `-z`.
    cost: Vec<f64>,
    /// Phase-two reduced costs, carried through phase one.
    cost2: Vec<f64>,
    basis: Vec<usize>,
    iterations: usize,
    degenerate_run: usize,
}

enum Step {
    Optimal,
    Unbounded,
    Pivoted,
}

impl Tableau {
    fn width(&self) -> usize {
        self.cols + 2
    }

    fn at(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.width() + j]
    }

    fn rhs(&self, i: usize) -> f64 {
        self.at(i, self.cols)
    }

    fn original_rhs(&self, i: usize) -> f64 {
        self.at(i, self.cols + 1)
    }

    /// Original columns, then one artificial per row; phase-one costs.
    fn phase_one(lp: &LinearProgram, perturbation: f64) -> Self {
        let m = lp.num_rows();
        let n = lp.num_vars();
        let cols = n + m;
        let w = cols + 2;
        let mut data = vec![0.0; m * w];
        for i in 0..m {
            let sign = if lp.rhs[i] < 0.0 { -1.0 } else { 1.0 };
            let row = &mut data[i * w..(i + 1) * w];
            for (dst, a) in row[..n].iter_mut().zip(lp.row(i)) {
                *dst = sign * a;
            }
            row[n + i] = 1.0;
            // distinct tiny shifts break the massive degeneracy of zero right-hand sides
            let shift = perturbation * (1.0 + (i as f64 * 0.618_033_988_749_894_9).fract());
            row[cols] = sign * lp.rhs[i] + shift;
            row[cols + 1] = sign * lp.rhs[i];
        }

        let mut cost = vec![0.0; w];
        for i in 0..m {
            let row = &data[i * w..(i + 1) * w];
            for j in 0..n {
                cost[j] -= row[j];
            }
            cost[cols] -= row[cols];
            cost[cols + 1] -= row[cols + 1];
        }

        // phase-two costs scaled to unit max-abs so the optimality tolerance is relative
        let scale = lp.objective.iter().fold(0.0f64, |s, c| s.max(c.abs()));
        let scale = if scale > 0.0 { scale } else { 1.0 };
        let sign = match lp.sense {
            Sense::Minimize => 1.0,
            Sense::Maximize => -1.0,
        };
        let mut cost2 = vec![0.0; w];
        for (dst, c) in cost2.iter_mut().zip(&lp.objective) {
            *dst = sign * c / scale;
        }

        Self {
            rows: m,
            cols,
            data,
            cost,
            cost2,
            basis: (n..n + m).collect(),
            iterations: 0,
            degenerate_run: 0,
        }
    }

    fn run(mut self, lp: &LinearProgram, opts: &SolverOptions) -> LpSolution {
        let n = lp.num_vars();
        let bnorm = lp.rhs.iter().fold(0.0f64, |s, b| s.max(b.abs()));

        // phase one: artificials may enter and leave
        loop {
            match self.step(self.cols, opts, true) {
                Step::Optimal => break,
                Step::Unbounded => break, // cannot happen: phase one is bounded below by zero
                Step::Pivoted => {
                    if self.iterations > opts.max_iters {
                        return self.finish(lp, LpStatus::IterationLimit);
                    }
                }
            }
        }
        // judged on the unshifted right-hand side
        let infeasibility = -self.cost[self.cols + 1];
        if infeasibility > opts.tol * (1.0 + bnorm) {
            return self.finish(lp, LpStatus::Infeasible);
        }

        self.drive_out_artificials(n, opts);
        self.drop_artificial_columns(n);
        std::mem::swap(&mut self.cost, &mut self.cost2);
        self.degenerate_run = 0;

        loop {
            match self.step(self.cols, opts, false) {
                Step::Optimal => return self.finish(lp, LpStatus::Optimal),
                Step::Unbounded => return self.finish(lp, LpStatus::Unbounded),
                Step::Pivoted => {
                    if self.iterations > opts.max_iters {
                        return self.finish(lp, LpStatus::IterationLimit);
                    }
                }
            }
        }
    }

    fn step(&mut self, ncols: usize, opts: &SolverOptions, phase_one: bool) -> Step {
        let bland = self.degenerate_run >= opts.bland_after;
        let entering = if bland {
            (0..ncols).find(|&j| self.cost[j] < -opts.tol)
        } else {
            let mut best = None;
            let mut best_d = -opts.tol;
            for j in 0..ncols {
                if self.cost[j] < best_d {
                    best_d = self.cost[j];
                    best = Some(j);
                }
            }
            best
        };
        let Some(q) = entering else {
            return Step::Optimal;
        };

        // Harris two-pass ratio test: bound the step with rhs relaxed by the
        // feasibility tolerance, then take the largest pivot within that bound
        let mut bound = f64::INFINITY;
        for i in 0..self.rows {
            let a = self.at(i, q);
            if a > opts.pivot_tol {
                bound = bound.min((self.rhs(i).max(0.0) + opts.tol) / a);
            }
        }
        let mut leave: Option<(usize, f64)> = None;
        for i in 0..self.rows {
            let a = self.at(i, q);
            if a <= opts.pivot_tol {
                continue;
            }
            let ratio = self.rhs(i).max(0.0) / a;
            if ratio > bound {
                continue;
            }
            let better = match leave {
                None => true,
                Some((r, _)) if bland => self.basis[i] < self.basis[r],
                Some((r, _)) => a > self.at(r, q),
            };
            if better {
                leave = Some((i, ratio));
            }
        }
        let Some((r, ratio)) = leave else {
            return Step::Unbounded;
        };

        if ratio <= opts.tol {
            self.degenerate_run += 1;
        } else {
            self.degenerate_run = 0;
        }
        self.pivot(r, q, phase_one);
        Step::Pivoted
    }

    fn pivot(&mut self, r: usize, q: usize, update_both: bool) {
        let w = self.width();
        let inv = 1.0 / self.at(r, q);
        let (before, rest) = self.data.split_at_mut(r * w);
        let (prow, after) = rest.split_at_mut(w);
        for v in prow.iter_mut() {
            *v *= inv;
        }
        prow[q] = 1.0;
        let eliminate = |row: &mut [f64]| {
            let f = row[q];
            if f != 0.0 {
                for (v, p) in row.iter_mut().zip(prow.iter()) {
                    *v -= f * p;
                }
                row[q] = 0.0;
            }
        };
        before.chunks_exact_mut(w).for_each(eliminate);
        after.chunks_exact_mut(w).for_each(eliminate);
        eliminate(&mut self.cost);
        if update_both {
            eliminate(&mut self.cost2);
        }
        self.basis[r] = q;
        self.iterations += 1;
    }

    /// Pivots zero-level artificials out of the basis; rows where that is
    /// impossible are linearly dependent and are removed.
    fn drive_out_artificials(&mut self, n: usize, opts: &SolverOptions) {
        let mut r = 0;
        while r < self.rows {
            if self.basis[r] < n {
                r += 1;
                continue;
            }
            let mut best = None;
            let mut best_a = opts.pivot_tol;
            for j in 0..n {
                let a = self.at(r, j).abs();
                if a > best_a {
                    best_a = a;
                    best = Some(j);
                }
            }
            match best {
                Some(q) => {
                    self.pivot(r, q, true);
                    r += 1;
                }
                None => {
                    let w = self.width();
                    self.data.drain(r * w..(r + 1) * w);
                    self.basis.remove(r);
                    self.rows -= 1;
                }
            }
        }
    }

    fn drop_artificial_columns(&mut self, n: usize) {
        let w = self.width();
        let mut data = Vec::with_capacity(self.rows * (n + 2));
        for i in 0..self.rows {
            let row = &self.data[i * w..(i + 1) * w];
            data.extend_from_slice(&row[..n]);
            data.extend_from_slice(&row[w - 2..]);
        }
        let shrink = |c: &Vec<f64>| {
            let mut out = c[..n].to_vec();
            out.extend_from_slice(&c[w - 2..]);
            out
        };
        self.cost = shrink(&self.cost);
        self.cost2 = shrink(&self.cost2);
        self.data = data;
        self.cols = n;
    }

    fn finish(self, lp: &LinearProgram, status: LpStatus) -> LpSolution {
        let n = lp.num_vars();
        let mut x = vec![0.0; n];
        for (i, &b) in self.basis.iter().enumerate() {
            if b < n {
                x[b] = self.original_rhs(i).max(0.0);
            }
        }
        let objective_value = lp.objective.iter().zip(&x).map(|(c, x)| c * x).sum();
        LpSolution {
            status,
            objective_value,
            x,
            iterations: self.iterations,
            basis: self.basis,
        }
    }
}
