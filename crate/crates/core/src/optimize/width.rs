use std::cell::RefCell;

use serde_json::json;

use super::search::golden_section;
use super::{ExperimentResult, SearchOptions};
use crate::error::{Error, Result};
use crate::exec::map_indexed;
use crate::lp::{solve_with, LpStatus, Sense};
use crate::orthogonality::{
    build_system, mean_constraint_row, moment_objective, range_objective, ConstraintSystem, RowLabel,
};
use crate::spectrum::{StateTimes, WeightDistribution, WidthKind, WidthSpec};

/// Highest grid index offered to the LP for these times.
pub fn column_limit(times: &StateTimes, opts: &SearchOptions) -> u64 {
    let full = times.period() - 1;
    match opts.band_limit {
        Some(band) => {
            let cap = (band * times.period() as f64 / times.min_gap() as f64).ceil() as u64;
            cap.clamp((times.count() - 1) as u64, full)
        }
        None => full,
    }
}

/// Runs `f` on the capped grid, falling back to the full grid when the cap
/// makes the system infeasible.
fn on_grid<R>(times: &StateTimes, opts: &SearchOptions, f: impl Fn(&ConstraintSystem) -> Result<R>) -> Result<R> {
    let cap = column_limit(times, opts);
    let full = times.period() - 1;
    match f(&build_system(times, cap)?) {
        Err(Error::Infeasible(_)) if cap < full => f(&build_system(times, full)?),
        other => other,
    }
}

/// `(sum p |nu - center|^M, p)` minimized over the system, or `None` if infeasible.
fn moment_lp(
    sys: &ConstraintSystem,
    center: f64,
    moment: f64,
    opts: &SearchOptions,
) -> Result<Option<(f64, Vec<f64>)>> {
    let lp = sys.to_lp(moment_objective(sys.grid(), center, moment), Sense::Minimize)?;
    let sol = solve_with(&lp, &opts.solver);
    match sol.status {
        LpStatus::Infeasible => Ok(None),
        _ => {
            let sol = sol.into_result()?;
            Ok(Some((sol.objective_value.max(0.0), sol.x)))
        }
    }
}

fn infeasible() -> Error {
    Error::Infeasible("no distribution satisfies the orthogonality constraints".into())
}

/// Minimum of a width measure over all distributions on the period's grid
/// that make the states at `times` mutually orthogonal, reported as
/// `width x tau` with `tau` the average separation.
///
/// Deviations about the lowest frequency need a single LP: by translation
/// along the grid the optimum has its support starting at index zero. The
/// mean-centred deviation fixes the mean with an extra equality row and
/// searches the mean over a coarse grid of spacing `1/(4T)`, then refines the
/// best point by golden section to `1/(100T)`. Bandwidth is the narrowest
/// window `[0, w/T]` whose columns admit a feasible distribution.
pub fn min_width_numeric(times: &StateTimes, spec: &WidthSpec, opts: &SearchOptions) -> Result<ExperimentResult> {
    let tau = times.average_separation();
    let params = json!({
        "experiment": "minimize",
        "T": times.period(),
        "times": times.times(),
        "spec": spec,
        "tau": tau,
    });
    let moment = spec.moment();
    let (width, dense, sys) = match spec.kind() {
        WidthKind::DeviationAboutMin => on_grid(times, opts, |sys| {
            let (obj, x) = moment_lp(sys, 0.0, moment, opts)?.ok_or_else(infeasible)?;
            Ok((2.0 * obj.powf(1.0 / moment), x, sys.clone()))
        })?,
        WidthKind::DeviationAboutFixed(center) => on_grid(times, opts, |sys| {
            let (obj, x) = moment_lp(sys, center, moment, opts)?.ok_or_else(infeasible)?;
            Ok((2.0 * obj.powf(1.0 / moment), x, sys.clone()))
        })?,
        WidthKind::DeviationAboutMean => on_grid(times, opts, |sys| {
            let (obj, x) = mean_search(sys, moment, opts)?;
            Ok((2.0 * obj.powf(1.0 / moment), x, sys.clone()))
        })?,
        WidthKind::Bandwidth => {
            let (w, x, sys) = narrowest_window(times, opts)?;
            (w as f64 / times.period() as f64, x, sys)
        }
        WidthKind::ProbabilityRange(_) => return Err(Error::UnsupportedMeasure("probability range")),
    };
    let witness = WeightDistribution::from_dense(sys.grid(), &dense)?;
    Ok(ExperimentResult::single(params, width * tau, Some(witness)))
}

fn mean_search(sys: &ConstraintSystem, moment: f64, opts: &SearchOptions) -> Result<(f64, Vec<f64>)> {
    let grid = sys.grid();
    let period = grid.period() as f64;
    let top = grid.n_max() as f64 / period;
    let at = |alpha: f64| -> Result<Option<(f64, Vec<f64>)>> {
        let (row, rhs) = mean_constraint_row(grid, alpha);
        let sys = sys.clone().with_row(RowLabel::Mean, row, rhs)?;
        moment_lp(&sys, alpha, moment, opts)
    };

    let coarse = 4 * grid.n_max() as usize + 1;
    let evals = map_indexed(opts.execution, coarse, |j| at(j as f64 / (4.0 * period)));
    let mut best: Option<(f64, f64, Vec<f64>)> = None;
    for (j, e) in evals.into_iter().enumerate() {
        if let Some((obj, x)) = e? {
            if best.as_ref().is_none_or(|b| obj < b.1) {
                best = Some((j as f64 / (4.0 * period), obj, x));
            }
        }
    }
    let (alpha0, _, _) = best.as_ref().ok_or_else(infeasible)?;
    let lo = (alpha0 - 1.0 / (4.0 * period)).max(0.0);
    let hi = (alpha0 + 1.0 / (4.0 * period)).min(top);

    let best = RefCell::new(best);
    let failure = RefCell::new(None);
    golden_section(
        |alpha| match at(alpha) {
            Ok(Some((obj, x))) => {
                let mut b = best.borrow_mut();
                if b.as_ref().is_none_or(|b| obj < b.1) {
                    *b = Some((alpha, obj, x));
                }
                obj
            }
            Ok(None) => f64::INFINITY,
            Err(e) => {
                failure.borrow_mut().get_or_insert(e);
                f64::INFINITY
            }
        },
        lo,
        hi,
        1.0 / (100.0 * period),
        200,
    );
    if let Some(e) = failure.into_inner() {
        return Err(e);
    }
    let (_, obj, x) = best.into_inner().ok_or_else(infeasible)?;
    Ok((obj, x))
}

/// Smallest `w` such that columns `0..=w` admit a feasible distribution.
/// Any feasible window translates down to start at zero, and feasibility is
/// monotone in `w`; the full period is always feasible (uniform weights).
fn narrowest_window(times: &StateTimes, opts: &SearchOptions) -> Result<(u64, Vec<f64>, ConstraintSystem)> {
    let feasible = |w: u64| -> Result<Option<(Vec<f64>, ConstraintSystem)>> {
        let sys = build_system(times, w)?;
        let lp = sys.to_lp(vec![0.0; sys.grid().len()], Sense::Minimize)?;
        let sol = solve_with(&lp, &opts.solver);
        match sol.status {
            LpStatus::Infeasible => Ok(None),
            _ => Ok(Some((sol.into_result()?.x, sys))),
        }
    };
    let full = times.period() - 1;
    let mut lo = (times.count() - 1) as u64;
    if lo > full {
        return Err(infeasible());
    }
    // probe the usual cap first to keep the bracket small
    let mut hi = column_limit(times, opts).max(lo);
    let mut found = feasible(hi)?;
    if found.is_none() {
        hi = full;
        found = feasible(hi)?;
    }
    let mut found = found.ok_or_else(infeasible)?;
    if let Some(f) = feasible(lo)? {
        return Ok((lo, f.0, f.1));
    }
    // invariant: lo infeasible, hi feasible
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        match feasible(mid)? {
            Some(f) => {
                hi = mid;
                found = f;
            }
            None => lo = mid,
        }
    }
    Ok((hi, found.0, found.1))
}

/// Largest probability that fits in a frequency window of the given width
/// (cycles per step), over all grid-aligned window placements.
pub fn max_probability(times: &StateTimes, window_width: f64, opts: &SearchOptions) -> Result<ExperimentResult> {
    if !(window_width >= 0.0 && window_width.is_finite()) {
        return Err(Error::Domain(format!("window width {window_width} must be >= 0")));
    }
    let tau = times.average_separation();
    let params = json!({
        "experiment": "maxq",
        "T": times.period(),
        "times": times.times(),
        "window_width": window_width,
        "tau": tau,
    });
    let (q, x, sys) = on_grid(times, opts, |sys| {
        let grid = sys.grid();
        let placements = grid.n_max() as usize + 1;
        let evals = map_indexed(opts.execution, placements, |k| -> Result<Option<(f64, Vec<f64>)>> {
            let lo = grid.frequency(k as u64);
            let lp = sys.to_lp(range_objective(grid, lo, lo + window_width), Sense::Maximize)?;
            let sol = solve_with(&lp, &opts.solver);
            match sol.status {
                LpStatus::Infeasible => Ok(None),
                _ => {
                    let sol = sol.into_result()?;
                    Ok(Some((sol.objective_value, sol.x)))
                }
            }
        });
        let mut best: Option<(f64, Vec<f64>)> = None;
        for e in evals {
            if let Some((q, x)) = e? {
                if best.as_ref().is_none_or(|b| q > b.0) {
                    best = Some((q, x));
                }
            }
        }
        let (q, x) = best.ok_or_else(infeasible)?;
        Ok((q.min(1.0), x, sys.clone()))
    })?;
    let witness = WeightDistribution::from_dense(sys.grid(), &x)?;
    Ok(ExperimentResult::single(params, q, Some(witness)))
}
