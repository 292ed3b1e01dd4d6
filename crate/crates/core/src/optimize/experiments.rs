use rand::seq::index::sample;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use serde_json::json;

use super::width::min_width_numeric;
use super::{ExperimentResult, SearchOptions};
use crate::analytic::{exceptional_bound, f_nu0, f_nubar};
use crate::error::{Error, Result};
use crate::exec::map_indexed;
use crate::spectrum::{StateTimes, WidthKind, WidthSpec};

/// Closed-form portion bound matching `spec` for `count` equally spaced states.
fn portion_reference(count: u64, spec: &WidthSpec) -> Option<f64> {
    let m = spec.moment();
    match spec.kind() {
        WidthKind::DeviationAboutMin => f_nu0(m, count).ok().map(|b| b.value),
        WidthKind::DeviationAboutMean if count == 2 => exceptional_bound(m).ok().map(|b| b.value),
        WidthKind::DeviationAboutMean => f_nubar(m, count).ok().map(|b| b.value),
        WidthKind::Bandwidth => Some((count - 1) as f64 / count as f64),
        _ => None,
    }
}

/// Vertex of the parabola through the minimum sample and its two neighbours,
/// when they are equally spaced; otherwise the minimum sample itself.
fn refined_argmin(xs: &[f64], ys: &[f64]) -> Option<f64> {
    let i = ys
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.total_cmp(b.1))
        .map(|(i, _)| i)?;
    if i == 0 || i + 1 == xs.len() {
        return Some(xs[i]);
    }
    let h = xs[i] - xs[i - 1];
    if ((xs[i + 1] - xs[i]) - h).abs() > 1e-9 * h.abs() {
        return Some(xs[i]);
    }
    let curvature = ys[i - 1] - 2.0 * ys[i] + ys[i + 1];
    if curvature <= 0.0 {
        return Some(xs[i]);
    }
    Some(xs[i] + 0.5 * h * (ys[i - 1] - ys[i + 1]) / curvature)
}

/// Minimum `width x tau` for `count` states `tau` apart as the period `T` varies.
pub fn scan_period(
    count: usize,
    tau: u64,
    spec: &WidthSpec,
    periods: &[u64],
    opts: &SearchOptions,
) -> Result<ExperimentResult> {
    if count < 2 || tau == 0 {
        return Err(Error::Domain("need at least two states and tau >= 1".into()));
    }
    if periods.is_empty() {
        return Err(Error::Domain("no periods to scan".into()));
    }
    let shortest = (count as u64 - 1) * tau + 1;
    if let Some(t) = periods.iter().find(|&&t| t < shortest) {
        return Err(Error::Domain(format!(
            "period {t} cannot hold {count} states {tau} apart"
        )));
    }
    let results = map_indexed(opts.execution, periods.len(), |i| {
        let times = StateTimes::equally_spaced(periods[i], count, tau)?;
        min_width_numeric(&times, spec, opts)
    });
    let results = results.into_iter().collect::<Result<Vec<_>>>()?;

    let xs: Vec<f64> = periods.iter().map(|&t| t as f64 / tau as f64).collect();
    let ys: Vec<f64> = results.iter().map(|r| r.value).collect();
    let best = ys
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.total_cmp(b.1))
        .map(|(i, _)| i)
        .unwrap_or(0);
    Ok(ExperimentResult {
        params: json!({
            "experiment": "scan-period",
            "N": count,
            "tau": tau,
            "spec": spec,
            "T_values": periods,
        }),
        value: ys[best],
        witness: results[best].witness.clone(),
        analytic_ref: portion_reference(count as u64, spec),
        argmin: refined_argmin(&xs, &ys),
        columns: vec!["T_over_tau".into(), "min_width_times_tau".into()],
        rows: xs.iter().zip(&ys).map(|(x, y)| vec![*x, *y]).collect(),
    })
}

/// Minimum width for `count` equally spaced states that form only a portion
/// of an evolution with the much longer period `big_period`.
pub fn portion_min(
    count: usize,
    tau: u64,
    spec: &WidthSpec,
    big_period: u64,
    opts: &SearchOptions,
) -> Result<ExperimentResult> {
    if count < 2 || tau == 0 {
        return Err(Error::Domain("need at least two states and tau >= 1".into()));
    }
    let floor = 20 * count as u64 * tau;
    if big_period < floor {
        return Err(Error::Domain(format!(
            "portion period {big_period} must be at least 20 N tau = {floor}"
        )));
    }
    let times = StateTimes::equally_spaced(big_period, count, tau)?;
    let mut r = min_width_numeric(&times, spec, opts)?;
    r.params = json!({
        "experiment": "portion",
        "N": count,
        "tau": tau,
        "spec": spec,
        "T_big": big_period,
    });
    r.analytic_ref = portion_reference(count as u64, spec);
    Ok(r)
}

/// Consecutive separations of one random trial.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TrialSpacing {
    pub count: usize,
    pub distinct: usize,
    pub gaps: Vec<u64>,
}

/// Draws trial `index`: `N` in `2..=max_count`, `K` distinct lengths from
/// `1..=max_len` with `K <= min(max_distinct, N - 1)`, each length used at
/// least once, the remaining gaps drawn uniformly from those lengths, then
/// shuffled. The generator is a ChaCha8 stream selected by `index`, so a
/// trial depends only on `(seed, index)`.
pub fn stochastic_trial(seed: u64, index: u64, max_count: usize, max_distinct: usize, max_len: u64) -> TrialSpacing {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    let count = rng.random_range(2..=max_count);
    let k_cap = max_distinct.min(count - 1).min(max_len as usize).max(1);
    let distinct = rng.random_range(1..=k_cap);
    let lengths: Vec<u64> = sample(&mut rng, max_len as usize, distinct)
        .into_iter()
        .map(|i| i as u64 + 1)
        .collect();
    let mut gaps = lengths.clone();
    while gaps.len() < count - 1 {
        gaps.push(lengths[rng.random_range(0..lengths.len())]);
    }
    gaps.shuffle(&mut rng);
    TrialSpacing { count, distinct, gaps }
}

/// Period used for a portion with these gaps: a multiple of `N x span`
/// (so equal spacing is exactly representable) of at least `20 N tau`.
fn trial_period(gaps: &[u64]) -> u64 {
    let count = gaps.len() as u64 + 1;
    let span: u64 = gaps.iter().sum();
    count * span * 20u64.div_ceil(count - 1)
}

/// `[width x tau, width x tau / f_nu0(1, N), bandwidth x tau]` for states
/// separated by `gaps` inside a long evolution.
pub fn spacing_ratio(gaps: &[u64], opts: &SearchOptions) -> Result<[f64; 3]> {
    if gaps.is_empty() || gaps.contains(&0) {
        return Err(Error::Domain("gaps must be nonempty and positive".into()));
    }
    let times = StateTimes::from_gaps(trial_period(gaps), gaps)?;
    let count = times.count() as u64;
    let width = min_width_numeric(&times, &WidthSpec::about_min(1.0)?, opts)?.value;
    let band = min_width_numeric(&times, &WidthSpec::bandwidth(), opts)?.value;
    let equal = f_nu0(1.0, count)?.value;
    Ok([width, width / equal, band])
}

/// Random-spacing trials comparing the minimum first-moment width above the
/// lowest frequency with its equal-spacing value.
pub fn stochastic_equal_spacing(
    trials: usize,
    max_count: usize,
    max_distinct: usize,
    max_len: u64,
    seed: u64,
    opts: &SearchOptions,
) -> Result<ExperimentResult> {
    if trials == 0 || max_count < 2 || max_distinct == 0 || max_len == 0 {
        return Err(Error::Domain(
            "need trials >= 1, N_max >= 2, K_max >= 1, len_max >= 1".into(),
        ));
    }
    let rows = map_indexed(opts.execution, trials, |i| -> Result<Vec<f64>> {
        let trial = stochastic_trial(seed, i as u64, max_count, max_distinct, max_len);
        let [width, ratio, band] = spacing_ratio(&trial.gaps, opts)?;
        let span: u64 = trial.gaps.iter().sum();
        let unequal = trial.gaps.iter().any(|&g| g != trial.gaps[0]);
        Ok(vec![
            i as f64,
            trial.count as f64,
            trial.distinct as f64,
            span as f64,
            trial_period(&trial.gaps) as f64,
            width,
            ratio,
            band,
            if unequal { 1.0 } else { 0.0 },
        ])
    });
    let rows = rows.into_iter().collect::<Result<Vec<_>>>()?;
    let min_ratio = rows.iter().map(|r| r[6]).fold(f64::INFINITY, f64::min);
    Ok(ExperimentResult {
        params: json!({
            "experiment": "stochastic",
            "trials": trials,
            "N_max": max_count,
            "K_max": max_distinct,
            "len_max": max_len,
            "seed": seed,
        }),
        value: min_ratio,
        witness: None,
        analytic_ref: Some(1.0),
        argmin: None,
        columns: [
            "trial",
            "N",
            "K",
            "span",
            "T",
            "width_times_tau",
            "ratio",
            "bandwidth_times_tau",
            "unequal",
        ]
        .map(String::from)
        .to_vec(),
        rows,
    })
}

/// Portion minima about the mean versus `f_nubar(M, N)` on a grid of `(M, N)`.
/// An exception is a numeric minimum more than `1e-6` below the closed form.
pub fn threshold_scan(
    moments: &[f64],
    counts: &[usize],
    tau: u64,
    big_period: u64,
    opts: &SearchOptions,
) -> Result<ExperimentResult> {
    let pairs: Vec<(f64, usize)> = moments
        .iter()
        .flat_map(|&m| counts.iter().map(move |&n| (m, n)))
        .collect();
    let rows = map_indexed(opts.execution, pairs.len(), |i| -> Result<Vec<f64>> {
        let (m, n) = pairs[i];
        let numeric = portion_min(n, tau, &WidthSpec::about_mean(m)?, big_period, opts)?.value;
        let analytic = f_nubar(m, n as u64)?.value;
        let exception = numeric < analytic - 1e-6;
        Ok(vec![m, n as f64, numeric, analytic, if exception { 1.0 } else { 0.0 }])
    });
    let rows = rows.into_iter().collect::<Result<Vec<_>>>()?;
    let exceptions = rows.iter().filter(|r| r[4] == 1.0).count();
    Ok(ExperimentResult {
        params: json!({
            "experiment": "threshold",
            "M_values": moments,
            "N_values": counts,
            "tau": tau,
            "T_big": big_period,
        }),
        value: exceptions as f64,
        witness: None,
        analytic_ref: None,
        argmin: None,
        columns: ["M", "N", "numeric", "f_nubar", "exception"].map(String::from).to_vec(),
        rows,
    })
}
