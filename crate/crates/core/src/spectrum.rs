//! Periodic spectra, probability weights on them, and frequency-width measures.
//!
//! A periodic evolution with integer period `T` (in time steps) can only
//! contain frequencies `n / T` cycles per step. Only differences between
//! frequencies matter for orthogonality and for every width measure here, so
//! the lowest frequency is pinned to zero and a grid is fully described by
//! `T` and the highest index `n_max`.
//!
//! Property 5 of a "natural" width (same order of magnitude as bandwidth on a
//! uniform distribution) is qualitative and is not checked anywhere.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Weights at or below this are treated as absent for support queries.
pub const SUPPORT_EPS: f64 = 1e-12;

/// Allowed deviation of the total probability from one.
pub const NORMALIZATION_TOL: f64 = 1e-12;

/// Frequencies `n / T` for `n = 0..=n_max`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct FrequencyGrid {
    period: u64,
    n_max: u64,
}

impl FrequencyGrid {
    /// Grid with `n_max < period`; larger grids only repeat phases at integer times.
    pub fn new(period: u64, n_max: u64) -> Result<Self> {
        if n_max >= period {
            return Err(Error::InvalidGrid(format!(
                "n_max = {n_max} must be below the period T = {period}"
            )));
        }
        Self::extended(period, n_max)
    }

    /// Every distinct phase of the period: `n_max = T - 1`.
    pub fn full(period: u64) -> Result<Self> {
        if period == 0 {
            return Err(Error::InvalidGrid("period must be at least 1".into()));
        }
        Self::new(period, period - 1)
    }

    /// Grid that may extend past one period (used for non-integer period ratios).
    pub fn extended(period: u64, n_max: u64) -> Result<Self> {
        if period == 0 {
            return Err(Error::InvalidGrid("period must be at least 1".into()));
        }
        Ok(Self { period, n_max })
    }

    pub fn period(&self) -> u64 {
        self.period
    }

    pub fn n_max(&self) -> u64 {
        self.n_max
    }

    /// Number of grid frequencies.
    pub fn len(&self) -> usize {
        self.n_max as usize + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// `n / T` in cycles per time step.
    pub fn frequency(&self, n: u64) -> f64 {
        n as f64 / self.period as f64
    }
}

/// Probabilities `|a_n|^2` on grid indices.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "DistributionJson", into = "DistributionJson")]
pub struct WeightDistribution {
    grid: FrequencyGrid,
    weights: Vec<(u64, f64)>,
}

#[derive(Serialize, Deserialize)]
struct DistributionJson {
    #[serde(rename = "T")]
    period: u64,
    weights: Vec<(u64, f64)>,
}

impl From<WeightDistribution> for DistributionJson {
    fn from(d: WeightDistribution) -> Self {
        Self {
            period: d.grid.period,
            weights: d.weights,
        }
    }
}

impl TryFrom<DistributionJson> for WeightDistribution {
    type Error = Error;

    fn try_from(j: DistributionJson) -> Result<Self> {
        let top = j.weights.iter().map(|&(n, _)| n).max().unwrap_or(0);
        let n_max = top.max(j.period.saturating_sub(1));
        let grid = FrequencyGrid::extended(j.period, n_max)?;
        WeightDistribution::new(grid, j.weights)
    }
}

impl WeightDistribution {
    pub fn new(grid: FrequencyGrid, weights: Vec<(u64, f64)>) -> Result<Self> {
        if weights.is_empty() {
            return Err(Error::InvalidDistribution("no weights".into()));
        }
        let mut total = 0.0;
        for (i, &(n, p)) in weights.iter().enumerate() {
            if !p.is_finite() || p < 0.0 {
                return Err(Error::InvalidDistribution(format!(
                    "weight {p} at index {n} is not a probability"
                )));
            }
            if n > grid.n_max {
                return Err(Error::OutOfRange(format!(
                    "index {n} exceeds grid n_max = {}",
                    grid.n_max
                )));
            }
            if i > 0 && weights[i - 1].0 >= n {
                return Err(Error::InvalidDistribution("indices must be strictly increasing".into()));
            }
            total += p;
        }
        if (total - 1.0).abs() > NORMALIZATION_TOL {
            return Err(Error::InvalidDistribution(format!("weights sum to {total}, not 1")));
        }
        Ok(Self { grid, weights })
    }

    /// Builds a distribution from a dense weight vector over `0..=n_max`,
    /// as returned by the LP solver. Round-off negatives are clamped, exact
    /// zeros dropped, and the rest renormalized.
    pub fn from_dense(grid: FrequencyGrid, dense: &[f64]) -> Result<Self> {
        if dense.len() != grid.len() {
            return Err(Error::InvalidDistribution(format!(
                "dense vector has {} entries, grid has {}",
                dense.len(),
                grid.len()
            )));
        }
        if let Some(bad) = dense.iter().find(|p| !p.is_finite() || **p < -1e-9) {
            return Err(Error::InvalidDistribution(format!(
                "dense weight {bad} is not a probability"
            )));
        }
        let total: f64 = dense.iter().map(|p| p.max(0.0)).sum();
        if total <= 0.0 {
            return Err(Error::InvalidDistribution("all weights vanish".into()));
        }
        let weights = dense
            .iter()
            .enumerate()
            .filter(|(_, p)| **p > 0.0)
            .map(|(n, p)| (n as u64, p / total))
            .collect();
        Self::new(grid, weights)
    }

    pub fn grid(&self) -> FrequencyGrid {
        self.grid
    }

    pub fn weights(&self) -> &[(u64, f64)] {
        &self.weights
    }

    /// Dense weights over `0..=n_max`.
    pub fn to_dense(&self) -> Vec<f64> {
        let mut dense = vec![0.0; self.grid.len()];
        for &(n, p) in &self.weights {
            dense[n as usize] = p;
        }
        dense
    }

    /// Lowest and highest index carrying more than [`SUPPORT_EPS`] weight.
    pub fn support_range(&self) -> (u64, u64) {
        let mut it = self.weights.iter().filter(|(_, p)| *p > SUPPORT_EPS);
        let first = it.next().map(|w| w.0);
        let last = it.next_back().map(|w| w.0).or(first);
        match (first, last) {
            (Some(lo), Some(hi)) => (lo, hi),
            // every weight is round-off; fall back to the heaviest entry
            _ => {
                let n = self
                    .weights
                    .iter()
                    .max_by(|a, b| a.1.total_cmp(&b.1))
                    .map(|w| w.0)
                    .unwrap_or(0);
                (n, n)
            }
        }
    }

    /// Same weights moved up by `k` grid steps; the grid grows if needed.
    pub fn shifted(&self, k: u64) -> Self {
        let top = self.weights.last().map(|w| w.0).unwrap_or(0) + k;
        let grid = FrequencyGrid {
            period: self.grid.period,
            n_max: self.grid.n_max.max(top),
        };
        Self {
            grid,
            weights: self.weights.iter().map(|&(n, p)| (n + k, p)).collect(),
        }
    }
}

/// Which center a generalized deviation is measured from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Center {
    Min,
    Mean,
}

impl fmt::Display for Center {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Center::Min => f.write_str("min"),
            Center::Mean => f.write_str("mean"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "value", rename_all = "snake_case")]
pub enum WidthKind {
    DeviationAboutMin,
    DeviationAboutMean,
    DeviationAboutFixed(f64),
    Bandwidth,
    ProbabilityRange(f64),
}

/// A width measure: twice the `M`-th root of the `M`-th absolute moment about
/// a center, the bandwidth, or the width of a range holding probability `q`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WidthSpec {
    kind: WidthKind,
    moment: f64,
}

impl WidthSpec {
    pub fn new(kind: WidthKind, moment: f64) -> Result<Self> {
        let is_deviation = matches!(
            kind,
            WidthKind::DeviationAboutMin | WidthKind::DeviationAboutMean | WidthKind::DeviationAboutFixed(_)
        );
        if is_deviation && !(moment > 0.0 && moment.is_finite()) {
            return Err(Error::InvalidSpec(format!("moment M = {moment} must be > 0")));
        }
        match kind {
            WidthKind::DeviationAboutFixed(a) if !a.is_finite() => {
                Err(Error::InvalidSpec(format!("center {a} is not finite")))
            }
            WidthKind::ProbabilityRange(q) if !(q > 0.0 && q <= 1.0) => {
                Err(Error::InvalidSpec(format!("q = {q} must lie in (0, 1]")))
            }
            _ => Ok(Self { kind, moment }),
        }
    }

    pub fn about_min(moment: f64) -> Result<Self> {
        Self::new(WidthKind::DeviationAboutMin, moment)
    }

    pub fn about_mean(moment: f64) -> Result<Self> {
        Self::new(WidthKind::DeviationAboutMean, moment)
    }

    pub fn about_fixed(center: f64, moment: f64) -> Result<Self> {
        Self::new(WidthKind::DeviationAboutFixed(center), moment)
    }

    pub fn about(center: Center, moment: f64) -> Result<Self> {
        match center {
            Center::Min => Self::about_min(moment),
            Center::Mean => Self::about_mean(moment),
        }
    }

    pub fn bandwidth() -> Self {
        Self {
            kind: WidthKind::Bandwidth,
            moment: f64::INFINITY,
        }
    }

    pub fn probability_range(q: f64) -> Result<Self> {
        Self::new(WidthKind::ProbabilityRange(q), f64::INFINITY)
    }

    pub fn kind(&self) -> WidthKind {
        self.kind
    }

    pub fn moment(&self) -> f64 {
        self.moment
    }
}

/// Integer times of the states required to be mutually orthogonal within one
/// period `T`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StateTimes {
    period: u64,
    times: Vec<u64>,
}

impl StateTimes {
    pub fn new(period: u64, times: Vec<u64>) -> Result<Self> {
        if times.len() < 2 {
            return Err(Error::InvalidTimes("need at least two states".into()));
        }
        if times.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidTimes("times must be strictly increasing".into()));
        }
        if let Some(&last) = times.last() {
            if last >= period {
                return Err(Error::InvalidTimes(format!("time {last} is outside [0, {period})")));
            }
        }
        Ok(Self { period, times })
    }

    /// `count` states spaced `tau` apart starting at zero.
    pub fn equally_spaced(period: u64, count: usize, tau: u64) -> Result<Self> {
        Self::new(period, (0..count as u64).map(|k| k * tau).collect())
    }

    /// States separated by consecutive `gaps`, starting at zero.
    pub fn from_gaps(period: u64, gaps: &[u64]) -> Result<Self> {
        let mut times = Vec::with_capacity(gaps.len() + 1);
        let mut t = 0;
        times.push(t);
        for g in gaps {
            t += g;
            times.push(t);
        }
        Self::new(period, times)
    }

    pub fn period(&self) -> u64 {
        self.period
    }

    pub fn times(&self) -> &[u64] {
        &self.times
    }

    pub fn count(&self) -> usize {
        self.times.len()
    }

    /// Distinct nonzero pairwise differences `(t_m - t_k) mod T`.
    pub fn separations(&self) -> BTreeSet<u64> {
        let mut seps = BTreeSet::new();
        for &a in &self.times {
            for &b in &self.times {
                let s = (a + self.period - b) % self.period;
                if s != 0 {
                    seps.insert(s);
                }
            }
        }
        seps
    }

    /// Average separation between consecutive states, `(t_last - t_first) / (N - 1)`.
    pub fn average_separation(&self) -> f64 {
        let span = self.times[self.times.len() - 1] - self.times[0];
        span as f64 / (self.times.len() - 1) as f64
    }

    /// Smallest gap between consecutive states.
    pub fn min_gap(&self) -> u64 {
        self.times.windows(2).map(|w| w[1] - w[0]).min().unwrap_or(0)
    }
}

/// `sum p_n nu_n`.
pub fn mean_frequency(dist: &WeightDistribution) -> f64 {
    mean_index(dist) / dist.grid.period as f64
}

fn mean_index(dist: &WeightDistribution) -> f64 {
    dist.weights.iter().map(|&(n, p)| n as f64 * p).sum()
}

/// Evaluates a width measure on a distribution, in cycles per time step.
pub fn eval_width(dist: &WeightDistribution, spec: &WidthSpec) -> Result<f64> {
    let period = dist.grid.period as f64;
    let positions: Vec<(f64, f64)> = dist.weights.iter().map(|&(n, p)| (n as f64, p)).collect();
    let (lo, hi) = dist.support_range();
    let center = match spec.kind {
        WidthKind::DeviationAboutMin => lo as f64,
        WidthKind::DeviationAboutMean => mean_frequency(dist) * period,
        WidthKind::DeviationAboutFixed(a) => a * period,
        WidthKind::Bandwidth => return Ok((hi - lo) as f64 / period),
        WidthKind::ProbabilityRange(_) => return Err(Error::UnsupportedMeasure("probability range")),
    };
    Ok(deviation_width(&positions, center, spec.moment) / period)
}

/// `2 (sum p |x - center|^M)^(1/M)`, scaled by the largest deviation so that
/// very large `M` neither overflows nor underflows.
pub(crate) fn deviation_width(points: &[(f64, f64)], center: f64, moment: f64) -> f64 {
    // round-off in a computed center must not count as a deviation when M < 1
    let snap = 1e-12 * center.abs().max(1.0);
    let dev = |x: f64| {
        let d = (x - center).abs();
        if d <= snap {
            0.0
        } else {
            d
        }
    };
    let dmax = points
        .iter()
        .filter(|(_, p)| *p > 0.0)
        .map(|&(x, _)| dev(x))
        .fold(0.0, f64::max);
    if dmax == 0.0 {
        return 0.0;
    }
    let scaled: f64 = points
        .iter()
        .filter(|(_, p)| *p > 0.0)
        .map(|&(x, p)| p * (dev(x) / dmax).powf(moment))
        .sum();
    2.0 * dmax * scaled.powf(1.0 / moment)
}

/// Equal weights `1/N` on indices `start..start + N` of the grid with period `T`.
pub fn uniform_min_bandwidth_dist(count: u64, period: u64, start: u64) -> Result<WeightDistribution> {
    if count == 0 {
        return Err(Error::InvalidDistribution("need at least one frequency".into()));
    }
    if count > period {
        return Err(Error::OutOfRange(format!(
            "{count} consecutive frequencies do not fit in period {period}"
        )));
    }
    let grid = FrequencyGrid::full(period)?;
    if start + count - 1 > grid.n_max {
        return Err(Error::OutOfRange(format!(
            "indices {start}..{} exceed n_max = {}",
            start + count - 1,
            grid.n_max
        )));
    }
    let p = 1.0 / count as f64;
    WeightDistribution::new(grid, (start..start + count).map(|n| (n, p)).collect())
}

/// Transformations used to exercise the defining properties of a width.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum WidthTransform {
    /// Multiply every frequency by `c > 0`.
    Scale(f64),
    /// Add `delta` to every frequency.
    Shift(f64),
    /// Split each weight in half between two copies of the same frequency.
    SplitEqualFrequency,
    /// Move the weight farthest from the center one grid step farther out.
    MoveMassOutward,
}

/// Checks one instance of a defining width property on `dist`.
///
/// Scaling must scale the width by the same factor, shifting and splitting
/// must leave it unchanged, and moving mass outward must not decrease it.
pub fn width_axiom_check(spec: &WidthSpec, dist: &WeightDistribution, transform: WidthTransform) -> Result<bool> {
    let points: Vec<(f64, f64)> = dist.weights.iter().map(|&(n, p)| (dist.grid.frequency(n), p)).collect();
    let before = points_width(&points, spec)?;
    let close = |a: f64, b: f64| (a - b).abs() <= 1e-12 * (1.0 + a.abs().max(b.abs()));
    let holds = match transform {
        WidthTransform::Scale(c) => {
            let moved: Vec<_> = points.iter().map(|&(x, p)| (x * c, p)).collect();
            let spec = match spec.kind {
                WidthKind::DeviationAboutFixed(a) => WidthSpec::about_fixed(a * c, spec.moment)?,
                _ => *spec,
            };
            close(points_width(&moved, &spec)?, c * before)
        }
        WidthTransform::Shift(delta) => {
            let moved: Vec<_> = points.iter().map(|&(x, p)| (x + delta, p)).collect();
            let spec = match spec.kind {
                WidthKind::DeviationAboutFixed(a) => WidthSpec::about_fixed(a + delta, spec.moment)?,
                _ => *spec,
            };
            close(points_width(&moved, &spec)?, before)
        }
        WidthTransform::SplitEqualFrequency => {
            let split: Vec<_> = points.iter().flat_map(|&(x, p)| [(x, 0.5 * p), (x, 0.5 * p)]).collect();
            close(points_width(&split, spec)?, before)
        }
        WidthTransform::MoveMassOutward => {
            let center = points_center(&points, spec);
            let step = 1.0 / dist.grid.period as f64;
            let far = points
                .iter()
                .enumerate()
                .filter(|(_, (_, p))| *p > SUPPORT_EPS)
                .max_by(|a, b| (a.1 .0 - center).abs().total_cmp(&(b.1 .0 - center).abs()))
                .map(|(i, _)| i)
                .unwrap_or(0);
            let mut moved = points.clone();
            let dir = if moved[far].0 >= center { 1.0 } else { -1.0 };
            moved[far].0 += dir * step;
            points_width(&moved, spec)? >= before - 1e-12 * (1.0 + before)
        }
    };
    Ok(holds)
}

fn points_center(points: &[(f64, f64)], spec: &WidthSpec) -> f64 {
    match spec.kind {
        WidthKind::DeviationAboutMean => points.iter().map(|(x, p)| x * p).sum(),
        WidthKind::DeviationAboutFixed(a) => a,
        _ => points
            .iter()
            .filter(|(_, p)| *p > SUPPORT_EPS)
            .map(|(x, _)| *x)
            .fold(f64::INFINITY, f64::min),
    }
}

fn points_width(points: &[(f64, f64)], spec: &WidthSpec) -> Result<f64> {
    match spec.kind {
        WidthKind::ProbabilityRange(_) => Err(Error::UnsupportedMeasure("probability range")),
        WidthKind::Bandwidth => {
            let (lo, hi) = points
                .iter()
                .filter(|(_, p)| *p > SUPPORT_EPS)
                .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), (x, _)| {
                    (lo.min(*x), hi.max(*x))
                });
            Ok(hi - lo)
        }
        _ => Ok(deviation_width(points, points_center(points, spec), spec.moment)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn dist(period: u64, weights: &[(u64, f64)]) -> WeightDistribution {
        WeightDistribution::new(FrequencyGrid::full(period).unwrap(), weights.to_vec()).unwrap()
    }

    #[test]
    fn two_point_widths() {
        let d = dist(2, &[(0, 0.5), (1, 0.5)]);
        let w = eval_width(&d, &WidthSpec::about_mean(1.0).unwrap()).unwrap();
        assert_relative_eq!(w, 0.5, epsilon = 1e-15);
        let w = eval_width(&d, &WidthSpec::about_min(2.0).unwrap()).unwrap();
        assert_relative_eq!(w, 2f64.powf(-0.5), epsilon = 1e-15);
    }

    #[test]
    fn bandwidth_of_four_consecutive() {
        let d = uniform_min_bandwidth_dist(4, 4, 0).unwrap();
        assert_eq!(eval_width(&d, &WidthSpec::bandwidth()).unwrap(), 0.75);
        let d = uniform_min_bandwidth_dist(4, 8, 1).unwrap();
        assert_eq!(d.weights(), &[(1, 0.25), (2, 0.25), (3, 0.25), (4, 0.25)]);
        assert_eq!(eval_width(&d, &WidthSpec::bandwidth()).unwrap(), 3.0 / 8.0);
    }

    #[test]
    fn probability_range_is_not_evaluable() {
        let d = dist(2, &[(0, 0.5), (1, 0.5)]);
        let spec = WidthSpec::probability_range(0.5).unwrap();
        assert_eq!(
            eval_width(&d, &spec),
            Err(Error::UnsupportedMeasure("probability range"))
        );
    }

    #[test]
    fn invalid_specs() {
        assert!(matches!(WidthSpec::about_min(0.0), Err(Error::InvalidSpec(_))));
        assert!(matches!(WidthSpec::about_mean(-1.0), Err(Error::InvalidSpec(_))));
        assert!(matches!(
            WidthSpec::about_fixed(f64::NAN, 1.0),
            Err(Error::InvalidSpec(_))
        ));
        assert!(matches!(WidthSpec::probability_range(0.0), Err(Error::InvalidSpec(_))));
        assert!(matches!(WidthSpec::probability_range(1.5), Err(Error::InvalidSpec(_))));
        assert!(WidthSpec::probability_range(1.0).is_ok());
    }

    #[test]
    fn mean_frequencies() {
        assert_eq!(mean_frequency(&dist(2, &[(0, 0.5), (1, 0.5)])), 0.25);
        assert_eq!(mean_frequency(&dist(6, &[(3, 1.0)])), 0.5);
        let third = 1.0 / 3.0;
        let m = mean_frequency(&dist(3, &[(0, third), (1, third), (2, third)]));
        assert_relative_eq!(m, 1.0 / 3.0, epsilon = 1e-15);
    }

    #[test]
    fn uniform_min_bandwidth_cases() {
        let d = uniform_min_bandwidth_dist(2, 2, 0).unwrap();
        assert_eq!(d.weights(), &[(0, 0.5), (1, 0.5)]);
        let d = uniform_min_bandwidth_dist(1, 5, 2).unwrap();
        assert_eq!(d.weights(), &[(2, 1.0)]);
        assert!(matches!(uniform_min_bandwidth_dist(4, 8, 5), Err(Error::OutOfRange(_))));
        assert!(matches!(uniform_min_bandwidth_dist(5, 4, 0), Err(Error::OutOfRange(_))));
    }

    #[test]
    fn distribution_validation() {
        let g = FrequencyGrid::full(4).unwrap();
        assert!(WeightDistribution::new(g, vec![(0, 0.5), (1, 0.6)]).is_err());
        assert!(WeightDistribution::new(g, vec![(1, 0.5), (1, 0.5)]).is_err());
        assert!(WeightDistribution::new(g, vec![(0, -0.1), (1, 1.1)]).is_err());
        assert!(matches!(
            WeightDistribution::new(g, vec![(0, 0.5), (4, 0.5)]),
            Err(Error::OutOfRange(_))
        ));
        assert!(FrequencyGrid::new(4, 4).is_err());
        assert!(FrequencyGrid::full(0).is_err());
    }

    #[test]
    fn round_off_weights_are_outside_support() {
        let g = FrequencyGrid::full(5).unwrap();
        let d = WeightDistribution::new(g, vec![(0, 1e-13), (2, 0.5), (3, 0.5 - 1e-13)]).unwrap();
        assert_eq!(d.support_range(), (2, 3));
        assert_eq!(eval_width(&d, &WidthSpec::bandwidth()).unwrap(), 0.2);
    }

    #[test]
    fn from_dense_cleans_round_off() {
        let g = FrequencyGrid::full(3).unwrap();
        let d = WeightDistribution::from_dense(g, &[0.5 + 1e-11, -1e-13, 0.5]).unwrap();
        assert_eq!(d.weights().len(), 2);
        let total: f64 = d.weights().iter().map(|w| w.1).sum();
        assert!((total - 1.0).abs() < 1e-15);
    }

    #[test]
    fn json_round_trip() {
        let d = dist(7, &[(1, 0.1), (2, 0.2), (5, 0.7000000000000001)]);
        let text = serde_json::to_string(&d).unwrap();
        assert_eq!(text, r#"{"T":7,"weights":[[1,0.1],[2,0.2],[5,0.7000000000000001]]}"#);
        let back: WeightDistribution = serde_json::from_str(&text).unwrap();
        assert_eq!(back, d);
    }

    #[test]
    fn separations_include_both_directions() {
        let t = StateTimes::new(3, vec![0, 1, 2]).unwrap();
        assert_eq!(t.separations().into_iter().collect::<Vec<_>>(), vec![1, 2]);
        let t = StateTimes::new(4, vec![0, 2]).unwrap();
        assert_eq!(t.separations().into_iter().collect::<Vec<_>>(), vec![2]);
        let t = StateTimes::from_gaps(100, &[1, 2]).unwrap();
        assert_eq!(t.times(), &[0, 1, 3]);
        assert_eq!(t.average_separation(), 1.5);
        assert!(StateTimes::new(3, vec![0]).is_err());
        assert!(StateTimes::new(3, vec![0, 3]).is_err());
        assert!(StateTimes::new(3, vec![1, 1]).is_err());
    }

    #[test]
    fn axiom_examples() {
        let d = dist(5, &[(0, 0.2), (1, 0.5), (4, 0.3)]);
        let mean1 = WidthSpec::about_mean(1.0).unwrap();
        assert!(width_axiom_check(&mean1, &d, WidthTransform::Scale(2.0)).unwrap());
        let min2 = WidthSpec::about_min(2.0).unwrap();
        assert!(width_axiom_check(&min2, &d, WidthTransform::Shift(3.0 / 5.0)).unwrap());

        let bw = WidthSpec::bandwidth();
        assert!(width_axiom_check(&bw, &d, WidthTransform::MoveMassOutward).unwrap());
        let wider =
            WeightDistribution::new(FrequencyGrid::full(6).unwrap(), vec![(0, 0.2), (1, 0.5), (5, 0.3)]).unwrap();
        let d6 = WeightDistribution::new(FrequencyGrid::full(6).unwrap(), vec![(0, 0.2), (1, 0.5), (4, 0.3)]).unwrap();
        assert!(eval_width(&wider, &bw).unwrap() > eval_width(&d6, &bw).unwrap());
    }

    #[test]
    fn scale_with_fixed_center() {
        let d = dist(4, &[(0, 0.5), (3, 0.5)]);
        let spec = WidthSpec::about_mean(2.0).unwrap();
        assert!(width_axiom_check(&spec, &d, WidthTransform::Scale(3.0)).unwrap());
        let spec = WidthSpec::about_fixed(0.1, 2.0).unwrap();
        assert!(width_axiom_check(&spec, &d, WidthTransform::Scale(3.0)).unwrap());
    }

    #[test]
    fn large_moment_approaches_bandwidth() {
        let d = uniform_min_bandwidth_dist(5, 5, 0).unwrap();
        let w = eval_width(&d, &WidthSpec::about_min(1e6).unwrap()).unwrap();
        assert!((w - 1.6).abs() < 1e-5, "{w}");
    }
}
