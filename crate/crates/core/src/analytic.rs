//! Closed-form lower bounds on `width x tau`, the product of a frequency width
//! and the average separation between mutually orthogonal states.
//!
//! Every bound is attained by a minimum-bandwidth distribution (`N` equal
//! weights on consecutive grid frequencies) except the `N = 2` deviation about
//! the mean for `M < pi/2`, where a slightly wider three-frequency
//! distribution `{p, 1 - 2p, p}` does better.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::spectrum::{eval_width, uniform_min_bandwidth_dist, Center, FrequencyGrid, WeightDistribution, WidthSpec};

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct BoundParams {
    #[serde(rename = "M", skip_serializing_if = "Option::is_none")]
    pub moment: Option<f64>,
    #[serde(rename = "N", skip_serializing_if = "Option::is_none")]
    pub count: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub q: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub center: Option<Center>,
}

/// A dimensionless bound value with the distribution that attains it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundResult {
    pub value: f64,
    pub params: BoundParams,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<WeightDistribution>,
    /// `T / tau` of the witness: its grid period measured in separations.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub period_ratio: Option<f64>,
}

impl BoundResult {
    /// Re-evaluates the witness through [`eval_width`], scaled to `width x tau`.
    pub fn witness_value(&self) -> Option<Result<f64>> {
        let witness = self.witness.as_ref()?;
        let ratio = self.period_ratio?;
        let spec = WidthSpec::about(self.params.center?, self.params.moment?);
        Some(spec.and_then(|spec| {
            let width = eval_width(witness, &spec)?;
            Ok(width * witness.grid().period() as f64 / ratio)
        }))
    }
}

/// `(N - 1) / T`: the smallest bandwidth holding `N` distinct frequencies `1/T` apart.
pub fn min_bandwidth(count: u64, period: f64) -> Result<f64> {
    if count == 0 {
        return Err(Error::Domain("need at least one state".into()));
    }
    if !(period > 0.0 && period.is_finite()) {
        return Err(Error::Domain(format!("period {period} must be positive")));
    }
    Ok((count - 1) as f64 / period)
}

fn check_moment(moment: f64) -> Result<()> {
    if moment > 0.0 && moment.is_finite() {
        Ok(())
    } else {
        Err(Error::Domain(format!("moment M = {moment} must be > 0")))
    }
}

/// `2 N^-(1 + 1/M) (sum_n |n - c|^M)^(1/M)` for `n = 0..N`, evaluated as
/// `2 (d/N) (mean (|n - c|/d)^M)^(1/M)` with `d` the largest deviation.
fn uniform_deviation_bound(moment: f64, count: u64, center: f64) -> f64 {
    let dmax = center.max(count as f64 - 1.0 - center);
    if dmax <= 0.0 {
        return 0.0;
    }
    let mean: f64 = (0..count)
        .map(|n| ((n as f64 - center).abs() / dmax).powf(moment))
        .sum::<f64>()
        / count as f64;
    2.0 * dmax / count as f64 * mean.powf(1.0 / moment)
}

fn uniform_bound(moment: f64, count: u64, center: Center) -> Result<BoundResult> {
    check_moment(moment)?;
    if count == 0 {
        return Err(Error::Domain("need at least one state".into()));
    }
    let c = match center {
        Center::Min => 0.0,
        Center::Mean => (count as f64 - 1.0) / 2.0,
    };
    Ok(BoundResult {
        value: uniform_deviation_bound(moment, count, c),
        params: BoundParams {
            moment: Some(moment),
            count: Some(count),
            q: None,
            center: Some(center),
        },
        witness: Some(uniform_min_bandwidth_dist(count, count, 0)?),
        period_ratio: Some(count as f64),
    })
}

/// Bound on twice the `M`-th deviation above the lowest occupied frequency.
pub fn f_nu0(moment: f64, count: u64) -> Result<BoundResult> {
    uniform_bound(moment, count, Center::Min)
}

/// Bound on twice the `M`-th deviation about the mean frequency.
pub fn f_nubar(moment: f64, count: u64) -> Result<BoundResult> {
    uniform_bound(moment, count, Center::Mean)
}

/// The `N -> infinity` limit: `(1/(1+M))^(1/M)` about the mean, twice that about the minimum.
pub fn f_inf(moment: f64, center: Center) -> Result<f64> {
    check_moment(moment)?;
    let about_mean = (-moment.ln_1p() / moment).exp();
    Ok(match center {
        Center::Mean => about_mean,
        Center::Min => 2.0 * about_mean,
    })
}

/// `(ceil(qN) - 1) / N`: width of the narrowest range holding probability `q`.
pub fn f_prob(q: f64, count: u64) -> Result<f64> {
    if !(q > 0.0 && q <= 1.0) {
        return Err(Error::Domain(format!("q = {q} must lie in (0, 1]")));
    }
    if count == 0 {
        return Err(Error::Domain("need at least one state".into()));
    }
    let n = count as f64;
    // decimal q just above an exact multiple must not bump the ceiling
    let covered = (q * n - 1e-12).ceil().max(1.0);
    Ok((covered - 1.0) / n)
}

/// `(1/pi) arccos(1/q - 1)`, the two-state bound on a range holding probability `q`.
pub fn arccos_bound(q: f64) -> Result<f64> {
    if !(0.5..=1.0).contains(&q) {
        return Err(Error::Domain(format!("q = {q} outside [1/2, 1]")));
    }
    Ok((1.0 / q - 1.0).acos() / PI)
}

/// Weights `{p, 1 - 2p, p}` on three consecutive frequencies of period `T`
/// that make states `tau` apart orthogonal.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ThreeFrequency {
    pub p: f64,
    pub weights: [f64; 3],
}

/// `p = 1 / (4 sin^2(pi tau/T))`, nonnegative for `1/4 <= tau/T <= 3/4`.
pub fn three_freq_weights(tau_over_period: f64) -> Result<ThreeFrequency> {
    if !(0.25..=0.75).contains(&tau_over_period) {
        return Err(Error::NoPositiveSolution(tau_over_period));
    }
    let s = (PI * tau_over_period).sin();
    let p = (1.0 / (4.0 * s * s)).min(0.5);
    Ok(ThreeFrequency {
        p,
        weights: [p, 1.0 - 2.0 * p, p],
    })
}

/// `T / tau` solving `2x / tan x = M` with `x = pi tau / T` in `(pi/4, pi/2)`.
pub fn exceptional_ratio(moment: f64) -> Result<f64> {
    check_moment(moment)?;
    if moment >= FRAC_PI_2 {
        return Err(Error::RevertToMinBandwidth(moment));
    }
    let g = |x: f64| 2.0 * x / x.tan() - moment;
    let (mut lo, mut hi) = (FRAC_PI_4 + 1e-12, FRAC_PI_2 - 1e-12);
    // g decreases from pi/2 - M at pi/4 to -M at pi/2
    if g(lo) <= 0.0 {
        return Ok(PI / lo);
    }
    if g(hi) >= 0.0 {
        return Ok(PI / hi);
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if g(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(PI / (0.5 * (lo + hi)))
}

/// The `N = 2` bound about the mean. Below `M = pi/2` it is the
/// three-frequency minimum at [`exceptional_ratio`]; otherwise `f_nubar(M, 2)`.
pub fn exceptional_bound(moment: f64) -> Result<BoundResult> {
    check_moment(moment)?;
    let ratio = match exceptional_ratio(moment) {
        Ok(r) => r,
        Err(Error::RevertToMinBandwidth(_)) => return f_nubar(moment, 2),
        Err(e) => return Err(e),
    };
    let r = 1.0 / ratio;
    let three = three_freq_weights(r)?;
    let value = 2.0 * (2.0 * three.p).powf(1.0 / moment) * r;
    // unit grid period; the frequencies 0, 1, 2 are 1/T apart with T = ratio * tau
    let grid = FrequencyGrid::extended(1, 2)?;
    let w = three.weights;
    let witness = WeightDistribution::new(grid, vec![(0, w[0]), (1, w[1]), (2, w[2])])?;
    Ok(BoundResult {
        value,
        params: BoundParams {
            moment: Some(moment),
            count: Some(2),
            q: None,
            center: Some(Center::Mean),
        },
        witness: Some(witness),
        period_ratio: Some(ratio),
    })
}
