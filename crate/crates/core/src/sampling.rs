//! Sinc kernels and reconstruction of bandlimited trajectories from samples
//! taken one minimum separation `tau` apart.
//!
//! With a finite number `N` of evenly spaced frequency components the kernel
//! is periodic: the `N` samples of one period determine the whole evolution
//! exactly. With a continuum of components the infinite sinc series is
//! truncated to a window of `W` samples on either side of the evaluation
//! point; the truncation error is `O(1/W)` for interior points.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const DEFAULT_TRUNCATION: usize = 64;

const INTEGER_SNAP: f64 = 1e-12;

/// `e^{2 pi i turns}` with exact values at quarter turns.
fn cis_turns(turns: f64) -> Complex64 {
    let r = turns - turns.floor();
    let q = r * 4.0;
    if q == q.round() {
        return match q as i64 % 4 {
            0 => Complex64::new(1.0, 0.0),
            1 => Complex64::new(0.0, 1.0),
            2 => Complex64::new(-1.0, 0.0),
            _ => Complex64::new(0.0, -1.0),
        };
    }
    Complex64::from_polar(1.0, 2.0 * PI * r)
}

/// Integer nearest to `u` when `u` is within round-off of it.
fn as_integer(u: f64) -> Option<i64> {
    let k = u.round();
    ((u - k).abs() <= INTEGER_SNAP * u.abs().max(1.0)).then_some(k as i64)
}

/// `sin(pi u) / (pi u)`, with exact zeros at nonzero integers.
pub fn sinc(u: f64) -> f64 {
    match as_integer(u) {
        Some(0) => 1.0,
        Some(_) => 0.0,
        None => {
            let k = u.round();
            let sign = if (k as i64) % 2 == 0 { 1.0 } else { -1.0 };
            sign * (PI * (u - k)).sin() / (PI * u)
        }
    }
}

/// Uniform superposition of unit bandwidth centered on `b`:
/// `e^{2 pi i u b} sinc(u)`.
pub fn sinc_b(u: f64, b: f64) -> Complex64 {
    match as_integer(u) {
        Some(0) => Complex64::new(1.0, 0.0),
        Some(_) => Complex64::new(0.0, 0.0),
        None => cis_turns(u * b) * sinc(u),
    }
}

/// Twice the lowest frequency index `bN - (N-1)/2` of an `N`-component
/// kernel centered on `b`, when it is an integer.
fn twice_lowest_index(b: f64, n: usize) -> Result<i64> {
    if n == 0 {
        return Err(Error::InvalidKernel("N must be at least 1".into()));
    }
    let twice = 2.0 * b * n as f64 - (n as f64 - 1.0);
    let k = twice.round();
    if (twice - k).abs() > 1e-9 * twice.abs().max(1.0) || !k.is_finite() {
        return Err(Error::InvalidKernel(format!(
            "center {b} with N = {n} puts components off the integer and half-integer grids"
        )));
    }
    Ok(k as i64)
}

/// Average of the `N` phases `e^{2 pi i u m / N}`, `m = bN-(N-1)/2, ..., bN+(N-1)/2`.
///
/// On an integer grid this is 1 at multiples of `N` and 0 at other integers.
/// On a half-integer grid the value at `u = jN` is `(-1)^j`.
pub fn sinc_periodic(u: f64, b: f64, n: usize) -> Result<Complex64> {
    let lo = twice_lowest_index(b, n)?;
    let n_i = n as i64;
    if let Some(k) = as_integer(u) {
        if k.rem_euclid(n_i) != 0 {
            return Ok(Complex64::new(0.0, 0.0));
        }
        // e^{2 pi i (jN) m / N} = e^{i pi j (2m)}
        let odd = lo.rem_euclid(2) == 1 && (k / n_i).rem_euclid(2) == 1;
        return Ok(Complex64::new(if odd { -1.0 } else { 1.0 }, 0.0));
    }
    let two_n = 2.0 * n as f64;
    let sum: Complex64 = (0..n_i)
        .map(|j| {
            let twice_m = (lo + 2 * j) as f64;
            cis_turns((u * twice_m / two_n).rem_euclid(1.0))
        })
        .sum();
    Ok(sum / n as f64)
}

/// States sampled at `t = n tau`.
///
/// With `periodic_n` set the samples cover one period, `n = 0..N`, and the
/// kernel has `N` components. Otherwise the kernel is the infinite sinc and
/// `samples[i]` is the state at `n = first_index + i`.
#[derive(Debug, Clone, PartialEq)]
pub struct SampledTrajectory {
    samples: Vec<Vec<Complex64>>,
    tau: f64,
    center_b: f64,
    periodic_n: Option<usize>,
    half_integer: bool,
    first_index: i64,
}

#[derive(Serialize, Deserialize)]
struct TrajectoryJson {
    samples: Vec<Vec<[f64; 2]>>,
    tau: f64,
    center_b: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    periodic_n: Option<usize>,
    #[serde(default)]
    half_integer: bool,
    #[serde(default)]
    first_index: i64,
}

impl Serialize for SampledTrajectory {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        TrajectoryJson {
            samples: self
                .samples
                .iter()
                .map(|v| v.iter().map(|c| [c.re, c.im]).collect())
                .collect(),
            tau: self.tau,
            center_b: self.center_b,
            periodic_n: self.periodic_n,
            half_integer: self.half_integer,
            first_index: self.first_index,
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for SampledTrajectory {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let j = TrajectoryJson::deserialize(d)?;
        let samples = j
            .samples
            .into_iter()
            .map(|v| v.into_iter().map(|[re, im]| Complex64::new(re, im)).collect())
            .collect();
        let traj = match j.periodic_n {
            Some(n) => {
                let t = SampledTrajectory::periodic(samples, j.tau, j.center_b).map_err(serde::de::Error::custom)?;
                if n != t.samples.len() {
                    return Err(serde::de::Error::custom(format!(
                        "periodic_n = {n} but {} samples given",
                        t.samples.len()
                    )));
                }
                t
            }
            None => SampledTrajectory::infinite(samples, j.tau, j.center_b, j.first_index)
                .map_err(serde::de::Error::custom)?,
        };
        if traj.half_integer != j.half_integer {
            return Err(serde::de::Error::custom(
                "half_integer flag disagrees with the kernel grid",
            ));
        }
        Ok(traj)
    }
}

fn check_samples(samples: &[Vec<Complex64>], tau: f64, b: f64) -> Result<()> {
    if samples.is_empty() {
        return Err(Error::InsufficientSamples("no samples".into()));
    }
    let d = samples[0].len();
    if d == 0 || samples.iter().any(|s| s.len() != d) {
        return Err(Error::InvalidKernel("samples must share a nonzero dimension".into()));
    }
    if !(tau > 0.0 && tau.is_finite()) || !b.is_finite() {
        return Err(Error::InvalidKernel(format!(
            "need finite tau > 0 and finite center, got {tau}, {b}"
        )));
    }
    Ok(())
}

impl SampledTrajectory {
    /// One period of an `N = samples.len()` component evolution centered on `b`.
    pub fn periodic(samples: Vec<Vec<Complex64>>, tau: f64, center_b: f64) -> Result<Self> {
        check_samples(&samples, tau, center_b)?;
        let n = samples.len();
        let lo = twice_lowest_index(center_b, n)?;
        Ok(Self {
            samples,
            tau,
            center_b,
            periodic_n: Some(n),
            half_integer: lo.rem_euclid(2) == 1,
            first_index: 0,
        })
    }

    /// Samples `n = first_index, first_index + 1, ...` of a unit-bandwidth
    /// evolution centered on `b` (frequencies in units of `1 / tau`).
    pub fn infinite(samples: Vec<Vec<Complex64>>, tau: f64, center_b: f64, first_index: i64) -> Result<Self> {
        check_samples(&samples, tau, center_b)?;
        Ok(Self {
            samples,
            tau,
            center_b,
            periodic_n: None,
            half_integer: false,
            first_index,
        })
    }

    pub fn samples(&self) -> &[Vec<Complex64>] {
        &self.samples
    }

    pub fn tau(&self) -> f64 {
        self.tau
    }

    pub fn center_b(&self) -> f64 {
        self.center_b
    }

    pub fn periodic_n(&self) -> Option<usize> {
        self.periodic_n
    }

    pub fn is_half_integer(&self) -> bool {
        self.half_integer
    }

    pub fn first_index(&self) -> i64 {
        self.first_index
    }

    pub fn dimension(&self) -> usize {
        self.samples[0].len()
    }

    /// Whether all samples are pairwise orthogonal within `tol`.
    pub fn is_maximally_distinct(&self, tol: f64) -> bool {
        let s = &self.samples;
        (0..s.len()).all(|i| {
            (i + 1..s.len()).all(|j| {
                let ip: Complex64 = s[i].iter().zip(&s[j]).map(|(a, b)| a.conj() * b).sum();
                ip.norm() <= tol
            })
        })
    }
}

/// The state at time `t` interpolated from the samples.
///
/// Periodic trajectories use all `N` samples and are exact. Otherwise every
/// sample with `|t/tau - n| <= truncation` contributes, and the samples must
/// cover that window. On the sample grid the stored sample is returned
/// (negated on odd periods of a half-integer grid).
pub fn reconstruct(traj: &SampledTrajectory, t: f64, truncation: usize) -> Result<Vec<Complex64>> {
    if !t.is_finite() {
        return Err(Error::Domain(format!("time must be finite, got {t}")));
    }
    let u = t / traj.tau;
    let d = traj.dimension();
    let mut out = vec![Complex64::new(0.0, 0.0); d];
    let mut add = |weight: Complex64, sample: &[Complex64]| {
        if weight != Complex64::new(0.0, 0.0) {
            for (o, s) in out.iter_mut().zip(sample) {
                *o += weight * s;
            }
        }
    };
    match traj.periodic_n {
        Some(n) => {
            for (k, sample) in traj.samples.iter().enumerate() {
                add(sinc_periodic(u - k as f64, traj.center_b, n)?, sample);
            }
        }
        None => {
            let w = truncation as f64;
            let lo = (u - w).ceil() as i64;
            let hi = (u + w).floor() as i64;
            let last = traj.first_index + traj.samples.len() as i64 - 1;
            if lo < traj.first_index || hi > last {
                return Err(Error::InsufficientSamples(format!(
                    "window {lo}..={hi} needs samples outside {}..={last}",
                    traj.first_index
                )));
            }
            for n in lo..=hi {
                let sample = &traj.samples[(n - traj.first_index) as usize];
                add(sinc_b(u - n as f64, traj.center_b), sample);
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn sinc_b_values() {
        assert_eq!(sinc_b(0.0, 3.7), c(1.0, 0.0));
        assert_eq!(sinc_b(5.0, 0.3), c(0.0, 0.0));
        assert_eq!(sinc_b(-2.0, 1.1), c(0.0, 0.0));
        assert_abs_diff_eq!(sinc_b(0.5, 0.0).re, 2.0 / PI, epsilon = 1e-15);
        assert_abs_diff_eq!(sinc_b(0.5, 0.0).im, 0.0);
        assert_abs_diff_eq!(sinc_b(1.5, 0.25).norm(), sinc(1.5).abs(), epsilon = 1e-15);
    }

    #[test]
    fn periodic_kernel_values() {
        for u in [0.0, 0.3, 1.0, 1.7, -2.2] {
            let k = sinc_periodic(u, 0.0, 2).unwrap();
            assert_abs_diff_eq!(k.re, (PI * u / 2.0).cos(), epsilon = 1e-14);
            assert_abs_diff_eq!(k.im, 0.0, epsilon = 1e-14);
        }
        assert_eq!(sinc_periodic(0.0, 1.0, 3).unwrap(), c(1.0, 0.0));
        // b = 1/8, N = 4 gives m = -1..2
        assert_eq!(sinc_periodic(4.0, 0.125, 4).unwrap(), c(1.0, 0.0));
        for u in [1.0, 2.0, 3.0] {
            assert_eq!(sinc_periodic(u, 0.125, 4).unwrap(), c(0.0, 0.0));
        }
        assert_eq!(sinc_periodic(2.0, 0.0, 2).unwrap(), c(-1.0, 0.0));
        assert_eq!(sinc_periodic(4.0, 0.0, 2).unwrap(), c(1.0, 0.0));
    }

    #[test]
    fn periodic_kernel_rejects_off_grid_center() {
        assert!(matches!(sinc_periodic(0.3, 0.1, 3), Err(Error::InvalidKernel(_))));
        assert!(matches!(sinc_periodic(0.3, 0.0, 0), Err(Error::InvalidKernel(_))));
    }

    #[test]
    fn grid_points_are_exact() {
        let samples: Vec<Vec<Complex64>> = (0..5).map(|k| vec![c(k as f64, -0.5), c(0.1, k as f64)]).collect();
        let p = SampledTrajectory::periodic(samples.clone(), 0.1, 0.0).unwrap();
        assert_eq!(reconstruct(&p, 3.0 * 0.1, 0).unwrap(), samples[3]);
        let inf = SampledTrajectory::infinite(samples.clone(), 0.1, 0.2, 0).unwrap();
        assert_eq!(reconstruct(&inf, 3.0 * 0.1, 1).unwrap(), samples[3]);
    }

    #[test]
    fn two_state_cos_sin() {
        let samples = vec![vec![c(1.0, 0.0), c(0.0, 0.0)], vec![c(0.0, 0.0), c(1.0, 0.0)]];
        let traj = SampledTrajectory::periodic(samples, 2.0, 0.0).unwrap();
        assert!(traj.is_half_integer());
        let psi = reconstruct(&traj, 1.0, 0).unwrap();
        let h = (PI / 4.0).cos();
        assert_abs_diff_eq!(psi[0].re, h, epsilon = 1e-15);
        assert_abs_diff_eq!(psi[1].re, h, epsilon = 1e-15);
        let later = reconstruct(&traj, 1.0 + 4.0, 0).unwrap();
        assert_abs_diff_eq!(later[0].re, -h, epsilon = 1e-15);
    }

    #[test]
    fn truncated_series_error_shrinks_with_window() {
        let f = 0.3;
        let signal = |n: f64| cis_turns((f * n).rem_euclid(1.0));
        let err = |w: usize| {
            let samples = (-(w as i64)..=w as i64).map(|n| vec![signal(n as f64)]).collect();
            let traj = SampledTrajectory::infinite(samples, 1.0, 0.0, -(w as i64)).unwrap();
            (reconstruct(&traj, 0.37, w - 1).unwrap()[0] - signal(0.37)).norm()
        };
        let (e16, e64, e256) = (err(16), err(64), err(256));
        assert!(e64 <= 1.0 / 64.0, "{e64}");
        assert!(e256 < e64 && e64 < e16, "{e16} {e64} {e256}");
    }

    #[test]
    fn window_must_be_covered() {
        let traj = SampledTrajectory::infinite(vec![vec![c(1.0, 0.0)]; 10], 1.0, 0.0, 0).unwrap();
        assert!(matches!(reconstruct(&traj, 7.5, 3), Err(Error::InsufficientSamples(_))));
        assert!(reconstruct(&traj, 4.5, 4).is_ok());
    }

    #[test]
    fn bad_trajectories() {
        assert!(SampledTrajectory::periodic(vec![], 1.0, 0.0).is_err());
        assert!(SampledTrajectory::periodic(vec![vec![c(1.0, 0.0)], vec![]], 1.0, 0.0).is_err());
        assert!(SampledTrajectory::periodic(vec![vec![c(1.0, 0.0)]; 2], 0.0, 0.0).is_err());
        assert!(SampledTrajectory::periodic(vec![vec![c(1.0, 0.0)]; 3], 1.0, 0.1).is_err());
    }

    #[test]
    fn json_uses_pairs() {
        let traj = SampledTrajectory::periodic(vec![vec![c(1.0, 2.0)], vec![c(3.0, -4.0)]], 1.5, 0.0).unwrap();
        let s = serde_json::to_string(&traj).unwrap();
        assert!(s.contains("[[[1.0,2.0]],[[3.0,-4.0]]]"), "{s}");
        let back: SampledTrajectory = serde_json::from_str(&s).unwrap();
        assert_eq!(back, traj);
        let wrong = s.replace("\"half_integer\":true", "\"half_integer\":false");
        assert!(serde_json::from_str::<SampledTrajectory>(&wrong).is_err());
    }

    #[test]
    fn basis_trajectory_is_distinct() {
        let n = 4;
        let samples = (0..n)
            .map(|k| (0..n).map(|j| c(if j == k { 1.0 } else { 0.0 }, 0.0)).collect())
            .collect();
        let traj = SampledTrajectory::periodic(samples, 1.0, 0.125).unwrap();
        assert!(traj.is_maximally_distinct(1e-12));
        for t in [0.1, 0.77, 2.5, 3.9] {
            let norm: f64 = reconstruct(&traj, t, 0).unwrap().iter().map(|z| z.norm_sqr()).sum();
            assert_abs_diff_eq!(norm, 1.0, epsilon = 1e-12);
        }
    }
}
