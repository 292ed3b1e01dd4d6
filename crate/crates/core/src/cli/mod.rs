//! Command-line front end.
//!
//! Every subcommand produces an [`ExperimentResult`] written as CSV (a `#`
//! line with the full configuration and version, a header row, then data) or
//! as JSON. Identical arguments give byte-identical output.
//!
//! Exit codes: 0 on success, 1 for bad arguments, domain errors and
//! infeasible problems, 2 for internal failures such as the simplex iteration
//! limit.

mod output;

use std::ffi::OsString;
use std::path::PathBuf;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use serde::Serialize;
use serde_json::json;

use crate::analytic::{
    arccos_bound, exceptional_bound, exceptional_ratio, f_inf, f_nu0, f_nubar, f_prob, min_bandwidth,
    three_freq_weights,
};
use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::lp::SolverOptions;
use crate::optimize::{
    max_probability, min_width_numeric, portion_min, scan_period, stochastic_equal_spacing, threshold_scan,
    ExperimentResult, SearchOptions,
};
use crate::sampling::{reconstruct, SampledTrajectory, DEFAULT_TRUNCATION};
use crate::spectrum::{Center, StateTimes, WidthSpec};

pub use output::render;

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Parser, Serialize)]
#[command(
    name = "distinct-states",
    version,
    about = "Bounds on the number of distinct states in a finite unitary evolution"
)]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalOpts,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args, Serialize)]
pub struct GlobalOpts {
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Write to this file instead of standard output.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,
    /// Unit labels for the transformation: time steps, space shifts or rotation angles.
    #[arg(long, global = true, value_enum, default_value_t = Generator::Time)]
    pub generator: Generator,
    /// Highest LP frequency in cycles per smallest separation; 0 uses the whole period.
    #[arg(long, global = true, default_value_t = 2.0)]
    pub band_limit: f64,
    /// Simplex optimality and feasibility tolerance.
    #[arg(long, global = true, default_value_t = 1e-9)]
    pub tol: f64,
    #[arg(long, global = true, default_value_t = 50_000)]
    pub max_iters: usize,
    /// Run on one thread.
    #[arg(long, global = true)]
    pub sequential: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Generator {
    Time,
    Shift,
    Rotation,
}

impl Generator {
    /// Name of the separation between consecutive states.
    pub fn step_label(self) -> &'static str {
        match self {
            Generator::Time => "tau",
            Generator::Shift => "lambda",
            Generator::Rotation => "theta",
        }
    }

    fn unit(self) -> &'static str {
        match self {
            Generator::Time => "time",
            Generator::Shift => "length",
            Generator::Rotation => "angle",
        }
    }
}

/// `min`, `mean`, or a fixed center frequency in cycles per step.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CenterArg {
    Min,
    Mean,
    Fixed(f64),
}

impl FromStr for CenterArg {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "min" => Ok(CenterArg::Min),
            "mean" => Ok(CenterArg::Mean),
            _ => s
                .parse::<f64>()
                .map(CenterArg::Fixed)
                .map_err(|_| format!("expected min, mean or a number, got {s:?}")),
        }
    }
}

#[derive(Debug, Args, Serialize)]
pub struct MeasureOpts {
    /// Deviation center: min, mean, or a fixed frequency (cycles per step).
    #[arg(long, default_value = "min")]
    pub center: CenterArg,
    /// Moment order of the deviation.
    #[arg(long = "M", default_value_t = 1.0)]
    pub moment: f64,
    /// Minimize the full bandwidth instead of a deviation.
    #[arg(long)]
    pub bandwidth: bool,
}

impl MeasureOpts {
    fn spec(&self) -> Result<WidthSpec> {
        if self.bandwidth {
            return Ok(WidthSpec::bandwidth());
        }
        match self.center {
            CenterArg::Min => WidthSpec::about_min(self.moment),
            CenterArg::Mean => WidthSpec::about_mean(self.moment),
            CenterArg::Fixed(a) => WidthSpec::about_fixed(a, self.moment),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum BoundKind {
    /// Deviation about the lowest frequency for N equally spaced states.
    Nu0,
    /// Deviation about the mean frequency for N equally spaced states.
    Nubar,
    /// N -> infinity limit of nu0 or nubar.
    Inf,
    /// Narrowest range holding probability q.
    Prob,
    /// Two-state range bound (1/pi) arccos(1/q - 1).
    Arccos,
    /// (N - 1) / T.
    MinBandwidth,
    /// Weights {p, 1 - 2p, p} orthogonalizing two states tau apart in period T.
    ThreeFreq,
    /// T / tau of the best two-state three-frequency evolution.
    ExceptionalRatio,
    /// Two-state deviation about the mean.
    Exceptional,
}

#[derive(Debug, Subcommand, Serialize)]
#[serde(rename_all = "kebab-case", tag = "command")]
pub enum Command {
    /// Closed-form bounds.
    Bound {
        #[arg(long, value_enum)]
        kind: BoundKind,
        #[arg(long = "M")]
        moment: Option<f64>,
        #[arg(long = "N")]
        count: Option<u64>,
        #[arg(long)]
        q: Option<f64>,
        /// min or mean, for inf.
        #[arg(long)]
        center: Option<CenterArg>,
        /// Period for min-bandwidth, in steps.
        #[arg(long = "T")]
        period: Option<f64>,
        /// tau / T for three-freq.
        #[arg(long)]
        tau_over_t: Option<f64>,
    },
    /// Numeric minimum width for states at given times.
    Minimize {
        #[arg(long, value_delimiter = ',', required = true)]
        times: Vec<u64>,
        #[arg(long = "T")]
        period: u64,
        #[command(flatten)]
        measure: MeasureOpts,
    },
    /// Largest probability inside a frequency window, for a list of window widths.
    Maxq {
        #[arg(long, value_delimiter = ',', required = true)]
        times: Vec<u64>,
        #[arg(long = "T")]
        period: u64,
        /// Window widths times the average separation; default: every grid width up to 1.
        #[arg(long, value_delimiter = ',')]
        widths: Vec<f64>,
    },
    /// Minimum width for N equally spaced states as the period varies.
    ScanPeriod {
        #[arg(long = "N")]
        count: usize,
        #[arg(long)]
        tau: u64,
        #[arg(long = "T-from")]
        t_from: u64,
        #[arg(long = "T-to")]
        t_to: u64,
        #[arg(long = "T-step", default_value_t = 1)]
        t_step: u64,
        #[command(flatten)]
        measure: MeasureOpts,
    },
    /// Minimum width for N equally spaced states inside a much longer period.
    Portion {
        #[arg(long = "N")]
        count: usize,
        #[arg(long)]
        tau: u64,
        /// Long period; default max(60, 20 N) tau.
        #[arg(long = "T-big")]
        big_period: Option<u64>,
        #[command(flatten)]
        measure: MeasureOpts,
    },
    /// Random unequal spacings compared with equal spacing.
    Stochastic {
        #[arg(long, default_value_t = 500)]
        trials: usize,
        #[arg(long = "N-max", default_value_t = 8)]
        max_count: usize,
        #[arg(long = "K-max", default_value_t = 4)]
        max_distinct: usize,
        #[arg(long = "len-max", default_value_t = 60)]
        max_len: u64,
    },
    /// Portion minima about the mean against the closed form on an (M, N) grid.
    Threshold {
        #[arg(long = "M", value_delimiter = ',', default_value = "1,2")]
        moments: Vec<f64>,
        #[arg(long = "N", value_delimiter = ',', default_value = "2,4")]
        counts: Vec<usize>,
        #[arg(long, default_value_t = 5)]
        tau: u64,
        /// Long period; default max(60, 20 max N) tau.
        #[arg(long = "T-big")]
        big_period: Option<u64>,
    },
    /// Interpolate a sampled trajectory between its samples.
    Reconstruct {
        /// Trajectory JSON; default: basis states e_0..e_{N-1} with a periodic kernel.
        #[arg(long)]
        input: Option<PathBuf>,
        #[arg(long = "N", default_value_t = 2)]
        count: usize,
        /// Kernel center frequency in units of 1/tau.
        #[arg(long, default_value_t = 0.0)]
        b: f64,
        #[arg(long = "t-from", default_value_t = 0.0)]
        t_from: f64,
        #[arg(long = "t-to", default_value_t = 4.0)]
        t_to: f64,
        #[arg(long, default_value_t = 17)]
        points: usize,
        /// Truncation half-width for non-periodic trajectories.
        #[arg(long = "W", default_value_t = DEFAULT_TRUNCATION)]
        truncation: usize,
    },
}

impl GlobalOpts {
    fn search(&self) -> Result<SearchOptions> {
        if !(self.band_limit >= 0.0 && self.band_limit.is_finite()) {
            return Err(Error::Domain("--band-limit must be >= 0".into()));
        }
        if !(self.tol > 0.0 && self.tol < 1e-3) {
            return Err(Error::Domain("--tol must lie in (0, 1e-3)".into()));
        }
        Ok(SearchOptions {
            band_limit: (self.band_limit > 0.0).then_some(self.band_limit),
            solver: SolverOptions {
                tol: self.tol,
                max_iters: self.max_iters,
                ..SolverOptions::default()
            },
            execution: if self.sequential {
                Execution::Sequential
            } else {
                Execution::Parallel
            },
        })
    }
}

fn need<T>(v: Option<T>, flag: &str) -> Result<T> {
    v.ok_or_else(|| Error::Domain(format!("this bound needs --{flag}")))
}

fn bound(
    kind: BoundKind,
    moment: Option<f64>,
    count: Option<u64>,
    q: Option<f64>,
    center: Option<CenterArg>,
    period: Option<f64>,
    tau_over_t: Option<f64>,
) -> Result<ExperimentResult> {
    let params = json!({
        "experiment": "bound",
        "kind": kind,
        "M": moment,
        "N": count,
        "q": q,
        "center": center,
        "T": period,
        "tau_over_T": tau_over_t,
    });
    let from_bound = |b: crate::analytic::BoundResult| ExperimentResult::single(params.clone(), b.value, b.witness);
    Ok(match kind {
        BoundKind::Nu0 => from_bound(f_nu0(need(moment, "M")?, need(count, "N")?)?),
        BoundKind::Nubar => from_bound(f_nubar(need(moment, "M")?, need(count, "N")?)?),
        BoundKind::Exceptional => from_bound(exceptional_bound(need(moment, "M")?)?),
        BoundKind::Inf => ExperimentResult::single(
            params.clone(),
            f_inf(
                need(moment, "M")?,
                match center {
                    None | Some(CenterArg::Mean) => Center::Mean,
                    Some(CenterArg::Min) => Center::Min,
                    Some(CenterArg::Fixed(_)) => return Err(Error::Domain("--center must be min or mean".into())),
                },
            )?,
            None,
        ),
        BoundKind::Prob => ExperimentResult::single(params.clone(), f_prob(need(q, "q")?, need(count, "N")?)?, None),
        BoundKind::Arccos => ExperimentResult::single(params.clone(), arccos_bound(need(q, "q")?)?, None),
        BoundKind::MinBandwidth => ExperimentResult::single(
            params.clone(),
            min_bandwidth(need(count, "N")?, need(period, "T")?)?,
            None,
        ),
        BoundKind::ExceptionalRatio => {
            ExperimentResult::single(params.clone(), exceptional_ratio(need(moment, "M")?)?, None)
        }
        BoundKind::ThreeFreq => {
            let t = three_freq_weights(need(tau_over_t, "tau-over-t")?)?;
            let mut r = ExperimentResult::single(params.clone(), t.p, None);
            r.columns = ["p", "weight_low", "weight_mid", "weight_high"]
                .map(String::from)
                .to_vec();
            r.rows = vec![vec![t.p, t.weights[0], t.weights[1], t.weights[2]]];
            r
        }
    })
}

fn maxq(times: Vec<u64>, period: u64, widths: &[f64], opts: &SearchOptions) -> Result<ExperimentResult> {
    let times = StateTimes::new(period, times)?;
    let tau = times.average_separation();
    let widths: Vec<f64> = if widths.is_empty() {
        let steps = ((period as f64 / tau).floor() as u64).min(period);
        (0..=steps).map(|k| k as f64 * tau / period as f64).collect()
    } else {
        widths.to_vec()
    };
    let mut rows = Vec::with_capacity(widths.len());
    for &w in &widths {
        let r = max_probability(&times, w / tau, opts)?;
        rows.push(vec![w, r.value]);
    }
    let best = rows.iter().map(|r| r[1]).fold(0.0, f64::max);
    Ok(ExperimentResult {
        params: json!({
            "experiment": "maxq",
            "T": period,
            "times": times.times(),
            "tau": tau,
            "widths_times_tau": widths,
        }),
        value: best,
        witness: None,
        analytic_ref: None,
        argmin: None,
        columns: vec!["width_times_tau".into(), "max_q".into()],
        rows,
    })
}

fn default_big_period(max_count: usize, tau: u64) -> u64 {
    60.max(20 * max_count as u64) * tau
}

fn reconstruct_curve(
    input: Option<&PathBuf>,
    count: usize,
    b: f64,
    span: (f64, f64),
    points: usize,
    truncation: usize,
) -> Result<ExperimentResult> {
    let traj = match input {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| Error::Domain(format!("cannot read {}: {e}", path.display())))?;
            serde_json::from_str::<SampledTrajectory>(&text)
                .map_err(|e| Error::InvalidKernel(format!("{}: {e}", path.display())))?
        }
        None => {
            if count == 0 {
                return Err(Error::Domain("--N must be at least 1".into()));
            }
            let samples = (0..count)
                .map(|k| {
                    (0..count)
                        .map(|j| Complex64::new(if j == k { 1.0 } else { 0.0 }, 0.0))
                        .collect()
                })
                .collect();
            SampledTrajectory::periodic(samples, 1.0, b)?
        }
    };
    if points == 0 || !(span.0.is_finite() && span.1.is_finite()) {
        return Err(Error::Domain("need at least one finite time point".into()));
    }
    let d = traj.dimension();
    let mut columns = vec!["t_over_tau".to_string()];
    for k in 0..d {
        columns.push(format!("re_{k}"));
        columns.push(format!("im_{k}"));
    }
    columns.push("norm".into());
    let mut rows = Vec::with_capacity(points);
    for i in 0..points {
        let u = if points == 1 {
            span.0
        } else {
            span.0 + (span.1 - span.0) * i as f64 / (points - 1) as f64
        };
        let psi = reconstruct(&traj, u * traj.tau(), truncation)?;
        let mut row = vec![u];
        for z in &psi {
            row.push(z.re);
            row.push(z.im);
        }
        row.push(psi.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt());
        rows.push(row);
    }
    let min_norm = rows.iter().map(|r| r[r.len() - 1]).fold(f64::INFINITY, f64::min);
    Ok(ExperimentResult {
        params: json!({
            "experiment": "reconstruct",
            "input": input,
            "periodic_N": traj.periodic_n(),
            "b": traj.center_b(),
            "half_integer": traj.is_half_integer(),
            "t_from": span.0,
            "t_to": span.1,
            "points": points,
            "W": truncation,
        }),
        value: min_norm,
        witness: None,
        analytic_ref: None,
        argmin: None,
        columns,
        rows,
    })
}

/// Runs one parsed command.
pub fn execute(cli: &Cli) -> Result<ExperimentResult> {
    let opts = cli.global.search()?;
    match &cli.command {
        Command::Bound {
            kind,
            moment,
            count,
            q,
            center,
            period,
            tau_over_t,
        } => bound(*kind, *moment, *count, *q, *center, *period, *tau_over_t),
        Command::Minimize { times, period, measure } => {
            let times = StateTimes::new(*period, times.clone())?;
            min_width_numeric(&times, &measure.spec()?, &opts)
        }
        Command::Maxq { times, period, widths } => maxq(times.clone(), *period, widths, &opts),
        Command::ScanPeriod {
            count,
            tau,
            t_from,
            t_to,
            t_step,
            measure,
        } => {
            if *t_step == 0 || t_from > t_to {
                return Err(Error::Domain("need T-from <= T-to and T-step >= 1".into()));
            }
            let periods: Vec<u64> = (*t_from..=*t_to).step_by(*t_step as usize).collect();
            scan_period(*count, *tau, &measure.spec()?, &periods, &opts)
        }
        Command::Portion {
            count,
            tau,
            big_period,
            measure,
        } => {
            let big = big_period.unwrap_or(default_big_period(*count, *tau));
            portion_min(*count, *tau, &measure.spec()?, big, &opts)
        }
        Command::Stochastic {
            trials,
            max_count,
            max_distinct,
            max_len,
        } => stochastic_equal_spacing(*trials, *max_count, *max_distinct, *max_len, cli.global.seed, &opts),
        Command::Threshold {
            moments,
            counts,
            tau,
            big_period,
        } => {
            let largest = counts.iter().copied().max().unwrap_or(2);
            let big = big_period.unwrap_or(default_big_period(largest, *tau));
            threshold_scan(moments, counts, *tau, big, &opts)
        }
        Command::Reconstruct {
            input,
            count,
            b,
            t_from,
            t_to,
            points,
            truncation,
        } => reconstruct_curve(input.as_ref(), *count, *b, (*t_from, *t_to), *points, *truncation),
    }
}

fn exit_code(e: &Error) -> i32 {
    if e.is_internal() {
        2
    } else {
        1
    }
}

/// Parses `args`, runs the command and writes its output. Returns the exit code.
pub fn main_with<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 1 } else { 0 };
        }
    };
    let result = match execute(&cli) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return exit_code(&e);
        }
    };
    let text = match render(&cli, &result) {
        Ok(t) => t,
        Err(e) => {
            eprintln!("error: {e}");
            return 2;
        }
    };
    let written = match &cli.global.output {
        Some(path) => std::fs::write(path, text.as_bytes()),
        None => {
            use std::io::Write;
            std::io::stdout().write_all(text.as_bytes())
        }
    };
    match written {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: cannot write output: {e}");
            1
        }
    }
}
