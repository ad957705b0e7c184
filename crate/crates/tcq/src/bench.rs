//! Runtime scaling harness: median wall time per ensemble size and a
//! log-log fitted exponent.

use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};
use crate::fit::log_log_exponent;
use crate::thermo::{z_exact, z_pert, z_pert_higher, DEFAULT_DELTA, EXACT_MAX_N};
use crate::units::ModelParams;

/// each timed sample repeats the call until at least this much time passes
const MIN_SAMPLE: Duration = Duration::from_millis(20);

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Target {
    ZpertFirstOrder,
    ZpertHigher,
    ZExact,
}

impl Target {
    pub fn name(self) -> &'static str {
        match self {
            Target::ZpertFirstOrder => "zpert_first_order",
            Target::ZpertHigher => "zpert_higher",
            Target::ZExact => "z_exact",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "zpert_first_order" => Ok(Target::ZpertFirstOrder),
            "zpert_higher" => Ok(Target::ZpertHigher),
            "z_exact" => Ok(Target::ZExact),
            other => domain(format!("unknown bench target {other:?}")),
        }
    }

    /// evaluates the target once and returns its headline value
    pub fn evaluate(self, params: &ModelParams, temp: f64) -> Result<f64> {
        match self {
            Target::ZpertFirstOrder => Ok(z_pert(params, temp, DEFAULT_DELTA)?.ratio),
            Target::ZpertHigher => Ok(z_pert_higher(params, temp, DEFAULT_DELTA)?.ratio),
            Target::ZExact => Ok(z_exact(params, temp, DEFAULT_DELTA)?.excess_ratio),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScalingRun {
    pub target_op: Target,
    pub n_grid: Vec<u64>,
    /// median seconds per call
    pub wall_times: Vec<f64>,
    pub fitted_exponent: f64,
    /// the value computed at each n (identical across repetitions)
    pub values: Vec<f64>,
}

fn single_thread_pool() -> rayon::ThreadPool {
    rayon::ThreadPoolBuilder::new().num_threads(1).build().expect("thread pool")
}

/// Seconds per call, median over `repetitions` samples after a warm-up.
fn time_target(target: Target, params: &ModelParams, temp: f64, repetitions: usize) -> Result<(f64, f64)> {
    let value = target.evaluate(params, temp)?;
    let mut samples = Vec::with_capacity(repetitions);
    for _ in 0..repetitions {
        let start = Instant::now();
        let mut calls = 0u32;
        while start.elapsed() < MIN_SAMPLE || calls == 0 {
            let v = target.evaluate(params, temp)?;
            if v.to_bits() != value.to_bits() {
                return domain(format!("{} is not deterministic: {v} vs {value}", target.name()));
            }
            calls += 1;
        }
        samples.push(start.elapsed().as_secs_f64() / calls as f64);
    }
    samples.sort_by(f64::total_cmp);
    Ok((samples[samples.len() / 2], value))
}

/// Single-threaded scaling run over `n_grid` at fixed temperature.
pub fn run_scaling(target: Target, n_grid: &[u64], params: &ModelParams, temp: f64, repetitions: usize) -> Result<ScalingRun> {
    if repetitions < 3 {
        return domain(format!("need at least 3 repetitions, got {repetitions}"));
    }
    if n_grid.len() < 2 || n_grid.windows(2).any(|w| w[0] >= w[1]) {
        return domain("n grid must hold at least two strictly ascending sizes");
    }
    if target == Target::ZExact && n_grid.last().copied().unwrap_or(0) > EXACT_MAX_N {
        return domain(format!("z_exact accepts 1 <= n <= {EXACT_MAX_N}; grid reaches {}", n_grid.last().unwrap()));
    }
    let pool = single_thread_pool();
    let mut wall_times = Vec::with_capacity(n_grid.len());
    let mut values = Vec::with_capacity(n_grid.len());
    for &n in n_grid {
        let p = params.with_n(n)?;
        let (secs, value) = pool.install(|| time_target(target, &p, temp, repetitions))?;
        wall_times.push(secs);
        values.push(value);
    }
    let xs: Vec<f64> = n_grid.iter().map(|&n| n as f64).collect();
    let fitted_exponent = log_log_exponent(&xs, &wall_times)?;
    Ok(ScalingRun { target_op: target, n_grid: n_grid.to_vec(), wall_times, fitted_exponent, values })
}
