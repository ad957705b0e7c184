//! Regime diagnostics: Dicke cutoff temperature, critical ensemble size,
//! Dicke population and degeneracy crossover temperatures.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::combinatorics::{adjacent_ratio, check_twice_j, degeneracy};
use crate::error::{domain, Result};
use crate::thermo::{z_exact, DEFAULT_DELTA, EXACT_MAX_N};
use crate::units::{check_temp, ModelParams, HBAR, K_B};

/// T_c = ħω₀ / (k_B ln n)
pub fn cutoff_temperature(n: u64, omega0: f64) -> Result<f64> {
    if n < 2 {
        return domain(format!("cutoff temperature needs n >= 2, got {n}"));
    }
    Ok(HBAR * omega0 / (K_B * (n as f64).ln()))
}

/// Largest n with n < e^{ħω₀/k_BT}.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CriticalSize {
    Exact(u64),
    /// beyond the native integer range
    Approx(f64),
}

impl CriticalSize {
    pub fn as_f64(self) -> f64 {
        match self {
            CriticalSize::Exact(n) => n as f64,
            CriticalSize::Approx(x) => x,
        }
    }
}

impl fmt::Display for CriticalSize {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CriticalSize::Exact(n) => write!(f, "{n}"),
            CriticalSize::Approx(x) => write!(f, "{x:.2e}"),
        }
    }
}

pub fn critical_size(temp: f64, omega0: f64) -> Result<CriticalSize> {
    check_temp(temp)?;
    let bound = (HBAR * omega0 / (K_B * temp)).exp();
    if bound > 2f64.powi(63) {
        return Ok(CriticalSize::Approx(bound));
    }
    let floor = bound.floor();
    let n = if floor == bound { floor - 1.0 } else { floor };
    Ok(CriticalSize::Exact((n as u64).max(1)))
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DickePopulation {
    /// two-subspace estimate: Dicke ground and one-excitation states
    /// against the n−1 other one-excitation states
    pub estimate: f64,
    /// Dicke share of the exact thermal state (n ≤ 256)
    pub exact: Option<f64>,
}

pub fn dicke_population(params: &ModelParams, temp: f64) -> Result<DickePopulation> {
    let theta = params.theta(temp)?;
    let gamma = params.gamma(temp)?;
    let n = params.spins() as f64;
    let split = gamma * n.sqrt();
    let dicke = 1.0 + (split - theta).exp() + (-split - theta).exp();
    let estimate = dicke / (dicke + (n - 1.0) * (-theta).exp());
    let exact = if params.spins() <= EXACT_MAX_N {
        Some(z_exact(params, temp, DEFAULT_DELTA)?.dicke_mass)
    } else {
        None
    };
    Ok(DickePopulation { estimate, exact })
}

/// Temperature above which spin j outweighs j+1 in population,
/// ħω₀/(k_B ln(d_j/d_{j+1})); `None` when d_j ≤ d_{j+1}.
pub fn crossover_temperature(n: u64, twice_j: u64, omega0: f64) -> Result<Option<f64>> {
    let r = adjacent_ratio(n, twice_j)?;
    Ok((r > 1.0).then(|| HBAR * omega0 / (K_B * r.ln())))
}

/// Temperature at which spin j as a whole matches the Dicke subspace,
/// ħω₀(n/2−j)/(k_B ln d_j), for j below n/2.
pub fn dicke_ratio_temperature(n: u64, twice_j: u64, omega0: f64) -> Result<f64> {
    check_twice_j(n, twice_j)?;
    if twice_j == n {
        return domain("the Dicke subspace has no ratio temperature with itself");
    }
    let d = degeneracy(n, twice_j)?;
    if d.log_value <= 0.0 {
        return domain("singly degenerate spin has no ratio temperature");
    }
    Ok(HBAR * omega0 * ((n - twice_j) as f64 / 2.0) / (K_B * d.log_value))
}

/// ħω₀/(2 k_B ln 2), the large-n ceiling of the ratio temperature
pub fn crossover_limit(omega0: f64) -> f64 {
    HBAR * omega0 / (K_B * 2.0 * std::f64::consts::LN_2)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RegimeReport {
    pub t_cutoff: f64,
    pub n_critical: CriticalSize,
    pub dicke_population: DickePopulation,
    pub crossover_limit: f64,
}

pub fn regime_report(params: &ModelParams, temp: f64) -> Result<RegimeReport> {
    Ok(RegimeReport {
        t_cutoff: cutoff_temperature(params.spins().max(2), params.omega0)?,
        n_critical: critical_size(temp, params.omega0)?,
        dicke_population: dicke_population(params, temp)?,
        crossover_limit: crossover_limit(params.omega0),
    })
}
