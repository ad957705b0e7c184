//! Observable shifts induced by the Lamb splitting, and a generic
//! thermal-expectation engine.
//!
//! First-order quantities are built from block sums of the form
//! (γ²/2) Σ d_j e^{−θk} tr(X L²) / Z₀. Two readings are reported for each:
//! `pert_term`, the first-order weight's own contribution normalized by
//! Z₀+Z_pert, and `net`, the full first-order change of the normalized
//! expectation (which also subtracts the renormalization by Z_pert/Z₀).

mod expect;
mod traces;

use serde::{Deserialize, Serialize};

use crate::coupling::second_moment_closed;
use crate::error::Result;
use crate::fit::{polyfit, Fit, FitKind};
use crate::thermo::{check_delta, Window};
use crate::units::ModelParams;

pub use expect::{expect, Observable};
pub use traces::{block_trace_polynomials, direct_traces, BlockTracePolynomials, Convention};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ShiftComponents {
    pub pert_term: f64,
    pub net: f64,
}

impl ShiftComponents {
    fn scaled(self, s: f64) -> Self {
        Self { pert_term: self.pert_term * s, net: self.net * s }
    }
}

/// All first-order shifts at one (n, T), for one trace convention.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ShiftSet {
    pub n: u64,
    pub convention: Convention,
    /// Z_pert/Z₀
    pub ratio: f64,
    /// ⟨a†a⟩, Var(a†a), ⟨J_z⟩ of the uncoupled state
    pub mean_photons: f64,
    pub photon_variance: f64,
    pub mean_jz: f64,
    /// fractional change of ⟨a†a⟩
    pub photon_mean: ShiftComponents,
    /// fractional change of Var(a†a)
    pub photon_variance_shift: ShiftComponents,
    /// change of ⟨J_z⟩ in units of ħ
    pub jz: ShiftComponents,
}

impl ShiftSet {
    /// ħω₀-weighted J_z shift expressed as a frequency, ω₀/2π × ΔJ_z, in Hz
    pub fn jz_hz(&self, omega0: f64) -> ShiftComponents {
        self.jz.scaled(omega0 / (2.0 * std::f64::consts::PI))
    }
}

pub fn first_order_shifts(params: &ModelParams, temp: f64, delta: f64, convention: Convention) -> Result<ShiftSet> {
    check_delta(delta)?;
    let n = params.spins();
    let theta = params.theta(temp)?;
    let gamma = params.gamma(temp)?;
    let win = Window::new(n, theta, delta);
    let s = win.sum(|b, _| {
        let t = block_trace_polynomials(b, convention);
        [second_moment_closed(b), t.n_pert, t.n_pert2, t.jz_pert]
    });
    let g2 = 0.5 * gamma * gamma;
    let [r, a1, a2, aj] = s.sums.map(|x| g2 * x);

    let nbar = 1.0 / theta.exp_m1();
    let second = nbar * (2.0 * nbar + 1.0);
    let var0 = nbar * (nbar + 1.0);
    let jz0 = -0.5 * n as f64 * (0.5 * theta).tanh();
    let norm = 1.0 + r;

    let photon_mean = ShiftComponents { pert_term: a1 / norm / nbar, net: (a1 - r * nbar) / norm / nbar };
    let var_net = (a2 - r * second) - 2.0 * nbar * (a1 - r * nbar);
    let photon_variance_shift = ShiftComponents {
        pert_term: (a2 - 2.0 * nbar * a1) / norm / var0,
        net: var_net / norm / var0,
    };
    let jz = ShiftComponents { pert_term: aj / norm, net: (aj - r * jz0) / norm };
    Ok(ShiftSet {
        n,
        convention,
        ratio: r,
        mean_photons: nbar,
        photon_variance: var0,
        mean_jz: jz0,
        photon_mean,
        photon_variance_shift,
        jz,
    })
}

/// Fractional first-order shift of ⟨a†a⟩ (physical basis).
pub fn fractional_photon_mean_shift(params: &ModelParams, temp: f64, delta: f64) -> Result<ShiftComponents> {
    Ok(first_order_shifts(params, temp, delta, Convention::Physical)?.photon_mean)
}

/// Fractional first-order shift of Var(a†a) (physical basis).
pub fn fractional_photon_variance_shift(params: &ModelParams, temp: f64, delta: f64) -> Result<ShiftComponents> {
    Ok(first_order_shifts(params, temp, delta, Convention::Physical)?.photon_variance_shift)
}

/// First-order shift of ⟨J_z⟩ in units of ħ (physical basis).
pub fn jz_shift(params: &ModelParams, temp: f64, delta: f64) -> Result<ShiftComponents> {
    Ok(first_order_shifts(params, temp, delta, Convention::Physical)?.jz)
}

/// ⟨J_z⟩ of the thermal state to first order in g₀², units of ħ.
pub fn thermal_jz(params: &ModelParams, temp: f64, delta: f64) -> Result<f64> {
    let s = first_order_shifts(params, temp, delta, Convention::Physical)?;
    Ok(s.mean_jz + s.jz.net)
}

/// sin(Ωt)·⟨J_z⟩ after a resonant drive of Rabi frequency Ω for time t.
pub fn driven_signal(params: &ModelParams, temp: f64, rabi: f64, t: f64, delta: f64) -> Result<f64> {
    let amplitude = thermal_jz(params, temp, delta)?;
    let phase = rabi * t;
    // exact zero and one at the nodes the caller is most likely to probe
    let s = if phase == 0.0 { 0.0 } else if phase == std::f64::consts::FRAC_PI_2 { 1.0 } else { phase.sin() };
    Ok(s * amplitude)
}

/// A swept quantity with its least-squares fit.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ShiftReport {
    pub label: String,
    pub sweep_variable: String,
    pub grid: Vec<f64>,
    pub values: Vec<f64>,
    pub fit: Fit,
}

impl ShiftReport {
    pub fn new(label: &str, sweep_variable: &str, grid: Vec<f64>, values: Vec<f64>, kind: FitKind) -> Result<Self> {
        let fit = polyfit(&grid, &values, kind)?;
        Ok(Self { label: label.into(), sweep_variable: sweep_variable.into(), grid, values, fit })
    }
}

/// Shift sets over a grid of ensemble sizes.
pub fn sweep_n(params: &ModelParams, ns: &[u64], temp: f64, delta: f64, convention: Convention) -> Result<Vec<ShiftSet>> {
    ns.iter().map(|&n| first_order_shifts(&params.with_n(n)?, temp, delta, convention)).collect()
}
