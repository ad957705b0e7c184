//! SI boundary and the dimensionless parameters used internally.

use serde::{Deserialize, Serialize};

use crate::combinatorics::EnsembleSize;
use crate::error::{domain, Result};

/// reduced Planck constant, J·s
pub const HBAR: f64 = 1.054_571_817e-34;
/// Boltzmann constant, J/K
pub const K_B: f64 = 1.380_649e-23;

/// preset cavity frequency, 2π × 10 GHz
pub const PRESET_OMEGA0: f64 = 2.0 * std::f64::consts::PI * 1e10;
/// preset single-spin coupling, 2π × 100 Hz
pub const PRESET_G0: f64 = 2.0 * std::f64::consts::PI * 100.0;
/// preset temperature in kelvin
pub const PRESET_TEMP: f64 = 0.3;

/// Ensemble size plus the two frequencies, both in rad/s.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ModelParams {
    pub n: EnsembleSize,
    pub omega0: f64,
    pub g0: f64,
}

impl ModelParams {
    pub fn new(n: u64, omega0: f64, g0: f64) -> Result<Self> {
        let n = EnsembleSize::new(n)?;
        if !(omega0 > 0.0 && omega0.is_finite()) {
            return domain(format!("omega0 must be positive, got {omega0}"));
        }
        if !(g0 >= 0.0 && g0.is_finite()) {
            return domain(format!("g0 must be non-negative, got {g0}"));
        }
        Ok(Self { n, omega0, g0 })
    }

    /// `n` spins at the preset frequencies
    pub fn preset(n: u64) -> Result<Self> {
        Self::new(n, PRESET_OMEGA0, PRESET_G0)
    }

    pub fn with_g0(self, g0: f64) -> Self {
        Self { g0, ..self }
    }

    pub fn with_n(self, n: u64) -> Result<Self> {
        Self::new(n, self.omega0, self.g0)
    }

    pub fn spins(&self) -> u64 {
        self.n.get()
    }

    /// ħω₀/(k_B T)
    pub fn theta(&self, temp: f64) -> Result<f64> {
        check_temp(temp)?;
        Ok(theta(self.omega0, temp))
    }

    /// ħg₀/(k_B T)
    pub fn gamma(&self, temp: f64) -> Result<f64> {
        check_temp(temp)?;
        Ok(HBAR * self.g0 / (K_B * temp))
    }

    /// g₀√n / ω₀, the coarse rotating-wave diagnostic
    pub fn rwa_ratio(&self) -> f64 {
        self.g0 * (self.spins() as f64).sqrt() / self.omega0
    }
}

pub(crate) fn check_temp(temp: f64) -> Result<()> {
    if temp > 0.0 && temp.is_finite() {
        Ok(())
    } else {
        domain(format!("temperature must be positive, got {temp}"))
    }
}

pub fn theta(omega0: f64, temp: f64) -> f64 {
    HBAR * omega0 / (K_B * temp)
}

/// temperature at which ħω/k_B T equals `theta`
pub fn temp_for_theta(omega0: f64, theta: f64) -> f64 {
    HBAR * omega0 / (K_B * theta)
}
