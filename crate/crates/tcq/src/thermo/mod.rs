//! Partition functions, thermodynamic shifts and thermal distributions.
//!
//! Closed-form Z₀ anchors every sum: block sums are accumulated as ratios
//! to Z₀, which keeps them O(1) for any n. Temperatures are in kelvin and
//! frequencies in rad/s; everything inside runs on θ = ħω₀/k_BT and
//! γ = ħg₀/k_BT.

mod distribution;
mod exact;
mod window;

use serde::{Deserialize, Serialize};

use crate::coupling::{expansion_gate, second_moment_closed, Block};
use crate::error::{domain, Error, Result};
use crate::units::{check_temp, theta, ModelParams, K_B};

pub use distribution::{distribution, Axis, DistEntry, ThermalDistribution};
pub use exact::{z_exact, ExactPartition, EXACT_MAX_N};
pub use window::ln_z0;
pub(crate) use exact::{block_excess, check_exact_size, enumerate_blocks};
pub(crate) use window::{Window, WindowSum};

/// Default truncation target.
pub const DEFAULT_DELTA: f64 = 1e-9;

/// relative floating-point allowance folded into the error bounds
const ROUNDING_ALLOWANCE: f64 = 32.0 * f64::EPSILON;

pub(crate) fn check_delta(delta: f64) -> Result<()> {
    if delta > 0.0 && delta < 1.0 {
        Ok(())
    } else {
        domain(format!("delta must lie in (0,1), got {delta}"))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Truncation {
    pub k_max: u64,
    /// twice_j range summed
    pub j_window: (u64, u64),
    /// highest power of γ kept
    pub order: u32,
    pub blocks: u64,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PartitionDecomposition {
    pub log_z0: f64,
    pub log_zpert: f64,
    /// Z_pert / Z₀
    pub ratio: f64,
    pub truncation: Truncation,
    /// bound on |Z − Z₀ − Z_pert| / Z₀ covering the dropped orders,
    /// truncation tails and rounding
    pub error_bound: f64,
}

impl PartitionDecomposition {
    pub fn log_total(&self) -> f64 {
        self.log_z0 + self.ratio.ln_1p()
    }
}

/// ln Z₀ = −ln(1−e^{−θ}) + n ln(1+e^{−θ})
pub fn z0_closed(params: &ModelParams, temp: f64) -> Result<f64> {
    let th = params.theta(temp)?;
    Ok(ln_z0(params.spins(), th, th))
}

/// ln Z₀ with the cavity and the spins at different temperatures.
pub fn z0_closed_split(params: &ModelParams, temp_cavity: f64, temp_spins: f64) -> Result<f64> {
    check_temp(temp_cavity)?;
    check_temp(temp_spins)?;
    Ok(ln_z0(params.spins(), theta(params.omega0, temp_cavity), theta(params.omega0, temp_spins)))
}

/// ln of the truncated double sum Σ_k e^{−θk} Σ_j d_j |B_{j,k}|.
pub fn z0_sum(params: &ModelParams, temp: f64, delta: f64) -> Result<f64> {
    check_delta(delta)?;
    let win = Window::new(params.spins(), params.theta(temp)?, delta);
    let s = win.sum(|b, _| [b.dim() as f64]);
    Ok(win.ln_z0 + s.sums[0].ln())
}

fn truncation<const W: usize>(n: u64, s: &WindowSum<W>, order: u32) -> Truncation {
    Truncation { k_max: s.k_max(n), j_window: s.j_range(), order, blocks: s.blocks() }
}

/// the largest expansion gate over the summed blocks; var grows with k'
fn check_gate<const W: usize>(n: u64, s: &WindowSum<W>, gamma: f64) -> Result<()> {
    let worst = s
        .slices
        .iter()
        .map(|sl| {
            let block = Block::new(sl.twice_j, sl.k_count - 1);
            (expansion_gate(block, gamma), sl.twice_j, (n - sl.twice_j) / 2 + sl.k_count - 1)
        })
        .max_by(|a, b| a.0.total_cmp(&b.0));
    match worst {
        Some((gate, twice_j, k)) if gate >= 1.0 => Err(Error::ExpansionInvalid { twice_j, k, gate }),
        _ => Ok(()),
    }
}

/// First-order term Z_pert = (γ²/2) Σ d_j e^{−θk} tr L²(j,k).
pub fn z_pert(params: &ModelParams, temp: f64, delta: f64) -> Result<PartitionDecomposition> {
    check_delta(delta)?;
    let n = params.spins();
    let th = params.theta(temp)?;
    let gamma = params.gamma(temp)?;
    let win = Window::new(n, th, delta);
    let s = win.sum(|b, _| {
        let t = second_moment_closed(b);
        let ml = b.max_bond_sq_bound();
        // tr L⁴ ≤ λ_max² tr L², and cosh x − 1 − x²/2 ≤ (x⁴/24) cosh x
        [t, t * 4.0 * ml * (gamma * 2.0 * ml.sqrt()).cosh()]
    });
    check_gate(n, &s, gamma)?;
    let g2 = 0.5 * gamma * gamma;
    let ratio = g2 * s.sums[0];
    let error_bound = gamma.powi(4) / 24.0 * s.sums[1] + g2 * s.tails[0] + ROUNDING_ALLOWANCE * ratio;
    Ok(PartitionDecomposition {
        log_z0: win.ln_z0,
        log_zpert: win.ln_z0 + ratio.ln(),
        ratio,
        truncation: truncation(n, &s, 2),
        error_bound,
    })
}

/// Z_pert carried to γ⁴ with tr L⁴ from the bond recursion, O(|B|) per block.
pub fn z_pert_higher(params: &ModelParams, temp: f64, delta: f64) -> Result<PartitionDecomposition> {
    check_delta(delta)?;
    let n = params.spins();
    let th = params.theta(temp)?;
    let gamma = params.gamma(temp)?;
    let win = Window::new(n, th, delta);
    let s = win.sum(|b, _| {
        let t2 = second_moment_closed(b);
        let bonds = crate::coupling::coupling_matrix(b).bonds;
        let t4 = crate::coupling::even_trace(&bonds, 2);
        let ml = b.max_bond_sq_bound();
        [t2, t4, t2 * 16.0 * ml * ml * (gamma * 2.0 * ml.sqrt()).cosh()]
    });
    check_gate(n, &s, gamma)?;
    let g2 = 0.5 * gamma * gamma;
    let g4 = gamma.powi(4) / 24.0;
    let ratio = g2 * s.sums[0] + g4 * s.sums[1];
    let error_bound = gamma.powi(6) / 720.0 * s.sums[2]
        + g2 * s.tails[0]
        + g4 * s.tails[1]
        + ROUNDING_ALLOWANCE * ratio;
    Ok(PartitionDecomposition {
        log_z0: win.ln_z0,
        log_zpert: win.ln_z0 + ratio.ln(),
        ratio,
        truncation: truncation(n, &s, 4),
        error_bound,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Weights {
    /// uncoupled, Z₀
    Z0,
    /// the normalized first-order weights d_j e^{−θk} tr L² alone
    Zpert,
    /// Z₀ + Z_pert
    FirstOrder,
    /// full spectra (n ≤ 256)
    Exact,
}

/// ⟨k⟩ under Z₀: 1/(e^θ−1) + n e^{−θ}/(1+e^{−θ})
pub fn mean_excitations_closed(n: u64, theta: f64) -> f64 {
    1.0 / theta.exp_m1() + n as f64 / (theta.exp() + 1.0)
}

/// Σ k w(k) / Σ w(k) for the chosen weight family.
pub fn mean_excitations(which: Weights, params: &ModelParams, temp: f64, delta: f64) -> Result<f64> {
    check_delta(delta)?;
    let n = params.spins();
    let th = params.theta(temp)?;
    let k0 = mean_excitations_closed(n, th);
    match which {
        Weights::Z0 => Ok(k0),
        Weights::Zpert | Weights::FirstOrder => {
            let gamma = params.gamma(temp)?;
            let win = Window::new(n, th, delta);
            let s = win.sum(|b, k| {
                let t = second_moment_closed(b);
                [t, k as f64 * t]
            });
            check_gate(n, &s, gamma)?;
            if which == Weights::Zpert {
                if s.sums[0] == 0.0 {
                    return domain("the first-order weights vanish identically");
                }
                Ok(s.sums[1] / s.sums[0])
            } else {
                let g2 = 0.5 * gamma * gamma;
                Ok((k0 + g2 * s.sums[1]) / (1.0 + g2 * s.sums[0]))
            }
        }
        Weights::Exact => {
            let ex = z_exact(params, temp, delta)?;
            Ok((k0 + ex.k_excess_moment) / (1.0 + ex.excess_ratio))
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct HelmholtzShift {
    /// −βΔA ≈ Z_pert/Z₀
    pub minus_beta_delta_a: f64,
    pub joules: f64,
}

pub fn delta_helmholtz(params: &ModelParams, temp: f64, delta: f64) -> Result<HelmholtzShift> {
    let z = z_pert(params, temp, delta)?;
    Ok(HelmholtzShift { minus_beta_delta_a: z.ratio, joules: -z.ratio * K_B * temp })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct EnergyShift {
    pub joules: f64,
    /// the same shift divided by ħω₀
    pub in_quanta: f64,
    pub mean_k_pert: f64,
    pub mean_k_z0: f64,
    pub ratio: f64,
}

/// ΔE = ((⟨k⟩_pert − ⟨k⟩₀)ħω₀ − 2k_BT)·Z_pert/Z₀
pub fn delta_energy(params: &ModelParams, temp: f64, delta: f64) -> Result<EnergyShift> {
    let z = z_pert(params, temp, delta)?;
    let th = params.theta(temp)?;
    let mean_k_z0 = mean_excitations_closed(params.spins(), th);
    if z.ratio == 0.0 {
        return Ok(EnergyShift { joules: 0.0, in_quanta: 0.0, mean_k_pert: mean_k_z0, mean_k_z0, ratio: 0.0 });
    }
    let mean_k_pert = mean_excitations(Weights::Zpert, params, temp, delta)?;
    let quantum = crate::units::HBAR * params.omega0;
    let joules = ((mean_k_pert - mean_k_z0) * quantum - 2.0 * K_B * temp) * z.ratio;
    Ok(EnergyShift { joules, in_quanta: joules / quantum, mean_k_pert, mean_k_z0, ratio: z.ratio })
}
