//! Thermal populations over (j,k) or (k,m).

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::{block_excess, check_delta, check_exact_size, enumerate_blocks, Window, EXACT_MAX_N};
use crate::coupling::{second_moment_closed, Block};
use crate::error::Result;
use crate::summation::log_sum_exp;
use crate::units::ModelParams;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Axis {
    Jk,
    Km,
}

/// One population cell. On the `jk` axis `twice_m` is `None`; on the `km`
/// axis `twice_j` is `None` (summed over j).
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DistEntry {
    pub twice_j: Option<u64>,
    pub k: u64,
    pub twice_m: Option<i64>,
    pub log_weight: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ThermalDistribution {
    pub axis: Axis,
    pub entries: Vec<DistEntry>,
    /// log of the partition value the weights sum to
    pub log_z: f64,
    /// true when weights come from full spectra rather than first order
    pub exact: bool,
}

impl ThermalDistribution {
    /// fraction of the total weight satisfying `pred`
    pub fn mass_where(&self, pred: impl Fn(&DistEntry) -> bool) -> f64 {
        self.entries.iter().filter(|e| pred(e)).map(|e| (e.log_weight - self.log_z).exp()).fold(0.0, |a, b| a + b)
    }
}

/// Populations at temperature `temp`. On `jk`, blocks carry
/// d_j e^{−θk} Σ_λ cosh(γλ) from full spectra when n ≤ 256 and the
/// first-order d_j|B|e^{−θk}(1 + γ²Var/2) otherwise. On `km` (n ≤ 256) a
/// basis state α of block (j,k) has spin projection m = −j + α − 1 and
/// first-order weight d_j e^{−θk}(1 + γ²(L²)_{αα}/2).
pub fn distribution(params: &ModelParams, temp: f64, axis: Axis, delta: f64) -> Result<ThermalDistribution> {
    check_delta(delta)?;
    let n = params.spins();
    let theta = params.theta(temp)?;
    let gamma = params.gamma(temp)?;
    let g2 = 0.5 * gamma * gamma;
    let lz0 = super::ln_z0(n, theta, theta);
    let mut entries = Vec::new();
    let exact;
    match axis {
        Axis::Jk if n <= EXACT_MAX_N => {
            exact = true;
            enumerate_blocks(n, theta, delta, |block, k, w| {
                let weight = w * (block.dim() as f64 + block_excess(block, gamma));
                entries.push(DistEntry {
                    twice_j: Some(block.twice_j),
                    k,
                    twice_m: None,
                    log_weight: weight.ln() + lz0,
                });
                weight
            });
        }
        Axis::Jk => {
            exact = false;
            let win = Window::new(n, theta, delta);
            let s = win.sum(|b, _| [b.dim() as f64]);
            for sl in &s.slices {
                let k0 = (n - sl.twice_j) / 2;
                let ln_d = crate::combinatorics::ln_degeneracy_unchecked(n, sl.twice_j);
                for kp in 0..sl.k_count {
                    let block = Block::new(sl.twice_j, kp);
                    let k = k0 + kp;
                    let body = block.dim() as f64 + g2 * second_moment_closed(block);
                    entries.push(DistEntry {
                        twice_j: Some(sl.twice_j),
                        k,
                        twice_m: None,
                        log_weight: ln_d - theta * k as f64 + body.ln(),
                    });
                }
            }
        }
        Axis::Km => {
            check_exact_size(n)?;
            exact = false;
            let mut cells: BTreeMap<(u64, i64), f64> = BTreeMap::new();
            enumerate_blocks(n, theta, delta, |block, k, w| {
                let e2 = block.bond_squares();
                let dim = block.dim() as usize;
                let mut total = 0.0;
                for a in 0..dim {
                    let left = if a > 0 { e2[a - 1] } else { 0.0 };
                    let right = if a + 1 < dim { e2[a] } else { 0.0 };
                    let weight = w * (1.0 + g2 * (left + right));
                    let twice_m = -(block.twice_j as i64) + 2 * a as i64;
                    *cells.entry((k, twice_m)).or_insert(0.0) += weight;
                    total += weight;
                }
                total
            });
            entries = cells
                .into_iter()
                .map(|((k, twice_m), w)| DistEntry { twice_j: None, k, twice_m: Some(twice_m), log_weight: w.ln() + lz0 })
                .collect();
        }
    }
    let logs: Vec<f64> = entries.iter().map(|e| e.log_weight).collect();
    Ok(ThermalDistribution { axis, log_z: log_sum_exp(&logs), entries, exact })
}
