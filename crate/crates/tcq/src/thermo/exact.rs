//! Block-by-block exact partition function from full Lamb spectra.

use serde::{Deserialize, Serialize};

use super::window::ln_z0;
use crate::combinatorics::{j_floor, ln_degeneracy_unchecked};
use crate::coupling::Block;
use crate::error::{Error, Result};
use crate::spectra::{lamb_spectrum, refined_spectrum};
use crate::summation::CompensatedSum;
use crate::units::ModelParams;

/// Largest ensemble the exact path accepts.
pub const EXACT_MAX_N: u64 = 256;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExactPartition {
    pub log_z: f64,
    pub log_z0: f64,
    /// (Z_exact − Z₀)/Z₀
    pub excess_ratio: f64,
    /// the γ² part of the excess, from Σλ² of the refined spectra
    pub second_order_ratio: f64,
    /// everything beyond γ²
    pub higher_order_ratio: f64,
    /// Σ k·(excess weight)/Z₀
    pub k_excess_moment: f64,
    /// Z-share of the Dicke (j = n/2) blocks, exact weights
    pub dicke_mass: f64,
    pub k_max: u64,
    pub blocks: u64,
    /// estimated relative size of the omitted k tail
    pub tail_estimate: f64,
}

/// cosh x − 1 − x²/2
pub(crate) fn cosh_remainder(x: f64) -> f64 {
    let x2 = x * x;
    if x.abs() < 0.1 {
        x2 * x2 / 24.0
            * (1.0 + x2 / 30.0 * (1.0 + x2 / 56.0 * (1.0 + x2 / 90.0 * (1.0 + x2 / 132.0))))
    } else {
        let s = (0.5 * x).sinh();
        2.0 * s * s - 0.5 * x2
    }
}

pub(crate) fn check_exact_size(n: u64) -> Result<()> {
    if n > EXACT_MAX_N {
        return Err(Error::TooLarge { n, max: EXACT_MAX_N });
    }
    Ok(())
}

/// Visits every nonempty block in order of increasing k, then j, until
/// both the Z₀ share and the share reported by `visit` have a certified
/// geometric k-tail below δ/4. `visit` receives (block, k, w) with
/// w = d_j e^{−θk}/Z₀ and returns that block's contribution to the
/// tracked quantity. Returns (k_max, blocks, tail estimate).
pub(crate) fn enumerate_blocks(
    n: u64,
    theta: f64,
    delta: f64,
    mut visit: impl FnMut(Block, u64, f64) -> f64,
) -> (u64, u64, f64) {
    let lz0 = ln_z0(n, theta, theta);
    let mut z0_acc = 0.0;
    let mut tracked_acc = 0.0;
    let (mut prev_z0, mut prev_tracked) = (0.0f64, 0.0f64);
    let mut blocks = 0;
    let mut k = 0u64;
    loop {
        let mut z0_slice = CompensatedSum::new();
        let mut tracked = CompensatedSum::new();
        let mut tj = j_floor(n, k);
        while tj <= n {
            let block = Block::new(tj, k - (n - tj) / 2);
            let w = (ln_degeneracy_unchecked(n, tj) - theta * k as f64 - lz0).exp();
            z0_slice.add(w * block.dim() as f64);
            tracked.add(visit(block, k, w).abs());
            blocks += 1;
            tj += 2;
        }
        let (zs, ts) = (z0_slice.value(), tracked.value());
        z0_acc += zs;
        tracked_acc += ts;
        let rz = if prev_z0 > 0.0 { zs / prev_z0 } else { f64::INFINITY };
        let z_tail = if rz < 1.0 { zs * rz / (1.0 - rz) } else { f64::INFINITY };
        let (t_tail, t_ok) = if tracked_acc == 0.0 {
            (0.0, k >= 1)
        } else if ts == 0.0 {
            (0.0, prev_tracked == 0.0 && k >= 1)
        } else {
            let rt = if prev_tracked > 0.0 { ts / prev_tracked } else { f64::INFINITY };
            let tail = if rt < 1.0 { ts * rt / (1.0 - rt) } else { f64::INFINITY };
            (tail, tail <= 0.25 * delta * tracked_acc)
        };
        if (z_tail <= 0.25 * delta * z0_acc && t_ok) || (zs == 0.0 && k > n + 1) {
            let rel = z_tail / z0_acc.max(f64::MIN_POSITIVE)
                + if tracked_acc > 0.0 { t_tail / tracked_acc } else { 0.0 };
            return (k, blocks, rel);
        }
        prev_z0 = zs;
        prev_tracked = ts;
        k += 1;
    }
}

/// Exact Z = Σ_k Σ_j d_j e^{−θk} Σ_λ cosh(γλ) for n ≤ 256. Z₀ is the
/// closed form; the excess Σ_λ(cosh γλ − 1) is summed block by block with
/// its γ² part taken from double-double refined eigenvalues.
pub fn z_exact(params: &ModelParams, temp: f64, delta: f64) -> Result<ExactPartition> {
    super::check_delta(delta)?;
    let n = params.spins();
    check_exact_size(n)?;
    let theta = params.theta(temp)?;
    let gamma = params.gamma(temp)?;
    let log_z0 = ln_z0(n, theta, theta);
    let mut second = CompensatedSum::new();
    let mut higher = CompensatedSum::new();
    let mut k_moment = CompensatedSum::new();
    let mut dicke = CompensatedSum::new();
    let (k_max, blocks, tail_estimate) = enumerate_blocks(n, theta, delta, |block, k, w| {
        let (ex2, exh) = if block.dim() < 2 || gamma == 0.0 {
            (0.0, 0.0)
        } else {
            let spec = refined_spectrum(block);
            let (hi, lo) = spec.sum_squares();
            let h: f64 = spec.values().map(|l| cosh_remainder(gamma * l)).sum();
            (0.5 * gamma * gamma * (hi + lo), h)
        };
        let excess = w * (ex2 + exh);
        second.add(w * ex2);
        higher.add(w * exh);
        k_moment.add(k as f64 * excess);
        if block.twice_j == n {
            dicke.add(w * block.dim() as f64 + excess);
        }
        excess
    });
    let excess_ratio = second.value() + higher.value();
    Ok(ExactPartition {
        log_z: log_z0 + excess_ratio.ln_1p(),
        log_z0,
        excess_ratio,
        second_order_ratio: second.value(),
        higher_order_ratio: higher.value(),
        k_excess_moment: k_moment.value(),
        // lgamma rounding can push a near-certain share a few ulps past 1
        dicke_mass: (dicke.value() / (1.0 + excess_ratio)).clamp(0.0, 1.0),
        k_max,
        blocks,
        tail_estimate,
    })
}

/// Σ_λ (cosh γλ − 1) on plain double-precision spectra.
pub(crate) fn block_excess(block: Block, gamma: f64) -> f64 {
    if block.dim() < 2 || gamma == 0.0 {
        return 0.0;
    }
    lamb_spectrum(block)
        .eigenvalues
        .iter()
        .map(|l| {
            let s = (0.5 * gamma * l).sinh();
            2.0 * s * s
        })
        .sum()
}
