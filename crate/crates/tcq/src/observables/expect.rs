//! Thermal expectations of functions that read only some block labels.
//!
//! Weights are first order: block (j,k) carries d_j e^{−θk}(|B| + γ² tr L²/2),
//! and basis state α inside it d_j e^{−θk}(1 + γ²(L²)_{αα}/2).
//!
//! The j and jk paths sum f inside the adaptive window, so each k-slice
//! runs until the f-weighted terms certify their own tail. An f that grows
//! too fast for that (faster than the Boltzmann decay) is reported as a
//! tail-mass error rather than truncated silently.

use crate::coupling::second_moment_closed;
use crate::error::{Error, Result};
use crate::summation::CompensatedSum;
use crate::thermo::{check_delta, check_exact_size, enumerate_blocks, Window};
use crate::units::ModelParams;

/// A function of the labels it declares. `twice_j`, `k`, `twice_m` as usual.
#[derive(Clone, Copy)]
pub enum Observable<'a> {
    /// f(k): the Z₀ part is summed over k with the j-sum done analytically
    K(&'a (dyn Fn(u64) -> f64 + Sync)),
    /// f(twice_j)
    J(&'a (dyn Fn(u64) -> f64 + Sync)),
    /// f(twice_j, k)
    Jk(&'a (dyn Fn(u64, u64) -> f64 + Sync)),
    /// f(twice_j, k, twice_m); needs n ≤ 256
    Jkm(&'a (dyn Fn(u64, u64, i64) -> f64 + Sync)),
}

pub fn expect(obs: Observable<'_>, params: &ModelParams, temp: f64, delta: f64) -> Result<f64> {
    check_delta(delta)?;
    let n = params.spins();
    let theta = params.theta(temp)?;
    let gamma = params.gamma(temp)?;
    let g2 = 0.5 * gamma * gamma;
    match obs {
        Observable::K(f) => expect_k(f, n, theta, g2, delta),
        Observable::J(f) => expect_jk(&|tj, _| f(tj), n, theta, g2, delta),
        Observable::Jk(f) => expect_jk(f, n, theta, g2, delta),
        Observable::Jkm(f) => {
            check_exact_size(n)?;
            let mut num = CompensatedSum::new();
            let mut den = CompensatedSum::new();
            enumerate_blocks(n, theta, delta, |block, k, w| {
                let e2 = block.bond_squares();
                let dim = block.dim() as usize;
                let mut total = 0.0;
                for a in 0..dim {
                    let diag = if a > 0 { e2[a - 1] } else { 0.0 } + if a + 1 < dim { e2[a] } else { 0.0 };
                    let weight = w * (1.0 + g2 * diag);
                    let twice_m = -(block.twice_j as i64) + 2 * a as i64;
                    num.add(weight * f(block.twice_j, k, twice_m));
                    den.add(weight);
                    total += weight;
                }
                total
            });
            Ok(num.value() / den.value())
        }
    }
}

/// checks that the outermost summed terms carry no more than δ of the result
fn check_edge(edge: f64, total: f64, delta: f64) -> Result<()> {
    let tolerance = delta * total.abs().max(f64::MIN_POSITIVE);
    if edge > tolerance || !edge.is_finite() {
        return Err(Error::TailMass { edge, tolerance });
    }
    Ok(())
}

fn expect_jk(f: &(dyn Fn(u64, u64) -> f64 + Sync), n: u64, theta: f64, g2: f64, delta: f64) -> Result<f64> {
    let win = Window::new(n, theta, delta);
    let s = win.sum(|b, k| {
        let w = b.dim() as f64 + g2 * second_moment_closed(b);
        [w, w * f(b.twice_j, k)]
    });
    let mag: f64 = s.slices.iter().map(|sl| sl.abs_sums[1]).sum();
    // a slice whose f-weighted terms never settled into a geometric tail
    let edge = s
        .slices
        .iter()
        .filter(|sl| !sl.converged || !sl.abs_sums[1].is_finite())
        .map(|sl| sl.abs_sums[1])
        .fold(0.0, f64::max);
    if !mag.is_finite() || edge > 0.0 {
        return Err(Error::TailMass { edge, tolerance: delta * mag });
    }
    check_edge(s.tails[1], mag, delta)?;
    Ok(s.sums[1] / s.sums[0])
}

fn expect_k(f: &(dyn Fn(u64) -> f64 + Sync), n: u64, theta: f64, g2: f64, delta: f64) -> Result<f64> {
    // Z₀ part: Σ_j d_j |B_{j,k}| = Σ_{s ≤ min(k,n)} C(n,s), accumulated in logs
    let lz0 = crate::thermo::ln_z0(n, theta, theta);
    let ln_fact_n = crate::combinatorics::ln_factorial(n);
    let ln_binom = |s: u64| ln_fact_n - crate::combinatorics::ln_factorial(s) - crate::combinatorics::ln_factorial(n - s);
    let (mut num, mut den, mut mag) = (CompensatedSum::new(), CompensatedSum::new(), 0.0);
    let mut ln_cum = f64::NEG_INFINITY;
    let mut prev_w = 0.0;
    let mut k = 0u64;
    let last;
    loop {
        if k <= n {
            let b = ln_binom(k);
            ln_cum = if ln_cum == f64::NEG_INFINITY {
                b
            } else {
                ln_cum.max(b) + (-(ln_cum - b).abs()).exp().ln_1p()
            };
        }
        let w = (ln_cum - theta * k as f64 - lz0).exp();
        let term = w * f(k);
        num.add(term);
        den.add(w);
        mag += term.abs();
        let r = if prev_w > 0.0 { w / prev_w } else { f64::INFINITY };
        let q = r * ((k + 2) as f64 / (k + 1) as f64).powi(8);
        // stop once the geometric tail is small and the edge term itself
        // passes the tail-mass check
        let converged = q < 1.0
            && term.abs() * q / (1.0 - q) <= 0.25 * delta * mag
            && w * q / (1.0 - q) <= 0.25 * delta * den.value()
            && term.abs() <= 0.5 * delta * mag;
        if converged {
            last = term.abs();
            break;
        }
        if w == 0.0 && k > n {
            last = term.abs();
            break;
        }
        prev_w = w;
        k += 1;
    }
    let mut num0 = num.value();
    let mut den0 = den.value();
    check_edge(last, mag, delta)?;
    if g2 > 0.0 {
        let win = Window::new(n, theta, delta);
        let s = win.sum(|b, kk| {
            let t = second_moment_closed(b);
            [t * f(kk), t]
        });
        num0 += g2 * s.sums[0];
        den0 += g2 * s.sums[1];
    }
    Ok(num0 / den0)
}
