//! Truncated block sums Σ_{j,k} d_j e^{−θk} f(j,k) / Z₀.
//!
//! The j-range is grown outward from the peak of the analytic j-marginal of
//! Z₀, d_j e^{−θ(n/2−j)}(1−e^{−θ(2j+1)})/(1−e^{−θ})², until a geometric tail
//! estimate drops below δ/4. Each j-slice runs over k' until the ratio bound
//! e^{−θ}((k'+2)/(k'+1))^P certifies its own tail at δ/4. Slices are
//! evaluated in parallel and reduced pairwise in a fixed order.

use rayon::prelude::*;

use crate::combinatorics::{j_star, ln_degeneracy_unchecked};
use crate::coupling::Block;
use crate::summation::{ln_one_minus_exp_neg, pairwise_rows, CompensatedSum};

/// polynomial degree assumed for the k'-growth of summands
const GROWTH_DEGREE: i32 = 8;

/// ln Z₀ for n spins, cavity and spins at the given θ values.
pub fn ln_z0(n: u64, theta_cavity: f64, theta_spin: f64) -> f64 {
    -ln_one_minus_exp_neg(theta_cavity) + n as f64 * (-theta_spin).exp().ln_1p()
}

#[derive(Clone, Copy, Debug)]
pub(crate) struct Window {
    pub n: u64,
    pub theta: f64,
    pub delta: f64,
    pub ln_z0: f64,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub(crate) struct Slice<const W: usize> {
    pub twice_j: u64,
    /// number of k' values summed (0..k_count)
    pub k_count: u64,
    pub sums: [f64; W],
    pub abs_sums: [f64; W],
    pub tails: [f64; W],
    /// false when the k' loop ended on underflow instead of a certified tail
    pub converged: bool,
}

#[derive(Clone, Debug)]
pub(crate) struct WindowSum<const W: usize> {
    pub sums: [f64; W],
    pub tails: [f64; W],
    pub slices: Vec<Slice<W>>,
}

impl<const W: usize> WindowSum<W> {
    pub fn j_range(&self) -> (u64, u64) {
        (self.slices.first().unwrap().twice_j, self.slices.last().unwrap().twice_j)
    }

    /// largest k touched
    pub fn k_max(&self, n: u64) -> u64 {
        self.slices
            .iter()
            .map(|s| (n - s.twice_j) / 2 + s.k_count.saturating_sub(1))
            .max()
            .unwrap_or(0)
    }

    pub fn blocks(&self) -> u64 {
        self.slices.iter().map(|s| s.k_count).sum()
    }
}

impl Window {
    pub fn new(n: u64, theta: f64, delta: f64) -> Self {
        Self { n, theta, delta, ln_z0: ln_z0(n, theta, theta) }
    }

    fn parity(&self) -> u64 {
        self.n % 2
    }

    /// ln of the Z₀ mass carried by spin j, relative to Z₀
    pub fn ln_marginal(&self, tj: u64) -> f64 {
        let k0 = ((self.n - tj) / 2) as f64;
        ln_degeneracy_unchecked(self.n, tj) - self.theta * k0
            + ln_one_minus_exp_neg(self.theta * (tj + 1) as f64)
            - 2.0 * ln_one_minus_exp_neg(self.theta)
            - self.ln_z0
    }

    fn peak(&self) -> u64 {
        let par = self.parity();
        let snap = |x: f64| {
            let t = x.round().clamp(par as f64, self.n as f64) as u64;
            if (t - par) % 2 == 0 { t } else { (t + 1).min(self.n) }
        };
        let guess = snap(self.n as f64 * (0.5 * self.theta).tanh());
        let mut tj = [guess, j_star(self.n)]
            .into_iter()
            .max_by(|a, b| self.ln_marginal(*a).total_cmp(&self.ln_marginal(*b)))
            .unwrap();
        loop {
            let here = self.ln_marginal(tj);
            if tj + 2 <= self.n && self.ln_marginal(tj + 2) > here {
                tj += 2;
            } else if tj >= par + 2 && self.ln_marginal(tj - 2) > here {
                tj -= 2;
            } else {
                return tj;
            }
        }
    }

    /// the j-range holding all but ~δ/4 of Z₀
    pub fn z0_range(&self) -> (u64, u64) {
        let par = self.parity();
        let m = |tj: u64| self.ln_marginal(tj).exp();
        let center = self.peak();
        let (mut lo, mut hi) = (center, center);
        let mut captured = m(center);
        let side_tail = |edge: u64, next: Option<u64>| match next {
            None => 0.0,
            Some(nx) => {
                let (a, b) = (m(edge), m(nx));
                let r = if a > 0.0 { b / a } else { 0.0 };
                if r < 1.0 { b / (1.0 - r) } else { f64::INFINITY }
            }
        };
        loop {
            let left = side_tail(lo, (lo >= par + 2).then(|| lo - 2));
            let right = side_tail(hi, (hi + 2 <= self.n).then(|| hi + 2));
            let tol = 0.25 * self.delta * captured;
            if left <= tol && right <= tol {
                return (lo, hi);
            }
            if left >= right {
                lo -= 2;
                captured += m(lo);
            } else {
                hi += 2;
                captured += m(hi);
            }
        }
    }

    pub fn slice<const W: usize, F>(&self, tj: u64, f: &F) -> Slice<W>
    where
        F: Fn(Block, u64) -> [f64; W],
    {
        let k0 = (self.n - tj) / 2;
        let base = ln_degeneracy_unchecked(self.n, tj) - self.theta * k0 as f64 - self.ln_z0;
        let x = (-self.theta).exp();
        let mut acc = [CompensatedSum::new(); W];
        let mut abs = [0.0; W];
        let mut tails = [0.0; W];
        let mut kp = 0u64;
        let mut converged = false;
        loop {
            let vals = f(Block::new(tj, kp), k0 + kp);
            let w = (base - self.theta * kp as f64).exp();
            let mut terms = [0.0; W];
            for c in 0..W {
                terms[c] = w * vals[c];
                acc[c].add(terms[c]);
                abs[c] += terms[c].abs();
            }
            let past_growth = kp > tj + 1;
            let q = x * ((kp + 2) as f64 / (kp + 1) as f64).powi(GROWTH_DEGREE);
            if q < 1.0 {
                let done = (0..W).all(|c| {
                    let tail = terms[c].abs() * q / (1.0 - q);
                    tail <= 0.25 * self.delta * abs[c] && (abs[c] > 0.0 || past_growth)
                });
                if done {
                    for c in 0..W {
                        tails[c] = terms[c].abs() * q / (1.0 - q);
                    }
                    converged = true;
                    break;
                }
            }
            if w == 0.0 && past_growth {
                break;
            }
            kp += 1;
        }
        Slice {
            twice_j: tj,
            k_count: kp + 1,
            sums: acc.map(|a| a.value()),
            abs_sums: abs,
            tails,
            converged,
        }
    }

    /// Σ d_j e^{−θk} f(block, k) / Z₀ over the truncated (j,k) set.
    pub fn sum<const W: usize, F>(&self, f: F) -> WindowSum<W>
    where
        F: Fn(Block, u64) -> [f64; W] + Sync,
    {
        let (lo, hi) = self.z0_range();
        let js: Vec<u64> = (lo..=hi).step_by(2).collect();
        let mut slices: Vec<Slice<W>> = js.par_iter().map(|&tj| self.slice(tj, &f)).collect();
        let par = self.parity();
        let mut side_tails = [0.0; W];

        // extend each side until the weighted j-tail is also negligible
        for left in [true, false] {
            loop {
                let edge = if left { slices[0] } else { *slices.last().unwrap() };
                let next_tj = if left {
                    (edge.twice_j >= par + 2).then(|| edge.twice_j - 2)
                } else {
                    (edge.twice_j + 2 <= self.n).then(|| edge.twice_j + 2)
                };
                let Some(next_tj) = next_tj else { break };
                let next = self.slice(next_tj, &f);
                let totals: [f64; W] =
                    std::array::from_fn(|c| slices.iter().map(|s| s.abs_sums[c]).sum::<f64>());
                if left {
                    slices.insert(0, next);
                } else {
                    slices.push(next);
                }
                let mut done = true;
                let mut est = [0.0; W];
                for c in 0..W {
                    let (a, b) = (edge.abs_sums[c], next.abs_sums[c]);
                    if b == 0.0 {
                        continue;
                    }
                    let r = b / a;
                    if !(r < 1.0) {
                        done = false;
                        break;
                    }
                    est[c] = b * r / (1.0 - r);
                    if est[c] > 0.25 * self.delta * totals[c] {
                        done = false;
                    }
                }
                if done {
                    for c in 0..W {
                        side_tails[c] += est[c];
                    }
                    break;
                }
            }
        }

        let rows: Vec<[f64; W]> = slices.iter().map(|s| s.sums).collect();
        let sums = pairwise_rows(&rows);
        let tails = std::array::from_fn(|c| side_tails[c] + slices.iter().map(|s| s.tails[c]).sum::<f64>());
        WindowSum { sums, tails, slices }
    }
}
