//! Exact eigenvalues of the coupling blocks.
//!
//! Bisection on Sturm sequences is the main path; an implicit-shift QL
//! sweep handles small blocks. Eigenvalues are dimensionless (multiply by
//! g₀ for energies) and returned ascending.

mod dd;

use serde::{Deserialize, Serialize};

use crate::coupling::{coupling_matrix, second_moment_closed, Block};
use dd::Dd;

/// Blocks up to this dimension use implicit QL under [`Solver::Auto`].
pub const QL_MAX_DIM: u64 = 32;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Solver {
    Auto,
    Bisection,
    Ql,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LambSpectrum {
    pub block: Block,
    pub eigenvalues: Vec<f64>,
}

impl LambSpectrum {
    pub fn max_abs(&self) -> f64 {
        self.eigenvalues.iter().fold(0.0, |m, x| m.max(x.abs()))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpectrumChecks {
    pub sum_residual: f64,
    pub pairing_residual: f64,
    pub moment2_residual: f64,
}

pub fn lamb_spectrum(block: Block) -> LambSpectrum {
    lamb_spectrum_with(block, Solver::Auto)
}

pub fn lamb_spectrum_with(block: Block, solver: Solver) -> LambSpectrum {
    let bonds = coupling_matrix(block).bonds;
    let use_ql = match solver {
        Solver::Auto => block.dim() <= QL_MAX_DIM,
        Solver::Bisection => false,
        Solver::Ql => true,
    };
    let mut eigenvalues = if use_ql { ql_eigenvalues(&bonds) } else { bisection_eigenvalues(&bonds) };
    eigenvalues.sort_by(f64::total_cmp);
    snap_zero(&mut eigenvalues);
    LambSpectrum { block, eigenvalues }
}

fn snap_zero(eigs: &mut [f64]) {
    if eigs.len() % 2 == 0 {
        return;
    }
    let max = eigs.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    let (idx, val) = eigs
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.abs().total_cmp(&b.1.abs()))
        .map(|(i, v)| (i, *v))
        .unwrap();
    debug_assert!(val.abs() <= 1e-12 * max.max(1.0), "odd block without a zero eigenvalue: {val}");
    if val.abs() <= 1e-12 * max.max(1.0) {
        eigs[idx] = 0.0;
    }
}

/// Number of eigenvalues strictly below `x` for the hollow matrix with
/// squared bonds `e2`.
fn sturm_count(e2: &[f64], x: f64, pivmin: f64) -> usize {
    let mut count = 0;
    let mut q = -x;
    if q.abs() < pivmin {
        q = -pivmin;
    }
    if q < 0.0 {
        count += 1;
    }
    for &b in e2 {
        q = -x - b / q;
        if q.abs() < pivmin {
            q = -pivmin;
        }
        if q < 0.0 {
            count += 1;
        }
    }
    count
}

fn gershgorin(bonds: &[f64]) -> f64 {
    let dim = bonds.len() + 1;
    (0..dim)
        .map(|i| {
            let left = if i > 0 { bonds[i - 1] } else { 0.0 };
            let right = if i < bonds.len() { bonds[i] } else { 0.0 };
            left + right
        })
        .fold(0.0, f64::max)
}

fn bisection_eigenvalues(bonds: &[f64]) -> Vec<f64> {
    let dim = bonds.len() + 1;
    let radius = gershgorin(bonds);
    if radius == 0.0 {
        return vec![0.0; dim];
    }
    let e2: Vec<f64> = bonds.iter().map(|b| b * b).collect();
    let pivmin = f64::MIN_POSITIVE * radius.max(1.0) * radius.max(1.0);
    let bound = radius * (1.0 + 4.0 * f64::EPSILON) + f64::MIN_POSITIVE;
    (0..dim)
        .map(|i| {
            let (mut lo, mut hi) = (-bound, bound);
            for _ in 0..200 {
                let mid = 0.5 * (lo + hi);
                if mid <= lo || mid >= hi {
                    break;
                }
                if sturm_count(&e2, mid, pivmin) > i {
                    hi = mid;
                } else {
                    lo = mid;
                }
                if hi - lo <= 2.0 * f64::EPSILON * lo.abs().max(hi.abs()) {
                    break;
                }
            }
            0.5 * (lo + hi)
        })
        .collect()
}

/// Implicit-shift QL on a zero-diagonal tridiagonal matrix.
fn ql_eigenvalues(bonds: &[f64]) -> Vec<f64> {
    let n = bonds.len() + 1;
    let mut d = vec![0.0f64; n];
    let mut e: Vec<f64> = bonds.to_vec();
    e.push(0.0);
    for l in 0..n {
        let mut iter = 0;
        loop {
            let mut m = l;
            while m + 1 < n {
                let dd = d[m].abs() + d[m + 1].abs();
                if e[m].abs() <= f64::EPSILON * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iter += 1;
            if iter > 60 {
                break;
            }
            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = g.hypot(1.0);
            g = d[m] - d[l] + e[l] / (g + r.copysign(g));
            let (mut s, mut c, mut p) = (1.0, 1.0, 0.0);
            let mut i = m;
            let mut underflow = false;
            while i > l {
                i -= 1;
                let f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == 0.0 {
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    underflow = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
            }
            if underflow {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }
    d
}

pub fn spectrum_checks(spec: &LambSpectrum) -> SpectrumChecks {
    let eigs = &spec.eigenvalues;
    let sum_residual = crate::summation::compensated(eigs.iter().copied()).abs();
    let pairing_residual = eigs
        .iter()
        .map(|&x| nearest_distance(eigs, -x))
        .fold(0.0, f64::max);
    let sum_sq = crate::summation::compensated(eigs.iter().map(|x| x * x));
    let moment2_residual = (sum_sq - second_moment_closed(spec.block)).abs() / sum_sq.max(1.0);
    SpectrumChecks { sum_residual, pairing_residual, moment2_residual }
}

fn nearest_distance(sorted: &[f64], x: f64) -> f64 {
    let idx = sorted.partition_point(|&v| v < x);
    let mut best = f64::INFINITY;
    if idx < sorted.len() {
        best = best.min((sorted[idx] - x).abs());
    }
    if idx > 0 {
        best = best.min((sorted[idx - 1] - x).abs());
    }
    best
}

/// Eigenvalues of one block refined to double-double precision, ascending.
#[derive(Clone, Debug)]
pub struct RefinedSpectrum {
    pub block: Block,
    eigenvalues: Vec<Dd>,
}

impl RefinedSpectrum {
    pub fn values(&self) -> impl Iterator<Item = f64> + '_ {
        self.eigenvalues.iter().map(|x| x.to_f64())
    }

    /// Σλ² as a (hi, lo) pair
    pub fn sum_squares(&self) -> (f64, f64) {
        let s = self.eigenvalues.iter().fold(Dd::ZERO, |acc, &x| acc + x * x);
        (s.hi, s.lo)
    }

    /// Σλ² − tr L² evaluated in double-double
    pub fn sum_squares_defect(&self) -> f64 {
        let s = self.eigenvalues.iter().fold(Dd::ZERO, |acc, &x| acc + x * x);
        let exact = crate::coupling::second_moment_exact(self.block);
        let hi = (exact >> 64) as f64 * 18446744073709551616.0;
        let lo = (exact & u64::MAX as u128) as f64;
        (s - Dd::from_f64(hi) - Dd::from_f64(lo)).to_f64()
    }
}

fn sturm_count_dd(e2: &[f64], x: Dd, pivmin: f64) -> usize {
    let mut count = 0;
    let fix = |q: Dd| if q.hi.abs() < pivmin { Dd::from_f64(-pivmin) } else { q };
    let mut q = fix(-x);
    if q.is_negative() {
        count += 1;
    }
    for &b in e2 {
        q = fix(-x - Dd::from_f64(b) / q);
        if q.is_negative() {
            count += 1;
        }
    }
    count
}

/// Refines the positive half of the spectrum by double-double bisection and
/// mirrors it. The squared bonds are integers, so the Sturm recurrence runs
/// on the exact matrix.
pub fn refined_spectrum(block: Block) -> RefinedSpectrum {
    let coarse = lamb_spectrum(block).eigenvalues;
    let e2 = block.bond_squares();
    let scale = coarse.iter().fold(0.0f64, |m, x| m.max(x.abs())).max(1.0);
    let pivmin = 1e-280;
    let dim = coarse.len();
    let first_positive = dim / 2 + dim % 2;
    let mut upper = Vec::with_capacity(dim - first_positive);
    for (i, &guess) in coarse.iter().enumerate().skip(first_positive) {
        let mut width = 64.0 * f64::EPSILON * scale;
        let (mut lo, mut hi);
        loop {
            lo = Dd::from_f64(guess - width);
            hi = Dd::from_f64(guess + width);
            if sturm_count_dd(&e2, lo, pivmin) <= i && sturm_count_dd(&e2, hi, pivmin) > i {
                break;
            }
            width *= 4.0;
        }
        for _ in 0..70 {
            let mid = (lo + hi).half();
            if mid == lo || mid == hi {
                break;
            }
            if sturm_count_dd(&e2, mid, pivmin) > i {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        upper.push((lo + hi).half());
    }
    let mut eigenvalues: Vec<Dd> = upper.iter().rev().map(|&x| -x).collect();
    if dim % 2 == 1 {
        eigenvalues.push(Dd::ZERO);
    }
    eigenvalues.extend(upper);
    RefinedSpectrum { block, eigenvalues }
}
