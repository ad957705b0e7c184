//! The hollow tridiagonal coupling block `L(j,k)` and its trace moments.
//!
//! `L` only depends on `j` and on the excitations above the subspace ground
//! state, `k' = k − (n/2 − j)`, so blocks are keyed by `(twice_j, k')`.
//! Squared bonds `α(2j−α+1)(k'−α+1)` are integers and are kept exact.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Block {
    pub twice_j: u64,
    pub k_prime: u64,
}

impl Block {
    pub fn new(twice_j: u64, k_prime: u64) -> Self {
        Self { twice_j, k_prime }
    }

    /// |B| = min(2j+1, k'+1)
    pub fn dim(&self) -> u64 {
        (self.twice_j + 1).min(self.k_prime + 1)
    }

    /// l_α² for 1 ≤ α < |B|, unchecked
    pub fn bond_sq(&self, alpha: u64) -> u128 {
        alpha as u128 * (self.twice_j + 1 - alpha) as u128 * (self.k_prime + 1 - alpha) as u128
    }

    pub fn bond(&self, alpha: u64) -> Result<f64> {
        if alpha == 0 || alpha >= self.dim() {
            return domain(format!("bond index {alpha} outside 1..{}", self.dim()));
        }
        Ok((self.bond_sq(alpha) as f64).sqrt())
    }

    /// squared bonds α = 1..|B|−1 as floats (exact below 2⁵³)
    pub fn bond_squares(&self) -> Vec<f64> {
        (1..self.dim()).map(|a| self.bond_sq(a) as f64).collect()
    }

    /// upper bound on max_α l_α², O(1)
    pub fn max_bond_sq_bound(&self) -> f64 {
        if self.dim() < 2 {
            return 0.0;
        }
        let a = (self.twice_j + 1) as f64;
        let b = (self.k_prime + 1) as f64;
        (a * a * (b - 1.0)).min(b * b * (a - 1.0)) / 4.0
    }

    /// Gershgorin radius 2·max l, bounds every |λ|
    pub fn spectral_radius_bound(&self) -> f64 {
        2.0 * self.max_bond_sq_bound().sqrt()
    }
}

/// `L(j,k)` as its off-diagonal bond sequence.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CouplingMatrix {
    pub block: Block,
    pub bonds: Vec<f64>,
}

impl CouplingMatrix {
    pub fn dim(&self) -> usize {
        self.bonds.len() + 1
    }
}

/// Builds the block for `(n, twice_j, k)`; fails when the block is empty.
pub fn build_matrix(n: u64, twice_j: u64, k: u64) -> Result<CouplingMatrix> {
    let geom = crate::combinatorics::subspace_geometry(n, twice_j, k)?;
    if !geom.nonempty {
        return domain(format!("block (twice_j={twice_j}, k={k}) is empty for n={n}"));
    }
    Ok(coupling_matrix(Block::new(twice_j, geom.k_prime as u64)))
}

pub fn coupling_matrix(block: Block) -> CouplingMatrix {
    let bonds = (1..block.dim()).map(|a| (block.bond_sq(a) as f64).sqrt()).collect();
    CouplingMatrix { block, bonds }
}

/// Σ_{α=1}^{m} α^p for p = 0..=5, exact.
pub(crate) fn power_sums(m: u64) -> [i128; 6] {
    let m = m as i128;
    let s1 = m * (m + 1) / 2;
    let s2 = m * (m + 1) * (2 * m + 1) / 6;
    let s3 = s1 * s1;
    let s4 = s2 * (3 * m * m + 3 * m - 1) / 5;
    let s5 = s1 * s1 * (2 * m * m + 2 * m - 1) / 3;
    [m, s1, s2, s3, s4, s5]
}

/// tr L² = 2 Σ α(a−α)(b−α) with a = 2j+1, b = k'+1, via Faulhaber sums.
pub fn second_moment_exact(block: Block) -> u128 {
    let m = block.dim() - 1;
    if m == 0 {
        return 0;
    }
    let a = (block.twice_j + 1) as i128;
    let b = (block.k_prime + 1) as i128;
    let [_, s1, s2, s3, ..] = power_sums(m);
    (2 * (a * b * s1 - (a + b) * s2 + s3)) as u128
}

pub fn second_moment_closed(block: Block) -> f64 {
    second_moment_exact(block) as f64
}

/// Var(Λ) = tr L² / |B|
pub fn var_lambda(block: Block) -> f64 {
    second_moment_closed(block) / block.dim() as f64
}

/// (γ²/2)·Var(Λ); the first-order expansion is trusted while this is below 1.
pub fn expansion_gate(block: Block, gamma: f64) -> f64 {
    0.5 * gamma * gamma * var_lambda(block)
}

/// tr(L^order) by repeated tridiagonal products, `order` ∈ {2,4,6,8}.
pub fn higher_moment(block: Block, order: u32) -> Result<f64> {
    if order % 2 == 1 {
        return domain(format!(
            "odd trace order {order} requested; odd traces of a hollow tridiagonal block vanish identically"
        ));
    }
    if !(2..=8).contains(&order) {
        return domain(format!("trace order must be one of 2, 4, 6, 8, got {order}"));
    }
    let bonds = coupling_matrix(block).bonds;
    Ok(even_trace(&bonds, (order / 2) as usize))
}

/// tr(L^{2t}) = Σ_i ‖Lᵗ e_i‖² with Lᵗ e_i confined to |r − i| ≤ t.
pub(crate) fn even_trace(bonds: &[f64], t: usize) -> f64 {
    let dim = bonds.len() + 1;
    let width = 2 * t + 1;
    let mut cur = vec![0.0; width];
    let mut next = vec![0.0; width];
    let mut total = crate::summation::CompensatedSum::new();
    for i in 0..dim {
        cur.iter_mut().for_each(|x| *x = 0.0);
        cur[t] = 1.0;
        for _ in 0..t {
            for s in 0..width {
                // local slot s is global row i + s − t
                let row = i as isize + s as isize - t as isize;
                if row < 0 || row >= dim as isize {
                    next[s] = 0.0;
                    continue;
                }
                let row = row as usize;
                let mut acc = 0.0;
                if s > 0 && row > 0 {
                    acc += bonds[row - 1] * cur[s - 1];
                }
                if s + 1 < width && row + 1 < dim {
                    acc += bonds[row] * cur[s + 1];
                }
                next[s] = acc;
            }
            std::mem::swap(&mut cur, &mut next);
        }
        total.add(cur.iter().map(|x| x * x).sum());
    }
    total.value()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MomentSet {
    pub block: Block,
    pub trace_l2: f64,
    pub var_lambda: f64,
    pub higher: BTreeMap<u32, f64>,
}

/// Second moment plus the requested even higher traces.
pub fn moments(block: Block, orders: &[u32]) -> Result<MomentSet> {
    let mut higher = BTreeMap::new();
    for &order in orders {
        higher.insert(order, higher_moment(block, order)?);
    }
    Ok(MomentSet {
        block,
        trace_l2: second_moment_closed(block),
        var_lambda: var_lambda(block),
        higher,
    })
}
