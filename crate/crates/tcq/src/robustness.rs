//! Eigenvalue-shift gates for block-preserving perturbations.
//!
//! Norms are Frobenius norms, which bound the spectral norm from above.

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};

pub const DEFAULT_THRESHOLD: f64 = 1e-2;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PerturbationBudget {
    pub frobenius_norm: f64,
    pub omega0: f64,
    pub admissible: bool,
    /// largest possible shift of any ordered eigenvalue
    pub shift_bound: f64,
}

/// Ordered eigenvalues move by at most ‖δH‖; admissible while
/// ‖δH‖/ω₀ ≤ `threshold`. Norm and ω₀ share units.
pub fn eigen_shift_bound(delta_h_norm: f64, omega0: f64, threshold: f64) -> Result<PerturbationBudget> {
    if !(delta_h_norm >= 0.0 && delta_h_norm.is_finite()) {
        return domain(format!("perturbation norm must be finite and non-negative, got {delta_h_norm}"));
    }
    if !(omega0 > 0.0) {
        return domain("omega0 must be positive");
    }
    Ok(PerturbationBudget {
        frobenius_norm: delta_h_norm,
        omega0,
        admissible: delta_h_norm / omega0 <= threshold,
        shift_bound: delta_h_norm,
    })
}

/// √(2 Σ d_ij²) for pairwise flip-flop couplings d_ij
pub fn flipflop_norm(couplings: &[f64]) -> Result<f64> {
    if couplings.iter().any(|d| !d.is_finite()) {
        return domain("couplings must be finite");
    }
    let scale = couplings.iter().fold(0.0f64, |m, d| m.max(d.abs()));
    if scale == 0.0 {
        return Ok(0.0);
    }
    let sum: f64 = couplings.iter().map(|d| (d / scale).powi(2)).sum();
    Ok(scale * (2.0 * sum).sqrt())
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundCheck {
    pub trials: usize,
    pub violations: usize,
    /// largest max_i |λ_i − μ_i| / ‖δH‖_F seen
    pub worst_ratio: f64,
}

fn sorted_eigenvalues(m: DMatrix<f64>) -> Vec<f64> {
    let mut e: Vec<f64> = m.symmetric_eigen().eigenvalues.iter().copied().collect();
    e.sort_by(f64::total_cmp);
    e
}

/// Random hollow tridiagonal blocks (dim 2..=max_dim) with random dense
/// symmetric perturbations; checks the ordered-eigenvalue shift bound.
pub fn verify_shift_bound(trials: usize, max_dim: usize, seed: u64) -> Result<BoundCheck> {
    if max_dim < 2 {
        return domain("max_dim must be at least 2");
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut violations = 0;
    let mut worst_ratio = 0.0f64;
    for _ in 0..trials {
        let dim = rng.gen_range(2..=max_dim);
        let mut h = DMatrix::zeros(dim, dim);
        for i in 0..dim - 1 {
            let b = rng.gen_range(0.0..10.0);
            h[(i, i + 1)] = b;
            h[(i + 1, i)] = b;
        }
        let scale = 10f64.powf(rng.gen_range(-4.0..1.0));
        let mut dh = DMatrix::zeros(dim, dim);
        for i in 0..dim {
            for j in i..dim {
                let v = scale * rng.gen_range(-1.0..1.0);
                dh[(i, j)] = v;
                dh[(j, i)] = v;
            }
        }
        let norm = dh.norm();
        let before = sorted_eigenvalues(h.clone());
        let after = sorted_eigenvalues(h + dh);
        let shift = before.iter().zip(&after).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        let ratio = shift / norm;
        worst_ratio = worst_ratio.max(ratio);
        // allow for the eigensolver's own backward error
        if shift > norm * (1.0 + 1e-10) + 1e-12 {
            violations += 1;
        }
    }
    Ok(BoundCheck { trials, violations, worst_ratio })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn budget_examples() {
        let b = eigen_shift_bound(0.0, 1.0, DEFAULT_THRESHOLD).unwrap();
        assert!(b.admissible && b.shift_bound == 0.0);
        let w = 6.0e10;
        assert!(eigen_shift_bound(1e-2 * w, w, DEFAULT_THRESHOLD).unwrap().admissible);
        assert!(!eigen_shift_bound(2e-2 * w, w, DEFAULT_THRESHOLD).unwrap().admissible);
        assert!(eigen_shift_bound(-1.0, w, DEFAULT_THRESHOLD).is_err());
    }

    #[test]
    fn flipflop_examples() {
        assert_eq!(flipflop_norm(&[]).unwrap(), 0.0);
        assert!((flipflop_norm(&[3.0]).unwrap() - 18f64.sqrt()).abs() < 1e-14);
    }
}
