//! Angular-momentum bookkeeping for N spin-1/2 particles.
//!
//! Spins are always carried as `twice_j` so odd ensembles stay exact.

use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};
use crate::summation::CompensatedSum;

/// Largest n for which [`DegeneracyValue::exact_value`] is populated.
pub const EXACT_DEGENERACY_MAX_N: u64 = 64;

/// Number of spin-1/2 particles, at least one.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "u64", into = "u64")]
pub struct EnsembleSize(u64);

impl EnsembleSize {
    pub fn new(n: u64) -> Result<Self> {
        if n == 0 {
            return domain("ensemble size must be at least 1");
        }
        Ok(Self(n))
    }

    pub fn get(self) -> u64 {
        self.0
    }
}

impl TryFrom<u64> for EnsembleSize {
    type Error = crate::Error;
    fn try_from(n: u64) -> Result<Self> {
        Self::new(n)
    }
}

impl From<EnsembleSize> for u64 {
    fn from(n: EnsembleSize) -> u64 {
        n.0
    }
}

/// A `(j, k)` block label.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct SubspaceIndex {
    pub twice_j: u64,
    pub k: u64,
}

impl SubspaceIndex {
    pub fn new(twice_j: u64, k: u64) -> Self {
        Self { twice_j, k }
    }

    pub fn geometry(&self, n: u64) -> Result<SubspaceGeometry> {
        subspace_geometry(n, self.twice_j, self.k)
    }

    /// the coupling block, or `None` when `(j,k)` lies below the subspace ground state
    pub fn block(&self, n: u64) -> Result<Option<crate::Block>> {
        let g = self.geometry(n)?;
        Ok(g.nonempty.then(|| crate::Block::new(self.twice_j, g.k_prime as u64)))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DegeneracyValue {
    pub log_value: f64,
    pub exact_value: Option<u128>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SubspaceGeometry {
    pub k0: u64,
    pub k_prime: i64,
    pub dim_b: u64,
    pub nonempty: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SupportWindow {
    pub j_lo: u64,
    pub j_hi: u64,
    pub mass_captured: f64,
}

impl SupportWindow {
    /// number of `j` values in the window
    pub fn width(&self) -> u64 {
        (self.j_hi - self.j_lo) / 2 + 1
    }

    pub fn contains(&self, twice_j: u64) -> bool {
        (self.j_lo..=self.j_hi).contains(&twice_j)
    }
}

pub fn check_twice_j(n: u64, twice_j: u64) -> Result<()> {
    if twice_j > n || (n - twice_j) % 2 != 0 {
        return domain(format!("twice_j={twice_j} is not a valid total spin for n={n}"));
    }
    Ok(())
}

/// ln(x!) for integer x
pub fn ln_factorial(x: u64) -> f64 {
    if x < 2 {
        0.0
    } else {
        libm::lgamma(x as f64 + 1.0)
    }
}

/// ln d_j without argument validation; used on hot paths.
pub(crate) fn ln_degeneracy_unchecked(n: u64, twice_j: u64) -> f64 {
    let lower = (n - twice_j) / 2;
    let upper = (n + twice_j) / 2 + 1;
    ln_factorial(n) + ((twice_j + 1) as f64).ln() - ln_factorial(lower) - ln_factorial(upper)
}

fn exact_degeneracy(n: u64, twice_j: u64) -> u128 {
    let lower = (n - twice_j) / 2;
    let upper = (n + twice_j) / 2 + 1;
    let mut binom: u128 = 1;
    for i in 0..lower {
        binom = binom * (n - i) as u128 / (i + 1) as u128;
    }
    binom * (twice_j + 1) as u128 / upper as u128
}

/// Number of copies of the spin-j irrep in (C²)^⊗n.
pub fn degeneracy(n: u64, twice_j: u64) -> Result<DegeneracyValue> {
    EnsembleSize::new(n)?;
    check_twice_j(n, twice_j)?;
    if n <= EXACT_DEGENERACY_MAX_N {
        let exact = exact_degeneracy(n, twice_j);
        Ok(DegeneracyValue { log_value: (exact as f64).ln(), exact_value: Some(exact) })
    } else {
        Ok(DegeneracyValue { log_value: ln_degeneracy_unchecked(n, twice_j), exact_value: None })
    }
}

/// d_j / d_{j+1} in closed form, for `twice_j + 2 ≤ n`.
pub fn adjacent_ratio(n: u64, twice_j: u64) -> Result<f64> {
    check_twice_j(n, twice_j)?;
    if twice_j + 2 > n {
        return domain("j+1 exceeds n/2");
    }
    let (nf, tj) = (n as f64, twice_j as f64);
    Ok(((tj + 1.0) / (tj + 3.0)) * ((nf + tj + 4.0) / (nf - tj)))
}

pub fn subspace_geometry(n: u64, twice_j: u64, k: u64) -> Result<SubspaceGeometry> {
    check_twice_j(n, twice_j)?;
    let k0 = (n - twice_j) / 2;
    let k_prime = k as i64 - k0 as i64;
    let (dim_b, nonempty) = if k_prime >= 0 {
        ((twice_j + 1).min(k_prime as u64 + 1), true)
    } else {
        (0, false)
    };
    Ok(SubspaceGeometry { k0, k_prime, dim_b, nonempty })
}

/// Smallest `twice_j` with a nonempty `(j,k)` block.
pub fn j_floor(n: u64, k: u64) -> u64 {
    n.saturating_sub(2 * k).max(n % 2)
}

/// `d_{j+1} ≥ d_j`, decided in integer arithmetic.
fn next_not_smaller(n: u64, twice_j: u64) -> bool {
    let lhs = (twice_j as u128 + 1) * (n as u128 + twice_j as u128 + 4);
    let rhs = (twice_j as u128 + 3) * (n as u128 - twice_j as u128);
    lhs <= rhs
}

/// The most degenerate `twice_j`; ties go to the larger j.
pub fn j_star(n: u64) -> u64 {
    let mut tj = n % 2;
    while tj + 2 <= n && next_not_smaller(n, tj) {
        tj += 2;
    }
    tj
}

/// Contiguous window around j* holding at least `1 − delta` of the
/// degeneracy mass Σ d_j(2j+1) = 2ⁿ. Grows toward whichever neighbour
/// carries more mass.
pub fn support_window(n: u64, delta: f64) -> Result<SupportWindow> {
    EnsembleSize::new(n)?;
    if !(delta > 0.0 && delta < 1.0) {
        return domain(format!("delta must lie in (0,1), got {delta}"));
    }
    let ln_total = n as f64 * std::f64::consts::LN_2;
    let mass = |tj: u64| (ln_degeneracy_unchecked(n, tj) + ((tj + 1) as f64).ln() - ln_total).exp();
    let lowest = n % 2;
    let center = j_star(n);
    let (mut lo, mut hi) = (center, center);
    let mut captured = CompensatedSum::new();
    captured.add(mass(center));
    while captured.value() < 1.0 - delta {
        let left = (lo >= lowest + 2).then(|| mass(lo - 2));
        let right = (hi + 2 <= n).then(|| mass(hi + 2));
        match (left, right) {
            (None, None) => break,
            (Some(l), Some(r)) if l > r => {
                lo -= 2;
                captured.add(l);
            }
            (Some(l), None) => {
                lo -= 2;
                captured.add(l);
            }
            (_, Some(r)) => {
                hi += 2;
                captured.add(r);
            }
        }
    }
    let full = lo == lowest && hi == n;
    let mass_captured = if full { 1.0 } else { captured.value().min(1.0) };
    Ok(SupportWindow { j_lo: lo, j_hi: hi, mass_captured })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_degeneracies() {
        let d = |tj| degeneracy(4, tj).unwrap().exact_value.unwrap();
        assert_eq!((d(4), d(2), d(0)), (1, 3, 2));
        assert!(degeneracy(4, 3).is_err());
        assert!(degeneracy(4, 6).is_err());
    }

    #[test]
    fn geometry_examples() {
        let g = subspace_geometry(4, 4, 1).unwrap();
        assert_eq!((g.k0, g.k_prime, g.dim_b, g.nonempty), (0, 1, 2, true));
        let g = subspace_geometry(4, 2, 0).unwrap();
        assert_eq!((g.k0, g.k_prime, g.dim_b, g.nonempty), (1, -1, 0, false));
        let g = subspace_geometry(100, 10, 60).unwrap();
        assert_eq!((g.k0, g.k_prime, g.dim_b), (45, 15, 11));
    }

    #[test]
    fn floors() {
        assert_eq!(j_floor(4, 1), 2);
        assert_eq!(j_floor(4, 10), 0);
        assert_eq!(j_floor(5, 10), 1);
    }

    #[test]
    fn j_star_small() {
        assert_eq!(j_star(2), 2);
        assert_eq!(j_star(1), 1);
    }

    #[test]
    fn tiny_window_saturates() {
        let w = support_window(4, 1e-12).unwrap();
        assert_eq!((w.j_lo, w.j_hi, w.mass_captured), (0, 4, 1.0));
    }
}
