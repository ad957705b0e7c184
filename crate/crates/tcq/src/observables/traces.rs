//! Per-block traces tr(a†a L²), tr((a†a)² L²), tr(J_z L²).
//!
//! Basis state α = 1..|B| of block (j,k) holds α−1 spin-ladder steps
//! (m = −j+α−1) and p_α = k'−α+1 photons. The traces are sums over bonds,
//! Σ_α l_α² g(α), with l_α² cubic in α, and are evaluated in closed form
//! from exact power sums. [`Convention::ShiftedBasis`] uses p_α = k'−α and
//! m = −j+α instead; it differs from the physical traces by
//!   n_pert:  −tr L²
//!   jz_pert: +tr L²
//!   n_pert2: −2·n_pert + tr L²   (not a multiple of tr L²)
//! [`Convention::Printed`] evaluates a set of published coefficient
//! polynomials verbatim; they do not agree with either basis and are kept
//! only to compare fitted slopes.

use serde::{Deserialize, Serialize};

use crate::coupling::{power_sums, Block};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Convention {
    Physical,
    ShiftedBasis,
    Printed,
}

impl Convention {
    pub const ALL: [Convention; 3] = [Convention::Physical, Convention::ShiftedBasis, Convention::Printed];

    pub fn name(self) -> &'static str {
        match self {
            Convention::Physical => "physical",
            Convention::ShiftedBasis => "shifted_basis",
            Convention::Printed => "printed",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BlockTracePolynomials {
    pub block: Block,
    pub n_pert: f64,
    pub n_pert2: f64,
    pub jz_pert: f64,
}

/// Σ_{α=1}^{m} (abα − (a+b)α² + α³)·Σ_q g_q α^q
fn bond_weighted_sum(a: i128, b: i128, m: u64, g: &[i128]) -> Option<i128> {
    let l2 = [0, a * b, -(a + b), 1];
    let s = power_sums(m);
    let mut total: i128 = 0;
    for (p, &lp) in l2.iter().enumerate() {
        for (q, &gq) in g.iter().enumerate() {
            let term = lp.checked_mul(gq)?.checked_mul(s[p + q])?;
            total = total.checked_add(term)?;
        }
    }
    Some(total)
}

/// (tr L², n_pert, n_pert2, jz_pert) in the physical basis, exact.
fn physical_exact(block: Block) -> Option<[i128; 4]> {
    let m = block.dim() - 1;
    let a = (block.twice_j + 1) as i128;
    let b = (block.k_prime + 1) as i128;
    let tr = 2 * bond_weighted_sum(a, b, m, &[1])?;
    // p_α + p_{α+1} = 2b − 1 − 2α
    let n = bond_weighted_sum(a, b, m, &[2 * b - 1, -2])?;
    // p_α² + p_{α+1}² = b² + (b−1)² − 2(2b−1)α + 2α²
    let n2 = bond_weighted_sum(a, b, m, &[b * b + (b - 1) * (b - 1), -2 * (2 * b - 1), 2])?;
    // m_α + m_{α+1} = 2α − a
    let jz = bond_weighted_sum(a, b, m, &[-a, 2])?;
    Some([tr, n, n2, jz])
}

/// Direct O(|B|) bond sums; the oracle for the closed forms.
pub fn direct_traces(block: Block, convention: Convention) -> BlockTracePolynomials {
    let (kp, tj) = (block.k_prime as f64, block.twice_j as f64);
    let shift = if convention == Convention::Physical { 0.0 } else { 1.0 };
    let mut acc = [0.0f64; 3];
    for alpha in 1..block.dim() {
        let l2 = block.bond_sq(alpha) as f64;
        let a = alpha as f64;
        let (p, p_next) = (kp - a + 1.0 - shift, kp - a - shift);
        let (m, m_next) = ((a - 1.0 - tj / 2.0) + shift, (a - tj / 2.0) + shift);
        acc[0] += l2 * (p + p_next);
        acc[1] += l2 * (p * p + p_next * p_next);
        acc[2] += l2 * (m + m_next);
    }
    if convention == Convention::Printed {
        return printed(block);
    }
    BlockTracePolynomials { block, n_pert: acc[0], n_pert2: acc[1], jz_pert: acc[2] }
}

/// Closed-form traces, O(1) per block.
pub fn block_trace_polynomials(block: Block, convention: Convention) -> BlockTracePolynomials {
    if convention == Convention::Printed {
        return printed(block);
    }
    let Some([tr, n, n2, jz]) = physical_exact(block) else {
        return direct_traces(block, convention);
    };
    let (tr, n, n2, jz) = (tr as f64, n as f64, n2 as f64, jz as f64);
    match convention {
        Convention::Physical => BlockTracePolynomials { block, n_pert: n, n_pert2: n2, jz_pert: jz },
        _ => BlockTracePolynomials { block, n_pert: n - tr, n_pert2: n2 - 2.0 * n + tr, jz_pert: jz + tr },
    }
}

/// Published coefficient polynomials in (|B|, j, k'), evaluated as printed.
fn printed(block: Block) -> BlockTracePolynomials {
    let bb = block.dim() as f64;
    let j = block.twice_j as f64 / 2.0;
    let k = block.k_prime as f64;
    let b = |p: i32| bb.powi(p);
    let n_pert = -0.4 * b(5) + 0.25 * (1.0 + 4.0 * j + 4.0 * k) * b(4)
        + (-16.0 * j * k - 4.0 * k * k - 2.0 * k - 9.0) / 6.0 * b(3)
        + 0.25 * (8.0 * j * k * k - 4.0 * j * k - 4.0 * j - 4.0 * k - 1.0) * b(2)
        + (60.0 * j * k * k + 50.0 * j * k + 20.0 * k * k + 10.0 * k - 3.0) / 30.0 * bb
        + 2.0 * (-3.0 * j * k * k + 4.0 * j * k - 2.0 * j + k * k - 2.0 * k + 1.0);
    let n_pert2 = b(6) / 3.0
        + (-1.0 - 4.0 * j - 6.0 * k) / 5.0 * b(5)
        + (3.0 * j * k + 1.5 * k * k + 0.5 * k - 5.0 / 12.0) * b(4)
        + (-10.0 / 3.0 * j * k + 2.0 / 3.0 * j - 2.0 / 3.0 * k.powi(3) - k * k / 3.0 + 4.0 / 3.0 * k + 1.0 / 6.0) * b(3)
        + (2.0 * j * k.powi(3) - 8.0 * j * k * k + 4.0 * j * k - 1.5 * k * k - 0.5 * k + 1.0 / 12.0) * b(2)
        + (2.0 * j * k.powi(3) + 4.0 * j * k * k - 5.0 / 3.0 * j * k + 2.0 / 3.0 * k.powi(3) + k * k / 3.0
            - k / 3.0
            - 1.0 / 15.0)
            * bb
        + (-j * k.powi(3) + 4.0 * j + 2.0 * k.powi(3) - 6.0 * k * k + 6.0 * k - 2.0);
    let jz_pert = 0.4 * b(5) + 0.25 * (-1.0 - 6.0 * j - 2.0 * k) * b(4)
        + (8.0 * j * j + 12.0 * j * k + 2.0 * j - 3.0) / 6.0 * b(3)
        + 0.25 * (-8.0 * j * j * k + 4.0 * j * k + 6.0 * j + 2.0 * k + 1.0) * b(2)
        + (60.0 * j * j * k - 40.0 * j * j - 60.0 * j * k - 10.0 * j + 3.0) / 30.0 * bb
        + (-2.0 * j * j * k - 4.0 * j * j - 6.0 * j * k + 6.0 * j + 2.0 * k - 2.0);
    BlockTracePolynomials { block, n_pert, n_pert2, jz_pert }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dicke_one_excitation() {
        let t = block_trace_polynomials(Block::new(4, 1), Convention::Physical);
        assert_eq!((t.n_pert, t.n_pert2, t.jz_pert), (4.0, 4.0, -12.0));
    }

    #[test]
    fn zero_blocks_vanish() {
        for c in [Convention::Physical, Convention::ShiftedBasis] {
            let t = block_trace_polynomials(Block::new(6, 0), c);
            assert_eq!((t.n_pert, t.n_pert2, t.jz_pert), (0.0, 0.0, 0.0));
        }
    }

    #[test]
    fn closed_matches_direct() {
        for tj in 0..40 {
            for kp in 0..60 {
                for c in [Convention::Physical, Convention::ShiftedBasis] {
                    let b = Block::new(tj, kp);
                    let (x, y) = (block_trace_polynomials(b, c), direct_traces(b, c));
                    for (u, v) in [(x.n_pert, y.n_pert), (x.n_pert2, y.n_pert2), (x.jz_pert, y.jz_pert)] {
                        assert!((u - v).abs() <= 1e-12 * v.abs().max(1.0), "{b:?} {c:?}: {u} vs {v}");
                    }
                }
            }
        }
    }
}
