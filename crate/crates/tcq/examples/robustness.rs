//! How much block-preserving noise the spectrum tolerates.

use tcq::robustness::{eigen_shift_bound, flipflop_norm, verify_shift_bound, DEFAULT_THRESHOLD};
use tcq::units::PRESET_OMEGA0;

fn main() -> tcq::Result<()> {
    // dipolar flip-flops of 1 kHz between every pair of 10 spins
    let couplings = vec![2.0 * std::f64::consts::PI * 1e3; 45];
    let norm = flipflop_norm(&couplings)?;
    let budget = eigen_shift_bound(norm, PRESET_OMEGA0, DEFAULT_THRESHOLD)?;
    println!("{budget:?}");

    let check = verify_shift_bound(1000, 10, 7)?;
    println!("{check:?}");
    Ok(())
}
