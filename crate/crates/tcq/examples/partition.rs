//! Z₀, the first-order correction and the exact sum side by side, plus
//! the free-energy and energy shifts.

use tcq::thermo::{delta_energy, delta_helmholtz, z0_closed, z0_sum, z_exact, z_pert, z_pert_higher};
use tcq::ModelParams;

fn main() -> tcq::Result<()> {
    let t = 0.3;
    println!("{:>4} {:>14} {:>14} {:>11} {:>11}", "n", "Z_pert/Z0", "exact excess", "|diff|", "bound");
    for n in [8u64, 16, 32, 40] {
        let p = ModelParams::preset(n)?;
        let pert = z_pert(&p, t, 1e-18)?;
        let exact = z_exact(&p, t, 1e-18)?;
        println!(
            "{n:>4} {:>14.6e} {:>14.6e} {:>11.3e} {:>11.3e}",
            pert.ratio,
            exact.excess_ratio,
            (exact.excess_ratio - pert.ratio).abs(),
            pert.error_bound
        );
    }

    let p = ModelParams::preset(1000)?;
    println!("ln Z0 closed {:.15} summed {:.15}", z0_closed(&p, t)?, z0_sum(&p, t, 1e-12)?);
    let first = z_pert(&p, t, 1e-9)?;
    let higher = z_pert_higher(&p, t, 1e-9)?;
    println!("n=1000 ratio {:.6e}, with gamma^4 {:.6e}, {} blocks", first.ratio, higher.ratio, first.truncation.blocks);
    let a = delta_helmholtz(&p, t, 1e-9)?;
    let e = delta_energy(&p, t, 1e-9)?;
    println!("dA = {:.4e} J, dE = {:.4e} J ({:.4e} quanta)", a.joules, e.joules, e.in_quanta);
    Ok(())
}
