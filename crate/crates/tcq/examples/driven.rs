//! The signal after a resonant drive, and the generic expectation engine.

use tcq::observables::{driven_signal, expect, thermal_jz, Observable};
use tcq::thermo::{mean_excitations, Weights};
use tcq::ModelParams;

fn main() -> tcq::Result<()> {
    let p = ModelParams::preset(40)?;
    let t = 0.3;
    let jz = thermal_jz(&p, t, 1e-9)?;
    let rabi = 2.0 * std::f64::consts::PI * 1e3;
    for step in 0..=4 {
        let time = step as f64 * 0.25 / 1e3;
        println!("t={time:.2e} s  signal {:+.6}", driven_signal(&p, t, rabi, time, 1e-9)?);
    }
    println!("<J_z> = {jz:.6}");

    // f(k) = k through the k-only path matches the thermo mean
    let k_mean = expect(Observable::K(&|k| k as f64), &p, t, 1e-9)?;
    println!("<k> {k_mean:.12} vs {:.12}", mean_excitations(Weights::FirstOrder, &p, t, 1e-9)?);
    let j2 = expect(Observable::Jk(&|tj, _| (tj as f64 / 2.0) * (tj as f64 / 2.0 + 1.0)), &p, t, 1e-9)?;
    println!("<j(j+1)> = {j2:.6}");
    let m2 = expect(Observable::Jkm(&|_, _, tm| (tm as f64 / 2.0).powi(2)), &p, t, 1e-9)?;
    println!("<m^2> = {m2:.6}");
    Ok(())
}
