//! When does the Dicke subspace dominate, and when does degeneracy win.

use tcq::combinatorics::j_star;
use tcq::regimes::{critical_size, crossover_limit, crossover_temperature, cutoff_temperature, regime_report};
use tcq::units::PRESET_OMEGA0;
use tcq::ModelParams;

fn main() -> tcq::Result<()> {
    for t in [1.0, 0.3, 0.1, 0.01] {
        println!("T={t:<5} N_c = {}", critical_size(t, PRESET_OMEGA0)?);
    }
    for n in [4u64, 121, 1000, 1_000_000] {
        println!("n={n:<8} T_c = {:.4} K", cutoff_temperature(n, PRESET_OMEGA0)?);
    }
    for t in [0.01, 0.3] {
        let r = regime_report(&ModelParams::preset(100)?, t)?;
        println!("n=100 T={t}: {:?}", r.dicke_population);
    }

    let n = 1000;
    let star = j_star(n);
    for tj in [star - 2, star, star + 2, star + 40] {
        let t = crossover_temperature(n, tj, PRESET_OMEGA0)?;
        println!("j={:<6} crossover {:?}", tj as f64 / 2.0, t);
    }
    println!("limit {:.4} K", crossover_limit(PRESET_OMEGA0));
    Ok(())
}
