//! Wall-time scaling of the partition paths, single threaded.

use tcq::bench::{run_scaling, Target};
use tcq::ModelParams;

fn main() -> tcq::Result<()> {
    let p = ModelParams::preset(400)?;
    for target in [Target::ZpertFirstOrder, Target::ZpertHigher] {
        let run = run_scaling(target, &[400, 1600, 6400], &p, 0.3, 3)?;
        println!("{:<18} {:?} s  exponent {:.2}", target.name(), run.wall_times, run.fitted_exponent);
    }
    let run = run_scaling(Target::ZExact, &[16, 32, 64], &p, 0.3, 3)?;
    println!("{:<18} {:?} s  exponent {:.2}", Target::ZExact.name(), run.wall_times, run.fitted_exponent);
    Ok(())
}
