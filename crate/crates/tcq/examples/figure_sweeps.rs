//! Photon-number and J_z shifts over n = 100..1000 at 0.3 K, fitted, for
//! each trace convention.

use tcq::fit::FitKind;
use tcq::observables::{sweep_n, Convention, ShiftReport};
use tcq::ModelParams;

fn main() -> tcq::Result<()> {
    let ns: Vec<u64> = (100..=1000).step_by(100).collect();
    let grid: Vec<f64> = ns.iter().map(|&n| n as f64).collect();
    let p = ModelParams::preset(100)?;
    for conv in Convention::ALL {
        let sets = sweep_n(&p, &ns, 0.3, 1e-9, conv)?;
        let col = |f: &dyn Fn(&tcq::observables::ShiftSet) -> f64| sets.iter().map(f).collect::<Vec<_>>();
        let reports = [
            ShiftReport::new("Z_pert/Z0", "n", grid.clone(), col(&|s| s.ratio), FitKind::Linear)?,
            ShiftReport::new("mean", "n", grid.clone(), col(&|s| s.photon_mean.pert_term), FitKind::Linear)?,
            ShiftReport::new("variance", "n", grid.clone(), col(&|s| s.photon_variance_shift.pert_term), FitKind::Linear)?,
            ShiftReport::new("J_z [Hz]", "n", grid.clone(), col(&|s| s.jz_hz(p.omega0).pert_term), FitKind::Quadratic)?,
        ];
        println!("[{}]", conv.name());
        for r in &reports {
            println!("  {:<10} coefficients {:?} r2 {:.6}", r.label, r.fit.coefficients, r.fit.r_squared);
        }
    }
    Ok(())
}
