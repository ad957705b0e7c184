//! Thermal populations written as CSV, ready for plotting.

use tcq::thermo::{distribution, Axis};
use tcq::ModelParams;

fn main() -> tcq::Result<()> {
    let p = ModelParams::preset(100)?;
    for t in [0.01, 0.3] {
        let d = distribution(&p, t, Axis::Jk, 1e-9)?;
        let dicke_ground = d.mass_where(|e| e.twice_j == Some(100) && e.k == 0);
        let band = d.mass_where(|e| (20..=80).contains(&e.k));
        println!("T={t}: {} cells, Dicke ground {dicke_ground:.4}, k in [20,80] {band:.4}", d.entries.len());
    }

    let d = distribution(&ModelParams::preset(12)?, 0.3, Axis::Km, 1e-9)?;
    let mut w = csv::Writer::from_writer(std::io::stdout().lock());
    w.write_record(["k", "twice_m", "log_weight"])?;
    for e in d.entries.iter().take(12) {
        w.write_record([e.k.to_string(), e.twice_m.unwrap_or_default().to_string(), e.log_weight.to_string()])?;
    }
    w.flush()?;
    Ok(())
}
