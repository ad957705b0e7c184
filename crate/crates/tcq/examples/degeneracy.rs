//! Spin-j multiplicities of n spin-1/2 particles: where the mass sits and
//! how wide the band of relevant j is.

use tcq::combinatorics::{adjacent_ratio, degeneracy, j_star, support_window};

fn main() -> tcq::Result<()> {
    for n in [4u64, 40, 400, 4000] {
        let star = j_star(n);
        let w = support_window(n, 1e-9)?;
        println!(
            "n={n:<5} j*={:<5} window 2j in [{}, {}] ({} values, mass {:.12})",
            star as f64 / 2.0,
            w.j_lo,
            w.j_hi,
            w.width(),
            w.mass_captured
        );
    }

    // exact integers while they fit, logs beyond
    let n = 40;
    for tj in (0..=n).step_by(8) {
        let d = degeneracy(n, tj)?;
        println!("d(n={n}, j={}) = {:?}  ln = {:.6}", tj / 2, d.exact_value, d.log_value);
    }

    // d_{j+1}/d_j crosses 1 at j*
    let n = 1000;
    let star = j_star(n);
    for tj in [star - 4, star - 2, star, star + 2] {
        println!("d(j)/d(j+1) at j={:>5}: {:.6}", tj as f64 / 2.0, adjacent_ratio(n, tj)?);
    }
    Ok(())
}
