//! The hollow tridiagonal coupling block and its moments.

use tcq::coupling::{build_matrix, expansion_gate, higher_moment, moments, second_moment_closed, second_moment_exact, Block};
use tcq::ModelParams;

fn main() -> tcq::Result<()> {
    // n=4, j=1, k=2: a 3x3 block
    let m = build_matrix(4, 2, 2)?;
    println!("block {:?}, dim {}", m.block, m.dim());
    println!("bonds {:?}", m.bonds);

    let b = Block::new(40, 25);
    println!(
        "tr L^2: exact {} closed {:.1}",
        second_moment_exact(b),
        second_moment_closed(b)
    );
    let set = moments(b, &[2, 4, 6, 8])?;
    println!("{set:?}");
    // odd traces vanish identically and are rejected
    println!("order 3: {:?}", higher_moment(b, 3).err().map(|e| e.to_string()));

    let p = ModelParams::preset(100)?;
    let gamma = p.gamma(0.3)?;
    println!("gamma at 0.3 K = {gamma:.3e}, gate on {b:?} = {:.3e}", expansion_gate(b, gamma));
    Ok(())
}
