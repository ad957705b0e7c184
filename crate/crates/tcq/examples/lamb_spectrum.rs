//! Eigenvalues of coupling blocks: structural checks and the refined
//! sum of squares.

use tcq::coupling::{second_moment_exact, Block};
use tcq::spectra::{lamb_spectrum, lamb_spectrum_with, refined_spectrum, spectrum_checks, Solver};

fn main() {
    let b = Block::new(6, 4);
    let spec = lamb_spectrum(b);
    println!("{b:?}: {:?}", spec.eigenvalues);
    let checks = spectrum_checks(&spec);
    println!("{checks:?}");

    // the two solvers agree where both apply
    let big = Block::new(30, 30);
    let bis = lamb_spectrum_with(big, Solver::Bisection);
    let ql = lamb_spectrum_with(big, Solver::Ql);
    let gap = bis.eigenvalues.iter().zip(&ql.eigenvalues).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
    println!("bisection vs QL on dim {}: max gap {gap:.2e}", big.dim());

    let refined = refined_spectrum(Block::new(200, 150));
    let (hi, lo) = refined.sum_squares();
    println!(
        "refined sum of squares {hi} + {lo:e}, trace {}, defect {:.2e}",
        second_moment_exact(Block::new(200, 150)),
        refined.sum_squares_defect()
    );
}
