//! Invariants as properties over random inputs, plus the exhaustive sweeps
//! that are cheap enough to run in full.

use proptest::prelude::*;

use tcq::combinatorics::{adjacent_ratio, degeneracy, j_star, support_window};
use tcq::coupling::{expansion_gate, higher_moment, second_moment_closed, second_moment_exact, var_lambda, Block};
use tcq::fit::{log_log_exponent, polyfit, FitKind};
use tcq::observables::{expect, first_order_shifts, Convention, Observable};
use tcq::regimes::{critical_size, crossover_limit, cutoff_temperature, dicke_population, dicke_ratio_temperature};
use tcq::robustness::{flipflop_norm, verify_shift_bound};
use tcq::spectra::{lamb_spectrum, spectrum_checks};
use tcq::summation::{compensated, log_sum_exp, pairwise};
use tcq::thermo::{distribution, mean_excitations_closed, z0_closed, z0_sum, z_exact, z_pert, Axis};
use tcq::units::PRESET_OMEGA0;
use tcq::ModelParams;

fn block() -> impl Strategy<Value = Block> {
    (0u64..400, 0u64..400).prop_map(|(tj, kp)| Block::new(tj, kp))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn adjacent_ratio_matches_log_degeneracies(n in 2u64..2000, frac in 0.0f64..1.0) {
        let tj = (n % 2) + 2 * ((frac * ((n / 2) as f64)) as u64).min(n / 2 - 1);
        let lo = degeneracy(n, tj).unwrap().log_value;
        let hi = degeneracy(n, tj + 2).unwrap().log_value;
        let r = adjacent_ratio(n, tj).unwrap();
        // the log path rounds relative to ln n!, so compare at that scale
        let tol = 1e-12 + 8.0 * f64::EPSILON * tcq::combinatorics::ln_factorial(n);
        prop_assert!((r.ln() - (lo - hi)).abs() <= tol);
    }

    #[test]
    fn sum_rule_on_the_log_path(n in 1u64..=2000) {
        let total: f64 = (n % 2..=n)
            .step_by(2)
            .map(|tj| (degeneracy(n, tj).unwrap().log_value + ((tj + 1) as f64).ln() - n as f64 * std::f64::consts::LN_2).exp())
            .sum();
        prop_assert!((total - 1.0).abs() < 1e-10);
    }

    #[test]
    fn j_star_beats_its_neighbours(n in 4u64..100_000) {
        let s = j_star(n);
        let d = |tj: u64| degeneracy(n, tj).unwrap().log_value;
        if s >= 2 {
            prop_assert!(d(s) >= d(s - 2));
        }
        if s + 2 <= n {
            prop_assert!(d(s) > d(s + 2) || (d(s) - d(s + 2)).abs() < 1e-9);
        }
    }

    #[test]
    fn closed_second_moment_matches_bonds(b in block()) {
        let direct: u128 = (1..b.dim()).map(|a| 2 * b.bond_sq(a)).sum();
        prop_assert_eq!(second_moment_exact(b), direct);
        let closed = second_moment_closed(b);
        prop_assert!((closed - direct as f64).abs() <= 1e-12 * (direct as f64).max(1.0));
    }

    #[test]
    fn spectra_are_paired_and_hollow(b in block()) {
        let spec = lamb_spectrum(b);
        let c = spectrum_checks(&spec);
        let scale = 1.0 + spec.max_abs();
        prop_assert!(c.sum_residual <= 1e-10 * scale);
        prop_assert!(c.pairing_residual <= 1e-8 * scale);
        prop_assert!(c.moment2_residual <= 1e-10);
        let cubes = compensated(spec.eigenvalues.iter().map(|l| l * l * l));
        prop_assert!(cubes.abs() <= 1e-10 * spec.max_abs().powi(3).max(1.0));
    }

    #[test]
    fn fourth_moment_matches_spectrum(tj in 0u64..120, kp in 0u64..120) {
        let b = Block::new(tj, kp);
        let spec = lamb_spectrum(b);
        let direct = compensated(spec.eigenvalues.iter().map(|l| l.powi(4)));
        let got = higher_moment(b, 4).unwrap();
        prop_assert!((got - direct).abs() <= 1e-10 * direct.max(1.0));
        prop_assert!(higher_moment(b, 3).is_err());
        prop_assert!(higher_moment(b, 5).is_err());
    }

    #[test]
    fn gate_is_half_gamma_squared_variance(b in block(), gamma in 1e-9f64..1e-2) {
        prop_assert!((expansion_gate(b, gamma) - 0.5 * gamma * gamma * var_lambda(b)).abs() <= 1e-15 * expansion_gate(b, gamma).max(1e-300));
    }

    #[test]
    fn first_order_scales_as_coupling_squared(n in 2u64..3000, t in 0.05f64..2.0) {
        let p = ModelParams::preset(n).unwrap();
        let a = z_pert(&p, t, 1e-9).unwrap().ratio;
        let b = z_pert(&p.with_g0(2.0 * p.g0), t, 1e-9).unwrap().ratio;
        prop_assert!((b / (4.0 * a) - 1.0).abs() < 1e-12);
        for conv in Convention::ALL {
            let s1 = first_order_shifts(&p, t, 1e-9, conv).unwrap();
            let s2 = first_order_shifts(&p.with_g0(2.0 * p.g0), t, 1e-9, conv).unwrap();
            for (x, y) in [
                (s1.photon_mean.pert_term, s2.photon_mean.pert_term),
                (s1.photon_variance_shift.pert_term, s2.photon_variance_shift.pert_term),
                (s1.jz.pert_term, s2.jz.pert_term),
            ] {
                if x != 0.0 {
                    // the (1+r) normalization changes by O(r) ~ 1e-13
                    prop_assert!((y / (4.0 * x) - 1.0).abs() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn z0_sum_within_delta(n in 1u64..3000, t in 0.02f64..5.0, e in 6u32..=12) {
        let delta = 10f64.powi(-(e as i32));
        let p = ModelParams::preset(n).unwrap();
        let gap = (z0_sum(&p, t, delta).unwrap() - z0_closed(&p, t).unwrap()).abs();
        // log-space gap ≈ relative gap; lgamma rounding adds ~ε·ln n! per term
        let rounding = 64.0 * f64::EPSILON * tcq::combinatorics::ln_factorial(n).max(1.0);
        prop_assert!(gap <= delta + rounding, "gap {gap:e}");
    }

    #[test]
    fn partition_is_deterministic(n in 2u64..2000, t in 0.05f64..2.0) {
        let p = ModelParams::preset(n).unwrap();
        let a = z_pert(&p, t, 1e-9).unwrap();
        let b = z_pert(&p, t, 1e-9).unwrap();
        prop_assert_eq!(a.ratio.to_bits(), b.ratio.to_bits());
        prop_assert_eq!(a.error_bound.to_bits(), b.error_bound.to_bits());
    }

    #[test]
    fn k_class_polynomials_match_closed_forms(n in 1u64..2000, t in 0.05f64..3.0, c in -3.0f64..3.0) {
        // uncoupled: ⟨k⟩ and Var k from differentiated geometric series
        let p = ModelParams::preset(n).unwrap().with_g0(0.0);
        let th = p.theta(t).unwrap();
        let mean = mean_excitations_closed(n, th);
        let x = (-th).exp();
        let var = x / (1.0 - x).powi(2) + n as f64 * x / (1.0 + x).powi(2);
        let got = expect(Observable::K(&|k| c + 2.0 * k as f64 + (k as f64).powi(2)), &p, t, 1e-12).unwrap();
        let want = c + 2.0 * mean + var + mean * mean;
        prop_assert!((got - want).abs() <= 1e-9 * want.abs().max(1.0), "{got} vs {want}");
        let one = expect(Observable::K(&|_| 1.0), &p, t, 1e-12).unwrap();
        prop_assert!((one - 1.0).abs() < 1e-12);
    }

    #[test]
    fn flipflop_norm_is_homogeneous(ds in prop::collection::vec(-1e6f64..1e6, 1..40), s in -1e3f64..1e3) {
        let scaled: Vec<f64> = ds.iter().map(|d| d * s).collect();
        let a = flipflop_norm(&ds).unwrap();
        let b = flipflop_norm(&scaled).unwrap();
        prop_assert!((b - s.abs() * a).abs() <= 1e-12 * (s.abs() * a).max(1e-300));
    }

    #[test]
    fn shift_bound_holds_for_any_seed(seed in any::<u64>()) {
        let c = verify_shift_bound(50, 12, seed).unwrap();
        prop_assert_eq!(c.violations, 0);
        prop_assert!(c.worst_ratio <= 1.0 + 1e-10);
    }

    #[test]
    fn polynomial_fits_are_exact_on_polynomials(a in -1e-6f64..1e-6, b in -1e-3f64..1e-3, c in -1.0f64..1.0) {
        let xs: Vec<f64> = (1..=10).map(|i| 100.0 * i as f64).collect();
        let ys: Vec<f64> = xs.iter().map(|x| a * x * x + b * x + c).collect();
        let f = polyfit(&xs, &ys, FitKind::Quadratic).unwrap();
        let scale = ys.iter().fold(0.0f64, |m, y| m.max(y.abs())).max(1e-300);
        for (x, y) in xs.iter().zip(&ys) {
            prop_assert!((f.eval(*x) - y).abs() <= 1e-10 * scale);
        }
    }

    #[test]
    fn pairwise_and_compensated_agree(xs in prop::collection::vec(-1e3f64..1e3, 0..300)) {
        let exact: f64 = xs.iter().map(|&x| x as f64).sum::<f64>();
        let bound = 1e-12 * xs.iter().map(|x| x.abs()).sum::<f64>().max(1.0);
        prop_assert!((pairwise(&xs) - exact).abs() <= bound);
        prop_assert!((compensated(xs.iter().copied()) - exact).abs() <= bound);
    }

    #[test]
    fn inverse_pair_is_consistent(e in 0.477f64..6.0) {
        let n = 10f64.powf(e) as u64;
        let t = cutoff_temperature(n, PRESET_OMEGA0).unwrap();
        let back = critical_size(t, PRESET_OMEGA0).unwrap().as_f64() as u64;
        prop_assert!(back == n || back + 1 == n, "n={n} back={back}");
    }
}

#[test]
fn dicke_estimate_falls_with_temperature_and_size() {
    let temps = [0.01, 0.03, 0.05, 0.1, 0.2, 0.3, 0.5, 1.0];
    let ns = [4u64, 10, 40, 100, 400, 1000, 10_000];
    for &n in &ns {
        let p = ModelParams::preset(n).unwrap();
        let est: Vec<f64> = temps.iter().map(|&t| dicke_population(&p, t).unwrap().estimate).collect();
        assert!(est.windows(2).all(|w| w[1] <= w[0]), "n={n}: {est:?}");
        assert!(est.iter().all(|e| (0.0..=1.0).contains(e)));
    }
    for &t in &temps {
        let est: Vec<f64> =
            ns.iter().map(|&n| dicke_population(&ModelParams::preset(n).unwrap(), t).unwrap().estimate).collect();
        assert!(est.windows(2).all(|w| w[1] <= w[0]), "T={t}: {est:?}");
    }
    let p = ModelParams::preset(100).unwrap();
    assert!(dicke_population(&p, 0.3).unwrap().estimate < 0.5);
    assert!(dicke_population(&p, 0.01).unwrap().exact.unwrap() >= 0.99);
    assert_eq!(dicke_population(&p.with_g0(0.0), 1e-4).unwrap().estimate, 1.0);
}

#[test]
fn ratio_temperature_monotone_and_bounded_above_j_star() {
    let limit = crossover_limit(PRESET_OMEGA0);
    for n in [100u64, 400, 1000] {
        let t: Vec<f64> = (n % 2..n).step_by(2).map(|tj| dicke_ratio_temperature(n, tj, PRESET_OMEGA0).unwrap()).collect();
        // rises as j falls toward zero
        assert!(t.windows(2).all(|w| w[1] <= w[0]), "n={n}");
        let s = (j_star(n) / 2) as usize;
        assert!(t[s..].iter().all(|&x| x <= limit), "n={n}");
        // the small-j end overshoots the limit by O(ln n / n)
        assert!(t[0] > limit && t[0] < limit * (1.0 + 4.0 * (n as f64).ln() / n as f64), "n={n}: {}", t[0]);
    }
}

#[test]
fn support_window_grows_like_root_n() {
    let ns = [100u64, 400, 1600, 6400, 25_600];
    let widths: Vec<f64> = ns.iter().map(|&n| support_window(n, 1e-9).unwrap().width() as f64).collect();
    let x: Vec<f64> = ns.iter().map(|&n| n as f64).collect();
    assert!(log_log_exponent(&x, &widths).unwrap() <= 0.6);
    for n in [40u64, 400] {
        let masses: Vec<f64> = [1e-3, 1e-6, 1e-9, 1e-12].iter().map(|&d| support_window(n, d).unwrap().mass_captured).collect();
        let widths: Vec<u64> = [1e-3, 1e-6, 1e-9, 1e-12].iter().map(|&d| support_window(n, d).unwrap().width()).collect();
        assert!(masses.windows(2).all(|w| w[1] >= w[0]) && widths.windows(2).all(|w| w[1] >= w[0]));
    }
}

#[test]
fn closed_second_moment_exhaustive_to_n_200() {
    for n in 1u64..=200 {
        for tj in (n % 2..=n).step_by(2) {
            for kp in 0..=n + 1 {
                let b = Block::new(tj, kp);
                let direct: u128 = (1..b.dim()).map(|a| 2 * b.bond_sq(a)).sum();
                assert_eq!(second_moment_exact(b), direct);
                assert!((second_moment_closed(b) / direct.max(1) as f64 - if direct == 0 { 0.0 } else { 1.0 }).abs() < 1e-12);
            }
        }
    }
}

#[test]
fn distributions_normalize_to_their_partition_values() {
    for (n, t) in [(12u64, 0.3), (40, 0.3), (100, 0.3), (300, 0.3), (100, 0.01)] {
        let p = ModelParams::preset(n).unwrap();
        for axis in [Axis::Jk, Axis::Km] {
            if axis == Axis::Km && n > 256 {
                continue;
            }
            let d = distribution(&p, t, axis, 1e-12).unwrap();
            let weights: Vec<f64> = d.entries.iter().map(|e| e.log_weight).collect();
            assert!((log_sum_exp(&weights) - d.log_z).abs() < 1e-10, "n={n} {axis:?}");
            if n <= 256 && axis == Axis::Jk {
                let ex = z_exact(&p, t, 1e-12).unwrap();
                assert!((d.log_z - ex.log_z).abs() < 1e-10);
            }
        }
    }
}

#[test]
fn rwa_ratio_is_small_on_populated_blocks() {
    // g₀·max|λ| ≪ ω₀ over every block the acceptance sums visit
    for n in [8u64, 40, 100, 1000] {
        let p = ModelParams::preset(n).unwrap();
        let z = z_pert(&p, 0.3, 1e-9).unwrap();
        let (lo, hi) = z.truncation.j_window;
        for tj in (lo..=hi).step_by(2) {
            let kp = z.truncation.k_max.saturating_sub((n - tj) / 2);
            let b = Block::new(tj, kp);
            assert!(p.g0 * b.spectral_radius_bound() / p.omega0 < 1e-3, "n={n} {b:?}");
        }
    }
}

#[test]
fn fast_growing_observables_fail_loudly() {
    let p = ModelParams::preset(40).unwrap();
    let r = expect(Observable::Jk(&|_, k| (3.0 * k as f64).exp()), &p, 0.3, 1e-9);
    assert!(matches!(r, Err(tcq::Error::TailMass { .. })), "{r:?}");
    // a slowly growing one is fine
    assert!(expect(Observable::Jk(&|_, k| (k as f64).powi(3)), &p, 0.3, 1e-9).is_ok());
}
