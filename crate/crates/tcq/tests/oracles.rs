//! Independent references: brute-force Hilbert-space constructions, dense
//! diagonalization and exact big-integer combinatorics.

use nalgebra::DMatrix;
use num_bigint::BigUint;

use tcq::combinatorics::{adjacent_ratio, degeneracy, j_star, ln_factorial, subspace_geometry};
use tcq::coupling::{build_matrix, coupling_matrix, Block};
use tcq::observables::{expect, first_order_shifts, thermal_jz, Convention, Observable};
use tcq::spectra::lamb_spectrum;
use tcq::thermo::{delta_energy, distribution, z0_closed, z0_sum, z_exact, z_pert, Axis};
use tcq::units::{temp_for_theta, PRESET_OMEGA0};
use tcq::ModelParams;

fn eigenvalues(m: DMatrix<f64>) -> Vec<f64> {
    let mut e: Vec<f64> = m.symmetric_eigen().eigenvalues.iter().copied().collect();
    e.sort_by(f64::total_cmp);
    e
}

/// σ⁺ on spin `i` acting on basis index `s` (bit set = up)
fn raise(s: usize, i: usize) -> Option<usize> {
    (s & (1 << i) == 0).then_some(s | (1 << i))
}

fn dense_coupling(block: Block) -> DMatrix<f64> {
    let m = coupling_matrix(block);
    let d = m.dim();
    let mut a = DMatrix::zeros(d, d);
    for (i, b) in m.bonds.iter().enumerate() {
        a[(i, i + 1)] = *b;
        a[(i + 1, i)] = *b;
    }
    a
}

/// Exact binomial row C(n, ·) as big integers.
fn binomial_row(n: usize) -> Vec<BigUint> {
    let mut row = vec![BigUint::from(1u32)];
    for _ in 0..n {
        let mut next = Vec::with_capacity(row.len() + 1);
        next.push(BigUint::from(1u32));
        for w in row.windows(2) {
            next.push(&w[0] + &w[1]);
        }
        next.push(BigUint::from(1u32));
        row = next;
    }
    row
}

fn big_ln(x: &BigUint) -> f64 {
    let bits = x.bits();
    let shift = bits.saturating_sub(64);
    let top: BigUint = x >> shift;
    let digits = top.to_u64_digits();
    let v = digits.first().copied().unwrap_or(0) as f64;
    v.ln() + shift as f64 * std::f64::consts::LN_2
}

#[test]
fn degeneracies_from_total_spin_diagonalization() {
    // J² = J₋J₊ + J_z² + J_z on the full 2ⁿ space
    for n in 1..=8usize {
        let dim = 1 << n;
        let mut jp = DMatrix::<f64>::zeros(dim, dim);
        let mut jz = DMatrix::<f64>::zeros(dim, dim);
        for s in 0..dim {
            jz[(s, s)] = s.count_ones() as f64 - n as f64 / 2.0;
            for i in 0..n {
                if let Some(t) = raise(s, i) {
                    jp[(t, s)] += 1.0;
                }
            }
        }
        let j2 = jp.transpose() * &jp + &jz * &jz + &jz;
        let ev = eigenvalues(j2);
        for tj in (n % 2..=n).step_by(2) {
            let j = tj as f64 / 2.0;
            let count = ev.iter().filter(|&&x| (x - j * (j + 1.0)).abs() < 1e-8).count();
            let d = degeneracy(n as u64, tj as u64).unwrap();
            assert_eq!(count as u128, d.exact_value.unwrap() * (tj as u128 + 1), "n={n} 2j={tj}");
        }
    }
}

/// Excitation-number sector k of the full model with photons, spins and
/// coupling a J₊ + a†J₋, in units of ω₀, shifted so the ground state is 0.
fn sector_hamiltonian(n: usize, k: usize, g: f64) -> DMatrix<f64> {
    let states: Vec<(usize, usize)> = (0..1usize << n)
        .filter(|s| (s.count_ones() as usize) <= k)
        .map(|s| (k - s.count_ones() as usize, s))
        .collect();
    let index = |p: usize, s: usize| states.iter().position(|&x| x == (p, s));
    let d = states.len();
    let mut h = DMatrix::zeros(d, d);
    for (col, &(p, s)) in states.iter().enumerate() {
        h[(col, col)] = k as f64;
        if p == 0 {
            continue;
        }
        for i in 0..n {
            if let Some(t) = raise(s, i) {
                let row = index(p - 1, t).unwrap();
                let v = g * (p as f64).sqrt();
                h[(row, col)] += v;
                h[(col, row)] += v;
            }
        }
    }
    h
}

#[test]
fn block_spectra_reproduce_the_full_model() {
    let g = 0.37;
    for n in [2usize, 3, 4] {
        for k in 0..=7usize {
            let brute = eigenvalues(sector_hamiltonian(n, k, g));
            let mut from_blocks = Vec::new();
            for tj in (n % 2..=n).step_by(2) {
                let geo = subspace_geometry(n as u64, tj as u64, k as u64).unwrap();
                if !geo.nonempty {
                    continue;
                }
                let m = build_matrix(n as u64, tj as u64, k as u64).unwrap();
                let spec = lamb_spectrum(m.block);
                let d = degeneracy(n as u64, tj as u64).unwrap().exact_value.unwrap();
                for _ in 0..d {
                    from_blocks.extend(spec.eigenvalues.iter().map(|l| k as f64 + g * l));
                }
            }
            from_blocks.sort_by(f64::total_cmp);
            assert_eq!(brute.len(), from_blocks.len(), "n={n} k={k}");
            for (a, b) in brute.iter().zip(&from_blocks) {
                assert!((a - b).abs() < 1e-10, "n={n} k={k}: {a} vs {b}");
            }
        }
    }
}

#[test]
fn exact_partition_matches_full_model_sum() {
    // strong coupling so the excess is far above rounding
    let n = 4;
    let theta = 1.0;
    let temp = temp_for_theta(PRESET_OMEGA0, theta);
    for g in [0.05, 0.3] {
        let p = ModelParams::new(n as u64, PRESET_OMEGA0, g * PRESET_OMEGA0).unwrap();
        let mut z = 0.0;
        for k in 0..=90usize {
            z += eigenvalues(sector_hamiltonian(n, k, g)).iter().map(|e| (-theta * e).exp()).sum::<f64>();
        }
        let exact = z_exact(&p, temp, 1e-15).unwrap();
        assert!((exact.log_z - z.ln()).abs() < 1e-12, "g={g}: {} vs {}", exact.log_z, z.ln());
    }
}

#[test]
fn four_spin_hand_count() {
    // coefficients of xᵏ in (1+x)⁴/(1−x): 1, 5, 11, 15, 16, 16, ...
    let expected = [1u64, 5, 11, 15, 16, 16, 16];
    for (k, want) in expected.iter().enumerate() {
        let mut total = 0;
        for (tj, d) in [(4u64, 1u64), (2, 3), (0, 2)] {
            let geo = subspace_geometry(4, tj, k as u64).unwrap();
            total += d * if geo.nonempty { geo.dim_b } else { 0 };
        }
        assert_eq!(total, *want, "k={k}");
    }
    let theta = 2f64.ln();
    let p = ModelParams::new(4, PRESET_OMEGA0, 0.0).unwrap();
    let t = temp_for_theta(PRESET_OMEGA0, theta);
    // (3/2)⁴ / (1/2)
    assert!((z0_closed(&p, t).unwrap() - (2.0 * 1.5f64.powi(4)).ln()).abs() < 1e-14);
    assert!((z0_sum(&p, t, 1e-12).unwrap() - z0_closed(&p, t).unwrap()).abs() < 1e-12);
}

#[test]
fn tridiagonal_solver_matches_dense_reference() {
    for tj in (0..=127u64).step_by(3) {
        for kp in (0..=64u64).step_by(3) {
            let b = Block::new(tj, kp);
            if b.dim() > 64 || b.dim() < 2 {
                continue;
            }
            let dense = eigenvalues(dense_coupling(b));
            let spec = lamb_spectrum(b);
            let scale = spec.max_abs();
            for (a, d) in spec.eigenvalues.iter().zip(&dense) {
                assert!((a - d).abs() <= 1e-10 * scale, "{b:?}: {a} vs {d}");
            }
        }
    }
}

#[test]
fn most_degenerate_spin_by_exact_integers() {
    let mut ties = Vec::new();
    let mut row = vec![BigUint::from(1u32)];
    for n in 1..=2000usize {
        let mut next = Vec::with_capacity(row.len() + 1);
        next.push(BigUint::from(1u32));
        for w in row.windows(2) {
            next.push(&w[0] + &w[1]);
        }
        next.push(BigUint::from(1u32));
        row = next;
        if n < 4 {
            continue;
        }
        // d_j = C(n,a) − C(n,a−1) with a = n/2 − j
        let d = |a: usize| if a == 0 { row[0].clone() } else { &row[a] - &row[a - 1] };
        // scanning from large j, a tie keeps the larger j
        let mut best = (d(0), 0usize);
        let mut tied = false;
        for a in 1..=n / 2 {
            let v = d(a);
            if v > best.0 {
                best = (v, a);
                tied = false;
            } else if v == best.0 {
                tied = true;
            }
        }
        if tied {
            ties.push(n);
        }
        assert_eq!(j_star(n as u64), (n - 2 * best.1) as u64, "n={n}");
    }
    // two adjacent spins share the maximum exactly when n + 2 is a square
    let squares: Vec<usize> = (3..=45).map(|m| m * m - 2).filter(|&n| n <= 2000).collect();
    assert_eq!(ties, squares, "sizes with a tied maximum");
    for n in [100u64, 400, 900, 1600] {
        let j = j_star(n) as f64 / 2.0;
        assert!((j - ((n as f64).sqrt() / 2.0 - 0.5)).abs() <= 2.0, "n={n} j*={j}");
    }
}

#[test]
fn log_degeneracies_and_ratios_against_big_integers() {
    for n in [64usize, 101, 1000, 2000] {
        let row = binomial_row(n);
        let d = |a: usize| if a == 0 { row[0].clone() } else { &row[a] - &row[a - 1] };
        for a in 0..=n / 2 {
            let tj = (n - 2 * a) as u64;
            let exact = big_ln(&d(a));
            let got = degeneracy(n as u64, tj).unwrap().log_value;
            // lgamma rounds relative to ln n!, not to ln d_j
            let tol = 4.0 * f64::EPSILON * ln_factorial(n as u64).max(1.0);
            assert!((got - exact).abs() <= tol, "n={n} 2j={tj}: {got} vs {exact}");
            if a >= 1 {
                // d_j/d_{j+1} with j = tj/2
                let tj_lo = tj;
                let want = (big_ln(&d(a)) - big_ln(&d(a - 1))).exp();
                let r = adjacent_ratio(n as u64, tj_lo).unwrap();
                assert!((r / want - 1.0).abs() < 1e-12, "n={n} 2j={tj_lo}: {r} vs {want}");
            }
        }
    }
}

#[test]
fn energy_shift_by_finite_difference() {
    // ΔE = −∂/∂β of (Z−Z₀)/Z₀, central difference of the exact excess
    let h = 1e-4;
    for (n, t) in [(16u64, 0.3), (40, 0.3), (40, 0.5)] {
        let p = ModelParams::preset(n).unwrap();
        let excess = |temp: f64| z_exact(&p, temp, 1e-15).unwrap().excess_ratio;
        let beta = 1.0 / (tcq::units::K_B * t);
        let up = excess(1.0 / (tcq::units::K_B * beta * (1.0 + h)));
        let down = excess(1.0 / (tcq::units::K_B * beta * (1.0 - h)));
        let fd = -(up - down) / (2.0 * h * beta);
        let e = delta_energy(&p, t, 1e-15).unwrap();
        assert!((e.joules / fd - 1.0).abs() < 1e-6, "n={n} T={t}: {} vs {fd}", e.joules);
        assert!(e.joules < 0.0);
    }
}

/// Exact thermal moments from dense eigenvectors of blocks built directly
/// on |photons, m⟩ states; all sums relative to Z₀ and expressed as the
/// excess over the uncoupled value.
struct ExactMoments {
    z0: f64,
    ratio: f64,
    nbar: f64,
    n2: f64,
    jz0: f64,
    d_n: f64,
    d_n2: f64,
    d_jz: f64,
}

fn exact_moments(n: u64, theta: f64, gamma: f64) -> ExactMoments {
    let row: Vec<f64> = binomial_row(n as usize).iter().map(|b| big_ln(b).exp()).collect();
    let (mut z0, mut r, mut nb, mut n2, mut jz0, mut dn, mut dn2, mut djz) = (0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0);
    for tj in (n % 2..=n).step_by(2) {
        let a = ((n - tj) / 2) as usize;
        let d = row[a] - if a > 0 { row[a - 1] } else { 0.0 };
        let j = tj as f64 / 2.0;
        let k0 = (n - tj) / 2;
        for k in k0..k0 + 80 {
            // states (p, m) with p + m + n/2 = k, −j ≤ m ≤ j, p ≥ 0
            let states: Vec<(f64, f64)> = (0..=tj)
                .map(|i| -j + i as f64)
                .filter_map(|m| {
                    let p = k as f64 - m - n as f64 / 2.0;
                    (p >= 0.0).then_some((p, m))
                })
                .collect();
            let dim = states.len();
            let mut h = DMatrix::<f64>::zeros(dim, dim);
            for (c, &(p, m)) in states.iter().enumerate() {
                // a J₊ takes (p, m) to (p−1, m+1)
                if let Some(rw) = states.iter().position(|&(q, mm)| q == p - 1.0 && mm == m + 1.0) {
                    let v = p.sqrt() * (j * (j + 1.0) - m * (m + 1.0)).sqrt();
                    h[(rw, c)] = v;
                    h[(c, rw)] = v;
                }
            }
            let w = d * (-theta * k as f64).exp();
            let eig = h.symmetric_eigen();
            for &(p, m) in &states {
                z0 += w;
                nb += w * p;
                n2 += w * p * p;
                jz0 += w * m;
            }
            for (i, &l) in eig.eigenvalues.iter().enumerate() {
                let v = eig.eigenvectors.column(i);
                // e^{−γλ} − 1 minus its odd part: ±λ pairs carry equal
                // diagonal expectations, so the odd part cancels exactly
                let boltz = 2.0 * (0.5 * gamma * l).sinh().powi(2);
                let (mut en, mut en2, mut ejz) = (0.0, 0.0, 0.0);
                for (s, &(p, m)) in states.iter().enumerate() {
                    let c2 = v[s] * v[s];
                    en += c2 * p;
                    en2 += c2 * p * p;
                    ejz += c2 * m;
                }
                r += w * boltz;
                dn += w * boltz * en;
                dn2 += w * boltz * en2;
                djz += w * boltz * ejz;
            }
        }
    }
    ExactMoments {
        z0,
        ratio: r / z0,
        nbar: nb / z0,
        n2: n2 / z0,
        jz0: jz0 / z0,
        d_n: dn / z0,
        d_n2: dn2 / z0,
        d_jz: djz / z0,
    }
}

#[test]
fn photon_and_spin_shifts_against_exact_eigenvectors() {
    let n = 40;
    let t = 0.3;
    for g0_scale in [1.0, 1e4] {
        let p = ModelParams::preset(n).unwrap();
        let p = p.with_g0(p.g0 * g0_scale);
        let theta = p.theta(t).unwrap();
        let gamma = p.gamma(t).unwrap();
        let ex = exact_moments(n, theta, gamma);
        assert!((ex.z0.ln() - z0_closed(&p, t).unwrap()).abs() < 1e-12);
        let s = first_order_shifts(&p, t, 1e-12, Convention::Physical).unwrap();
        let zp = z_pert(&p, t, 1e-12).unwrap();

        // the exact excess sits inside the first-order bound
        assert!((ex.ratio - s.ratio).abs() <= zp.error_bound + 1e-12 * s.ratio, "ratio {} vs {}", ex.ratio, s.ratio);
        let (r, a, b) = (ex.ratio, ex.d_n, ex.d_n2);
        let mean = (a - r * ex.nbar) / ((1.0 + r) * ex.nbar);
        let var0 = ex.n2 - ex.nbar * ex.nbar;
        let var = (b * (1.0 + r) - 2.0 * ex.nbar * a - a * a - r * ex.n2 + 2.0 * r * ex.nbar * ex.nbar
            - var0 * r * r)
            / ((1.0 + r) * (1.0 + r) * var0);
        let jz = (ex.d_jz - r * ex.jz0) / (1.0 + r);
        // relative size of the dropped γ⁴ terms
        // dropped γ⁴ terms carry the same relative size as in the ratio;
        // 1e-10 covers the oracle's own rounding
        let tol = 1e-10 + 2.0 * zp.error_bound / zp.ratio;
        assert!((s.photon_mean.net / mean - 1.0).abs() < tol, "mean {} vs {mean}", s.photon_mean.net);
        assert!((s.photon_variance_shift.net / var - 1.0).abs() < tol, "var {} vs {var}", s.photon_variance_shift.net);
        assert!((s.jz.net / jz - 1.0).abs() < tol, "jz {} vs {jz}", s.jz.net);
        assert!((s.mean_photons / ex.nbar - 1.0).abs() < 1e-12);
        assert!((s.mean_jz / ex.jz0 - 1.0).abs() < 1e-12);
        // the driven-signal amplitude against the exact ⟨J_z⟩
        let amp = thermal_jz(&p, t, 1e-12).unwrap();
        assert!((amp / (ex.jz0 + jz) - 1.0).abs() < 1e-12);
    }
}

#[test]
fn spin_expectation_against_full_enumeration() {
    let p = ModelParams::preset(40).unwrap();
    let t = 0.3;
    let d = distribution(&p, t, Axis::Jk, 1e-12).unwrap();
    assert!(d.exact);
    let brute: f64 = d
        .entries
        .iter()
        .map(|e| {
            let j = e.twice_j.unwrap() as f64 / 2.0;
            (e.log_weight - d.log_z).exp() * j * (j + 1.0)
        })
        .sum();
    let got = expect(Observable::Jk(&|tj, _| (tj as f64 / 2.0) * (tj as f64 / 2.0 + 1.0)), &p, t, 1e-12).unwrap();
    assert!((got / brute - 1.0).abs() < 1e-10, "{got} vs {brute}");
}
