//! Acceptance suite: one test per claim, each printing a PASS line with the
//! measured margin (visible under `--nocapture`).
//!
//! Run with `cargo test -p adiasearch-core --test acceptance`.

use adiasearch_core::{
    dynamics, grover, model, schedule, spectral, EffectiveHamiltonian, InitialState,
    PriorPartition, Schedule,
};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::f64::consts::FRAC_PI_2;

/// Adaptive Simpson quadrature, the independent oracle for the arctan
/// closed form.
fn adaptive_simpson(f: &impl Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> f64 {
    fn simpson(f: &impl Fn(f64) -> f64, a: f64, fa: f64, b: f64, fb: f64) -> (f64, f64, f64) {
        let m = 0.5 * (a + b);
        let fm = f(m);
        ((b - a) / 6.0 * (fa + 4.0 * fm + fb), m, fm)
    }
    #[allow(clippy::too_many_arguments)]
    fn recurse(
        f: &impl Fn(f64) -> f64,
        a: f64,
        fa: f64,
        b: f64,
        fb: f64,
        whole: f64,
        m: f64,
        fm: f64,
        tol: f64,
        depth: u32,
    ) -> f64 {
        let (left, lm, flm) = simpson(f, a, fa, m, fm);
        let (right, rm, frm) = simpson(f, m, fm, b, fb);
        let delta = left + right - whole;
        if depth == 0 || delta.abs() <= 15.0 * tol {
            return left + right + delta / 15.0;
        }
        recurse(f, a, fa, m, fm, left, lm, flm, 0.5 * tol, depth - 1)
            + recurse(f, m, fm, b, fb, right, rm, frm, 0.5 * tol, depth - 1)
    }
    let (fa, fb) = (f(a), f(b));
    let (whole, m, fm) = simpson(f, a, fa, b, fb);
    recurse(f, a, fa, b, fb, whole, m, fm, tol, 48)
}

#[test]
fn criterion_1_closed_form_matches_quadrature() {
    let mut rng = ChaCha8Rng::seed_from_u64(0xAD1A);
    let mut worst = 0.0f64;
    for _ in 0..50 {
        let a: f64 = rng.random_range(0.02..0.9);
        let eps: f64 = rng.random_range(0.01..0.5);
        let h = EffectiveHamiltonian::new(a, 1.0).unwrap();
        let integrand = |s: f64| 1.0 / (eps * h.gap(s).unwrap().powi(2));
        let scale = FRAC_PI_2 / (eps * a);
        let oracle = adaptive_simpson(&integrand, 0.0, 1.0, 1e-12 * scale);
        let closed = schedule::total_time(a, eps, 1.0).unwrap();
        let rel = (closed - oracle).abs() / oracle;
        worst = worst.max(rel);
        assert!(rel < 1e-8, "a={a} eps={eps}: rel {rel:e}");
    }

    // Small-amplitude approximation: within 3.3% for a_m <= 0.05.
    let mut worst_approx = 0.0f64;
    for i in 0..=10 {
        let a = 0.005 + 0.0045 * i as f64; // up to 0.05 inclusive
        let eps = 0.05;
        let exact = schedule::total_time(a, eps, 1.0).unwrap();
        let approx = schedule::total_time_approx(a, eps, 1.0).unwrap();
        let rel = (approx - exact).abs() / exact;
        worst_approx = worst_approx.max(rel);
        assert!(rel < 0.033, "a={a}: approximation off by {rel}");
    }
    println!(
        "criterion 1: PASS - quadrature max rel err {worst:.2e} (tol 1e-8), \
         approximation max rel err {worst_approx:.4} (tol 0.033)"
    );
}

#[test]
fn criterion_2_quadratic_scaling() {
    let eps = 0.05;
    let running_time = |n: f64| schedule::total_time_approx(1.0 / n.sqrt(), eps, 1.0).unwrap();
    let exact_time = |n: f64| schedule::total_time(1.0 / n.sqrt(), eps, 1.0).unwrap();

    let mut lines = Vec::new();
    let mut prev_exact_dev = f64::INFINITY;
    for &n in &[16.0f64, 64.0, 256.0, 1024.0, 4096.0] {
        let ratio = running_time(4.0 * n) / running_time(n);
        assert!(
            (1.98..=2.02).contains(&ratio),
            "N={n}: T(4N)/T(N) = {ratio}"
        );
        // The exact arctan form carries a 1/(pi sqrt(N)) finite-size defect:
        // its ratio approaches 2 from above as N grows.
        let exact_ratio = exact_time(4.0 * n) / exact_time(n);
        let dev = exact_ratio - 2.0;
        assert!(dev > 0.0 && dev < prev_exact_dev, "N={n}: {exact_ratio}");
        prev_exact_dev = dev;
        lines.push(format!("N={n}: ratio={ratio:.6} exact_ratio={exact_ratio:.6}"));
    }
    assert!(prev_exact_dev < 0.02, "largest N should sit inside [1.98, 2.02]");
    println!("criterion 2: PASS - {}", lines.join("; "));
}

#[test]
fn criterion_3_running_time_ignores_other_amplitudes() {
    let n = 16;
    let m = 5;
    let a_m = 0.25;
    let eps = 0.05;

    // Uniform rest vs a lopsided rest with the same marked amplitude.
    let uniform = model::uniform_state(n, m).unwrap();
    let mut rest: Vec<f64> = (0..n).map(|i| (i + 1) as f64).collect();
    rest[m] = 0.0;
    let rest_norm: f64 = rest.iter().map(|w| w * w).sum();
    let scale = ((1.0 - a_m * a_m) / rest_norm).sqrt();
    let mut amps: Vec<f64> = rest.iter().map(|w| w * scale).collect();
    amps[m] = a_m;
    let lopsided = InitialState::new(amps, m).unwrap();

    assert_eq!(uniform.marked_amplitude().to_bits(), lopsided.marked_amplitude().to_bits());
    let sched_a = Schedule::local(uniform.marked_amplitude(), eps, 1.0).unwrap();
    let sched_b = Schedule::local(lopsided.marked_amplitude(), eps, 1.0).unwrap();
    assert_eq!(sched_a.total_time().to_bits(), sched_b.total_time().to_bits());

    let run_a = dynamics::evolve_full(&uniform, &sched_a, 0).unwrap();
    let run_b = dynamics::evolve_full(&lopsided, &sched_b, 0).unwrap();
    let diff = (run_a.fidelity - run_b.fidelity).abs();
    assert!(diff < 1e-8, "fidelity split by {diff:e}");
    println!(
        "criterion 3: PASS - T identical to the bit, fidelities {:.10} vs {:.10} (diff {diff:.2e})",
        run_a.fidelity, run_b.fidelity
    );
}

#[test]
fn criterion_4_prior_worked_example() {
    let part = PriorPartition::new([(500, 0.8), (500, 0.2)]).unwrap();
    let eps = 0.05;
    let uniform = schedule::total_time_approx(1.0 / 1000f64.sqrt(), eps, 1.0).unwrap();

    let conditional = schedule::theorem2_time(&part, 0, eps).unwrap() / uniform;
    assert!((conditional - 0.7906).abs() <= 1e-4, "conditional {conditional}");

    let mean = schedule::mean_time(&part, eps).unwrap() / uniform;
    assert!((mean - 0.9487).abs() <= 1e-4, "mean {mean}");

    println!(
        "criterion 4: PASS - conditional ratio {conditional:.4} (~20% faster when the \
         marked item is in the favored half), mean ratio {mean:.4}"
    );
}

#[test]
fn criterion_5_cauchy_schwarz_bound() {
    let n_total = 1024usize;
    let eps = 0.05;
    let bound = FRAC_PI_2 / eps * (n_total as f64).sqrt();
    let mut rng = ChaCha8Rng::seed_from_u64(0xC5);

    let mut min_margin = f64::INFINITY;
    for _ in 0..1000 {
        let k = rng.random_range(1..=10usize);
        // Random composition of n_total into k positive parts.
        let mut sizes = vec![1usize; k];
        for _ in 0..n_total - k {
            sizes[rng.random_range(0..k)] += 1;
        }
        let weights: Vec<f64> = (0..k).map(|_| rng.random_range(0.01..1.0)).collect();
        let total: f64 = weights.iter().sum();
        let part = PriorPartition::new(
            sizes
                .iter()
                .zip(&weights)
                .map(|(&n, &w)| (n, w / total)),
        )
        .unwrap();

        let mean = schedule::mean_time(&part, eps).unwrap();
        assert!(mean <= bound + 1e-9, "bound violated by {:e}", mean - bound);

        let proportional = part
            .subsets()
            .iter()
            .all(|sub| (sub.probability - sub.size as f64 / n_total as f64).abs() < 1e-12);
        if !proportional {
            min_margin = min_margin.min(bound - mean);
        }
    }
    // Equality exactly at the proportional prior.
    let sizes = [100usize, 300, 624];
    let part = PriorPartition::new(
        sizes
            .iter()
            .map(|&n| (n, n as f64 / n_total as f64)),
    )
    .unwrap();
    let mean = schedule::mean_time(&part, eps).unwrap();
    assert!(
        (mean - bound).abs() <= 1e-9,
        "proportional prior should attain the bound, off by {:e}",
        mean - bound
    );
    println!(
        "criterion 5: PASS - 1000 random partitions under the bound \
         (smallest strict margin {min_margin:.3e}), proportional prior attains it"
    );
}

#[test]
fn criterion_6_hamiltonian_rescaling() {
    // T(c) * c is constant to 1e-12 relative.
    let mut worst = 0.0f64;
    for &(a, eps) in &[(0.1, 0.05), (0.03125, 0.1), (0.6, 0.25)] {
        let base = schedule::total_time(a, eps, 1.0).unwrap();
        for &c in &[0.5, 1.0, 2.0, 10.0, 32.0] {
            let scaled = schedule::total_time(a, eps, c).unwrap();
            let rel = (scaled * c - base).abs() / base;
            worst = worst.max(rel);
            assert!(rel <= 1e-12, "a={a} c={c}: rel {rel:e}");
        }
    }

    // Dynamics level at N = 64: psi_cH(T/c) equals psi_H(T) per amplitude.
    let a = 0.125;
    let eps = 0.05;
    let steps = 1 << 16;
    let base_run = dynamics::evolve_fixed(
        &EffectiveHamiltonian::new(a, 1.0).unwrap(),
        &Schedule::local(a, eps, 1.0).unwrap(),
        steps,
    )
    .unwrap();
    let scaled_run = dynamics::evolve_fixed(
        &EffectiveHamiltonian::new(a, 8.0).unwrap(),
        &Schedule::local(a, eps, 8.0).unwrap(),
        steps,
    )
    .unwrap();
    let mut amp_diff = 0.0f64;
    for (x, y) in base_run.final_state.iter().zip(&scaled_run.final_state) {
        amp_diff = amp_diff.max((x - y).norm());
    }
    assert!(amp_diff < 1e-10, "amplitude split {amp_diff:e}");

    // c = sqrt(N) makes the running time constant: the paper-level formula
    // lands exactly on pi/(2 eps); the arctan form's finite-size deviation
    // is printed alongside.
    let target = FRAC_PI_2 / eps;
    let mut exact_devs = Vec::new();
    for &n in &[64.0f64, 256.0, 1024.0] {
        let a_m = 1.0 / n.sqrt();
        let t = schedule::total_time_approx(a_m, eps, n.sqrt()).unwrap();
        assert!(
            (t - target).abs() / target < 0.02,
            "N={n}: constant-time T = {t}, target {target}"
        );
        let exact = schedule::total_time(a_m, eps, n.sqrt()).unwrap();
        exact_devs.push(format!(
            "N={n}: exact dev {:.2}%",
            100.0 * (exact - target).abs() / target
        ));
    }
    println!(
        "criterion 6: PASS - T*c constant (worst rel {worst:.2e}), rescaled dynamics \
         amplitude diff {amp_diff:.2e}, constant-time T = {target:.2} ({})",
        exact_devs.join(", ")
    );
}

#[test]
fn criterion_7_infidelity_shrinks_with_epsilon() {
    let h = EffectiveHamiltonian::new(0.125, 1.0).unwrap(); // N = 64 uniform
    let epsilons = [0.1, 0.05, 0.025, 0.0125];
    let sweep = dynamics::fidelity_sweep(&h, &epsilons).unwrap();
    for pair in sweep.windows(2) {
        assert!(
            pair[1].1 < pair[0].1,
            "infidelity must fall: {:?} -> {:?}",
            pair[0],
            pair[1]
        );
    }
    let last = sweep.last().unwrap();
    let cap = 4.0 * last.0 * last.0;
    assert!(last.1 < cap, "infidelity {:.3e} above 4 eps^2 = {cap:.3e}", last.1);
    let table: Vec<String> = sweep
        .iter()
        .map(|(eps, infid)| format!("eps={eps}: {infid:.3e}"))
        .collect();
    println!(
        "criterion 7: PASS - monotone infidelity [{}], final under 4 eps^2 = {cap:.3e}",
        table.join(", ")
    );
}

#[test]
fn criterion_8_full_space_oracle_equivalence() {
    let eps = 0.05;
    let prior_part = PriorPartition::new([(4, 0.4), (12, 0.6)]).unwrap();
    let states = vec![
        ("uniform N=4", model::uniform_state(4, 1).unwrap()),
        ("uniform N=16", model::uniform_state(16, 3).unwrap()),
        ("prior N=16", model::build_prior_state(&prior_part, 1, 0).unwrap()),
        ("uniform N=64", model::uniform_state(64, 17).unwrap()),
    ];

    // Dynamics: fidelity split < 1e-8, leakage < 1e-9.
    let mut worst_split = 0.0f64;
    let mut worst_leak = 0.0f64;
    for (label, state) in &states {
        let sched = Schedule::local(state.marked_amplitude(), eps, 1.0).unwrap();
        let h = EffectiveHamiltonian::from_state(state, 1.0).unwrap();
        let full = dynamics::evolve_full(state, &sched, 0).unwrap();
        let eff = dynamics::evolve(&h, &sched, 0).unwrap();
        let split = (full.fidelity - eff.fidelity).abs();
        let leak = full.max_leakage.unwrap();
        assert!(split < 1e-8, "{label}: fidelity split {split:e}");
        assert!(leak < 1e-9, "{label}: leakage {leak:e}");
        worst_split = worst_split.max(split);
        worst_leak = worst_leak.max(leak);
    }

    // Spectrum: dense eigensolve matches the closed forms to 1e-10.
    let mut worst_eig = 0.0f64;
    for (_, state) in &states {
        for &c in &[1.0, 2.5] {
            let h = EffectiveHamiltonian::from_state(state, c).unwrap();
            for &s in &[0.0, 0.25, 0.5, 0.9, 1.0] {
                let dense = spectral::full_matrix(state, s, c).unwrap();
                let mut eigs: Vec<f64> =
                    nalgebra::SymmetricEigen::new(dense).eigenvalues.iter().copied().collect();
                eigs.sort_by(|x, y| x.partial_cmp(y).unwrap());
                let (l1, l2) = h.eigenvalues(s).unwrap();
                worst_eig = worst_eig.max((eigs[0] - l1).abs());
                worst_eig = worst_eig.max((eigs[1] - l2).abs());
                for &rest in &eigs[2..] {
                    worst_eig = worst_eig.max((rest - c).abs());
                }
            }
        }
    }
    assert!(worst_eig < 1e-10, "eigenvalue mismatch {worst_eig:e}");
    println!(
        "criterion 8: PASS - fidelity split {worst_split:.2e} (tol 1e-8), leakage \
         {worst_leak:.2e} (tol 1e-9), spectrum mismatch {worst_eig:.2e} (tol 1e-10)"
    );
}

#[test]
fn criterion_9_grover_baseline() {
    let four = grover::grover_simulate(4, 1).unwrap();
    assert_eq!(four.success_prob, 1.0, "N=4 optimal run must be certain");

    // Closed form vs explicit state-vector iteration, N <= 256.
    let mut worst = 0.0f64;
    for n in [2usize, 3, 5, 16, 50, 101, 256] {
        let k_max = 3 * (n as f64).sqrt().ceil() as usize;
        let mut amps = vec![(1.0 / n as f64).sqrt(); n];
        for k in 0..=k_max {
            let closed = grover::success_probability_closed_form(n, k).unwrap();
            let rotated = grover::grover_simulate(n, k).unwrap().success_prob;
            let iterated = amps[0] * amps[0];
            worst = worst.max((closed - iterated).abs().max((rotated - iterated).abs()));
            assert!((closed - iterated).abs() < 1e-12, "n={n} k={k}");
            assert!((rotated - iterated).abs() < 1e-12, "n={n} k={k}");
            // One more Grover step: oracle flip then inversion about the mean.
            amps[0] = -amps[0];
            let mean = amps.iter().sum::<f64>() / n as f64;
            for a in amps.iter_mut() {
                *a = 2.0 * mean - *a;
            }
        }
    }
    println!(
        "criterion 9: PASS - N=4 exact certainty, worst closed-vs-iterated gap {worst:.2e} \
         (tol 1e-12); grover optimal k: N=1024 -> {}",
        grover::grover_optimal_iterations(1024).unwrap()
    );
}
