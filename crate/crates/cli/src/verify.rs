//! Invariant suites behind the `verify` subcommand.
//!
//! Each check re-derives a property from scratch (seeded randomness where
//! sampling is involved) and reports the measured margin next to its
//! tolerance, so a drifting build shows up as a shrinking margin before it
//! becomes a failure.

use adiasearch_core::{
    dynamics, model, schedule, spectral, EffectiveHamiltonian, InitialState, PriorPartition,
    Schedule,
};
use clap::ValueEnum;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::f64::consts::FRAC_PI_2;

/// Which invariant suite to run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    Spectral,
    Schedule,
    Dynamics,
    Theorems,
    All,
}

/// One verified invariant: measured margin vs tolerance.
#[derive(Debug, Clone)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    /// Measured worst value of the quantity under test.
    pub measured: f64,
    /// The bound it must stay under.
    pub tolerance: f64,
    pub detail: String,
}

impl Check {
    fn bounded(name: &str, measured: f64, tolerance: f64, detail: impl Into<String>) -> Self {
        Self {
            name: name.to_string(),
            passed: measured <= tolerance,
            measured,
            tolerance,
            detail: detail.into(),
        }
    }

    fn flag(name: &str, passed: bool, detail: impl Into<String>) -> Self {
        Self {
            name: name.to_string(),
            passed,
            measured: if passed { 0.0 } else { 1.0 },
            tolerance: 0.0,
            detail: detail.into(),
        }
    }
}

fn spectral_suite() -> Vec<Check> {
    let mut checks = Vec::new();

    // Gap symmetry, minimum location, and the trace identity on a grid.
    let mut asym = 0.0f64;
    let mut min_defect = 0.0f64;
    let mut trace_defect = 0.0f64;
    for &(a, c) in &[(0.02, 1.0), (0.125, 2.0), (0.6, 0.7)] {
        let h = EffectiveHamiltonian::new(a, c).unwrap();
        for i in 0..=1000 {
            let s = i as f64 / 1000.0;
            asym = asym.max((h.gap(s).unwrap() - h.gap(1.0 - s).unwrap()).abs() / c);
            min_defect = min_defect.max((h.gap(0.5).unwrap() - c * a).abs() / c);
            let (l1, l2) = h.eigenvalues(s).unwrap();
            trace_defect = trace_defect.max((l1 + l2 - c).abs() / c);
        }
    }
    checks.push(Check::bounded("gap symmetry g(s) = g(1-s)", asym, 1e-12, ""));
    checks.push(Check::bounded("minimum gap c*a_m at s = 1/2", min_defect, 1e-12, ""));
    checks.push(Check::bounded("trace identity l1 + l2 = c", trace_defect, 1e-12, ""));

    // Full-space spectrum vs the closed forms.
    let prior = PriorPartition::new([(8, 0.3), (16, 0.7)]).unwrap();
    let states = [
        model::uniform_state(64, 9).unwrap(),
        model::build_prior_state(&prior, 2, 0).unwrap(),
    ];
    let mut worst = 0.0f64;
    for state in &states {
        for &c in &[1.0, 2.0] {
            let h = EffectiveHamiltonian::from_state(state, c).unwrap();
            for i in 0..=10 {
                let s = i as f64 / 10.0;
                let dense = spectral::full_matrix(state, s, c).unwrap();
                let mut eigs: Vec<f64> = nalgebra::SymmetricEigen::new(dense)
                    .eigenvalues
                    .iter()
                    .copied()
                    .collect();
                eigs.sort_by(|x, y| x.partial_cmp(y).unwrap());
                let (l1, l2) = h.eigenvalues(s).unwrap();
                worst = worst.max((eigs[0] - l1).abs());
                worst = worst.max((eigs[1] - l2).abs());
                for &rest in &eigs[2..] {
                    worst = worst.max((rest - c).abs());
                }
            }
        }
    }
    checks.push(Check::bounded(
        "dense N-dim spectrum matches 2-D closed form",
        worst,
        1e-10,
        "N = 64 uniform and N = 24 prior state, c in {1, 2}",
    ));
    checks
}

fn schedule_suite() -> Vec<Check> {
    let mut checks = Vec::new();
    let mut rng = ChaCha8Rng::seed_from_u64(11);

    // Analytic inverse round-trip and time symmetry.
    let mut worst_rt = 0.0f64;
    let mut worst_sym = 0.0f64;
    for _ in 0..1000 {
        let a = rng.random_range(0.01..0.9);
        let eps = rng.random_range(0.005..0.5);
        let c = rng.random_range(0.1..10.0);
        let s: f64 = rng.random_range(0.0..=1.0);
        let sched = Schedule::local(a, eps, c).unwrap();
        let t = sched.time_of_s(s).unwrap();
        worst_rt = worst_rt.max((sched.s_of_t(t.min(sched.total_time())).unwrap() - s).abs());
        let t_rev = sched.time_of_s(1.0 - s).unwrap();
        worst_sym = worst_sym.max((t + t_rev - sched.total_time()).abs() / sched.total_time());
    }
    checks.push(Check::bounded("s(t(s)) round-trip", worst_rt, 1e-10, "1000 random points"));
    checks.push(Check::bounded("t(s) + t(1-s) = T", worst_sym, 1e-9, "relative"));

    // dt/ds against finite differences.
    let mut worst_fd = 0.0f64;
    for &(a, eps, c) in &[(0.05, 0.1, 1.0), (0.3, 0.02, 3.0)] {
        let h = EffectiveHamiltonian::new(a, c).unwrap();
        let sched = Schedule::local(a, eps, c).unwrap();
        for i in 1..100 {
            let s = i as f64 / 100.0;
            let step = 1e-6;
            let fd = (sched.time_of_s(s + step).unwrap() - sched.time_of_s(s - step).unwrap())
                / (2.0 * step);
            let g1 = h.gap(s).unwrap() / c;
            let expected = 1.0 / (eps * c * g1 * g1);
            worst_fd = worst_fd.max((fd - expected).abs() / expected);
        }
    }
    checks.push(Check::bounded(
        "dt/ds = 1/(eps c g1^2) vs finite differences",
        worst_fd,
        1e-6,
        "100 interior points",
    ));

    // Local schedule satisfies its own per-s condition; a matched linear
    // ramp breaks it at the gap minimum.
    let local = Schedule::local(0.1, 0.05, 1.0).unwrap();
    let report = schedule::adiabaticity_report(&local, 501).unwrap();
    checks.push(Check::flag(
        "local schedule honors the per-s condition",
        report.local_ok,
        format!("max ratio {:.6} at s = {}", report.max_local_ratio, report.worst_s),
    ));
    let linear = Schedule::linear_matched(0.1, 0.05, 1.0).unwrap();
    let lin_report = schedule::adiabaticity_report(&linear, 501).unwrap();
    checks.push(Check::flag(
        "matched linear ramp violates it at s = 1/2",
        !lin_report.local_ok && (lin_report.worst_s - 0.5).abs() < 1e-9,
        format!("max ratio {:.3} at s = {}", lin_report.max_local_ratio, lin_report.worst_s),
    ));

    checks.push(cauchy_schwarz_check(1000));
    checks
}

/// Random-partition Cauchy-Schwarz check shared by two suites.
fn cauchy_schwarz_check(samples: usize) -> Check {
    let n_total = 1024usize;
    let eps = 0.05;
    let bound = FRAC_PI_2 / eps * (n_total as f64).sqrt();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut worst_excess = f64::NEG_INFINITY;
    for _ in 0..samples {
        let k = rng.random_range(1..=10usize);
        let mut sizes = vec![1usize; k];
        for _ in 0..n_total - k {
            sizes[rng.random_range(0..k)] += 1;
        }
        let weights: Vec<f64> = (0..k).map(|_| rng.random_range(0.01..1.0)).collect();
        let total: f64 = weights.iter().sum();
        let part =
            PriorPartition::new(sizes.iter().zip(&weights).map(|(&n, &w)| (n, w / total)))
                .unwrap();
        worst_excess = worst_excess.max(schedule::mean_time(&part, eps).unwrap() - bound);
    }
    // Proportional prior attains the bound.
    let part = PriorPartition::new(
        [128usize, 384, 512]
            .iter()
            .map(|&n| (n, n as f64 / n_total as f64)),
    )
    .unwrap();
    let equality_gap = (schedule::mean_time(&part, eps).unwrap() - bound).abs();
    Check::bounded(
        "Cauchy-Schwarz: T_mean <= (pi/2eps) sqrt(N)",
        worst_excess.max(equality_gap),
        1e-9,
        format!("{samples} random partitions; proportional prior gap {equality_gap:.2e}"),
    )
}

fn dynamics_suite() -> Vec<Check> {
    let mut checks = Vec::new();

    // Norm drift and the trace band on a couple of representative runs.
    let mut worst_drift = 0.0f64;
    let mut band_defect = 0.0f64;
    for &eps in &[0.1, 0.02] {
        let h = EffectiveHamiltonian::new(0.125, 1.0).unwrap();
        let sched = Schedule::local(0.125, eps, 1.0).unwrap();
        let run = dynamics::evolve(&h, &sched, 0).unwrap();
        worst_drift = worst_drift.max(run.norm_drift);
        band_defect = band_defect.max((1.0 - 10.0 * eps * eps) - run.min_overlap);
    }
    checks.push(Check::bounded("norm drift", worst_drift, 1e-9, "eps in {0.1, 0.02}"));
    checks.push(Check::bounded(
        "trace overlap stays above 1 - 10 eps^2",
        band_defect,
        0.0,
        "diagnostic band",
    ));

    // Full-space run equals the 2-D reduction.
    let state = model::uniform_state(16, 3).unwrap();
    let sched = Schedule::local(state.marked_amplitude(), 0.05, 1.0).unwrap();
    let h = EffectiveHamiltonian::from_state(&state, 1.0).unwrap();
    let full = dynamics::evolve_full(&state, &sched, 0).unwrap();
    let eff = dynamics::evolve(&h, &sched, 0).unwrap();
    checks.push(Check::bounded(
        "full-space vs 2-D fidelity",
        (full.fidelity - eff.fidelity).abs(),
        1e-8,
        "N = 16",
    ));
    checks.push(Check::bounded(
        "subspace leakage",
        full.max_leakage.unwrap_or(f64::NAN),
        1e-9,
        "N = 16",
    ));

    // Exact time rescaling at matched step counts.
    let a = 0.125;
    let steps = 1 << 15;
    let r1 = dynamics::evolve_fixed(
        &EffectiveHamiltonian::new(a, 1.0).unwrap(),
        &Schedule::local(a, 0.05, 1.0).unwrap(),
        steps,
    )
    .unwrap();
    let r5 = dynamics::evolve_fixed(
        &EffectiveHamiltonian::new(a, 5.0).unwrap(),
        &Schedule::local(a, 0.05, 5.0).unwrap(),
        steps,
    )
    .unwrap();
    let amp_diff = r1
        .final_state
        .iter()
        .zip(&r5.final_state)
        .map(|(x, y)| (x - y).norm())
        .fold(0.0f64, f64::max);
    checks.push(Check::bounded(
        "psi_cH(T/c) = psi_H(T) per amplitude",
        amp_diff,
        1e-10,
        "c = 5, matched steps",
    ));
    checks
}

fn theorems_suite() -> Vec<Check> {
    let mut checks = Vec::new();

    // Theorem 1: only a_m enters; different residual amplitudes, same run.
    let m = 5;
    let uniform = model::uniform_state(16, m).unwrap();
    let mut amps: Vec<f64> = (0..16).map(|i| ((i % 5) + 1) as f64).collect();
    amps[m] = 0.0;
    let norm: f64 = amps.iter().map(|w| w * w).sum();
    let scale = ((1.0f64 - 0.0625) / norm).sqrt();
    for w in amps.iter_mut() {
        *w *= scale;
    }
    amps[m] = 0.25;
    let lopsided = InitialState::new(amps, m).unwrap();
    let sched = Schedule::local(0.25, 0.05, 1.0).unwrap();
    let fid_a = dynamics::evolve_full(&uniform, &sched, 0).unwrap().fidelity;
    let fid_b = dynamics::evolve_full(&lopsided, &sched, 0).unwrap().fidelity;
    let t_a = Schedule::local(uniform.marked_amplitude(), 0.05, 1.0).unwrap();
    let t_b = Schedule::local(lopsided.marked_amplitude(), 0.05, 1.0).unwrap();
    checks.push(Check::flag(
        "Thm 1: equal a_m gives bit-identical T",
        t_a.total_time().to_bits() == t_b.total_time().to_bits(),
        format!("T = {}", t_a.total_time()),
    ));
    checks.push(Check::bounded(
        "Thm 1: equal a_m gives equal fidelity",
        (fid_a - fid_b).abs(),
        1e-8,
        "N = 16 full-space runs",
    ));

    // Theorem 2: the 80/20 worked example and the mean-time bound.
    let part = PriorPartition::new([(500, 0.8), (500, 0.2)]).unwrap();
    let eps = 0.05;
    let uniform_t = schedule::total_time_approx(1.0 / 1000f64.sqrt(), eps, 1.0).unwrap();
    let conditional = schedule::theorem2_time(&part, 0, eps).unwrap() / uniform_t;
    let mean_ratio = schedule::mean_time(&part, eps).unwrap() / uniform_t;
    checks.push(Check::bounded(
        "Thm 2: conditional 80/20 ratio = sqrt(0.5/0.8)",
        (conditional - (0.5f64 / 0.8).sqrt()).abs(),
        1e-12,
        format!("ratio {conditional:.4}"),
    ));
    checks.push(Check::bounded(
        "Thm 2: mean 80/20 ratio",
        (mean_ratio - 0.948_683_298_050_513_8).abs(),
        1e-12,
        format!("ratio {mean_ratio:.4}"),
    ));
    checks.push(cauchy_schwarz_check(200));

    // Theorem 3: exact runtime division and the constant-time construction.
    let mut worst = 0.0f64;
    for &c in &[0.5, 1.0, 2.0, 10.0, 32.0] {
        let t = schedule::total_time(0.1, 0.05, c).unwrap();
        let base = schedule::total_time(0.1, 0.05, 1.0).unwrap();
        worst = worst.max((t * c - base).abs() / base);
    }
    checks.push(Check::bounded("Thm 3: T(c) * c constant", worst, 1e-12, "relative"));
    let mut dev = 0.0f64;
    for &n in &[64.0f64, 256.0, 1024.0] {
        let t = schedule::total_time_approx(1.0 / n.sqrt(), eps, n.sqrt()).unwrap();
        dev = dev.max((t - FRAC_PI_2 / eps).abs() / (FRAC_PI_2 / eps));
    }
    checks.push(Check::bounded(
        "Thm 3: c = sqrt(N) pins T at pi/(2 eps)",
        dev,
        0.02,
        "N in {64, 256, 1024}",
    ));
    checks
}

/// Runs the requested suite(s).
pub fn run_suite(suite: Suite) -> Vec<Check> {
    match suite {
        Suite::Spectral => spectral_suite(),
        Suite::Schedule => schedule_suite(),
        Suite::Dynamics => dynamics_suite(),
        Suite::Theorems => theorems_suite(),
        Suite::All => {
            let mut all = spectral_suite();
            all.extend(schedule_suite());
            all.extend(dynamics_suite());
            all.extend(theorems_suite());
            all
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_suite_passes() {
        for suite in [Suite::Spectral, Suite::Schedule, Suite::Dynamics, Suite::Theorems] {
            for check in run_suite(suite) {
                assert!(
                    check.passed,
                    "{}: measured {} vs tolerance {}",
                    check.name, check.measured, check.tolerance
                );
            }
        }
    }
}
