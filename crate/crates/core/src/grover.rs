//! Discrete Grover iteration, for comparing against the adiabatic runs.
//!
//! One marked item, uniform start. Each Grover iteration rotates the state
//! by `2 theta` in the plane spanned by the marked item and the uniform rest,
//! `theta = arcsin(1/sqrt(N))`. The simulator carries out that rotation step
//! by step; the closed form `sin^2((2k+1) theta)` is kept as a cross-check.

use crate::error::{Error, Result};

/// Result of a Grover run.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GroverRun {
    pub n_total: usize,
    pub iterations: usize,
    pub success_prob: f64,
}

fn check_n(n_total: usize) -> Result<()> {
    if n_total < 2 {
        return Err(Error::OutOfRange {
            name: "n_total",
            value: n_total as f64,
            expected: ">= 2",
        });
    }
    Ok(())
}

/// Runs `iterations` Grover steps by explicit 2-D rotation.
pub fn grover_simulate(n_total: usize, iterations: usize) -> Result<GroverRun> {
    check_n(n_total)?;
    let n = n_total as f64;
    let theta = (1.0 / n).sqrt().asin();
    let (rot_sin, rot_cos) = (2.0 * theta).sin_cos();
    // (marked, rest) overlaps; start at (sin theta, cos theta).
    let mut on_marked = (1.0 / n).sqrt();
    let mut on_rest = (1.0 - 1.0 / n).sqrt();
    for _ in 0..iterations {
        let next_marked = on_marked * rot_cos + on_rest * rot_sin;
        on_rest = on_rest * rot_cos - on_marked * rot_sin;
        on_marked = next_marked;
    }
    Ok(GroverRun {
        n_total,
        iterations,
        // Clamp away the last-ulp overshoot of the rotation products.
        success_prob: (on_marked * on_marked).clamp(0.0, 1.0),
    })
}

/// Closed-form success probability `sin^2((2k+1) arcsin(1/sqrt(N)))`.
pub fn success_probability_closed_form(n_total: usize, iterations: usize) -> Result<f64> {
    check_n(n_total)?;
    let theta = (1.0 / n_total as f64).sqrt().asin();
    let angle = (2 * iterations + 1) as f64 * theta;
    Ok(angle.sin().powi(2).clamp(0.0, 1.0))
}

/// The iteration count maximizing the success probability:
/// `round(pi / (4 arcsin(1/sqrt(N))) - 1/2)`, confirmed by scanning k +- 2.
/// Ties (within 1e-12) break toward fewer oracle calls.
pub fn grover_optimal_iterations(n_total: usize) -> Result<usize> {
    check_n(n_total)?;
    let theta = (1.0 / n_total as f64).sqrt().asin();
    let k0 = (std::f64::consts::FRAC_PI_4 / theta - 0.5).round().max(0.0) as usize;
    let mut best_k = k0.saturating_sub(2);
    let mut best_prob = grover_simulate(n_total, best_k)?.success_prob;
    for k in best_k + 1..=k0 + 2 {
        let prob = grover_simulate(n_total, k)?.success_prob;
        if prob > best_prob + 1e-12 {
            best_prob = prob;
            best_k = k;
        }
    }
    Ok(best_k)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    /// Independent oracle: full N-dimensional state-vector iteration of the
    /// oracle reflection and the inversion about the mean.
    fn state_vector_success(n: usize, iterations: usize) -> f64 {
        let mut amps = vec![1.0 / (n as f64).sqrt(); n];
        for _ in 0..iterations {
            amps[0] = -amps[0];
            let mean = amps.iter().sum::<f64>() / n as f64;
            for a in amps.iter_mut() {
                *a = 2.0 * mean - *a;
            }
        }
        amps[0] * amps[0]
    }

    #[test]
    fn four_items_one_iteration_is_certain() {
        let run = grover_simulate(4, 1).unwrap();
        assert_eq!(run.success_prob, 1.0);
        assert_eq!(success_probability_closed_form(4, 1).unwrap(), 1.0);
        assert_abs_diff_eq!(state_vector_success(4, 1), 1.0, epsilon = 1e-12);
    }

    #[test]
    fn zero_iterations_gives_uniform_overlap() {
        for n in [2usize, 10, 100, 1000] {
            let run = grover_simulate(n, 0).unwrap();
            assert_abs_diff_eq!(run.success_prob, 1.0 / n as f64, epsilon = 1e-15);
        }
    }

    #[test]
    fn hundred_items_seven_iterations() {
        let run = grover_simulate(100, 7).unwrap();
        assert_abs_diff_eq!(run.success_prob, 0.9953444003575992, epsilon = 1e-12);
        assert_abs_diff_eq!(
            run.success_prob,
            success_probability_closed_form(100, 7).unwrap(),
            epsilon = 1e-12
        );
    }

    #[test]
    fn rotation_matches_state_vector_iteration() {
        for n in [2usize, 3, 4, 17, 64, 256] {
            let k_max = 3 * (n as f64).sqrt() as usize;
            for k in 0..=k_max {
                let rot = grover_simulate(n, k).unwrap().success_prob;
                let closed = success_probability_closed_form(n, k).unwrap();
                let full = state_vector_success(n, k);
                assert!((rot - closed).abs() < 1e-12, "n={n} k={k}");
                assert!((rot - full).abs() < 1e-12, "n={n} k={k}");
            }
        }
    }

    #[test]
    fn optimal_iterations_examples() {
        assert_eq!(grover_optimal_iterations(4).unwrap(), 1);
        // N=2 is an exact tie between k=0 and k=1; fewer calls wins.
        assert_eq!(grover_optimal_iterations(2).unwrap(), 0);
        assert_eq!(grover_optimal_iterations(1024).unwrap(), 25);
        assert!(grover_optimal_iterations(1).is_err());
    }

    #[test]
    fn optimal_probability_is_near_certain() {
        for n in [2usize, 5, 16, 100, 777] {
            let k = grover_optimal_iterations(n).unwrap();
            let run = grover_simulate(n, k).unwrap();
            assert!(
                run.success_prob >= 1.0 - 1.0 / n as f64,
                "n={n} k={k} p={}",
                run.success_prob
            );
            // Scanning k +- 2 finds nothing better.
            for other in k.saturating_sub(2)..=k + 2 {
                assert!(
                    grover_simulate(n, other).unwrap().success_prob
                        <= run.success_prob + 1e-12
                );
            }
        }
    }
}
