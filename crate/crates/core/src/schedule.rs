//! Evolution schedules s(t) and the running-time formulas.
//!
//! The local-adiabatic schedule spends time where the gap is small by
//! enforcing `ds/dt = eps * c * g1^2(s)` (the conservative matrix-element
//! bound `|<dH/ds>| <= c` is folded in). Integrating `dt = ds / (eps c g1^2)`
//! gives the closed form
//!
//! ```text
//! t(s) = [ arctan((b/a)(2s-1)) + arctan(b/a) ] / (2 eps a b c)
//! T    = arctan(b/a) / (eps a b c)                  a = a_m, b = sqrt(1-a^2)
//! ```
//!
//! so the running time depends on the initial state only through `a_m`, and
//! `T(c) = T(1)/c` exactly. For `a_m = 1/sqrt(N)` the small-amplitude form
//! `T ~ (pi / 2 eps) sqrt(N)` is the familiar quadratic speedup; a prior
//! partition improves it to `sqrt(n_M/p_M) * pi / (2 eps)`.

use std::f64::consts::FRAC_PI_2;

use crate::error::{Error, Result};
use crate::model::{PriorPartition, MARKED_AMPLITUDE_MAX, MARKED_AMPLITUDE_MIN};
use crate::spectral::EffectiveHamiltonian;

/// Ratio `p_M/n_M` above which the small-amplitude approximation behind
/// Theorem 2's formula is dubious; exceeding it logs a warning.
pub const THEOREM2_RATIO_WARN: f64 = 0.01;

/// How the interpolation parameter advances in time.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ScheduleKind {
    /// Constant-rate ramp `s = t/T`.
    Linear,
    /// Locally adiabatic ramp `ds/dt = eps c g1^2(s)`.
    Local,
}

impl std::fmt::Display for ScheduleKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ScheduleKind::Linear => write!(f, "linear"),
            ScheduleKind::Local => write!(f, "local"),
        }
    }
}

/// A monotone map `s(t)` on `[0, T]` with `s(0) = 0`, `s(T) = 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Schedule {
    kind: ScheduleKind,
    epsilon: f64,
    a_m: f64,
    scale_c: f64,
    total_time: f64,
}

fn check_a_m(a_m: f64) -> Result<()> {
    if !(a_m > MARKED_AMPLITUDE_MIN && a_m < MARKED_AMPLITUDE_MAX) {
        return Err(Error::OutOfRange {
            name: "a_m",
            value: a_m,
            expected: "(0, 1) excluding the endpoint guard bands",
        });
    }
    Ok(())
}

fn check_epsilon(epsilon: f64) -> Result<()> {
    // The adiabatic condition assumes eps << 1; 0.5 is a pragmatic ceiling.
    if !(epsilon > 0.0 && epsilon <= 0.5) {
        return Err(Error::OutOfRange {
            name: "epsilon",
            value: epsilon,
            expected: "(0, 0.5]",
        });
    }
    Ok(())
}

fn check_scale(scale_c: f64) -> Result<()> {
    if !(scale_c > 0.0) || !scale_c.is_finite() {
        return Err(Error::OutOfRange {
            name: "scale_c",
            value: scale_c,
            expected: "positive finite",
        });
    }
    Ok(())
}

/// Time at which the local schedule reaches interpolation value `s`.
///
/// Closed form from integrating `dt = ds / (eps c g1^2(s))`; `t(1)` is the
/// total running time.
pub fn local_time_of_s(a_m: f64, epsilon: f64, scale_c: f64, s: f64) -> Result<f64> {
    check_a_m(a_m)?;
    check_epsilon(epsilon)?;
    check_scale(scale_c)?;
    if !(0.0..=1.0).contains(&s) {
        return Err(Error::OutOfRange {
            name: "s",
            value: s,
            expected: "[0, 1]",
        });
    }
    let b = (1.0 - a_m * a_m).sqrt();
    let ratio = b / a_m;
    let unit = ((ratio * (2.0 * s - 1.0)).atan() + ratio.atan()) / (2.0 * epsilon * a_m * b);
    Ok(unit / scale_c)
}

/// Total running time of the local schedule,
/// `T = arctan(b/a) / (eps a b) / c`.
///
/// Computed as the unit-scale time divided by `c`, so the Theorem 3 identity
/// `T(c) = T(1)/c` holds bit-exactly.
pub fn total_time(a_m: f64, epsilon: f64, scale_c: f64) -> Result<f64> {
    check_a_m(a_m)?;
    check_epsilon(epsilon)?;
    check_scale(scale_c)?;
    let b = (1.0 - a_m * a_m).sqrt();
    let unit = (b / a_m).atan() / (epsilon * a_m * b);
    Ok(unit / scale_c)
}

/// Small-amplitude approximation `T ~ (1/a_m) * pi/(2 eps) / c`.
pub fn total_time_approx(a_m: f64, epsilon: f64, scale_c: f64) -> Result<f64> {
    check_a_m(a_m)?;
    check_epsilon(epsilon)?;
    check_scale(scale_c)?;
    Ok(FRAC_PI_2 / (epsilon * a_m) / scale_c)
}

fn theorem2_amplitude(partition: &PriorPartition, marked_subset: usize) -> Result<f64> {
    let ratio = partition.amplitude_sq(marked_subset)?;
    if ratio > THEOREM2_RATIO_WARN {
        log::warn!(
            "p_M/n_M = {ratio:.4} exceeds {THEOREM2_RATIO_WARN}; the sqrt(n_M/p_M) \
             running-time formula assumes p_M/n_M << 1"
        );
    }
    let a_m = ratio.sqrt();
    check_a_m(a_m)?;
    Ok(a_m)
}

/// Theorem 2 running time `sqrt(n_M/p_M) * pi/(2 eps)`, conditional on the
/// marked item sitting in `marked_subset`.
pub fn theorem2_time(partition: &PriorPartition, marked_subset: usize, epsilon: f64) -> Result<f64> {
    check_epsilon(epsilon)?;
    let a_m = theorem2_amplitude(partition, marked_subset)?;
    Ok(FRAC_PI_2 / (epsilon * a_m))
}

/// Exact variant of [`theorem2_time`]: delegates to the arctan closed form
/// with `a_m = sqrt(p_M/n_M)`.
pub fn theorem2_time_exact(
    partition: &PriorPartition,
    marked_subset: usize,
    epsilon: f64,
) -> Result<f64> {
    check_epsilon(epsilon)?;
    let a_m = theorem2_amplitude(partition, marked_subset)?;
    total_time(a_m, epsilon, 1.0)
}

/// Mean running time over the prior,
/// `T_mean = (pi/(2 eps)) * sum_i sqrt(p_i n_i)`.
///
/// Cauchy-Schwarz bounds it by `(pi/(2 eps)) sqrt(N)`, with equality exactly
/// for the proportional prior `p_i = n_i/N`.
pub fn mean_time(partition: &PriorPartition, epsilon: f64) -> Result<f64> {
    check_epsilon(epsilon)?;
    let sum: f64 = partition
        .subsets()
        .iter()
        .map(|sub| (sub.probability * sub.size as f64).sqrt())
        .sum();
    Ok(FRAC_PI_2 / epsilon * sum)
}

impl Schedule {
    /// The locally adiabatic schedule; `T` from the arctan closed form.
    pub fn local(a_m: f64, epsilon: f64, scale_c: f64) -> Result<Self> {
        Ok(Self {
            kind: ScheduleKind::Local,
            epsilon,
            a_m,
            scale_c,
            total_time: total_time(a_m, epsilon, scale_c)?,
        })
    }

    /// A linear ramp over the same duration as the local schedule, for
    /// side-by-side comparisons.
    pub fn linear_matched(a_m: f64, epsilon: f64, scale_c: f64) -> Result<Self> {
        Ok(Self {
            kind: ScheduleKind::Linear,
            epsilon,
            a_m,
            scale_c,
            total_time: total_time(a_m, epsilon, scale_c)?,
        })
    }

    /// A linear ramp with an explicit duration.
    pub fn linear_with_time(a_m: f64, epsilon: f64, scale_c: f64, total_time: f64) -> Result<Self> {
        check_a_m(a_m)?;
        check_epsilon(epsilon)?;
        check_scale(scale_c)?;
        if !(total_time > 0.0) || !total_time.is_finite() {
            return Err(Error::OutOfRange {
                name: "total_time",
                value: total_time,
                expected: "positive finite",
            });
        }
        Ok(Self {
            kind: ScheduleKind::Linear,
            epsilon,
            a_m,
            scale_c,
            total_time,
        })
    }

    pub fn kind(&self) -> ScheduleKind {
        self.kind
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    pub fn marked_amplitude(&self) -> f64 {
        self.a_m
    }

    pub fn scale(&self) -> f64 {
        self.scale_c
    }

    /// Total evolution time T.
    pub fn total_time(&self) -> f64 {
        self.total_time
    }

    /// The effective Hamiltonian this schedule drives.
    pub fn hamiltonian(&self) -> EffectiveHamiltonian {
        EffectiveHamiltonian::new(self.a_m, self.scale_c)
            .expect("schedule construction validated the parameters")
    }

    /// Interpolation value at time `t` in `[0, T]`.
    ///
    /// Linear ramps return `t/T`; the local schedule inverts its closed form
    /// analytically, `s = 1/2 + (a/2b) tan(eps a b c (2t - T))`, evaluated
    /// from the nearer endpoint so `s(0) = 0` and `s(T) = 1` hold to
    /// rounding. The result is clamped to `[0, 1]`.
    pub fn s_of_t(&self, t: f64) -> Result<f64> {
        if !(0.0..=self.total_time).contains(&t) {
            return Err(Error::OutOfRange {
                name: "t",
                value: t,
                expected: "[0, T]",
            });
        }
        let s = match self.kind {
            ScheduleKind::Linear => t / self.total_time,
            ScheduleKind::Local => {
                let (a, c) = (self.a_m, self.scale_c);
                let b = (1.0 - a * a).sqrt();
                let rate = 2.0 * self.epsilon * a * b * c;
                let phi_end = (b / a).atan();
                // eps a b c (2t - T) = rate*t - phi_end = phi_end - rate*(T-t):
                // pick the form anchored at the nearer endpoint.
                let phi = if t <= 0.5 * self.total_time {
                    rate * t - phi_end
                } else {
                    phi_end - rate * (self.total_time - t)
                };
                0.5 + 0.5 * (a / b) * phi.tan()
            }
        };
        Ok(s.clamp(0.0, 1.0))
    }

    /// Inverse of [`Schedule::s_of_t`]: the time at which the schedule
    /// reaches interpolation value `s`.
    pub fn time_of_s(&self, s: f64) -> Result<f64> {
        if !(0.0..=1.0).contains(&s) {
            return Err(Error::OutOfRange {
                name: "s",
                value: s,
                expected: "[0, 1]",
            });
        }
        match self.kind {
            ScheduleKind::Linear => Ok(s * self.total_time),
            ScheduleKind::Local => local_time_of_s(self.a_m, self.epsilon, self.scale_c, s),
        }
    }

    /// Schedule speed `ds/dt` as a function of `s`.
    pub fn ds_dt_at_s(&self, s: f64) -> Result<f64> {
        if !(0.0..=1.0).contains(&s) {
            return Err(Error::OutOfRange {
                name: "s",
                value: s,
                expected: "[0, 1]",
            });
        }
        match self.kind {
            ScheduleKind::Linear => Ok(1.0 / self.total_time),
            ScheduleKind::Local => {
                Ok(self.epsilon * self.scale_c * self.hamiltonian().gap_sq_unscaled(s))
            }
        }
    }
}

/// Adiabaticity diagnostics for a schedule.
///
/// `ratio <= epsilon_budget` is the global criterion `D_max / g_min^2 <= eps`
/// with `D_max` measured over the whole evolution using the exact transition
/// matrix element. The local (per-s) condition
/// `|ds/dt| <= eps g^2(s) / |<dH/ds>|` is reported separately: the local
/// schedule satisfies it everywhere by construction but deliberately violates
/// the global criterion away from the gap minimum.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AdiabaticityReport {
    /// Minimum gap `c * a_m`.
    pub g_min: f64,
    /// Max over samples of `|ds/dt| * |<dH/ds>|` (exact matrix element).
    pub d_max: f64,
    /// `d_max / g_min^2`, compared against the budget by the global test.
    pub ratio: f64,
    /// The schedule's epsilon.
    pub epsilon_budget: f64,
    /// Whether the global criterion holds.
    pub global_ok: bool,
    /// Whether the per-s condition holds at every sample.
    pub local_ok: bool,
    /// Largest per-s condition ratio observed (<= 1 means satisfied).
    pub max_local_ratio: f64,
    /// Sample location of the largest per-s ratio.
    pub worst_s: f64,
}

/// Evaluates the global and per-s adiabaticity conditions on a uniform
/// `s` grid of `samples` points.
pub fn adiabaticity_report(schedule: &Schedule, samples: usize) -> Result<AdiabaticityReport> {
    if samples < 2 {
        return Err(Error::OutOfRange {
            name: "samples",
            value: samples as f64,
            expected: ">= 2",
        });
    }
    let h = schedule.hamiltonian();
    let eps = schedule.epsilon();
    let g_min = schedule.scale() * schedule.marked_amplitude();

    let mut d_max = 0.0f64;
    let mut max_local_ratio = 0.0f64;
    let mut worst_s = 0.0f64;
    for i in 0..samples {
        let s = i as f64 / (samples - 1) as f64;
        let speed = schedule.ds_dt_at_s(s)?.abs();
        let element = h.dh_ds_element(s)?;
        let gap = h.gap(s)?;
        let d = speed * element;
        d_max = d_max.max(d);
        let local_ratio = d / (eps * gap * gap);
        if local_ratio > max_local_ratio {
            max_local_ratio = local_ratio;
            worst_s = s;
        }
    }
    let ratio = d_max / (g_min * g_min);
    Ok(AdiabaticityReport {
        g_min,
        d_max,
        ratio,
        epsilon_budget: eps,
        global_ok: ratio <= eps * (1.0 + 1e-12),
        local_ok: max_local_ratio <= 1.0 + 1e-12,
        max_local_ratio,
        worst_s,
    })
}
